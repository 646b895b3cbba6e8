//! Partial derivative matrices and their rank over a prime field.
//!
//! For a multilinear `g` over disjoint variable sets `Y` and `Z`, the matrix
//! has one row per multilinear monomial in `Y`, one column per monomial in
//! `Z`, and entry `(m1, m2)` equal to the coefficient of `m1·m2` in `g`.
//!
//! Only the active variables (those of `Y` or `Z` that occur in `g`) index
//! the matrix; a monomial containing an absent variable has an all-zero row
//! or column, so the rank is unchanged. Row `r` stands for the monomial whose
//! `j`-th active `Y` variable (in `VarId` order) is present iff bit `j` of
//! `r` is set; columns likewise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Fe, PrimeField, CROSS_CHECK_PRIME, DEFAULT_PRIME};
use crate::poly::{Polynomial, VarId, VarSet};

/// Default cap on `rows × cols`.
pub const DEFAULT_ENTRY_BUDGET: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    field: PrimeField,
    y_vars: Vec<VarId>,
    z_vars: Vec<VarId>,
    entries: Vec<Fe>,
}

impl CoeffMatrix {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn y_vars(&self) -> &[VarId] {
        &self.y_vars
    }

    pub fn z_vars(&self) -> &[VarId] {
        &self.z_vars
    }

    pub fn rows(&self) -> usize {
        1 << self.y_vars.len()
    }

    pub fn cols(&self) -> usize {
        1 << self.z_vars.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols() + c]
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        let c = self.cols();
        &self.entries[r * c..(r + 1) * c]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        matrix_rank(self.field, self.rows(), self.cols(), &self.entries)
    }

    /// Rank, recomputed modulo a second prime from the symmetric integer
    /// lift of the entries; errors if the two ranks differ.
    pub fn rank_cross_checked(&self, second: PrimeField) -> Result<usize> {
        let first = self.rank();
        let lifted: Vec<Fe> = self.entries.iter().map(|&e| second.from_i64(self.field.to_signed(e))).collect();
        let other = matrix_rank(second, self.rows(), self.cols(), &lifted);
        if first != other {
            return Err(Error::PrimeDisagreement {
                p1: self.field.modulus(),
                first,
                p2: second.modulus(),
                second: other,
            });
        }
        Ok(first)
    }
}

pub fn coefficient_matrix(g: &Polynomial, y: &VarSet, z: &VarSet) -> Result<CoeffMatrix> {
    coefficient_matrix_with_budget(g, y, z, DEFAULT_ENTRY_BUDGET)
}

pub fn coefficient_matrix_with_budget(g: &Polynomial, y: &VarSet, z: &VarSet, budget: usize) -> Result<CoeffMatrix> {
    if let Some(&var) = y.intersection(z).next() {
        return Err(Error::Overlap { var });
    }
    let supp = g.support();
    if let Some(&var) = supp.iter().find(|v| !y.contains(v) && !z.contains(v)) {
        return Err(Error::SupportLeak { var });
    }
    let y_vars: Vec<VarId> = supp.iter().copied().filter(|v| y.contains(v)).collect();
    let z_vars: Vec<VarId> = supp.iter().copied().filter(|v| z.contains(v)).collect();
    let too_large = || Error::MatrixTooLarge { rows: 1usize.wrapping_shl(y_vars.len() as u32), cols: 1usize.wrapping_shl(z_vars.len() as u32), budget };
    if y_vars.len() + z_vars.len() >= usize::BITS as usize - 1 {
        return Err(too_large());
    }
    let (rows, cols) = (1usize << y_vars.len(), 1usize << z_vars.len());
    if rows.saturating_mul(cols) > budget {
        return Err(too_large());
    }
    let mut entries = vec![Fe::ZERO; rows * cols];
    for (m, c) in g.terms() {
        let (mut r, mut col) = (0usize, 0usize);
        for v in m.vars() {
            if let Ok(j) = y_vars.binary_search(v) {
                r |= 1 << j;
            } else {
                let j = z_vars.binary_search(v).expect("support is covered");
                col |= 1 << j;
            }
        }
        entries[r * cols + col] = c;
    }
    Ok(CoeffMatrix { field: g.field(), y_vars, z_vars, entries })
}

/// Rank of a row-major `rows × cols` matrix.
pub fn matrix_rank(field: PrimeField, rows: usize, cols: usize, entries: &[Fe]) -> usize {
    assert_eq!(entries.len(), rows * cols);
    if field.modulus() == 2 {
        return rank_gf2(rows, cols, entries);
    }
    let mut m: Vec<Vec<Fe>> = entries.chunks(cols.max(1)).take(rows).map(|r| r.to_vec()).collect();
    if cols == 0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]);
        for e in &mut m[rank][col..] {
            *e = field.mul(*e, inv);
        }
        let (top, bottom) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom {
            let f = row[col];
            if f.is_zero() {
                continue;
            }
            for (e, &p) in row[col..].iter_mut().zip(&prow[col..]) {
                *e = field.sub(*e, field.mul(f, p));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Elimination over GF(2) on rows packed into 64-bit words.
fn rank_gf2(rows: usize, cols: usize, entries: &[Fe]) -> usize {
    let words = cols.div_ceil(64);
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut w = vec![0u64; words];
            for c in 0..cols {
                if entries[r * cols + c].0 & 1 == 1 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows).find(|&r| m[r][wi] & bit != 0) else { continue };
        m.swap(rank, pivot);
        let (top, bottom) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom {
            if row[wi] & bit != 0 {
                for (a, b) in row[wi..].iter_mut().zip(&prow[wi..]) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of `g` with respect to `(Y, Z)`, plus the `2^m` yardstick.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub y_active: usize,
    pub z_active: usize,
    /// `min(|Y|, |Z|)` of the declared sets.
    pub m: usize,
    pub bound_2m: u128,
    pub full_rank: bool,
    pub prime: u64,
    pub cross_check_prime: Option<u64>,
}

/// The prime used to confirm ranks computed over `field`.
pub fn second_prime(field: PrimeField) -> PrimeField {
    let p = if field.modulus() == CROSS_CHECK_PRIME { DEFAULT_PRIME } else { CROSS_CHECK_PRIME };
    PrimeField::new(p).expect("built-in primes")
}

/// Builds the matrix and reports its rank; with `cross_check`, the rank is
/// confirmed modulo [`second_prime`].
pub fn rank_report(g: &Polynomial, y: &VarSet, z: &VarSet, cross_check: bool) -> Result<RankReport> {
    let mat = coefficient_matrix(g, y, z)?;
    let second = second_prime(g.field());
    let rank = if cross_check { mat.rank_cross_checked(second)? } else { mat.rank() };
    let m = y.len().min(z.len());
    let bound_2m = 1u128 << m.min(127);
    Ok(RankReport {
        rank,
        y_active: mat.y_vars.len(),
        z_active: mat.z_vars.len(),
        m,
        bound_2m,
        full_rank: rank as u128 == bound_2m,
        prime: g.field().modulus(),
        cross_check_prime: cross_check.then_some(second.modulus()),
    })
}

/// Product of the factor ranks. The factors' variable sets must be pairwise
/// disjoint. In debug builds the result is checked against the rank of the
/// expanded product when that is small enough.
pub fn rank_of_product(factors: &[(Polynomial, VarSet, VarSet)]) -> Result<u128> {
    let mut seen = VarSet::new();
    for (_, y, z) in factors {
        for &v in y.iter().chain(z) {
            if !seen.insert(v) {
                return Err(Error::Overlap { var: v });
            }
        }
    }
    let mut total: u128 = 1;
    for (g, y, z) in factors {
        total = total.saturating_mul(coefficient_matrix(g, y, z)?.rank() as u128);
    }
    #[cfg(debug_assertions)]
    if let Some(field) = factors.first().map(|f| f.0.field()) {
        let terms: u128 = factors.iter().map(|f| f.0.len() as u128).product();
        let vars: usize = factors.iter().map(|f| f.0.support().len()).sum();
        if terms <= 1 << 14 && vars <= 14 {
            let product = Polynomial::product(field, factors.iter().map(|f| &f.0))?;
            let (ys, zs): (VarSet, VarSet) = factors.iter().fold((VarSet::new(), VarSet::new()), |(mut a, mut b), f| {
                a.extend(f.1.iter().copied());
                b.extend(f.2.iter().copied());
                (a, b)
            });
            let direct = coefficient_matrix(&product, &ys, &zs)?.rank() as u128;
            debug_assert_eq!(direct, total, "rank is multiplicative over disjoint factors");
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(fld(), s).unwrap()
    }

    fn yz(n: usize) -> (VarSet, VarSet) {
        ((1..=n).map(VarId::y).collect(), (1..=n).map(VarId::z).collect())
    }

    #[test]
    fn tiny_matrices() {
        let (y, z) = yz(1);
        let m = coefficient_matrix(&p("y[1]*z[1]"), &y, &z).unwrap();
        assert_eq!(m.to_rows(), vec![vec![Fe(0), Fe(0)], vec![Fe(0), Fe(1)]]);
        assert_eq!(m.rank(), 1);
        let m = coefficient_matrix(&p("1 + y[1]*z[1]"), &y, &z).unwrap();
        assert_eq!(m.to_rows(), vec![vec![Fe(1), Fe(0)], vec![Fe(0), Fe(1)]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(coefficient_matrix(&Polynomial::zero(fld()), &y, &z).unwrap().rank(), 0);
    }

    #[test]
    fn leaks_and_overlaps_are_rejected() {
        let (y, z) = yz(1);
        assert!(matches!(coefficient_matrix(&p("y[2]"), &y, &z), Err(Error::SupportLeak { .. })));
        let both: VarSet = [VarId::y(1)].into();
        assert!(matches!(coefficient_matrix(&p("y[1]"), &both, &both), Err(Error::Overlap { .. })));
        assert!(matches!(
            coefficient_matrix_with_budget(&p("y[1]*z[1]"), &y, &z, 3),
            Err(Error::MatrixTooLarge { rows: 2, cols: 2, budget: 3 })
        ));
    }

    fn naive_gf2_rank(rows: usize, cols: usize, entries: &[Fe]) -> usize {
        let mut m: Vec<Vec<bool>> = entries.chunks(cols).map(|r| r.iter().map(|e| e.0 & 1 == 1).collect()).collect();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows).find(|&r| m[r][c]) {
                m.swap(rank, p);
                for r in 0..rows {
                    if r != rank && m[r][c] {
                        let pivot = m[rank].clone();
                        m[r].iter_mut().zip(pivot).for_each(|(a, b)| *a ^= b);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn packed_gf2_matches_naive() {
        let f2 = PrimeField::new(2).unwrap();
        for (rows, cols, seed) in [(70, 130, 1usize), (64, 64, 2), (5, 200, 3), (129, 65, 4)] {
            let entries: Vec<Fe> = (0..rows * cols).map(|i| Fe(u32::from((i * 7919 + seed * 31 + i / 13) % 5 < 2))).collect();
            assert_eq!(matrix_rank(f2, rows, cols, &entries), naive_gf2_rank(rows, cols, &entries));
        }
        let identity: Vec<Fe> = (0..100 * 100).map(|i| Fe(u32::from(i % 101 == 0))).collect();
        assert_eq!(matrix_rank(f2, 100, 100, &identity), 100);
    }

    #[test]
    fn product_ranks() {
        let f = vec![
            (p("y[1]*z[1]"), VarSet::from([VarId::y(1)]), VarSet::from([VarId::z(1)])),
            (p("y[2] + z[2]"), VarSet::from([VarId::y(2)]), VarSet::from([VarId::z(2)])),
        ];
        assert_eq!(rank_of_product(&f).unwrap(), 2);
        let g: Vec<_> = (1..=4)
            .map(|i| (p(&format!("1 + y[{i}]*z[{i}]")), VarSet::from([VarId::y(i)]), VarSet::from([VarId::z(i)])))
            .collect();
        assert_eq!(rank_of_product(&g).unwrap(), 16);
        let clash = vec![f[0].clone(), f[0].clone()];
        assert!(matches!(rank_of_product(&clash), Err(Error::Overlap { .. })));
    }

    #[test]
    fn cross_check_agrees_on_small_integers() {
        let (y, z) = yz(2);
        let g = p("1 + 2*y[1]*z[1] - 3*y[2]*z[1] + 5*y[1]*y[2]*z[2]");
        let m = coefficient_matrix(&g, &y, &z).unwrap();
        assert_eq!(m.rank_cross_checked(PrimeField::new(CROSS_CHECK_PRIME).unwrap()).unwrap(), m.rank());
        let r = rank_report(&g, &y, &z, true).unwrap();
        assert_eq!(r.m, 2);
        assert_eq!(r.bound_2m, 4);
    }
}
