//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use immlab::{Fe, PrimeField, VarId};
use rand::Rng;

pub fn fld() -> PrimeField {
    PrimeField::default()
}

/// Determinant by the permutation expansion.
pub fn leibniz_det(field: PrimeField, m: &[Vec<Fe>]) -> Fe {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Fe::ZERO;
    permute(field, m, &mut perm, 0, &mut total);
    total
}

fn permute(field: PrimeField, m: &[Vec<Fe>], perm: &mut Vec<usize>, k: usize, total: &mut Fe) {
    if k == perm.len() {
        let mut term = Fe::ONE;
        for (r, &c) in perm.iter().enumerate() {
            term = field.mul(term, m[r][c]);
        }
        let inversions = (0..perm.len())
            .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        *total = if inversions % 2 == 0 { field.add(*total, term) } else { field.sub(*total, term) };
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(field, m, perm, k + 1, total);
        perm.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect()).collect()
}

/// Largest `k` with a nonzero `k × k` minor.
pub fn minor_rank(field: PrimeField, m: &[Vec<Fe>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<Fe>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                if !leibniz_det(field, &sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// `IMM_d` at a point: the sum of the first row of `M^{(1)} ⋯ M^{(d)}`.
pub fn imm_by_matrices(field: PrimeField, d: usize, value: impl Fn(VarId) -> Fe) -> Fe {
    let mut row = [Fe::ONE, Fe::ZERO];
    for i in 1..=d {
        let mut next = [Fe::ZERO, Fe::ZERO];
        for (v, slot) in next.iter_mut().enumerate() {
            for (u, &r) in row.iter().enumerate() {
                *slot = field.add(*slot, field.mul(r, value(VarId::x(i, u + 1, v + 1))));
            }
        }
        row = next;
    }
    field.add(row[0], row[1])
}

pub fn random_point<R: Rng>(field: PrimeField, vars: impl IntoIterator<Item = VarId>, rng: &mut R) -> HashMap<VarId, Fe> {
    vars.into_iter().map(|v| (v, field.elem(rng.random_range(0..field.modulus())))).collect()
}

pub fn x_vars(n: usize) -> Vec<VarId> {
    (0..n).map(VarId::x_from_index).collect()
}
