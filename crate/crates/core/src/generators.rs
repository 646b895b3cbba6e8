//! Seeded random product terms and simple terms over the matrix variables.
//!
//! Partitions shuffle the variables and cut them into near-equal runs.
//! A factor over at most [`DENSE_LIMIT`] variables keeps each of its
//! multilinear monomials with probability `density`; larger factors draw
//! [`SPARSE_SAMPLES`] random monomials and keep each with that probability.
//! At least one monomial always survives. Coefficients are uniform nonzero.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{Factor, RSimpleTerm, TProductTerm, Term};
use crate::error::{Error, Result};
use crate::field::{Fe, PrimeField};
use crate::poly::{matrix_vars, Monomial, Polynomial, VarId, VarSet};

/// Factors over at most this many variables enumerate all monomials.
pub const DENSE_LIMIT: usize = 8;
/// Candidate monomials drawn for larger factors.
pub const SPARSE_SAMPLES: usize = 256;
/// Simple terms default to a threshold of this many variables per linear.
pub const THRESHOLD_PER_LINEAR: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    TProduct,
    RSimple,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: TermKind,
    pub d: usize,
    /// `t` for product terms, `r` for simple terms.
    pub parts: usize,
    pub density: f64,
    pub seed: u64,
    /// Variables the linears must cover; `None` means `400 r`.
    pub threshold: Option<usize>,
}

impl GeneratorSpec {
    pub fn t_product(d: usize, t: usize, density: f64, seed: u64) -> Self {
        GeneratorSpec { kind: TermKind::TProduct, d, parts: t, density, seed, threshold: None }
    }

    pub fn r_simple(d: usize, r: usize, threshold: Option<usize>, density: f64, seed: u64) -> Self {
        GeneratorSpec { kind: TermKind::RSimple, d, parts: r, density, seed, threshold }
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Generator("d must be at least 1".into()));
        }
        if self.parts == 0 {
            return Err(Error::Generator("t and r must be at least 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Generator(format!("density {} is not in (0, 1]", self.density)));
        }
        Ok(())
    }

    pub fn effective_threshold(&self) -> usize {
        self.threshold.unwrap_or(THRESHOLD_PER_LINEAR * self.parts)
    }

    /// Generates with a generator seeded from `seed`.
    pub fn generate(&self, field: PrimeField) -> Result<Term> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            TermKind::TProduct => gen_t_product(self, field, &mut rng).map(Term::Product),
            TermKind::RSimple => gen_r_simple(self, field, &mut rng).map(Term::Simple),
        }
    }
}

fn nonzero<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Fe {
    field.elem(rng.random_range(1..field.modulus()))
}

/// Random multilinear polynomial with support inside `vars`.
pub fn random_multilinear<R: Rng + ?Sized>(field: PrimeField, vars: &[VarId], density: f64, rng: &mut R) -> Polynomial {
    let mut out = Polynomial::zero(field);
    let n = vars.len();
    let pick = |mask: &dyn Fn(usize) -> bool| Monomial::from_vars((0..n).filter(|&k| mask(k)).map(|k| vars[k])).unwrap();
    if n <= DENSE_LIMIT {
        for bits in 0..1usize << n {
            if rng.random_bool(density) {
                out.add_term(pick(&|k| bits >> k & 1 == 1), nonzero(field, rng));
            }
        }
    } else {
        for _ in 0..SPARSE_SAMPLES {
            let chosen: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let keep = rng.random_bool(density);
            if keep {
                out.add_term(pick(&|k| chosen[k]), nonzero(field, rng));
            }
        }
    }
    if out.is_zero() {
        let chosen: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        out.add_term(pick(&|k| chosen[k]), nonzero(field, rng));
    }
    out
}

/// `c + Σ c_v v` with every `c_v` nonzero.
fn random_linear<R: Rng + ?Sized>(field: PrimeField, vars: &[VarId], rng: &mut R) -> Polynomial {
    let mut out = Polynomial::constant(field, field.elem(rng.random_range(0..field.modulus())));
    for &v in vars {
        out.add_term(Monomial::var(v), nonzero(field, rng));
    }
    out
}

/// Splits `items` into `parts` runs whose lengths differ by at most one.
fn cut<T: Clone>(items: &[T], parts: usize) -> Vec<Vec<T>> {
    let (q, extra) = (items.len() / parts, items.len() % parts);
    let mut out = Vec::with_capacity(parts);
    let mut at = 0;
    for k in 0..parts {
        let len = q + usize::from(k < extra);
        out.push(items[at..at + len].to_vec());
        at += len;
    }
    out
}

fn shuffled<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<VarId> {
    let mut xs: Vec<VarId> = matrix_vars(d).into_iter().collect();
    xs.shuffle(rng);
    xs
}

fn factor(poly: Polynomial, vars: &[VarId]) -> Factor {
    Factor { poly, vars: vars.iter().copied().collect::<VarSet>() }
}

pub fn gen_t_product<R: Rng + ?Sized>(spec: &GeneratorSpec, field: PrimeField, rng: &mut R) -> Result<TProductTerm> {
    spec.validate()?;
    let n = 4 * spec.d;
    if spec.parts > n {
        return Err(Error::TooManyParts { parts: spec.parts, vars: n });
    }
    let xs = shuffled(spec.d, rng);
    let factors = cut(&xs, spec.parts)
        .into_iter()
        .map(|part| factor(random_multilinear(field, &part, spec.density, rng), &part))
        .collect();
    Ok(TProductTerm { factors })
}

pub fn gen_r_simple<R: Rng + ?Sized>(spec: &GeneratorSpec, field: PrimeField, rng: &mut R) -> Result<RSimpleTerm> {
    spec.validate()?;
    let n = 4 * spec.d;
    let threshold = spec.effective_threshold();
    if threshold > n || threshold < spec.parts {
        return Err(Error::ThresholdUnsatisfiable { threshold, vars: n, r: spec.parts });
    }
    let xs = shuffled(spec.d, rng);
    let (covered, rest) = xs.split_at(threshold);
    let linears = cut(covered, spec.parts).into_iter().map(|part| factor(random_linear(field, &part, rng), &part)).collect();
    let tail = (!rest.is_empty()).then(|| factor(random_multilinear(field, rest, spec.density, rng), rest));
    Ok(RSimpleTerm { linears, tail, r: spec.parts, support_threshold: threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::verify_term;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn t_equal_to_variable_count_gives_univariate_factors() {
        let spec = GeneratorSpec::t_product(3, 12, 1.0, 5);
        let Term::Product(t) = spec.generate(fld()).unwrap() else { panic!() };
        assert_eq!(t.t(), 12);
        assert!(t.factors.iter().all(|f| f.vars.len() == 1 && f.poly.support().len() <= 1));
        assert!(matches!(
            GeneratorSpec::t_product(3, 13, 1.0, 5).generate(fld()),
            Err(Error::TooManyParts { parts: 13, vars: 12 })
        ));
    }

    #[test]
    fn single_part_covers_everything() {
        let spec = GeneratorSpec::t_product(2, 1, 1.0, 9);
        let Term::Product(t) = spec.generate(fld()).unwrap() else { panic!() };
        assert_eq!(t.factors[0].vars, matrix_vars(2));
        // dense over 8 variables
        assert_eq!(t.factors[0].poly.len(), 256);
    }

    #[test]
    fn minimal_simple_term() {
        let spec = GeneratorSpec::r_simple(4, 1, Some(4), 0.5, 1);
        let Term::Simple(s) = spec.generate(fld()).unwrap() else { panic!() };
        assert_eq!(s.r_prime(), 1);
        assert_eq!(s.covered().len(), 4);
        assert_eq!(s.tail.as_ref().unwrap().vars.len(), 12);
        assert!(verify_term(&Term::Simple(s), &matrix_vars(4)).ok());
        let err = GeneratorSpec::r_simple(4, 1, None, 0.5, 1).generate(fld());
        assert!(matches!(err, Err(Error::ThresholdUnsatisfiable { threshold: 400, .. })));
    }

    #[test]
    fn seeds_determine_terms() {
        let spec = GeneratorSpec::t_product(6, 4, 0.3, 77);
        assert_eq!(spec.generate(fld()).unwrap(), spec.generate(fld()).unwrap());
        let other = GeneratorSpec { seed: 78, ..spec.clone() };
        assert_ne!(spec.generate(fld()).unwrap(), other.generate(fld()).unwrap());
    }

    #[test]
    fn bad_density_rejected() {
        assert!(GeneratorSpec::t_product(2, 2, 0.0, 1).generate(fld()).is_err());
        assert!(GeneratorSpec::t_product(2, 2, 1.5, 1).generate(fld()).is_err());
    }
}
