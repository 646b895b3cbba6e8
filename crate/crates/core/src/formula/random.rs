//! Random syntactically multilinear formulas, for property tests and
//! experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Builder, Formula, GateId};
use crate::field::PrimeField;
use crate::poly::VarId;

/// Shape limits for [`random_formula`] and [`random_alternating`].
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_depth: usize,
    pub max_fanin: usize,
    /// Probability that a leaf is a constant rather than an input.
    pub const_prob: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { max_depth: 5, max_fanin: 3, const_prob: 0.15 }
    }
}

/// A random syntactically multilinear formula over (a subset of) `vars`.
/// Sum and product gates are mixed freely; products split their variable
/// pool into disjoint parts.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, field: PrimeField, vars: &[VarId], shape: RandomShape) -> Formula {
    let mut b = Builder::new(field);
    let root = gen_any(rng, &mut b, vars.to_vec(), shape.max_depth, shape);
    b.finish_formula(root).expect("generated a tree")
}

/// A random syntactically multilinear (ΣΠ)^Δ Σ formula over (a subset of) `vars`.
pub fn random_alternating<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeField,
    vars: &[VarId],
    delta: usize,
    shape: RandomShape,
) -> Formula {
    let mut b = Builder::new(field);
    let root = gen_sum_layer(rng, &mut b, vars.to_vec(), delta, shape);
    b.finish_formula(root).expect("generated a tree")
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, b: &mut Builder, pool: &[VarId], shape: RandomShape) -> GateId {
    if pool.is_empty() || rng.random_bool(shape.const_prob) {
        let c = b.field().elem(rng.random_range(0..b.field().modulus()));
        b.constant(c)
    } else {
        let v = pool[rng.random_range(0..pool.len())];
        b.input(v)
    }
}

/// Splits `pool` into `k` parts, some possibly empty.
fn split<R: Rng + ?Sized>(rng: &mut R, mut pool: Vec<VarId>, k: usize) -> Vec<Vec<VarId>> {
    pool.shuffle(rng);
    let mut parts = vec![Vec::new(); k];
    for v in pool {
        parts[rng.random_range(0..k)].push(v);
    }
    parts
}

fn gen_any<R: Rng + ?Sized>(rng: &mut R, b: &mut Builder, pool: Vec<VarId>, depth: usize, shape: RandomShape) -> GateId {
    if depth == 0 || rng.random_bool(0.2) {
        return leaf(rng, b, &pool, shape);
    }
    let k = rng.random_range(1..=shape.max_fanin);
    if rng.random_bool(0.5) {
        let children = (0..k).map(|_| gen_any(rng, b, pool.clone(), depth - 1, shape)).collect();
        b.sum(children)
    } else {
        let children = split(rng, pool, k).into_iter().map(|part| gen_any(rng, b, part, depth - 1, shape)).collect();
        b.prod(children)
    }
}

fn gen_sum_layer<R: Rng + ?Sized>(rng: &mut R, b: &mut Builder, pool: Vec<VarId>, k: usize, shape: RandomShape) -> GateId {
    let fanin = rng.random_range(1..=shape.max_fanin);
    let children = (0..fanin)
        .map(|_| {
            if k == 0 {
                leaf(rng, b, &pool, shape)
            } else {
                let parts = rng.random_range(1..=shape.max_fanin);
                let kids = split(rng, pool.clone(), parts)
                    .into_iter()
                    .map(|part| gen_sum_layer(rng, b, part, k - 1, shape))
                    .collect();
                b.prod(kids)
            }
        })
        .collect();
    b.sum(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_formulas_are_multilinear() {
        let vars: Vec<VarId> = (0..10).map(VarId::x_from_index).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = random_formula(&mut rng, PrimeField::default(), &vars, RandomShape::default());
            assert!(f.check_syntactic_multilinear().is_multilinear());
            let g = random_alternating(&mut rng, PrimeField::default(), &vars, 2, RandomShape::default());
            assert!(g.check_syntactic_multilinear().is_multilinear());
            assert!(g.is_alternating(2));
        }
    }
}
