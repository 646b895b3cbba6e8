//! The iterated matrix multiplication polynomial and its formulas.
//!
//! `IMM_d` is the sum of the two entries in the first row of the product of
//! `d` symbolic 2×2 matrices, whose layer-`i` entry `(u, v)` is the variable
//! `x[i][u][v]`. Expanding the product gives one monomial per path
//! `1 = π(0), π(1), …, π(d)` in `{1,2}`:
//! `x[1][π(0)][π(1)] · x[2][π(1)][π(2)] ⋯ x[d][π(d−1)][π(d)]`.
//!
//! The divide-and-conquer construction splits a run of layers into
//! `⌈len^{1/k}⌉` near-equal blocks and writes each entry of the run's
//! product as a sum, over the intermediate indices, of products of block
//! entries, recursing with one product layer less. At product depth 1 an
//! entry is expanded directly as a sum of path monomials.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::formula::{Builder, Circuit, Formula, GateId};
use crate::field::PrimeField;
use crate::poly::{Monomial, MulMode, Polynomial, VarId};

/// Default largest `d` for which [`imm_polynomial`] expands the `2^d` terms.
pub const DEFAULT_IMM_CAP: usize = 20;

/// Default gate budget for [`build_dc_formula`] and [`build_dc_circuit`].
pub const DEFAULT_SIZE_BUDGET: u128 = 1 << 22;

/// `IMM_d` as an explicit polynomial, for `1 ≤ d ≤ DEFAULT_IMM_CAP`.
pub fn imm_polynomial(field: PrimeField, d: usize) -> Result<Polynomial> {
    imm_polynomial_capped(field, d, DEFAULT_IMM_CAP)
}

pub fn imm_polynomial_capped(field: PrimeField, d: usize, cap: usize) -> Result<Polynomial> {
    if d == 0 || d > cap {
        return Err(Error::CapExceeded { d, cap });
    }
    block_entry_polynomial(field, 1, d, 1, &[1, 2])
}

/// Sum over `v ∈ ends` of entry `(u, v)` of `M^(lo) ⋯ M^(hi)`.
pub fn block_entry_polynomial(field: PrimeField, lo: usize, hi: usize, u: usize, ends: &[usize]) -> Result<Polynomial> {
    let len = hi + 1 - lo;
    let mut terms = Vec::with_capacity(ends.len() << (len - 1));
    for_each_path(lo, hi, u, ends, |path| {
        let vars = path_vars(lo, u, path).collect();
        terms.push((Monomial::from_sorted(vars), crate::field::Fe::ONE));
    });
    Ok(Polynomial::from_terms(field, terms))
}

/// Calls `f` with `(π(lo), …, π(hi))` for every index sequence starting
/// after `π(lo−1) = u` and ending in `ends`, in lexicographic order.
fn for_each_path<F: FnMut(&[usize])>(lo: usize, hi: usize, _u: usize, ends: &[usize], mut f: F) {
    let len = hi + 1 - lo;
    let mut path = vec![1usize; len];
    for mask in 0u64..(1u64 << (len - 1)) {
        for (j, slot) in path[..len - 1].iter_mut().enumerate() {
            *slot = 1 + ((mask >> (len - 2 - j)) & 1) as usize;
        }
        for &v in ends {
            path[len - 1] = v;
            f(&path);
        }
    }
}

fn path_vars(lo: usize, u: usize, path: &[usize]) -> impl Iterator<Item = VarId> + '_ {
    path.iter().enumerate().map(move |(j, &to)| {
        let from = if j == 0 { u } else { path[j - 1] };
        VarId::x(lo + j, from, to)
    })
}

/// One labeled edge of the layered graph: from vertex `from` of layer
/// `layer − 1` to vertex `to` of layer `layer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub layer: usize,
    pub from: usize,
    pub to: usize,
    pub label: VarId,
}

/// The layered graph with layers `0..=d` of two vertices each and all four
/// edges between consecutive layers; `IMM_d` is the sum over paths from
/// vertex 1 of layer 0 to layer `d` of the product of edge labels.
#[derive(Clone, Debug)]
pub struct LabeledDag {
    d: usize,
    edges: Vec<Edge>,
}

pub fn imm_graph(d: usize) -> LabeledDag {
    let mut edges = Vec::with_capacity(4 * d);
    for layer in 1..=d {
        for from in 1..=2 {
            for to in 1..=2 {
                edges.push(Edge { layer, from, to, label: VarId::x(layer, from, to) });
            }
        }
    }
    LabeledDag { d, edges }
}

impl LabeledDag {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn layer_count(&self) -> usize {
        self.d + 1
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, layer: usize, from: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.layer == layer + 1 && e.from == from)
    }

    /// Sum of label products over all source paths, by depth-first search.
    pub fn path_sum(&self, field: PrimeField) -> Polynomial {
        fn walk(g: &LabeledDag, layer: usize, at: usize, acc: &mut Vec<VarId>, out: &mut Vec<Monomial>) {
            if layer == g.d {
                out.push(Monomial::from_vars(acc.iter().copied()).expect("one variable per layer"));
                return;
            }
            for e in g.out_edges(layer, at) {
                acc.push(e.label);
                walk(g, layer + 1, e.to, acc, out);
                acc.pop();
            }
        }
        let mut monos = Vec::new();
        walk(self, 0, 1, &mut Vec::new(), &mut monos);
        Polynomial::from_terms(field, monos.into_iter().map(|m| (m, crate::field::Fe::ONE)))
    }
}

/// Contiguous blocks of layers, as inclusive 1-based ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockScheme {
    pub d: usize,
    pub t: usize,
    pub blocks: Vec<(usize, usize)>,
}

/// `t` near-equal contiguous blocks of `lo..=hi`; the first `len mod t`
/// blocks are one longer.
fn split_blocks(lo: usize, hi: usize, t: usize) -> Vec<(usize, usize)> {
    let len = hi + 1 - lo;
    let (q, r) = (len / t, len % t);
    let mut out = Vec::with_capacity(t);
    let mut start = lo;
    for b in 0..t {
        let size = q + usize::from(b < r);
        out.push((start, start + size - 1));
        start += size;
    }
    out
}

pub fn self_reduction_blocks(d: usize, t: usize) -> Result<BlockScheme> {
    if t == 0 || t > d {
        return Err(Error::Params(format!("block count {t} must lie in 1..={d}")));
    }
    Ok(BlockScheme { d, t, blocks: split_blocks(1, d, t) })
}

impl BlockScheme {
    /// Expands `Σ_{u_1..u_t} P^(1)_{1,u_1} P^(2)_{u_1,u_2} ⋯ P^(t)_{u_{t−1},u_t}`
    /// with each block entry computed independently.
    pub fn substitute(&self, field: PrimeField) -> Result<Polynomial> {
        let mut row = [Polynomial::one(field), Polynomial::zero(field)];
        for &(lo, hi) in &self.blocks {
            let mut next = [Polynomial::zero(field), Polynomial::zero(field)];
            for (u, ru) in row.iter().enumerate() {
                if ru.is_zero() {
                    continue;
                }
                for (v, slot) in next.iter_mut().enumerate() {
                    let p = block_entry_polynomial(field, lo, hi, u + 1, &[v + 1])?;
                    *slot = slot.add(&ru.mul(&p, MulMode::Strict)?);
                }
            }
            row = next;
        }
        Ok(row[0].add(&row[1]))
    }
}

/// Smallest `t ≥ 1` with `t^k ≥ n`.
pub fn ceil_root(n: usize, k: usize) -> usize {
    assert!(k >= 1);
    if n <= 1 {
        return 1;
    }
    let mut t = (n as f64).powf(1.0 / k as f64).round().max(1.0) as usize;
    let reaches = |t: usize| (t as u128).checked_pow(k as u32).is_none_or(|p| p >= n as u128);
    while t > 1 && reaches(t - 1) {
        t -= 1;
    }
    while !reaches(t) {
        t += 1;
    }
    t
}

fn check_depth(d: usize, delta: usize) -> Result<()> {
    if delta == 0 || d == 0 || (delta < usize::BITS as usize && (1usize << delta) > d) || delta >= usize::BITS as usize {
        return Err(Error::BadDepth { d, delta });
    }
    Ok(())
}

/// Gate counts of the divide-and-conquer constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DcSize {
    pub formula_size: u128,
    pub formula_leaves: u128,
    pub circuit_size: u128,
    pub circuit_leaves: u128,
}

/// Counts gates without building anything.
pub fn dc_size(d: usize, delta: usize) -> Result<DcSize> {
    check_depth(d, delta)?;
    let (formula_size, formula_leaves) = formula_count(d, delta, 2);
    let mut seen = HashSet::new();
    let (circuit_size, circuit_leaves) = circuit_count(1, d, 1, &[1, 2], delta, &mut seen);
    Ok(DcSize { formula_size, formula_leaves, circuit_size, circuit_leaves })
}

fn formula_count(len: usize, k: usize, ends: u128) -> (u128, u128) {
    if k == 1 {
        let paths = ends << (len - 1);
        return (1 + paths * (1 + len as u128), paths * len as u128);
    }
    let t = ceil_root(len, k);
    let tuples = ends << (t - 1);
    let (mut size, mut leaves) = (1u128, 0u128);
    for (lo, hi) in split_blocks(1, len, t) {
        let (s, l) = formula_count(hi + 1 - lo, k - 1, 1);
        size += s;
        leaves += l;
    }
    (1 + tuples * size, tuples * leaves)
}

type EntryKey = (usize, usize, usize, usize, usize);

fn circuit_count(lo: usize, hi: usize, u: usize, ends: &[usize], k: usize, seen: &mut HashSet<EntryKey>) -> (u128, u128) {
    let len = hi + 1 - lo;
    if k == 1 {
        let paths = (ends.len() as u128) << (len - 1);
        return (1 + paths * (1 + len as u128), paths * len as u128);
    }
    let blocks = split_blocks(lo, hi, ceil_root(len, k));
    let tuples = (ends.len() as u128) << (blocks.len() - 1);
    let (mut size, mut leaves) = (1 + tuples, 0u128);
    for (b, &(blo, bhi)) in blocks.iter().enumerate() {
        let starts: &[usize] = if b == 0 { &[u][..] } else { &[1, 2] };
        let stops: &[usize] = if b + 1 == blocks.len() { ends } else { &[1, 2] };
        for &s in starts {
            for &e in stops {
                if seen.insert((blo, bhi, s, e, k - 1)) {
                    let (gs, gl) = circuit_count(blo, bhi, s, &[e], k - 1, seen);
                    size += gs;
                    leaves += gl;
                }
            }
        }
    }
    (size, leaves)
}

struct DcBuilder {
    b: Builder,
    memo: Option<HashMap<EntryKey, GateId>>,
}

impl DcBuilder {
    /// Sum over `v ∈ ends` of entry `(u, v)` of the product of layers
    /// `lo..=hi`, at product depth `k`.
    fn entry(&mut self, lo: usize, hi: usize, u: usize, ends: &[usize], k: usize) -> GateId {
        if let ([v], Some(memo)) = (ends, &self.memo) {
            if let Some(&g) = memo.get(&(lo, hi, u, *v, k)) {
                return g;
            }
        }
        let gate = if k == 1 { self.expand(lo, hi, u, ends) } else { self.split(lo, hi, u, ends, k) };
        if let ([v], Some(memo)) = (ends, &mut self.memo) {
            memo.insert((lo, hi, u, *v, k), gate);
        }
        gate
    }

    fn expand(&mut self, lo: usize, hi: usize, u: usize, ends: &[usize]) -> GateId {
        let mut prods = Vec::new();
        let b = &mut self.b;
        for_each_path(lo, hi, u, ends, |path| {
            let leaves = path_vars(lo, u, path).map(|v| b.input(v)).collect();
            prods.push(b.prod(leaves));
        });
        self.b.sum(prods)
    }

    fn split(&mut self, lo: usize, hi: usize, u: usize, ends: &[usize], k: usize) -> GateId {
        let blocks = split_blocks(lo, hi, ceil_root(hi + 1 - lo, k));
        let t = blocks.len();
        let mut prods = Vec::new();
        // idx[b] is the index after block b; idx[t-1] ranges over `ends`.
        let mut idx = vec![1usize; t];
        for mask in 0u64..(1u64 << (t - 1)) {
            for (j, slot) in idx[..t - 1].iter_mut().enumerate() {
                *slot = 1 + ((mask >> (t - 2 - j)) & 1) as usize;
            }
            for &v in ends {
                idx[t - 1] = v;
                let children = blocks
                    .iter()
                    .enumerate()
                    .map(|(bi, &(blo, bhi))| {
                        let from = if bi == 0 { u } else { idx[bi - 1] };
                        self.entry(blo, bhi, from, &[idx[bi]], k - 1)
                    })
                    .collect();
                prods.push(self.b.prod(children));
            }
        }
        self.b.sum(prods)
    }
}

/// The (ΣΠ)^Δ formula for `IMM_d`, for `1 ≤ Δ ≤ log₂ d`.
pub fn build_dc_formula(field: PrimeField, d: usize, delta: usize) -> Result<Formula> {
    build_dc_formula_with_budget(field, d, delta, DEFAULT_SIZE_BUDGET)
}

pub fn build_dc_formula_with_budget(field: PrimeField, d: usize, delta: usize, budget: u128) -> Result<Formula> {
    let size = dc_size(d, delta)?.formula_size;
    if size > budget {
        return Err(Error::SizeBudget { size, budget });
    }
    let mut db = DcBuilder { b: Builder::new(field), memo: None };
    let root = db.entry(1, d, 1, &[1, 2], delta);
    db.b.finish_formula(root)
}

/// As [`build_dc_formula`], with every block entry built once and shared.
pub fn build_dc_circuit(field: PrimeField, d: usize, delta: usize) -> Result<Circuit> {
    build_dc_circuit_with_budget(field, d, delta, DEFAULT_SIZE_BUDGET)
}

pub fn build_dc_circuit_with_budget(field: PrimeField, d: usize, delta: usize, budget: u128) -> Result<Circuit> {
    let size = dc_size(d, delta)?.circuit_size;
    if size > budget {
        return Err(Error::SizeBudget { size, budget });
    }
    let mut db = DcBuilder { b: Builder::new(field), memo: Some(HashMap::new()) };
    let root = db.entry(1, d, 1, &[1, 2], delta);
    db.b.finish_circuit(root)
}

/// One row of [`size_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SizeRow {
    pub d: usize,
    pub delta: usize,
    pub formula_size: u128,
    pub circuit_size: u128,
    pub leaf_count: u128,
}

/// Sizes for every `(d, Δ)` pair with `1 ≤ Δ ≤ log₂ d`, in input order;
/// other pairs are skipped.
pub fn size_table(d_list: &[usize], delta_list: &[usize]) -> Vec<SizeRow> {
    let mut rows = Vec::new();
    for &d in d_list {
        for &delta in delta_list {
            if let Ok(s) = dc_size(d, delta) {
                rows.push(SizeRow {
                    d,
                    delta,
                    formula_size: s.formula_size,
                    circuit_size: s.circuit_size,
                    leaf_count: s.formula_leaves,
                });
            }
        }
    }
    rows
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn small_imm() {
        let p1 = imm_polynomial(fld(), 1).unwrap();
        assert_eq!(p1.to_string(), "1*x[1][1][1] + 1*x[1][1][2]");
        let p2 = imm_polynomial(fld(), 2).unwrap();
        assert_eq!(p2.len(), 4);
        assert!(imm_polynomial(fld(), 21).is_err());
        assert!(imm_polynomial(fld(), 0).is_err());
    }

    #[test]
    fn ceil_roots() {
        assert_eq!(ceil_root(1 << 20, 2), 1024);
        assert_eq!(ceil_root(8, 3), 2);
        assert_eq!(ceil_root(9, 3), 3);
        assert_eq!(ceil_root(7, 1), 7);
        assert_eq!(ceil_root(1, 5), 1);
        assert_eq!(ceil_root(64, 6), 2);
        assert_eq!(ceil_root(65, 6), 3);
    }

    #[test]
    fn blocks_are_near_equal() {
        let s = self_reduction_blocks(7, 3).unwrap();
        assert_eq!(s.blocks, vec![(1, 3), (4, 5), (6, 7)]);
        assert!(self_reduction_blocks(3, 4).is_err());
        assert!(self_reduction_blocks(3, 0).is_err());
    }

    #[test]
    fn smallest_formula_has_thirteen_gates() {
        let f = build_dc_formula(fld(), 2, 1).unwrap();
        assert_eq!(f.size(), 13);
        assert_eq!(f.leaf_count(), 8);
        let c = build_dc_circuit(fld(), 2, 1).unwrap();
        assert_eq!(c.size(), 13);
        let s = dc_size(2, 1).unwrap();
        assert_eq!((s.formula_size, s.formula_leaves, s.circuit_size, s.circuit_leaves), (13, 8, 13, 8));
    }

    #[test]
    fn counts_match_built_sizes() {
        for d in 2..=12 {
            for delta in 1..=4 {
                let Ok(s) = dc_size(d, delta) else { continue };
                let f = build_dc_formula(fld(), d, delta).unwrap();
                let c = build_dc_circuit(fld(), d, delta).unwrap();
                assert_eq!(f.size() as u128, s.formula_size, "d={d} Δ={delta}");
                assert_eq!(f.leaf_count() as u128, s.formula_leaves);
                assert_eq!(c.size() as u128, s.circuit_size, "d={d} Δ={delta}");
                assert_eq!(c.leaf_count() as u128, s.circuit_leaves);
                assert_eq!(f.product_depth(), delta);
                assert_eq!(c.product_depth(), delta);
            }
        }
    }

    #[test]
    fn bad_depths() {
        assert_eq!(build_dc_formula(fld(), 4, 3).unwrap_err(), Error::BadDepth { d: 4, delta: 3 });
        assert!(build_dc_formula(fld(), 4, 0).is_err());
        assert!(build_dc_formula(fld(), 1, 1).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (f64::from(1 << k), f64::from(1 << (2 * k)))).collect();
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
    }
}
