//! Semantics and rewrites: evaluation, normalization to alternating form,
//! circuit expansion, and zeroing a gate.

use std::collections::HashMap;

use super::{Builder, Circuit, Formula, GateId, GateKind};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::poly::{MulMode, Polynomial, VarId};

/// Gate budget for [`Circuit::to_formula`].
pub const EXPANSION_BUDGET: u128 = 1 << 26;

/// `f = A·g + B` for a zeroed gate; see [`Formula::zero_gate_decompose`].
#[derive(Clone, Debug)]
pub struct ZeroGateSplit {
    /// Product of the sibling subtrees at every product ancestor of the gate.
    pub a: Polynomial,
    /// The polynomial computed at the gate.
    pub g: Polynomial,
    /// The formula with the gate replaced by the constant 0.
    pub b: Formula,
}

impl Circuit {
    /// The polynomial computed at every gate.
    pub fn gate_polynomials(&self, mode: MulMode) -> Result<Vec<Polynomial>> {
        let f = self.field;
        let mut polys: Vec<Polynomial> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let p = match g.kind {
                GateKind::Input(v) => Polynomial::var(f, v),
                GateKind::Const(c) => Polynomial::constant(f, c),
                GateKind::Sum => {
                    let mut acc = Polynomial::zero(f);
                    for &c in &g.children {
                        acc = acc.add(&polys[c]);
                    }
                    acc
                }
                GateKind::Prod => {
                    let mut acc = Polynomial::one(f);
                    for &c in &g.children {
                        acc = acc.mul(&polys[c], mode)?;
                    }
                    acc
                }
            };
            polys.push(p);
        }
        Ok(polys)
    }

    /// The polynomial computed at the root. In [`MulMode::Strict`] every
    /// product must have support-disjoint children.
    pub fn to_polynomial(&self, mode: MulMode) -> Result<Polynomial> {
        Ok(self.gate_polynomials(mode)?.swap_remove(self.root))
    }

    /// Numeric evaluation at a point, gate by gate.
    pub fn evaluate_at<F: Fn(VarId) -> Option<Fe>>(&self, value: F) -> Result<Fe> {
        let f = self.field;
        let mut vals: Vec<Fe> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g.kind {
                GateKind::Input(v) => value(v).ok_or(Error::MissingAssignment { var: v })?,
                GateKind::Const(c) => c,
                GateKind::Sum => g.children.iter().fold(Fe::ZERO, |acc, &c| f.add(acc, vals[c])),
                GateKind::Prod => g.children.iter().fold(Fe::ONE, |acc, &c| f.mul(acc, vals[c])),
            };
            vals.push(v);
        }
        Ok(vals[self.root])
    }

    /// Number of gates the tree expansion of this circuit would have.
    pub fn expanded_size(&self) -> u128 {
        let mut n = vec![0u128; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            n[id] = 1 + g.children.iter().map(|&c| n[c]).sum::<u128>();
        }
        n[self.root]
    }

    /// Expands shared gates into copies, one per use.
    pub fn to_formula(&self) -> Result<Formula> {
        let size = self.expanded_size();
        if size > EXPANSION_BUDGET {
            return Err(Error::SizeBudget { size, budget: EXPANSION_BUDGET });
        }
        let mut b = Builder::new(self.field);
        let root = b.copy_from(self, self.root);
        b.finish_formula(root)
    }
}

impl Formula {
    /// Rewrites into a syntactically multilinear (ΣΠ)^Δ Σ formula computing
    /// the same polynomial.
    ///
    /// Adjacent sums and adjacent products are merged first, so the depth
    /// check applies to the merged formula. Paths with fewer than `delta`
    /// products are padded with unary product and sum gates just above their
    /// leaf, and every leaf ends up under a (possibly unary) sum.
    pub fn normalize_to_alternating(&self, delta: usize) -> Result<Formula> {
        if let super::MultilinearCheck::Violation { gate, var } = self.check_syntactic_multilinear() {
            return Err(Error::NotSyntacticMultilinear { gate, var });
        }
        let mut fb = Builder::new(self.field);
        let froot = flatten(self, self.root, &mut fb);
        let flat = fb.finish_formula(froot)?;
        let found = flat.product_depth();
        if found > delta {
            return Err(Error::DepthExceeded { found, delta });
        }
        let mut b = Builder::new(self.field);
        let root = normalize(&flat, flat.root, delta, &mut b);
        let out = b.finish_formula(root)?;
        let bound = ((delta + 1) * (delta + 1)) as u128 * self.size() as u128;
        if out.size() as u128 > bound {
            log::warn!(
                "normalized size {} exceeds (Δ+1)^2·s = {} (Δ = {delta}, s = {})",
                out.size(),
                bound,
                self.size()
            );
        }
        Ok(out)
    }

    /// Splits `f = A·g + B` at `phi`.
    pub fn zero_gate_decompose(&self, phi: GateId) -> Result<ZeroGateSplit> {
        if phi >= self.size() {
            return Err(Error::NoSuchGate(phi));
        }
        let parents = self.parents();
        let mut a = Polynomial::one(self.field);
        let mut cur = phi;
        while let Some(p) = parents[cur] {
            if self.kind(p) == GateKind::Prod {
                for &s in self.children(p) {
                    if s != cur {
                        a = a.mul(&self.subtree_polynomial(s, MulMode::Strict)?, MulMode::Strict)?;
                    }
                }
            }
            cur = p;
        }
        let g = self.subtree_polynomial(phi, MulMode::Strict)?;
        let b = self.replace_with_constant(phi, Fe::ZERO);
        Ok(ZeroGateSplit { a, g, b })
    }

    /// The polynomial computed at gate `id`, visiting only its subtree.
    pub fn subtree_polynomial(&self, id: GateId, mode: MulMode) -> Result<Polynomial> {
        let g = self.gate(id);
        Ok(match g.kind {
            GateKind::Input(v) => Polynomial::var(self.field, v),
            GateKind::Const(c) => Polynomial::constant(self.field, c),
            GateKind::Sum => {
                let mut acc = Polynomial::zero(self.field);
                for &c in &g.children {
                    acc = acc.add(&self.subtree_polynomial(c, mode)?);
                }
                acc
            }
            GateKind::Prod => {
                let mut acc = Polynomial::one(self.field);
                for &c in &g.children {
                    acc = acc.mul(&self.subtree_polynomial(c, mode)?, mode)?;
                }
                acc
            }
        })
    }

    /// Copy of this formula with the subtree at `id` replaced by a constant.
    pub fn replace_with_constant(&self, id: GateId, c: Fe) -> Formula {
        fn copy(src: &Formula, id: GateId, target: GateId, c: Fe, b: &mut Builder) -> GateId {
            if id == target {
                return b.constant(c);
            }
            let g = src.gate(id);
            let children = g.children.iter().map(|&ch| copy(src, ch, target, c, b)).collect();
            b.gate(g.kind, children)
        }
        let mut b = Builder::new(self.field);
        let root = copy(self, self.root, id, c, &mut b);
        b.finish_formula(root).expect("copy of a formula is a formula")
    }

    /// Removes the gate `id` as if it computed 0, then simplifies: a sum left
    /// without children is itself removed, and so is a product with a removed
    /// child. Returns `None` when the whole formula becomes 0.
    pub fn without_gate(&self, id: GateId) -> Option<Formula> {
        let parents = self.parents();
        let mut cur = id;
        let cut = loop {
            let p = parents[cur]?;
            match self.kind(p) {
                GateKind::Sum if self.children(p).len() > 1 => break cur,
                _ => cur = p,
            }
        };
        fn copy(src: &Formula, id: GateId, cut: GateId, b: &mut Builder) -> GateId {
            let g = src.gate(id);
            let children = g.children.iter().filter(|&&c| c != cut).map(|&c| copy(src, c, cut, b)).collect();
            b.gate(g.kind, children)
        }
        let mut b = Builder::new(self.field);
        let root = copy(self, self.root, cut, &mut b);
        Some(b.finish_formula(root).expect("pruned formula is a formula"))
    }

    /// Substitutes every input gate through `map`; leaves without an entry
    /// are kept.
    pub fn substitute_inputs(&self, map: &HashMap<VarId, GateKind>) -> Formula {
        let gates = self
            .gates
            .iter()
            .map(|g| match g.kind {
                GateKind::Input(v) => super::Gate { kind: map.get(&v).copied().unwrap_or(g.kind), children: vec![] },
                _ => g.clone(),
            })
            .collect();
        Formula(Circuit { field: self.field, gates, root: self.root })
    }
}

fn flatten(src: &Formula, id: GateId, b: &mut Builder) -> GateId {
    let g = src.gate(id);
    match g.kind {
        GateKind::Input(_) | GateKind::Const(_) => b.gate(g.kind, Vec::new()),
        GateKind::Sum | GateKind::Prod => {
            let mut out = Vec::new();
            collect(src, id, g.kind, &mut out, b);
            b.gate(g.kind, out)
        }
    }
}

fn collect(src: &Formula, id: GateId, kind: GateKind, out: &mut Vec<GateId>, b: &mut Builder) {
    for &c in src.children(id) {
        if src.kind(c) == kind {
            collect(src, c, kind, out, b);
        } else {
            out.push(flatten(src, c, b));
        }
    }
}

/// Emits a (ΣΠ)^k Σ rendering of gate `id` of a merged formula whose
/// product depth at `id` is at most `k`.
fn normalize(src: &Formula, id: GateId, k: usize, b: &mut Builder) -> GateId {
    let g = src.gate(id);
    match g.kind {
        GateKind::Input(_) | GateKind::Const(_) => {
            if k == 0 {
                let leaf = b.gate(g.kind, Vec::new());
                b.sum(vec![leaf])
            } else {
                let inner = normalize(src, id, k - 1, b);
                let p = b.prod(vec![inner]);
                b.sum(vec![p])
            }
        }
        GateKind::Prod => {
            let p = product_layer(src, id, k, b);
            b.sum(vec![p])
        }
        GateKind::Sum => {
            let mut children = Vec::with_capacity(g.children.len());
            for &c in &g.children {
                let ck = src.kind(c);
                let out = if k == 0 {
                    debug_assert!(ck.is_leaf());
                    b.gate(ck, Vec::new())
                } else if ck == GateKind::Prod {
                    product_layer(src, c, k, b)
                } else {
                    let inner = normalize(src, c, k - 1, b);
                    b.prod(vec![inner])
                };
                children.push(out);
            }
            b.sum(children)
        }
    }
}

fn product_layer(src: &Formula, id: GateId, k: usize, b: &mut Builder) -> GateId {
    debug_assert!(k >= 1);
    let children = src.children(id).iter().map(|&c| normalize(src, c, k - 1, b)).collect();
    b.prod(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::VarSet;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    fn v(i: usize) -> VarId {
        VarId::x_from_index(i)
    }

    #[test]
    fn input_evaluates_to_its_variable() {
        let mut b = Builder::new(fld());
        let a = b.input(v(3));
        let f = b.finish_formula(a).unwrap();
        assert_eq!(f.to_polynomial(MulMode::Strict).unwrap(), Polynomial::var(fld(), v(3)));
    }

    #[test]
    fn nested_products_merge_under_depth_one() {
        let mut b = Builder::new(fld());
        let (x, y, z) = (b.input(v(0)), b.input(v(1)), b.input(v(2)));
        let xy = b.prod(vec![x, y]);
        let top = b.prod(vec![xy, z]);
        let f = b.finish_formula(top).unwrap();
        assert_eq!(f.product_depth(), 2);
        let n = f.normalize_to_alternating(1).unwrap();
        assert!(n.is_alternating(1));
        // Σ(Π(Σ(x), Σ(y), Σ(z)))
        assert_eq!(n.size(), 1 + 1 + 3 * 2);
        let root = n.root();
        assert_eq!(n.children(root).len(), 1);
        let p = n.children(root)[0];
        assert_eq!(n.kind(p), GateKind::Prod);
        assert_eq!(n.children(p).len(), 3);
        assert_eq!(n.to_polynomial(MulMode::Strict).unwrap(), f.to_polynomial(MulMode::Strict).unwrap());
        assert_eq!(f.normalize_to_alternating(0), Err(Error::DepthExceeded { found: 1, delta: 0 }));
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut b = Builder::new(fld());
        let (x, y) = (b.input(v(0)), b.input(v(5)));
        let c = b.constant(Fe(7));
        let sx = b.sum(vec![x, c]);
        let sy = b.sum(vec![y]);
        let p = b.prod(vec![sx, sy]);
        let top = b.sum(vec![p]);
        let f = b.finish_formula(top).unwrap();
        assert!(f.is_alternating(1));
        let n = f.normalize_to_alternating(1).unwrap();
        assert_eq!(n.to_string(), f.to_string());
        // padding to a larger depth keeps the polynomial
        let n3 = f.normalize_to_alternating(3).unwrap();
        assert!(n3.is_alternating(3));
        assert_eq!(n3.to_polynomial(MulMode::Strict), f.to_polynomial(MulMode::Strict));
    }

    #[test]
    fn diamond_circuit_duplicates_shared_sum() {
        let mut b = Builder::new(fld());
        let (x, y, z, w) = (b.input(v(0)), b.input(v(1)), b.input(v(2)), b.input(v(3)));
        let shared = b.sum(vec![x, y]);
        let p1 = b.prod(vec![shared, z]);
        let p2 = b.prod(vec![shared, w]);
        let top = b.sum(vec![p1, p2]);
        let c = b.finish_circuit(top).unwrap();
        assert!(c.clone().into_formula().is_err());
        let f = c.to_formula().unwrap();
        assert_eq!(f.size(), c.size() + 3);
        assert_eq!(f.to_polynomial(MulMode::Strict).unwrap(), c.to_polynomial(MulMode::Strict).unwrap());
    }

    #[test]
    fn zero_gate_at_root() {
        let mut b = Builder::new(fld());
        let (x, y) = (b.input(v(0)), b.input(v(1)));
        let s = b.sum(vec![x, y]);
        let f = b.finish_formula(s).unwrap();
        let split = f.zero_gate_decompose(f.root()).unwrap();
        assert_eq!(split.a, Polynomial::one(fld()));
        assert!(split.b.to_polynomial(MulMode::Strict).unwrap().is_zero());
        assert!(f.without_gate(f.root()).is_none());
    }

    #[test]
    fn zero_gate_under_product_takes_siblings() {
        // f = Σ(Π(h1, h2), h3)
        let mut b = Builder::new(fld());
        let h1 = b.input(v(0));
        let h2a = b.input(v(1));
        let h2b = b.constant(Fe(2));
        let h2 = b.sum(vec![h2a, h2b]);
        let p = b.prod(vec![h1, h2]);
        let h3 = b.input(v(2));
        let top = b.sum(vec![p, h3]);
        let f = b.finish_formula(top).unwrap();
        let split = f.zero_gate_decompose(h1).unwrap();
        let field = fld();
        let h2_poly = Polynomial::var(field, v(1)).add(&Polynomial::constant(field, Fe(2)));
        assert_eq!(split.a, h2_poly);
        assert_eq!(split.g, Polynomial::var(field, v(0)));
        assert_eq!(split.b.to_polynomial(MulMode::Strict).unwrap(), Polynomial::var(field, v(2)));
        let vars = f.vars(&VarSet::from([v(0), v(1), v(2)])).unwrap();
        assert!(split.a.support().is_disjoint(&vars[h1]));

        let pruned = f.without_gate(h1).unwrap();
        assert_eq!(pruned.to_polynomial(MulMode::Strict).unwrap(), Polynomial::var(field, v(2)));
        assert_eq!(pruned.size(), 2);
    }
}
