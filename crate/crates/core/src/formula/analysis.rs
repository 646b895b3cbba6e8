//! Structural analyses: supports, ascribed variable sets, product depth,
//! syntactic multilinearity and alternation shape.

use super::{Circuit, Formula, GateId, GateKind};
use crate::error::{Error, Result};
use crate::poly::{VarId, VarSet};

/// Outcome of [`Circuit::check_syntactic_multilinear`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultilinearCheck {
    Multilinear,
    /// `gate` is a product gate with two children whose supports share `var`.
    Violation { gate: GateId, var: VarId },
}

impl MultilinearCheck {
    pub fn is_multilinear(self) -> bool {
        self == MultilinearCheck::Multilinear
    }
}

/// Uniform layering of a formula: along every root-to-leaf path sum and
/// product gates alternate, starting with a sum, with exactly `delta`
/// product gates. `bottom_sum` distinguishes (ΣΠ)^Δ Σ from (ΣΠ)^Δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlternationShape {
    pub delta: usize,
    pub bottom_sum: bool,
}

impl Circuit {
    /// `Supp` of every gate, indexed by gate id.
    pub fn supports(&self) -> Vec<VarSet> {
        let mut supp: Vec<VarSet> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let s = match g.kind {
                GateKind::Input(v) => VarSet::from([v]),
                GateKind::Const(_) => VarSet::new(),
                GateKind::Sum | GateKind::Prod => {
                    let mut s = VarSet::new();
                    for &c in &g.children {
                        s.extend(supp[c].iter().copied());
                    }
                    s
                }
            };
            supp.push(s);
        }
        supp
    }

    /// Maximum number of product gates on a root-to-leaf path.
    pub fn product_depth(&self) -> usize {
        let mut depth = vec![0usize; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            let below = g.children.iter().map(|&c| depth[c]).max().unwrap_or(0);
            depth[id] = below + usize::from(g.kind == GateKind::Prod);
        }
        depth[self.root]
    }

    pub fn check_syntactic_multilinear(&self) -> MultilinearCheck {
        let supp = self.supports();
        for (id, g) in self.gates.iter().enumerate() {
            if g.kind != GateKind::Prod {
                continue;
            }
            let mut seen = VarSet::new();
            for &c in &g.children {
                for &v in &supp[c] {
                    if !seen.insert(v) {
                        return MultilinearCheck::Violation { gate: id, var: v };
                    }
                }
            }
        }
        MultilinearCheck::Multilinear
    }

    /// The layering of this circuit, if it has one.
    pub fn alternation_shape(&self) -> Option<AlternationShape> {
        // Per gate: (products on every path below and including it, bottom is a sum).
        let mut prof: Vec<Option<(usize, bool)>> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let p = match g.kind {
                GateKind::Input(_) | GateKind::Const(_) => None,
                GateKind::Sum => {
                    if g.children.iter().all(|&c| self.gates[c].kind.is_leaf()) {
                        Some((0, true))
                    } else if g.children.iter().all(|&c| self.gates[c].kind == GateKind::Prod) {
                        uniform(g.children.iter().map(|&c| prof[c]))
                    } else {
                        None
                    }
                }
                GateKind::Prod => {
                    if g.children.iter().all(|&c| self.gates[c].kind.is_leaf()) {
                        Some((1, false))
                    } else if g.children.iter().all(|&c| self.gates[c].kind == GateKind::Sum) {
                        uniform(g.children.iter().map(|&c| prof[c])).map(|(d, b)| (d + 1, b))
                    } else {
                        None
                    }
                }
            };
            prof.push(p);
        }
        if self.gates[self.root].kind != GateKind::Sum {
            return None;
        }
        prof[self.root].map(|(delta, bottom_sum)| AlternationShape { delta, bottom_sum })
    }

    /// True iff the circuit is (ΣΠ)^Δ Σ for the given Δ.
    pub fn is_alternating(&self, delta: usize) -> bool {
        self.alternation_shape() == Some(AlternationShape { delta, bottom_sum: true })
    }
}

fn uniform<I: Iterator<Item = Option<(usize, bool)>>>(mut it: I) -> Option<(usize, bool)> {
    let first = it.next()??;
    for p in it {
        if p? != first {
            return None;
        }
    }
    Some(first)
}

impl Formula {
    /// Top-down ascribed variable sets.
    ///
    /// The root receives `ambient`; children of a sum inherit their parent's
    /// set; the first `k - 1` children of a product receive their own support
    /// and the last child receives the remainder. A product root is treated
    /// as if wrapped in a unary sum, which assigns it the same set.
    pub fn vars(&self, ambient: &VarSet) -> Result<Vec<VarSet>> {
        let supp = self.supports();
        if let MultilinearCheck::Violation { gate, var } = self.check_syntactic_multilinear() {
            return Err(Error::NotSyntacticMultilinear { gate, var });
        }
        if let Some(&var) = supp[self.root].iter().find(|v| !ambient.contains(v)) {
            return Err(Error::AmbientTooSmall { var });
        }
        Ok(self.vars_with(ambient, &supp))
    }

    pub(crate) fn vars_with(&self, ambient: &VarSet, supp: &[VarSet]) -> Vec<VarSet> {
        let mut vars: Vec<VarSet> = vec![VarSet::new(); self.gates.len()];
        vars[self.root] = ambient.clone();
        for id in (0..self.gates.len()).rev() {
            let g = &self.gates[id];
            match g.kind {
                GateKind::Sum => {
                    for &c in &g.children {
                        vars[c] = vars[id].clone();
                    }
                }
                GateKind::Prod => {
                    let (last, init) = g.children.split_last().expect("nonempty fan-in");
                    let mut rest = vars[id].clone();
                    for &c in init {
                        vars[c] = supp[c].clone();
                        for v in &supp[c] {
                            rest.remove(v);
                        }
                    }
                    vars[*last] = rest;
                }
                GateKind::Input(_) | GateKind::Const(_) => {}
            }
        }
        vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fe, PrimeField};
    use crate::formula::Builder;

    fn x(i: usize) -> VarId {
        VarId::x_from_index(i)
    }

    #[test]
    fn supports_and_depth_of_small_formula() {
        let mut b = Builder::new(PrimeField::default());
        let c = b.constant(Fe(3));
        let a = b.input(x(0));
        let p = b.prod(vec![a, c]);
        let q = b.input(x(1));
        let s = b.sum(vec![p, q]);
        let f = b.finish_formula(s).unwrap();
        let supp = f.supports();
        assert!(supp[c].is_empty());
        assert_eq!(supp[a], VarSet::from([x(0)]));
        assert_eq!(supp[s], VarSet::from([x(0), x(1)]));
        assert_eq!(f.product_depth(), 1);
        assert_eq!(f.size(), 5);
    }

    #[test]
    fn single_input_is_depth_zero_and_multilinear() {
        let mut b = Builder::new(PrimeField::default());
        let a = b.input(x(0));
        let f = b.finish_formula(a).unwrap();
        assert_eq!(f.product_depth(), 0);
        assert!(f.check_syntactic_multilinear().is_multilinear());
    }

    #[test]
    fn repeated_variable_under_product_is_reported() {
        let mut b = Builder::new(PrimeField::default());
        let a = b.input(x(0));
        let a2 = b.input(x(0));
        let p = b.prod(vec![a, a2]);
        let f = b.finish_formula(p).unwrap();
        assert_eq!(f.check_syntactic_multilinear(), MultilinearCheck::Violation { gate: p, var: x(0) });
        assert!(matches!(f.vars(&VarSet::from([x(0)])), Err(Error::NotSyntacticMultilinear { .. })));
    }

    #[test]
    fn vars_remainder_rule() {
        let (a, bb, c) = (x(0), x(1), x(2));
        let mut b = Builder::new(PrimeField::default());
        let ga = b.input(a);
        let gb = b.input(bb);
        let p = b.prod(vec![ga, gb]);
        let s = b.sum(vec![p]);
        let f = b.finish_formula(s).unwrap();
        let vars = f.vars(&VarSet::from([a, bb, c])).unwrap();
        assert_eq!(vars[s], VarSet::from([a, bb, c]));
        assert_eq!(vars[ga], VarSet::from([a]));
        assert_eq!(vars[gb], VarSet::from([bb, c]));
        assert!(matches!(f.vars(&VarSet::from([a])), Err(Error::AmbientTooSmall { .. })));
    }

    #[test]
    fn alternation_shapes() {
        let mut b = Builder::new(PrimeField::default());
        let l1 = b.input(x(0));
        let l2 = b.input(x(1));
        let s1 = b.sum(vec![l1]);
        let s2 = b.sum(vec![l2]);
        let p = b.prod(vec![s1, s2]);
        let top = b.sum(vec![p]);
        let f = b.finish_formula(top).unwrap();
        assert_eq!(f.alternation_shape(), Some(AlternationShape { delta: 1, bottom_sum: true }));
        assert!(f.is_alternating(1));

        let mut b = Builder::new(PrimeField::default());
        let l1 = b.input(x(0));
        let l2 = b.input(x(1));
        let p = b.prod(vec![l1, l2]);
        let top = b.sum(vec![p, l1]);
        // l1 reused: circuit, not a formula, and mixed children break the shape
        let c = b.finish_circuit(top).unwrap();
        assert_eq!(c.alternation_shape(), None);
    }
}
