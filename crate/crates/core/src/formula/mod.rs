//! Arithmetic circuits and formulas.
//!
//! Gates live in an arena and are referred to by [`GateId`], their index in
//! the arena. Children are always created before their parents, so ids are a
//! topological order and a bottom-up pass is a plain forward loop. A
//! [`Circuit`] may share gates; a [`Formula`] is a circuit in which every
//! gate other than the root has exactly one parent.
//!
//! Every stored gate is reachable from the root: builders drop unreachable
//! gates (renumbering the rest in order) when they finish.

mod analysis;
pub mod random;
mod sexpr;
mod transform;

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::field::{Fe, PrimeField};
use crate::poly::VarId;

pub use analysis::{AlternationShape, MultilinearCheck};
pub use transform::ZeroGateSplit;

pub type GateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Input(VarId),
    Const(Fe),
    Sum,
    Prod,
}

impl GateKind {
    pub fn is_leaf(self) -> bool {
        matches!(self, GateKind::Input(_) | GateKind::Const(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub children: Vec<GateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    field: PrimeField,
    gates: Vec<Gate>,
    root: GateId,
}

/// A tree-shaped [`Circuit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula(Circuit);

impl Deref for Formula {
    type Target = Circuit;

    fn deref(&self) -> &Circuit {
        &self.0
    }
}

impl Circuit {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn root(&self) -> GateId {
        self.root
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn kind(&self, id: GateId) -> GateKind {
        self.gates[id].kind
    }

    pub fn children(&self, id: GateId) -> &[GateId] {
        &self.gates[id].children
    }

    /// Number of gates, input gates included.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_leaf()).count()
    }

    /// Parent of every gate (`None` for the root). Only meaningful for trees.
    pub(crate) fn parents(&self) -> Vec<Option<GateId>> {
        let mut parent = vec![None; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            for &c in &g.children {
                parent[c] = Some(id);
            }
        }
        parent
    }

    /// Checks tree shape and wraps the circuit as a formula.
    pub fn into_formula(self) -> Result<Formula> {
        let mut seen = vec![false; self.gates.len()];
        for g in &self.gates {
            for &c in &g.children {
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::NotATree(c));
                }
            }
        }
        Ok(Formula(self))
    }
}

impl Formula {
    pub fn as_circuit(&self) -> &Circuit {
        &self.0
    }

    pub fn into_circuit(self) -> Circuit {
        self.0
    }

    /// Copies the subtree rooted at `id` into a standalone formula.
    pub fn subformula(&self, id: GateId) -> Formula {
        let mut b = Builder::new(self.field);
        let root = b.copy_from(self, id);
        b.finish_formula(root).expect("subtree of a formula is a formula")
    }
}

/// Incremental construction of circuits and formulas.
#[derive(Clone, Debug)]
pub struct Builder {
    field: PrimeField,
    gates: Vec<Gate>,
}

impl Builder {
    pub fn new(field: PrimeField) -> Self {
        Builder { field, gates: Vec::new() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn push(&mut self, kind: GateKind, children: Vec<GateId>) -> GateId {
        let id = self.gates.len();
        for &c in &children {
            assert!(c < id, "child {c} of gate {id} does not exist yet");
        }
        assert!(kind.is_leaf() || !children.is_empty(), "gate {id} needs at least one child");
        self.gates.push(Gate { kind, children });
        id
    }

    pub fn input(&mut self, v: VarId) -> GateId {
        self.push(GateKind::Input(v), Vec::new())
    }

    pub fn constant(&mut self, c: Fe) -> GateId {
        self.push(GateKind::Const(c), Vec::new())
    }

    pub fn sum(&mut self, children: Vec<GateId>) -> GateId {
        self.push(GateKind::Sum, children)
    }

    pub fn prod(&mut self, children: Vec<GateId>) -> GateId {
        self.push(GateKind::Prod, children)
    }

    pub fn gate(&mut self, kind: GateKind, children: Vec<GateId>) -> GateId {
        self.push(kind, children)
    }

    /// Deep-copies a subtree of `src` into this builder.
    pub fn copy_from(&mut self, src: &Circuit, id: GateId) -> GateId {
        let g = src.gate(id);
        let children = g.children.iter().map(|&c| self.copy_from(src, c)).collect();
        self.push(g.kind, children)
    }

    /// Finishes with `root` as output; gates not reachable from it are dropped.
    pub fn finish_circuit(self, root: GateId) -> Result<Circuit> {
        if root >= self.gates.len() {
            return Err(Error::NoSuchGate(root));
        }
        let mut reach = vec![false; self.gates.len()];
        reach[root] = true;
        for id in (0..=root).rev() {
            if reach[id] {
                for &c in &self.gates[id].children {
                    reach[c] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (id, g) in self.gates.into_iter().enumerate() {
            if reach[id] {
                remap[id] = gates.len();
                let children = g.children.iter().map(|&c| remap[c]).collect();
                gates.push(Gate { kind: g.kind, children });
            }
        }
        Ok(Circuit { field: self.field, root: remap[root], gates })
    }

    pub fn finish_formula(self, root: GateId) -> Result<Formula> {
        self.finish_circuit(root)?.into_formula()
    }
}

/// Builds a circuit from an explicit gate list, validating references.
pub fn circuit_from_gates(field: PrimeField, gates: Vec<Gate>, root: GateId) -> Result<Circuit> {
    for (id, g) in gates.iter().enumerate() {
        if !g.kind.is_leaf() && g.children.is_empty() {
            return Err(Error::EmptyFanIn(id));
        }
        if let Some(&c) = g.children.iter().find(|&&c| c >= id) {
            return Err(Error::BadChild { gate: id, child: c });
        }
    }
    let b = Builder { field, gates };
    b.finish_circuit(root)
}
