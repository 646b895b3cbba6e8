//! Variables and multilinear monomials.
//!
//! A [`VarId`] packs a namespace (`X`, `Y` or `Z`) and an index into one
//! `u32`, with the namespace in the top two bits. The derived ordering is
//! therefore "namespace first, then index", which is the canonical order
//! used everywhere a set of variables is iterated.
//!
//! Matrix variables `x^{(i)}_{u,v}` (layer `i >= 1`, `u, v ∈ {1, 2}`) are
//! stored with index `4(i-1) + 2(u-1) + (v-1)`. The restriction variables
//! `y_j`, `z_j` keep `j >= 1` as their index.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

const NS_SHIFT: u32 = 30;
const INDEX_MASK: u32 = (1 << NS_SHIFT) - 1;

impl VarId {
    fn pack(ns: Namespace, index: u32) -> VarId {
        assert!(index <= INDEX_MASK, "variable index {index} out of range");
        let tag = match ns {
            Namespace::X => 0,
            Namespace::Y => 1,
            Namespace::Z => 2,
        };
        VarId((tag << NS_SHIFT) | index)
    }

    /// `x^{(layer)}_{u,v}` with 1-based layer and `u, v ∈ {1, 2}`.
    pub fn x(layer: usize, u: usize, v: usize) -> VarId {
        assert!(layer >= 1, "layers are 1-based");
        assert!((1..=2).contains(&u) && (1..=2).contains(&v), "u, v must be 1 or 2");
        Self::pack(Namespace::X, (4 * (layer - 1) + 2 * (u - 1) + (v - 1)) as u32)
    }

    /// Matrix variable from its packed index.
    pub fn x_from_index(index: usize) -> VarId {
        Self::pack(Namespace::X, index as u32)
    }

    pub fn y(j: usize) -> VarId {
        assert!(j >= 1, "y indices are 1-based");
        Self::pack(Namespace::Y, j as u32)
    }

    pub fn z(j: usize) -> VarId {
        assert!(j >= 1, "z indices are 1-based");
        Self::pack(Namespace::Z, j as u32)
    }

    pub fn namespace(self) -> Namespace {
        match self.0 >> NS_SHIFT {
            0 => Namespace::X,
            1 => Namespace::Y,
            _ => Namespace::Z,
        }
    }

    pub fn index(self) -> usize {
        (self.0 & INDEX_MASK) as usize
    }

    pub fn is_x(self) -> bool {
        self.namespace() == Namespace::X
    }

    /// `(layer, u, v)` for a matrix variable.
    pub fn x_coords(self) -> Option<(usize, usize, usize)> {
        if !self.is_x() {
            return None;
        }
        let k = self.index();
        Some((k / 4 + 1, (k % 4) / 2 + 1, k % 2 + 1))
    }

    pub fn layer(self) -> Option<usize> {
        self.x_coords().map(|(i, _, _)| i)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.namespace() {
            Namespace::X => {
                let (i, u, v) = self.x_coords().unwrap();
                write!(f, "x[{i}][{u}][{v}]")
            }
            Namespace::Y => write!(f, "y[{}]", self.index()),
            Namespace::Z => write!(f, "z[{}]", self.index()),
        }
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = crate::text::Cursor::new(s);
        let v = cur.var()?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error("trailing input after variable"));
        }
        Ok(v)
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Set of variables with deterministic (canonical) iteration order.
pub type VarSet = BTreeSet<VarId>;

/// All `4d` matrix variables of layers `1..=d`.
pub fn matrix_vars(d: usize) -> VarSet {
    (0..4 * d).map(VarId::x_from_index).collect()
}

/// A multilinear monomial: a strictly increasing list of variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<VarId>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![v])
    }

    /// Builds a monomial from variables in any order; a repeated variable is
    /// a multilinearity violation.
    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Result<Monomial, Error> {
        let mut v: Vec<VarId> = vars.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MultilinearityViolation { var: w[0] });
        }
        Ok(Monomial(v))
    }

    /// Wraps an already sorted, duplicate-free list.
    pub(crate) fn from_sorted(v: Vec<VarId>) -> Monomial {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Monomial(v)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Product of two monomials, or the first shared variable.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial, VarId> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return Err(a[i]),
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Monomial(out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
