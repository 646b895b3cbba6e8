//! Writing a (ΣΠ)^Δ Σ formula as a sum of product terms and simple terms.
//!
//! Layers are counted from the leaves: layer 1 holds the bottom sums,
//! layer 2 the products directly above them, and so on. [`decompose`]
//! repeats the following on the remaining formula `F`, always picking the
//! layer-2 gate with the lowest id:
//!
//! 1. If a layer-2 gate `φ` has fan-in at least `t`, split `f = A·g + B`
//!    at `φ` and emit `A·g` as a product term whose factors are the children
//!    of `φ` and `A`. Continue with `B`.
//! 2. Otherwise, if a layer-2 gate `φ` has `|Vars(φ)| ≥ support_threshold`,
//!    emit `A·g` as a simple term: the children of `φ` are the linear
//!    factors and `A` is the tail. Continue with `B`.
//! 3. Otherwise every layer-2 gate has few variables, and
//!    [`inner_depth_recursion`] finishes the job.
//!
//! `B` is `F` with `φ` deleted: its parent sum loses a child, and a sum left
//! without children is deleted in turn, as is any product that loses a
//! child. This computes `f − A·g` and keeps the (ΣΠ)^Δ Σ shape.
//!
//! Factors carry ascribed variable sets that partition the ambient set.
//! A factor whose set would be empty (a constant child) is multiplied into
//! the first factor with a nonempty set; `A` is folded the same way when
//! `X ∖ Vars(φ)` is empty.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::formula::{Formula, GateId, GateKind};
use crate::imm::ceil_root;
use crate::poly::{MulMode, Polynomial, VarId, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompParams {
    /// Fan-in that makes a layer-2 gate a product term.
    pub t: usize,
    /// Largest number of linear factors in a simple term.
    pub r: usize,
    /// `|Vars(φ)|` that makes a layer-2 gate a simple term.
    pub support_threshold: usize,
    /// Cap on `|Vars|` of layer-2 gates assumed by the inner recursion.
    pub p_bound: usize,
}

impl DecompParams {
    /// Explicit `t` and `r`, with both variable thresholds at `400 r`.
    pub fn new(t: usize, r: usize) -> DecompParams {
        DecompParams { t, r, support_threshold: 400 * r, p_bound: 400 * r }
    }

    /// All parameters positive and `t ≤ r + 1`, so that a simple term,
    /// whose linears come from a gate of fan-in below `t`, has at most `r`.
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.r == 0 || self.support_threshold == 0 || self.p_bound == 0 {
            return Err(Error::Params(format!("all parameters must be positive: {self:?}")));
        }
        if self.t > self.r + 1 {
            return Err(Error::Params(format!("t = {} exceeds r + 1 = {}", self.t, self.r + 1)));
        }
        Ok(())
    }
}

/// `Δ · d^{1/Δ}`, exact when `d` is a perfect power.
fn scale(d: usize, delta: usize) -> f64 {
    let root = ceil_root(d, delta);
    if (root as u128).pow(delta as u32) == d as u128 {
        (delta * root) as f64
    } else {
        delta as f64 * (d as f64).powf(1.0 / delta as f64)
    }
}

/// `t = max(1, ⌈Δd^{1/Δ}/1000⌉)`, `r = max(1, ⌈Δd^{1/Δ}/400⌉)` and both
/// thresholds `400 r`.
pub fn default_params(d: usize, delta: usize) -> Result<DecompParams> {
    if delta == 0 || d == 0 || delta >= usize::BITS as usize || (1usize << delta) > d {
        return Err(Error::BadDepth { d, delta });
    }
    let x = scale(d, delta);
    let t = ((x / 1000.0).ceil() as usize).max(1);
    let r = ((x / 400.0).ceil() as usize).max(1);
    Ok(DecompParams::new(t, r))
}

/// A polynomial with its ascribed variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: Polynomial,
    pub vars: VarSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TProductTerm {
    pub factors: Vec<Factor>,
}

impl TProductTerm {
    /// Number of factors.
    pub fn t(&self) -> usize {
        self.factors.len()
    }

    pub fn polynomial(&self, field: PrimeField) -> Result<Polynomial> {
        Polynomial::product(field, self.factors.iter().map(|f| &f.poly))
    }
}

/// `L_1 ⋯ L_{r'} · G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSimpleTerm {
    pub linears: Vec<Factor>,
    /// `None` when the linears' sets already cover the ambient set.
    pub tail: Option<Factor>,
    pub r: usize,
    pub support_threshold: usize,
}

impl RSimpleTerm {
    pub fn r_prime(&self) -> usize {
        self.linears.len()
    }

    pub fn covered(&self) -> VarSet {
        self.linears.iter().flat_map(|f| f.vars.iter().copied()).collect()
    }

    pub fn polynomial(&self, field: PrimeField) -> Result<Polynomial> {
        Polynomial::product(field, self.linears.iter().chain(&self.tail).map(|f| &f.poly))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Product(TProductTerm),
    Simple(RSimpleTerm),
}

impl Term {
    pub fn factors(&self) -> Vec<&Factor> {
        match self {
            Term::Product(p) => p.factors.iter().collect(),
            Term::Simple(s) => s.linears.iter().chain(&s.tail).collect(),
        }
    }

    pub fn polynomial(&self, field: PrimeField) -> Result<Polynomial> {
        match self {
            Term::Product(p) => p.polynomial(field),
            Term::Simple(s) => s.polynomial(field),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Term::Product(_) => "t_product",
            Term::Simple(_) => "r_simple",
        }
    }
}

/// A reason a term fails its definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermDefect {
    NoFactors,
    EmptySet { factor: usize },
    SharedVar { var: VarId },
    Uncovered { var: VarId },
    OutsideAmbient { var: VarId },
    SupportOutsideSet { factor: usize, var: VarId },
    NotLinear { factor: usize, degree: usize },
    TooManyLinears { r_prime: usize, r: usize },
    BelowThreshold { covered: usize, threshold: usize },
}

impl fmt::Display for TermDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermDefect::NoFactors => write!(f, "term has no factors"),
            TermDefect::EmptySet { factor } => write!(f, "factor {factor} has an empty ascribed set"),
            TermDefect::SharedVar { var } => write!(f, "{var} is ascribed to two factors"),
            TermDefect::Uncovered { var } => write!(f, "{var} is ascribed to no factor"),
            TermDefect::OutsideAmbient { var } => write!(f, "{var} is ascribed but not in the ambient set"),
            TermDefect::SupportOutsideSet { factor, var } => write!(f, "factor {factor} uses {var} outside its set"),
            TermDefect::NotLinear { factor, degree } => write!(f, "linear factor {factor} has degree {degree}"),
            TermDefect::TooManyLinears { r_prime, r } => write!(f, "{r_prime} linear factors exceed r = {r}"),
            TermDefect::BelowThreshold { covered, threshold } => {
                write!(f, "linears cover {covered} variables, below {threshold}")
            }
        }
    }
}

/// Outcome of [`verify_term`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermCheck {
    pub defects: Vec<TermDefect>,
}

impl TermCheck {
    pub fn ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks the partition, support and (for simple terms) linearity and
/// coverage conditions exactly.
pub fn verify_term(term: &Term, ambient: &VarSet) -> TermCheck {
    let factors = term.factors();
    let mut defects = Vec::new();
    if factors.is_empty() {
        defects.push(TermDefect::NoFactors);
    }
    let mut seen = VarSet::new();
    for (k, f) in factors.iter().enumerate() {
        if f.vars.is_empty() {
            defects.push(TermDefect::EmptySet { factor: k });
        }
        for &v in &f.vars {
            if !seen.insert(v) {
                defects.push(TermDefect::SharedVar { var: v });
            }
            if !ambient.contains(&v) {
                defects.push(TermDefect::OutsideAmbient { var: v });
            }
        }
        if let Some(&var) = f.poly.support().iter().find(|v| !f.vars.contains(v)) {
            defects.push(TermDefect::SupportOutsideSet { factor: k, var });
        }
    }
    if let Some(&var) = ambient.iter().find(|v| !seen.contains(v)) {
        defects.push(TermDefect::Uncovered { var });
    }
    if let Term::Simple(s) = term {
        for (k, l) in s.linears.iter().enumerate() {
            if l.poly.degree() > 1 {
                defects.push(TermDefect::NotLinear { factor: k, degree: l.poly.degree() });
            }
        }
        if s.r_prime() > s.r {
            defects.push(TermDefect::TooManyLinears { r_prime: s.r_prime(), r: s.r });
        }
        let covered = s.covered().len();
        if covered < s.support_threshold {
            defects.push(TermDefect::BelowThreshold { covered, threshold: s.support_threshold });
        }
    }
    TermCheck { defects }
}

/// Terms whose sum is the source polynomial.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub products: Vec<TProductTerm>,
    pub simples: Vec<RSimpleTerm>,
    /// Size of the decomposed formula.
    pub source_size: usize,
    pub ambient: VarSet,
    pub params: DecompParams,
    /// Product terms extracted at fan-in threshold.
    pub case_fanin: usize,
    /// Simple terms extracted at the variable threshold.
    pub case_support: usize,
    /// Product terms produced by the inner recursion.
    pub case_inner: usize,
    /// Per-term factor bound of the inner recursion, if it ran.
    pub inner_bound: Option<f64>,
}

impl Decomposition {
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.products.iter().cloned().map(Term::Product).chain(self.simples.iter().cloned().map(Term::Simple))
    }

    pub fn term_count(&self) -> usize {
        self.products.len() + self.simples.len()
    }

    pub fn sum(&self, field: PrimeField) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(field);
        for t in self.terms() {
            acc = acc.add(&t.polynomial(field)?);
        }
        Ok(acc)
    }

    /// Every term passes [`verify_term`].
    pub fn all_verified(&self) -> bool {
        self.terms().all(|t| verify_term(&t, &self.ambient).ok())
    }
}

/// Result of [`inner_depth_recursion`].
#[derive(Clone, Debug)]
pub struct InnerDecomposition {
    pub terms: Vec<TProductTerm>,
    /// `(Δ−1)((n/p)^{1/(Δ−1)} − 1)` for `Δ ≥ 2`; every term has at least
    /// this many factors.
    pub bound: Option<f64>,
}

/// Per-term factor bound of the inner recursion.
pub fn inner_bound(n: usize, p_bound: usize, delta: usize) -> Option<f64> {
    (delta >= 2).then(|| {
        let k = (delta - 1) as f64;
        k * ((n as f64 / p_bound as f64).powf(1.0 / k) - 1.0)
    })
}

/// Gate layers counted from the leaves (leaves are layer 0).
fn layers(f: &Formula) -> Vec<usize> {
    let mut layer = vec![0usize; f.size()];
    for (id, g) in f.gates().iter().enumerate() {
        layer[id] = g.children.iter().map(|&c| layer[c] + 1).max().unwrap_or(0);
    }
    layer
}

fn check_shape(f: &Formula) -> Result<usize> {
    match f.alternation_shape() {
        Some(s) if s.bottom_sum && s.delta >= 1 => Ok(s.delta),
        Some(s) => Err(Error::Shape { delta: s.delta, msg: "expected a bottom sum layer and at least one product layer".into() }),
        None => Err(Error::Shape { delta: f.product_depth(), msg: "sums and products do not alternate uniformly".into() }),
    }
}

/// Moves the polynomials of factors with empty sets into the first factor
/// with a nonempty set.
fn merge_empty(field: PrimeField, factors: Vec<Factor>) -> Result<Vec<Factor>> {
    let Some(host) = factors.iter().position(|f| !f.vars.is_empty()) else { return Ok(factors) };
    let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
    let mut extra = Polynomial::one(field);
    for (k, f) in factors.into_iter().enumerate() {
        if f.vars.is_empty() && k != host {
            extra = extra.mul(&f.poly, MulMode::Strict)?;
        } else {
            out.push(f);
        }
    }
    let h = out.iter().position(|f| !f.vars.is_empty()).expect("host kept");
    out[h].poly = out[h].poly.mul(&extra, MulMode::Strict)?;
    Ok(out)
}

fn child_factors(f: &Formula, phi: GateId, vars: &[VarSet]) -> Result<Vec<Factor>> {
    f.children(phi)
        .iter()
        .map(|&c| Ok(Factor { poly: f.subtree_polynomial(c, MulMode::Strict)?, vars: vars[c].clone() }))
        .collect()
}

pub fn decompose(f: &Formula, ambient: &VarSet, params: &DecompParams) -> Result<Decomposition> {
    params.validate()?;
    check_shape(f)?;
    if ambient.is_empty() {
        return Err(Error::Params("ambient variable set is empty".into()));
    }
    let field = f.field();
    let mut out = Decomposition {
        products: Vec::new(),
        simples: Vec::new(),
        source_size: f.size(),
        ambient: ambient.clone(),
        params: *params,
        case_fanin: 0,
        case_support: 0,
        case_inner: 0,
        inner_bound: None,
    };
    let mut current = Some(f.clone());
    while let Some(cur) = current.take() {
        let vars = cur.vars(ambient)?;
        let layer = layers(&cur);
        let layer2: Vec<GateId> = (0..cur.size()).filter(|&id| layer[id] == 2).collect();
        debug_assert!(layer2.iter().all(|&id| cur.kind(id) == GateKind::Prod));
        let fanin = layer2.iter().copied().find(|&id| cur.children(id).len() >= params.t);
        let wide = || layer2.iter().copied().find(|&id| vars[id].len() >= params.support_threshold);
        let (phi, simple) = match (fanin, fanin.is_none().then(wide).flatten()) {
            (Some(phi), _) => (phi, false),
            (None, Some(phi)) => (phi, true),
            (None, None) => {
                let inner = inner_depth_recursion(&cur, ambient, params.p_bound)?;
                out.case_inner += inner.terms.len();
                out.inner_bound = inner.bound;
                out.products.extend(inner.terms);
                break;
            }
        };
        let split = cur.zero_gate_decompose(phi)?;
        let rest: VarSet = ambient.difference(&vars[phi]).copied().collect();
        let mut factors = child_factors(&cur, phi, &vars)?;
        let cofactor = Factor { poly: split.a, vars: rest };
        if simple {
            let tail = if cofactor.vars.is_empty() {
                factors[0].poly = factors[0].poly.mul(&cofactor.poly, MulMode::Strict)?;
                None
            } else {
                Some(cofactor)
            };
            let linears = merge_empty(field, factors)?;
            out.simples.push(RSimpleTerm { linears, tail, r: params.r, support_threshold: params.support_threshold });
            out.case_support += 1;
        } else {
            factors.push(cofactor);
            out.products.push(TProductTerm { factors: merge_empty(field, factors)? });
            out.case_fanin += 1;
        }
        current = cur.without_gate(phi);
    }
    Ok(out)
}

/// Decomposes a formula whose layer-2 gates all have at most `p_bound`
/// ascribed variables into product terms: one per top product gate at
/// product depth 1 or 2, and otherwise by recursing into the child with the
/// most variables (lowest id on ties) and appending its siblings as factors.
pub fn inner_depth_recursion(f: &Formula, ambient: &VarSet, p_bound: usize) -> Result<InnerDecomposition> {
    let delta = check_shape(f)?;
    let vars = f.vars(ambient)?;
    let layer = layers(f);
    if let Some(id) = (0..f.size()).find(|&id| layer[id] == 2 && vars[id].len() > p_bound) {
        return Err(Error::PreconditionViolated(format!(
            "layer-2 gate {id} has {} ascribed variables, above {p_bound}",
            vars[id].len()
        )));
    }
    let field = f.field();
    let raw = inner_terms(f, f.root(), delta, &vars)?;
    let bound = inner_bound(ambient.len(), p_bound, delta);
    let mut terms = Vec::with_capacity(raw.len());
    for factors in raw {
        let term = TProductTerm { factors: merge_empty(field, factors)? };
        if let Some(b) = bound {
            assert!(term.t() as f64 >= b - 1e-9, "inner term has {} factors, below the bound {b}", term.t());
        }
        terms.push(term);
    }
    Ok(InnerDecomposition { terms, bound })
}

fn inner_terms(f: &Formula, sum: GateId, k: usize, vars: &[VarSet]) -> Result<Vec<Vec<Factor>>> {
    let mut out = Vec::new();
    for &prod in f.children(sum) {
        if k <= 2 {
            out.push(child_factors(f, prod, vars)?);
            continue;
        }
        let children = f.children(prod);
        let pick = children.iter().copied().fold(children[0], |best, c| {
            if vars[c].len() > vars[best].len() || (vars[c].len() == vars[best].len() && c < best) {
                c
            } else {
                best
            }
        });
        let siblings: Vec<Factor> = children
            .iter()
            .filter(|&&c| c != pick)
            .map(|&c| Ok(Factor { poly: f.subtree_polynomial(c, MulMode::Strict)?, vars: vars[c].clone() }))
            .collect::<Result<_>>()?;
        for mut sub in inner_terms(f, pick, k - 1, vars)? {
            sub.extend(siblings.iter().cloned());
            out.push(sub);
        }
    }
    Ok(out)
}

/// JSON form of a term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub kind: String,
    pub factors: Vec<FactorJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub linear_count: Option<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub poly: String,
    pub vars: Vec<String>,
}

impl Term {
    pub fn to_json(&self, ambient: &VarSet) -> TermJson {
        TermJson {
            kind: self.kind().into(),
            factors: self
                .factors()
                .into_iter()
                .map(|f| FactorJson { poly: f.poly.to_string(), vars: f.vars.iter().map(ToString::to_string).collect() })
                .collect(),
            linear_count: match self {
                Term::Simple(s) => Some(s.r_prime()),
                Term::Product(_) => None,
            },
            verified: verify_term(self, ambient).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Builder;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    fn x(i: usize) -> VarId {
        VarId::x_from_index(i)
    }

    #[test]
    fn default_parameter_arithmetic() {
        let p = default_params(1 << 20, 2).unwrap();
        assert_eq!((p.t, p.r), (3, 6));
        assert_eq!((p.support_threshold, p.p_bound), (2400, 2400));
        let q = default_params(8, 3).unwrap();
        assert_eq!((q.t, q.r), (1, 1));
        assert!(default_params(8, 4).is_err());
        let mut last = 0;
        for d in [16, 256, 4096, 1 << 16, 1 << 20, 1 << 24] {
            let t = default_params(d, 2).unwrap().t;
            assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn params_validation() {
        assert!(DecompParams::new(3, 1).validate().is_err());
        assert!(DecompParams::new(2, 1).validate().is_ok());
        assert!(DecompParams { t: 1, r: 1, support_threshold: 0, p_bound: 1 }.validate().is_err());
    }

    /// Σ(Π(Σ(x0), Σ(x1), Σ(x2)))
    fn single_product() -> Formula {
        let mut b = Builder::new(fld());
        let kids = (0..3)
            .map(|i| {
                let l = b.input(x(i));
                b.sum(vec![l])
            })
            .collect();
        let p = b.prod(kids);
        let s = b.sum(vec![p]);
        b.finish_formula(s).unwrap()
    }

    #[test]
    fn single_wide_product_is_one_term() {
        let f = single_product();
        let ambient: VarSet = (0..3).map(x).collect();
        let d = decompose(&f, &ambient, &DecompParams::new(3, 2)).unwrap();
        assert_eq!(d.products.len(), 1);
        assert!(d.simples.is_empty());
        assert_eq!(d.products[0].t(), 3);
        assert_eq!(d.case_fanin, 1);
        assert!(d.all_verified());
        assert_eq!(d.sum(fld()).unwrap(), f.to_polynomial(MulMode::Strict).unwrap());
    }

    #[test]
    fn cofactor_gets_the_unused_variables() {
        let f = single_product();
        let ambient: VarSet = (0..5).map(x).collect();
        let d = decompose(&f, &ambient, &DecompParams::new(2, 1)).unwrap();
        let t = &d.products[0];
        // the last child takes the remainder, so the cofactor's set is empty
        // and it is folded into the first factor
        assert_eq!(t.t(), 3);
        assert_eq!(t.factors[2].vars, VarSet::from([x(2), x(3), x(4)]));
        assert!(verify_term(&Term::Product(t.clone()), &ambient).ok());
    }

    #[test]
    fn support_threshold_yields_simple_term() {
        let f = single_product();
        let ambient: VarSet = (0..3).map(x).collect();
        let params = DecompParams { t: 4, r: 3, support_threshold: 3, p_bound: 3 };
        let d = decompose(&f, &ambient, &params).unwrap();
        assert_eq!(d.simples.len(), 1);
        let s = &d.simples[0];
        assert_eq!(s.r_prime(), 3);
        assert!(s.tail.is_none());
        assert!(d.all_verified());
    }

    #[test]
    fn inner_recursion_on_depth_two() {
        // n = 8 variables, layer-2 gates over 2 variables each: top product
        // of 4 sums, each over one product of two bottom sums.
        let mut b = Builder::new(fld());
        let mut tops = Vec::new();
        for pair in 0..4 {
            let l0 = b.input(x(2 * pair));
            let l1 = b.input(x(2 * pair + 1));
            let c = b.constant(crate::field::Fe(5));
            let s0 = b.sum(vec![l0, c]);
            let s1 = b.sum(vec![l1]);
            let p = b.prod(vec![s0, s1]);
            tops.push(b.sum(vec![p]));
        }
        let top = b.prod(tops);
        let root = b.sum(vec![top]);
        let f = b.finish_formula(root).unwrap();
        assert!(f.is_alternating(2));
        let ambient: VarSet = (0..8).map(x).collect();
        let inner = inner_depth_recursion(&f, &ambient, 2).unwrap();
        assert_eq!(inner.terms.len(), 1);
        assert!(inner.terms[0].t() >= 4);
        assert_eq!(inner.bound, Some(3.0));
        assert!(matches!(inner_depth_recursion(&f, &ambient, 1), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn defects_are_reported() {
        let ambient: VarSet = [x(0), x(1)].into();
        let bad = Term::Product(TProductTerm {
            factors: vec![Factor { poly: Polynomial::var(fld(), x(1)), vars: [x(0)].into() }],
        });
        let check = verify_term(&bad, &ambient);
        assert!(check.defects.contains(&TermDefect::SupportOutsideSet { factor: 0, var: x(1) }));
        assert!(check.defects.contains(&TermDefect::Uncovered { var: x(1) }));
        let quad = Polynomial::parse(fld(), "x[1][1][1]*x[1][1][2]").unwrap();
        let simple = Term::Simple(RSimpleTerm {
            linears: vec![Factor { poly: quad, vars: [x(0), x(1)].into() }],
            tail: None,
            r: 1,
            support_threshold: 2,
        });
        assert_eq!(verify_term(&simple, &ambient).defects, vec![TermDefect::NotLinear { factor: 0, degree: 2 }]);
    }

    #[test]
    fn shape_is_required() {
        let f = Formula::parse(fld(), "(* x[1][1][1] x[1][1][2])").unwrap();
        let ambient: VarSet = (0..2).map(x).collect();
        assert!(matches!(decompose(&f, &ambient, &DecompParams::new(1, 1)), Err(Error::Shape { .. })));
    }
}
