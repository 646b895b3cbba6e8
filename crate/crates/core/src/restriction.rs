//! Random restrictions of the matrix variables and path statistics.
//!
//! A restriction is determined by a path `π ∈ {1,2}^d` (with `π(0) = 1`)
//! and a mark vector `a ∈ {0,1}^d`. Unmarked layers become the identity or
//! the flip matrix depending on whether the path stays or switches. In a
//! marked layer, the path edge becomes a fresh `y` (odd rank among marked
//! layers) or `z` (even rank), one companion entry becomes 1 and the other
//! two become 0. For a `y` layer the companion shares the path edge's row;
//! for a `z` layer it shares its column.
//!
//! [`sample_restriction`] draws the `d` bits of `π` first and then the `d`
//! bits of `a`, each from the top bit of one `next_u32` call.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, PrimeField};
use crate::formula::{Formula, GateKind};
use crate::poly::{matrix_vars, Monomial, MulMode, Namespace, Polynomial, VarId, VarSet};

/// Image of one matrix variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Var(VarId),
    Zero,
    One,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Var(v) => write!(f, "{v}"),
            Target::Zero => f.write_str("0"),
            Target::One => f.write_str("1"),
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Target::Zero),
            "1" => Ok(Target::One),
            other => {
                let v: VarId = other.parse()?;
                if v.is_x() {
                    return Err(Error::BadRestriction(format!("target {v} is a matrix variable")));
                }
                Ok(Target::Var(v))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionRho {
    d: usize,
    pi: Vec<u8>,
    a: Vec<u8>,
    b: Vec<u8>,
    marked: Vec<usize>,
    /// Indexed by the matrix variable index `4(i−1) + 2(u−1) + (v−1)`.
    mapping: Vec<Target>,
    y: VarSet,
    z: VarSet,
}

fn other(u: usize) -> usize {
    3 - u
}

/// Builds the restriction for a given path and mark vector. Entries of `pi`
/// must be 1 or 2 and entries of `a` 0 or 1.
pub fn restriction_from(pi: &[u8], a: &[u8]) -> Result<RestrictionRho> {
    if pi.len() != a.len() {
        return Err(Error::LengthMismatch { pi: pi.len(), a: a.len() });
    }
    if let Some(bad) = pi.iter().find(|&&p| p != 1 && p != 2) {
        return Err(Error::BadRestriction(format!("path entry {bad} is not 1 or 2")));
    }
    if let Some(bad) = a.iter().find(|&&x| x > 1) {
        return Err(Error::BadRestriction(format!("mark {bad} is not a bit")));
    }
    let d = pi.len();
    let at = |i: usize| if i == 0 { 1 } else { pi[i - 1] as usize };
    let b: Vec<u8> = (1..=d).map(|i| u8::from(at(i - 1) != at(i))).collect();
    let mut mapping = vec![Target::Zero; 4 * d];
    let (mut y, mut z) = (VarSet::new(), VarSet::new());
    let mut marked = Vec::new();
    for i in 1..=d {
        let (from, to) = (at(i - 1), at(i));
        let mut set = |u: usize, v: usize, t: Target| mapping[VarId::x(i, u, v).index()] = t;
        if a[i - 1] == 0 {
            // identity if the path stays, flip if it switches
            for u in 1..=2 {
                let v = if b[i - 1] == 0 { u } else { other(u) };
                set(u, v, Target::One);
            }
            continue;
        }
        marked.push(i);
        let j = marked.len();
        if j % 2 == 1 {
            let var = VarId::y(j.div_ceil(2));
            y.insert(var);
            set(from, to, Target::Var(var));
            set(from, other(to), Target::One);
        } else {
            let var = VarId::z(j / 2);
            z.insert(var);
            set(from, to, Target::Var(var));
            set(other(from), to, Target::One);
        }
    }
    Ok(RestrictionRho { d, pi: pi.to_vec(), a: a.to_vec(), b, marked, mapping, y, z })
}

/// Draws `π` then `a`, one generator call per bit.
pub fn sample_restriction<R: RngCore + ?Sized>(d: usize, rng: &mut R) -> RestrictionRho {
    let pi: Vec<u8> = (0..d).map(|_| 1 + (rng.next_u32() >> 31) as u8).collect();
    let a: Vec<u8> = (0..d).map(|_| (rng.next_u32() >> 31) as u8).collect();
    restriction_from(&pi, &a).expect("sampled data is well formed")
}

impl RestrictionRho {
    pub fn d(&self) -> usize {
        self.d
    }

    /// `π(1..=d)`.
    pub fn pi(&self) -> &[u8] {
        &self.pi
    }

    /// `π(i)` for `0 ≤ i ≤ d`.
    pub fn pi_at(&self, i: usize) -> usize {
        if i == 0 {
            1
        } else {
            self.pi[i - 1] as usize
        }
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    /// `b_i = [π(i−1) ≠ π(i)]`.
    pub fn b(&self) -> &[u8] {
        &self.b
    }

    /// The marked layers, increasing.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn y(&self) -> &VarSet {
        &self.y
    }

    pub fn z(&self) -> &VarSet {
        &self.z
    }

    /// `min(|Y|, |Z|) = |Z|`.
    pub fn m(&self) -> usize {
        self.z.len()
    }

    /// The path edge of layer `i`.
    pub fn path_edge(&self, i: usize) -> VarId {
        VarId::x(i, self.pi_at(i - 1), self.pi_at(i))
    }

    /// Image of a matrix variable; variables outside the matrices are
    /// returned unchanged.
    pub fn target(&self, v: VarId) -> Target {
        match v.layer() {
            Some(i) if i <= self.d => self.mapping[v.index()],
            _ => Target::Var(v),
        }
    }

    /// The `Y ∪ Z` variable that `v` maps to, if any.
    pub fn image(&self, v: VarId) -> Option<VarId> {
        match self.target(v) {
            Target::Var(w) if !w.is_x() => Some(w),
            _ => None,
        }
    }

    pub fn mapping(&self) -> impl Iterator<Item = (VarId, Target)> + '_ {
        self.mapping.iter().enumerate().map(|(k, &t)| (VarId::x_from_index(k), t))
    }

    /// Checks the structural facts every restriction satisfies: the sizes of
    /// `Y` and `Z`, injectivity into `Y ∪ Z`, that only path edges reach
    /// `Y ∪ Z`, and the identity/flip pattern of unmarked layers.
    pub fn check(&self) -> Result<()> {
        let fail = |m: String| Err(Error::BadRestriction(m));
        let k = self.marked.len();
        if self.y.len() != k.div_ceil(2) || self.z.len() != k / 2 {
            return fail(format!("|Y| = {}, |Z| = {} for |A| = {k}", self.y.len(), self.z.len()));
        }
        let mut seen = BTreeSet::new();
        for (x, t) in self.mapping() {
            if let Target::Var(w) = t {
                if !seen.insert(w) {
                    return fail(format!("{w} is the image of two variables"));
                }
                let i = x.layer().expect("matrix variable");
                if x != self.path_edge(i) {
                    return fail(format!("{x} is off the path but maps to {w}"));
                }
            }
        }
        if seen.len() != k {
            return fail("image size differs from |A|".into());
        }
        for i in 1..=self.d {
            if self.a[i - 1] == 1 {
                continue;
            }
            for u in 1..=2 {
                for v in 1..=2 {
                    let expect = if (u == v) == (self.b[i - 1] == 0) { Target::One } else { Target::Zero };
                    if self.mapping[VarId::x(i, u, v).index()] != expect {
                        return fail(format!("layer {i} is not the identity or flip pattern"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn apply_to_polynomial(p: &Polynomial, rho: &RestrictionRho) -> Polynomial {
    let mut out = Polynomial::zero(p.field());
    'terms: for (m, c) in p.terms() {
        let mut vars = Vec::with_capacity(m.degree());
        for &v in m.vars() {
            match rho.target(v) {
                Target::Zero => continue 'terms,
                Target::One => {}
                Target::Var(w) => vars.push(w),
            }
        }
        let mono = Monomial::from_vars(vars).expect("restrictions are injective on Y ∪ Z");
        out.add_term(mono, c);
    }
    out
}

/// Substitutes every input leaf by its image.
pub fn apply_to_formula(f: &Formula, rho: &RestrictionRho) -> Formula {
    let mut map = HashMap::new();
    for g in f.gates() {
        if let GateKind::Input(v) = g.kind {
            let kind = match rho.target(v) {
                Target::Var(w) => GateKind::Input(w),
                Target::Zero => GateKind::Const(Fe::ZERO),
                Target::One => GateKind::Const(Fe::ONE),
            };
            map.insert(v, kind);
        }
    }
    f.substitute_inputs(&map)
}

/// `∏_{i ≤ m} (1 + y_i z_i)`, times `(1 + y_{m+1})` when `|A|` is odd.
pub fn imm_restricted_closed_form(field: PrimeField, rho: &RestrictionRho) -> Polynomial {
    let one = Polynomial::one(field);
    let mut factors = Vec::new();
    for i in 1..=rho.m() {
        let yz = Polynomial::from_terms(field, [(Monomial::from_vars([VarId::y(i), VarId::z(i)]).unwrap(), Fe::ONE)]);
        factors.push(one.add(&yz));
    }
    if rho.marked.len() % 2 == 1 {
        factors.push(one.add(&Polynomial::var(field, VarId::y(rho.m() + 1))));
    }
    factors.iter().try_fold(one.clone(), |acc, f| acc.mul(f, MulMode::Strict)).expect("factors are disjoint")
}

/// `|{ρ(x) : x ∈ U} ∩ (Y ∪ Z)|`.
pub fn touched_layer_stats(rho: &RestrictionRho, u: &VarSet) -> usize {
    u.iter().filter_map(|&x| rho.image(x)).collect::<BTreeSet<_>>().len()
}

/// A total coloring of the `4d` matrix variables with colors `0..t`, every
/// color used at least once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    d: usize,
    t: usize,
    colors: Vec<usize>,
}

impl Coloring {
    /// `colors[k]` is the color of the variable with matrix index `k`.
    pub fn new(d: usize, colors: Vec<usize>) -> Result<Coloring> {
        if colors.len() != 4 * d {
            return Err(Error::BadColoring(format!("expected {} colors, got {}", 4 * d, colors.len())));
        }
        let t = colors.iter().max().map_or(0, |&c| c + 1);
        let mut used = vec![false; t];
        for &c in &colors {
            used[c] = true;
        }
        if let Some(c) = used.iter().position(|&u| !u) {
            return Err(Error::BadColoring(format!("color {c} is never used")));
        }
        Ok(Coloring { d, t, colors })
    }

    /// One color per part; the parts must partition the matrix variables.
    pub fn from_partition(d: usize, parts: &[VarSet]) -> Result<Coloring> {
        let mut colors = vec![usize::MAX; 4 * d];
        for (c, part) in parts.iter().enumerate() {
            for &v in part {
                let k = v.index();
                if !v.is_x() || k >= 4 * d {
                    return Err(Error::BadColoring(format!("{v} is not a matrix variable for d = {d}")));
                }
                if colors[k] != usize::MAX {
                    return Err(Error::BadColoring(format!("{v} is in two parts")));
                }
                colors[k] = c;
            }
        }
        if let Some(k) = colors.iter().position(|&c| c == usize::MAX) {
            return Err(Error::BadColoring(format!("{} is uncolored", VarId::x_from_index(k))));
        }
        Coloring::new(d, colors)
    }

    /// Every layer in its own color.
    pub fn layer_monochrome(d: usize) -> Coloring {
        Coloring::new(d, (0..4 * d).map(|k| k / 4).collect()).expect("d ≥ 1")
    }

    /// Uniformly random colors, then the first `t` variables of a random
    /// order get colors `0..t` so that no class is empty. Needs `t ≤ 4d`.
    pub fn random<R: Rng + ?Sized>(d: usize, t: usize, rng: &mut R) -> Result<Coloring> {
        if t == 0 || t > 4 * d {
            return Err(Error::BadColoring(format!("cannot use {t} colors on {} variables", 4 * d)));
        }
        let mut colors: Vec<usize> = (0..4 * d).map(|_| rng.random_range(0..t)).collect();
        let mut order: Vec<usize> = (0..4 * d).collect();
        order.shuffle(rng);
        for (c, &k) in order.iter().take(t).enumerate() {
            colors[k] = c;
        }
        Coloring::new(d, colors)
    }

    /// Colors `1..t` each on `per_color` random variables; everything else
    /// gets color 0.
    pub fn sparse<R: Rng + ?Sized>(d: usize, t: usize, per_color: usize, rng: &mut R) -> Result<Coloring> {
        if t == 0 || (t - 1) * per_color >= 4 * d || per_color == 0 {
            return Err(Error::BadColoring(format!("cannot place {t} sparse colors on {} variables", 4 * d)));
        }
        let mut order: Vec<usize> = (0..4 * d).collect();
        order.shuffle(rng);
        let mut colors = vec![0usize; 4 * d];
        for (n, &k) in order.iter().take((t - 1) * per_color).enumerate() {
            colors[k] = 1 + n / per_color;
        }
        Coloring::new(d, colors)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn color_count(&self) -> usize {
        self.t
    }

    pub fn color(&self, v: VarId) -> usize {
        self.colors[v.index()]
    }

    pub fn class(&self, c: usize) -> VarSet {
        matrix_vars(self.d).into_iter().filter(|&v| self.color(v) == c).collect()
    }
}

/// Restricted path edges of one color.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ColorPath {
    pub layers: Vec<usize>,
    pub y: usize,
    pub z: usize,
}

impl ColorPath {
    pub fn imbalanced(&self) -> bool {
        self.y != self.z
    }

    pub fn odd(&self) -> bool {
        (self.y + self.z) % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathColorStats {
    /// Per color on the path, its path edges and how many map into Y and Z.
    pub per_color: BTreeMap<usize, ColorPath>,
    /// Number of colors with an imbalance.
    pub imbalanced: usize,
}

impl PathColorStats {
    pub fn colors_on_path(&self) -> BTreeSet<usize> {
        self.per_color.keys().copied().collect()
    }
}

pub fn path_color_stats(rho: &RestrictionRho, chi: &Coloring) -> Result<PathColorStats> {
    if chi.d != rho.d {
        return Err(Error::BadColoring(format!("coloring is for d = {}, restriction for d = {}", chi.d, rho.d)));
    }
    let mut per_color: BTreeMap<usize, ColorPath> = BTreeMap::new();
    for i in 1..=rho.d {
        let e = rho.path_edge(i);
        let entry = per_color.entry(chi.color(e)).or_default();
        entry.layers.push(i);
        if let Some(w) = rho.image(e) {
            match w.namespace() {
                Namespace::Y => entry.y += 1,
                Namespace::Z => entry.z += 1,
                Namespace::X => unreachable!("images lie in Y ∪ Z"),
            }
        }
    }
    let imbalanced = per_color.values().filter(|c| c.imbalanced()).count();
    Ok(PathColorStats { per_color, imbalanced })
}

/// JSON form of a restriction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoJson {
    pub d: usize,
    pub pi: Vec<u8>,
    pub a: Vec<u8>,
    #[serde(rename = "A")]
    pub marked: Vec<usize>,
    pub mapping: Vec<MappingEntry>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub var: String,
    pub target: String,
}

impl RestrictionRho {
    pub fn to_json(&self) -> RhoJson {
        RhoJson {
            d: self.d,
            pi: self.pi.clone(),
            a: self.a.clone(),
            marked: self.marked.clone(),
            mapping: self.mapping().map(|(v, t)| MappingEntry { var: v.to_string(), target: t.to_string() }).collect(),
            y: self.y.iter().map(ToString::to_string).collect(),
            z: self.z.iter().map(ToString::to_string).collect(),
            m: self.m(),
        }
    }

    /// Rebuilds from `pi` and `a` and checks that every other field agrees.
    pub fn from_json(j: &RhoJson) -> Result<RestrictionRho> {
        let rho = restriction_from(&j.pi, &j.a)?;
        if rho.d != j.d || rho.marked != j.marked || rho.m() != j.m {
            return Err(Error::BadRestriction("d, A or m disagree with pi and a".into()));
        }
        if rho.to_json().y != j.y || rho.to_json().z != j.z {
            return Err(Error::BadRestriction("Y or Z disagree with pi and a".into()));
        }
        if !j.mapping.is_empty() {
            let mut listed = HashMap::new();
            for e in &j.mapping {
                let v: VarId = e.var.parse()?;
                listed.insert(v, e.target.parse::<Target>()?);
            }
            if listed.len() != 4 * rho.d || rho.mapping().any(|(v, t)| listed.get(&v) != Some(&t)) {
                return Err(Error::BadRestriction("mapping disagrees with pi and a".into()));
            }
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imm::imm_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn worked_instance() -> RestrictionRho {
        restriction_from(&[2, 2, 1, 1, 1, 2, 2, 1, 1], &[1, 0, 1, 0, 1, 0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn worked_instance_restricts() {
        let rho = worked_instance();
        assert_eq!(rho.marked(), &[1, 3, 5, 7, 9]);
        assert_eq!(rho.m(), 2);
        assert_eq!(rho.y(), &VarSet::from([VarId::y(1), VarId::y(2), VarId::y(3)]));
        assert_eq!(rho.z(), &VarSet::from([VarId::z(1), VarId::z(2)]));
        assert_eq!(rho.target(VarId::x(1, 1, 2)), Target::Var(VarId::y(1)));
        assert_eq!(rho.target(VarId::x(1, 1, 1)), Target::One);
        rho.check().unwrap();
        let f = PrimeField::default();
        let restricted = apply_to_polynomial(&imm_polynomial(f, 9).unwrap(), &rho);
        let factors: Vec<Polynomial> =
            ["1 + y[1]*z[1]", "1 + y[2]*z[2]", "1 + y[3]"].iter().map(|s| Polynomial::parse(f, s).unwrap()).collect();
        let expected = Polynomial::product(f, &factors).unwrap();
        assert_eq!(restricted, expected);
        assert_eq!(imm_restricted_closed_form(f, &rho), expected);
        assert_eq!(expected.len(), 8);
    }

    #[test]
    fn unmarked_restriction_is_constant_one() {
        let f = PrimeField::default();
        let rho = restriction_from(&[2, 1, 1, 2], &[0, 0, 0, 0]).unwrap();
        assert_eq!(rho.b(), &[1, 1, 0, 1]);
        assert_eq!(apply_to_polynomial(&imm_polynomial(f, 4).unwrap(), &rho), Polynomial::one(f));
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(restriction_from(&[1, 2], &[1]).unwrap_err(), Error::LengthMismatch { pi: 2, a: 1 });
        assert!(restriction_from(&[3], &[1]).is_err());
        assert!(restriction_from(&[1], &[2]).is_err());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let r1 = sample_restriction(12, &mut ChaCha8Rng::seed_from_u64(5));
        let r2 = sample_restriction(12, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(r1, r2);
        r1.check().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let rho = worked_instance();
        let j = rho.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: RhoJson = serde_json::from_str(&text).unwrap();
        assert_eq!(RestrictionRho::from_json(&back).unwrap(), rho);
        let mut tampered = back.clone();
        tampered.mapping[0].target = "0".into();
        assert!(RestrictionRho::from_json(&tampered).is_err());
    }

    #[test]
    fn single_color_stats() {
        let rho = worked_instance();
        let chi = Coloring::new(9, vec![0; 36]).unwrap();
        let s = path_color_stats(&rho, &chi).unwrap();
        assert_eq!(s.colors_on_path(), BTreeSet::from([0]));
        assert_eq!(s.per_color[&0].y, 3);
        assert_eq!(s.per_color[&0].z, 2);
        assert_eq!(s.imbalanced, 1);
        assert_eq!(touched_layer_stats(&rho, &matrix_vars(9)), 5);
        assert_eq!(touched_layer_stats(&rho, &VarSet::new()), 0);
    }

    #[test]
    fn colorings_validate() {
        assert!(Coloring::new(1, vec![0, 0, 2, 0]).is_err());
        assert!(Coloring::new(1, vec![0, 0]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Coloring::random(4, 16, &mut rng).unwrap();
        assert_eq!(c.color_count(), 16);
        let s = Coloring::sparse(8, 5, 2, &mut rng).unwrap();
        assert_eq!(s.color_count(), 5);
        assert_eq!(s.class(3).len(), 2);
    }
}
