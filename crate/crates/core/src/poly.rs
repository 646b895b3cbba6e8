//! Sparse multilinear polynomials over a prime field.
//!
//! A [`Polynomial`] is a map from [`Monomial`] to nonzero coefficient. Zero
//! coefficients are never stored, so two polynomials are equal exactly when
//! their term maps are equal.
//!
//! # Text format
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ['-'] digits | var
//! var    := 'x[' i '][' u '][' v ']' | 'y[' j ']' | 'z[' j ']'
//! ```
//!
//! Whitespace is free between tokens. Negative literals are reduced mod p.
//! The printer emits the canonical form: terms in monomial order joined by
//! `" + "`, each term as `c*v1*v2*...` (a bare `c` for the constant term),
//! and `0` for the zero polynomial; `parse(print(f)) == f` and
//! `print(parse(s)) == s` for canonical `s`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, PrimeField};
use crate::text::Cursor;
pub use crate::var::{matrix_vars, Monomial, Namespace, VarId, VarSet};

/// How [`Polynomial::mul`] treats factors whose supports intersect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulMode {
    /// Supports must be disjoint; otherwise the product is rejected up front.
    Strict,
    /// Supports may overlap as long as every non-multilinear monomial of the
    /// product cancels.
    Lenient,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: PrimeField,
    terms: BTreeMap<Monomial, Fe>,
}

impl Polynomial {
    pub fn zero(field: PrimeField) -> Self {
        Polynomial { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, c: Fe) -> Self {
        let mut p = Self::zero(field);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn var(field: PrimeField, v: VarId) -> Self {
        let mut p = Self::zero(field);
        p.add_term(Monomial::var(v), Fe::ONE);
        p
    }

    /// Sums the given terms; repeated monomials accumulate.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Fe)>>(field: PrimeField, terms: I) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fe)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant polynomial value, if this is a constant.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(Fe::ZERO),
            1 => self.terms.get(&Monomial::one()).copied(),
            _ => None,
        }
    }

    /// Adds `c * m` in place, keeping the canonical form.
    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_field(&self, other: &Polynomial) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_field(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(Fe::ONE))
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field);
        }
        let f = self.field;
        Polynomial {
            field: f,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), f.mul(*v, c))).collect(),
        }
    }

    /// Exact product. In [`MulMode::Strict`] the supports must be disjoint.
    pub fn mul(&self, other: &Polynomial, mode: MulMode) -> Result<Polynomial> {
        self.check_field(other);
        if mode == MulMode::Strict {
            let sa = self.support();
            if let Some(v) = other.support().into_iter().find(|v| sa.contains(v)) {
                return Err(Error::MultilinearityViolation { var: v });
            }
        }
        let f = self.field;
        let mut out = Polynomial::zero(f);
        // Products with a repeated variable, keyed by their sorted multiset.
        let mut excess: BTreeMap<Vec<VarId>, Fe> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = f.mul(*ca, *cb);
                match ma.mul(mb) {
                    Ok(m) => out.add_term(m, c),
                    Err(_) => {
                        let mut key: Vec<VarId> = ma.vars().iter().chain(mb.vars()).copied().collect();
                        key.sort_unstable();
                        let e = excess.entry(key).or_insert(Fe::ZERO);
                        *e = f.add(*e, c);
                    }
                }
            }
        }
        if let Some((key, _)) = excess.iter().find(|(_, c)| !c.is_zero()) {
            let var = key.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]).unwrap();
            return Err(Error::MultilinearityViolation { var });
        }
        Ok(out)
    }

    /// Strict product of several polynomials; the empty product is 1.
    pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(field: PrimeField, factors: I) -> Result<Polynomial> {
        let mut acc = Polynomial::one(field);
        for g in factors {
            acc = acc.mul(g, MulMode::Strict)?;
        }
        Ok(acc)
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    pub fn support(&self) -> VarSet {
        self.terms.keys().flat_map(|m| m.vars().iter().copied()).collect()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, assignment: &HashMap<VarId, Fe>) -> Result<Fe> {
        self.eval_with(|v| assignment.get(&v).copied())
    }

    pub fn eval_with<F: Fn(VarId) -> Option<Fe>>(&self, value: F) -> Result<Fe> {
        let f = self.field;
        let mut acc = Fe::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for &v in m.vars() {
                let x = value(v).ok_or(Error::MissingAssignment { var: v })?;
                t = f.mul(t, x);
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// Parses the text format described in the module docs.
    pub fn parse(field: PrimeField, s: &str) -> Result<Polynomial> {
        let mut cur = Cursor::new(s);
        let mut out = Polynomial::zero(field);
        let mut negate = false;
        loop {
            let (m, c) = parse_term(&mut cur, field)?;
            out.add_term(m, if negate { field.neg(c) } else { c });
            match cur.peek_token() {
                None => break,
                Some(b'+') => {
                    cur.eat(b'+');
                    negate = false;
                }
                Some(b'-') => {
                    cur.eat(b'-');
                    negate = true;
                }
                Some(_) => return Err(cur.error("expected '+', '-' or end of input")),
            }
        }
        Ok(out)
    }
}

fn parse_term(cur: &mut Cursor<'_>, field: PrimeField) -> Result<(Monomial, Fe)> {
    let mut coeff = Fe::ONE;
    let mut vars = Vec::new();
    loop {
        match cur.peek_token() {
            Some(b'x' | b'y' | b'z') => vars.push(cur.var()?),
            Some(c) if c == b'-' || c.is_ascii_digit() => coeff = field.mul(coeff, field.from_i64(cur.integer()?)),
            _ => return Err(cur.error("expected a coefficient or variable")),
        }
        if cur.peek_token() == Some(b'*') {
            cur.eat(b'*');
        } else {
            break;
        }
    }
    Ok((Monomial::from_vars(vars)?, coeff))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for v in m.vars() {
                write!(f, "*{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial(GF({}): {})", self.field.modulus(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld() -> PrimeField {
        PrimeField::default()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(fld(), s).unwrap()
    }

    #[test]
    fn cancellation_and_identity() {
        let x = VarId::x(1, 1, 1);
        let f = fld();
        let a = Polynomial::var(f, x).add(&Polynomial::one(f));
        let b = Polynomial::var(f, x).neg();
        let s = a.add(&b);
        assert_eq!(s, Polynomial::one(f));
        assert_eq!(s.len(), 1);
        assert_eq!(b.coefficient(&Monomial::var(x)), Fe((f.modulus() - 1) as u32));
        assert_eq!(a.add(&Polynomial::zero(f)), a);
    }

    #[test]
    fn expansion_of_disjoint_product() {
        let a = p("1 + y[1]*z[1]");
        let b = p("1 + y[2]*z[2]");
        let prod = a.mul(&b, MulMode::Strict).unwrap();
        assert_eq!(prod, p("1 + y[1]*z[1] + y[2]*z[2] + y[1]*y[2]*z[1]*z[2]"));
    }

    #[test]
    fn strict_mul_rejects_shared_variable() {
        let x = VarId::x(1, 1, 1);
        let a = p("x[1][1][1]");
        let b = p("x[1][1][1] + 1");
        assert_eq!(a.mul(&b, MulMode::Strict), Err(Error::MultilinearityViolation { var: x }));
        assert_eq!(a.mul(&b, MulMode::Lenient), Err(Error::MultilinearityViolation { var: x }));
    }

    #[test]
    fn lenient_mul_matches_strict_on_disjoint_inputs() {
        let a = p("x[1][1][1] + y[1]");
        let b = p("y[2] + x[2][1][1]");
        assert_eq!(a.mul(&b, MulMode::Lenient).unwrap(), a.mul(&b, MulMode::Strict).unwrap());
        // a shared variable always leaves a squared term behind
        let c = p("x[1][1][1]*y[2] + y[1]");
        assert!(a.mul(&c, MulMode::Lenient).is_err());
    }

    #[test]
    fn coefficient_lookup() {
        let g = p("1 + y[1]*z[1]");
        let yz = Monomial::from_vars([VarId::y(1), VarId::z(1)]).unwrap();
        assert_eq!(g.coefficient(&yz), Fe::ONE);
        assert_eq!(g.coefficient(&Monomial::var(VarId::y(1))), Fe::ZERO);
    }

    #[test]
    fn evaluation() {
        let g = p("1 + y[1]*z[1]");
        let mut a = HashMap::new();
        a.insert(VarId::y(1), Fe::ONE);
        assert_eq!(g.eval(&a), Err(Error::MissingAssignment { var: VarId::z(1) }));
        a.insert(VarId::z(1), Fe::ONE);
        assert_eq!(g.eval(&a).unwrap(), Fe(2));
    }

    #[test]
    fn support_of_small_polys() {
        assert!(Polynomial::zero(fld()).support().is_empty());
        let s: Vec<VarId> = p("1 + y[1]*z[1]").support().into_iter().collect();
        assert_eq!(s, vec![VarId::y(1), VarId::z(1)]);
    }

    #[test]
    fn text_format_canonical() {
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("z[1]*y[1] + 1").to_string(), "1 + 1*y[1]*z[1]");
        assert_eq!(p("3 - 3").to_string(), "0");
        assert_eq!(p("-1").to_string(), format!("{}", fld().modulus() - 1));
        assert_eq!(p("2*x[1][1][2]*3").to_string(), "6*x[1][1][2]");
        assert!(Polynomial::parse(fld(), "x[1][1][1]*x[1][1][1]").is_err());
        assert!(Polynomial::parse(fld(), "1 +").is_err());
        assert!(Polynomial::parse(fld(), "q").is_err());
    }
}
