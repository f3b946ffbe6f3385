//! Sparse graded polynomials in the three variable families x_k, y_k, z_k.
//!
//! The grading assigns degree k to each of x_k, y_k, z_k, so a monomial's
//! degree is the sum of index times exponent over its entries. All maps are
//! canonical: no zero exponents, no zero coefficients, and two values are
//! equal iff their maps are identical. Values are immutable in spirit;
//! every operation returns a fresh polynomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{format_rational, int, Scalar};

/// The three countable variable families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    X,
    Y,
    Z,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::Y => 'y',
            Family::Z => 'z',
        }
    }
}

/// One indeterminate: a family plus a positive index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef {
    pub family: Family,
    pub index: i64,
}

/// Shorthand constructor; indices start at 1.
pub fn var(family: Family, index: i64) -> VarRef {
    assert!(index >= 1, "variable index must be >= 1, got {index}");
    VarRef { family, index }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family.letter(), self.index)
    }
}

/// A sparse monomial: variable -> positive exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<VarRef, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarRef) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(v, 1);
        Monomial { exps }
    }

    pub fn from_exps(entries: impl IntoIterator<Item = (VarRef, u32)>) -> Self {
        let mut exps = BTreeMap::new();
        for (v, e) in entries {
            if e > 0 {
                *exps.entry(v).or_insert(0) += e;
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Graded degree: sum of index * exponent.
    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|(v, &e)| v.index * e as i64).sum()
    }

    pub fn exponent(&self, v: VarRef) -> u32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> impl Iterator<Item = (VarRef, u32)> + '_ {
        self.exps.iter().map(|(v, e)| (*v, *e))
    }

    /// Sum of exponents within one family (count, not graded degree).
    pub fn exponent_sum(&self, family: Family) -> i64 {
        self.exps
            .iter()
            .filter(|(v, _)| v.family == family)
            .map(|(_, &e)| e as i64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (v, e) in &other.exps {
            *exps.entry(*v).or_insert(0) += e;
        }
        Monomial { exps }
    }

    /// Formal partial derivative: (coefficient, lowered monomial), or None.
    pub fn partial(&self, v: VarRef) -> Option<(Scalar, Monomial)> {
        let e = *self.exps.get(&v)?;
        let mut exps = self.exps.clone();
        if e == 1 {
            exps.remove(&v);
        } else {
            exps.insert(v, e - 1);
        }
        Some((int(e as i64), Monomial { exps }))
    }
}

/// Graded order: by degree first, then lexicographically on the sparse
/// exponent list (family X < Y < Z, then index). Deterministic everywhere.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(v, &e)| {
                if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(int(1))
    }

    pub fn constant(s: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), s);
        p
    }

    pub fn var(v: VarRef) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(v), int(1));
        p
    }

    pub fn monomial(m: Monomial, s: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, s);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Accumulate a term, dropping it if the result is zero.
    pub fn add_term(&mut self, m: Monomial, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &s;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero();
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Multiply by a single scaled monomial.
    pub fn mul_term(&self, m: &Monomial, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero();
        if s.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1 * s);
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: VarRef) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((k, lowered)) = m.partial(v) {
                out.add_term(lowered, c * &k);
            }
        }
        out
    }

    /// Largest degree among the terms; None for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// The common degree if every term shares it; None otherwise or if zero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Drop all monomials of degree greater than `cap`.
    pub fn truncate(&self, cap: i64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.degree() <= cap {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // leading term first
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = crate::scalar::is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse_polynomial(s)
    }
}

/// Parse the textual format emitted by `Display`, e.g. "3/2*x_1^2*y_3 - z_2".
pub fn parse_polynomial(input: &str) -> Result<Polynomial, Error> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        input,
    };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in '{}'",
            self.pos, self.input
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial, Error> {
        let mut out = Polynomial::zero();
        self.skip_ws();
        let mut sign = int(1);
        if self.peek() == Some('-') {
            self.bump();
            sign = int(-1);
        } else if self.peek() == Some('+') {
            self.bump();
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    sign = int(1);
                }
                Some('-') => {
                    self.bump();
                    sign = int(-1);
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar), Error> {
        let mut coeff = int(1);
        let mut mono = Monomial::one();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.rational()?,
                Some('x') | Some('y') | Some('z') => {
                    let (v, e) = self.power()?;
                    mono = mono.mul(&Monomial::from_exps([(v, e)]));
                }
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn rational(&mut self) -> Result<Scalar, Error> {
        let n = self.integer()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let d = self.integer()?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(crate::scalar::rat(n, d))
        } else {
            Ok(int(n))
        }
    }

    fn integer(&mut self) -> Result<i64, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer overflow"))
    }

    fn power(&mut self) -> Result<(VarRef, u32), Error> {
        let family = match self.bump() {
            Some('x') => Family::X,
            Some('y') => Family::Y,
            Some('z') => Family::Z,
            _ => return Err(self.err("expected x, y or z")),
        };
        if self.bump() != Some('_') {
            return Err(self.err("expected '_' after variable family"));
        }
        let index = self.integer()?;
        if index < 1 {
            return Err(self.err("variable index must be >= 1"));
        }
        let mut exp = 1u32;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.integer()?;
            if e < 1 {
                return Err(self.err("exponent must be >= 1"));
            }
            exp = e as u32;
        }
        Ok((var(family, index), exp))
    }
}

/// All monomials of graded degree <= cap, in increasing `Monomial` order.
/// Includes the constant monomial.
pub fn monomials_up_to_degree(cap: i64) -> Vec<Monomial> {
    let mut vars = Vec::new();
    for family in [Family::X, Family::Y, Family::Z] {
        for index in 1..=cap.max(0) {
            vars.push(var(family, index));
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<(VarRef, u32)> = Vec::new();
    fn rec(
        vars: &[VarRef],
        i: usize,
        remaining: i64,
        current: &mut Vec<(VarRef, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if i == vars.len() {
            out.push(Monomial::from_exps(current.iter().copied()));
            return;
        }
        let v = vars[i];
        let max_exp = remaining / v.index;
        for e in 0..=max_exp {
            if e > 0 {
                current.push((v, e as u32));
            }
            rec(vars, i + 1, remaining - e * v.index, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    rec(&vars, 0, cap.max(0), &mut current, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(i: i64) -> Polynomial {
        Polynomial::var(var(Family::X, i))
    }
    fn y(i: i64) -> Polynomial {
        Polynomial::var(var(Family::Y, i))
    }
    fn z(i: i64) -> Polynomial {
        Polynomial::var(var(Family::Z, i))
    }

    #[test]
    fn add_cancels_inverse() {
        assert!(x(1).add(&x(1).neg()).is_zero());
    }

    #[test]
    fn add_merges_like_terms() {
        let lhs = y(1).add(&z(2)).add(&z(2));
        let rhs = y(1).add(&z(2).scale(&int(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mul_adds_exponents() {
        let p = x(1).mul(&x(1));
        let m = Monomial::from_exps([(var(Family::X, 1), 2)]);
        assert_eq!(p, Polynomial::monomial(m, int(1)));
    }

    #[test]
    fn mul_distributes() {
        let p = y(1).add(&y(2)).mul(&z(1));
        assert_eq!(p, y(1).mul(&z(1)).add(&y(2).mul(&z(1))));
    }

    #[test]
    fn degree_is_weighted() {
        let m = Monomial::from_exps([
            (var(Family::X, 2), 1),
            (var(Family::Y, 1), 1),
            (var(Family::Z, 3), 1),
        ]);
        assert_eq!(m.degree(), 6);
        assert_eq!(Monomial::one().degree(), 0);
        assert_eq!(Monomial::from_exps([(var(Family::X, 1), 3)]).degree(), 3);
    }

    #[test]
    fn partial_examples() {
        let z1sq = z(1).mul(&z(1));
        assert_eq!(z1sq.partial(var(Family::Z, 1)), z(1).scale(&int(2)));
        assert!(x(1).mul(&y(3)).partial(var(Family::X, 2)).is_zero());
        let p = y(2).mul(&y(2)).mul(&z(1));
        assert_eq!(p.partial(var(Family::Y, 2)), y(2).mul(&z(1)).scale(&int(2)));
    }

    #[test]
    fn truncate_examples() {
        let p = x(1).add(&x(1).mul(&x(2)));
        assert_eq!(p.truncate(2), x(1));
        let homog = x(1).mul(&y(1));
        assert_eq!(homog.truncate(2), homog);
        assert!(Polynomial::zero().truncate(5).is_zero());
    }

    #[test]
    fn display_format() {
        let p = x(1)
            .mul(&x(1))
            .mul(&y(3))
            .scale(&rat(3, 2))
            .add(&z(2).neg());
        assert_eq!(p.to_string(), "3/2*x_1^2*y_3 - z_2");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::constant(rat(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn parse_round_trip_fixed() {
        for s in [
            "0",
            "1",
            "-1/2",
            "x_1",
            "3/2*x_1^2*y_3 - z_2",
            "x_1*y_2 + 2*z_3 - 5",
        ] {
            let p: Polynomial = s.parse().unwrap();
            let q: Polynomial = p.to_string().parse().unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("x_0".parse::<Polynomial>().is_err());
        assert!("w_1".parse::<Polynomial>().is_err());
        assert!("1/0".parse::<Polynomial>().is_err());
        assert!("x_1 +".parse::<Polynomial>().is_err());
    }

    #[test]
    fn monomial_enumeration_counts() {
        // 3-colored partitions of n, cumulative: 1, 3, 9, 22, 51, 108
        let counts: Vec<usize> = (0..=5)
            .map(|d| {
                monomials_up_to_degree(d)
                    .iter()
                    .filter(|m| m.degree() == d)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![1, 3, 9, 22, 51, 108]);
        assert_eq!(monomials_up_to_degree(5).len(), 194);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_var() -> impl Strategy<Value = VarRef> {
            (0..3usize, 1..4i64).prop_map(|(f, i)| {
                let family = [Family::X, Family::Y, Family::Z][f];
                var(family, i)
            })
        }

        fn arb_poly() -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(
                (
                    proptest::collection::vec((arb_var(), 1..3u32), 0..3),
                    -4..5i64,
                ),
                0..4,
            )
            .prop_map(|terms| {
                let mut p = Polynomial::zero();
                for (entries, c) in terms {
                    p.add_term(Monomial::from_exps(entries), int(c));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            }

            #[test]
            fn additive_identity(p in arb_poly()) {
                prop_assert_eq!(p.add(&Polynomial::zero()), p.clone());
                prop_assert!(p.sub(&p).is_zero());
            }

            #[test]
            fn leibniz_rule(p in arb_poly(), q in arb_poly(), v in arb_var()) {
                let lhs = p.mul(&q).partial(v);
                let rhs = p.partial(v).mul(&q).add(&p.mul(&q.partial(v)));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn derivative_respects_grading(m in proptest::collection::vec((arb_var(), 1..3u32), 0..4), v in arb_var()) {
                let mono = Monomial::from_exps(m);
                let deg = mono.degree();
                let d = Polynomial::monomial(mono, int(1)).partial(v);
                if !d.is_zero() {
                    prop_assert_eq!(d.homogeneous_degree(), Some(deg - v.index));
                }
            }

            #[test]
            fn product_degree_adds(a in arb_poly(), b in arb_poly()) {
                if let (Some(da), Some(db)) = (a.homogeneous_degree(), b.homogeneous_degree()) {
                    let p = a.mul(&b);
                    if !p.is_zero() {
                        prop_assert_eq!(p.homogeneous_degree(), Some(da + db));
                    }
                }
            }

            #[test]
            fn display_parse_round_trip(p in arb_poly()) {
                let q: Polynomial = p.to_string().parse().unwrap();
                prop_assert_eq!(p, q);
            }

            #[test]
            fn canonicalization_is_idempotent(p in arb_poly(), q in arb_poly()) {
                // rebuilding any result term by term changes nothing
                let r = p.mul(&q).add(&p);
                let mut rebuilt = Polynomial::zero();
                for (m, c) in r.terms() {
                    rebuilt.add_term(m.clone(), c.clone());
                }
                prop_assert_eq!(r, rebuilt);
            }
        }
    }
}
