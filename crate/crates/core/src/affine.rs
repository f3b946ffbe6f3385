//! The abstract affine Lie algebra: generator labels, structure constants,
//! the dagger involution, and the PBW order on negative modes.
//!
//! Basis: the central element kappa, the grading element d, and the loop
//! generators e[n], h[n], f[n] for all integers n. Nonzero brackets:
//!
//!   [h[m], e[n]] = 2 e[m+n]
//!   [h[m], f[n]] = -2 f[m+n]
//!   [h[m], h[n]] = 2 m kappa delta_{m+n,0}
//!   [e[m], f[n]] = h[m+n] + m kappa delta_{m+n,0}
//!   [d, a[n]]    = n a[n]
//!
//! and everything else vanishes.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::scalar::{int, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenFamily {
    E,
    H,
    F,
    Kappa,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorLabel {
    family: GenFamily,
    mode: i64,
}

impl GeneratorLabel {
    pub fn e(mode: i64) -> Self {
        GeneratorLabel {
            family: GenFamily::E,
            mode,
        }
    }

    pub fn h(mode: i64) -> Self {
        GeneratorLabel {
            family: GenFamily::H,
            mode,
        }
    }

    pub fn f(mode: i64) -> Self {
        GeneratorLabel {
            family: GenFamily::F,
            mode,
        }
    }

    pub fn kappa() -> Self {
        GeneratorLabel {
            family: GenFamily::Kappa,
            mode: 0,
        }
    }

    pub fn d() -> Self {
        GeneratorLabel {
            family: GenFamily::D,
            mode: 0,
        }
    }

    pub fn loop_gen(family: GenFamily, mode: i64) -> Self {
        assert!(matches!(family, GenFamily::E | GenFamily::H | GenFamily::F));
        GeneratorLabel { family, mode }
    }

    pub fn family(&self) -> GenFamily {
        self.family
    }

    pub fn mode(&self) -> i64 {
        self.mode
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.family, GenFamily::E | GenFamily::H | GenFamily::F)
    }

    /// Contribution to the h[0] weight: +2 for e, 0 for h, -2 for f.
    pub fn h0_weight(&self) -> i64 {
        match self.family {
            GenFamily::E => 2,
            GenFamily::F => -2,
            _ => 0,
        }
    }

    /// The anti-linear involution. It has no defined image for d.
    pub fn dagger(&self) -> Result<GeneratorLabel, Error> {
        match self.family {
            GenFamily::Kappa => Ok(*self),
            GenFamily::E => Ok(GeneratorLabel::f(-self.mode)),
            GenFamily::F => Ok(GeneratorLabel::e(-self.mode)),
            GenFamily::H => Ok(GeneratorLabel::h(-self.mode)),
            GenFamily::D => Err(Error::DaggerOfD),
        }
    }

    /// Key realizing the PBW order on negative modes: mode ascending, then
    /// family e < h < f. Total on all loop generators, used internally for
    /// normal ordering.
    pub(crate) fn pbw_key(&self) -> (i64, u8) {
        let fam = match self.family {
            GenFamily::E => 0,
            GenFamily::H => 1,
            GenFamily::F => 2,
            _ => panic!("pbw_key on non-loop generator {self}"),
        };
        (self.mode, fam)
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GenFamily::Kappa => write!(f, "kappa"),
            GenFamily::D => write!(f, "d"),
            GenFamily::E => write!(f, "e[{}]", self.mode),
            GenFamily::H => write!(f, "h[{}]", self.mode),
            GenFamily::F => write!(f, "f[{}]", self.mode),
        }
    }
}

impl FromStr for GeneratorLabel {
    type Err = Error;

    /// Accepts "e[-2]", "h[0]", "f[3]", "kappa", "d".
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t {
            "kappa" => return Ok(GeneratorLabel::kappa()),
            "d" => return Ok(GeneratorLabel::d()),
            _ => {}
        }
        let bad = || Error::Parse(format!("invalid generator '{s}'"));
        let (head, rest) = t.split_at(t.len().min(1));
        let family = match head {
            "e" => GenFamily::E,
            "h" => GenFamily::H,
            "f" => GenFamily::F,
            _ => return Err(bad()),
        };
        let rest = rest.strip_prefix('[').ok_or_else(bad)?;
        let rest = rest.strip_suffix(']').ok_or_else(bad)?;
        let mode: i64 = rest.trim().parse().map_err(|_| bad())?;
        Ok(GeneratorLabel::loop_gen(family, mode))
    }
}

/// A bracket value: finitely many scalar multiples of generators. At most
/// two terms ever occur (one loop generator plus possibly a kappa multiple).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BracketResult {
    pub terms: Vec<(Scalar, GeneratorLabel)>,
}

impl BracketResult {
    fn zero() -> Self {
        BracketResult::default()
    }

    fn single(c: i64, g: GeneratorLabel) -> Self {
        if c == 0 {
            return BracketResult::zero();
        }
        BracketResult {
            terms: vec![(int(c), g)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn negated(&self) -> Self {
        BracketResult {
            terms: self.terms.iter().map(|(c, g)| (-c.clone(), *g)).collect(),
        }
    }
}

/// Structure constants of the algebra, kappa central, [d, a[n]] = n a[n].
pub fn bracket(a: GeneratorLabel, b: GeneratorLabel) -> BracketResult {
    use GenFamily::*;
    match (a.family, b.family) {
        (Kappa, _) | (_, Kappa) => BracketResult::zero(),
        (D, D) => BracketResult::zero(),
        (D, _) => BracketResult::single(b.mode, b),
        (_, D) => BracketResult::single(-a.mode, a),
        (H, E) => BracketResult::single(2, GeneratorLabel::e(a.mode + b.mode)),
        (H, F) => BracketResult::single(-2, GeneratorLabel::f(a.mode + b.mode)),
        (H, H) => {
            if a.mode + b.mode == 0 {
                BracketResult::single(2 * a.mode, GeneratorLabel::kappa())
            } else {
                BracketResult::zero()
            }
        }
        (E, F) => {
            let mut terms = vec![(int(1), GeneratorLabel::h(a.mode + b.mode))];
            if a.mode + b.mode == 0 && a.mode != 0 {
                terms.push((int(a.mode), GeneratorLabel::kappa()));
            }
            BracketResult { terms }
        }
        (E, E) | (F, F) => BracketResult::zero(),
        (E, H) | (F, H) | (F, E) => bracket(b, a).negated(),
    }
}

/// Strict PBW order on negative-mode generators: mode ascending, then
/// family e < h < f. Rejects nonnegative modes.
pub fn pbw_less(a: GeneratorLabel, b: GeneratorLabel) -> Result<bool, Error> {
    if !a.is_loop() || a.mode >= 0 || !b.is_loop() || b.mode >= 0 {
        return Err(Error::PbwOrderNonNegative(a.to_string(), b.to_string()));
    }
    Ok(a.pbw_key() < b.pbw_key())
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorLabel as G;

    /// Expand [x, result] linearly, for the Jacobi check.
    fn bracket_left(x: G, r: &BracketResult) -> Vec<(Scalar, G)> {
        let mut out = Vec::new();
        for (c, g) in &r.terms {
            for (c2, g2) in bracket(x, *g).terms {
                out.push((c * &c2, g2));
            }
        }
        out
    }

    fn collect(terms: Vec<(Scalar, G)>) -> std::collections::BTreeMap<G, Scalar> {
        let mut map = std::collections::BTreeMap::new();
        for (c, g) in terms {
            let e = map.entry(g).or_insert_with(|| int(0));
            *e += c;
        }
        map.retain(|_, v| !num_traits::Zero::is_zero(v));
        map
    }

    fn all_generators(mode_bound: i64) -> Vec<G> {
        let mut v = vec![G::kappa(), G::d()];
        for n in -mode_bound..=mode_bound {
            v.push(G::e(n));
            v.push(G::h(n));
            v.push(G::f(n));
        }
        v
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(
            bracket(G::h(2), G::e(-1)),
            BracketResult {
                terms: vec![(int(2), G::e(1))]
            }
        );
        assert_eq!(
            bracket(G::e(2), G::f(-2)),
            BracketResult {
                terms: vec![(int(1), G::h(0)), (int(2), G::kappa())]
            }
        );
        assert!(bracket(G::e(1), G::e(5)).is_zero());
        assert!(bracket(G::kappa(), G::h(3)).is_zero());
        assert_eq!(
            bracket(G::d(), G::f(-2)),
            BracketResult {
                terms: vec![(int(-2), G::f(-2))]
            }
        );
    }

    #[test]
    fn at_most_two_terms() {
        for a in all_generators(4) {
            for b in all_generators(4) {
                assert!(bracket(a, b).terms.len() <= 2);
            }
        }
    }

    #[test]
    fn antisymmetry() {
        for a in all_generators(4) {
            for b in all_generators(4) {
                assert_eq!(
                    collect(bracket(a, b).terms),
                    collect(bracket(b, a).negated().terms),
                    "[{a},{b}] != -[{b},{a}]"
                );
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        let gens = all_generators(3);
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let mut total = Vec::new();
                    total.extend(bracket_left(a, &bracket(b, c)));
                    total.extend(bracket_left(b, &bracket(c, a)));
                    total.extend(bracket_left(c, &bracket(a, b)));
                    assert!(collect(total).is_empty(), "Jacobi fails on ({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(G::e(3).dagger().unwrap(), G::f(-3));
        assert_eq!(G::kappa().dagger().unwrap(), G::kappa());
        assert_eq!(G::h(-2).dagger().unwrap(), G::h(2));
        assert_eq!(G::d().dagger(), Err(Error::DaggerOfD));
    }

    #[test]
    fn dagger_is_an_involution() {
        for a in all_generators(4) {
            if a == G::d() {
                continue;
            }
            assert_eq!(a.dagger().unwrap().dagger().unwrap(), a);
        }
    }

    #[test]
    fn dagger_reverses_brackets() {
        // [a,b]^dagger = [b^dagger, a^dagger]
        for a in all_generators(3) {
            for b in all_generators(3) {
                if a == G::d() || b == G::d() {
                    continue;
                }
                let lhs: Vec<(Scalar, G)> = bracket(a, b)
                    .terms
                    .into_iter()
                    .map(|(c, g)| (c, g.dagger().unwrap()))
                    .collect();
                let rhs = bracket(b.dagger().unwrap(), a.dagger().unwrap()).terms;
                assert_eq!(collect(lhs), collect(rhs), "({a},{b})");
            }
        }
    }

    #[test]
    fn pbw_order() {
        assert!(pbw_less(G::e(-2), G::e(-1)).unwrap());
        assert!(pbw_less(G::e(-1), G::h(-1)).unwrap());
        assert!(!pbw_less(G::f(-1), G::f(-1)).unwrap());
        assert!(pbw_less(G::f(-2), G::e(-1)).unwrap());
        assert!(pbw_less(G::e(0), G::f(-1)).is_err());
        assert!(pbw_less(G::f(-1), G::kappa()).is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["e[-2]", "h[0]", "f[13]", "kappa", "d"] {
            let g: G = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("g[1]".parse::<G>().is_err());
        assert!("e[]".parse::<G>().is_err());
        assert!("e[1".parse::<G>().is_err());
    }
}
