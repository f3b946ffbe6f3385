//! Differential-operator realizations of the affine generators on
//! P(X, Y, Z) tensor V0.
//!
//! Annihilation modes act by derivatives, creation modes by locally finite
//! sums of polynomial-coefficient derivative terms together with the
//! endomorphisms pi0 of V0. Every operator is assembled from six closed
//! term shapes; the infinite sums all carry a derivative, so on a given
//! monomial only finitely many instances act and evaluation is exact.
//! Creation operators are built recursively: f[-k] from the Z polynomials
//! and the D_t blocks, h[-k] from the f modes above -k, e[-k] from the h
//! and f modes above -k. Every recursion strictly raises the mode, so
//! construction is well founded and memoized.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::One;

use crate::affine::{bracket, GenFamily, GeneratorLabel};
use crate::error::Error;
use crate::poly::{monomials_up_to_degree, var, Family, Monomial, Polynomial, VarRef};
use crate::scalar::{format_rational, int, Scalar};
use crate::sl2::{Sl2Gen, Sl2Irrep};

/// Endomorphism of V0 attached to a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endo {
    Id,
    PiE,
    PiH,
    PiF,
}

impl Endo {
    fn column(self, irrep: &Sl2Irrep, j: usize) -> Vec<(usize, Scalar)> {
        match self {
            Endo::Id => vec![(j, int(1))],
            Endo::PiE => irrep.column(Sl2Gen::E, j),
            Endo::PiH => irrep.column(Sl2Gen::H, j),
            Endo::PiF => irrep.column(Sl2Gen::F, j),
        }
    }

    fn symbol(self) -> Option<&'static str> {
        match self {
            Endo::Id => None,
            Endo::PiE => Some("π0(e)"),
            Endo::PiH => Some("π0(h)"),
            Endo::PiF => Some("π0(f)"),
        }
    }
}

/// One concrete contribution: scalar * coeff * (composed partials) with an
/// endomorphism on the V0 index.
#[derive(Debug, Clone)]
pub struct OperatorTerm {
    pub scalar: Scalar,
    pub coeff: Polynomial,
    pub derivs: Vec<VarRef>,
    pub endo: Endo,
}

/// A summand family of a realized operator. `pre` carries all scalar and
/// polynomial prefactors accumulated through composition.
#[derive(Debug, Clone)]
enum TermFamily {
    /// pre * endo
    Mul { pre: Polynomial, endo: Endo },
    /// pre * d/d(var)
    Deriv { pre: Polynomial, var: VarRef },
    /// sum over p >= 1 of pre * v[coeff_fam, p+coeff_shift] * d/d(v[deriv_fam, p+deriv_shift])
    IndexedDeriv {
        pre: Polynomial,
        coeff_fam: Family,
        coeff_shift: i64,
        deriv_fam: Family,
        deriv_shift: i64,
    },
    /// sum over p, q >= 1 (q capped when bounded) of
    /// pre * v[fam1, p+shift1] * v[fam2, q+shift2] * d/d(v[deriv_fam, p+q+deriv_shift])
    PairDeriv {
        pre: Polynomial,
        fam1: Family,
        shift1: i64,
        fam2: Family,
        shift2: i64,
        deriv_fam: Family,
        deriv_shift: i64,
        q_max: Option<i64>,
    },
    /// sum over N >= 1 of pre * Z_{N+n_shift}(scale Y) * d/d(v[deriv_fam, N+deriv_shift])
    ZDeriv {
        pre: Polynomial,
        n_shift: i64,
        scale: Scalar,
        deriv_fam: Family,
        deriv_shift: i64,
    },
    /// (d0 - degree) * id — the grading operator
    Euler { d0: Scalar },
}

/// Memoized Z_N polynomials, with scaled variants Z_N(2Y), Z_N(-2Y).
#[derive(Default)]
pub struct ZCache {
    memo: DashMap<(i64, Scalar), Polynomial>,
}

impl ZCache {
    pub fn new() -> Self {
        ZCache::default()
    }

    /// Z_N at (scale y_1, scale y_2, ...), via N Z_N = sum k y_k Z_{N-k}.
    pub fn z_poly(&self, n: i64, scale: &Scalar) -> Polynomial {
        assert!(n >= 0, "Z_N needs N >= 0");
        if n == 0 {
            return Polynomial::one();
        }
        let key = (n, scale.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut acc = Polynomial::zero();
        for k in 1..=n {
            let lower = self.z_poly(n - k, scale);
            let yk = Monomial::var(var(Family::Y, k));
            acc = acc.add(&lower.mul_term(&yk, &(int(k) * scale)));
        }
        let out = acc.scale(&int(n).recip());
        self.memo.insert(key, out.clone());
        out
    }
}

/// A generator realized as a locally finite differential operator.
pub struct RealizedOperator {
    generator: GeneratorLabel,
    degree_shift: i64,
    families: Vec<TermFamily>,
}

impl RealizedOperator {
    pub fn generator(&self) -> GeneratorLabel {
        self.generator
    }

    /// Applying the operator to a homogeneous degree-m input yields degree
    /// m + degree_shift (or zero); the shift is minus the mode.
    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }

    /// Exactly the terms that act nonzero on the given monomial.
    pub fn contributing_terms(&self, z: &ZCache, m: &Monomial) -> Vec<OperatorTerm> {
        let mut out = Vec::new();
        for fam in &self.families {
            match fam {
                TermFamily::Mul { pre, endo } => out.push(OperatorTerm {
                    scalar: int(1),
                    coeff: pre.clone(),
                    derivs: vec![],
                    endo: *endo,
                }),
                TermFamily::Deriv { pre, var: v } => {
                    if m.exponent(*v) > 0 {
                        out.push(OperatorTerm {
                            scalar: int(1),
                            coeff: pre.clone(),
                            derivs: vec![*v],
                            endo: Endo::Id,
                        });
                    }
                }
                TermFamily::IndexedDeriv {
                    pre,
                    coeff_fam,
                    coeff_shift,
                    deriv_fam,
                    deriv_shift,
                } => {
                    for (v, _) in m.exps() {
                        if v.family != *deriv_fam {
                            continue;
                        }
                        let p = v.index - deriv_shift;
                        if p < 1 || p + coeff_shift < 1 {
                            continue;
                        }
                        let coeff =
                            pre.mul_term(&Monomial::var(var(*coeff_fam, p + coeff_shift)), &int(1));
                        out.push(OperatorTerm {
                            scalar: int(1),
                            coeff,
                            derivs: vec![v],
                            endo: Endo::Id,
                        });
                    }
                }
                TermFamily::PairDeriv {
                    pre,
                    fam1,
                    shift1,
                    fam2,
                    shift2,
                    deriv_fam,
                    deriv_shift,
                    q_max,
                } => {
                    for (v, _) in m.exps() {
                        if v.family != *deriv_fam {
                            continue;
                        }
                        let s = v.index - deriv_shift; // p + q
                        for q in 1..s {
                            if q_max.is_some_and(|qm| q > qm) {
                                break;
                            }
                            let p = s - q;
                            if p < 1 || p + shift1 < 1 || q + shift2 < 1 {
                                continue;
                            }
                            let coeff = pre
                                .mul_term(&Monomial::var(var(*fam1, p + shift1)), &int(1))
                                .mul_term(&Monomial::var(var(*fam2, q + shift2)), &int(1));
                            out.push(OperatorTerm {
                                scalar: int(1),
                                coeff,
                                derivs: vec![v],
                                endo: Endo::Id,
                            });
                        }
                    }
                }
                TermFamily::ZDeriv {
                    pre,
                    n_shift,
                    scale,
                    deriv_fam,
                    deriv_shift,
                } => {
                    for (v, _) in m.exps() {
                        if v.family != *deriv_fam {
                            continue;
                        }
                        let n = v.index - deriv_shift;
                        if n < 1 {
                            continue;
                        }
                        let coeff = pre.mul(&z.z_poly(n + n_shift, scale));
                        out.push(OperatorTerm {
                            scalar: int(1),
                            coeff,
                            derivs: vec![v],
                            endo: Endo::Id,
                        });
                    }
                }
                TermFamily::Euler { d0 } => out.push(OperatorTerm {
                    scalar: d0 - int(m.degree()),
                    coeff: Polynomial::one(),
                    derivs: vec![],
                    endo: Endo::Id,
                }),
            }
        }
        out
    }

    /// Human-readable term list, with the unbounded sums capped at the
    /// indices that can act on inputs of degree <= dmax.
    pub fn render(&self, dmax: i64) -> String {
        let mut parts = Vec::new();
        for fam in &self.families {
            if let Some(s) = render_family(fam, dmax) {
                parts.push(s);
            }
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else if *neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(body);
        }
        out
    }
}

/// Split a polynomial prefactor into (is_negative, magnitude string),
/// pulling the sign out only for single-term prefactors.
fn pre_string(pre: &Polynomial) -> (bool, Option<String>) {
    if pre.num_terms() == 1 {
        let (m, c) = pre.terms().next().unwrap();
        let neg = crate::scalar::is_negative(c);
        let mag = if neg { -c.clone() } else { c.clone() };
        let body = if m.is_one() {
            if mag.is_one() {
                None
            } else {
                Some(format_rational(&mag))
            }
        } else if mag.is_one() {
            Some(m.to_string())
        } else {
            Some(format!("{}·{}", format_rational(&mag), m))
        };
        (neg, body)
    } else {
        (false, Some(format!("({pre})")))
    }
}

fn shifted(sym: char, base: &str, shift: i64) -> String {
    match shift {
        0 if base.len() == 1 => format!("{sym}_{base}"),
        0 => format!("{sym}_{{{base}}}"),
        s if s > 0 => format!("{sym}_{{{base}+{s}}}"),
        s => format!("{sym}_{{{base}-{}}}", -s),
    }
}

fn render_family(fam: &TermFamily, dmax: i64) -> Option<(bool, String)> {
    match fam {
        TermFamily::Mul { pre, endo } => {
            if pre.is_zero() {
                return None;
            }
            let (neg, body) = pre_string(pre);
            let s = match (body, endo.symbol()) {
                (None, None) => "1".to_string(),
                (None, Some(e)) => e.to_string(),
                (Some(b), None) => b,
                (Some(b), Some(e)) => format!("{b}·{e}"),
            };
            Some((neg, s))
        }
        TermFamily::Deriv { pre, var: v } => {
            if pre.is_zero() {
                return None;
            }
            let (neg, body) = pre_string(pre);
            let d = format!("∂/∂{v}");
            Some((
                neg,
                match body {
                    None => d,
                    Some(b) => format!("{b}·{d}"),
                },
            ))
        }
        TermFamily::IndexedDeriv {
            pre,
            coeff_fam,
            coeff_shift,
            deriv_fam,
            deriv_shift,
        } => {
            let cap = dmax - deriv_shift;
            if cap < 1 || pre.is_zero() {
                return None;
            }
            let (neg, body) = pre_string(pre);
            let c = shifted(coeff_fam.letter(), "p", *coeff_shift);
            let d = shifted(deriv_fam.letter(), "p", *deriv_shift);
            let head = body.map_or(String::new(), |b| format!("{b}·"));
            Some((neg, format!("{head}Σ_{{p=1}}^{{{cap}}} {c}·∂/∂{d}")))
        }
        TermFamily::PairDeriv {
            pre,
            fam1,
            shift1,
            fam2,
            shift2,
            deriv_fam,
            deriv_shift,
            q_max,
        } => {
            let cap = dmax - deriv_shift;
            if cap < 2 || pre.is_zero() {
                return None;
            }
            let (neg, body) = pre_string(pre);
            let a = shifted(fam1.letter(), "p", *shift1);
            let b = shifted(fam2.letter(), "q", *shift2);
            let d = shifted(deriv_fam.letter(), "p+q", *deriv_shift);
            let head = body.map_or(String::new(), |s| format!("{s}·"));
            let range = match q_max {
                Some(qm) => format!("p+q≤{cap}, q≤{qm}"),
                None => format!("p+q≤{cap}"),
            };
            Some((neg, format!("{head}Σ_{{{range}}} {a}·{b}·∂/∂{d}")))
        }
        TermFamily::ZDeriv {
            pre,
            n_shift,
            scale,
            deriv_fam,
            deriv_shift,
        } => {
            let cap = dmax - deriv_shift;
            if cap < 1 || pre.is_zero() {
                return None;
            }
            let (neg, body) = pre_string(pre);
            let zarg = if scale.is_one() {
                "Y".to_string()
            } else {
                format!("{}Y", format_rational(scale))
            };
            let zsym = match n_shift {
                0 => format!("Z_N({zarg})"),
                s if *s > 0 => format!("Z_{{N+{s}}}({zarg})"),
                s => format!("Z_{{N-{}}}({zarg})", -s),
            };
            let d = shifted(deriv_fam.letter(), "N", *deriv_shift);
            let head = body.map_or(String::new(), |s| format!("{s}·"));
            Some((neg, format!("{head}Σ_{{N=1}}^{{{cap}}} {zsym}·∂/∂{d}")))
        }
        TermFamily::Euler { d0 } => Some((
            false,
            format!(
                "{} - Σ_{{p=1}}^{{{dmax}}} p·(x_p ∂/∂x_p + y_p ∂/∂y_p + z_p ∂/∂z_p)",
                format_rational(d0)
            ),
        )),
    }
}

/// An element of P(X, Y, Z) tensor V0: one polynomial per basis vector w_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcsVector {
    comps: Vec<Polynomial>,
}

impl VcsVector {
    pub fn zero(dim: usize) -> Self {
        VcsVector {
            comps: vec![Polynomial::zero(); dim],
        }
    }

    /// 1 tensor w_j.
    pub fn floor(dim: usize, j: usize) -> Self {
        let mut v = VcsVector::zero(dim);
        v.comps[j] = Polynomial::one();
        v
    }

    pub fn from_components(comps: Vec<Polynomial>) -> Self {
        VcsVector { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, j: usize) -> &Polynomial {
        &self.comps[j]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn add_scaled(&mut self, other: &VcsVector, s: &Scalar) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.add_scaled(b, s);
        }
    }

    pub fn sub(&self, other: &VcsVector) -> VcsVector {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, s: &Scalar) -> VcsVector {
        VcsVector {
            comps: self.comps.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Common degree of all nonzero components, if they agree.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for p in &self.comps {
            if p.is_zero() {
                continue;
            }
            let d = p.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                _ => return None,
            }
        }
        deg
    }
}

impl fmt::Display for VcsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p}) ⊗ w_{j}")?;
        }
        Ok(())
    }
}

/// Realization context for fixed (lambda, c, d0): builds operators on
/// demand and memoizes their action on basis monomials.
pub struct Realization {
    lambda: i64,
    c: Scalar,
    d0: Scalar,
    irrep: Sl2Irrep,
    z: ZCache,
    ops: DashMap<GeneratorLabel, Arc<RealizedOperator>>,
    basis_apply: DashMap<(GeneratorLabel, Monomial, usize), Arc<VcsVector>>,
}

impl Realization {
    pub fn new(lambda: i64, c: Scalar, d0: Scalar) -> Result<Self, Error> {
        Ok(Realization {
            lambda,
            c,
            d0,
            irrep: Sl2Irrep::new(lambda)?,
            z: ZCache::new(),
            ops: DashMap::new(),
            basis_apply: DashMap::new(),
        })
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn central_charge(&self) -> &Scalar {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.irrep.dim()
    }

    pub fn irrep(&self) -> &Sl2Irrep {
        &self.irrep
    }

    pub fn z_cache(&self) -> &ZCache {
        &self.z
    }

    /// The realized operator for any generator, built once.
    pub fn operator(&self, g: GeneratorLabel) -> Arc<RealizedOperator> {
        if let Some(hit) = self.ops.get(&g) {
            return hit.clone();
        }
        let op = Arc::new(RealizedOperator {
            generator: g,
            degree_shift: -g.mode(),
            families: self.build_families(g),
        });
        self.ops.insert(g, op.clone());
        op
    }

    fn families_of(&self, g: GeneratorLabel) -> Vec<TermFamily> {
        self.operator(g).families.clone()
    }

    fn build_families(&self, g: GeneratorLabel) -> Vec<TermFamily> {
        use Family::{X, Y, Z};
        let c = &self.c;
        let k = g.mode();
        match g.family() {
            GenFamily::Kappa => vec![TermFamily::Mul {
                pre: Polynomial::constant(c.clone()),
                endo: Endo::Id,
            }],
            GenFamily::D => vec![TermFamily::Euler {
                d0: self.d0.clone(),
            }],
            GenFamily::F if k >= 1 => vec![TermFamily::Deriv {
                pre: Polynomial::one(),
                var: var(Z, k),
            }],
            GenFamily::H if k >= 1 => vec![
                TermFamily::Deriv {
                    pre: Polynomial::one(),
                    var: var(Y, k),
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::constant(int(2)),
                    coeff_fam: Z,
                    coeff_shift: 0,
                    deriv_fam: Z,
                    deriv_shift: k,
                },
            ],
            GenFamily::E if k >= 1 => vec![
                TermFamily::Deriv {
                    pre: Polynomial::one(),
                    var: var(X, k),
                },
                TermFamily::ZDeriv {
                    pre: Polynomial::one(),
                    n_shift: 0,
                    scale: int(2),
                    deriv_fam: X,
                    deriv_shift: k,
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::constant(int(-1)),
                    coeff_fam: Z,
                    coeff_shift: 0,
                    deriv_fam: Y,
                    deriv_shift: k,
                },
                TermFamily::PairDeriv {
                    pre: Polynomial::constant(int(-1)),
                    fam1: Z,
                    shift1: 0,
                    fam2: Z,
                    shift2: 0,
                    deriv_fam: Z,
                    deriv_shift: k,
                    q_max: None,
                },
            ],
            GenFamily::H if k == 0 => vec![
                TermFamily::Mul {
                    pre: Polynomial::one(),
                    endo: Endo::PiH,
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::constant(int(2)),
                    coeff_fam: Z,
                    coeff_shift: 0,
                    deriv_fam: Z,
                    deriv_shift: 0,
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::constant(int(-2)),
                    coeff_fam: X,
                    coeff_shift: 0,
                    deriv_fam: X,
                    deriv_shift: 0,
                },
            ],
            GenFamily::E if k == 0 => vec![
                TermFamily::Mul {
                    pre: Polynomial::one(),
                    endo: Endo::PiE,
                },
                TermFamily::ZDeriv {
                    pre: Polynomial::one(),
                    n_shift: 0,
                    scale: int(2),
                    deriv_fam: X,
                    deriv_shift: 0,
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::constant(int(-1)),
                    coeff_fam: Z,
                    coeff_shift: 0,
                    deriv_fam: Y,
                    deriv_shift: 0,
                },
                TermFamily::PairDeriv {
                    pre: Polynomial::constant(int(-1)),
                    fam1: Z,
                    shift1: 0,
                    fam2: Z,
                    shift2: 0,
                    deriv_fam: Z,
                    deriv_shift: 0,
                    q_max: None,
                },
            ],
            GenFamily::F if k == 0 => vec![
                TermFamily::Mul {
                    pre: Polynomial::one(),
                    endo: Endo::PiF,
                },
                TermFamily::ZDeriv {
                    pre: Polynomial::constant(int(-1)),
                    n_shift: 0,
                    scale: int(2),
                    deriv_fam: Z,
                    deriv_shift: 0,
                },
                TermFamily::IndexedDeriv {
                    pre: Polynomial::one(),
                    coeff_fam: X,
                    coeff_shift: 0,
                    deriv_fam: Y,
                    deriv_shift: 0,
                },
                TermFamily::PairDeriv {
                    pre: Polynomial::one(),
                    fam1: X,
                    shift1: 0,
                    fam2: X,
                    shift2: 0,
                    deriv_fam: X,
                    deriv_shift: 0,
                    q_max: None,
                },
            ],
            GenFamily::F => self.build_f_negative(-k),
            GenFamily::H => self.build_h_negative(-k),
            GenFamily::E => self.build_e_negative(-k),
        }
    }

    /// The creation block D_t (t > 0).
    fn d_block(&self, t: i64) -> Vec<TermFamily> {
        use Family::{X, Y};
        let xt = Polynomial::var(var(X, t));
        let mut fams = vec![
            TermFamily::Mul {
                pre: xt.scale(&(int(t) * &self.c)),
                endo: Endo::Id,
            },
            TermFamily::Mul {
                pre: xt,
                endo: Endo::PiH,
            },
            TermFamily::ZDeriv {
                pre: Polynomial::constant(int(-1)),
                n_shift: t,
                scale: int(2),
                deriv_fam: Family::Z,
                deriv_shift: 0,
            },
            TermFamily::IndexedDeriv {
                pre: Polynomial::one(),
                coeff_fam: X,
                coeff_shift: t,
                deriv_fam: Y,
                deriv_shift: 0,
            },
            TermFamily::PairDeriv {
                pre: Polynomial::one(),
                fam1: X,
                shift1: t,
                fam2: X,
                shift2: 0,
                deriv_fam: X,
                deriv_shift: 0,
                q_max: None,
            },
            TermFamily::PairDeriv {
                pre: Polynomial::constant(int(-1)),
                fam1: X,
                shift1: 0,
                fam2: X,
                shift2: 0,
                deriv_fam: X,
                deriv_shift: -t,
                q_max: Some(t),
            },
        ];
        let delta = pair_sum(X, t);
        if !delta.is_zero() {
            fams.push(TermFamily::Mul {
                pre: delta.neg(),
                endo: Endo::PiE,
            });
        }
        fams
    }

    /// f[-k] = Z_k(-2Y) f[0] + sum_{t=1..k} Z_{k-t}(-2Y) D_t.
    fn build_f_negative(&self, k: i64) -> Vec<TermFamily> {
        let neg2 = int(-2);
        let mut fams = prefac(
            &self.z.z_poly(k, &neg2),
            &self.families_of(GeneratorLabel::f(0)),
        );
        for t in 1..=k {
            fams.extend(prefac(&self.z.z_poly(k - t, &neg2), &self.d_block(t)));
        }
        fams
    }

    /// h[-k] = 2ck y_k - 2 x_k pi0(e)
    ///         + 2 sum_p (z_{k+p} d/dz_p - x_{k+p} d/dx_p)
    ///         + 2 sum_{p=1..k} z_p f[p-k].
    fn build_h_negative(&self, k: i64) -> Vec<TermFamily> {
        use Family::{X, Y, Z};
        let mut fams = vec![
            TermFamily::Mul {
                pre: Polynomial::var(var(Y, k)).scale(&(int(2 * k) * &self.c)),
                endo: Endo::Id,
            },
            TermFamily::Mul {
                pre: Polynomial::var(var(X, k)).scale(&int(-2)),
                endo: Endo::PiE,
            },
            TermFamily::IndexedDeriv {
                pre: Polynomial::constant(int(2)),
                coeff_fam: Z,
                coeff_shift: k,
                deriv_fam: Z,
                deriv_shift: 0,
            },
            TermFamily::IndexedDeriv {
                pre: Polynomial::constant(int(-2)),
                coeff_fam: X,
                coeff_shift: k,
                deriv_fam: X,
                deriv_shift: 0,
            },
        ];
        for p in 1..=k {
            let zp = Polynomial::var(var(Z, p)).scale(&int(2));
            fams.extend(prefac(&zp, &self.families_of(GeneratorLabel::f(p - k))));
        }
        fams
    }

    /// e[-k] = ck z_k + Z_k(2Y) pi0(e) + sum_N Z_{N+k}(2Y) d/dx_N
    ///         - sum_p z_p h[p-k] + sum_{p,q} z_p z_q f[p+q-k].
    fn build_e_negative(&self, k: i64) -> Vec<TermFamily> {
        use Family::{X, Y, Z};
        let two = int(2);
        let mut fams = vec![
            TermFamily::Mul {
                pre: Polynomial::var(var(Z, k)).scale(&(int(k) * &self.c)),
                endo: Endo::Id,
            },
            TermFamily::Mul {
                pre: self.z.z_poly(k, &two),
                endo: Endo::PiE,
            },
            TermFamily::ZDeriv {
                pre: Polynomial::one(),
                n_shift: k,
                scale: two,
                deriv_fam: X,
                deriv_shift: 0,
            },
        ];
        // - sum_p z_p h[p-k]: creation modes p < k explicitly, p = k through
        //   h[0], and the annihilation tail p > k as derivative families
        for p in 1..=k {
            let zp = Polynomial::var(var(Z, p)).neg();
            fams.extend(prefac(&zp, &self.families_of(GeneratorLabel::h(p - k))));
        }
        fams.push(TermFamily::IndexedDeriv {
            pre: Polynomial::constant(int(-1)),
            coeff_fam: Z,
            coeff_shift: k,
            deriv_fam: Y,
            deriv_shift: 0,
        });
        fams.push(TermFamily::PairDeriv {
            pre: Polynomial::constant(int(-2)),
            fam1: Z,
            shift1: k,
            fam2: Z,
            shift2: 0,
            deriv_fam: Z,
            deriv_shift: 0,
            q_max: None,
        });
        // + sum_{p,q} z_p z_q f[p+q-k]: grouped by s = p + q
        for s in 2..=k {
            let coeff = pair_sum(Z, s);
            if coeff.is_zero() {
                continue;
            }
            fams.extend(prefac(&coeff, &self.families_of(GeneratorLabel::f(s - k))));
        }
        fams.push(TermFamily::PairDeriv {
            pre: Polynomial::one(),
            fam1: Z,
            shift1: 0,
            fam2: Z,
            shift2: 0,
            deriv_fam: Z,
            deriv_shift: -k,
            q_max: None,
        });
        fams
    }

    /// Action on monomial tensor w_j, memoized.
    pub fn apply_to_basis(&self, g: GeneratorLabel, m: &Monomial, j: usize) -> Arc<VcsVector> {
        let key = (g, m.clone(), j);
        if let Some(hit) = self.basis_apply.get(&key) {
            return hit.clone();
        }
        let op = self.operator(g);
        let out = Arc::new(self.apply_op_to_basis(&op, m, j));
        self.basis_apply.insert(key, out.clone());
        out
    }

    fn apply_op_to_basis(&self, op: &RealizedOperator, m: &Monomial, j: usize) -> VcsVector {
        let mut out = VcsVector::zero(self.dim());
        for term in op.contributing_terms(&self.z, m) {
            let mut p = Polynomial::monomial(m.clone(), term.scalar.clone());
            for v in &term.derivs {
                p = p.partial(*v);
            }
            if p.is_zero() {
                continue;
            }
            p = p.mul(&term.coeff);
            for (i, es) in term.endo.column(&self.irrep, j) {
                out.comps[i].add_scaled(&p, &es);
            }
        }
        out
    }

    /// Apply a generator's realized operator, exactly.
    pub fn apply_gen(&self, g: GeneratorLabel, v: &VcsVector) -> VcsVector {
        let mut out = VcsVector::zero(self.dim());
        for (j, poly) in v.components().iter().enumerate() {
            for (m, coeff) in poly.terms() {
                out.add_scaled(&self.apply_to_basis(g, m, j), coeff);
            }
        }
        out
    }

    /// Apply an arbitrary realized operator (no memo).
    pub fn apply(&self, op: &RealizedOperator, v: &VcsVector) -> VcsVector {
        let mut out = VcsVector::zero(self.dim());
        for (j, poly) in v.components().iter().enumerate() {
            for (m, coeff) in poly.terms() {
                out.add_scaled(&self.apply_op_to_basis(op, m, j), coeff);
            }
        }
        out
    }

    /// 1 tensor w_j.
    pub fn floor(&self, j: usize) -> VcsVector {
        VcsVector::floor(self.dim(), j)
    }

    /// Check [xi(a), xi(b)] = xi([a, b]) on every monomial tensor w_j of
    /// degree <= max_degree; returns the counterexamples.
    pub fn commutator_check(
        &self,
        a: GeneratorLabel,
        b: GeneratorLabel,
        max_degree: i64,
    ) -> Vec<CommutatorFailure> {
        let mut failures = Vec::new();
        for m in monomials_up_to_degree(max_degree) {
            for j in 0..self.dim() {
                let vb = self.apply_to_basis(b, &m, j);
                let va = self.apply_to_basis(a, &m, j);
                let mut lhs = self.apply_gen(a, &vb);
                lhs.add_scaled(&self.apply_gen(b, &va), &int(-1));
                let mut rhs = VcsVector::zero(self.dim());
                for (coeff, g) in bracket(a, b).terms {
                    rhs.add_scaled(&self.apply_to_basis(g, &m, j), &coeff);
                }
                if lhs != rhs {
                    failures.push(CommutatorFailure {
                        a,
                        b,
                        monomial: m.clone(),
                        component: j,
                        difference: lhs.sub(&rhs),
                    });
                }
            }
        }
        failures
    }
}

/// A counterexample to the bracket homomorphism.
#[derive(Debug, Clone)]
pub struct CommutatorFailure {
    pub a: GeneratorLabel,
    pub b: GeneratorLabel,
    pub monomial: Monomial,
    pub component: usize,
    pub difference: VcsVector,
}

impl fmt::Display for CommutatorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[ξ({}), ξ({})] ≠ ξ([{}, {}]) on {} ⊗ w_{}: difference {}",
            self.a, self.b, self.a, self.b, self.monomial, self.component, self.difference
        )
    }
}

/// Multiply every term family by a fixed polynomial on the left.
fn prefac(p: &Polynomial, fams: &[TermFamily]) -> Vec<TermFamily> {
    fams.iter()
        .map(|f| {
            let mut g = f.clone();
            match &mut g {
                TermFamily::Mul { pre, .. }
                | TermFamily::Deriv { pre, .. }
                | TermFamily::IndexedDeriv { pre, .. }
                | TermFamily::PairDeriv { pre, .. }
                | TermFamily::ZDeriv { pre, .. } => *pre = pre.mul(p),
                TermFamily::Euler { .. } => {
                    unreachable!("the grading operator is never composed")
                }
            }
            g
        })
        .collect()
}

/// sum over ordered pairs p + q = s of v_p v_q (empty for s < 2).
fn pair_sum(family: Family, s: i64) -> Polynomial {
    let mut out = Polynomial::zero();
    for p in 1..s {
        let m = Monomial::var(var(family, p)).mul(&Monomial::var(var(family, s - p)));
        out.add_term(m, int(1));
    }
    out
}
