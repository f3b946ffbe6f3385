//! The verification suites: bracket homomorphism, grading, intertwining,
//! contravariance, semidefiniteness and the kernel theorem. The CLI and the
//! acceptance tests both drive these; every check is an exact rational
//! equality and failures carry the counterexample.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::affine::{bracket, GeneratorLabel};
use crate::error::Error;
use crate::linalg;
use crate::realize::Realization;
use crate::scalar::{format_rational, int, rat, Scalar};
use crate::vcs::{self, image_rank};
use crate::verma::{enumerate_pbw, VermaModule, WVector};

/// Outcome of one suite: how many checks ran, and the failures verbatim.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Loop generators with |mode| <= bound, plus kappa.
pub fn generator_range(bound: i64) -> Vec<GeneratorLabel> {
    let mut gens = vec![GeneratorLabel::kappa()];
    for n in -bound..=bound {
        gens.extend([
            GeneratorLabel::e(n),
            GeneratorLabel::h(n),
            GeneratorLabel::f(n),
        ]);
    }
    gens
}

/// [xi(a), xi(b)] = xi([a, b]) over all unordered generator pairs, on every
/// monomial basis vector of degree <= max_degree. Antisymmetry makes the
/// ordered duplicates redundant.
pub fn commutator_suite(real: &Realization, mode_bound: i64, max_degree: i64) -> SuiteOutcome {
    let gens = generator_range(mode_bound);
    let mut pairs = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            pairs.push((a, b));
        }
    }
    let failures: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            real.commutator_check(a, b, max_degree)
                .into_iter()
                .map(|f| f.to_string())
        })
        .collect();
    SuiteOutcome {
        name: format!("bracket homomorphism (modes |n| <= {mode_bound}, degree <= {max_degree})"),
        checks: pairs.len(),
        failures,
    }
}

/// [xi(d), xi(a[n])] = n xi(a[n]) for the requested d0 values.
pub fn grading_suite(
    lambda: i64,
    c: &Scalar,
    d0_values: &[Scalar],
    mode_bound: i64,
    max_degree: i64,
) -> Result<SuiteOutcome, Error> {
    let mut checks = 0;
    let mut failures = Vec::new();
    for d0 in d0_values {
        let real = Realization::new(lambda, c.clone(), d0.clone())?;
        let pairs: Vec<GeneratorLabel> = (-mode_bound..=mode_bound)
            .flat_map(|n| {
                [
                    GeneratorLabel::e(n),
                    GeneratorLabel::h(n),
                    GeneratorLabel::f(n),
                ]
            })
            .collect();
        checks += pairs.len();
        let found: Vec<String> = pairs
            .par_iter()
            .flat_map_iter(|&g| {
                real.commutator_check(GeneratorLabel::d(), g, max_degree)
                    .into_iter()
                    .map(|f| format!("d0 = {}: {f}", format_rational(d0)))
            })
            .collect();
        failures.extend(found);
    }
    Ok(SuiteOutcome {
        name: format!(
            "grading commutators (d0 in {{{}}})",
            join_rationals(d0_values)
        ),
        checks,
        failures,
    })
}

fn join_rationals(values: &[Scalar]) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A small random module vector: one to three basis terms of depth <= cap.
fn random_vector(rng: &mut StdRng, dim: usize, depth_cap: i64) -> WVector {
    let coeffs = [int(1), int(-1), int(2), int(-2), rat(1, 2), int(3)];
    let mut w = WVector::zero();
    for _ in 0..rng.random_range(1..=3) {
        let depth = rng.random_range(0..=depth_cap);
        let words = enumerate_pbw(depth);
        let mono = words[rng.random_range(0..words.len())].clone();
        let j = rng.random_range(0..dim);
        w.add_term(mono, j, coeffs[rng.random_range(0..coeffs.len())].clone());
    }
    w
}

/// Randomized intertwining checks: xi(u) xi_w = xi_{u w}, exactly.
pub fn intertwine_suite(
    verma: &VermaModule,
    real: &Realization,
    count: usize,
    depth_cap: i64,
    seed: u64,
) -> SuiteOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let gens = generator_range(2);
    let cases: Vec<(GeneratorLabel, WVector)> = (0..count)
        .map(|_| {
            let u = gens[rng.random_range(0..gens.len())];
            let w = random_vector(&mut rng, verma.irrep().dim(), depth_cap);
            (u, w)
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(u, w)| {
            let ok =
                vcs::intertwine_check(verma, real, *u, w).expect("random generators exclude d");
            (!ok).then(|| format!("intertwining fails for u = {u}, w = {w}"))
        })
        .collect();
    SuiteOutcome {
        name: format!("intertwining ({count} random pairs, depth <= {depth_cap})"),
        checks: count,
        failures,
    }
}

/// Randomized contravariance checks of the form against the involution.
pub fn contravariance_suite(
    verma: &VermaModule,
    count: usize,
    depth_cap: i64,
    seed: u64,
) -> SuiteOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let gens = generator_range(2);
    let mut failures = Vec::new();
    for _ in 0..count {
        let a = gens[rng.random_range(0..gens.len())];
        let w1 = random_vector(&mut rng, verma.irrep().dim(), depth_cap);
        let w2 = random_vector(&mut rng, verma.irrep().dim(), depth_cap);
        let lhs = verma.contravariant_form(&verma.act(a, &w1).unwrap(), &w2);
        let rhs = verma.contravariant_form(&w1, &verma.act(a.dagger().unwrap(), &w2).unwrap());
        if lhs != rhs {
            failures.push(format!(
                "contravariance fails for a = {a}: <a w1|w2> = {}, <w1|a† w2> = {}",
                format_rational(&lhs),
                format_rational(&rhs)
            ));
        }
    }
    SuiteOutcome {
        name: format!("contravariance ({count} random triples, depth <= {depth_cap})"),
        checks: count,
        failures,
    }
}

/// Exact positive-semidefiniteness of every Gram block up to the depth.
pub fn psd_suite(verma: &VermaModule, depth_cap: i64) -> SuiteOutcome {
    let keys = verma.keys_up_to(depth_cap);
    let failures: Vec<String> = keys
        .par_iter()
        .filter_map(
            |&key| match linalg::psd_certificate(&verma.gram_matrix(key)) {
                Ok(_) => None,
                Err(v) => Some(format!(
                    "Gram block at weight {}, depth {} is not PSD: entry ({}, {}) = {}",
                    key.h0_weight,
                    key.depth,
                    v.row,
                    v.col,
                    format_rational(&v.entry)
                )),
            },
        )
        .collect();
    SuiteOutcome {
        name: format!("positive semidefiniteness (depth <= {depth_cap})"),
        checks: keys.len(),
        failures,
    }
}

/// Kernel theorem: Gram rank equals the coherent-state image rank on every
/// weight space up to the depth.
pub fn kernel_theorem_suite(verma: &VermaModule, depth_cap: i64) -> SuiteOutcome {
    let keys = verma.keys_up_to(depth_cap);
    let failures: Vec<String> = keys
        .par_iter()
        .filter_map(|&key| {
            let gram = verma.gram_rank(key);
            let image = image_rank(verma, key);
            (gram != image).then(|| {
                format!(
                    "weight {}, depth {}: Gram rank {gram} != image rank {image}",
                    key.h0_weight, key.depth
                )
            })
        })
        .collect();
    SuiteOutcome {
        name: format!("kernel theorem (depth <= {depth_cap})"),
        checks: keys.len(),
        failures,
    }
}

/// Powers of xi(e[-1]) on the floor: dies exactly after c - lambda + 1
/// steps at integrable points, never at generic ones.
pub fn singular_power_profile(real: &Realization, max_power: usize) -> Vec<bool> {
    let mut v = real.floor(0);
    let mut nonzero = Vec::with_capacity(max_power);
    for _ in 0..max_power {
        v = real.apply_gen(GeneratorLabel::e(-1), &v);
        nonzero.push(!v.is_zero());
    }
    nonzero
}

/// Every singular vector must map to zero under the coherent-state map.
pub fn singular_cross_check(verma: &VermaModule, depth_cap: i64) -> SuiteOutcome {
    let keys = verma.keys_up_to(depth_cap);
    let mut checks = 0;
    let mut failures = Vec::new();
    for key in keys {
        for sv in verma.singular_vectors(key) {
            checks += 1;
            if !vcs::kernel_check(verma, &sv) {
                failures.push(format!(
                    "singular vector {sv} at weight {}, depth {} has nonzero image",
                    key.h0_weight, key.depth
                ));
            }
        }
    }
    SuiteOutcome {
        name: format!("singular vectors map to zero (depth <= {depth_cap})"),
        checks,
        failures,
    }
}

/// The module-axiom check used by the verify command: act is a Lie-algebra
/// action on basis vectors.
pub fn module_axiom_suite(verma: &VermaModule, mode_bound: i64, depth_cap: i64) -> SuiteOutcome {
    let gens = generator_range(mode_bound);
    let mut basis = Vec::new();
    for depth in 0..=depth_cap {
        for mono in enumerate_pbw(depth) {
            for j in 0..verma.irrep().dim() {
                basis.push(WVector::basis(mono.clone(), j));
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            pairs.push((a, b));
        }
    }
    let failures: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut local = Vec::new();
            for w in &basis {
                let lhs = verma
                    .act(a, &verma.act(b, w).unwrap())
                    .unwrap()
                    .sub(&verma.act(b, &verma.act(a, w).unwrap()).unwrap());
                let mut rhs = WVector::zero();
                for (coeff, g) in bracket(a, b).terms {
                    rhs.add_scaled(&verma.act(g, w).unwrap(), &coeff);
                }
                if lhs != rhs {
                    local.push(format!("module axiom fails for [{a}, {b}] on {w}"));
                }
            }
            local
        })
        .collect();
    SuiteOutcome {
        name: format!("module axiom (modes |n| <= {mode_bound}, depth <= {depth_cap})"),
        checks: pairs.len(),
        failures,
    }
}
