//! The coherent-state map from the Verma module into polynomial-valued
//! vectors, its intertwining property, the image space and the kernel
//! theorem.
//!
//! The map expands g = exp(E(X)) exp(H(Y)) exp(F(Z)) against a vector w
//! inside the module — F first, then H, then E, reading the product as left
//! multiplication — and pairs the depth-0 remainder against the dual basis
//! of V0. Each exponential truncates exactly: a product of more than
//! depth(w) positive-mode generators annihilates w.

use std::collections::BTreeMap;

use crate::affine::{GenFamily, GeneratorLabel};
use crate::error::Error;
use crate::linalg::{self, QMatrix};
use crate::poly::{var, Family, Monomial, Polynomial};
use crate::realize::{Realization, VcsVector};
use crate::scalar::int;
use crate::verma::{PbwMonomial, VermaModule, WVector, WeightSpaceKey};

/// Exact order bound for one exponential factor acting on a vector of the
/// given depth; higher orders annihilate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionBudget {
    pub max_order: i64,
}

impl ExpansionBudget {
    pub fn for_depth(depth: i64) -> Self {
        ExpansionBudget { max_order: depth }
    }

    pub fn for_vector(w: &WVector) -> Self {
        ExpansionBudget::for_depth(w.max_depth())
    }
}

type State = BTreeMap<(PbwMonomial, usize), Polynomial>;

fn state_add(state: &mut State, key: (PbwMonomial, usize), p: Polynomial) {
    if p.is_zero() {
        return;
    }
    match state.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(p);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&p);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// One exponential stage: state <- exp(sum_k a[k] v_k) state, expanded to
/// the exact budget.
fn exp_stage(
    verma: &VermaModule,
    state: State,
    gen_family: GenFamily,
    var_family: Family,
    budget: ExpansionBudget,
) -> State {
    let mut acc = state.clone();
    let mut cur = state;
    for n in 1..=budget.max_order {
        let mut next = State::new();
        for ((m, j), poly) in &cur {
            for k in 1..=m.depth() {
                let moved = verma.act_basis(GeneratorLabel::loop_gen(gen_family, k), m, *j);
                if moved.is_zero() {
                    continue;
                }
                let scaled = poly.mul_term(&Monomial::var(var(var_family, k)), &int(n).recip());
                for ((m2, j2), s) in moved.terms() {
                    state_add(&mut next, (m2.clone(), *j2), scaled.scale(s));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for (key, p) in &next {
            state_add(&mut acc, key.clone(), p.clone());
        }
        cur = next;
    }
    acc
}

/// The coherent-state map. Component j is the coefficient polynomial of
/// w_j in the depth-0 part of g(X, Y, Z) w.
pub fn coherent_state_map(verma: &VermaModule, w: &WVector) -> VcsVector {
    let budget = ExpansionBudget::for_vector(w);
    let mut state = State::new();
    for ((m, j), s) in w.terms() {
        state_add(&mut state, (m.clone(), *j), Polynomial::constant(s.clone()));
    }
    // g = exp(E(X)) exp(H(Y)) exp(F(Z)) acts by the rightmost factor first
    state = exp_stage(verma, state, GenFamily::F, Family::Z, budget);
    state = exp_stage(verma, state, GenFamily::H, Family::Y, budget);
    state = exp_stage(verma, state, GenFamily::E, Family::X, budget);
    let dim = verma.irrep().dim();
    let mut comps = vec![Polynomial::zero(); dim];
    for ((m, j), p) in state {
        if m.is_empty() {
            comps[j] = comps[j].add(&p);
        }
    }
    VcsVector::from_components(comps)
}

/// Whether a vector lies in the maximal submodule: the map kills exactly
/// the form's kernel.
pub fn kernel_check(verma: &VermaModule, w: &WVector) -> bool {
    coherent_state_map(verma, w).is_zero()
}

/// Whether xi(u) . xi_w = xi_{u w} holds exactly. Errors only for u = d.
pub fn intertwine_check(
    verma: &VermaModule,
    real: &Realization,
    u: GeneratorLabel,
    w: &WVector,
) -> Result<bool, Error> {
    let lhs = real.apply_gen(u, &coherent_state_map(verma, w));
    let rhs = coherent_state_map(verma, &verma.act(u, w)?);
    Ok(lhs == rhs)
}

/// Stable coordinate extraction for a family of vectors: columns indexed
/// by the (monomial, component) pairs that occur.
pub fn coordinate_matrix(vectors: &[VcsVector]) -> QMatrix {
    let mut columns: BTreeMap<(Monomial, usize), usize> = BTreeMap::new();
    for v in vectors {
        for (j, p) in v.components().iter().enumerate() {
            for (m, _) in p.terms() {
                let next = columns.len();
                columns.entry((m.clone(), j)).or_insert(next);
            }
        }
    }
    let mut mat = QMatrix::zero(vectors.len(), columns.len());
    for (r, v) in vectors.iter().enumerate() {
        for (j, p) in v.components().iter().enumerate() {
            for (m, c) in p.terms() {
                let col = columns[&(m.clone(), j)];
                mat.set(r, col, c.clone());
            }
        }
    }
    mat
}

/// Dimension of the span of the coherent-state images of a weight basis.
pub fn image_rank(verma: &VermaModule, key: WeightSpaceKey) -> usize {
    let images: Vec<VcsVector> = verma
        .weight_basis(key)
        .into_iter()
        .map(|(m, j)| coherent_state_map(verma, &WVector::basis(m, j)))
        .collect();
    linalg::rank(&coordinate_matrix(&images))
}

/// A linearly independent spanning set of the weight space of the image,
/// produced by applying the realized creation-operator words to the floor.
pub fn image_basis(verma: &VermaModule, real: &Realization, key: WeightSpaceKey) -> Vec<VcsVector> {
    let words = verma.weight_basis(key);
    let all: Vec<VcsVector> = words
        .iter()
        .map(|(m, j)| {
            let mut v = real.floor(*j);
            for g in m.letters().iter().rev() {
                v = real.apply_gen(*g, &v);
            }
            v
        })
        .collect();
    let keep = linalg::independent_rows(&coordinate_matrix(&all));
    keep.into_iter().map(|i| all[i].clone()).collect()
}
