//! The generalized Verma module induced from V0, with the normal-ordered
//! left action, the contravariant form, Gram matrices per weight space and
//! the maximal submodule as the form's kernel.
//!
//! By the PBW theorem the module is spanned by ordered words of
//! negative-mode generators applied to V0. A word is canonical when its
//! letters are nonincreasing in the PBW order (mode ascending, then
//! family e < h < f); the left action rewrites into that form using the
//! structure constants, with positive modes annihilating the floor, zero
//! modes acting through pi0 and kappa through the central charge c.

use std::collections::BTreeMap;
use std::fmt;

use dashmap::DashMap;
use num_traits::Zero;
use rayon::prelude::*;

use crate::affine::{bracket, GenFamily, GeneratorLabel};
use crate::error::Error;
use crate::linalg::{self, QMatrix};
use crate::scalar::{int, Scalar};
use crate::sl2::{Sl2Gen, Sl2Irrep};

/// Canonical PBW word of negative-mode generators (nonincreasing letters).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PbwMonomial {
    letters: Vec<GeneratorLabel>,
}

impl PbwMonomial {
    /// The empty word.
    pub fn one() -> Self {
        PbwMonomial::default()
    }

    /// Build from arbitrary negative-mode letters; sorts canonically.
    pub fn new(mut letters: Vec<GeneratorLabel>) -> Result<Self, Error> {
        for l in &letters {
            if !l.is_loop() || l.mode() >= 0 {
                return Err(Error::PbwLetterNonNegative(l.to_string()));
            }
        }
        letters.sort_by_key(|l| std::cmp::Reverse(l.pbw_key()));
        Ok(PbwMonomial { letters })
    }

    pub fn letters(&self) -> &[GeneratorLabel] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of |mode| over the letters.
    pub fn depth(&self) -> i64 {
        self.letters.iter().map(|l| -l.mode()).sum()
    }

    /// Sum of the letters' h[0]-weight contributions.
    pub fn loop_weight(&self) -> i64 {
        self.letters.iter().map(|l| l.h0_weight()).sum()
    }

    fn head(&self) -> Option<GeneratorLabel> {
        self.letters.first().copied()
    }

    fn tail(&self) -> PbwMonomial {
        PbwMonomial {
            letters: self.letters[1..].to_vec(),
        }
    }

    /// Prepend a letter that dominates every letter of the word.
    fn with_prefix(&self, g: GeneratorLabel) -> PbwMonomial {
        debug_assert!(g.is_loop() && g.mode() < 0);
        debug_assert!(self.head().is_none_or(|h| g.pbw_key() >= h.pbw_key()));
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        PbwMonomial { letters }
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let g = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == g {
                run += 1;
            }
            if run == 1 {
                parts.push(g.to_string());
            } else {
                parts.push(format!("{g}^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Label of a weight space: h[0] weight and depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSpaceKey {
    pub h0_weight: i64,
    pub depth: i64,
}

/// An element of the module: sparse combination of (word, floor index).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WVector {
    terms: BTreeMap<(PbwMonomial, usize), Scalar>,
}

impl WVector {
    pub fn zero() -> Self {
        WVector::default()
    }

    pub fn basis(m: PbwMonomial, j: usize) -> Self {
        let mut w = WVector::zero();
        w.add_term(m, j, int(1));
        w
    }

    /// 1 tensor v_+.
    pub fn highest_weight() -> Self {
        WVector::basis(PbwMonomial::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMonomial, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial, j: usize) -> Scalar {
        self.terms
            .get(&(m.clone(), j))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: PbwMonomial, j: usize, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry((m, j)) {
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

    pub fn add_scaled(&mut self, other: &WVector, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for ((m, j), c) in &other.terms {
            self.add_term(m.clone(), *j, c * s);
        }
    }

    pub fn scale(&self, s: &Scalar) -> WVector {
        let mut out = WVector::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn sub(&self, other: &WVector) -> WVector {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    /// Largest depth among the terms (0 for the zero vector).
    pub fn max_depth(&self) -> i64 {
        self.terms.keys().map(|(m, _)| m.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for WVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((m, j), c) in &self.terms {
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
            if !num_traits::One::is_one(&mag) {
                write!(f, "{}*", crate::scalar::format_rational(&mag))?;
            }
            write!(f, "{m} (x) w_{j}")?;
        }
        Ok(())
    }
}

/// One row of the character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterRow {
    pub key: WeightSpaceKey,
    pub dim_w: usize,
    pub rank: usize,
}

/// The generalized Verma module for a fixed (lambda, c).
pub struct VermaModule {
    lambda: i64,
    c: Scalar,
    irrep: Sl2Irrep,
    act_cache: DashMap<(GeneratorLabel, PbwMonomial, usize), WVector>,
}

impl VermaModule {
    pub fn new(lambda: i64, c: Scalar) -> Result<Self, Error> {
        Ok(VermaModule {
            lambda,
            c,
            irrep: Sl2Irrep::new(lambda)?,
            act_cache: DashMap::new(),
        })
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn central_charge(&self) -> &Scalar {
        &self.c
    }

    pub fn irrep(&self) -> &Sl2Irrep {
        &self.irrep
    }

    /// Weight-space label of a basis element.
    pub fn key_of(&self, m: &PbwMonomial, j: usize) -> WeightSpaceKey {
        WeightSpaceKey {
            h0_weight: self.irrep.weight_of(j) + m.loop_weight(),
            depth: m.depth(),
        }
    }

    /// Left action of a generator. The grading element d does not act here.
    pub fn act(&self, g: GeneratorLabel, w: &WVector) -> Result<WVector, Error> {
        if g.family() == GenFamily::D {
            return Err(Error::VermaActionOfD);
        }
        let mut out = WVector::zero();
        for ((m, j), s) in w.terms() {
            out.add_scaled(&self.act_basis(g, m, *j), s);
        }
        Ok(out)
    }

    /// Action on a basis element, memoized. Not defined for d.
    pub fn act_basis(&self, g: GeneratorLabel, m: &PbwMonomial, j: usize) -> WVector {
        assert!(g.family() != GenFamily::D, "no Verma action of d");
        let key = (g, m.clone(), j);
        if let Some(hit) = self.act_cache.get(&key) {
            return hit.clone();
        }
        let out = self.act_basis_uncached(g, m, j);
        self.act_cache.insert(key, out.clone());
        out
    }

    fn act_basis_uncached(&self, g: GeneratorLabel, m: &PbwMonomial, j: usize) -> WVector {
        if g.family() == GenFamily::Kappa {
            return WVector::basis(m.clone(), j).scale(&self.c);
        }
        let n = g.mode();
        match m.head() {
            None => {
                // the V0 floor
                if n > 0 {
                    WVector::zero()
                } else if n == 0 {
                    let sl2 = match g.family() {
                        GenFamily::E => Sl2Gen::E,
                        GenFamily::H => Sl2Gen::H,
                        GenFamily::F => Sl2Gen::F,
                        _ => unreachable!(),
                    };
                    let mut out = WVector::zero();
                    for (i, coeff) in self.irrep.column(sl2, j) {
                        out.add_term(PbwMonomial::one(), i, coeff);
                    }
                    out
                } else {
                    WVector::basis(m.with_prefix(g), j)
                }
            }
            Some(u) if n < 0 && g.pbw_key() >= u.pbw_key() => WVector::basis(m.with_prefix(g), j),
            Some(u) => {
                // g u rest = u (g rest) + [g, u] rest
                let tail = m.tail();
                let through = self.act_basis(g, &tail, j);
                let mut out = WVector::zero();
                if n < 0 {
                    // every letter produced on the right stays below u,
                    // so re-attaching u is a plain prefix
                    for ((tm, tj), s) in through.terms() {
                        out.add_term(tm.with_prefix(u), *tj, s.clone());
                    }
                } else {
                    for ((tm, tj), s) in through.terms() {
                        out.add_scaled(&self.act_basis(u, tm, *tj), s);
                    }
                }
                for (coeff, b) in bracket(g, u).terms {
                    if b.family() == GenFamily::Kappa {
                        out.add_term(tail.clone(), j, coeff * &self.c);
                    } else {
                        out.add_scaled(&self.act_basis(b, &tail, j), &coeff);
                    }
                }
                out
            }
        }
    }

    /// Contravariant form, computed by peeling the left argument's letters
    /// through the involution down to the V0 inner product.
    pub fn contravariant_form(&self, w1: &WVector, w2: &WVector) -> Scalar {
        let mut total = Scalar::zero();
        for ((m, j), s) in w1.terms() {
            let p = self.pair_basis(m.letters(), *j, w2);
            if !p.is_zero() {
                total += s * &p;
            }
        }
        total
    }

    fn pair_basis(&self, letters: &[GeneratorLabel], j: usize, w2: &WVector) -> Scalar {
        match letters.first() {
            None => {
                let c = w2.coefficient(&PbwMonomial::one(), j);
                if c.is_zero() {
                    c
                } else {
                    c * &self.irrep.gram_diag()[j]
                }
            }
            Some(u) => {
                let adj = u.dagger().expect("loop generators always have a dagger");
                let moved = self
                    .act(adj, w2)
                    .expect("dagger of a loop generator is never d");
                if moved.is_zero() {
                    return Scalar::zero();
                }
                self.pair_basis(&letters[1..], j, &moved)
            }
        }
    }

    /// All canonical basis elements (word, floor index) with the given key,
    /// in deterministic order.
    pub fn weight_basis(&self, key: WeightSpaceKey) -> Vec<(PbwMonomial, usize)> {
        let mut out = Vec::new();
        for m in enumerate_pbw(key.depth) {
            for j in 0..self.irrep.dim() {
                if self.key_of(&m, j) == key {
                    out.push((m.clone(), j));
                }
            }
        }
        out.sort();
        out
    }

    /// Every nonempty weight-space key with depth <= dmax, sorted.
    pub fn keys_up_to(&self, dmax: i64) -> Vec<WeightSpaceKey> {
        let mut keys = std::collections::BTreeSet::new();
        for depth in 0..=dmax {
            for m in enumerate_pbw(depth) {
                for j in 0..self.irrep.dim() {
                    keys.insert(self.key_of(&m, j));
                }
            }
        }
        keys.into_iter().collect()
    }

    /// Gram matrix of the contravariant form on a weight space.
    pub fn gram_matrix(&self, key: WeightSpaceKey) -> QMatrix {
        let basis = self.weight_basis(key);
        let n = basis.len();
        let mut g = QMatrix::zero(n, n);
        for i in 0..n {
            let wi = WVector::basis(basis[i].0.clone(), basis[i].1);
            for j in i..n {
                let wj = WVector::basis(basis[j].0.clone(), basis[j].1);
                let v = self.contravariant_form(&wi, &wj);
                g.set(i, j, v.clone());
                if i != j {
                    g.set(j, i, v);
                }
            }
        }
        g
    }

    /// Rank of the Gram matrix: the irreducible quotient's dimension there.
    pub fn gram_rank(&self, key: WeightSpaceKey) -> usize {
        linalg::rank(&self.gram_matrix(key))
    }

    /// Basis of the form's kernel in the weight space; these span the
    /// maximal submodule's component there.
    pub fn singular_vectors(&self, key: WeightSpaceKey) -> Vec<WVector> {
        let basis = self.weight_basis(key);
        let gram = self.gram_matrix(key);
        linalg::kernel_basis(&gram)
            .into_iter()
            .map(|coords| {
                let mut w = WVector::zero();
                for (colc, (m, j)) in coords.into_iter().zip(&basis) {
                    w.add_term(m.clone(), *j, colc);
                }
                w
            })
            .collect()
    }

    /// (dim W, Gram rank) for every key with depth <= dmax, sorted by
    /// depth, then weight descending.
    pub fn character_table(&self, dmax: i64) -> Vec<CharacterRow> {
        let keys = self.keys_up_to(dmax);
        let mut rows: Vec<CharacterRow> = keys
            .into_par_iter()
            .map(|key| CharacterRow {
                key,
                dim_w: self.weight_basis(key).len(),
                rank: self.gram_rank(key),
            })
            .collect();
        rows.sort_by_key(|r| (r.key.depth, -r.key.h0_weight));
        rows
    }
}

/// All canonical PBW words of the given depth, deterministically ordered.
pub fn enumerate_pbw(depth: i64) -> Vec<PbwMonomial> {
    fn letters_at_mode(mode: i64) -> [GeneratorLabel; 3] {
        [
            GeneratorLabel::f(mode),
            GeneratorLabel::h(mode),
            GeneratorLabel::e(mode),
        ]
    }
    fn rec(
        remaining: i64,
        max_key: Option<(i64, u8)>,
        current: &mut Vec<GeneratorLabel>,
        out: &mut Vec<PbwMonomial>,
    ) {
        if remaining == 0 {
            out.push(PbwMonomial {
                letters: current.clone(),
            });
            return;
        }
        // letters in decreasing PBW order: mode -1 first, f before e
        for mode in (-remaining..=-1).rev() {
            for g in letters_at_mode(mode) {
                if max_key.is_some_and(|mk| g.pbw_key() > mk) {
                    continue;
                }
                current.push(g);
                rec(remaining + mode, Some(g.pbw_key()), current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(depth.max(0), None, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use GeneratorLabel as G;

    fn word(letters: &[G]) -> PbwMonomial {
        PbwMonomial::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn pbw_word_canonicalizes() {
        let a = word(&[G::e(-1), G::f(-2), G::h(-1)]);
        let b = word(&[G::h(-1), G::e(-1), G::f(-2)]);
        assert_eq!(a, b);
        assert_eq!(a.letters()[0], G::h(-1)); // h[-1] > e[-1] > f[-2]
        assert_eq!(a.depth(), 4);
        assert_eq!(a.loop_weight(), 0);
        assert!(PbwMonomial::new(vec![G::e(0)]).is_err());
        assert!(PbwMonomial::new(vec![G::f(1)]).is_err());
    }

    #[test]
    fn pbw_enumeration_counts() {
        // 3-colored partitions: 1, 3, 9, 22, 51
        let counts: Vec<usize> = (0..=4).map(|d| enumerate_pbw(d).len()).collect();
        assert_eq!(counts, vec![1, 3, 9, 22, 51]);
    }

    #[test]
    fn act_annihilates_past_depth() {
        // f[1] (f[-1] v+) = 0: [f,f] = 0 and f[1] kills v+
        let m = VermaModule::new(0, int(1)).unwrap();
        let w = WVector::basis(word(&[G::f(-1)]), 0);
        assert!(m.act(G::f(1), &w).unwrap().is_zero());
    }

    #[test]
    fn act_normal_orders_through_the_bracket() {
        // e[1] (f[-1] v+) = (h[0] + kappa) v+ = (lambda + c) v+
        let m = VermaModule::new(0, int(1)).unwrap();
        let w = WVector::basis(word(&[G::f(-1)]), 0);
        assert_eq!(m.act(G::e(1), &w).unwrap(), WVector::highest_weight());
    }

    #[test]
    fn act_weight_bookkeeping() {
        // h[0] (e[-1] v+) = (lambda + 2) e[-1] v+
        for (lambda, c) in [(0i64, int(1)), (2, rat(5, 2))] {
            let m = VermaModule::new(lambda, c).unwrap();
            let w = WVector::basis(word(&[G::e(-1)]), 0);
            assert_eq!(m.act(G::h(0), &w).unwrap(), w.scale(&int(lambda + 2)));
        }
    }

    #[test]
    fn act_rejects_d() {
        let m = VermaModule::new(0, int(1)).unwrap();
        assert_eq!(
            m.act(G::d(), &WVector::highest_weight()),
            Err(Error::VermaActionOfD)
        );
    }

    #[test]
    fn weight_basis_examples() {
        let m = VermaModule::new(0, int(1)).unwrap();
        let floor = m.weight_basis(WeightSpaceKey {
            h0_weight: 0,
            depth: 0,
        });
        assert_eq!(floor, vec![(PbwMonomial::one(), 0)]);

        for (weight, gen) in [(2, G::e(-1)), (0, G::h(-1)), (-2, G::f(-1))] {
            let b = m.weight_basis(WeightSpaceKey {
                h0_weight: weight,
                depth: 1,
            });
            assert_eq!(b, vec![(word(&[gen]), 0)]);
        }

        let m1 = VermaModule::new(1, int(1)).unwrap();
        for (weight, j) in [(1, 0), (-1, 1)] {
            let b = m1.weight_basis(WeightSpaceKey {
                h0_weight: weight,
                depth: 0,
            });
            assert_eq!(b, vec![(PbwMonomial::one(), j)]);
        }
    }

    #[test]
    fn form_examples() {
        let m = VermaModule::new(0, int(1)).unwrap();
        let one = WVector::highest_weight();
        assert_eq!(m.contravariant_form(&one, &one), int(1));

        let h = WVector::basis(word(&[G::h(-1)]), 0);
        assert_eq!(m.contravariant_form(&h, &h), int(2)); // 2c

        let e = WVector::basis(word(&[G::e(-1)]), 0);
        assert!(m.contravariant_form(&e, &h).is_zero()); // different weights
    }

    #[test]
    fn gram_examples() {
        let m = VermaModule::new(0, int(1)).unwrap();
        for (weight, expect) in [(2, int(1)), (0, int(2)), (-2, int(1))] {
            let g = m.gram_matrix(WeightSpaceKey {
                h0_weight: weight,
                depth: 1,
            });
            assert_eq!(g.nrows, 1);
            assert_eq!(g.get(0, 0), &expect);
        }
        // depth 0 reproduces the V0 gram diagonal
        let m2 = VermaModule::new(2, int(3)).unwrap();
        for (j, d) in m2.irrep().gram_diag().iter().enumerate() {
            let g = m2.gram_matrix(WeightSpaceKey {
                h0_weight: 2 - 2 * j as i64,
                depth: 0,
            });
            assert_eq!(g.get(0, 0), d);
        }
        // empty key
        let g = m.gram_matrix(WeightSpaceKey {
            h0_weight: 1,
            depth: 0,
        });
        assert_eq!((g.nrows, g.ncols), (0, 0));
    }

    #[test]
    fn singular_vector_at_the_integrable_point() {
        // (lambda=0, c=1): e[-1]^2 v+ spans the depth-2 weight-4 kernel
        let m = VermaModule::new(0, int(1)).unwrap();
        let key = WeightSpaceKey {
            h0_weight: 4,
            depth: 2,
        };
        assert_eq!(m.gram_rank(key), 0);
        let sing = m.singular_vectors(key);
        assert_eq!(sing.len(), 1);
        let expect = WVector::basis(word(&[G::e(-1), G::e(-1)]), 0);
        assert_eq!(
            sing[0].scale(&sing[0].terms().next().unwrap().1.recip()),
            expect
        );
    }

    #[test]
    fn generic_point_is_nondegenerate() {
        let m = VermaModule::new(1, rat(5, 2)).unwrap();
        for key in m.keys_up_to(3) {
            let dim = m.weight_basis(key).len();
            assert_eq!(m.gram_rank(key), dim, "degenerate at {key:?}");
            assert!(m.singular_vectors(key).is_empty());
        }
    }

    #[test]
    fn depth_zero_has_no_singular_vectors() {
        for (lambda, c) in [(0, int(1)), (1, int(1)), (2, int(3))] {
            let m = VermaModule::new(lambda, c).unwrap();
            for j in 0..m.irrep().dim() {
                let key = WeightSpaceKey {
                    h0_weight: m.irrep().weight_of(j),
                    depth: 0,
                };
                assert!(m.singular_vectors(key).is_empty());
            }
        }
    }

    #[test]
    fn character_table_examples() {
        let m = VermaModule::new(0, int(1)).unwrap();
        let rows = m.character_table(1);
        // depth 0 row: dim = rank = lambda + 1
        let d0: Vec<_> = rows.iter().filter(|r| r.key.depth == 0).collect();
        assert_eq!(d0.len(), 1);
        assert_eq!((d0[0].dim_w, d0[0].rank), (1, 1));
        // depth-1 total rank = 3
        let total: usize = rows
            .iter()
            .filter(|r| r.key.depth == 1)
            .map(|r| r.rank)
            .sum();
        assert_eq!(total, 3);
        // rank bound
        assert!(rows.iter().all(|r| r.rank <= r.dim_w));
    }

    #[test]
    fn character_table_weight_symmetry() {
        for (lambda, c) in [(0i64, int(1)), (1, int(1))] {
            let m = VermaModule::new(lambda, c).unwrap();
            let rows = m.character_table(3);
            for r in &rows {
                let mirror = rows
                    .iter()
                    .find(|s| s.key.depth == r.key.depth && s.key.h0_weight == -r.key.h0_weight)
                    .expect("mirror key exists");
                assert_eq!(r.rank, mirror.rank, "asymmetric at {:?}", r.key);
            }
        }
    }

    #[test]
    fn contravariance_invariant() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let m = VermaModule::new(1, rat(5, 2)).unwrap();
        let mut rng = StdRng::seed_from_u64(42);
        let mut gens = vec![G::kappa()];
        for n in -2..=2i64 {
            gens.extend([G::e(n), G::h(n), G::f(n)]);
        }
        let random_vec = |rng: &mut StdRng| {
            let mut w = WVector::zero();
            for _ in 0..rng.random_range(1..3) {
                let depth = rng.random_range(0..4);
                let words = enumerate_pbw(depth);
                let mono = words[rng.random_range(0..words.len())].clone();
                let j = rng.random_range(0..2);
                w.add_term(mono, j, int(rng.random_range(-2..3)));
            }
            w
        };
        for _ in 0..150 {
            let a = gens[rng.random_range(0..gens.len())];
            let w1 = random_vec(&mut rng);
            let w2 = random_vec(&mut rng);
            let lhs = m.contravariant_form(&m.act(a, &w1).unwrap(), &w2);
            let rhs = m.contravariant_form(&w1, &m.act(a.dagger().unwrap(), &w2).unwrap());
            assert_eq!(lhs, rhs, "contravariance fails for {a}");
        }
    }

    #[test]
    fn module_axiom() {
        // act(a, act(b, w)) - act(b, act(a, w)) = act([a,b], w)
        let m = VermaModule::new(1, int(1)).unwrap();
        let mut gens = vec![G::kappa()];
        for n in -2..=2i64 {
            gens.extend([G::e(n), G::h(n), G::f(n)]);
        }
        let mut basis = Vec::new();
        for depth in 0..=3 {
            for mono in enumerate_pbw(depth) {
                for j in 0..2 {
                    basis.push(WVector::basis(mono.clone(), j));
                }
            }
        }
        for &a in &gens {
            for &b in &gens {
                for w in &basis {
                    let lhs = m
                        .act(a, &m.act(b, w).unwrap())
                        .unwrap()
                        .sub(&m.act(b, &m.act(a, w).unwrap()).unwrap());
                    let mut rhs = WVector::zero();
                    for (coeff, g) in bracket(a, b).terms {
                        rhs.add_scaled(&m.act(g, w).unwrap(), &coeff);
                    }
                    assert_eq!(lhs, rhs, "module axiom fails for [{a},{b}]");
                }
            }
        }
    }

    #[test]
    fn positive_modes_are_locally_nilpotent() {
        // a depth-k vector dies after at most k+1 positive-mode actions
        for (lambda, c) in [(0i64, int(1)), (1, rat(5, 2))] {
            let m = VermaModule::new(lambda, c).unwrap();
            for depth in 0..=3i64 {
                for mono in enumerate_pbw(depth) {
                    for j in 0..m.irrep().dim() {
                        for u in [G::e(1), G::h(1), G::f(1), G::e(2), G::h(2), G::f(2)] {
                            let mut w = WVector::basis(mono.clone(), j);
                            for _ in 0..=depth {
                                w = m.act(u, &w).unwrap();
                            }
                            assert!(w.is_zero(), "u={u} survives on depth {depth}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gram_is_symmetric_and_blocks_do_not_mix() {
        let m = VermaModule::new(1, int(1)).unwrap();
        for key in m.keys_up_to(3) {
            assert!(m.gram_matrix(key).is_symmetric());
        }
        // cross-key pairings vanish
        let w1 = WVector::basis(word(&[G::e(-1)]), 0);
        let w2 = WVector::basis(word(&[G::h(-1)]), 0);
        let w3 = WVector::basis(word(&[G::e(-2)]), 0);
        assert!(m.contravariant_form(&w1, &w2).is_zero());
        assert!(m.contravariant_form(&w1, &w3).is_zero());
    }

    #[test]
    fn psd_at_integrable_points() {
        for (lambda, c) in [(0i64, 1i64), (1, 1), (2, 3)] {
            let m = VermaModule::new(lambda, int(c)).unwrap();
            for key in m.keys_up_to(3) {
                let gram = m.gram_matrix(key);
                assert!(
                    linalg::psd_certificate(&gram).is_ok(),
                    "not PSD at ({lambda},{c}) {key:?}"
                );
            }
        }
    }
}
