//! The finite-dimensional irreducible sl(2) module V0 of highest weight
//! lambda, with its action matrices pi0 and contravariant inner product.
//!
//! Basis: w_j = f[0]^j v_+ for j = 0..lambda, so
//!   h w_j = (lambda - 2j) w_j
//!   f w_j = w_{j+1}            (0 for j = lambda)
//!   e w_j = j (lambda - j + 1) w_{j-1}   (0 for j = 0)
//! The w_j are orthogonal; <w_j, w_j> = prod_{i=1..j} i (lambda - i + 1).

use num_traits::Zero;

use crate::error::Error;
use crate::scalar::{int, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sl2Gen {
    E,
    H,
    F,
}

/// A vector of V0 in the w_j basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct V0Vector(pub Vec<Scalar>);

impl V0Vector {
    pub fn zero(dim: usize) -> Self {
        V0Vector(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, j: usize) -> Self {
        let mut v = V0Vector::zero(dim);
        v.0[j] = int(1);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }
}

#[derive(Debug, Clone)]
pub struct Sl2Irrep {
    lambda: i64,
    pi0_e: Vec<Vec<Scalar>>,
    pi0_h: Vec<Vec<Scalar>>,
    pi0_f: Vec<Vec<Scalar>>,
    gram_diag: Vec<Scalar>,
}

impl Sl2Irrep {
    pub fn new(lambda: i64) -> Result<Self, Error> {
        if lambda < 0 {
            return Err(Error::NegativeHighestWeight(lambda));
        }
        let dim = (lambda + 1) as usize;
        let mut pi0_e = vec![vec![Scalar::zero(); dim]; dim];
        let mut pi0_h = vec![vec![Scalar::zero(); dim]; dim];
        let mut pi0_f = vec![vec![Scalar::zero(); dim]; dim];
        for j in 0..dim {
            let jj = j as i64;
            pi0_h[j][j] = int(lambda - 2 * jj);
            if j + 1 < dim {
                pi0_f[j + 1][j] = int(1);
            }
            if j > 0 {
                pi0_e[j - 1][j] = int(jj * (lambda - jj + 1));
            }
        }
        let mut gram_diag = vec![int(1)];
        for j in 1..=lambda {
            let prev = gram_diag[(j - 1) as usize].clone();
            gram_diag.push(prev * int(j * (lambda - j + 1)));
        }
        Ok(Sl2Irrep {
            lambda,
            pi0_e,
            pi0_h,
            pi0_f,
            gram_diag,
        })
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        (self.lambda + 1) as usize
    }

    pub fn matrix(&self, g: Sl2Gen) -> &Vec<Vec<Scalar>> {
        match g {
            Sl2Gen::E => &self.pi0_e,
            Sl2Gen::H => &self.pi0_h,
            Sl2Gen::F => &self.pi0_f,
        }
    }

    pub fn gram_diag(&self) -> &[Scalar] {
        &self.gram_diag
    }

    /// h[0] weight of the basis vector w_j.
    pub fn weight_of(&self, j: usize) -> i64 {
        self.lambda - 2 * j as i64
    }

    /// Matrix-vector product pi0(g) v.
    pub fn act(&self, g: Sl2Gen, v: &V0Vector) -> V0Vector {
        let m = self.matrix(g);
        let mut out = V0Vector::zero(self.dim());
        for (i, row) in m.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() && !v.0[j].is_zero() {
                    out.0[i] += a * &v.0[j];
                }
            }
        }
        out
    }

    /// Nonzero entries of column j of pi0(g): pi0(g) w_j = sum coeff * w_i.
    pub fn column(&self, g: Sl2Gen, j: usize) -> Vec<(usize, Scalar)> {
        self.matrix(g)
            .iter()
            .enumerate()
            .filter(|(_, row)| !row[j].is_zero())
            .map(|(i, row)| (i, row[j].clone()))
            .collect()
    }

    /// Contravariant inner product; the w_j basis is orthogonal.
    pub fn inner(&self, u: &V0Vector, v: &V0Vector) -> Scalar {
        let mut s = Scalar::zero();
        for j in 0..self.dim() {
            if !u.0[j].is_zero() && !v.0[j].is_zero() {
                s += &u.0[j] * &v.0[j] * &self.gram_diag[j];
            }
        }
        s
    }
}
