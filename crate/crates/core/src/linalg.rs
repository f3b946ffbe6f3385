//! Exact linear algebra over the rationals.
//!
//! Rank and echelon forms go through fraction-free Bareiss elimination on
//! denominator-cleared integer rows, which keeps intermediate entries as
//! minors rather than letting rationals blow up. Kernel extraction and the
//! semidefiniteness certificate back-substitute over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        QMatrix {
            nrows,
            ncols,
            data: vec![Scalar::zero(); nrows * ncols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols));
        QMatrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.ncols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.ncols + c] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a.abs()
}

/// Clear denominators row by row; rescaling rows preserves rank and the
/// right kernel.
fn integer_rows(m: &QMatrix) -> Vec<Vec<BigInt>> {
    (0..m.nrows)
        .map(|r| {
            let mut lcm = BigInt::one();
            for c in 0..m.ncols {
                let d = m.get(r, c).denom();
                let g = gcd(lcm.clone(), d.clone());
                lcm = &lcm / &g * d;
            }
            (0..m.ncols)
                .map(|c| {
                    let v = m.get(r, c);
                    v.numer() * (&lcm / v.denom())
                })
                .collect()
        })
        .collect()
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    /// (pivot row within `rows`, pivot column), in elimination order.
    pivots: Vec<(usize, usize)>,
    /// Original row index chosen as pivot at each step.
    pivot_source_rows: Vec<usize>,
}

/// Fraction-free Bareiss elimination with row pivoting.
fn bareiss(m: &QMatrix) -> Echelon {
    let mut rows = integer_rows(m);
    let mut source: Vec<usize> = (0..m.nrows).collect();
    let mut pivots = Vec::new();
    let mut pivot_source_rows = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..m.ncols {
        let Some(p) = (r..m.nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        source.swap(r, p);
        for i in r + 1..m.nrows {
            for j in c + 1..m.ncols {
                let num = &rows[r][c] * &rows[i][j] - &rows[i][c] * &rows[r][j];
                rows[i][j] = num / &prev;
            }
            rows[i][c] = BigInt::zero();
        }
        prev = rows[r][c].clone();
        pivots.push((r, c));
        pivot_source_rows.push(source[r]);
        r += 1;
        if r == m.nrows {
            break;
        }
    }
    Echelon {
        rows,
        pivots,
        pivot_source_rows,
    }
}

/// Rank over the rationals.
pub fn rank(m: &QMatrix) -> usize {
    bareiss(m).pivots.len()
}

/// Indices of a maximal linearly independent subset of the rows, in the
/// deterministic order the elimination selects them.
pub fn independent_rows(m: &QMatrix) -> Vec<usize> {
    let mut rows = bareiss(m).pivot_source_rows;
    rows.sort_unstable();
    rows
}

/// Basis of the right kernel { v : M v = 0 }, one vector per free column.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Scalar>> {
    let ech = bareiss(m);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for free in 0..m.ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.ncols];
        v[free] = Scalar::one();
        for &(r, c) in ech.pivots.iter().rev() {
            let mut sum = Scalar::zero();
            for j in c + 1..m.ncols {
                if !ech.rows[r][j].is_zero() && !v[j].is_zero() {
                    sum += Scalar::from_integer(ech.rows[r][j].clone()) * &v[j];
                }
            }
            v[c] = -sum / Scalar::from_integer(ech.rows[r][c].clone());
        }
        out.push(v);
    }
    out
}

/// Exact positive-semidefiniteness certificate for a symmetric matrix.
#[derive(Debug, Clone)]
pub struct PsdCertificate {
    /// Strictly positive elimination pivots, one per non-kernel direction.
    pub pivots: Vec<Scalar>,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdViolation {
    pub row: usize,
    pub col: usize,
    pub entry: Scalar,
}

/// Symmetric (LDL-style) elimination. A symmetric matrix is positive
/// semidefinite iff every diagonal pivot is nonnegative and each zero pivot
/// sits on an entirely zero row of the remaining block.
pub fn psd_certificate(m: &QMatrix) -> Result<PsdCertificate, PsdViolation> {
    assert!(m.is_symmetric(), "psd_certificate needs a symmetric matrix");
    let n = m.nrows;
    let mut a: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut kernel_dim = 0usize;
    for k in 0..n {
        let d = a[k][k].clone();
        if d.is_negative() {
            return Err(PsdViolation {
                row: k,
                col: k,
                entry: d,
            });
        }
        if d.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                return Err(PsdViolation {
                    row: k,
                    col: j,
                    entry: a[k][j].clone(),
                });
            }
            kernel_dim += 1;
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &d;
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
        pivots.push(d);
    }
    Ok(PsdCertificate { pivots, kernel_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn m(rows: Vec<Vec<i64>>) -> QMatrix {
        QMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(int).collect())
                .collect(),
        )
    }

    /// Independent oracle: plain rational Gaussian elimination.
    fn naive_rank(mat: &QMatrix) -> usize {
        let mut rows: Vec<Vec<Scalar>> = (0..mat.nrows)
            .map(|r| (0..mat.ncols).map(|c| mat.get(r, c).clone()).collect())
            .collect();
        let mut rank = 0;
        for c in 0..mat.ncols {
            let Some(p) = (rank..mat.nrows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            for i in rank + 1..mat.nrows {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = &rows[i][c] / &rows[rank][c];
                for j in c..mat.ncols {
                    let d = &f * &rows[rank][j];
                    rows[i][j] -= d;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_known_cases() {
        assert_eq!(rank(&m(vec![vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&m(vec![vec![1, 0], vec![0, 1]])), 2);
        assert_eq!(rank(&QMatrix::zero(3, 3)), 0);
        assert_eq!(rank(&QMatrix::zero(0, 0)), 0);
        assert_eq!(
            rank(&m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])),
            2
        );
    }

    #[test]
    fn rank_matches_naive_elimination_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let nr = rng.random_range(1..6);
            let nc = rng.random_range(1..6);
            let mat = QMatrix::from_rows(
                (0..nr)
                    .map(|_| {
                        (0..nc)
                            .map(|_| rat(rng.random_range(-4..5), rng.random_range(1..4)))
                            .collect()
                    })
                    .collect(),
            );
            assert_eq!(rank(&mat), naive_rank(&mat));
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let nr = rng.random_range(1..5);
            let nc = rng.random_range(1..6);
            let mat = QMatrix::from_rows(
                (0..nr)
                    .map(|_| (0..nc).map(|_| int(rng.random_range(-3..4))).collect())
                    .collect(),
            );
            let ker = kernel_basis(&mat);
            assert_eq!(ker.len(), nc - rank(&mat));
            for v in &ker {
                for r in 0..nr {
                    let mut s = Scalar::zero();
                    for c in 0..nc {
                        s += mat.get(r, c) * &v[c];
                    }
                    assert!(s.is_zero());
                }
            }
            // kernel vectors are independent by construction (unit free vars)
            if !ker.is_empty() {
                let km = QMatrix::from_rows(ker.clone());
                assert_eq!(rank(&km), ker.len());
            }
        }
    }

    #[test]
    fn independent_rows_are_independent_and_maximal() {
        let mat = m(vec![
            vec![1, 2, 3],
            vec![2, 4, 6],
            vec![0, 1, 1],
            vec![1, 3, 4],
        ]);
        let idx = independent_rows(&mat);
        assert_eq!(idx.len(), rank(&mat));
        let sub = QMatrix::from_rows(
            idx.iter()
                .map(|&r| (0..3).map(|c| mat.get(r, c).clone()).collect())
                .collect(),
        );
        assert_eq!(rank(&sub), idx.len());
    }

    #[test]
    fn psd_accepts_and_rejects() {
        // PSD with one kernel direction
        let g = m(vec![vec![2, 2], vec![2, 2]]);
        let cert = psd_certificate(&g).unwrap();
        assert_eq!(cert.pivots.len(), 1);
        assert_eq!(cert.kernel_dim, 1);
        assert!(cert.pivots.iter().all(|p| p > &Scalar::zero()));

        // indefinite: zero diagonal with nonzero off-diagonal
        assert!(psd_certificate(&m(vec![vec![0, 1], vec![1, 0]])).is_err());
        // negative diagonal
        assert!(psd_certificate(&m(vec![vec![-1]])).is_err());
        // strictly positive definite
        let cert = psd_certificate(&m(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert_eq!(cert.pivots.len(), 2);
        assert_eq!(cert.kernel_dim, 0);
    }

    #[test]
    fn psd_agrees_with_gram_construction() {
        // A^T A is always PSD
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let k = rng.random_range(1..4);
            let n = rng.random_range(1..4);
            let a: Vec<Vec<Scalar>> = (0..k)
                .map(|_| (0..n).map(|_| int(rng.random_range(-3..4))).collect())
                .collect();
            let mut g = QMatrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut s = Scalar::zero();
                    for r in 0..k {
                        s += &a[r][i] * &a[r][j];
                    }
                    g.set(i, j, s);
                }
            }
            assert!(psd_certificate(&g).is_ok());
        }
    }
}
