//! Dense symmetric matrices and their eigen-decomposition.

mod jacobi;
mod tridiag;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use jacobi::jacobi_eigen;

/// Square matrix stored row-major. Symmetry is the caller's contract.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Precondition(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(SymMatrix { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T + Sync) -> Self {
        let mut data = vec![T::zero(); n * n];
        data.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, e) in row.iter_mut().enumerate() {
                *e = f(i, j);
            }
        });
        SymMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// max |A - Aᵀ|
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        self.data.par_chunks(self.n.max(1)).map(|row| dot(row, x)).collect()
    }

    /// xᵀ A x
    pub fn quadratic_form(&self, x: &[T]) -> T {
        dot(x, &self.matvec(x))
    }

    /// D A D for a diagonal D given by its entries.
    pub fn scale_sym(&self, d: &[T]) -> Self {
        SymMatrix::from_fn(self.n, |i, j| d[i] * self.get(i, j) * d[j])
    }

    /// Submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        SymMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Leading eigenpairs of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    /// Decreasing.
    pub values: Vec<T>,
    /// Unit eigenvectors matching `values`, when requested.
    pub vectors: Option<Vec<Vec<T>>>,
    /// ‖Bw − λw‖ per returned pair (zero when vectors were not requested).
    pub residuals: Vec<T>,
}

/// Size up to which the cyclic Jacobi method is used.
pub const JACOBI_LIMIT: usize = 48;

/// The `count` largest eigenvalues of `b`, optionally with eigenvectors.
///
/// Small matrices go through cyclic Jacobi. Larger ones are reduced to
/// tridiagonal form by Householder reflections, their eigenvalues found by
/// implicit QL, and the requested vectors recovered by inverse iteration.
pub fn sym_eigen<T: Real>(b: &SymMatrix<T>, count: usize, want_vectors: bool) -> Result<SymEigen<T>> {
    let n = b.n();
    if count == 0 || count > n {
        return Err(Error::Precondition(format!("requested {count} eigenpairs of a {n}x{n} matrix")));
    }
    let (values, vectors) = if n <= JACOBI_LIMIT {
        let (vals, vecs) = jacobi_eigen(b)?;
        (vals[..count].to_vec(), vecs.into_iter().take(count).collect::<Vec<_>>())
    } else {
        tridiag::leading_eigen(b, count, want_vectors)?
    };
    let scale = values.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(b.max_abs());
    let tol = T::tol(1e-8) * scale;
    let mut residuals = vec![T::zero(); count];
    if want_vectors {
        for (k, v) in vectors.iter().enumerate() {
            let bv = b.matvec(v);
            let r: Vec<T> = bv.iter().zip(v).map(|(&x, &y)| x - values[k] * y).collect();
            residuals[k] = norm(&r);
            if residuals[k] > tol {
                return Err(Error::Solver {
                    message: format!("eigenpair {k} of {n}x{n} did not converge"),
                    residual: residuals[k].to_f64_lossy(),
                });
            }
        }
    }
    Ok(SymEigen { values, vectors: want_vectors.then_some(vectors), residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> SymMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.gen_range(-1.0..1.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    #[test]
    fn large_path_matches_jacobi() {
        let m = random_sym(90, 7);
        let (jv, _) = jacobi_eigen(&m).unwrap();
        let r = sym_eigen(&m, 12, true).unwrap();
        for k in 0..12 {
            assert!((r.values[k] - jv[k]).abs() < 1e-11, "k={k}");
        }
        let vs = r.vectors.unwrap();
        for a in 0..12 {
            for b in 0..12 {
                let d = dot(&vs[a], &vs[b]);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_gets_orthogonal_vectors() {
        // I + u uᵀ has eigenvalue 1 with multiplicity n - 1
        let n = 60;
        let u: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.37).sin()).collect();
        let m = SymMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } + u[i] * u[j]);
        let r = sym_eigen(&m, 5, true).unwrap();
        assert!((r.values[0] - (1.0 + dot(&u, &u))).abs() < 1e-10);
        let vs = r.vectors.unwrap();
        for a in 1..5 {
            assert!((r.values[a] - 1.0).abs() < 1e-12);
            for b in 0..a {
                assert!(dot(&vs[a], &vs[b]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_count() {
        let m = random_sym(4, 1);
        assert!(sym_eigen(&m, 5, false).is_err());
        assert!(sym_eigen(&m, 0, false).is_err());
    }

    #[test]
    fn single_precision_small() {
        let m = SymMatrix::<f32>::from_fn(3, |i, j| if i == j { 2.0 } else { -1.0 });
        let r = sym_eigen(&m, 3, true).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-5);
        assert!((r.values[2] - 0.0).abs() < 1e-5);
    }
}
