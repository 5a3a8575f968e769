use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::scalar::Real;

use super::assemble::OperatorMatrix;

/// Leading eigenpairs of the generalised problem A v = λ M v.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumResult<T> {
    /// Decreasing.
    pub eigenvalues: Vec<T>,
    /// Cell values of each eigenfunction, normalised so Σ v_i² |cell_i| = 1.
    pub eigenvectors: Option<Vec<Vec<T>>>,
    pub mesh_size: usize,
    /// ‖B w − λ w‖ for the symmetric form B = M^{-1/2} A M^{-1/2}.
    pub residuals: Vec<T>,
}

/// The `count` largest eigenvalues of the operator with mass matrix M = diag(areas).
pub fn spectrum<T: Real>(op: &OperatorMatrix<T>, count: usize, keep_vectors: bool) -> Result<SpectrumResult<T>> {
    let n = op.n();
    if count == 0 || count > n {
        return Err(Error::Precondition(format!("count must be in 1..={n}, got {count}")));
    }
    let d: Vec<T> = op.areas().iter().map(|&w| T::one() / w.sqrt()).collect();
    let b = op.matrix.scale_sym(&d);
    let eig = sym_eigen(&b, count, keep_vectors)?;
    let eigenvectors = eig.vectors.map(|vs| {
        vs.into_iter()
            .map(|w| w.iter().zip(&d).map(|(&x, &s)| x * s).collect())
            .collect()
    });
    Ok(SpectrumResult { eigenvalues: eig.values, eigenvectors, mesh_size: n, residuals: eig.residuals })
}

impl<T: Real> SpectrumResult<T> {
    pub fn vector(&self, index: usize) -> Result<&[T]> {
        let vs = self
            .eigenvectors
            .as_ref()
            .ok_or_else(|| Error::State("spectrum was computed without eigenvectors".into()))?;
        vs.get(index)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::State(format!("eigenvector {index} not computed ({} available)", vs.len())))
    }

    /// Flips every eigenvector so its integral over the domain is ≥ 0.
    pub fn normalize_signs(&mut self, op: &OperatorMatrix<T>) {
        if let Some(vs) = self.eigenvectors.as_mut() {
            for v in vs.iter_mut() {
                let s: T = v.iter().zip(&op.mesh.cells).map(|(&x, c)| x * c.area).sum();
                if s < T::zero() {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
        }
    }
}

/// ∫_Ω f_n ≈ Σ_i v_n[i] |cell_i| for the n-th normalised eigenfunction.
pub fn eigfun_integral<T: Real>(result: &SpectrumResult<T>, op: &OperatorMatrix<T>, index: usize) -> Result<T> {
    let v = result.vector(index)?;
    if v.len() != op.n() {
        return Err(Error::State("eigenvector does not match the mesh".into()));
    }
    Ok(v.iter().zip(&op.mesh.cells).map(|(&x, c)| x * c.area).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    type D = crate::galerkin::Domain2D<f64>;
    use crate::disc::{disc_eigenvalues, expand_multiplicity, DiscSpec};
    use crate::galerkin::{assemble, build_mesh};

    fn disc_op(a: f64, cells: usize) -> OperatorMatrix<f64> {
        assemble(&build_mesh(&D::disc([0.0, 0.0], a), cells).unwrap()).unwrap()
    }

    #[test]
    fn disc_leading_modes_match_closed_form() {
        let a = 0.1;
        let op = disc_op(a, 400);
        let res = spectrum(&op, 6, true).unwrap();
        let closed = expand_multiplicity(&disc_eigenvalues(&DiscSpec::new(a, 4, 3).unwrap()).unwrap());
        for k in 0..3 {
            assert!((res.eigenvalues[k] / closed[k] - 1.0).abs() < 0.05, "k={k}");
        }
        assert!(res.eigenvalues.iter().all(|&l| l > 0.0));
        for w in res.eigenvalues.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let scale = res.eigenvalues[0];
        assert!(res.residuals.iter().all(|&r| r <= 1e-8 * scale));
    }

    #[test]
    fn eigenfunction_integrals_on_disc() {
        let a = 0.1;
        let op = disc_op(a, 400);
        let mut res = spectrum(&op, 3, true).unwrap();
        res.normalize_signs(&op);
        let pairs = disc_eigenvalues(&DiscSpec::new(a, 1, 1).unwrap()).unwrap();
        let v01 = pairs.iter().find(|p| p.k == 0).unwrap().int_normalized;
        let i0 = eigfun_integral(&res, &op, 0).unwrap();
        assert!((i0 / v01 - 1.0).abs() < 0.1);
        for k in 1..3 {
            assert!(eigfun_integral(&res, &op, k).unwrap().abs() <= 1e-3 * a);
        }
    }

    #[test]
    fn square_first_mode_is_positive() {
        let op = assemble(&build_mesh(&D::square([0.0, 0.0], 0.1), 256).unwrap()).unwrap();
        let mut res = spectrum(&op, 1, true).unwrap();
        res.normalize_signs(&op);
        assert!(eigfun_integral(&res, &op, 0).unwrap() > 0.0);
        assert!(res.vector(0).unwrap().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn state_errors() {
        let op = disc_op(0.5, 25);
        let res = spectrum(&op, 2, false).unwrap();
        assert!(matches!(eigfun_integral(&res, &op, 0), Err(Error::State(_))));
        let res = spectrum(&op, 2, true).unwrap();
        assert!(matches!(eigfun_integral(&res, &op, 5), Err(Error::State(_))));
        assert!(spectrum(&op, 0, false).is_err());
    }
}
