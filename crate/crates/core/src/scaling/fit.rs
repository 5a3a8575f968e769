use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// y ≈ C a^p
    PowerLaw,
    /// y ≈ C a^p |log a|^q
    PowerLogLaw,
}

/// Least-squares fit of log y against log a (and log |log a|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit<T> {
    pub model: FitModel,
    pub c: T,
    pub p: T,
    /// Zero for [`FitModel::PowerLaw`].
    pub q: T,
    /// Root mean square of the log-space residuals.
    pub residual_rms: T,
    pub points: usize,
}

/// Both models fitted to the same data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPair<T> {
    pub power: ScalingFit<T>,
    pub power_log: ScalingFit<T>,
}

pub const MIN_FIT_POINTS: usize = 4;

/// Solves min ‖X β − y‖ by modified Gram-Schmidt QR.
fn lstsq<T: Real>(cols: &[Vec<T>], y: &[T]) -> Result<Vec<T>> {
    let k = cols.len();
    let mut q: Vec<Vec<T>> = cols.to_vec();
    let mut r = vec![vec![T::zero(); k]; k];
    for j in 0..k {
        for i in 0..j {
            let d: T = q[i].iter().zip(&q[j]).map(|(&a, &b)| a * b).sum();
            r[i][j] = d;
            let qi = q[i].clone();
            for (x, qv) in q[j].iter_mut().zip(&qi) {
                *x = *x - d * *qv;
            }
        }
        let nrm = q[j].iter().map(|&x| x * x).sum::<T>().sqrt();
        let scale = cols[j].iter().map(|&x| x * x).sum::<T>().sqrt();
        if !(nrm > T::tol(1e-12) * scale) {
            return Err(Error::Fit("design matrix is rank deficient (sweep points too few or collinear)".into()));
        }
        r[j][j] = nrm;
        q[j].iter_mut().for_each(|x| *x = *x / nrm);
    }
    let qty: Vec<T> = q.iter().map(|qi| qi.iter().zip(y).map(|(&a, &b)| a * b).sum()).collect();
    let mut beta = vec![T::zero(); k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for j in (i + 1)..k {
            s = s - r[i][j] * beta[j];
        }
        beta[i] = s / r[i][i];
    }
    Ok(beta)
}

/// Fits y ≈ C a^p (|log a|^q) in log space with equal weights.
pub fn fit_series<T: Real>(a: &[T], y: &[T], model: FitModel) -> Result<ScalingFit<T>> {
    if a.len() != y.len() {
        return Err(Error::Fit("a and y differ in length".into()));
    }
    if a.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("need at least {MIN_FIT_POINTS} sweep points, got {}", a.len())));
    }
    if let Some(v) = y.iter().find(|v| !(**v > T::zero()) || !v.is_finite()) {
        return Err(Error::Fit(format!("values must be positive for a log fit (got {v}); sign-normalise first")));
    }
    if let Some(v) = a.iter().find(|v| !(**v > T::zero() && **v < T::one())) {
        return Err(Error::Fit(format!("sweep radii must lie in (0, 1), got {v}")));
    }
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let la: Vec<T> = a.iter().map(|v| v.ln()).collect();
    let mut cols = vec![vec![T::one(); a.len()], la.clone()];
    if model == FitModel::PowerLogLaw {
        cols.push(la.iter().map(|l| l.abs().ln()).collect());
    }
    let beta = lstsq(&cols, &ly)?;
    let q = if model == FitModel::PowerLogLaw { beta[2] } else { T::zero() };
    let ss: T = (0..a.len())
        .map(|i| {
            let pred = beta[0] + beta[1] * cols[1][i] + if model == FitModel::PowerLogLaw { q * cols[2][i] } else { T::zero() };
            (ly[i] - pred).powi(2)
        })
        .sum();
    Ok(ScalingFit {
        model,
        c: beta[0].exp(),
        p: beta[1],
        q,
        residual_rms: (ss / T::from_count(a.len())).sqrt(),
        points: a.len(),
    })
}

pub fn fit_both<T: Real>(a: &[T], y: &[T]) -> Result<FitPair<T>> {
    Ok(FitPair { power: fit_series(a, y, FitModel::PowerLaw)?, power_log: fit_series(a, y, FitModel::PowerLogLaw)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn radii() -> Vec<f64> {
        [3.0, 5.0, 8.0, 12.0, 20.0].iter().map(|l: &f64| (-l).exp()).collect()
    }

    #[test]
    fn recovers_exact_power_log() {
        let a = radii();
        let y: Vec<f64> = a.iter().map(|a| 3.0 * a.powi(2) * a.ln().abs()).collect();
        let f = fit_both(&a, &y).unwrap();
        assert!((f.power_log.p - 2.0).abs() < 1e-10 && (f.power_log.q - 1.0).abs() < 1e-9);
        assert!((f.power_log.c - 3.0).abs() < 1e-8);
        assert!(f.power.residual_rms > f.power_log.residual_rms);
    }

    #[test]
    fn rejects_bad_input() {
        let a = radii();
        assert!(fit_series(&a[..3], &[1.0, 2.0, 3.0], FitModel::PowerLaw).is_err());
        let mut y = vec![1.0; 5];
        y[2] = -1.0;
        assert!(matches!(fit_series(&a, &y, FitModel::PowerLaw), Err(Error::Fit(_))));
        assert!(fit_series(&[0.5, 0.5, 0.5, 0.5], &[1.0, 1.0, 1.0, 1.0], FitModel::PowerLaw).is_err());
    }

    proptest! {
        #[test]
        fn exponents_ignore_constant_factors(k in 1e-6f64..1e6, p in 0.5f64..3.0, q in -1.0f64..2.0, noise in prop::collection::vec(-0.05f64..0.05, 5)) {
            let a = radii();
            let y: Vec<f64> = a.iter().zip(&noise).map(|(a, e)| a.powf(p) * a.ln().abs().powf(q) * e.exp()).collect();
            let ky: Vec<f64> = y.iter().map(|v| v * k).collect();
            let f1 = fit_both(&a, &y).unwrap();
            let f2 = fit_both(&a, &ky).unwrap();
            prop_assert!((f1.power_log.p - f2.power_log.p).abs() < 1e-8);
            prop_assert!((f1.power_log.q - f2.power_log.q).abs() < 1e-8);
            prop_assert!((f1.power.p - f2.power.p).abs() < 1e-8);
            prop_assert!(f1.power_log.residual_rms <= f1.power.residual_rms + 1e-12);
        }
    }
}
