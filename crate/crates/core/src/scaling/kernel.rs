use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galerkin::{log_kernel, Point};
use crate::scalar::Real;

/// 1 / (4π d)
pub fn newton_kernel<T: Real>(d: T) -> T {
    T::one() / (T::lit(4.0) * T::PI() * d)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelRescaleReport<T> {
    pub dimension: u32,
    pub a: T,
    pub pairs: usize,
    /// Largest |scaled − predicted| relative to max(1, |predicted|).
    pub max_error: T,
    /// Largest excess of the error over its per-pair allowance; ≤ 0 on pass.
    pub worst_excess: T,
    pub pass: bool,
}

const KERNEL_TOL: f64 = 1e-12;

// Rounding of z + a x̃ perturbs the scaled distance d by about ε (|z| + a|x̃|);
// that part of the error is conditioning, not a failure of the identity.
fn allowance<T: Real>(coord_size: T, scaled_d: T, value: T, dim_factor: T) -> T {
    let cond = T::lit(4.0) * T::epsilon() * coord_size / scaled_d;
    T::tol(KERNEL_TOL) + dim_factor * cond / value.abs().max(T::one())
}

/// Checks φ₀(z + a x̃, z + a ỹ) = −log(a)/2π + φ₀(x̃, ỹ) for the planar kernel.
pub fn kernel_rescale_check_2d<T: Real>(a: T, z: Point<T>, pairs: &[(Point<T>, Point<T>)]) -> Result<KernelRescaleReport<T>> {
    if !(a > T::zero()) {
        return Err(Error::domain("scale must be positive"));
    }
    let mut worst = T::zero();
    let mut excess = T::neg_infinity();
    for (x, y) in pairs {
        let d = (x[0] - y[0]).hypot(x[1] - y[1]);
        if d == T::zero() {
            return Err(Error::domain("coincident sample points"));
        }
        let sx = [z[0] + a * x[0], z[1] + a * x[1]];
        let sy = [z[0] + a * y[0], z[1] + a * y[1]];
        let sd = (sx[0] - sy[0]).hypot(sx[1] - sy[1]);
        let scaled = log_kernel(sd);
        let predicted = -a.ln() / (T::lit(2.0) * T::PI()) + log_kernel(d);
        let err = (scaled - predicted).abs() / predicted.abs().max(T::one());
        let size = sx.iter().chain(&sy).fold(T::zero(), |m, v| m.max(v.abs()));
        worst = worst.max(err);
        excess = excess.max(err - allowance(size, sd, predicted, T::one() / (T::lit(2.0) * T::PI())));
    }
    Ok(KernelRescaleReport { dimension: 2, a, pairs: pairs.len(), max_error: worst, worst_excess: excess, pass: excess <= T::zero() })
}

/// Checks 1/(4π|a(x̃ − ỹ)|) = a⁻¹ · 1/(4π|x̃ − ỹ|) for the spatial kernel.
pub fn kernel_rescale_check_3d<T: Real>(a: T, z: [T; 3], pairs: &[([T; 3], [T; 3])]) -> Result<KernelRescaleReport<T>> {
    if !(a > T::zero()) {
        return Err(Error::domain("scale must be positive"));
    }
    let norm3 = |u: [T; 3], v: [T; 3]| ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
    let mut worst = T::zero();
    let mut excess = T::neg_infinity();
    for (x, y) in pairs {
        let d = norm3(*x, *y);
        if d == T::zero() {
            return Err(Error::domain("coincident sample points"));
        }
        let sx = [z[0] + a * x[0], z[1] + a * x[1], z[2] + a * x[2]];
        let sy = [z[0] + a * y[0], z[1] + a * y[1], z[2] + a * y[2]];
        let sd = norm3(sx, sy);
        let scaled = newton_kernel(sd);
        let predicted = newton_kernel(d) / a;
        let err = (scaled - predicted).abs() / predicted.abs();
        let size = sx.iter().chain(&sy).fold(T::zero(), |m, v| m.max(v.abs()));
        worst = worst.max(err);
        excess = excess.max(err - allowance(size, sd, T::one(), T::one()));
    }
    Ok(KernelRescaleReport { dimension: 3, a, pairs: pairs.len(), max_error: worst, worst_excess: excess, pass: excess <= T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_cases() {
        let pair = [([0.0, 0.0], [1.0, 0.0])];
        let r = kernel_rescale_check_2d(1.0_f64, [0.0, 0.0], &pair).unwrap();
        assert!(r.pass && r.max_error == 0.0);
        let far = kernel_rescale_check_2d(0.1_f64, [0.0, 0.0], &[([0.0, 0.0], [1.0, 0.0])]).unwrap();
        assert!(far.max_error < 1e-15);
        let scaled = log_kernel(0.1_f64);
        assert!((scaled + 0.1f64.ln() / (2.0 * std::f64::consts::PI)).abs() < 1e-16);
        let r3 = kernel_rescale_check_3d(0.5_f64, [0.0; 3], &[([0.0; 3], [1.0, 0.0, 0.0])]).unwrap();
        assert!(r3.pass);
        assert!((newton_kernel(0.5_f64) / newton_kernel(1.0) - 2.0).abs() < 1e-15);
        assert!(kernel_rescale_check_2d(0.5_f64, [0.0, 0.0], &[([0.2, 0.2], [0.2, 0.2])]).is_err());
    }

    #[test]
    fn random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut p2 = Vec::new();
        let mut p3 = Vec::new();
        for _ in 0..200 {
            let mut g = || rng.gen_range(-1.0..1.0);
            p2.push(([g(), g()], [g(), g()]));
            p3.push(([g(), g(), g()], [g(), g(), g()]));
        }
        for a in [1e-6, 0.01, 0.3, 0.9] {
            assert!(kernel_rescale_check_2d(a, [0.25, -0.5], &p2).unwrap().pass);
            assert!(kernel_rescale_check_3d(a, [0.1, 0.2, 0.3], &p3).unwrap().pass);
            assert!(kernel_rescale_check_2d(a, [0.0, 0.0], &p2).unwrap().max_error < 1e-12);
        }
    }
}
