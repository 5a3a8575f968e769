//! Closed-form spectrum of the Newtonian potential operator on a ball.
//!
//! Radial roots μ solve
//! (2l+1) J_{l+1/2}(μ) + (μ/2)(J_{l-1/2}(μ) − J_{l+3/2}(μ)) = 0 and give
//! λ = a²/μ² with multiplicity 2l + 1 (the m index of the spherical harmonic).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate};
use crate::roots::{refine_root, scan_brackets};
use crate::scalar::Real;
use crate::specfun::{bessel_j, half_integer_family, ln_gamma, BesselOrder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallEigenpair<T> {
    /// Degree of the spherical harmonic; the radial order is l + 1/2.
    pub l: u32,
    pub j: usize,
    pub m: i32,
    pub mu: T,
    pub lambda: T,
}

/// ∫₀^π P_l(cos θ) cos θ dθ for a Legendre degree l.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularIntegral<T> {
    pub l: u32,
    pub value: T,
}

/// Pieces of the normalised-eigenfunction integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallIntegral<T> {
    /// ∫ of the unnormalised eigenfunction.
    pub numerator: T,
    /// Its squared L² norm.
    pub norm_squared: T,
    /// numerator / √norm_squared
    pub value: T,
}

/// (2l+1) J_{l+1/2}(μ) + (μ/2)(J_{l-1/2}(μ) − J_{l+3/2}(μ)).
pub fn ball_equation<T: Real>(l: u32, mu: T) -> Result<T> {
    let f = half_integer_family(l + 1, mu)?;
    let i = l as usize;
    Ok(T::lit(2.0 * l as f64 + 1.0) * f[i + 1] + mu / T::lit(2.0) * (f[i] - f[i + 2]))
}

const SCAN_FLOOR: f64 = 1e-8;

/// First `j_max` positive roots of [`ball_equation`] for degree l.
pub fn solve_mu_halfint<T: Real>(l: u32, j_max: usize) -> Result<Vec<T>> {
    if j_max == 0 {
        return Err(Error::domain("j_max must be at least 1"));
    }
    let f = |m: T| ball_equation(l, m).unwrap_or_else(|_| T::nan());
    let df = |m: T| {
        let h = T::lit(1e-6) * m.max(T::one());
        (f(m + h) - f(m - h)) / (T::lit(2.0) * h)
    };
    let limit = T::lit(l as f64 + 20.0 + (j_max as f64 + 4.0) * std::f64::consts::PI);
    let brackets = scan_brackets(f, T::lit(SCAN_FLOOR), T::PI() / T::lit(16.0), limit, j_max, &format!("ball equation l = {l}"))?;
    let roots = brackets
        .into_iter()
        .map(|(lo, hi)| refine_root(f, df, lo, hi, "ball root"))
        .collect::<Result<Vec<T>>>()?;
    for &r in &roots {
        let res = f(r).abs();
        if res > T::tol(1e-10) {
            return Err(Error::Solver { message: format!("ball root {r} for l = {l}"), residual: res.to_f64_lossy() });
        }
    }
    Ok(roots)
}

/// Eigenpairs for l ≤ l_max, j ≤ j_max and every m in −l..=l, sorted by
/// decreasing λ and then by (l, j, m).
pub fn ball_eigenvalues<T: Real>(a: T, l_max: u32, j_max: usize) -> Result<Vec<BallEigenpair<T>>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain(format!("ball radius must be positive, got {a}")));
    }
    let per_l: Vec<Vec<T>> = (0..=l_max).into_par_iter().map(|l| solve_mu_halfint(l, j_max)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (l, roots) in per_l.into_iter().enumerate() {
        let l = l as u32;
        for (j, mu) in roots.into_iter().enumerate() {
            for m in -(l as i32)..=(l as i32) {
                out.push(BallEigenpair { l, j: j + 1, m, mu, lambda: a * a / (mu * mu) });
            }
        }
    }
    out.sort_by(|x, y| {
        y.lambda
            .partial_cmp(&x.lambda)
            .expect("finite eigenvalues")
            .then((x.l, x.j, x.m).cmp(&(y.l, y.j, y.m)))
    });
    Ok(out)
}

/// Degree above which the alternating finite sum is replaced by the
/// three-term closed form; past this the sum's cancellation costs more than
/// 10⁻¹¹ relative accuracy.
const SUM_LIMIT: u32 = 9;

/// ∫₀^π P_l(cos θ) cos θ dθ.
///
/// Zero for even l. For odd l = 2n+1 this expands P_l in powers of cos θ and
/// integrates term by term with ∫₀^π cos^{2p} θ dθ = π (2p)! / (4^p (p!)²).
pub fn legendre_cos_integral<T: Real>(l: u32) -> Result<AngularIntegral<T>> {
    if l.is_multiple_of(2) {
        return Ok(AngularIntegral { l, value: T::zero() });
    }
    let value = if l <= SUM_LIMIT { legendre_cos_sum(l)? } else { legendre_cos_closed(l)? };
    Ok(AngularIntegral { l, value })
}

fn ln_fact<T: Real>(n: u32) -> Result<T> {
    ln_gamma(T::lit(n as f64 + 1.0))
}

fn legendre_cos_sum<T: Real>(l: u32) -> Result<T> {
    let mut s = T::zero();
    for m in 0..=l / 2 {
        let p = (l - 2 * m).div_ceil(2);
        let ln_coef = ln_fact::<T>(2 * l - 2 * m)?
            - T::lit(l as f64) * T::LN_2()
            - ln_fact::<T>(m)?
            - ln_fact::<T>(l - m)?
            - ln_fact::<T>(l - 2 * m)?;
        let ln_moment = ln_fact::<T>(2 * p)? - T::lit(2.0 * p as f64) * T::LN_2() - T::lit(2.0) * ln_fact::<T>(p)?;
        let term = (ln_coef + ln_moment).exp() * T::PI();
        s = if m % 2 == 0 { s + term } else { s - term };
    }
    Ok(s)
}

// x P_l = ((l+1) P_{l+1} + l P_{l-1}) / (2l+1) and ∫₀^π P_n(cos θ) dθ = π P_n(0)².
fn legendre_cos_closed<T: Real>(l: u32) -> Result<T> {
    let c = |n: u32| -> Result<T> {
        let half = n / 2;
        let ln_p0 = ln_fact::<T>(n)? - T::lit(2.0) * ln_fact::<T>(half)? - T::lit(n as f64) * T::LN_2();
        Ok(T::PI() * (T::lit(2.0) * ln_p0).exp())
    };
    let lf = T::lit(l as f64);
    Ok(((lf + T::one()) * c(l + 1)? + lf * c(l - 1)?) / (T::lit(2.0) * lf + T::one()))
}

fn radial_integral<T: Real>(f: impl Fn(T) -> T, upper: T) -> Result<T> {
    let rough = gauss_legendre(16, T::zero(), upper, &f).abs();
    let tol = (T::tol(1e-13) * rough).max(T::min_positive_value());
    integrate(&f, T::zero(), upper, tol, &[])
}

/// Integral over the ball of radius a of the L²-normalised eigenfunction
/// with degree l, radial index j and order m.
///
/// Only odd degrees with m = 0 integrate to something nonzero; the rest
/// return exact zeros. Radial integrals run over [0, a²/μ] with the
/// Jacobian (μ/a)³ applied explicitly.
pub fn ball_normalized_integral<T: Real>(l: u32, m: i32, j: usize, a: T) -> Result<BallIntegral<T>> {
    if !(a > T::zero()) {
        return Err(Error::domain(format!("ball radius must be positive, got {a}")));
    }
    if m.unsigned_abs() > l {
        return Err(Error::domain(format!("|m| must not exceed l, got l={l}, m={m}")));
    }
    if m != 0 || l.is_multiple_of(2) {
        return Ok(BallIntegral { numerator: T::zero(), norm_squared: T::zero(), value: T::zero() });
    }
    let mu = *solve_mu_halfint::<T>(l, j)?.last().expect("j >= 1 roots");
    let order = BesselOrder::HalfInteger(l);
    let jac = T::lit(2.0) * T::PI() * (mu / a).powi(3);
    let upper = a * a / mu;
    let r1 = radial_integral(|r: T| bessel_j(order, r).unwrap_or_else(|_| T::nan()) * r * r, upper)?;
    let r2 = radial_integral(|r: T| bessel_j(order, r).unwrap_or_else(|_| T::nan()).powi(2) * r * r, upper)?;
    let angular = legendre_cos_integral::<T>(l)?.value;
    let numerator = jac * r1 * angular;
    let norm_squared = jac * r2 * T::lit(2.0) / T::lit(2.0 * l as f64 + 1.0);
    Ok(BallIntegral { numerator, norm_squared, value: numerator / norm_squared.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::legendre_p;

    #[test]
    fn degree_zero_roots_match_trig_scan() {
        // trig forms of J_{1/2}, J_{-1/2}, J_{3/2}, scanned on a dense grid
        let g = |m: f64| {
            let s = (2.0 / (std::f64::consts::PI * m)).sqrt();
            let j12 = s * m.sin();
            let jm12 = s * m.cos();
            let j32 = s * (m.sin() / m - m.cos());
            j12 + m / 2.0 * (jm12 - j32)
        };
        let mut oracle = Vec::new();
        let n = 200_000;
        let (mut x0, mut g0) = (1e-8, g(1e-8));
        for i in 1..=n {
            let x1 = 12.0 * i as f64 / n as f64;
            let g1 = g(x1);
            if g0 * g1 < 0.0 {
                let (mut lo, mut hi) = (x0, x1);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if g(lo) * g(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                oracle.push(lo);
            }
            x0 = x1;
            g0 = g1;
        }
        let roots = solve_mu_halfint::<f64>(0, 3).unwrap();
        for (r, o) in roots.iter().zip(&oracle) {
            assert!((r - o).abs() < 1e-9);
        }
        assert!((roots[0] - 1.8366).abs() < 1e-4);
    }

    #[test]
    fn roots_are_order_one_and_certified() {
        for l in 0..=4 {
            let roots = solve_mu_halfint::<f64>(l, 3).unwrap();
            assert!(roots[0] > 0.1 && roots[0] < 20.0);
            for r in &roots {
                assert!(ball_equation(l, *r).unwrap().abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn eigenvalues_scale_and_order() {
        let a = 0.37_f64;
        let pairs = ball_eigenvalues(a, 3, 3).unwrap();
        assert_eq!(pairs.len(), 3 * (1 + 3 + 5 + 7));
        for p in &pairs {
            assert!((p.lambda * p.mu * p.mu / (a * a) - 1.0).abs() < 1e-14);
        }
        for l in 0..=3 {
            let mut per: Vec<f64> = pairs.iter().filter(|p| p.l == l && p.m == 0).map(|p| p.lambda).collect();
            per.dedup();
            for w in per.windows(2) {
                assert!(w[0] > w[1]);
            }
        }
        let b = ball_eigenvalues(0.02, 3, 3).unwrap();
        for (p, q) in pairs.iter().zip(&b) {
            assert!(((p.lambda / (a * a)) / (q.lambda / 0.0004) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn angular_integral_against_quadrature() {
        for l in 0..8u32 {
            let q: f64 = gauss_legendre(64, 0.0, std::f64::consts::PI, |t: f64| {
                legendre_p(l, 0, t.cos()).unwrap() * t.cos()
            });
            let v = legendre_cos_integral::<f64>(l).unwrap().value;
            assert!((v - q).abs() < 1e-10, "l={l}: {v} vs {q}");
            if l % 2 == 0 {
                assert_eq!(v, 0.0);
            }
        }
        let pi = std::f64::consts::PI;
        assert!((legendre_cos_integral::<f64>(1).unwrap().value - pi / 2.0).abs() < 1e-15);
        assert!((legendre_cos_integral::<f64>(3).unwrap().value - 3.0 * pi / 16.0).abs() < 1e-14);
    }

    #[test]
    fn sum_and_closed_form_agree() {
        for l in (1u32..=SUM_LIMIT).step_by(2) {
            let s: f64 = legendre_cos_sum(l).unwrap();
            let c: f64 = legendre_cos_closed(l).unwrap();
            assert!((s - c).abs() < 1e-11 * c.abs(), "l={l}");
        }
        // high-precision quadrature values
        assert!((legendre_cos_integral::<f64>(15).unwrap().value - 0.129_233_714_988_675_52).abs() < 1e-14);
        assert!((legendre_cos_integral::<f64>(31).unwrap().value - 0.063_516_060_502_394_7).abs() < 1e-14);
        let big = legendre_cos_integral::<f64>(101).unwrap().value;
        assert!(big > 0.0 && big < 0.1);
    }

    #[test]
    fn vanishing_cases() {
        let z = ball_normalized_integral(2, 0, 1, 0.3_f64).unwrap();
        assert_eq!(z.value, 0.0);
        let z = ball_normalized_integral(3, 1, 1, 0.3_f64).unwrap();
        assert_eq!(z.value, 0.0);
        assert!(ball_normalized_integral(1, 2, 1, 0.3_f64).is_err());
    }

    #[test]
    fn normalized_integral_scales_like_three_halves() {
        let at = |a: f64| ball_normalized_integral(1, 0, 1, a).unwrap().value / a.powf(1.5);
        let base = at(0.5);
        assert!(base.abs() > 1.0 && base.abs() < 5.0);
        for a in [0.1, 0.02] {
            assert!((at(a) / base - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn numerator_and_norm_powers() {
        for l in [1u32, 3] {
            let k = (l - 1) / 2;
            let one = ball_normalized_integral(l, 0, 1, 1.0_f64).unwrap();
            for a in [0.1, 0.05] {
                let x = ball_normalized_integral(l, 0, 1, a).unwrap();
                let nu = x.numerator / one.numerator / a.powi(6 + 4 * k as i32);
                let du = x.norm_squared / one.norm_squared / a.powi(9 + 8 * k as i32);
                assert!((nu - 1.0).abs() < 0.1, "l={l} a={a} nu={nu}");
                assert!((du - 1.0).abs() < 0.1, "l={l} a={a} du={du}");
            }
        }
    }
}
