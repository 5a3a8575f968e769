//! Closed-form spectrum of the logarithmic potential operator on a disc.
//!
//! On the disc of radius a the eigenfunctions are J_k(μ r / a) e^{±ikφ} with
//! eigenvalue λ = a²/μ². For k ≥ 1 the radial roots solve
//! k J_k(μ) + (μ/2)(J_{k-1}(μ) − J_{k+1}(μ)) = 0 and do not depend on a; the
//! radially symmetric roots solve J₀(μ) + log(a) μ J₁(μ) = 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::roots::{refine_root, scan_brackets};
use crate::scalar::Real;
use crate::specfun::{bessel_j, bessel_zeros, BesselOrder};

use BesselOrder::Integer;

/// Radius and index ranges of a closed-form disc computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscSpec<T> {
    pub radius: T,
    pub k_max: u32,
    pub j_max: u32,
}

impl<T: Real> DiscSpec<T> {
    pub fn new(radius: T, k_max: u32, j_max: u32) -> Result<Self> {
        let s = DiscSpec { radius, k_max, j_max };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_radius(self.radius)?;
        if self.j_max == 0 {
            return Err(Error::domain("j_max must be at least 1"));
        }
        Ok(())
    }
}

fn check_radius<T: Real>(a: T) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain(format!("disc radius must be positive, got {a}")));
    }
    if a > T::one() {
        return Err(Error::UnsupportedRegime(format!(
            "radius {a} > 1 flips the sign of log a in the radial equation"
        )));
    }
    Ok(())
}

/// Which transcendental equation a root solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RootEquation<T> {
    /// J₀(μ) + log(a) μ J₁(μ) = 0
    K0WithLog(T),
    /// k J_k(μ) + (μ/2)(J_{k-1}(μ) − J_{k+1}(μ)) = 0
    KGeneral(u32),
}

impl<T: Real> RootEquation<T> {
    pub fn eval(&self, mu: T) -> Result<T> {
        match *self {
            RootEquation::K0WithLog(a) => k0_equation(a, mu),
            RootEquation::KGeneral(k) => kgeq1_equation(k, mu),
        }
    }
}

/// A bracketed root μ of a disc equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranscendentalRoot<T> {
    pub value: T,
    pub index: usize,
    pub equation: RootEquation<T>,
    pub bracket: (T, T),
    /// |equation(value)|
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscEigenpair<T> {
    pub k: u32,
    pub j: usize,
    pub mu: TranscendentalRoot<T>,
    pub lambda: T,
    /// ∫ of the L²-normalised eigenfunction; zero for k ≥ 1.
    pub int_normalized: T,
}

/// Ψ_a(x) = J₀(x) + 2 log(a) x J₁(x).
pub fn psi_a<T: Real>(a: T, x: T) -> Result<T> {
    if !(a > T::zero()) {
        return Err(Error::domain(format!("psi_a needs a > 0, got {a}")));
    }
    Ok(bessel_j(Integer(0), x)? + T::lit(2.0) * a.ln() * x * bessel_j(Integer(1), x)?)
}

/// Radial equation for k = 0: J₀(μ) + log(a) μ J₁(μ).
pub fn k0_equation<T: Real>(a: T, mu: T) -> Result<T> {
    Ok(bessel_j(Integer(0), mu)? + a.ln() * mu * bessel_j(Integer(1), mu)?)
}

fn k0_derivative<T: Real>(a: T, mu: T) -> Result<T> {
    // (μ J₁)' = μ J₀
    Ok(-bessel_j(Integer(1), mu)? + a.ln() * mu * bessel_j(Integer(0), mu)?)
}

/// k J_k(μ) + (μ/2)(J_{k-1}(μ) − J_{k+1}(μ)).
pub fn kgeq1_equation<T: Real>(k: u32, mu: T) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("kgeq1_equation needs k >= 1"));
    }
    let kf = T::lit(k as f64);
    Ok(kf * bessel_j(Integer(k), mu)?
        + mu / T::lit(2.0) * (bessel_j(Integer(k - 1), mu)? - bessel_j(Integer(k + 1), mu)?))
}

fn kgeq1_derivative<T: Real>(k: u32, mu: T) -> Result<T> {
    // the equation equals μ J_{k-1}(μ)
    let jkm1 = bessel_j(Integer(k - 1), mu)?;
    let d = if k == 1 {
        -bessel_j(Integer(1), mu)?
    } else {
        (bessel_j(Integer(k - 2), mu)? - bessel_j(Integer(k), mu)?) / T::lit(2.0)
    };
    Ok(jkm1 + mu * d)
}

const FIRST_ROOT_FLOOR: f64 = 1e-8;

/// Roots μ_1 < … < μ_{j_max} of the k = 0 equation.
///
/// μ_1 is sought in (10⁻⁸, α_{0,1}) and μ_j in (α_{1,j-1}, α_{0,j}), where
/// α_{n,j} are the zeros of J_n. At a = 1 the equation degenerates to J₀ = 0
/// and the roots are α_{0,j} themselves.
pub fn solve_mu_k0<T: Real>(a: T, j_max: usize) -> Result<Vec<TranscendentalRoot<T>>> {
    check_radius(a)?;
    if j_max == 0 {
        return Err(Error::domain("j_max must be at least 1"));
    }
    let equation = RootEquation::K0WithLog(a);
    let z0 = bessel_zeros::<T>(Integer(0), j_max)?;
    if a == T::one() {
        return Ok(z0
            .iter()
            .map(|z| TranscendentalRoot { value: z.value, index: z.index, equation, bracket: z.bracket, residual: z.residual })
            .collect());
    }
    let z1 = if j_max > 1 { bessel_zeros::<T>(Integer(1), j_max - 1)? } else { Vec::new() };
    (1..=j_max)
        .into_par_iter()
        .map(|j| {
            let lo = if j == 1 { T::lit(FIRST_ROOT_FLOOR) } else { z1[j - 2].value };
            let hi = z0[j - 1].value;
            let f = |m: T| k0_equation(a, m).unwrap_or_else(|_| T::nan());
            let value = refine_root(f, |m| k0_derivative(a, m).unwrap_or_else(|_| T::nan()), lo, hi, "k = 0 disc root")?;
            Ok(TranscendentalRoot { value, index: j, equation, bracket: (lo, hi), residual: f(value).abs() })
        })
        .collect()
}

/// First `j_max` roots of the k ≥ 1 equation, from a π/8 scan starting at k/2.
pub fn solve_mu_kgeq1<T: Real>(k: u32, j_max: usize) -> Result<Vec<TranscendentalRoot<T>>> {
    if k == 0 {
        return Err(Error::domain("solve_mu_kgeq1 needs k >= 1"));
    }
    if j_max == 0 {
        return Err(Error::domain("j_max must be at least 1"));
    }
    let equation = RootEquation::KGeneral(k);
    let f = |m: T| kgeq1_equation(k, m).unwrap_or_else(|_| T::nan());
    let start = T::lit(k as f64 / 2.0);
    let limit = T::lit(k as f64 + 20.0 + (j_max as f64 + 4.0) * std::f64::consts::PI);
    let brackets = scan_brackets(f, start, T::PI() / T::lit(8.0), limit, j_max, &format!("disc equation k = {k}"))?;
    brackets
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let value = refine_root(f, |m| kgeq1_derivative(k, m).unwrap_or_else(|_| T::nan()), lo, hi, "disc root")?;
            Ok(TranscendentalRoot { value, index: i + 1, equation, bracket: (lo, hi), residual: f(value).abs() })
        })
        .collect()
}

/// All eigenpairs with k ≤ k_max and j ≤ j_max, sorted by decreasing λ.
///
/// Eigenvalues equal to within 10⁻¹⁴ (relative) are ordered by (k, j).
pub fn disc_eigenvalues<T: Real>(spec: &DiscSpec<T>) -> Result<Vec<DiscEigenpair<T>>> {
    spec.validate()?;
    let a = spec.radius;
    let j_max = spec.j_max as usize;
    let per_k: Vec<Vec<DiscEigenpair<T>>> = (0..=spec.k_max)
        .into_par_iter()
        .map(|k| {
            let roots = if k == 0 { solve_mu_k0(a, j_max)? } else { solve_mu_kgeq1(k, j_max)? };
            roots
                .into_iter()
                .map(|mu| {
                    let mut pair = DiscEigenpair { k, j: mu.index, mu, lambda: a * a / (mu.value * mu.value), int_normalized: T::zero() };
                    pair.int_normalized = disc_normalized_integral(&pair, a)?;
                    Ok(pair)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut pairs: Vec<DiscEigenpair<T>> = per_k.into_iter().flatten().collect();
    sort_pairs(&mut pairs);
    Ok(pairs)
}

fn sort_pairs<T: Real>(pairs: &mut [DiscEigenpair<T>]) {
    pairs.sort_by(|x, y| y.lambda.partial_cmp(&x.lambda).expect("finite eigenvalues"));
    let tie = T::lit(1e-14);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end - 1].lambda - pairs[end].lambda).abs() <= tie * pairs[start].lambda.abs() {
            end += 1;
        }
        pairs[start..end].sort_by_key(|p| (p.k, p.j));
        start = end;
    }
}

/// Multiplicity of an angular order: 1 for k = 0, 2 otherwise (e^{±ikφ}).
pub fn multiplicity(k: u32) -> usize {
    if k == 0 {
        1
    } else {
        2
    }
}

/// Eigenvalues repeated according to [`multiplicity`], in the pairs' order.
pub fn expand_multiplicity<T: Real>(pairs: &[DiscEigenpair<T>]) -> Vec<T> {
    pairs.iter().flat_map(|p| std::iter::repeat_n(p.lambda, multiplicity(p.k))).collect()
}

/// ∫_D u for the unnormalised eigenfunction u = J_k(μ r/a) e^{ikφ}.
pub fn disc_eigfun_integral<T: Real>(pair: &DiscEigenpair<T>, a: T) -> Result<T> {
    if pair.k != 0 {
        return Ok(T::zero());
    }
    let mu = pair.mu.value;
    Ok(T::lit(2.0) * T::PI() * a * a / mu * bessel_j(Integer(1), mu)?)
}

/// ∫₀^μ J₀(r)² r dr by adaptive quadrature split at the zeros of J₀.
pub fn radial_norm_k0<T: Real>(mu: T) -> Result<T> {
    let n_zeros = (mu.to_f64_lossy() / std::f64::consts::PI).ceil() as usize + 1;
    let cuts: Vec<T> = bessel_zeros::<T>(Integer(0), n_zeros)?.into_iter().map(|z| z.value).collect();
    integrate(
        |r: T| {
            let j = bessel_j(Integer(0), r).unwrap_or_else(|_| T::nan());
            j * j * r
        },
        T::zero(),
        mu,
        T::tol(1e-12),
        &cuts,
    )
}

/// ∫_D v for the L²-normalised eigenfunction v: √(2π) a J₁(μ) / (∫₀^μ J₀² r dr)^{1/2}.
pub fn disc_normalized_integral<T: Real>(pair: &DiscEigenpair<T>, a: T) -> Result<T> {
    if pair.k != 0 {
        return Ok(T::zero());
    }
    let mu = pair.mu.value;
    let norm2 = radial_norm_k0(mu)?;
    Ok((T::lit(2.0) * T::PI()).sqrt() * a * bessel_j(Integer(1), mu)? / norm2.sqrt())
}

/// ⟨f, N f⟩ / ⟨f, f⟩ on the unit disc for f = J_k(μ r) e^{ikφ}, by quadrature.
///
/// Uses the angular expansion of the log kernel, so it evaluates the
/// operator independently of the eigenvalue equation.
pub fn unit_disc_quadratic_form<T: Real>(k: u32, mu: T) -> Result<T> {
    let tol = T::tol(1e-13);
    let j = |n: u32, x: T| bessel_j(Integer(n), x).unwrap_or_else(|_| T::nan());
    if k == 0 {
        let num = integrate(|r: T| if r == T::zero() { T::zero() } else { r.ln() * j(0, mu * r) * r * r * j(1, mu * r) }, T::zero(), T::one(), tol, &[])?;
        let den = integrate(|r: T| j(0, mu * r).powi(2) * r, T::zero(), T::one(), tol, &[])?;
        Ok(-T::lit(2.0) * num / (mu * den))
    } else {
        let num = integrate(|r: T| r * r * j(k, mu * r) * j(k + 1, mu * r), T::zero(), T::one(), tol, &[])?;
        let den = integrate(|r: T| j(k, mu * r).powi(2) * r, T::zero(), T::one(), tol, &[])?;
        Ok(num / (T::lit(k as f64) * mu * den))
    }
}

/// ∫ over the unit disc of the L²-normalised f = J₀(μ r).
pub fn unit_disc_mean<T: Real>(mu: T) -> Result<T> {
    let den = integrate(
        |r: T| bessel_j(Integer(0), mu * r).unwrap_or_else(|_| T::nan()).powi(2) * r,
        T::zero(),
        T::one(),
        T::tol(1e-13),
        &[],
    )?;
    Ok((T::lit(2.0) * T::PI()).sqrt() * bessel_j(Integer(1), mu)? / mu / den.sqrt())
}
