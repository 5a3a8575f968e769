use serde::{Deserialize, Serialize};

use crate::disc::{disc_eigenvalues, unit_disc_mean, unit_disc_quadratic_form, DiscSpec};
use crate::error::{Error, Result};
use crate::galerkin::{assemble, build_mesh, spectrum, Domain2D, OperatorMatrix, SpectrumResult};
use crate::scalar::Real;

/// Unit-scale quantities of the first modes of Ω = a·Ω*.
///
/// With f̄_n(x̃) = a f_n(a x̃) (unit L²(Ω*) norm), the identity
/// λ̃_n = λ_n/a² + (log a / 2π)(∫_{Ω*} f̄_n)² links them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledSpectrum<T> {
    pub a: T,
    /// λ_n(Ω)
    pub lambda: Vec<T>,
    /// ⟨f̄_n, N_{Ω*} f̄_n⟩
    pub lambda_tilde: Vec<T>,
    /// λ_n / a²
    pub beta: Vec<T>,
    /// λ_n / (a² |log a|)
    pub beta_log: Vec<T>,
    /// ∫_{Ω*} f̄_n, sign-normalised to be ≥ 0.
    pub integrals: Vec<T>,
    /// |λ̃_n − λ_n/a² − (log a/2π)(∫f̄_n)²| / λ̃_n
    pub residuals: Vec<T>,
}

impl<T: Real> RescaledSpectrum<T> {
    fn build(a: T, lambda: Vec<T>, lambda_tilde: Vec<T>, integrals: Vec<T>) -> Self {
        let a2 = a * a;
        let la = a.ln();
        let s = la / (T::lit(2.0) * T::PI());
        let beta: Vec<T> = lambda.iter().map(|&l| l / a2).collect();
        let beta_log = beta.iter().map(|&b| b / la.abs()).collect();
        let residuals = lambda_tilde
            .iter()
            .zip(&beta)
            .zip(&integrals)
            .map(|((&lt, &b), &i)| (lt - b - s * i * i).abs() / lt.abs())
            .collect();
        RescaledSpectrum { a, lambda, lambda_tilde, beta, beta_log, integrals, residuals }
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, &r| m.max(r))
    }
}

fn check_regime<T: Real>(a: T) -> Result<()> {
    if !(a > T::zero() && a < T::one()) {
        return Err(Error::UnsupportedRegime(format!("the rescaled identity needs 0 < a < 1, got {a}")));
    }
    Ok(())
}

/// Rescaled quantities from a Galerkin spectrum on Ω = a·Ω*.
///
/// `physical` and `spec` describe Ω; `unit` is the operator on the mesh of
/// Ω* whose image under x ↦ a·x is the physical mesh. λ̃_n is evaluated
/// with the unit-scale matrix.
pub fn rescaled_identity_check<T: Real>(
    physical: &OperatorMatrix<T>,
    spec: &SpectrumResult<T>,
    unit: &OperatorMatrix<T>,
    a: T,
) -> Result<RescaledSpectrum<T>> {
    check_regime(a)?;
    if physical.n() != unit.n() {
        return Err(Error::Precondition(format!("mesh sizes differ: {} vs {}", physical.n(), unit.n())));
    }
    let w = unit.areas();
    let mut lambda_tilde = Vec::with_capacity(spec.eigenvalues.len());
    let mut integrals = Vec::with_capacity(spec.eigenvalues.len());
    for n in 0..spec.eigenvalues.len() {
        let mut bar: Vec<T> = spec.vector(n)?.iter().map(|&x| a * x).collect();
        let mut i: T = bar.iter().zip(&w).map(|(&x, &wi)| x * wi).sum();
        if i < T::zero() {
            bar.iter_mut().for_each(|x| *x = -*x);
            i = -i;
        }
        lambda_tilde.push(unit.quadratic_form(&bar));
        integrals.push(i);
    }
    Ok(RescaledSpectrum::build(a, spec.eigenvalues.clone(), lambda_tilde, integrals))
}

/// Meshes Ω* once, assembles the operator separately on Ω* and on a·Ω*, and
/// runs [`rescaled_identity_check`] on the first `count` modes.
pub fn galerkin_rescaled<T: Real>(unit_domain: &Domain2D<T>, a: T, cells: usize, count: usize) -> Result<RescaledSpectrum<T>> {
    check_regime(a)?;
    let mesh = build_mesh(unit_domain, cells)?;
    let (unit, physical) = rayon::join(|| assemble(&mesh), || assemble(&mesh.scaled(a)));
    let (unit, physical) = (unit?, physical?);
    let spec = spectrum(&physical, count, true)?;
    rescaled_identity_check(&physical, &spec, &unit, a)
}

/// Closed-form rescaled quantities of the disc of radius a (Ω* the unit
/// disc), one entry per mode counted with multiplicity.
///
/// λ̃_n comes from the angular expansion of the kernel, not from the
/// eigenvalue equation, so the residual tests the root equation.
pub fn rescaled_identity_disc<T: Real>(a: T, count: usize) -> Result<RescaledSpectrum<T>> {
    check_regime(a)?;
    if count == 0 {
        return Err(Error::domain("count must be at least 1"));
    }
    let spec = DiscSpec::new(a, count as u32, count as u32)?;
    let pairs = disc_eigenvalues(&spec)?;
    let mut lambda = Vec::new();
    let mut lambda_tilde = Vec::new();
    let mut integrals = Vec::new();
    for p in &pairs {
        if lambda.len() >= count {
            break;
        }
        let lt = unit_disc_quadratic_form(p.k, p.mu.value)?;
        let i = if p.k == 0 { unit_disc_mean(p.mu.value)?.abs() } else { T::zero() };
        for _ in 0..crate::disc::multiplicity(p.k) {
            if lambda.len() < count {
                lambda.push(p.lambda);
                lambda_tilde.push(lt);
                integrals.push(i);
            }
        }
    }
    Ok(RescaledSpectrum::build(a, lambda, lambda_tilde, integrals))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FirstModePoint<T> {
    pub a: T,
    pub lambda_tilde0: T,
    /// √(2π(β̂₀ − λ̃₀/|log a|))
    pub predicted: T,
    /// |∫_{Ω*} f̄₀|
    pub measured: T,
    pub rel_error: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FirstModeReport<T> {
    /// Geometric mean of λ₀/(a²|log a|) over the points used.
    pub beta0: T,
    pub points: Vec<FirstModePoint<T>>,
    pub tolerance: T,
    pub pass: bool,
}

/// Radii above this are excluded from the first-mode consistency check.
pub const FIRST_MODE_MAX_A: f64 = 4.539_992_976_248_485e-5; // e^{-10}

/// Predicts the first-mode integral on the unit disc from a single fitted
/// β₀ and the measured λ̃₀, and compares with its measured value.
pub fn first_mode_check<T: Real>(a_values: &[T], tolerance: T) -> Result<FirstModeReport<T>> {
    let cap = T::lit(FIRST_MODE_MAX_A) * (T::one() + T::epsilon());
    let data: Vec<RescaledSpectrum<T>> = a_values
        .iter()
        .filter(|&&a| a <= cap)
        .map(|&a| rescaled_identity_disc(a, 1))
        .collect::<Result<_>>()?;
    if data.is_empty() {
        return Err(Error::Precondition("no radius at or below e^-10 in the sweep".into()));
    }
    let beta0 = (data.iter().map(|r| r.beta_log[0].ln()).sum::<T>() / T::from_count(data.len())).exp();
    let two_pi = T::lit(2.0) * T::PI();
    let points: Vec<FirstModePoint<T>> = data
        .iter()
        .map(|r| {
            let lt = r.lambda_tilde[0];
            let arg = two_pi * (beta0 - lt / r.a.ln().abs());
            let predicted = arg.max(T::zero()).sqrt();
            let measured = r.integrals[0].abs();
            FirstModePoint { a: r.a, lambda_tilde0: lt, predicted, measured, rel_error: (predicted - measured).abs() / measured }
        })
        .collect();
    let pass = points.iter().all(|p| p.rel_error <= tolerance);
    Ok(FirstModeReport { beta0, points, tolerance, pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegralBoundMode<T> {
    pub a: T,
    pub n: usize,
    pub integral: T,
    /// ‖N_{Ω*}(1)‖ / |β_n − |log a| |Ω*| / 2π|
    pub bound: T,
    pub pass: bool,
}

/// Checks |∫_{Ω*} f̄_n| ≤ ‖N_{Ω*}(1)‖ / |β_n − |log a||Ω*|/2π| for n ≥ 1.
pub fn integral_bound_check<T: Real>(rs: &RescaledSpectrum<T>, n1_norm: T, unit_area: T) -> Vec<IntegralBoundMode<T>> {
    let shift = rs.a.ln().abs() * unit_area / (T::lit(2.0) * T::PI());
    (1..rs.lambda.len())
        .map(|n| {
            let bound = n1_norm / (rs.beta[n] - shift).abs();
            let integral = rs.integrals[n].abs();
            IntegralBoundMode { a: rs.a, n, integral, bound, pass: integral <= bound }
        })
        .collect()
}
