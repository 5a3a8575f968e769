use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_eigenvalues, ball_normalized_integral};
use crate::disc::{disc_eigenvalues, expand_multiplicity, DiscSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::fit::{fit_both, FitPair};
use super::sweep::{fit_points, run_sweep, Family, Quantity, SweepConfig, SweepPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallRadiusTolerances<T> {
    pub lambda0_p: T,
    pub lambda0_q: T,
    pub lambda_n_p: T,
    pub integral0_p: T,
    /// Relative slack of the disc sandwich.
    pub tau: T,
}

impl<T: Real> Default for SmallRadiusTolerances<T> {
    fn default() -> Self {
        SmallRadiusTolerances {
            lambda0_p: T::lit(0.1),
            lambda0_q: T::lit(0.3),
            lambda_n_p: T::lit(0.1),
            integral0_p: T::lit(0.1),
            tau: T::lit(0.02),
        }
    }
}

/// A fitted quantity against its expected exponents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentCheck<T> {
    pub quantity: Quantity,
    pub fit: FitPair<T>,
    pub expected_p: T,
    /// Present when the power-log model is the one judged.
    pub expected_q: Option<T>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichMode<T> {
    pub a: T,
    pub k: usize,
    /// λ_k of the inscribed disc D₁.
    pub inner: T,
    pub domain: T,
    /// λ_k of the circumscribed disc D₂.
    pub outer: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmallRadiusReport<T> {
    pub a_values: Vec<T>,
    pub tolerances: SmallRadiusTolerances<T>,
    /// λ₀ against a²|log a|.
    pub lambda0: ExponentCheck<T>,
    /// λ_n against a² for n ≥ 1.
    pub lambda_n: Vec<ExponentCheck<T>>,
    /// ∫e₀ against a.
    pub integral0: ExponentCheck<T>,
    /// max over the sweep and n ≥ 1 of |∫e_n| |log a| / a.
    pub k_bound: T,
    pub k_bound_pass: bool,
    /// Empirical sup of λ̃_n over the sweep.
    pub lambda_tilde_sup: T,
    /// λ_k(D₁) ≤ λ_k(Ω) ≤ λ_k(D₂); empty for the disc family.
    pub sandwich: Vec<SandwichMode<T>>,
    pub sandwich_pass: bool,
    pub all_pass: bool,
}

fn power_check<T: Real>(points: &[SweepPoint<T>], q: Quantity, p: T, tol: T) -> Result<ExponentCheck<T>> {
    let fit = fit_points(points, q)?;
    let pass = (fit.power.p - p).abs() <= tol;
    Ok(ExponentCheck { quantity: q, fit, expected_p: p, expected_q: None, pass })
}

/// The first `count` eigenvalues, with multiplicity, of the disc of radius r.
pub fn disc_spectrum_expanded<T: Real>(r: T, count: usize) -> Result<Vec<T>> {
    let n = count as u32;
    let pairs = disc_eigenvalues(&DiscSpec::new(r, n, n)?)?;
    let mut v = expand_multiplicity(&pairs);
    v.truncate(count);
    Ok(v)
}

fn sandwich<T: Real>(cfg: &SweepConfig<T>, points: &[SweepPoint<T>], tau: T) -> Result<Vec<SandwichMode<T>>> {
    let unit = match (&cfg.family, cfg.unit_domain()) {
        (Family::Shape { .. }, Some(u)) => u,
        _ => return Ok(Vec::new()),
    };
    let r1 = unit.inscribed_disc().radius;
    let r2 = unit.circumscribed_disc().radius;
    let per_a: Vec<Vec<SandwichMode<T>>> = points
        .par_iter()
        .map(|p| {
            let d1 = disc_spectrum_expanded(p.a * r1, p.lambda.len())?;
            let d2 = disc_spectrum_expanded(p.a * r2, p.lambda.len())?;
            Ok(p.lambda
                .iter()
                .zip(d1.iter().zip(&d2))
                .enumerate()
                .map(|(k, (&l, (&i, &o)))| SandwichMode {
                    a: p.a,
                    k,
                    inner: i,
                    domain: l,
                    outer: o,
                    pass: i <= l * (T::one() + tau) && l <= o * (T::one() + tau),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_a.into_iter().flatten().collect())
}

/// Sweeps a planar family and checks the small-radius behaviour of the
/// spectrum: λ₀ ∼ a²|log a|, λ_n ∼ a², ∫e₀ ∼ a and |∫e_n| ≤ K a/|log a|.
pub fn small_radius_report<T: Real>(cfg: &SweepConfig<T>, tol: &SmallRadiusTolerances<T>) -> Result<SmallRadiusReport<T>> {
    if cfg.family == Family::Ball {
        return Err(Error::Precondition("the planar report needs a disc or shape family".into()));
    }
    let points = run_sweep(cfg)?;
    let two = T::lit(2.0);
    let fit0 = fit_points(&points, Quantity::Lambda(0))?;
    let lambda0 = ExponentCheck {
        quantity: Quantity::Lambda(0),
        pass: (fit0.power_log.p - two).abs() <= tol.lambda0_p && (fit0.power_log.q - T::one()).abs() <= tol.lambda0_q,
        fit: fit0,
        expected_p: two,
        expected_q: Some(T::one()),
    };
    let lambda_n = (1..cfg.count)
        .map(|n| power_check(&points, Quantity::Lambda(n), two, tol.lambda_n_p))
        .collect::<Result<Vec<_>>>()?;
    let integral0 = power_check(&points, Quantity::EigfunIntegral(0), T::one(), tol.integral0_p)?;
    let mut k_bound = T::zero();
    let mut lambda_tilde_sup = T::zero();
    for p in &points {
        let scale = p.a.ln().abs() / p.a;
        for &i in p.integrals.iter().skip(1) {
            k_bound = k_bound.max(i.abs() * scale);
        }
        if let Some(rs) = &p.rescaled {
            lambda_tilde_sup = rs.lambda_tilde.iter().fold(lambda_tilde_sup, |m, &x| m.max(x));
        }
    }
    let k_bound_pass = k_bound.is_finite();
    let sandwich = sandwich(cfg, &points, tol.tau)?;
    let sandwich_pass = sandwich.iter().all(|m| m.pass);
    let all_pass = lambda0.pass && lambda_n.iter().all(|c| c.pass) && integral0.pass && k_bound_pass && sandwich_pass;
    Ok(SmallRadiusReport {
        a_values: cfg.a_values.clone(),
        tolerances: *tol,
        lambda0,
        lambda_n,
        integral0,
        k_bound,
        k_bound_pass,
        lambda_tilde_sup,
        sandwich,
        sandwich_pass,
        all_pass,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallBound<T> {
    pub a: T,
    pub l: u32,
    pub j: usize,
    pub integral: T,
    /// |D|^{1/2} λ₀ / λ_{l,j}
    pub bound: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallRatio<T> {
    pub l: u32,
    pub j: usize,
    /// Normalised integral / a^{3/2}, one per radius.
    pub ratios: Vec<T>,
    /// max/min − 1 of the ratios.
    pub spread: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallReport<T> {
    pub a_values: Vec<T>,
    /// Largest relative deviation of λ/a² from its value at the first radius.
    pub lambda_drift: T,
    pub lambda_pass: bool,
    pub bounds: Vec<BallBound<T>>,
    pub bound_pass: bool,
    pub ratios: Vec<BallRatio<T>>,
    pub ratio_pass: bool,
    /// Power fit of the degree-1, j = 1 integral when there are enough radii.
    pub integral_fit: Option<FitPair<T>>,
    pub all_pass: bool,
}

pub const BALL_DRIFT_TOL: f64 = 1e-12;
pub const BALL_RATIO_TOL: f64 = 0.05;

/// Ball checks over a list of radii (a = 1 allowed): λ/a² constant, the
/// bound |∫v| ≤ |D|^{1/2} λ₀/λ_n for every odd degree ≤ `degree_max` and
/// j ≤ `j_max`, and ∫v / a^{3/2} constant.
pub fn ball_report<T: Real>(a_values: &[T], degree_max: u32, j_max: usize) -> Result<BallReport<T>> {
    if a_values.is_empty() {
        return Err(Error::domain("a_values is empty"));
    }
    let spectra: Vec<_> = a_values.par_iter().map(|&a| ball_eigenvalues(a, degree_max, j_max)).collect::<Result<_>>()?;
    let reference: Vec<T> = spectra[0].iter().map(|p| p.lambda / (a_values[0] * a_values[0])).collect();
    let mut lambda_drift = T::zero();
    for (a, sp) in a_values.iter().zip(&spectra) {
        for (p, r) in sp.iter().zip(&reference) {
            lambda_drift = lambda_drift.max((p.lambda / (*a * *a) / *r - T::one()).abs());
        }
    }
    let odd: Vec<(u32, usize)> = (1..=degree_max).step_by(2).flat_map(|l| (1..=j_max).map(move |j| (l, j))).collect();
    let values: Vec<Vec<T>> = a_values
        .par_iter()
        .map(|&a| odd.iter().map(|&(l, j)| Ok(ball_normalized_integral(l, 0, j, a)?.value.abs())).collect::<Result<Vec<T>>>())
        .collect::<Result<_>>()?;
    let mut bounds = Vec::new();
    for ((&a, sp), vals) in a_values.iter().zip(&spectra).zip(&values) {
        let vol = T::lit(4.0) * T::PI() * a.powi(3) / T::lit(3.0);
        let top = sp[0].lambda;
        for (&(l, j), &integral) in odd.iter().zip(vals) {
            let ln = sp.iter().find(|p| p.l == l && p.j == j).expect("mode in spectrum").lambda;
            let bound = vol.sqrt() * top / ln;
            bounds.push(BallBound { a, l, j, integral, bound, pass: integral < bound });
        }
    }
    let ratios: Vec<BallRatio<T>> = odd
        .iter()
        .enumerate()
        .map(|(i, &(l, j))| {
            let ratios: Vec<T> = a_values.iter().zip(&values).map(|(&a, v)| v[i] / a.powf(T::lit(1.5))).collect();
            let hi = ratios.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
            let lo = ratios.iter().fold(T::infinity(), |m, &x| m.min(x));
            let spread = hi / lo - T::one();
            BallRatio { l, j, ratios, spread, pass: spread <= T::lit(BALL_RATIO_TOL) }
        })
        .collect();
    let integral_fit = if a_values.len() >= super::fit::MIN_FIT_POINTS && a_values.iter().all(|&a| a < T::one()) && degree_max >= 1 {
        let y: Vec<T> = values.iter().map(|v| v[0]).collect();
        Some(fit_both(a_values, &y)?)
    } else {
        None
    };
    let lambda_pass = lambda_drift <= T::tol(BALL_DRIFT_TOL);
    let bound_pass = bounds.iter().all(|b| b.pass);
    let ratio_pass = ratios.iter().all(|r| r.pass);
    Ok(BallReport {
        a_values: a_values.to_vec(),
        lambda_drift,
        lambda_pass,
        bounds,
        bound_pass,
        ratios,
        ratio_pass,
        integral_fit,
        all_pass: lambda_pass && bound_pass && ratio_pass,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscModeComparison<T> {
    pub k: u32,
    pub j: usize,
    pub inner: T,
    pub outer: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscMonotonicityReport<T> {
    pub r_inner: T,
    pub r_outer: T,
    pub modes: Vec<DiscModeComparison<T>>,
    pub all_pass: bool,
}

/// Compares λ_{k,j} of two concentric discs from the closed forms, with no
/// slack.
pub fn disc_monotonicity<T: Real>(r_inner: T, r_outer: T, k_max: u32, j_max: u32) -> Result<DiscMonotonicityReport<T>> {
    if !(r_inner <= r_outer) {
        return Err(Error::Precondition(format!("inner radius {r_inner} exceeds outer radius {r_outer}")));
    }
    let inner = disc_eigenvalues(&DiscSpec::new(r_inner, k_max, j_max)?)?;
    let outer = disc_eigenvalues(&DiscSpec::new(r_outer, k_max, j_max)?)?;
    let modes: Vec<DiscModeComparison<T>> = inner
        .iter()
        .map(|p| {
            let o = outer.iter().find(|q| q.k == p.k && q.j == p.j).expect("same index set").lambda;
            DiscModeComparison { k: p.k, j: p.j, inner: p.lambda, outer: o, pass: p.lambda <= o }
        })
        .collect();
    let all_pass = modes.iter().all(|m| m.pass);
    Ok(DiscMonotonicityReport { r_inner, r_outer, modes, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{default_a_values, Backend};

    #[test]
    fn disc_family_report_passes() {
        let cfg = SweepConfig { family: Family::Disc, a_values: default_a_values(), count: 6, backend: Backend::ClosedFormDisc, cells: 0 };
        let rep = small_radius_report::<f64>(&cfg, &SmallRadiusTolerances::default()).unwrap();
        assert!(rep.all_pass, "{rep:#?}");
        assert!(rep.sandwich.is_empty());
        assert!(rep.k_bound > 0.0 && rep.k_bound < 10.0);
        assert!(rep.lambda_tilde_sup > 0.0);
    }

    #[test]
    fn ball_report_passes() {
        let rep = ball_report(&[1.0_f64, 0.5, 0.2, 0.1, 0.02], 3, 2).unwrap();
        assert!(rep.all_pass, "{rep:#?}");
        assert!(rep.bounds.iter().any(|b| b.l == 1 && b.j == 1 && b.a == 1.0));
        assert!(rep.integral_fit.is_none());
        let rep = ball_report(&[0.5_f64, 0.2, 0.1, 0.02], 1, 1).unwrap();
        assert!((rep.integral_fit.unwrap().power.p - 1.5).abs() < 0.05);
    }

    #[test]
    fn concentric_discs() {
        let rep = disc_monotonicity(0.5_f64, 1.0, 4, 4).unwrap();
        assert!(rep.all_pass);
        for m in rep.modes.iter().filter(|m| m.k >= 1) {
            assert!((m.inner / m.outer - 0.25).abs() < 1e-14);
        }
        let same = disc_monotonicity(0.3_f64, 0.3, 2, 2).unwrap();
        assert!(same.all_pass);
        assert!(disc_monotonicity(0.8_f64, 0.3, 2, 2).is_err());
    }
}
