use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_eigenvalues, ball_normalized_integral};
use crate::error::{Error, Result};
use crate::galerkin::{assemble, build_mesh, spectrum, Domain2D};
use crate::scalar::Real;

use super::fit::{fit_both, FitPair};
use super::rescale::{rescaled_identity_check, rescaled_identity_disc, RescaledSpectrum};

/// The family of domains swept over the radius parameter a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub enum Family<T> {
    /// Discs of radius a.
    Disc,
    /// Balls of radius a.
    Ball,
    /// a·Ω*, where Ω* is `domain` rescaled to unit maximum radius.
    Shape { domain: Domain2D<T> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ClosedFormDisc,
    ClosedFormBall,
    Galerkin,
}

/// Smallest radius accepted by the Galerkin backend (e^{-8}).
pub const GALERKIN_MIN_A: f64 = 3.354_626_279_025_118_4e-4;
pub const DEFAULT_CELLS: usize = 400;

/// e^{-3}, e^{-5}, e^{-8}, e^{-12}, e^{-20}
pub fn default_a_values<T: Real>() -> Vec<T> {
    [3.0, 5.0, 8.0, 12.0, 20.0].iter().map(|l: &f64| T::lit((-l).exp())).collect()
}

fn default_cells() -> usize {
    DEFAULT_CELLS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SweepConfig<T> {
    pub family: Family<T>,
    /// Strictly decreasing.
    pub a_values: Vec<T>,
    /// Modes per radius, counted with multiplicity.
    pub count: usize,
    pub backend: Backend,
    /// Target cell count for the Galerkin backend.
    #[serde(default = "default_cells")]
    pub cells: usize,
}

impl<T: Real> SweepConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.a_values.is_empty() {
            return Err(Error::domain("a_values is empty"));
        }
        if self.count == 0 {
            return Err(Error::domain("count must be at least 1"));
        }
        if let Some(a) = self.a_values.iter().find(|a| !(**a > T::zero()) || !a.is_finite()) {
            return Err(Error::domain(format!("radii must be positive and finite, got {a}")));
        }
        if self.a_values.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(Error::domain("a_values must be strictly decreasing"));
        }
        match (&self.family, self.backend) {
            (Family::Disc, Backend::ClosedFormDisc | Backend::Galerkin) | (Family::Shape { .. }, Backend::Galerkin) => {
                if self.a_values[0] >= T::one() {
                    return Err(Error::UnsupportedRegime(format!("planar sweeps need a < 1, got {}", self.a_values[0])));
                }
            }
            (Family::Ball, Backend::ClosedFormBall) => {}
            (f, b) => return Err(Error::domain(format!("backend {b:?} cannot evaluate family {f:?}"))),
        }
        if self.backend == Backend::Galerkin {
            let last = *self.a_values.last().expect("non-empty");
            if last < T::lit(GALERKIN_MIN_A) * (T::one() - T::lit(1e-12)) {
                return Err(Error::UnsupportedRegime(format!("Galerkin sweeps need a >= e^-8, got {last}")));
            }
            if let Family::Shape { domain } = &self.family {
                domain.validate()?;
            }
        }
        Ok(())
    }

    /// Ω* for planar families: the unit disc or the shape scaled to unit
    /// maximum radius.
    pub fn unit_domain(&self) -> Option<Domain2D<T>> {
        match &self.family {
            Family::Disc => Some(Domain2D::disc([T::zero(), T::zero()], T::one())),
            Family::Shape { domain } => Some(domain.scaled(T::one() / domain.max_radius())),
            Family::Ball => None,
        }
    }
}

/// Spectrum data at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub a: T,
    /// Decreasing, with multiplicity.
    pub lambda: Vec<T>,
    /// ∫ over the domain of each L²-normalised eigenfunction, sign-normalised.
    pub integrals: Vec<T>,
    /// Planar families only.
    pub rescaled: Option<RescaledSpectrum<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "quantity", content = "n", rename_all = "snake_case")]
pub enum Quantity {
    Lambda(usize),
    EigfunIntegral(usize),
}

/// Evaluates every radius of the sweep; points come back in the order of
/// `a_values`.
pub fn run_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<Vec<SweepPoint<T>>> {
    cfg.validate()?;
    match cfg.backend {
        Backend::ClosedFormDisc => cfg
            .a_values
            .par_iter()
            .map(|&a| {
                let rs = rescaled_identity_disc(a, cfg.count)?;
                Ok(SweepPoint { a, lambda: rs.lambda.clone(), integrals: rs.integrals.iter().map(|&i| a * i).collect(), rescaled: Some(rs) })
            })
            .collect(),
        Backend::ClosedFormBall => cfg.a_values.par_iter().map(|&a| ball_point(a, cfg.count)).collect(),
        Backend::Galerkin => {
            let unit_domain = cfg.unit_domain().expect("validated planar family");
            let mesh = build_mesh(&unit_domain, cfg.cells)?;
            let unit = assemble(&mesh)?;
            if cfg.count > mesh.len() {
                return Err(Error::Precondition(format!("count {} exceeds the {} mesh cells", cfg.count, mesh.len())));
            }
            cfg.a_values
                .par_iter()
                .map(|&a| {
                    let physical = assemble(&mesh.scaled(a))?;
                    let spec = spectrum(&physical, cfg.count, true)?;
                    let rs = rescaled_identity_check(&physical, &spec, &unit, a)?;
                    Ok(SweepPoint { a, lambda: rs.lambda.clone(), integrals: rs.integrals.iter().map(|&i| a * i).collect(), rescaled: Some(rs) })
                })
                .collect()
        }
    }
}

fn ball_point<T: Real>(a: T, count: usize) -> Result<SweepPoint<T>> {
    let l_max = (count as f64).sqrt().ceil() as u32 + 1;
    let pairs = ball_eigenvalues(a, l_max, count)?;
    let pairs = &pairs[..count.min(pairs.len())];
    let integrals = pairs
        .iter()
        .map(|p| Ok(ball_normalized_integral(p.l, p.m, p.j, a)?.value.abs()))
        .collect::<Result<Vec<T>>>()?;
    Ok(SweepPoint { a, lambda: pairs.iter().map(|p| p.lambda).collect(), integrals, rescaled: None })
}

/// The (a, y) series of one quantity across the sweep.
pub fn series<T: Real>(points: &[SweepPoint<T>], q: Quantity) -> Result<(Vec<T>, Vec<T>)> {
    let mut a = Vec::with_capacity(points.len());
    let mut y = Vec::with_capacity(points.len());
    for p in points {
        let (src, n) = match q {
            Quantity::Lambda(n) => (&p.lambda, n),
            Quantity::EigfunIntegral(n) => (&p.integrals, n),
        };
        let v = *src.get(n).ok_or_else(|| Error::Precondition(format!("mode {n} not computed at a = {}", p.a)))?;
        a.push(p.a);
        y.push(v);
    }
    Ok((a, y))
}

/// Both fits of one quantity over already computed sweep points.
pub fn fit_points<T: Real>(points: &[SweepPoint<T>], q: Quantity) -> Result<FitPair<T>> {
    let (a, y) = series(points, q)?;
    fit_both(&a, &y)
}

/// Runs the sweep and fits one quantity.
pub fn fit_scaling<T: Real>(cfg: &SweepConfig<T>, q: Quantity) -> Result<FitPair<T>> {
    fit_points(&run_sweep(cfg)?, q)
}

/// One output row: (a, n, quantity, value, fit residual).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub a: T,
    pub n: usize,
    pub quantity: String,
    pub value: T,
    /// Log-space RMS of the power-log fit of this (quantity, n) series,
    /// absent when the series cannot be fitted.
    pub fit_residual: Option<T>,
}

/// Flattens sweep points into rows sorted by decreasing a, then n, then
/// quantity name.
pub fn sweep_rows<T: Real>(points: &[SweepPoint<T>]) -> Vec<SweepRow<T>> {
    let count = points.iter().map(|p| p.lambda.len()).min().unwrap_or(0);
    let resid = |q: Quantity| fit_points(points, q).ok().map(|f| f.power_log.residual_rms);
    let mut fits = Vec::with_capacity(count);
    for n in 0..count {
        fits.push((resid(Quantity::Lambda(n)), resid(Quantity::EigfunIntegral(n))));
    }
    let mut order: Vec<&SweepPoint<T>> = points.iter().collect();
    order.sort_by(|x, y| y.a.partial_cmp(&x.a).expect("finite radii"));
    let mut rows = Vec::new();
    for p in order {
        for n in 0..count {
            rows.push(SweepRow { a: p.a, n, quantity: "integral".into(), value: p.integrals[n], fit_residual: fits[n].1 });
            rows.push(SweepRow { a: p.a, n, quantity: "lambda".into(), value: p.lambda[n], fit_residual: fits[n].0 });
            if let Some(rs) = &p.rescaled {
                rows.push(SweepRow { a: p.a, n, quantity: "lambda_tilde".into(), value: rs.lambda_tilde[n], fit_residual: None });
            }
        }
    }
    rows
}
