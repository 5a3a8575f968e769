use newtpot::ball::{ball_eigenvalues, ball_normalized_integral};
use newtpot::disc::{disc_eigenvalues, psi_a, DiscSpec};
use newtpot::galerkin::{assemble, build_mesh, eigfun_integral, monotonicity_check, spectrum, Domain2D, MonotonicityReport};
use newtpot::scaling::{ball_report, run_sweep, sweep_rows, small_radius_report, Family, SweepConfig, SweepPoint, SweepRow};
use serde::{Deserialize, Serialize};

use crate::args::{
    read_json, BallParams, Command, DiscParams, DomainParams, Format, MonotonicityParams, OutputArgs, PsiParams, ReportKind,
    RunConfig, SweepParams,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_bytes, num, render, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscRow {
    pub k: u32,
    pub j: usize,
    pub mu: f64,
    pub lambda: f64,
    pub int_normalized: f64,
}

impl Table for DiscRow {
    const HEADER: &'static [&'static str] = &["k", "j", "mu", "lambda", "int_normalized"];
    fn record(&self) -> Vec<String> {
        vec![self.k.to_string(), self.j.to_string(), num(self.mu), num(self.lambda), num(self.int_normalized)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    pub l: u32,
    pub j: usize,
    pub m: i32,
    pub mu: f64,
    pub lambda: f64,
    pub int_normalized: f64,
}

impl Table for BallRow {
    const HEADER: &'static [&'static str] = &["l", "j", "m", "mu", "lambda", "int_normalized"];
    fn record(&self) -> Vec<String> {
        vec![
            self.l.to_string(),
            self.j.to_string(),
            self.m.to_string(),
            num(self.mu),
            num(self.lambda),
            num(self.int_normalized),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub n: usize,
    pub lambda: f64,
    pub integral: f64,
    pub residual: f64,
}

impl Table for ModeRow {
    const HEADER: &'static [&'static str] = &["n", "lambda", "integral", "residual"];
    fn record(&self) -> Vec<String> {
        vec![self.n.to_string(), num(self.lambda), num(self.integral), num(self.residual)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpectrumOutput {
    pub domain: Domain2D<f64>,
    pub mesh_size: usize,
    pub modes: Vec<ModeRow>,
}

struct MonoRow<'a>(&'a newtpot::galerkin::ModeComparison<f64>);

impl Table for MonoRow<'_> {
    const HEADER: &'static [&'static str] = &["k", "inner", "outer", "pass"];
    fn record(&self) -> Vec<String> {
        vec![self.0.k.to_string(), num(self.0.inner), num(self.0.outer), self.0.pass.to_string()]
    }
}

impl Table for SweepRow<f64> {
    const HEADER: &'static [&'static str] = &["a", "n", "quantity", "value", "fit_residual"];
    fn record(&self) -> Vec<String> {
        vec![num(self.a), self.n.to_string(), self.quantity.clone(), num(self.value), self.fit_residual.map(num).unwrap_or_default()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub config: SweepConfig<f64>,
    pub points: Vec<SweepPoint<f64>>,
    pub rows: Vec<SweepRow<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiRow {
    pub x: f64,
    pub psi: f64,
}

impl Table for PsiRow {
    const HEADER: &'static [&'static str] = &["x", "psi"];
    fn record(&self) -> Vec<String> {
        vec![num(self.x), num(self.psi)]
    }
}

fn finite(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{name} must be finite, got {v}")))
    }
}

pub fn disc_rows(p: &DiscParams) -> CliResult<Vec<DiscRow>> {
    finite("a", p.a)?;
    let pairs = disc_eigenvalues(&DiscSpec::new(p.a, p.kmax, p.jmax)?)?;
    Ok(pairs
        .iter()
        .map(|e| DiscRow { k: e.k, j: e.j, mu: e.mu.value, lambda: e.lambda, int_normalized: e.int_normalized })
        .collect())
}

pub fn ball_rows(p: &BallParams) -> CliResult<Vec<BallRow>> {
    finite("a", p.a)?;
    if p.jmax == 0 {
        return Err(CliError::Invalid("jmax must be at least 1".into()));
    }
    let pairs = ball_eigenvalues(p.a, p.lmax, p.jmax as usize)?;
    pairs
        .iter()
        .map(|e| {
            let v = ball_normalized_integral(e.l, e.m, e.j, p.a)?.value;
            Ok(BallRow { l: e.l, j: e.j, m: e.m, mu: e.mu, lambda: e.lambda, int_normalized: v })
        })
        .collect()
}

pub fn domain_spectrum(p: &DomainParams) -> CliResult<DomainSpectrumOutput> {
    let domain = p.domain.load("domain")?;
    domain.validate()?;
    let mesh = build_mesh(&domain, p.cells)?;
    let op = assemble(&mesh)?;
    let mut res = spectrum(&op, p.modes, true)?;
    res.normalize_signs(&op);
    let modes = (0..res.eigenvalues.len())
        .map(|n| {
            Ok(ModeRow { n, lambda: res.eigenvalues[n], integral: eigfun_integral(&res, &op, n)?, residual: res.residuals[n] })
        })
        .collect::<CliResult<_>>()?;
    Ok(DomainSpectrumOutput { domain, mesh_size: res.mesh_size, modes })
}

pub fn monotonicity(p: &MonotonicityParams) -> CliResult<MonotonicityReport<f64>> {
    finite("tau", p.tau)?;
    if p.tau < 0.0 {
        return Err(CliError::Invalid(format!("tau must be nonnegative, got {}", p.tau)));
    }
    let inner = p.inner.load("inner domain")?;
    let outer = p.outer.load("outer domain")?;
    Ok(monotonicity_check(&inner, &outer, p.modes, p.cells, p.tau)?)
}

pub fn psi_rows(p: &PsiParams) -> CliResult<Vec<PsiRow>> {
    finite("a-log", p.a_log)?;
    finite("xmax", p.xmax)?;
    if p.points < 2 || p.xmax <= 0.0 {
        return Err(CliError::Invalid("need points >= 2 and xmax > 0".into()));
    }
    let a = p.a_log.exp();
    (0..p.points)
        .map(|i| {
            let x = p.xmax * i as f64 / (p.points - 1) as f64;
            Ok(PsiRow { x, psi: psi_a(a, x)? })
        })
        .collect()
}

fn sweep(p: &SweepParams, format: Format) -> CliResult<Vec<u8>> {
    let cfg = p.sweep.load("sweep config")?;
    match p.report {
        ReportKind::None => {
            let points = run_sweep(&cfg)?;
            let rows = sweep_rows(&points);
            render(format, &rows, &SweepOutput { config: cfg, points, rows: rows.clone() })
        }
        kind => {
            if format == Format::Csv {
                return Err(CliError::Invalid("reports are emitted as JSON only".into()));
            }
            if p.tolerances.is_some() && kind != ReportKind::SmallRadius {
                return Err(CliError::Invalid("tolerances apply to the small-radius report only".into()));
            }
            match kind {
                ReportKind::SmallRadius => {
                    let tol = match &p.tolerances {
                        Some(t) => t.load("tolerances")?,
                        None => Default::default(),
                    };
                    json_bytes(&small_radius_report(&cfg, &tol)?)
                }
                _ => {
                    if cfg.family != Family::Ball {
                        return Err(CliError::Invalid("the ball report needs the ball family".into()));
                    }
                    json_bytes(&ball_report(&cfg.a_values, 3, cfg.count)?)
                }
            }
        }
    }
}

/// Runs one command and writes its output.
pub fn execute(cmd: Command) -> CliResult<()> {
    let (bytes, output) = match cmd {
        Command::DiscSpectrum { params, output } => {
            let rows = disc_rows(&params)?;
            (render(output.format.unwrap_or(Format::Csv), &rows, &rows)?, output)
        }
        Command::BallSpectrum { params, output } => {
            let rows = ball_rows(&params)?;
            (render(output.format.unwrap_or(Format::Csv), &rows, &rows)?, output)
        }
        Command::DomainSpectrum { params, output } => {
            let res = domain_spectrum(&params)?;
            (render(output.format.unwrap_or(Format::Csv), &res.modes, &res)?, output)
        }
        Command::Monotonicity { params, output } => {
            let rep = monotonicity(&params)?;
            let rows: Vec<MonoRow> = rep.modes.iter().map(MonoRow).collect();
            (render(output.format.unwrap_or(Format::Json), &rows, &rep)?, output)
        }
        Command::Sweep { params, output } => {
            let default = if params.report == ReportKind::None { Format::Csv } else { Format::Json };
            (sweep(&params, output.format.unwrap_or(default))?, output)
        }
        Command::PsiSamples { params, output } => {
            let rows = psi_rows(&params)?;
            (render(output.format.unwrap_or(Format::Csv), &rows, &rows)?, output)
        }
        Command::Run { config } => {
            let cfg: RunConfig = read_json(&config, "run config")?;
            let base = config.parent().map(|p| p.to_path_buf()).unwrap_or_default();
            return execute(cfg.into_command(&base)?);
        }
    };
    let OutputArgs { out, .. } = output;
    emit(&bytes, out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Source;

    #[test]
    fn rows_round_trip() {
        let rows = disc_rows(&DiscParams { a: 0.3, kmax: 1, jmax: 2 }).unwrap();
        let back: Vec<DiscRow> = serde_json::from_slice(&json_bytes(&rows).unwrap()).unwrap();
        assert_eq!(rows, back);
        let balls = ball_rows(&BallParams { a: 0.3, lmax: 1, jmax: 1 }).unwrap();
        assert_eq!(balls.len(), 4);
        let back: Vec<BallRow> = serde_json::from_slice(&json_bytes(&balls).unwrap()).unwrap();
        assert_eq!(balls, back);
        let dom = domain_spectrum(&DomainParams {
            domain: Source::Inline(Domain2D::disc([0.0, 0.0], 0.2)),
            cells: 100,
            modes: 3,
        })
        .unwrap();
        let back: DomainSpectrumOutput = serde_json::from_slice(&json_bytes(&dom).unwrap()).unwrap();
        assert_eq!(dom, back);
        assert!(dom.modes[0].integral > 0.0);
    }

    #[test]
    fn csv_numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
