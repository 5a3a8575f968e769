use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use newtpot::galerkin::{Domain2D, DEFAULT_TAU};
use newtpot::scaling::{SweepConfig, SmallRadiusTolerances};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

const COLUMNS: &str = "\
CSV columns (fixed order):
  disc-spectrum     k,j,mu,lambda,int_normalized
  ball-spectrum     l,j,m,mu,lambda,int_normalized
  domain-spectrum   n,lambda,integral,residual
  monotonicity      k,inner,outer,pass
  sweep             a,n,quantity,value,fit_residual
  psi-samples       x,psi

Numbers are written with 17 significant digits. Set NEWTPOT_THREADS to cap
the number of worker threads. Exit status: 0 success, 2 invalid input,
1 computation failure.";

#[derive(Debug, Parser)]
#[command(name = "newtpot", version, about = "Spectra of the logarithmic and Newtonian potential operators", after_help = COLUMNS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form eigenpairs of the disc of radius a, one row per (k, j).
    DiscSpectrum {
        #[command(flatten)]
        params: DiscParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form eigenpairs of the ball of radius a, one row per (l, j, m).
    BallSpectrum {
        #[command(flatten)]
        params: BallParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Galerkin eigenvalues and eigenfunction integrals of a planar domain.
    DomainSpectrum {
        #[command(flatten)]
        params: DomainParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compares the spectra of an inner and an outer domain (JSON by default).
    Monotonicity {
        #[command(flatten)]
        params: MonotonicityParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Radius sweep with optional scaling report (report output is JSON).
    Sweep {
        #[command(flatten)]
        params: SweepParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Samples of Ψ_a(x) = J₀(x) + 2 log(a) x J₁(x) on [0, xmax].
    PsiSamples {
        #[command(flatten)]
        params: PsiParams,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs a command described by a JSON file:
    /// {"command": "<name>", "params": {...}, "out": "path", "format": "csv"|"json"}
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A value given inline as JSON or as a path to a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Inline(T),
    Path(PathBuf),
}

impl<T: DeserializeOwned> Source<T> {
    pub fn load(&self, what: &str) -> CliResult<T>
    where
        T: Clone,
    {
        match self {
            Source::Inline(v) => Ok(v.clone()),
            Source::Path(p) => read_json(p, what),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { what: format!("{what} ({})", path.display()), source })
}

fn parse_source<T: DeserializeOwned>(s: &str) -> Result<Source<T>, String> {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map(Source::Inline).map_err(|e| e.to_string())
    } else {
        Ok(Source::Path(PathBuf::from(s)))
    }
}

fn domain_source(s: &str) -> Result<Source<Domain2D<f64>>, String> {
    parse_source(s)
}

fn sweep_source(s: &str) -> Result<Source<SweepConfig<f64>>, String> {
    parse_source(s)
}

fn tolerance_source(s: &str) -> Result<Source<SmallRadiusTolerances<f64>>, String> {
    parse_source(s)
}

fn d_kmax() -> u32 {
    3
}
fn d_jmax() -> u32 {
    3
}
fn d_lmax() -> u32 {
    2
}
fn d_cells() -> usize {
    400
}
fn d_modes() -> usize {
    6
}
fn d_tau() -> f64 {
    DEFAULT_TAU
}
fn d_xmax() -> f64 {
    12.0
}
fn d_points() -> usize {
    1200
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscParams {
    /// Disc radius, 0 < a ≤ 1.
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = d_kmax())]
    #[serde(default = "d_kmax")]
    pub kmax: u32,
    #[arg(long, default_value_t = d_jmax())]
    #[serde(default = "d_jmax")]
    pub jmax: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallParams {
    /// Ball radius, a > 0.
    #[arg(long)]
    pub a: f64,
    /// Largest spherical-harmonic degree.
    #[arg(long, default_value_t = d_lmax())]
    #[serde(default = "d_lmax")]
    pub lmax: u32,
    #[arg(long, default_value_t = d_jmax())]
    #[serde(default = "d_jmax")]
    pub jmax: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainParams {
    /// Domain as inline JSON or a path to a JSON file.
    #[arg(long, value_parser = domain_source)]
    pub domain: Source<Domain2D<f64>>,
    /// Target number of mesh cells.
    #[arg(long, default_value_t = d_cells())]
    #[serde(default = "d_cells")]
    pub cells: usize,
    #[arg(long, default_value_t = d_modes())]
    #[serde(default = "d_modes")]
    pub modes: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonotonicityParams {
    #[arg(long, value_parser = domain_source)]
    pub inner: Source<Domain2D<f64>>,
    #[arg(long, value_parser = domain_source)]
    pub outer: Source<Domain2D<f64>>,
    #[arg(long, default_value_t = d_modes())]
    #[serde(default = "d_modes")]
    pub modes: usize,
    #[arg(long, default_value_t = d_cells())]
    #[serde(default = "d_cells")]
    pub cells: usize,
    /// Relative slack allowed for discretisation error.
    #[arg(long, default_value_t = d_tau())]
    #[serde(default = "d_tau")]
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    /// Per-radius rows only.
    #[default]
    None,
    /// Planar small-radius report (disc or shape families).
    SmallRadius,
    /// Ball report; degrees up to 3 and j up to the sweep's count.
    Ball,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    /// Sweep configuration as inline JSON or a path:
    /// {"family": {"kind": "disc"|"ball"|"shape", "domain": {...}}, "a_values": [...],
    ///  "count": n, "backend": "closed_form_disc"|"closed_form_ball"|"galerkin", "cells": n}
    #[arg(long, value_parser = sweep_source)]
    pub sweep: Source<SweepConfig<f64>>,
    #[arg(long, value_enum, default_value_t = ReportKind::None)]
    #[serde(default)]
    pub report: ReportKind,
    /// Tolerances for the small-radius report, inline JSON or a path.
    #[arg(long, value_parser = tolerance_source)]
    #[serde(default)]
    pub tolerances: Option<Source<SmallRadiusTolerances<f64>>>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiParams {
    /// log a (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub a_log: f64,
    #[arg(long, default_value_t = d_xmax())]
    #[serde(default = "d_xmax")]
    pub xmax: f64,
    #[arg(long, default_value_t = d_points())]
    #[serde(default = "d_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    DiscSpectrum,
    BallSpectrum,
    DomainSpectrum,
    Monotonicity,
    Sweep,
    PsiSamples,
}

/// Contents of a `run --config` file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl RunConfig {
    /// Resolves the file into the equivalent command line.
    pub fn into_command(self, base: &Path) -> CliResult<Command> {
        fn params<T: DeserializeOwned>(v: serde_json::Value, name: &str) -> CliResult<T> {
            let v = if v.is_null() { serde_json::Value::Object(Default::default()) } else { v };
            serde_json::from_value(v).map_err(|source| CliError::Parse { what: format!("params of {name}"), source })
        }
        let output = OutputArgs { out: self.out.map(|p| if p.is_relative() { base.join(p) } else { p }), format: self.format };
        let p = self.params;
        Ok(match self.command {
            CommandName::DiscSpectrum => Command::DiscSpectrum { params: params(p, "disc-spectrum")?, output },
            CommandName::BallSpectrum => Command::BallSpectrum { params: params(p, "ball-spectrum")?, output },
            CommandName::DomainSpectrum => {
                let mut params: DomainParams = params(p, "domain-spectrum")?;
                params.domain = rebase(params.domain, base);
                Command::DomainSpectrum { params, output }
            }
            CommandName::Monotonicity => {
                let mut params: MonotonicityParams = params(p, "monotonicity")?;
                params.inner = rebase(params.inner, base);
                params.outer = rebase(params.outer, base);
                Command::Monotonicity { params, output }
            }
            CommandName::Sweep => {
                let mut params: SweepParams = params(p, "sweep")?;
                params.sweep = rebase(params.sweep, base);
                params.tolerances = params.tolerances.map(|t| rebase(t, base));
                Command::Sweep { params, output }
            }
            CommandName::PsiSamples => Command::PsiSamples { params: params(p, "psi-samples")?, output },
        })
    }
}

/// Paths inside a config file are relative to the file's directory.
fn rebase<T>(s: Source<T>, base: &Path) -> Source<T> {
    match s {
        Source::Path(p) if p.is_relative() => Source::Path(base.join(p)),
        other => other,
    }
}
