use std::path::Path;

use anyhow::{Context, Result};
use opineq::chains::{
    furuta_chain, furuta_power_chain, hh_chain, kantorovich_integral_chain, operator_chain,
    power_chain,
};
use opineq::funcat::{beta_constant, kantorovich_c, kantorovich_k, ratio_alpha};
use opineq::posmap::verify_map;
use opineq::sweep::{run_sweep, SweepConfig, SweepKind};
use opineq::{
    AlphaChoice, ChainParams, FunctionDescriptor, Interval, MapDescriptor, PowerMode,
    PowerTransform, SymMatrix,
};
use serde::Serialize;

use crate::output::{render_chain, render_constants, render_map_check, render_sweep};
use crate::spec::{Command, Mode, RunSpec};

/// A rendered report and whether everything it checked held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
    /// First failure, for standard error.
    pub failure: Option<String>,
}

/// Missing or conflicting flags; reported like a parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn need<T: Clone>(v: &Option<T>, flag: &str, cmd: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| usage(format!("{cmd} needs --{flag}")))
}

fn is_inline_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{' | '['))
}

/// Inline text, or the contents of the file it names.
fn inline_or_file(src: &str) -> Result<String> {
    if is_inline_json(src) || !Path::new(src).is_file() {
        return Ok(src.to_string());
    }
    std::fs::read_to_string(src).with_context(|| format!("reading {src}"))
}

/// Parses `{"n": N, "entries": [[..], ..]}` or a bare array of rows. The
/// input must be symmetric.
pub fn parse_matrix(text: &str) -> Result<SymMatrix> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let v = match v {
        serde_json::Value::Array(rows) => serde_json::json!({ "n": rows.len(), "entries": rows }),
        other => other,
    };
    Ok(SymMatrix::from_json(&v.to_string())?)
}

fn load_matrix(src: &Option<String>, flag: &str, cmd: &str) -> Result<SymMatrix> {
    let src = need(src, flag, cmd)?;
    if !is_inline_json(&src) && !Path::new(&src).is_file() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no such matrix file: {src}"),
        )
        .into());
    }
    parse_matrix(&inline_or_file(&src)?).with_context(|| format!("parsing --{flag}"))
}

fn load_map(src: &Option<String>) -> Result<MapDescriptor> {
    match src {
        None => Ok(MapDescriptor::NormalizedTrace),
        Some(s) => Ok(inline_or_file(s)?
            .parse::<MapDescriptor>()
            .context("parsing --map")?),
    }
}

fn transform(spec: &RunSpec, default: f64) -> Result<PowerTransform> {
    Ok(PowerTransform::new(spec.t.unwrap_or(default))?)
}

fn power_mode(mode: Option<Mode>, cmd: &str) -> Result<PowerMode> {
    match mode {
        None | Some(Mode::K) => Ok(PowerMode::RatioK),
        Some(Mode::C) => Ok(PowerMode::DifferenceC),
        Some(m) => Err(usage(format!("{cmd} takes --mode k or c, not {m:?}"))),
    }
}

pub fn run(spec: &RunSpec) -> Result<Outcome> {
    let command = spec.command.ok_or_else(|| usage("no command given"))?;
    let name = format!("{command:?}").to_lowercase();
    let name = name.as_str();
    let quad = spec.quad.unwrap_or_default();
    match command {
        Command::Hh => {
            let f = need(&spec.f, "f", name)?;
            let j = need(&spec.interval, "interval", name)?;
            let report = hh_chain(&f, transform(spec, 1.0)?, j, &quad)?;
            Ok(render_chain(&report, spec.format))
        }
        Command::Operator => {
            let a = load_matrix(&spec.matrix, "matrix", name)?;
            let f = need(&spec.f, "f", name)?;
            let alpha = match (spec.mode, spec.alpha) {
                (Some(_), Some(_)) => return Err(usage("use either --mode or --alpha, not both")),
                (_, Some(alpha)) => AlphaChoice::Given(alpha),
                (None | Some(Mode::Unit), None) => AlphaChoice::Unit,
                (Some(Mode::Ratio), None) => AlphaChoice::Ratio,
                (Some(m), None) => {
                    return Err(usage(format!(
                        "operator takes --mode unit or ratio, not {m:?}"
                    )))
                }
            };
            let mut params = ChainParams::new(transform(spec, 1.0)?, alpha);
            params.interval = spec.interval;
            let report = operator_chain(&f, &a, &load_map(&spec.map)?, &params)?;
            Ok(render_chain(&report, spec.format))
        }
        Command::Power => {
            let a = load_matrix(&spec.matrix, "matrix", name)?;
            let r = need(&spec.r, "r", name)?;
            let t = need(&spec.t, "t", name)?;
            let report = power_chain(
                r,
                PowerTransform::new(t)?,
                &a,
                &load_map(&spec.map)?,
                spec.interval,
                power_mode(spec.mode, name)?,
            )?;
            Ok(render_chain(&report, spec.format))
        }
        Command::Kantorovich => {
            let a = load_matrix(&spec.matrix, "matrix", name)?;
            let report =
                kantorovich_integral_chain(&a, &load_map(&spec.map)?, spec.interval, &quad)?;
            Ok(render_chain(&report, spec.format))
        }
        Command::Furuta => {
            let a = load_matrix(&spec.matrix, "matrix", name)?;
            let b = load_matrix(&spec.matrix_b, "matrix-b", name)?;
            let report = match (spec.r, spec.f) {
                (Some(r), None) => {
                    let t = need(&spec.t, "t", name)?;
                    furuta_power_chain(
                        r,
                        PowerTransform::new(t)?,
                        &a,
                        &b,
                        spec.interval,
                        power_mode(spec.mode, name)?,
                    )?
                }
                (None, Some(f)) => furuta_chain(
                    &f,
                    transform(spec, 1.0)?,
                    &a,
                    &b,
                    spec.interval,
                    spec.alpha.unwrap_or(1.0),
                )?,
                _ => return Err(usage("furuta needs exactly one of --r or --f")),
            };
            Ok(render_chain(&report, spec.format))
        }
        Command::Constants => {
            let j = need(&spec.interval, "interval", name)?;
            let constants = ConstantsReport::compute(j, spec.r, spec.f)?;
            Ok(render_constants(&constants, spec.format))
        }
        Command::Sweep => {
            let kind = spec.kind.unwrap_or(SweepKind::Operator);
            let mut cfg = SweepConfig::new(kind, spec.trials.unwrap_or(100), spec.seed);
            if let Some(d) = spec.dims {
                cfg.dims = (d.0, d.1);
            }
            cfg.quad = quad;
            if cfg.trials == 0 {
                return Err(usage("sweep needs --trials >= 1"));
            }
            Ok(render_sweep(&run_sweep(&cfg)?, spec.format))
        }
        Command::VerifyMap => {
            let phi = load_map(&spec.map)?;
            let trials = spec.trials.unwrap_or(100);
            let check = MapCheck {
                map: phi.name(),
                input_dim: phi.input_dim(),
                trials,
                seed: spec.seed,
                valid: verify_map(&phi, trials, spec.seed),
            };
            Ok(render_map_check(&check, spec.format))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub interval: Interval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Chord-to-function ratio of `f`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Chord gap of `f` at `alpha = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl ConstantsReport {
    fn compute(j: Interval, r: Option<f64>, f: Option<FunctionDescriptor>) -> Result<Self> {
        if r.is_none() && f.is_none() {
            return Err(usage("constants needs --r, --f, or both"));
        }
        let (k, c) = match r {
            Some(r) => (Some(kantorovich_k(j, r)?), Some(kantorovich_c(j, r)?)),
            None => (None, None),
        };
        let (alpha, beta) = match f {
            Some(f) => (Some(ratio_alpha(&f, j)?), Some(beta_constant(&f, j, 1.0)?)),
            None => (None, None),
        };
        Ok(ConstantsReport {
            interval: j,
            r,
            k,
            c,
            f: f.map(|f| f.to_string()),
            alpha,
            beta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapCheck {
    pub map: &'static str,
    pub input_dim: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub valid: bool,
}

/// Exit status for an error: 2 for malformed input, 3 for inputs that
/// parse but violate a precondition or defeat the numerics.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<opineq::Error>() {
            return if matches!(e, opineq::Error::Parse(_)) {
                2
            } else {
                3
            };
        }
        if cause.is::<UsageError>()
            || cause.is::<std::io::Error>()
            || cause.is::<serde_json::Error>()
        {
            return 2;
        }
    }
    2
}
