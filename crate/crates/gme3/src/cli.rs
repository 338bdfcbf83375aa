//! Batch front end: compute measures for single states, sweep family
//! parameter grids, and cross-validate the independent methods.
//!
//! Everything here is deterministic: the oracle PRNG is seeded (flag
//! `--seed`), sweep rows keep input order even though they are computed
//! in parallel, and floats render in shortest round-trip form, so
//! identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 2 malformed input (bad files, bad ranges, bad
//! flags), 3 invalid state (non-normalizable, outside a family when the
//! policy demands one), 4 validation failure in `check`.
//!
//! JSON formats are published as JSON Schema files in `schemas/` at the
//! crate root: `state.schema.json` for input state files,
//! `measure_result.schema.json`, `sweep.schema.json` and
//! `check_report.schema.json` for the three subcommand outputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::families::{SymmetricParams, WTypeParams};
use crate::nearest::{measure, MeasureOptions, MeasureResult, Policy};
use crate::oracle::OracleConfig;
use crate::state::{PureState3, StateFile};
use crate::{tol, Error, Result};

/// Command-line interface of the `gme3` binary.
#[derive(Debug, Parser)]
#[command(
    name = "gme3",
    version,
    about = "Geometric measure of entanglement for three-qubit pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,

    /// Method selection: closed forms, stationarity solver, brute-force
    /// oracle, or automatic dispatch.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Auto)]
    pub policy: PolicyArg,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for the oracle's random restarts.
    #[arg(long, global = true, default_value_t = 0x5EED)]
    pub seed: u64,

    /// Azimuth samples reported for degenerate nearest-state families.
    #[arg(long, global = true, default_value_t = 12)]
    pub samples: usize,

    /// Reject inputs whose norm is not already 1 (within 1e-12) instead
    /// of normalizing them.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure one state: a named state (W, GHZ, Wtilde), a family
    /// literal like "wtype(0.5,0.5,0.7071)", or a path to a state JSON
    /// file {"amps": [[re,im] x 8]}.
    Compute { input: String },
    /// Measure a grid of family members; ranges are "value" or
    /// "start:stop:steps" with steps >= 2.
    Sweep {
        #[command(subcommand)]
        family: SweepFamily,
    },
    /// Run every applicable method on one state and compare them.
    Check { input: String },
}

#[derive(Debug, Subcommand)]
pub enum SweepFamily {
    /// W-type states a|100> + b|010> + c|001> (a, b, c >= 0).
    Wtype {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
    },
    /// Symmetric states a|000> + b|111> + c|001> + d|110>.
    Symmetric {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
    },
    /// Superpositions cos(theta)|W> + sin(theta)|Wtilde>, theta in
    /// [0, pi/2].
    Ww {
        #[arg(long)]
        theta: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Auto,
    Analytic,
    Stationary,
    Oracle,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Auto => Policy::Auto,
            PolicyArg::Analytic => Policy::AnalyticOnly,
            PolicyArg::Stationary => Policy::Stationary,
            PolicyArg::Oracle => Policy::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Maps an error to the exit-code contract: 2 for malformed input, 3
/// for state-level problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::Json(_) => 2,
        _ => 3,
    }
}

/// Executes a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let opts = MeasureOptions {
        policy: cli.policy.into(),
        samples: cli.samples,
        oracle: OracleConfig {
            seed: cli.seed,
            ..OracleConfig::default()
        },
    };
    match cli.cmd {
        Command::Compute { input } => {
            let state = parse_input(&input, cli.strict)?;
            let result = measure(&state, &opts)?;
            emit(&render_measure(&result, cli.format), cli.out.as_deref())?;
            Ok(0)
        }
        Command::Sweep { family } => {
            let spec = SweepSpec::from_args(&family, cli.policy.into())?;
            let rows = run_sweep(&spec, &opts)?;
            emit(&render_sweep(&rows, cli.format), cli.out.as_deref())?;
            Ok(0)
        }
        Command::Check { input } => {
            let state = parse_input(&input, cli.strict)?;
            let report = run_check(&input, &state, &opts)?;
            emit(&render_check(&report, cli.format), cli.out.as_deref())?;
            Ok(if report.pass { 0 } else { 4 })
        }
    }
}

/// Resolves a compute/check input: named state, family literal, or
/// state-file path, in that order.
pub fn parse_input(input: &str, strict: bool) -> Result<PureState3> {
    let trimmed = input.trim();
    match trimmed.to_ascii_lowercase().as_str() {
        "w" => return Ok(PureState3::w()),
        "ghz" => return Ok(PureState3::ghz()),
        "wtilde" | "w_tilde" | "w-tilde" => return Ok(PureState3::w_tilde()),
        _ => {}
    }
    if let Some(state) = parse_family_literal(trimmed, strict)? {
        return Ok(state);
    }
    load_state_file(Path::new(trimmed), strict)
}

fn parse_family_literal(text: &str, strict: bool) -> Result<Option<PureState3>> {
    let Some(open) = text.find('(') else {
        return Ok(None);
    };
    if !text.ends_with(')') {
        return Ok(None);
    }
    let name = text[..open].trim().to_ascii_lowercase();
    let args: Vec<f64> = text[open + 1..text.len() - 1]
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("cannot parse '{}' as a number", s.trim())))
        })
        .collect::<Result<_>>()?;
    let expect_args = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "family '{name}' takes {n} parameters, got {}",
                args.len()
            )))
        }
    };
    let check_norm = |sq: f64| -> Result<()> {
        let dev = (sq.sqrt() - 1.0).abs();
        if strict && dev > tol::STATE_NORM {
            Err(Error::NotNormalized(dev))
        } else {
            Ok(())
        }
    };
    match name.as_str() {
        "wtype" => {
            expect_args(3)?;
            check_norm(args.iter().map(|x| x * x).sum())?;
            Ok(Some(WTypeParams::new(args[0], args[1], args[2])?.state()))
        }
        "symmetric" => {
            expect_args(4)?;
            check_norm(args.iter().map(|x| x * x).sum())?;
            Ok(Some(
                SymmetricParams::new(args[0], args[1], args[2], args[3])?.state(),
            ))
        }
        "ww" => {
            expect_args(1)?;
            Ok(Some(PureState3::ww(args[0])?))
        }
        _ => Err(Error::Parse(format!("unknown family '{name}'"))),
    }
}

fn load_state_file(path: &Path, strict: bool) -> Result<PureState3> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    let amps = file.raw_amps()?;
    if strict {
        PureState3::new(amps)
    } else {
        PureState3::normalized(amps)
    }
}

/// A validated sweep request: the family, one sampled axis per
/// parameter, and the method policy.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: SweepGrid,
    pub policy: Policy,
}

/// Per-family parameter axes.
#[derive(Debug, Clone)]
pub enum SweepGrid {
    Wtype { a: Vec<f64>, b: Vec<f64>, c: Vec<f64> },
    Symmetric { a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, d: Vec<f64> },
    Ww { theta: Vec<f64> },
}

/// One family member of a sweep, before normalization.
#[derive(Debug, Clone)]
pub enum SweepPoint {
    Wtype(f64, f64, f64),
    Symmetric(f64, f64, f64, f64),
    Ww(f64),
}

/// One computed sweep row. Parameters are reported as actually
/// measured, i.e. after normalization.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub lambda_sq: f64,
    pub e_g: f64,
    pub method: String,
    pub degenerate: bool,
}

impl SweepSpec {
    pub fn from_args(family: &SweepFamily, policy: Policy) -> Result<Self> {
        let grid = match family {
            SweepFamily::Wtype { a, b, c } => {
                let axes = [parse_axis(a)?, parse_axis(b)?, parse_axis(c)?];
                for axis in &axes {
                    if axis.iter().any(|&v| v < 0.0) {
                        return Err(Error::Parse(
                            "wtype coefficients must be non-negative".into(),
                        ));
                    }
                }
                let [a, b, c] = axes;
                SweepGrid::Wtype { a, b, c }
            }
            SweepFamily::Symmetric { a, b, c, d } => SweepGrid::Symmetric {
                a: parse_axis(a)?,
                b: parse_axis(b)?,
                c: parse_axis(c)?,
                d: parse_axis(d)?,
            },
            SweepFamily::Ww { theta } => {
                let theta = parse_axis(theta)?;
                if theta
                    .iter()
                    .any(|&v| !(0.0..=std::f64::consts::FRAC_PI_2).contains(&v))
                {
                    return Err(Error::Parse("theta values must lie in [0, pi/2]".into()));
                }
                SweepGrid::Ww { theta }
            }
        };
        Ok(Self { family: grid, policy })
    }

    /// All sample points in row-major order (last axis fastest).
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        match &self.family {
            SweepGrid::Wtype { a, b, c } => {
                for &x in a {
                    for &y in b {
                        for &z in c {
                            out.push(SweepPoint::Wtype(x, y, z));
                        }
                    }
                }
            }
            SweepGrid::Symmetric { a, b, c, d } => {
                for &x in a {
                    for &y in b {
                        for &z in c {
                            for &w in d {
                                out.push(SweepPoint::Symmetric(x, y, z, w));
                            }
                        }
                    }
                }
            }
            SweepGrid::Ww { theta } => {
                for &t in theta {
                    out.push(SweepPoint::Ww(t));
                }
            }
        }
        out
    }
}

/// Parses "v" or "start:stop:steps" into a sampled axis.
fn parse_axis(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("cannot parse '{}' as a number", s.trim())))
    };
    match parts.len() {
        1 => Ok(vec![num(parts[0])?]),
        3 => {
            let start = num(parts[0])?;
            let stop = num(parts[1])?;
            let steps: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad step count '{}'", parts[2].trim())))?;
            if steps < 2 {
                return Err(Error::Parse("ranges need steps >= 2".into()));
            }
            Ok((0..steps)
                .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
                .collect())
        }
        _ => Err(Error::Parse(format!(
            "range '{text}' must be 'value' or 'start:stop:steps'"
        ))),
    }
}

/// Measures every grid point; rows are computed in parallel but
/// returned in grid order.
pub fn run_sweep(spec: &SweepSpec, opts: &MeasureOptions) -> Result<Vec<SweepRow>> {
    let opts = MeasureOptions {
        policy: spec.policy,
        ..opts.clone()
    };
    spec.points()
        .par_iter()
        .map(|pt| sweep_row(pt, &opts))
        .collect()
}

fn sweep_row(point: &SweepPoint, opts: &MeasureOptions) -> Result<SweepRow> {
    let (family, names, values, state) = match point {
        SweepPoint::Wtype(a, b, c) => {
            let p = WTypeParams::new(*a, *b, *c)?;
            (
                "wtype",
                vec!["a", "b", "c"],
                vec![p.a(), p.b(), p.c()],
                p.state(),
            )
        }
        SweepPoint::Symmetric(a, b, c, d) => {
            let p = SymmetricParams::new(*a, *b, *c, *d)?;
            (
                "symmetric",
                vec!["a", "b", "c", "d"],
                vec![p.a(), p.b(), p.c(), p.d()],
                p.state(),
            )
        }
        SweepPoint::Ww(theta) => ("ww", vec!["theta"], vec![*theta], PureState3::ww(*theta)?),
    };
    let result = measure(&state, opts)?;
    let params = names
        .into_iter()
        .map(str::to_string)
        .zip(values)
        .collect();
    Ok(SweepRow {
        family: family.to_string(),
        params,
        lambda_sq: result.lambda_sq,
        e_g: result.e_g,
        method: result.method.as_str().to_string(),
        degenerate: result.degenerate,
    })
}

/// Cross-validation outcome for one state.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub input: String,
    /// Closed-form value, absent for states outside the solvable
    /// families.
    pub analytic: Option<f64>,
    pub stationary: f64,
    pub oracle: f64,
    pub max_delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Runs every applicable method and compares the values pairwise at the
/// standard agreement tolerance.
pub fn run_check(input: &str, state: &PureState3, opts: &MeasureOptions) -> Result<CheckReport> {
    let with_policy = |policy: Policy| MeasureOptions {
        policy,
        ..opts.clone()
    };
    let analytic = match measure(state, &with_policy(Policy::AnalyticOnly)) {
        Ok(r) => Some(r.lambda_sq),
        Err(Error::NotFamily) => None,
        Err(e) => return Err(e),
    };
    let stationary = measure(state, &with_policy(Policy::Stationary))?.lambda_sq;
    let oracle = measure(state, &with_policy(Policy::Oracle))?.lambda_sq;
    let mut values = vec![stationary, oracle];
    values.extend(analytic);
    let mut max_delta: f64 = 0.0;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            max_delta = max_delta.max((values[i] - values[j]).abs());
        }
    }
    Ok(CheckReport {
        input: input.to_string(),
        analytic,
        stationary,
        oracle,
        max_delta,
        tolerance: tol::METHOD_AGREEMENT,
        pass: max_delta <= tol::METHOD_AGREEMENT,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Renders a measurement; JSON carries full precision, the table is a
/// human-readable digest.
pub fn render_measure(result: &MeasureResult, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("lambda_sq,e_g,method,degenerate\n");
            let _ = writeln!(
                s,
                "{},{},{},{}",
                result.lambda_sq,
                result.e_g,
                result.method.as_str(),
                result.degenerate
            );
            s
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "lambda_sq   {}", result.lambda_sq);
            let _ = writeln!(s, "e_g         {}", result.e_g);
            let _ = writeln!(s, "method      {}", result.method.as_str());
            let _ = writeln!(s, "degenerate  {}", result.degenerate);
            if let Some(fam) = &result.family_param {
                let _ = writeln!(
                    s,
                    "family      axis ({:.6}, {:.6}, {:.6}), azimuth in [{:.6}, {:.6})",
                    fam.axis[0], fam.axis[1], fam.axis[2], fam.azimuth_min, fam.azimuth_max
                );
            }
            if let Some(w) = &result.warning {
                let _ = writeln!(s, "warning     {w}");
            }
            let _ = writeln!(s, "nearest     {} product state(s)", result.nearest.len());
            for (k, prod) in result.nearest.iter().enumerate() {
                let b1 = prod.q1.bloch();
                let b2 = prod.q2.bloch();
                let b3 = prod.q3.bloch();
                let _ = writeln!(
                    s,
                    "  [{k:2}] s1 ({:+.6}, {:+.6}, {:+.6})  s2 ({:+.6}, {:+.6}, {:+.6})  s3 ({:+.6}, {:+.6}, {:+.6})",
                    b1[0], b1[1], b1[2], b2[0], b2[1], b2[2], b3[0], b3[1], b3[2]
                );
            }
            s
        }
    }
}

/// Renders sweep rows; CSV uses '.' decimals, ',' separators and a
/// mandatory header.
pub fn render_sweep(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            if let Some(first) = rows.first() {
                let cols: Vec<&str> = first.params.keys().map(String::as_str).collect();
                s.push_str("family,");
                s.push_str(&cols.join(","));
                s.push_str(",lambda_sq,e_g,method,degenerate\n");
                for row in rows {
                    s.push_str(&row.family);
                    for name in &cols {
                        let _ = write!(s, ",{}", row.params[*name]);
                    }
                    let _ = writeln!(
                        s,
                        ",{},{},{},{}",
                        row.lambda_sq, row.e_g, row.method, row.degenerate
                    );
                }
            } else {
                s.push_str("family,lambda_sq,e_g,method,degenerate\n");
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for row in rows {
                let params: Vec<String> = row
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v:.6}"))
                    .collect();
                let _ = writeln!(
                    s,
                    "{:9} {}  lambda_sq={:.12}  e_g={:.12}  method={}  degenerate={}",
                    row.family,
                    params.join(" "),
                    row.lambda_sq,
                    row.e_g,
                    row.method,
                    row.degenerate
                );
            }
            s
        }
    }
}

pub fn render_check(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("input,analytic,stationary,oracle,max_delta,pass\n");
            let analytic = report
                .analytic
                .map(|v| v.to_string())
                .unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                report.input, analytic, report.stationary, report.oracle, report.max_delta,
                report.pass
            );
            s
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "input       {}", report.input);
            match report.analytic {
                Some(v) => {
                    let _ = writeln!(s, "analytic    {v}");
                }
                None => {
                    let _ = writeln!(s, "analytic    (not a solvable family)");
                }
            }
            let _ = writeln!(s, "stationary  {}", report.stationary);
            let _ = writeln!(s, "oracle      {}", report.oracle);
            let _ = writeln!(s, "max_delta   {}", report.max_delta);
            let _ = writeln!(
                s,
                "result      {} (tolerance {})",
                if report.pass { "PASS" } else { "FAIL" },
                report.tolerance
            );
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states_parse() {
        for name in ["W", "w", "GHZ", "ghz", "Wtilde", "w-tilde"] {
            assert!(parse_input(name, false).is_ok(), "{name}");
        }
    }

    fn amp_distance(a: &PureState3, b: &PureState3) -> f64 {
        a.amps()
            .iter()
            .zip(b.amps())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn family_literals_parse_and_normalize() {
        let state = parse_input("wtype(1, 1, 1)", false).unwrap();
        assert!(amp_distance(&state, &PureState3::w()) < 1e-15);

        let ghzish = parse_input("symmetric(2,2,0,0)", false).unwrap();
        assert!(amp_distance(&ghzish, &PureState3::ghz()) < 1e-15);

        assert!(parse_input("ww(0.3)", false).is_ok());
        assert!(parse_input("ww(9.0)", false).is_err());
        assert!(parse_input("wtype(1,1)", false).is_err());
        assert!(parse_input("unknown(1,2)", false).is_err());
        assert!(parse_input("wtype(a,b,c)", false).is_err());
    }

    #[test]
    fn strict_mode_rejects_unnormalized_literals() {
        assert!(parse_input("wtype(1,1,1)", true).is_err());
        let s = 3f64.sqrt().recip();
        let text = format!("wtype({s},{s},{s})");
        assert!(parse_input(&text, true).is_ok());
    }

    #[test]
    fn axis_grammar() {
        assert_eq!(parse_axis("0.5").unwrap(), vec![0.5]);
        let axis = parse_axis("0:1:5").unwrap();
        assert_eq!(axis, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_axis("0:1:1").is_err());
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("x:1:4").is_err());
    }

    #[test]
    fn sweep_points_are_row_major() {
        let spec = SweepSpec {
            family: SweepGrid::Wtype {
                a: vec![0.1, 0.2],
                b: vec![0.3, 0.4],
                c: vec![0.5],
            },
            policy: Policy::Auto,
        };
        let pts = spec.points();
        assert_eq!(pts.len(), 4);
        match (&pts[0], &pts[1], &pts[3]) {
            (
                SweepPoint::Wtype(a0, b0, _),
                SweepPoint::Wtype(a1, b1, _),
                SweepPoint::Wtype(a3, b3, _),
            ) => {
                assert_eq!((*a0, *b0), (0.1, 0.3));
                assert_eq!((*a1, *b1), (0.1, 0.4));
                assert_eq!((*a3, *b3), (0.2, 0.4));
            }
            other => panic!("unexpected points {other:?}"),
        }
    }

    #[test]
    fn sweep_rows_report_normalized_params() {
        let spec = SweepSpec {
            family: SweepGrid::Ww {
                theta: vec![0.0, std::f64::consts::FRAC_PI_2],
            },
            policy: Policy::Auto,
        };
        let rows = run_sweep(&spec, &MeasureOptions::default()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].lambda_sq - 4.0 / 9.0).abs() < 1e-12);
        assert!((rows[1].lambda_sq - 4.0 / 9.0).abs() < 1e-12);

        let spec = SweepSpec {
            family: SweepGrid::Wtype {
                a: vec![2.0],
                b: vec![2.0],
                c: vec![2.0],
            },
            policy: Policy::Auto,
        };
        let rows = run_sweep(&spec, &MeasureOptions::default()).unwrap();
        let norm: f64 = rows[0].params.values().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn check_passes_on_family_states() {
        let report = run_check(
            "W",
            &PureState3::w(),
            &MeasureOptions::default(),
        )
        .unwrap();
        assert!(report.pass, "max delta {}", report.max_delta);
        assert!(report.analytic.is_some());
        assert!(report.max_delta < 1e-9);
    }

    #[test]
    fn csv_rendering_is_stable() {
        let spec = SweepSpec {
            family: SweepGrid::Ww {
                theta: vec![0.0, 0.5],
            },
            policy: Policy::Auto,
        };
        let rows = run_sweep(&spec, &MeasureOptions::default()).unwrap();
        let a = render_sweep(&rows, Format::Csv);
        let b = render_sweep(&rows, Format::Csv);
        assert_eq!(a, b);
        assert!(a.starts_with("family,theta,lambda_sq,e_g,method,degenerate\n"));
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::NotNormalized(0.1)), 3);
        assert_eq!(exit_code(&Error::NotFamily), 3);
        assert_eq!(exit_code(&Error::NullState), 3);
    }
}
