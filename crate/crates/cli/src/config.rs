use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use igeo_core::models::{DEFAULT_HERMITE_NODES, DEFAULT_MC_SEED, MIN_MC_SAMPLES};
use igeo_core::tolerances::Tolerances;
use igeo_core::{Chart, ExpectationEngine, GeoError, ParamPoint};

use crate::CliError;

pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const SEED_ENV: &str = "IGEO_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Metric,
    Christoffel,
    Torsion,
    Curvature,
    Scalar,
    Transform,
    Audit,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Metric => "metric",
            Command::Christoffel => "christoffel",
            Command::Torsion => "torsion",
            Command::Curvature => "curvature",
            Command::Scalar => "scalar",
            Command::Transform => "transform",
            Command::Audit => "audit",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartArg {
    Theta,
    Xi,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Self {
        match c {
            ChartArg::Theta => Chart::Theta,
            ChartArg::Xi => Chart::Xi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConnectionArg {
    /// Levi-Civita connection of the Fisher metric
    LeviCivita,
    /// E[∂i∂j l ∂k l]; carried to xi with the full connection law
    Expectation,
}

/// Engine as typed on the command line; the seed may still come from the
/// environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSpec {
    ClosedForm,
    GaussHermite(usize),
    MonteCarlo(usize, Option<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let d = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.stop
                } else {
                    self.start + d * i as f64
                }
            })
            .collect()
    }
}

/// Information-geometry quantities of the univariate Gaussian family.
#[derive(Debug, Parser)]
#[command(name = "igeo", version)]
pub struct Args {
    /// Quantity to evaluate
    #[arg(value_enum)]
    pub command: Command,

    /// Chart the point or grid is written in
    #[arg(long, value_enum, default_value = "theta")]
    pub chart: ChartArg,

    /// Point as c1,c2
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, conflicts_with = "grid")]
    pub point: Option<[f64; 2]>,

    /// Grid as start:stop:steps,start:stop:steps
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<[Axis; 2]>,

    /// closed_form | gauss_hermite[:nodes] | monte_carlo[:samples[:seed]]
    #[arg(long, value_parser = parse_engine, default_value = "closed_form")]
    pub engine: EngineSpec,

    /// Connection used by christoffel, torsion, curvature and scalar
    #[arg(long, value_enum, default_value = "levi-civita")]
    pub connection: ConnectionArg,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,

    /// Emit the published closed forms instead of oracle values (xi chart)
    #[arg(long)]
    pub published: bool,

    /// Exit with status 3 when the audit reports a mismatch
    #[arg(long)]
    pub strict: bool,

    /// Absolute tolerance for closed-form comparisons
    #[arg(long)]
    pub abs_tol: Option<f64>,

    /// Relative tolerance for closed-form comparisons
    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Absolute tolerance for differentiated comparisons
    #[arg(long)]
    pub diff_abs_tol: Option<f64>,

    /// Relative tolerance for differentiated comparisons
    #[arg(long)]
    pub diff_rel_tol: Option<f64>,

    /// Write the report here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub chart: Chart,
    /// Evaluation points in grid order.
    pub points: Vec<ParamPoint>,
    pub engine: ExpectationEngine,
    pub connection: ConnectionArg,
    pub format: Format,
    pub published: bool,
    pub strict: bool,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: Args, seed_env: Option<String>) -> Result<Self, CliError> {
        let chart = Chart::from(args.chart);
        let engine = resolve_engine(args.engine, seed_env)?;
        let points = match (args.point, args.grid) {
            (Some([c1, c2]), None) => vec![ParamPoint::new(chart, c1, c2)?],
            (None, Some(axes)) => grid_points(chart, &axes)?,
            (None, None) if args.command == Command::Selftest => Vec::new(),
            (None, None) => {
                return Err(CliError::Usage(format!(
                    "{} needs --point or --grid",
                    args.command.name()
                )))
            }
            (Some(_), Some(_)) => unreachable!("clap rejects --point with --grid"),
        };
        if args.published && chart != Chart::Xi {
            return Err(CliError::Usage(
                "published values are stated in the xi chart; pass --chart xi".into(),
            ));
        }
        if args.published
            && matches!(
                args.command,
                Command::Transform | Command::Audit | Command::Selftest
            )
        {
            return Err(CliError::Usage(format!(
                "--published does not apply to {}",
                args.command.name()
            )));
        }
        if args.command == Command::Audit && chart != Chart::Theta {
            return Err(GeoError::ChartMismatch {
                expected: Chart::Theta.name(),
                got: chart.name(),
            }
            .into());
        }

        let mut tolerances = Tolerances::default();
        let overrides = [
            (&mut tolerances.closed_form.abs, args.abs_tol, "--abs-tol"),
            (&mut tolerances.closed_form.rel, args.rel_tol, "--rel-tol"),
            (
                &mut tolerances.differentiated.abs,
                args.diff_abs_tol,
                "--diff-abs-tol",
            ),
            (
                &mut tolerances.differentiated.rel,
                args.diff_rel_tol,
                "--diff-rel-tol",
            ),
        ];
        for (slot, value, flag) in overrides {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(CliError::Usage(format!(
                        "{flag} must be a non-negative number"
                    )));
                }
                *slot = v;
            }
        }

        Ok(Self {
            command: args.command,
            chart,
            points,
            engine,
            connection: args.connection,
            format: args.format,
            published: args.published,
            strict: args.strict,
            tolerances,
            output: args.output,
        })
    }
}

fn resolve_engine(
    spec: EngineSpec,
    seed_env: Option<String>,
) -> Result<ExpectationEngine, CliError> {
    Ok(match spec {
        EngineSpec::ClosedForm => ExpectationEngine::ClosedForm,
        EngineSpec::GaussHermite(nodes) => ExpectationEngine::GaussHermite { nodes },
        EngineSpec::MonteCarlo(samples, seed) => {
            let seed = match (seed, seed_env) {
                (Some(s), _) => s,
                (None, Some(env)) => parse_u64(&env).ok_or_else(|| {
                    CliError::Usage(format!(
                        "{SEED_ENV} must be an unsigned integer, got {env:?}"
                    ))
                })?,
                (None, None) => DEFAULT_MC_SEED,
            };
            ExpectationEngine::MonteCarlo { samples, seed }
        }
    })
}

/// Every grid corner must lie in the chart; for both charts that is enough
/// to keep the whole rectangle inside.
fn grid_points(chart: Chart, axes: &[Axis; 2]) -> Result<Vec<ParamPoint>, CliError> {
    for c1 in [axes[0].start, axes[0].stop] {
        for c2 in [axes[1].start, axes[1].stop] {
            chart.validate(c1, c2).map_err(|e| match e {
                GeoError::Domain(msg) => {
                    GeoError::Domain(format!("grid corner ({c1}, {c2}): {msg}"))
                }
                other => other,
            })?;
        }
    }
    let v2 = axes[1].values();
    let mut points = Vec::with_capacity(axes[0].steps * axes[1].steps);
    for c1 in axes[0].values() {
        for &c2 in &v2 {
            points.push(ParamPoint::new(chart, c1, c2)?);
        }
    }
    Ok(points)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_u64(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

pub fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([parse_f64(a)?, parse_f64(b)?]),
        _ => Err(format!("expected c1,c2, got {s:?}")),
    }
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        return Err(format!("expected start:stop:steps, got {s:?}"));
    };
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| format!("{steps:?} is not a step count"))?;
    if steps == 0 {
        return Err("a grid axis needs at least one step".into());
    }
    Ok(Axis {
        start: parse_f64(start)?,
        stop: parse_f64(stop)?,
        steps,
    })
}

pub fn parse_grid(s: &str) -> Result<[Axis; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([parse_axis(a)?, parse_axis(b)?]),
        _ => Err(format!("expected two axes separated by a comma, got {s:?}")),
    }
}

pub fn parse_engine(s: &str) -> Result<EngineSpec, String> {
    let mut parts = s.split(':');
    let kind = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let count = |t: &str| -> Result<usize, String> {
        t.parse().map_err(|_| format!("{t:?} is not a count"))
    };
    match (kind, rest.as_slice()) {
        ("closed_form", []) => Ok(EngineSpec::ClosedForm),
        ("gauss_hermite", []) => Ok(EngineSpec::GaussHermite(DEFAULT_HERMITE_NODES)),
        ("gauss_hermite", [n]) => match count(n)? {
            0 => Err("gauss_hermite needs at least one node".into()),
            n => Ok(EngineSpec::GaussHermite(n)),
        },
        ("monte_carlo", _) if rest.len() <= 2 => {
            let samples = match rest.first() {
                Some(n) => count(n)?,
                None => DEFAULT_MC_SAMPLES,
            };
            if samples < MIN_MC_SAMPLES {
                return Err(format!("monte_carlo needs at least {MIN_MC_SAMPLES} samples"));
            }
            let seed = match rest.get(1) {
                Some(t) => Some(parse_u64(t).ok_or_else(|| format!("{t:?} is not a seed"))?),
                None => None,
            };
            Ok(EngineSpec::MonteCarlo(samples, seed))
        }
        _ => Err(format!(
            "unknown engine {s:?}; expected closed_form, gauss_hermite[:n] or monte_carlo[:n[:seed]]"
        )),
    }
}
