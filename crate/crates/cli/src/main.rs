use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flagmetric::geom::{CurveScalarField, FlagGeometry, ScalarField};
use flagmetric::io::{self, DataLayout, RunConfig};
use flagmetric::metrics::{flag_metric_terms, FlagWeights, TangentVector};
use flagmetric::shapedist::{distance, StraightenStatus};
use flagmetric::shapes::ShapeSpec;
use flagmetric::validate::{run_all, Tolerances, ValidateOptions};
use flagmetric::{Flag, FlagError};

const EXIT_VALIDATION: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_OPTIMIZER: u8 = 4;

/// Curvature invariants, metric evaluation and geodesic distances for
/// surfaces decorated with a closed curve.
#[derive(Parser, Debug)]
#[command(name = "flagmetric", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Flag weights `a1,b1,c1,a2,b2,c2` (default: all ones).
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Grid resolution `NUxNV` for synthesized shapes.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Finite-difference step for the validation suites.
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (the flag file for `synth`, a copy of the JSON report otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run configuration JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Writes an analytic flag: sphere, ellipsoid or bumpy_sphere.
    Synth {
        shape: String,
        /// Comma-separated shape parameters, e.g. `1,1,2` for an ellipsoid.
        #[arg(long)]
        params: Option<String>,
        /// Store samples in a little-endian sidecar instead of inline JSON.
        #[arg(long)]
        binary: bool,
    },
    /// Curve and surface invariants of a flag.
    Invariants { flag: PathBuf },
    /// Evaluates the metric on a tangent vector `(h1, h2)`.
    ///
    /// A speed is `const:c`, `sin:k` (sin(k u)), `z` (the z coordinate) or a
    /// JSON file holding an array of values.
    Metric {
        flag: PathBuf,
        #[arg(long, default_value = "const:1")]
        h1: String,
        #[arg(long, default_value = "const:1")]
        h2: String,
    },
    /// Runs the finite-difference validation suites.
    Validate {
        flag: PathBuf,
        /// JSON file overriding individual tolerances.
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
    /// Estimates the geodesic distance between two flags.
    Distance {
        a: PathBuf,
        b: PathBuf,
        /// Number of path steps (overrides the config).
        #[arg(long)]
        steps: Option<usize>,
        /// Directory receiving one OBJ pair per path frame.
        #[arg(long)]
        frames: Option<PathBuf>,
    },
}

fn bad_input(msg: impl Into<String>) -> anyhow::Error {
    FlagError::InvalidParameter(msg.into()).into()
}

fn parse_grid(s: &str) -> Result<[usize; 2]> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| bad_input(format!("grid `{s}` is not of the form NUxNV")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| bad_input(format!("grid `{s}`: {e}")))
    };
    Ok([parse(a)?, parse(b)?])
}

fn parse_params(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| bad_input(format!("parameter `{t}`: {e}")))
        })
        .collect()
}

fn load_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(w) = &g.weights {
        cfg.weights = Some(FlagWeights::parse(w)?);
    }
    if let Some(grid) = &g.grid {
        cfg.grid = parse_grid(grid)?;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_flag(path: &Path) -> Result<Flag> {
    io::read_flag(path).with_context(|| format!("reading flag {}", path.display()))
}

fn emit(report: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    println!("{text}");
    if let Some(p) = out {
        fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn stats(values: impl Iterator<Item = f64>) -> Value {
    let (mut lo, mut hi, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for x in values {
        lo = lo.min(x);
        hi = hi.max(x);
        sum += x;
        n += 1;
    }
    json!({"min": lo, "max": hi, "mean": sum / n as f64})
}

fn invariants(flag: &Flag) -> Result<Value> {
    let geom = FlagGeometry::new(flag)?;
    let inv = &geom.invariants;
    Ok(json!({
        "curve": {
            "length": geom.curve.length(),
            "kappa_g": inv.kappa_g,
            "kappa_n": inv.kappa_n,
            "tau_g": inv.tau_g,
        },
        "surface": {
            "area": geom.surface.area(),
            "kappa1": stats(geom.surface.kappa1.iter().copied()),
            "kappa2": stats(geom.surface.kappa2.iter().copied()),
        },
    }))
}

enum Speed {
    Const(f64),
    Sin(f64),
    Z,
    Values(Vec<f64>),
}

impl Speed {
    fn parse(spec: &str) -> Result<Self> {
        if spec == "z" {
            return Ok(Self::Z);
        }
        let number = |t: &str| {
            t.parse::<f64>()
                .map_err(|e| bad_input(format!("speed `{spec}`: {e}")))
        };
        if let Some(c) = spec.strip_prefix("const:") {
            return Ok(Self::Const(number(c)?));
        }
        if let Some(k) = spec.strip_prefix("sin:") {
            return Ok(Self::Sin(number(k)?));
        }
        let path = spec.strip_prefix("file:").unwrap_or(spec);
        let text = fs::read(path).with_context(|| format!("reading speed file {path}"))?;
        let values: Vec<f64> = serde_json::from_slice(&text).map_err(FlagError::from)?;
        Ok(Self::Values(values))
    }

    fn eval(&self, u: f64, z: f64) -> f64 {
        match *self {
            Self::Const(c) => c,
            Self::Sin(k) => (k * u).sin(),
            Self::Z => z,
            Self::Values(_) => unreachable!("sampled speeds are not evaluated pointwise"),
        }
    }

    fn on_curve(self, flag: &Flag) -> Result<CurveScalarField<f64>> {
        match self {
            Self::Values(v) => {
                if v.len() != flag.n_u() {
                    return Err(bad_input(format!(
                        "h1 file holds {} values, expected {}",
                        v.len(),
                        flag.n_u()
                    )));
                }
                Ok(CurveScalarField::from_values(v))
            }
            s => Ok(CurveScalarField::from_fn(flag, |u, p| s.eval(u, p.z))),
        }
    }

    fn on_surface(self, flag: &Flag) -> Result<ScalarField<f64>> {
        match self {
            Self::Values(v) => Ok(ScalarField::new(flag.n_u(), flag.n_interior_rows(), v)?),
            s => Ok(ScalarField::from_fn(flag, |u, _, p| s.eval(u, p.z))),
        }
    }
}

fn metric(flag: &Flag, h1: &str, h2: &str, w: &FlagWeights<f64>) -> Result<Value> {
    let geom = FlagGeometry::new(flag)?;
    let tv = TangentVector::new(
        Speed::parse(h1)?.on_curve(flag)?,
        Speed::parse(h2)?.on_surface(flag)?,
    )?;
    let t = flag_metric_terms(&geom, &tv, w)?;
    let terms = json!({"a1": t.a1, "b1": t.b1, "c1": t.c1, "a2": t.a2, "b2": t.b2, "c2": t.c2});
    Ok(json!({"metric": t.total(), "weights": w.as_array(), "terms": terms}))
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    let cfg = load_config(g)?;
    let weights = cfg.metric_params()?.flag;
    match cli.command {
        Command::Synth {
            shape,
            params,
            binary,
        } => {
            let params = params
                .as_deref()
                .map(parse_params)
                .transpose()?
                .unwrap_or_default();
            let spec = ShapeSpec::parse(&shape, &params)?;
            let [n_u, n_v] = cfg.grid;
            let flag: Flag = spec.build(n_u, n_v)?;
            let out = g.out.as_deref().ok_or_else(|| bad_input("synth needs --out"))?;
            let layout = if binary {
                DataLayout::Binary
            } else {
                DataLayout::Inline
            };
            io::write_flag(out, &flag, layout)?;
            Ok(0)
        }
        Command::Invariants { flag } => {
            emit(&invariants(&read_flag(&flag)?)?, g.out.as_deref())?;
            Ok(0)
        }
        Command::Metric { flag, h1, h2 } => {
            emit(&metric(&read_flag(&flag)?, &h1, &h2, &weights)?, g.out.as_deref())?;
            Ok(0)
        }
        Command::Validate { flag, tolerances } => {
            let tolerances: Tolerances = match tolerances {
                Some(p) => serde_json::from_slice(&fs::read(&p)?).map_err(FlagError::from)?,
                None => Tolerances::default(),
            };
            let opts = ValidateOptions {
                eps: g.eps,
                tolerances,
                seed: cfg.seed,
                weights,
                ..ValidateOptions::default()
            };
            let report = run_all(&read_flag(&flag)?, &opts)?;
            let passed = report.passed();
            let mut value = serde_json::to_value(&report)?;
            value["passed"] = json!(passed);
            emit(&value, g.out.as_deref())?;
            Ok(if passed { 0 } else { EXIT_VALIDATION })
        }
        Command::Distance { a, b, steps, frames } => {
            let (a, b) = (read_flag(&a)?, read_flag(&b)?);
            let steps = steps.unwrap_or(cfg.steps);
            let result = distance(&a, &b, steps, &weights, &cfg.optimizer)?;
            if let Some(dir) = frames.or(cfg.outputs.frames.clone()) {
                io::export_frames(&dir, result.path.flags())?;
            }
            let report = json!({
                "distance": result.distance(),
                "energy": result.energy(),
                "energy_history": result.history,
                "iterations": result.iterations,
                "status": result.status,
                "steps": steps,
            });
            emit(&report, g.out.as_deref().or(cfg.outputs.report.as_deref()))?;
            Ok(match result.status {
                StraightenStatus::LineSearchFailed => EXIT_OPTIMIZER,
                _ => 0,
            })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<FlagError>() {
        Some(FlagError::LineSearchFailed { .. }) => EXIT_OPTIMIZER,
        Some(FlagError::Io(_)) | None => 1,
        Some(_) => EXIT_BAD_INPUT,
    }
}

fn init_threads() -> Result<()> {
    if let Ok(s) = std::env::var("FLAGMETRIC_THREADS") {
        let n: usize = s
            .parse()
            .map_err(|e| bad_input(format!("FLAGMETRIC_THREADS=`{s}`: {e}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match init_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
