use clap::{Args, Parser, Subcommand};
use holosemi::{parse, Expr};
use num_complex::Complex64;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "holosemi", version, about = "Analyse semigroups of holomorphic self-maps of the unit disk")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit one JSON report object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized sample set.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON object with the same keys as the flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,
    /// Write the CSV or SVG payload to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function and its derivative.
    Eval(EvalArgs),
    /// Test the generator inequality and build the Berkson-Porta data.
    CheckGenerator(CheckArgs),
    /// Locate the Denjoy-Wolff point.
    Dw(DwArgs),
    /// Integrate a trajectory and print it as CSV.
    Flow(FlowArgs),
    /// Koenigs linearization at an interior Denjoy-Wolff point.
    Koenigs(KoenigsArgs),
    /// Solve the Abel equation for a zero-free generator.
    Abel(AbelArgs),
    /// Boundary rigidity: cubic law, or the wedge form with --wedge.
    Rigidity(RigidityArgs),
    /// Angular derivative bounds at a boundary null point.
    Bounds(BoundsArgs),
    /// Decide whether two generators commute.
    Commute(CommuteArgs),
    /// Sufficient conditions for a trivial centralizer.
    Centralizer(FuncArgs),
    /// Draw the vector field and some trajectories as SVG.
    Plot(PlotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::CheckGenerator(_) => "check-generator",
            Command::Dw(_) => "dw",
            Command::Flow(_) => "flow",
            Command::Koenigs(_) => "koenigs",
            Command::Abel(_) => "abel",
            Command::Rigidity(_) => "rigidity",
            Command::Bounds(_) => "bounds",
            Command::Commute(_) => "commute",
            Command::Centralizer(_) => "centralizer",
            Command::Plot(_) => "plot",
        }
    }
}

pub const SUBCOMMANDS: [&str; 11] =
    ["eval", "check-generator", "dw", "flow", "koenigs", "abel", "rigidity", "bounds", "commute", "centralizer", "plot"];

#[derive(Debug, Args)]
pub struct FuncArgs {
    /// Function of z, e.g. "(z-1)*(1-z)".
    #[arg(long, allow_hyphen_values = true)]
    pub func: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Evaluation point; may be repeated.
    #[arg(long = "at", required = true, allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Also print Taylor coefficients to this degree.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    #[arg(long, default_value_t = 64)]
    pub angles: usize,
    #[arg(long, default_value_t = 32)]
    pub radii: usize,
    #[arg(long, default_value_t = 0.995)]
    pub max_r: f64,
    #[arg(long, default_value_t = holosemi::RESIDUAL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DwArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Random starting points whose distance to τ is tracked.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FlowParamsArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 0.1)]
    pub max_step: f64,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Starting point.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Number of equal time steps in the output.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub params: FlowParamsArgs,
}

#[derive(Debug, Args)]
pub struct KoenigsArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Interior fixed point; located automatically when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, default_value_t = holosemi::linearize::DEFAULT_DEGREE)]
    pub degree: usize,
    /// Random points for the functional-equation residual.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct AbelArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Point at which to report p(z); may be repeated.
    #[arg(long = "at", allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Random (z, t) pairs for the translation residual.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RigidityArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Use the wedge condition with this α in (0, 2].
    #[arg(long)]
    pub wedge: Option<f64>,
    /// Boundary point for the wedge form; defaults to the Denjoy-Wolff point.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    /// Boundary null point (or fixed point with --self-map).
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Treat the function as a self-map F with F(τ) = τ.
    #[arg(long)]
    pub self_map: bool,
}

#[derive(Debug, Args)]
pub struct CommuteArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Common null point for the coincidence test.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Expansion order for the coincidence test.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Random (z, t, s) triples for the flow commutation test.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub func: FuncArgs,
    #[arg(long, default_value_t = 8)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Arrow grid: angular directions.
    #[arg(long, default_value_t = 24)]
    pub arrow_angles: usize,
    /// Arrow grid: radii.
    #[arg(long, default_value_t = 6)]
    pub arrow_radii: usize,
}

pub fn parse_function(text: &str) -> Result<Expr, CliError> {
    parse(text).map_err(|e| CliError::Usage(format!("cannot parse '{text}': {e}")))
}

/// Complex literal such as `1`, `-0.5+0.25*i` or `i`: any constant
/// expression of the function grammar.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let e = parse_function(text)?;
    match e.normalize() {
        Expr::Const(c) if c.re.is_finite() && c.im.is_finite() => Ok(c),
        Expr::Const(_) => Err(CliError::Usage(format!("'{text}' is not a finite number"))),
        _ => Err(CliError::Usage(format!("'{text}' is not a constant"))),
    }
}

/// Turns a config object into flags placed right after the subcommand, so
/// that flags given on the command line, which come later, override them.
pub fn config_to_args(text: &str) -> Result<Vec<String>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    let mut args = Vec::new();
    for (key, v) in map {
        if key == "config" {
            return Err(CliError::Usage("config files cannot nest".into()));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let mut push = |v: &Value| -> Result<(), CliError> {
            match v {
                Value::Bool(true) => args.push(flag.clone()),
                Value::Bool(false) => {}
                Value::String(s) => args.extend([flag.clone(), s.clone()]),
                Value::Number(n) => args.extend([flag.clone(), n.to_string()]),
                _ => return Err(CliError::Usage(format!("config key '{key}' has an unsupported value"))),
            }
            Ok(())
        };
        match &v {
            Value::Array(items) => items.iter().try_for_each(&mut push)?,
            other => push(other)?,
        }
    }
    Ok(args)
}

/// Index of the subcommand token in `argv`, skipping global options and
/// their values.
fn subcommand_index(argv: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let a = argv[i].as_str();
        if matches!(a, "--seed" | "--config" | "--out") {
            i += 2;
            continue;
        }
        if SUBCOMMANDS.contains(&a) {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn config_path(argv: &[String]) -> Option<Result<String, CliError>> {
    let mut found = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            found = Some(argv.get(i + 1).cloned().ok_or_else(|| CliError::Usage("--config needs a file".into())));
        } else if let Some(p) = a.strip_prefix("--config=") {
            found = Some(Ok(p.to_string()));
        }
    }
    found
}

/// `argv` with the config file, if any, spliced in.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = path?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let extra = config_to_args(&text)?;
    let at = subcommand_index(&argv).map_or(argv.len(), |i| i + 1);
    let mut out = argv;
    out.splice(at..at, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5+0.25*i").unwrap(), Complex64::new(-0.5, 0.25));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("z").is_err());
        assert!(parse_complex("1/0").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn config_values_become_flags() {
        let a = config_to_args(r#"{"func": "z^2-1", "json": true, "seed": 3, "at": ["0", "0.5"], "max_r": 0.9}"#).unwrap();
        assert_eq!(a, argv("--func z^2-1 --json --seed 3 --at 0 --at 0.5 --max-r 0.9"));
        assert!(config_to_args("[1]").is_err());
        assert!(config_to_args(r#"{"config": "x"}"#).is_err());
        assert!(config_to_args(r#"{"func": null}"#).is_err());
    }

    #[test]
    fn later_flags_override_config() {
        let mut v = argv("holosemi check-generator");
        v.extend(argv("--func z --func -z"));
        let cli = Cli::try_parse_from(v).unwrap();
        match cli.command {
            Command::CheckGenerator(a) => assert_eq!(a.func.func, "-z"),
            _ => panic!(),
        }
    }

    #[test]
    fn subcommand_is_found_after_global_options() {
        assert_eq!(subcommand_index(&argv("holosemi --seed 3 dw --func z")), Some(3));
        assert_eq!(subcommand_index(&argv("holosemi --out dw dw")), Some(3));
        assert_eq!(subcommand_index(&argv("holosemi --json")), None);
    }
}
