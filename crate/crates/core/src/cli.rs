//! Command-line front end. `main` forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::inequalities::{self, Status, Verdict};
use crate::matrix::Matrix;
use crate::norms::NormDescriptor;
use crate::radius::{self, RadiusOptions, RadiusResult};
use crate::sampling::{self, Sample, SamplerSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERICAL: i32 = 70;

const ORACLE_POLISH_ITERS: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "opradius", version, about = "Generalized numerical radius and Euclidean operator radius of matrix pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print w_N, and w_(N,e) for pairs, with maximizing angles.
    Radius(InputArgs),
    /// Run the inequality registry; exits 2 if any check is violated.
    Verify(InputArgs),
    /// Search a sampling family for inputs on which a check is tight.
    Search(SearchArgs),
    /// Compare the unit-vector estimate of w_e with the operator-norm pair radius.
    Oracle(OracleArgs),
    /// Write sampled matrices to JSON files.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    theta_grid: Option<usize>,
    #[arg(long)]
    t_grid: Option<usize>,
    #[arg(long)]
    phi_grid: Option<usize>,
    #[arg(long)]
    refine_tol: Option<f64>,
}

impl GridArgs {
    fn options(&self) -> Result<RadiusOptions> {
        let d = RadiusOptions::default();
        let opts = RadiusOptions {
            theta_grid: self.theta_grid.unwrap_or(d.theta_grid),
            t_grid: self.t_grid.unwrap_or(d.t_grid),
            phi_grid: self.phi_grid.unwrap_or(d.phi_grid),
            refine_tol: self.refine_tol.unwrap_or(d.refine_tol),
            ..d
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Operands {
    /// One matrix file.
    #[arg(long, value_name = "FILE")]
    single: Option<PathBuf>,
    /// Two matrix files, B then C.
    #[arg(long, num_args = 2, value_names = ["B", "C"])]
    pair: Option<Vec<PathBuf>>,
}

impl Operands {
    /// `(B, Some(C))` for pairs, `(T, None)` for a single file.
    fn load(&self) -> Result<(Matrix, Option<Matrix>)> {
        match (&self.single, &self.pair) {
            (Some(path), _) => Ok((Matrix::read_json(path)?, None)),
            (None, Some(paths)) => {
                let b = Matrix::read_json(&paths[0])?;
                let c = Matrix::read_json(&paths[1])?;
                if b.dim() != c.dim() {
                    return Err(Error::DimensionMismatch {
                        left: b.dim(),
                        right: c.dim(),
                    });
                }
                Ok((b, Some(c)))
            }
            (None, None) => unreachable!("clap requires one operand group"),
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    #[command(flatten)]
    operands: Operands,
    /// Norm selector: op, hs, trace, wnum or schatten:p. Repeatable.
    #[arg(long = "norm", value_name = "SELECTOR")]
    norms: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Registry id of the check to sharpen.
    #[arg(long)]
    check: String,
    /// Sampling family, `name[:n]`.
    #[arg(long)]
    family: String,
    #[arg(long, default_value = "op")]
    norm: String,
    /// Number of inputs to score.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    operands: Operands,
    /// Random unit vectors drawn before polishing.
    #[arg(long, default_value_t = 20000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Sampling family, `name[:n]`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    seed: u64,
    /// One output file for a single matrix, two for a pair.
    #[arg(required = true, num_args = 1..=2, value_name = "OUT")]
    outputs: Vec<PathBuf>,
}

/// Runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "opradius: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Radius(args) => cmd_radius(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Search(args) => cmd_search(args, out),
        Command::Oracle(args) => cmd_oracle(args, out),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn parse_norms(selectors: &[String]) -> Result<Vec<NormDescriptor>> {
    if selectors.is_empty() {
        return Ok(vec![NormDescriptor::OP]);
    }
    selectors.iter().map(|s| s.parse()).collect()
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(num) => {
            if num.is_f64() {
                if let Some(x) = num.as_f64() {
                    *v = json!(sig12(x));
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit_json(out: &mut dyn Write, mut v: Value) -> Result<()> {
    round_json(&mut v);
    writeln!(out, "{v}")?;
    Ok(())
}

fn fmt12(x: f64) -> String {
    let r = sig12(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), fmt12)
}

fn radius_json(r: &RadiusResult) -> Value {
    json!({
        "value": r.value,
        "argmax": {"theta": r.argmax.theta, "t": r.argmax.t, "phi": r.argmax.phi},
        "escalations_used": r.escalations_used,
    })
}

fn cmd_radius(args: InputArgs, out: &mut dyn Write) -> Result<i32> {
    let norms = parse_norms(&args.norms)?;
    let opts = args.grid.options()?;
    let (b, c) = args.operands.load()?;
    for norm in &norms {
        let wb = radius::w_n(&b, norm, &opts)?;
        match &c {
            None => match args.out {
                OutFormat::Json => emit_json(out, json!({"norm": norm.id(), "w_n": radius_json(&wb)}))?,
                OutFormat::Text => writeln!(
                    out,
                    "{norm}: w_N(T) = {} at theta = {}",
                    fmt12(wb.value),
                    fmt12(wb.argmax.theta)
                )?,
            },
            Some(c) => {
                let wc = radius::w_n(c, norm, &opts)?;
                let we = radius::w_ne(&b, c, norm, &opts)?;
                match args.out {
                    OutFormat::Json => emit_json(
                        out,
                        json!({
                            "norm": norm.id(),
                            "w_n_b": radius_json(&wb),
                            "w_n_c": radius_json(&wc),
                            "w_ne": radius_json(&we),
                        }),
                    )?,
                    OutFormat::Text => {
                        writeln!(out, "{norm}: w_N(B) = {}", fmt12(wb.value))?;
                        writeln!(out, "{norm}: w_N(C) = {}", fmt12(wc.value))?;
                        writeln!(
                            out,
                            "{norm}: w_(N,e)(B, C) = {} at theta = {}, t = {}, phi = {}",
                            fmt12(we.value),
                            fmt12(we.argmax.theta),
                            fmt12(we.argmax.t),
                            fmt12(we.argmax.phi)
                        )?;
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn verdict_line(v: &Verdict) -> String {
    let mut line = format!(
        "{:<22} {:<12} {:<9} lhs={} rhs={} slack={}",
        v.check_id,
        v.norm,
        v.status.to_string(),
        fmt_opt(v.lhs),
        fmt_opt(v.rhs),
        fmt_opt(v.slack)
    );
    if v.escalations_used > 0 {
        line.push_str(&format!(" escalations={}", v.escalations_used));
    }
    if let Some(d) = &v.detail {
        line.push_str(&format!(" ({d})"));
    }
    line
}

fn cmd_verify(args: InputArgs, out: &mut dyn Write) -> Result<i32> {
    let norms = parse_norms(&args.norms)?;
    let opts = args.grid.options()?;
    let (b, c) = args.operands.load()?;
    let c = match c {
        Some(c) => c,
        None => Matrix::zeros(b.dim())?,
    };
    let verdicts = inequalities::run_suite(&b, &c, &norms, &opts)?;
    for v in &verdicts {
        match args.out {
            OutFormat::Json => emit_json(out, serde_json::to_value(v)?)?,
            OutFormat::Text => writeln!(out, "{}", verdict_line(v))?,
        }
    }
    if inequalities::has_violation(&verdicts) {
        Ok(EXIT_VIOLATION)
    } else if verdicts.iter().any(|v| v.status == Status::Error) {
        Ok(EXIT_NUMERICAL)
    } else {
        Ok(EXIT_OK)
    }
}

fn cmd_search(args: SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let norm: NormDescriptor = args.norm.parse()?;
    let opts = args.grid.options()?;
    let found = inequalities::search_sharpness(&args.check, &norm, &args.family, args.samples, args.seed, &opts)?;
    match args.out {
        OutFormat::Json => emit_json(out, serde_json::to_value(&found)?)?,
        OutFormat::Text => {
            writeln!(
                out,
                "{} under {}: min relative slack {} over {} inputs",
                found.check_id,
                found.norm,
                fmt12(found.min_relative_slack),
                found.evaluations
            )?;
            writeln!(out, "{}", verdict_line(&found.verdict))?;
            writeln!(out, "B = {}", found.b.to_json_string())?;
            writeln!(out, "C = {}", found.c.to_json_string())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let opts = args.grid.options()?;
    let (b, c) = args.operands.load()?;
    let c = match c {
        Some(c) => c,
        None => Matrix::zeros(b.dim())?,
    };
    let oracle = radius::w_e_vector_oracle(&b, &c, args.samples, args.seed, ORACLE_POLISH_ITERS)?;
    let we = radius::w_ne(&b, &c, &NormDescriptor::OP, &opts)?;
    match args.out {
        OutFormat::Json => emit_json(
            out,
            json!({"oracle": oracle, "w_ne": we.value, "difference": we.value - oracle}),
        )?,
        OutFormat::Text => writeln!(
            out,
            "oracle = {}, w_(op,e) = {}, difference = {}",
            fmt12(oracle),
            fmt12(we.value),
            fmt12(we.value - oracle)
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let spec = SamplerSpec::from_selector(&args.family, args.seed)?;
    match args.outputs.as_slice() {
        [path] => match sampling::sample(&spec)? {
            Sample::Single(m) => m.write_json(path)?,
            Sample::Pair(..) => {
                return Err(Error::InvalidOptions(format!(
                    "family {} yields pairs; give two output files",
                    spec.family.name()
                )))
            }
        },
        [first, second] => {
            let (b, c) = sampling::sample_pair(&spec)?;
            b.write_json(first)?;
            c.write_json(second)?;
        }
        _ => unreachable!("clap limits outputs to one or two"),
    }
    Ok(EXIT_OK)
}
