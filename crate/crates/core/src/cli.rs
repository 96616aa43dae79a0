//! Command-line front end: `constants`, `gamma-star`, `solve`, `verify` and
//! `sweep`.
//!
//! Settings come from flags, then an optional JSON file given by `--config`,
//! then the defaults N=1, q=0.5, γ=0.3, L=12, M=1024, t_end=1, n-schedule
//! 1, 2, …, 64 and ε_fp=1e-8. The worker count is `--threads`, else the
//! `SINGULAR_HEAT_THREADS` environment variable, else all cores.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constants::{gamma_star, ConstantsReport};
use crate::error::{Error, Result};
use crate::fields::{make_grid, Params};
use crate::initial::InitialData;
use crate::scheme::{monotone_solve, Nonlinearity, SolveConfig, Solver};
use crate::verify::{run_suite, CheckReport, Suite};

/// Environment variable read for the worker count.
pub const THREADS_ENV: &str = "SINGULAR_HEAT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "singular-heat",
    version,
    about = "Solver and checks for u_t - Δu = |x|^-γ u^q"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    /// JSON file with default settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    q: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Dimension N.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Half-width L of the box [-L, L]^N.
    #[arg(long, global = true)]
    half_width: Option<f64>,
    /// Points per axis M.
    #[arg(long, global = true)]
    points: Option<usize>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    /// Comma-separated output times; the last one replaces t_end.
    #[arg(long, global = true, value_delimiter = ',')]
    output_times: Option<Vec<f64>>,
    /// Quadrature nodes per time window.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Comma-separated increasing n values.
    #[arg(long, global = true, value_delimiter = ',')]
    n_schedule: Option<Vec<u64>>,
    /// Picard stopping tolerance ε_fp.
    #[arg(long, global = true)]
    picard_tol: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// η₀, η₁, η₂, β and Λ for the given parameters.
    Constants {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Smallest γ with Λ(γ) = 1.
    GammaStar {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve and write a trajectory CSV plus a `.json` sidecar.
    Solve {
        /// zero, const:c, bump, gauss:a or step.
        #[arg(long)]
        u0: Option<String>,
        /// monotone (default), power, zero or g:n.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a check suite.
    Verify {
        /// quick or all.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a quantity along a parameter range.
    Sweep {
        /// q or gamma.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// constants or gamma-star.
        #[arg(long, default_value = "constants")]
        quantity: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<f64>,
    gamma: Option<f64>,
    dim: Option<usize>,
    half_width: Option<f64>,
    points: Option<usize>,
    t_end: Option<f64>,
    output_times: Option<Vec<f64>>,
    nodes: Option<usize>,
    n_schedule: Option<Vec<u64>>,
    picard_tol: Option<f64>,
    threads: Option<usize>,
    u0: Option<String>,
    scheme: Option<String>,
    out: Option<PathBuf>,
    json: Option<PathBuf>,
    suite: Option<String>,
}

/// Solve strategy for the `solve` command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    /// The monotone scheme in n.
    Monotone,
    /// A single windowed Picard solve with the given nonlinearity.
    Single(Nonlinearity),
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(SchemeChoice::Monotone),
            "power" => Ok(SchemeChoice::Single(Nonlinearity::Power)),
            "zero" => Ok(SchemeChoice::Single(Nonlinearity::Zero)),
            _ => match s.strip_prefix("g:").map(str::parse::<u64>) {
                Some(Ok(n)) if n > 0 => Ok(SchemeChoice::Single(Nonlinearity::Regularized { n })),
                _ => Err(Error::Usage(format!(
                    "scheme must be monotone, power, zero or g:n with n ≥ 1 (got `{s}`)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Q,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepQuantity {
    Constants,
    GammaStar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub quantity: SweepQuantity,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        (0..self.steps)
            .map(|k| self.from + (self.to - self.from) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Constants,
    GammaStar,
    Solve { u0: InitialData, scheme: SchemeChoice },
    Verify { suite: Suite },
    Sweep(SweepSpec),
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub half_width: f64,
    pub points_per_axis: usize,
    pub solve: SolveConfig,
    /// Main output file (`solve` CSV).
    pub out: Option<PathBuf>,
    /// JSON report or record file.
    pub json: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Parses flags (the first item is the program name) and the optional
/// config file into a validated [`RunConfig`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string().trim_end().to_string()))?;
    let file = match &cli.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };

    let params = Params {
        n_dim: cli.dim.or(file.dim).unwrap_or(1),
        q: cli.q.or(file.q).unwrap_or(0.5),
        gamma: cli.gamma.or(file.gamma).unwrap_or(0.3),
    };
    params.validate().map_err(usage)?;
    let half_width = cli.half_width.or(file.half_width).unwrap_or(12.0);
    let points_per_axis = cli.points.or(file.points).unwrap_or(1024);
    make_grid(params.n_dim, half_width, points_per_axis).map_err(usage)?;

    let t_end = cli.t_end.or(file.t_end).unwrap_or(1.0);
    let output_times = cli.output_times.or(file.output_times).unwrap_or_else(|| vec![t_end]);
    let defaults = SolveConfig::default();
    let solve = SolveConfig {
        picard_tolerance: cli.picard_tol.or(file.picard_tol).unwrap_or(defaults.picard_tolerance),
        nodes_per_window: cli.nodes.or(file.nodes).unwrap_or(defaults.nodes_per_window),
        n_schedule: cli
            .n_schedule
            .or(file.n_schedule)
            .unwrap_or(defaults.n_schedule.clone()),
        output_times,
        ..defaults
    };
    solve.validate().map_err(usage)?;

    let threads = cli.threads.or(file.threads).or(threads_from_env()?);
    if threads == Some(0) {
        return Err(Error::Usage("threads must be a positive integer".into()));
    }

    let mut out = file.out;
    let mut json = file.json;
    let command = match cli.command {
        CliCommand::Constants { json: j } => {
            json = j.or(json);
            Command::Constants
        }
        CliCommand::GammaStar { json: j } => {
            json = j.or(json);
            Command::GammaStar
        }
        CliCommand::Solve { u0, scheme, out: o } => {
            out = o.or(out);
            if out.is_none() {
                return Err(Error::Usage("solve needs --out <path>".into()));
            }
            let u0 = u0.or(file.u0).unwrap_or_else(|| "bump".into()).parse()?;
            let scheme = scheme.or(file.scheme).unwrap_or_else(|| "monotone".into()).parse()?;
            Command::Solve { u0, scheme }
        }
        CliCommand::Verify { suite, json: j } => {
            json = j.or(json);
            Command::Verify {
                suite: suite.or(file.suite).unwrap_or_else(|| "all".into()).parse()?,
            }
        }
        CliCommand::Sweep {
            param,
            from,
            to,
            steps,
            quantity,
            json: j,
        } => {
            json = j.or(json);
            let param = match param.as_str() {
                "q" => SweepParam::Q,
                "gamma" => SweepParam::Gamma,
                _ => return Err(Error::Usage(format!("param must be q or gamma (got `{param}`)"))),
            };
            let quantity = match quantity.as_str() {
                "constants" => SweepQuantity::Constants,
                "gamma-star" => SweepQuantity::GammaStar,
                _ => {
                    return Err(Error::Usage(format!(
                        "quantity must be constants or gamma-star (got `{quantity}`)"
                    )))
                }
            };
            if steps == 0 {
                return Err(Error::Usage("steps must be positive".into()));
            }
            if quantity == SweepQuantity::GammaStar && param != SweepParam::Q {
                return Err(Error::Usage("a gamma-star sweep runs over q".into()));
            }
            let spec = SweepSpec {
                param,
                from,
                to,
                steps,
                quantity,
            };
            for v in spec.values() {
                point_params(&params, spec.param, v).map_err(usage)?;
            }
            Command::Sweep(spec)
        }
    };
    Ok(RunConfig {
        command,
        params,
        half_width,
        points_per_axis,
        solve,
        out,
        json,
        threads,
    })
}

fn usage(e: Error) -> Error {
    match e {
        Error::Parameter(m) | Error::Domain(m) => Error::Usage(m),
        other => other,
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("config file {}: {e}", path.display())))
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Usage(format!("{THREADS_ENV} must be a positive integer (got `{v}`)"))),
        Err(_) => Ok(None),
    }
}

fn point_params(base: &Params, param: SweepParam, v: f64) -> Result<Params> {
    match param {
        SweepParam::Q => Params::new(base.n_dim, v, base.gamma),
        SweepParam::Gamma => Params::new(base.n_dim, base.q, v),
    }
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(bytes).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Executes `config`, writing human-facing output to `stdout`. Returns
/// whether every executed check passed.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<bool> {
    match &config.command {
        Command::Constants => {
            let report = ConstantsReport::compute(&config.params)?;
            emit_json(config, stdout, &report)?;
            Ok(true)
        }
        Command::GammaStar => {
            let gs = gamma_star(config.params.q, config.params.n_dim)?;
            emit_json(config, stdout, &gs)?;
            Ok(true)
        }
        Command::Solve { u0, scheme } => {
            let grid = make_grid(config.params.n_dim, config.half_width, config.points_per_axis)?;
            let data = u0.sample(&grid)?;
            let traj = match scheme {
                SchemeChoice::Monotone => monotone_solve(&data, &config.params, &config.solve)?,
                SchemeChoice::Single(nl) => {
                    let solver = Solver::new(&grid, &config.params, &config.solve)?;
                    let mesh = solver.mesh_for(*nl, &data)?;
                    solver.solve(&data, *nl, &mesh)?
                }
            };
            let out = config
                .out
                .as_ref()
                .ok_or_else(|| Error::Usage("solve needs --out <path>".into()))?;
            let mut csv = Vec::new();
            traj.write_csv(&mut csv)?;
            write_atomic(out, &csv)?;
            let mut meta = traj.metadata_json(&config.solve)?;
            meta["u0"] = serde_json::Value::String(u0.to_string());
            let sidecar = sidecar_path(out);
            write_atomic(&sidecar, &to_json(&meta)?)?;
            writeln!(
                stdout,
                "wrote {} ({} snapshots) and {}",
                out.display(),
                traj.times.len(),
                sidecar.display()
            )?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let reports = run_suite(*suite);
            for r in &reports {
                writeln!(stdout, "{}", r.summary_line())?;
            }
            if let Some(path) = &config.json {
                write_atomic(path, &to_json(&reports)?)?;
            }
            Ok(reports.iter().all(|r: &CheckReport| r.pass))
        }
        Command::Sweep(spec) => {
            let mut records = Vec::with_capacity(spec.steps);
            for v in spec.values() {
                let p = point_params(&config.params, spec.param, v)?;
                let record = match spec.quantity {
                    SweepQuantity::Constants => serde_json::to_value(ConstantsReport::compute(&p)?)?,
                    SweepQuantity::GammaStar => serde_json::to_value(gamma_star(p.q, p.n_dim)?)?,
                };
                records.push(record);
            }
            emit_json(config, stdout, &records)?;
            Ok(true)
        }
    }
}

fn emit_json<T: Serialize>(config: &RunConfig, stdout: &mut dyn Write, value: &T) -> Result<()> {
    let bytes = to_json(value)?;
    match &config.json {
        Some(path) => write_atomic(path, &bytes),
        None => Ok(stdout.write_all(&bytes)?),
    }
}

/// `traj.csv` → `traj.csv.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Structured one-line error report for standard error.
pub fn error_line(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Parse, configure the thread pool and run; returns the exit status:
/// 0 on success with all checks passing, 1 when a check fails or a module
/// errors, 2 on a usage error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if args
        .iter()
        .skip(1)
        .any(|a| a == "--help" || a == "-h" || a == "--version" || a == "-V")
    {
        if let Err(e) = Cli::try_parse_from(&args) {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    }
    let config = match parse_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            return 2;
        }
    };
    if let Some(n) = config.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut stdout = std::io::stdout().lock();
    match run(&config, &mut stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_map_directly() {
        let c = parse_config([
            "singular-heat",
            "constants",
            "--q",
            "0.5",
            "--gamma",
            "0.3",
            "--dim",
            "1",
        ])
        .unwrap();
        assert_eq!(c.command, Command::Constants);
        assert_eq!(
            c.params,
            Params {
                n_dim: 1,
                q: 0.5,
                gamma: 0.3
            }
        );
        assert_eq!(c.points_per_axis, 1024);
        assert_eq!(c.solve.n_schedule, vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn invariant_violations_name_the_key() {
        let e = parse_config(["singular-heat", "constants", "--q", "1.5"]).unwrap_err();
        assert!(
            matches!(&e, Error::Usage(m) if m.contains("q must lie in (0,1)")),
            "{e}"
        );
        let e = parse_config(["singular-heat", "constants", "--bogus", "1"]).unwrap_err();
        assert!(matches!(&e, Error::Usage(m) if m.contains("--bogus")), "{e}");
    }

    #[test]
    fn scheme_choices() {
        assert_eq!("monotone".parse::<SchemeChoice>().unwrap(), SchemeChoice::Monotone);
        assert_eq!(
            "g:8".parse::<SchemeChoice>().unwrap(),
            SchemeChoice::Single(Nonlinearity::Regularized { n: 8 })
        );
        assert!("g:0".parse::<SchemeChoice>().is_err());
    }

    #[test]
    fn sweep_values_include_both_ends() {
        let s = SweepSpec {
            param: SweepParam::Gamma,
            from: 0.0,
            to: 0.5,
            steps: 6,
            quantity: SweepQuantity::Constants,
        };
        let v = s.values();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[5], 0.5);
    }
}
