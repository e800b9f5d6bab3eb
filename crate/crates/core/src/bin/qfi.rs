//! Command-line front end. Exit status: 0 all checks hold, 1 a check was
//! violated, 2 bad configuration or input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qfi_core::campaign::{run_campaign, CampaignConfig, Check, InstanceId};
use qfi_core::inequalities::{t_grid, DEFAULT_TOL};
use qfi_core::instance::{compute, load_instance};
use qfi_core::monotone::catalog;
use qfi_core::report::{emit_report, Format};
use qfi_core::selftest::selftest;
use qfi_core::state::StateKind;
use qfi_core::Error;

#[derive(Parser)]
#[command(name = "qfi", version, about = "Verify determinant uncertainty inequalities for monotone quantum Fisher metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized verification campaign
    Verify(VerifyArgs),
    /// Evaluate every check on one instance file
    Compute {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_delimiter = ',')]
        t_grid: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the operator monotone function catalogue
    Catalog {
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Recompute the hand-derived reference values
    Selftest,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
    num_obs: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    /// Function specs, e.g. `sld,wy,wyd:0.3`
    #[arg(long, value_delimiter = ',')]
    functions: Option<Vec<String>>,
    /// Pairs for the f-versus-g checks, e.g. `sld/wy,sld/wyd:0.3`
    #[arg(long, value_delimiter = ',')]
    pairs: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// generic, degenerate, near-singular
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<String>>,
    /// main, conj1, conj2, firey, robertson, equality, contraction
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    workers: Option<usize>,
    /// Re-run a single instance given as `n,N,kind,index`
    #[arg(long)]
    replay: Option<String>,
}

fn parse_list<T: std::str::FromStr<Err = Error>>(items: Option<Vec<String>>, default: Vec<T>) -> Result<Vec<T>, Error> {
    match items {
        None => Ok(default),
        Some(v) => v.iter().map(|s| s.parse()).collect(),
    }
}

fn replay_id(spec: &str, seed: u64) -> Result<InstanceId, Error> {
    let bad = || Error::Config(format!("--replay expects `n,N,kind,index`, got `{spec}`"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [n, num_obs, kind, index] = parts[..] else {
        return Err(bad());
    };
    Ok(InstanceId {
        seed,
        n: n.parse().map_err(|_| bad())?,
        num_obs: num_obs.parse().map_err(|_| bad())?,
        kind: kind.parse()?,
        index: index.parse().map_err(|_| bad())?,
    })
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let defaults = CampaignConfig::default();
    let function_pairs = match args.pairs {
        None => defaults.function_pairs,
        Some(v) => v
            .iter()
            .map(|p| {
                p.split_once('/')
                    .map(|(f, g)| (f.to_string(), g.to_string()))
                    .ok_or_else(|| Error::Config(format!("pair `{p}` must be written f/g")))
            })
            .collect::<Result<_, _>>()?,
    };
    let only = args.replay.as_deref().map(|s| replay_id(s, args.seed)).transpose()?;
    let config = CampaignConfig {
        dims: args.dims,
        num_obs: args.num_obs,
        instances_per_cell: args.instances,
        functions: args.functions.unwrap_or(defaults.functions),
        function_pairs,
        kinds: parse_list::<StateKind>(args.kinds, defaults.kinds)?,
        t_grid: args.t_grid.unwrap_or(defaults.t_grid),
        tol: args.tol,
        seed: args.seed,
        checks: parse_list::<Check>(args.checks, defaults.checks)?,
        only,
    };
    let format: Format = args.format.parse()?;
    let report = run_campaign(&config, args.workers)?;
    emit_report(&report, format, args.out.as_deref())?;
    for v in &report.violations {
        eprintln!("violation: {} [{}] f={:?} g={:?} t={:?}: {}", v.check, v.instance, v.f, v.g, v.t, v.note);
    }
    eprintln!(
        "{} instances, {} evaluations, {} violations, {:.2}s",
        report.instances, report.evaluations, report.violation_count, report.runtime_seconds
    );
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Compute { path, tol, t_grid: t, out } => {
            let instance = load_instance(&path)?;
            let report = compute(&instance, &t.unwrap_or_else(t_grid), tol)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))? + "\n";
            match out {
                Some(p) => std::fs::write(&p, json)?,
                None => print!("{json}"),
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Catalog { format } => {
            let entries = catalog();
            match format.as_str() {
                "json" => println!(
                    "{}",
                    serde_json::to_string_pretty(&entries).map_err(|e| Error::Io(e.to_string()))?
                ),
                "text" => {
                    for e in entries {
                        println!("{}  f(x) = {}", e.name, e.formula);
                        println!("    parameters: {}", e.parameters);
                        println!("    f(0) = {}  ({})", e.value_at_zero, e.regularity);
                        if let Some(t) = e.tilde {
                            println!("    f~(x) = {t}");
                        }
                        println!("    e.g. {}", e.example);
                    }
                }
                other => return Err(Error::Config(format!("unknown format `{other}` (text or json)"))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let cases = selftest()?;
            let mut ok = true;
            for c in &cases {
                ok &= c.pass;
                println!(
                    "{} {}: expected {}, got {} (tol {:e})",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.expected,
                    c.actual,
                    c.tol
                );
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
