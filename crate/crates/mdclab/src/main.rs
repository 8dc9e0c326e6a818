use clap::{Parser, Subcommand};
use mdclab::config::{default_tolerances, ConfigError, Suite, SuiteConfig};
use mdc_core::params::{derive, LatticeParams};
use mdc_core::qprop1d::{n_step_kernel, Direction};
use mdclab::io::{write_sweep_csv, KernelJson, SurfaceJson};
use mdclab::suites;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mdclab", version, about = "Residual suites for the linear quad lattice equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run validation suites and write a JSON report. Tolerances are set with
    /// `--tol.<name> <value>`.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<Suite>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        hbar: Option<f64>,
        /// Report path; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Residual sweep CSV path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the N-step propagator kernel of the reduced oscillator.
    Kernel {
        /// Lattice parameters `p,q,r`.
        #[arg(long, value_parser = parse_triple, default_value = "3,2,1")]
        params: [f64; 3],
        #[arg(long, value_enum, default_value_t = Dir::Hat)]
        dir: Dir,
        #[arg(long, default_value_t = 1)]
        steps: u32,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Print the kernel of a surface given as JSON.
    Surface {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma separated numbers".to_string())
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Dir {
    Hat,
    Bar,
}

fn print_kernel(k: mdc_core::Result<mdc_core::oscgauss::OscKernel>) -> ExitCode {
    match k {
        Ok(k) => {
            println!("{}", serde_json::to_string_pretty(&KernelJson::from(&k)).expect("kernel is serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type TolOverrides = Vec<(String, f64)>;

/// Splits `--tol.<name> <value>` and `--tol.<name>=<value>` off the argument list.
fn take_tolerances(args: Vec<String>) -> Result<(Vec<String>, TolOverrides), String> {
    let known = default_tolerances();
    let mut rest = Vec::new();
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(spec) = a.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => (spec.to_string(), it.next().ok_or_else(|| format!("--tol.{spec} needs a value"))?),
        };
        if !known.contains_key(&name) {
            return Err(format!("unknown tolerance {name:?}"));
        }
        let v: f64 = value.parse().map_err(|_| format!("--tol.{name}: {value:?} is not a number"))?;
        tols.push((name, v));
    }
    Ok((rest, tols))
}

fn run(
    config: Option<PathBuf>,
    suites_sel: Vec<Suite>,
    seed: Option<u64>,
    trials: Option<usize>,
    hbar: Option<f64>,
    tols: TolOverrides,
) -> Result<SuiteConfig, ConfigError> {
    let mut cfg = match config {
        Some(p) => SuiteConfig::load(&p)?,
        None => SuiteConfig::default(),
    };
    if !suites_sel.is_empty() {
        cfg.suites = suites_sel;
    }
    cfg.seed = seed.unwrap_or(cfg.seed);
    cfg.trials = trials.unwrap_or(cfg.trials);
    cfg.hbar = hbar.unwrap_or(cfg.hbar);
    cfg.tolerances.extend(tols);
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let (args, tols) = match take_tolerances(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match Cli::parse_from(args).command {
        Command::Run { config, suites: sel, seed, trials, hbar, out, csv } => {
            let cfg = match run(config, sel, seed, trials, hbar, tols) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = suites::run(&cfg);
            let json = report.to_json();
            let written = match &out {
                Some(p) => std::fs::write(p, json + "\n").map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    println!("{json}");
                    Ok(())
                }
            };
            let written = written.and_then(|_| match &csv {
                Some(p) => std::fs::File::create(p)
                    .map_err(|e| e.to_string())
                    .and_then(|f| write_sweep_csv(&report, f).map_err(|e| e.to_string()))
                    .map_err(|e| format!("{}: {e}", p.display())),
                None => Ok(()),
            });
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            for s in &report.suites {
                eprintln!("{:<14} {:>4} pass {:>4} fail", s.suite, s.passed, s.failed);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Kernel { params, dir, steps, hbar } => {
            let dir = match dir {
                Dir::Hat => Direction::Hat,
                Dir::Bar => Direction::Bar,
            };
            print_kernel(
                LatticeParams::with_hbar(params[0], params[1], params[2], hbar)
                    .and_then(|lp| derive(&lp))
                    .and_then(|d| n_step_kernel(steps, dir, &d)),
            )
        }
        Command::Surface { file, tol } => {
            let surface = std::fs::read_to_string(&file)
                .map_err(|e| format!("{}: {e}", file.display()))
                .and_then(|t| serde_json::from_str::<SurfaceJson>(&t).map_err(|e| format!("malformed surface: {e}")));
            match surface {
                Ok(s) => print_kernel(s.kernel(tol)),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
