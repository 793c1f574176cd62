use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bott_cli::runner::{exit_code, run_case, run_suite, SuiteReport};
use bott_cli::{CaseSpec, SuiteConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bott",
    version,
    about = "Exact verification of K-theoretic identities in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adams-Riemann-Roch for P^n -> point, or P^m x P^n -> P^m with --m.
    VerifyArr {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        prime: u32,
        /// Split class, e.g. "2*h(-1) - 1*h(0)"; on P^m x P^n use h(a,b).
        #[arg(long)]
        bundle: String,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Basis count and graded dimensions of the truncated symmetric algebra.
    Tau {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        prime: u32,
        /// Include the direct-sum check split as rank = s + (rank - s).
        #[arg(long)]
        split: Option<u32>,
        /// Print only the graded dimensions.
        #[arg(long)]
        graded: bool,
    },
    /// Graded Frobenius algebra of A^r, or the conormal check on a hypersurface.
    Frobenius {
        #[arg(long)]
        vars: Option<u32>,
        #[arg(long)]
        prime: u32,
        /// Equation in the ambient variables, e.g. "y^2-x^3-x".
        #[arg(long)]
        hypersurface: Option<String>,
        /// Sample points, e.g. "(0,0);(2,1)".
        #[arg(long)]
        samples: Option<String>,
    },
    /// lambda_{-1}(Omega (x) H) against theta^l(Omega) modulo the regular representation.
    Equivariant {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        omega: String,
        #[arg(long, default_value = "p1")]
        ambient: String,
    },
    /// Run every case of a suite file.
    Suite {
        #[arg(long)]
        config: PathBuf,
        /// Report path; defaults to the config's `out`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Omit timing fields, producing a byte-stable report.
        #[arg(long)]
        no_timing: bool,
    },
}

/// Writes to stdout, treating a closed pipe as success.
fn print_out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: &SuiteReport, out: Option<&PathBuf>) -> Result<(), String> {
    let text = report.to_json();
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print_out(&text);
            Ok(())
        }
    }
}

fn single(spec: CaseSpec, json: Option<PathBuf>) -> Result<i32, String> {
    let report = run_case(&spec, true);
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    print_out(&format!("{text}\n"));
    if let Some(path) = json {
        std::fs::write(&path, format!("{text}\n"))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(exit_code(&SuiteReport::from_cases(vec![report])))
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::VerifyArr {
            n,
            m,
            prime,
            bundle,
            json,
        } => {
            let spec = match m {
                Some(m) => CaseSpec::ArrRelative {
                    id: None,
                    m,
                    n,
                    prime,
                    bundle,
                },
                None => CaseSpec::Arr {
                    id: None,
                    n,
                    prime,
                    bundle,
                },
            };
            single(spec, json)
        }
        Command::Tau {
            rank,
            prime,
            split,
            graded,
        } => {
            if graded {
                let dims =
                    bott_core::tau::tau_graded_dims(rank, prime).map_err(|e| e.to_string())?;
                print_out(&format!(
                    "{}\n",
                    serde_json::to_string(&dims).expect("dims serialize")
                ));
                return Ok(0);
            }
            single(
                CaseSpec::Tau {
                    id: None,
                    rank,
                    prime,
                    split,
                },
                None,
            )
        }
        Command::Frobenius {
            vars,
            prime,
            hypersurface,
            samples,
        } => single(
            CaseSpec::Frobenius {
                id: None,
                vars,
                prime,
                hypersurface,
                samples,
            },
            None,
        ),
        Command::Equivariant { l, omega, ambient } => single(
            CaseSpec::Equivariant {
                id: None,
                l,
                omega,
                ambient,
            },
            None,
        ),
        Command::Suite {
            config,
            out,
            jobs,
            no_timing,
        } => {
            let cfg = SuiteConfig::load(&config)?;
            let jobs = jobs.or(cfg.jobs).unwrap_or(1);
            let report = run_suite(&cfg, jobs, !no_timing)?;
            let out = out.or_else(|| cfg.out.as_ref().map(PathBuf::from));
            emit(&report, out.as_ref())?;
            let s = report.summary;
            eprintln!(
                "{} cases: {} passed, {} failed, {} errors",
                s.total, s.passed, s.failed, s.errors
            );
            Ok(exit_code(&report))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
