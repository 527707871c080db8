use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bjortho::cli::{error_exit_code, run_check, run_gamma, Relation};
use bjortho::demo::demo_l2;
use bjortho::error::Error;
use bjortho::io::read_matrix_file;
use bjortho::report::exit_code;
use bjortho::suite::{run_suite, SuiteConfig};
use bjortho::tol::Config;

#[derive(Parser)]
#[command(name = "bjortho", version, about = "Birkhoff-James orthogonality checks for complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a relation between two matrices; exit 0 true, 1 false, 2 uncertain
    Check {
        #[arg(value_enum)]
        relation: Relation,
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        /// Witness acceptance tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = Config::default().seed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Best approximation scalar minimizing ‖T + γS‖
    Gamma {
        t: PathBuf,
        s: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Seeded property suite; exit 0 iff nothing fails
    Suite {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 0.3])]
        eps_grid: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Truncations of diag(k/(k+1)) on l2 against e1 e1*
    #[command(name = "demo-l2")]
    DemoL2 {
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

fn config(tol: Option<f64>, seed: u64) -> Config {
    let mut cfg = Config::with_seed(seed);
    if let Some(t) = tol {
        cfg.tol.witness_tol = t;
    }
    cfg
}

/// Writes to stdout; a closed pipe is not an error for a report printer.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_exit_code(e) as u8)
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Check {
            relation,
            x,
            y,
            eps,
            tol,
            seed,
            json,
        } => {
            let x = read_matrix_file(&x)?;
            let y = read_matrix_file(&y)?;
            let r = run_check(relation, &x, &y, eps, config(tol, seed))?;
            if json {
                emit(&format!("{}\n", r.to_json()));
            } else {
                emit(&r.human());
            }
            Ok(exit_code(r.status))
        }
        Command::Gamma { t, s, tol } => {
            let t = read_matrix_file(&t)?;
            let s = read_matrix_file(&s)?;
            let g = run_gamma(&t, &s, config(tol, Config::default().seed))?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&g).expect("report serializes")));
            Ok(0)
        }
        Command::Suite {
            dim,
            trials,
            seed,
            eps_grid,
            json,
        } => {
            let mut cfg = SuiteConfig::new(dim, trials, seed);
            cfg.eps_grid = eps_grid;
            let r = run_suite(&cfg)?;
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&r).expect("report serializes")));
            } else {
                emit(&r.human());
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::DemoL2 { n, json } => {
            let r = demo_l2(n, &Config::default().tol)?;
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&r).expect("report serializes")));
            } else {
                emit(&format!(
                    "N = {}\n‖T_N‖ = {} (N/(N+1) = {})\nstrong verdict: {}, witness e_{} (error {:e})\nspectral gap = {:e} (N/(N+1) - (N-1)/N = {:e})\n",
                    r.n,
                    r.norm,
                    r.expected_norm,
                    r.status.as_str(),
                    r.witness_index,
                    r.witness_error,
                    r.gap,
                    r.expected_gap
                ));
            }
            Ok(exit_code(r.status))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => fail(&e),
    }
}
