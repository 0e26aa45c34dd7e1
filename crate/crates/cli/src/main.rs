//! `lmr`: reproduce sharp constants, run verification suites and write scan
//! data for the inequality chains.
//!
//! Exit status is 0 on success, 1 on a numerical failure and 2 on a usage
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use lmr_core::apps::{self, Target};
use lmr_core::chains::{self, ChainId};
use lmr_core::roots::RootOptions;
use lmr_core::suites::{self, Suite, SuiteOptions};
use lmr_core::Error;

use lmr_cli::format_number;
use lmr_cli::report::ReproductionReport;

const NUMERICAL_FAILURE: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "lmr", version, about = "Sharp constants and inequality checks from L'Hospital-type monotonicity rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate a sharp constant and write a JSON report.
    Reproduce {
        #[arg(value_enum)]
        prop: Prop,
        /// Parameter, required for identric (2/3 < p < 1) and cusa (4/5 < p < 1).
        #[arg(long)]
        p: Option<f64>,
        /// Report path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bracket width at which root refinement stops.
        #[arg(long, default_value_t = RootOptions::default().tol_x)]
        tol_x: f64,
        /// Residual at which root refinement stops; scales with the initial
        /// bracket when omitted.
        #[arg(long)]
        tol_f: Option<f64>,
    },
    /// Run a verification suite and print one line per check.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Grid size for the inequality chains.
        #[arg(long, default_value_t = suites::DEFAULT_CHAIN_GRID)]
        grid: usize,
        /// Last index of the exact recursion check.
        #[arg(long, default_value_t = suites::DEFAULT_NMAX)]
        nmax: u64,
    },
    /// Write one comma-separated row per grid point: x, each chain member,
    /// and the smallest slack.
    Scan {
        /// Chain key, optionally with a parameter as `key:p`.
        chain: String,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Prop {
    Lin,
    Stolarsky,
    Identric,
    Cusa,
}

impl From<Prop> for Target {
    fn from(p: Prop) -> Target {
        match p {
            Prop::Lin => Target::Lin,
            Prop::Stolarsky => Target::Stolarsky,
            Prop::Identric => Target::Identric,
            Prop::Cusa => Target::Cusa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Series,
    Tables,
    Identities,
    Inequalities,
    Classifier,
    All,
}

/// A failure together with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parameter(_) | Error::Catalog(_) | Error::Precondition(_) => USAGE,
            _ => NUMERICAL_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure { code: NUMERICAL_FAILURE, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: message.into() }
}

fn write_output(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn reproduce(prop: Prop, p: Option<f64>, out: Option<&Path>, tol_x: f64, tol_f: Option<f64>) -> Result<(), Failure> {
    if !(tol_x > 0.0 && tol_x.is_finite()) {
        return Err(usage(format!("--tol-x must be positive, got {tol_x}")));
    }
    if let Some(t) = tol_f.filter(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(usage(format!("--tol-f must be nonnegative, got {t}")));
    }
    let target = Target::from(prop);
    let opts = RootOptions { tol_x, tol_f, ..RootOptions::default() };
    let start = Instant::now();
    let mut solved = apps::solve_with(target, p, &opts)?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let report = ReproductionReport::new(&solved, &opts, runtime_ms);
    write_output(out, &report.to_json())?;
    if !solved.converged {
        return Err(Failure {
            code: NUMERICAL_FAILURE,
            message: format!("{target}: root refinement did not converge, partial report written"),
        });
    }
    apps::check_chains(&mut solved)?;
    for c in &solved.chains {
        eprintln!("{}: {} violations on {} points, min slack {:e}", c.chain, c.violation_count, c.grid_n, c.min_slack);
    }
    Ok(())
}

fn verify(suite: SuiteArg, grid: usize, nmax: u64) -> Result<(), Failure> {
    if grid < chains::MIN_GRID {
        return Err(usage(format!("--grid must be at least {}, got {grid}", chains::MIN_GRID)));
    }
    if nmax < 2 {
        return Err(usage(format!("--nmax must be at least 2, got {nmax}")));
    }
    let list: Vec<Suite> = match suite {
        SuiteArg::Series => vec![Suite::Series],
        SuiteArg::Tables => vec![Suite::Tables],
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Inequalities => vec![Suite::Inequalities],
        SuiteArg::Classifier => vec![Suite::Classifier],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let opts = SuiteOptions { grid, nmax };
    let (mut passed, mut total) = (0, 0);
    let mut stdout = io::stdout().lock();
    for s in list {
        for check in suites::run(s, &opts) {
            writeln!(stdout, "{check}")?;
            total += 1;
            passed += usize::from(check.passed);
        }
    }
    writeln!(stdout, "{passed}/{total} checks passed")?;
    if passed == total {
        Ok(())
    } else {
        Err(Failure { code: NUMERICAL_FAILURE, message: format!("{} checks failed", total - passed) })
    }
}

fn scan(chain: &str, grid: usize, out: Option<&Path>) -> Result<(), Failure> {
    let (id, p) = ChainId::parse(chain)?;
    let c = chains::build(id, p)?;
    let table = c.scan(grid)?;
    let mut text = format!("# {}\n", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write_output(out, &text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Reproduce { prop, p, out, tol_x, tol_f } => reproduce(prop, p, out.as_deref(), tol_x, tol_f),
        Command::Verify { suite, grid, nmax } => verify(suite, grid, nmax),
        Command::Scan { chain, grid, out } => scan(&chain, grid, out.as_deref()),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
