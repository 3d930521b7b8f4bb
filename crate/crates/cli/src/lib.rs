//! The `memsfront` command line: measure states, emit frontier/envelope/scatter
//! CSV, run the verification sweeps and print the crossing table.

pub mod figures;
pub mod output;
pub mod statefile;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use memsfront::frontier::{crossing_table, frontier_curve, Plane};
use memsfront::mcverify::{self, CheckReport, RankPolicy};
use memsfront::measures::measure_all;
use memsfront::measures::MeasureVector;

pub use output::{fmt_num, CsvTable};
pub use statefile::{parse_state, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Library(#[from] memsfront::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Library(memsfront::Error::Solver { .. }) => EXIT_SOLVER,
            CliError::Library(_) => EXIT_USAGE,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "memsfront", version, about = "Entanglement-versus-mixedness frontiers for two qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print every measure of the state in a state file as key=value lines.
    Measure { statefile: PathBuf },
    /// Frontier curve on a uniform mixedness grid of STEPS+1 points.
    Frontier {
        #[arg(long, value_parser = parse_plane)]
        plane: Plane,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Von Neumann vs linear entropy boundary, all four segments.
    Envelope {
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random states with their measures.
    Scatter {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Fix the rank instead of drawing it uniformly from 1..=4.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        rank: Option<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exit status 2 on any violation.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Sample size; each suite has its own default.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Solve every branch crossing and separability threshold.
    Crossings,
    /// Dataset underlying one of the figures (1..=12).
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        id: u8,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, default_value_t = 5_000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Frontier, envelope and concurrence–negativity bounds against random states.
    Dominance,
    /// Partial-transpose spectra: at most one negative eigenvalue, Bell-diagonal formula.
    Appendix,
    /// Existence of ordering reversals between measures.
    Ordering,
    /// Closed forms on X-form states: LS weight, concurrence, negativity.
    Ls,
    All,
}

impl Suite {
    fn default_n(self) -> usize {
        match self {
            Suite::Dominance | Suite::Appendix => 100_000,
            Suite::Ordering => 1_000,
            Suite::Ls => 10_000,
            Suite::All => 0,
        }
    }
}

fn parse_plane(s: &str) -> Result<Plane, String> {
    s.parse().map_err(|e: memsfront::frontier::UnknownPlane| e.to_string())
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
/// Diagnostics go to stderr, results to stdout or the `--out` file.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli.command, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("memsfront: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Measure { statefile } => {
            let text = std::fs::read_to_string(&statefile)
                .map_err(|source| CliError::Io { path: statefile.clone(), source })?;
            let rho = parse_state(&text).map_err(|source| CliError::Parse { path: statefile, source })?;
            let mv = measure_all(&rho);
            for (name, v) in MeasureVector::NAMES.iter().zip(mv.values()) {
                writeln_io(stdout, &format!("{name}={}", fmt_num(v)))?;
            }
            Ok(())
        }
        Command::Frontier { plane, steps, out } => {
            check_steps(steps)?;
            let points = frontier_curve(plane, steps)?;
            emit(output::frontier_table(plane, &points), out.as_deref(), stdout)
        }
        Command::Envelope { steps, out } => {
            check_steps(steps)?;
            emit(output::envelope_table(steps)?, out.as_deref(), stdout)
        }
        Command::Scatter { n, seed, rank, out } => {
            let policy = rank.map_or(RankPolicy::Uniform, |k| RankPolicy::Fixed(k as usize));
            let records = mcverify::scatter(n, seed, policy)?;
            emit(output::scatter_table(&records), out.as_deref(), stdout)
        }
        Command::Verify { suite, n, seed } => verify(suite, n, seed, stdout),
        Command::Crossings => {
            let t = crossing_table()?;
            for line in output::crossing_lines(&t) {
                writeln_io(stdout, &line)?;
            }
            Ok(())
        }
        Command::Figure { id, steps, n, seed, out } => {
            check_steps(steps)?;
            let table = figures::figure(id, steps, n, seed)?;
            emit(table, out.as_deref(), stdout)
        }
    }
}

fn check_steps(steps: usize) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    Ok(())
}

fn writeln_io(w: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(w, "{line}").map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

fn emit(table: CsvTable, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, table.render())
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => stdout
            .write_all(table.render().as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn verify(suite: Suite, n: Option<usize>, seed: u64, stdout: &mut dyn Write) -> Result<(), CliError> {
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Dominance, Suite::Appendix, Suite::Ordering, Suite::Ls],
        _ => std::slice::from_ref(&suite),
    };
    let mut failed = Vec::new();
    for &s in suites {
        let n = n.unwrap_or(s.default_n());
        if n < 2 {
            return Err(CliError::Usage("--n must be at least 2".into()));
        }
        let lines = run_suite(s, n, seed)?;
        for (passed, line) in lines {
            writeln_io(stdout, &line)?;
            if !passed {
                failed.push(line.split_whitespace().nth(1).unwrap_or("?").to_string());
            }
        }
    }
    if failed.is_empty() {
        writeln_io(stdout, "verify: PASS")
    } else {
        writeln_io(stdout, &format!("verify: FAIL ({})", failed.join(", ")))?;
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn report(r: CheckReport) -> (bool, String) {
    (r.passed(), r.to_string())
}

const DOMINANCE_TOL: f64 = mcverify::DOMINANCE_TOL;

fn run_suite(suite: Suite, n: usize, seed: u64) -> Result<Vec<(bool, String)>, CliError> {
    let mut out = Vec::new();
    match suite {
        Suite::Dominance => {
            let records = mcverify::scatter(n, seed, RankPolicy::Uniform)?;
            for plane in [Plane::EfSl, Plane::NSl, Plane::EfSv, Plane::NSv] {
                out.push(report(mcverify::check_dominance(&records, plane, DOMINANCE_TOL, Some(seed))?));
            }
            // the E_R planes are checked on the X-form families, where E_R has a closed form
            let sweep = (n / 10).max(1);
            for plane in [Plane::ErSl, Plane::ErSv] {
                out.push(report(mcverify::check_er_dominance(sweep, seed, plane, DOMINANCE_TOL)?));
            }
            out.push(report(mcverify::check_envelope(&records, DOMINANCE_TOL, Some(seed))?));
            out.push(report(mcverify::check_cn_bounds(&records, DOMINANCE_TOL, Some(seed))?));
        }
        Suite::Appendix => {
            let records = mcverify::scatter(n, seed, RankPolicy::Uniform)?;
            let (count, formula) = mcverify::check_pt_negative_count(&records, Some(seed))?;
            out.push(report(count));
            out.push(report(formula));
            out.push(report(mcverify::check_bell_diagonal_pt((n / 100).max(1), seed)?));
        }
        Suite::Ordering => {
            let records = mcverify::scatter(n, seed, RankPolicy::Uniform)?;
            let r = mcverify::check_ordering_violations(&records, Some(seed))?;
            out.push((r.passed(), r.to_string()));
        }
        Suite::Ls => {
            out.push(report(mcverify::check_ls_identity(n, seed)?));
            out.push(report(mcverify::check_x_concurrence(n, seed)?));
            out.push(report(mcverify::check_x_negativity(n, seed)?));
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
    Ok(out)
}

/// Applies `MEMSFRONT_THREADS` to the global worker pool, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("MEMSFRONT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("MEMSFRONT_THREADS={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))
}
