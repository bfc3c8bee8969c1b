//! The `entrolab` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a check failed (an
//! addition identity violated, a counting inequality broken, a selftest
//! expectation missed), 3 inconclusive under `--strict-inconclusive`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::entropy::h_estimate;
use crate::error::{Error, Result};
use crate::harness::Verdict;
use crate::scenario::{selftest, Overrides, Scenario, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "entrolab", version, about = "Algebraic entropy of endomorphisms of locally finite groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Largest trajectory length.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Number of trailing equal ratios required for stabilization.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Maximum size of a set product.
    #[arg(long, global = true)]
    product_budget: Option<usize>,
    /// Maximum size of a generated subgroup.
    #[arg(long, global = true)]
    closure_budget: Option<usize>,
    /// Seed for the sampled homomorphism and quotient checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with 3 when a result is inconclusive.
    #[arg(long, global = true)]
    strict_inconclusive: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trajectory sizes of F as CSV.
    Entropy { scenario: String },
    /// Per-rung estimates along the scenario's ladder, as JSON.
    Ladder { scenario: String },
    /// Central and derived series of the base table, as JSON.
    Series { scenario: String },
    /// Addition identity check, as JSON.
    AtCheck { scenario: String },
    /// Counting certificate for a central kernel, as JSON.
    DaggerCheck { scenario: String },
    /// Runs the bundled scenario suite.
    Selftest,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut out, &mut err)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    configure_threads();
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "entrolab: {e}");
            EXIT_ERROR
        }
    }
}

/// Caps the rayon pool at `ENTROLAB_THREADS`, if set.
fn configure_threads() {
    if let Some(n) = std::env::var("ENTROLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn overrides(g: &Global) -> Overrides {
    Overrides {
        n_max: g.n_max,
        window: g.window,
        product_budget: g.product_budget,
        closure_budget: g.closure_budget,
        seed: g.seed,
    }
}

fn emit(g: &Global, scenario_out: Option<&str>, text: &str, out: &mut dyn Write) -> Result<()> {
    let path = g.out.clone().or_else(|| scenario_out.map(PathBuf::from));
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn inconclusive(g: &Global) -> i32 {
    if g.strict_inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let o = overrides(g);
    if let Command::Selftest = cli.command {
        let report = selftest(&o)?;
        emit(g, None, &json(&report)?, out)?;
        return Ok(match report.status {
            Status::Pass => EXIT_OK,
            Status::Inconclusive => inconclusive(g),
            Status::Fail => EXIT_VIOLATION,
        });
    }
    let path = match &cli.command {
        Command::Entropy { scenario }
        | Command::Ladder { scenario }
        | Command::Series { scenario }
        | Command::AtCheck { scenario }
        | Command::DaggerCheck { scenario } => scenario,
        Command::Selftest => unreachable!(),
    };
    let s = Scenario::load(path)?;
    let lim = s.limits(&o);
    let dest = s.file.out.as_deref();
    match &cli.command {
        Command::Entropy { .. } => {
            let table = s.trajectory(&lim)?;
            // a table shorter than the window still gets printed, without alpha
            let alpha = match h_estimate(&table, lim.window) {
                Ok(est) => est.stabilized_ratio,
                Err(Error::TableTooShort { .. }) => None,
                Err(e) => return Err(e),
            };
            emit(g, dest, &entropy_csv(&table.sizes, alpha)?, out)?;
            Ok(if table.is_truncated() && alpha.is_none() { inconclusive(g) } else { EXIT_OK })
        }
        Command::Ladder { .. } => {
            let r = s.ladder_report(&lim)?;
            emit(g, dest, &json(&r)?, out)?;
            Ok(if r.truncated && !r.all_stabilized { inconclusive(g) } else { EXIT_OK })
        }
        Command::Series { .. } => {
            emit(g, dest, &json(&s.series(&lim)?)?, out)?;
            Ok(EXIT_OK)
        }
        Command::AtCheck { .. } => {
            let r = s.at(&lim)?;
            emit(g, dest, &json(&r)?, out)?;
            Ok(match r.verdict {
                Verdict::Violation => EXIT_VIOLATION,
                Verdict::Inconclusive => inconclusive(g),
                _ => EXIT_OK,
            })
        }
        Command::DaggerCheck { .. } => {
            let c = s.dagger(&lim)?;
            emit(g, dest, &json(&c)?, out)?;
            Ok(if !c.holds {
                EXIT_VIOLATION
            } else if c.truncated {
                inconclusive(g)
            } else {
                EXIT_OK
            })
        }
        Command::Selftest => unreachable!(),
    }
}

/// Columns `n,size,log_size,prefix_inf,increment,stabilized_alpha`;
/// `prefix_inf` is the running minimum of `log_size / n`, and the last two
/// columns are empty where undefined.
pub fn entropy_csv(sizes: &[u64], alpha: Option<u64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "size", "log_size", "prefix_inf", "increment", "stabilized_alpha"])
        .map_err(io)?;
    let mut inf = f64::INFINITY;
    for (i, &size) in sizes.iter().enumerate() {
        let n = i + 1;
        let log = (size as f64).ln();
        inf = inf.min(log / n as f64);
        let inc = if i == 0 { String::new() } else { (size as f64 / sizes[i - 1] as f64).ln().to_string() };
        let a = alpha.map(|a| a.to_string()).unwrap_or_default();
        w.write_record([n.to_string(), size.to_string(), log.to_string(), inf.to_string(), inc, a])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}
