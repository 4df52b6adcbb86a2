//! The `n3l` command line.
//!
//! Machine output goes to stdout, diagnostics to stderr. Exit codes: 0 on
//! success, 1 on usage, IO or domain errors, 2 when `verify` finds a
//! collinear triple.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{compare_table, parse_sources, to_csv, BoundsRow, Source};
use crate::claims::{run_claim, ClaimId};
use crate::constructions::{best_sphere, erdos_report, fixed_sphere, greedy, paper_construction, CenterStrategy};
use crate::error::{Error, Result};
use crate::geometry::{verify_no_three, RationalVector, Verdict};
use crate::pointfile::{read_points_file, write_points_file};
use crate::rational::{parse_rational, parse_rational_list};
use crate::solver::{exact_max, SolveOptions};

#[derive(Parser, Debug)]
#[command(name = "n3l", version, about = "No-three-in-line verification, solving, constructions and claim checks")]
pub struct Cli {
    /// Worker threads for parallel stages [default: available cores]
    #[arg(long, global = true, env = "N3L_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a points file for collinear triples (exit 0 pass, 2 fail)
    Verify {
        /// Points file
        #[arg(long)]
        input: PathBuf,
        /// Expected dimension
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Exact maximum of a no-three-in-line set in {1..n}^d
    Solve {
        /// Grid side
        #[arg(long)]
        n: u64,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Stop after this many seconds and report the best set found
        #[arg(long)]
        time_limit: Option<f64>,
        /// Restrict the first cell to a fundamental domain of the symmetry group
        #[arg(long)]
        symmetry: bool,
        /// Report wall time in "time_ms" (otherwise 0, keeping output reproducible)
        #[arg(long)]
        timing: bool,
        /// Also write the witness to this points file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a verified no-three-in-line set
    Construct {
        /// Construction method
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Grid side
        #[arg(long)]
        n: u64,
        /// Dimension
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Shuffle seed for greedy (0 = lexicographic order)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sphere center as comma-separated rationals, e.g. "7/2,7/2"
        #[arg(long)]
        center: Option<String>,
        /// Squared sphere radius p/q (needs --center)
        #[arg(long, requires = "center")]
        r2: Option<String>,
        /// Write the points to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive counterexample search for a compression claim
    Claims {
        /// Claim to check
        #[arg(long, value_enum)]
        claim: ClaimArg,
        /// Largest coordinate in the domain
        #[arg(long)]
        max_coord: Option<u64>,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Compression scale m as p/q
        #[arg(long, default_value = "1")]
        scale: String,
        /// Grid side for gapshell [default: --max-coord]
        #[arg(long)]
        n: Option<u64>,
        /// Comma-separated scalars for cornerstone [default: -2,-1,-1/2,1/2,1,2]
        #[arg(long)]
        lambdas: Option<String>,
    },
    /// Claimed bound and reference bounds for one (n, d) as JSON
    Bound {
        /// Grid side
        #[arg(long)]
        n: u64,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Comma-separated sources for the best column: exact,sphere,erdos,greedy,paper
        #[arg(long, default_value = "")]
        sources: String,
    },
    /// Bound table over a range of n
    Table {
        /// First grid side
        #[arg(long)]
        n_from: u64,
        /// Last grid side
        #[arg(long)]
        n_to: u64,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// Comma-separated sources: exact,sphere,erdos,greedy,paper
        #[arg(long)]
        sources: String,
        /// Output format
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Sphere,
    Erdos,
    Greedy,
    Paper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClaimArg {
    Involution,
    Decider,
    Ballnest,
    Admissible,
    Cornerstone,
    Gapshell,
}

impl From<ClaimArg> for ClaimId {
    fn from(c: ClaimArg) -> Self {
        match c {
            ClaimArg::Involution => ClaimId::Involution,
            ClaimArg::Decider => ClaimId::Decider,
            ClaimArg::Ballnest => ClaimId::Ballnest,
            ClaimArg::Admissible => ClaimId::Admissible,
            ClaimArg::Cornerstone => ClaimId::Cornerstone,
            ClaimArg::Gapshell => ClaimId::Gapshell,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// What a command produced: text for stdout and an exit code.
struct Output {
    stdout: String,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn execute(cmd: Command, threads: usize) -> Result<Output> {
    match cmd {
        Command::Verify { input, dim } => {
            let set = read_points_file(&input, dim)?;
            Ok(match verify_no_three(&set) {
                Verdict::Pass => Output::ok(format!("PASS {} points\n", set.len())),
                Verdict::Fail([a, b, c]) => Output { stdout: format!("FAIL {a} {b} {c}\n"), code: 2 },
            })
        }
        Command::Solve { n, d, time_limit, symmetry, timing, out } => {
            let time_limit = match time_limit {
                Some(s) if !(s >= 0.0 && s.is_finite()) => {
                    return Err(Error::Domain(format!("--time-limit must be a nonnegative number, got {s}")))
                }
                s => s.map(Duration::from_secs_f64),
            };
            let opts = SolveOptions { time_limit, threads, symmetry_reduction: symmetry };
            let r = exact_max(n, d, &opts)?;
            if let Some(path) = &out {
                write_points_file(path, &r.witness)?;
            }
            let ms = if timing { r.time_ms } else { 0 };
            Ok(Output::ok(pretty(&r.to_json(path_str(&out).as_deref(), ms))))
        }
        Command::Construct { method, n, d, seed, center, r2, out } => {
            let report = match method {
                MethodArg::Sphere => {
                    let center = center.map(|c| parse_rational_list(&c).and_then(RationalVector::new)).transpose()?;
                    match (center, r2) {
                        (Some(c), Some(r2)) => fixed_sphere(n, d, &c, &parse_rational(&r2)?)?,
                        (Some(c), None) => best_sphere(n, d, &CenterStrategy::FixedCenter(c))?,
                        (None, _) => best_sphere(n, d, &CenterStrategy::CenterScan)?,
                    }
                }
                MethodArg::Erdos => {
                    if d != 2 {
                        return Err(Error::Domain(format!("the erdos construction is planar, got d={d}")));
                    }
                    erdos_report(n)?
                }
                MethodArg::Greedy => greedy(n, d, seed)?,
                MethodArg::Paper => paper_construction(n, d)?,
            };
            if let Some(path) = &out {
                write_points_file(path, &report.points)?;
            }
            Ok(Output::ok(pretty(&report.to_json(path_str(&out).as_deref()))))
        }
        Command::Claims { claim, max_coord, d, scale, n, lambdas } => {
            let claim = ClaimId::from(claim);
            let max_coord = match (max_coord, claim, n) {
                (Some(k), _, _) => k,
                (None, ClaimId::Gapshell, Some(n)) => n,
                _ => return Err(Error::ContractViolation("--max-coord is required".into())),
            };
            let m = parse_rational(&scale)?;
            let lambdas = lambdas.map(|l| parse_rational_list(&l)).transpose()?;
            let report = run_claim(claim, d, max_coord, m, n, lambdas.as_deref())?;
            let mut s = report.to_json();
            s.push('\n');
            Ok(Output::ok(s))
        }
        Command::Bound { n, d, sources } => {
            let sources = parse_sources(&sources)?;
            let row = if sources.is_empty() {
                BoundsRow::reference(n, d)?
            } else {
                compare_table([n], d, &sources)?.remove(0)
            };
            Ok(Output::ok(pretty(&row.to_json())))
        }
        Command::Table { n_from, n_to, d, sources, format } => {
            if n_from > n_to {
                return Err(Error::ContractViolation(format!("--n-from {n_from} exceeds --n-to {n_to}")));
            }
            let sources: Vec<Source> = parse_sources(&sources)?;
            let rows = compare_table(n_from..=n_to, d, &sources)?;
            Ok(Output::ok(match format {
                TableFormat::Csv => to_csv(&rows),
                TableFormat::Json => pretty(&serde_json::Value::Array(rows.iter().map(BoundsRow::to_json).collect())),
            }))
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli
        .threads
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("n3l: thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(cli.command, threads)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 1;
            }
            out.code
        }
        Err(e) => {
            eprintln!("n3l: {e}");
            1
        }
    }
}
