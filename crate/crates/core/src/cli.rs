//! Command-line surface: `rank`, `query`, `conflict`, `verify` and `bench`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::fast;
use crate::graph::{CompletePath, EvidenceGraph};
use crate::io::{self, ConflictReport, Format, LoadError, LoadedGraph, PathReport};
use crate::oracle::{oracle_combine_capped, oracle_report, MAX_ORACLE_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TOTAL_CONFLICT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Agreement required between the fast evaluation and the oracle.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "pathbelief",
    version,
    about = "Support and plausibility of paths through an evidence DAG"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank every path by support.
    Rank {
        file: PathBuf,
        /// Only print the best K paths.
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Support and plausibility of one path.
    Query {
        file: PathBuf,
        /// Bit string, leftmost character is vertex 1, '1' = on the path.
        #[arg(long)]
        path: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Total conflict and its per-edge contributions.
    Conflict {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compare the fast evaluation against brute-force combination.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Verify random graphs instead of a file.
        #[arg(long, requires = "n")]
        random: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest graph the oracle will accept.
        #[arg(long, default_value_t = MAX_ORACLE_N)]
        oracle_cap: usize,
        /// Perturb every fast support by this amount (exercises the mismatch path).
        #[arg(long, hide = true)]
        corrupt: Option<f64>,
    },
    /// Time single-path support on the full path for a range of graph sizes.
    Bench {
        #[arg(long, default_value_t = 14)]
        n_min: usize,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Belief(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Belief(Error::TotalConflict) => EXIT_TOTAL_CONFLICT,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(file: &PathBuf, err: &mut dyn Write) -> Result<LoadedGraph, CliError> {
    let loaded = io::load(file)?;
    for w in &loaded.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(loaded)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = match command {
        Command::Rank { file, top, format } => {
            let loaded = load(&file, err)?;
            let ranking = fast::rank_paths(&loaded.graph, top)?;
            PathReport::new(ranking.conflict, &ranking.paths, &loaded.warnings).render(format)
        }
        Command::Query { file, path, format } => {
            let loaded = load(&file, err)?;
            let g = &loaded.graph;
            let path: CompletePath = path.parse()?;
            if path.n() != g.n() {
                return Err(Error::PathLength {
                    expected: g.n(),
                    got: path.n(),
                }
                .into());
            }
            let table = fast::conflict(g);
            let belief = fast::path_belief(g, &table, &path)?;
            PathReport::new(table.k(), &[belief], &loaded.warnings).render(format)
        }
        Command::Conflict { file, format } => {
            let loaded = load(&file, err)?;
            let table = fast::conflict(&loaded.graph);
            if table.is_total() {
                return Err(Error::TotalConflict.into());
            }
            ConflictReport::new(&table, &loaded.warnings).render(format)
        }
        Command::Verify {
            file,
            random,
            n,
            trials,
            seed,
            oracle_cap,
            corrupt,
        } => {
            let graphs = if random {
                let n = n.expect("clap enforces --n with --random");
                if n == 0 || n > oracle_cap {
                    return Err(CliError::Usage(format!(
                        "--n must lie in 1..={oracle_cap} for oracle verification"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..trials)
                    .map(|_| EvidenceGraph::random(n, 0.05, 0.95, &mut rng))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                let file = file.expect("clap enforces a file without --random");
                vec![load(&file, err)?.graph]
            };
            verify(&graphs, oracle_cap, corrupt.unwrap_or(0.0))?
        }
        Command::Bench {
            n_min,
            n_max,
            seed,
            format,
        } => {
            if n_min == 0 || n_min > n_max {
                return Err(CliError::Usage(
                    "bench needs 1 <= --n-min <= --n-max".into(),
                ));
            }
            let report = crate::bench::run(n_min, n_max, seed)?;
            match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serialisable") + "\n",
                Format::Csv => {
                    let mut s = String::from("n,seconds,spt_star\n");
                    for p in &report.points {
                        let _ = writeln!(s, "{},{:?},{:?}", p.n, p.seconds, p.spt_star);
                    }
                    s
                }
                Format::Table => {
                    let mut s = format!("{:>3}  {:>14}  {:>12}\n", "n", "seconds", "spt*");
                    for p in &report.points {
                        let _ =
                            writeln!(s, "{:>3}  {:>14.6e}  {:>12.6e}", p.n, p.seconds, p.spt_star);
                    }
                    let _ = writeln!(s, "log2(time) slope per vertex: {:.3}", report.log2_slope);
                    s
                }
            }
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    Ok(())
}

/// Largest deviation between fast and oracle reports over `graphs`.
fn verify(graphs: &[EvidenceGraph], oracle_cap: usize, corrupt: f64) -> Result<String, CliError> {
    let mut worst = 0.0f64;
    for g in graphs {
        let oracle = oracle_report(&oracle_combine_capped(g, oracle_cap)?)?;
        let mut fast = fast::evaluate_all(g)?;
        for b in &mut fast.paths {
            b.support += corrupt;
        }
        worst = worst.max(fast.max_abs_deviation(&oracle));
    }
    let summary = format!(
        "max |Δ| = {worst:.3e} over {} instance(s), tolerance {VERIFY_TOLERANCE:e}",
        graphs.len()
    );
    if worst <= VERIFY_TOLERANCE {
        Ok(format!("PASS, max |Δ| ≤ {VERIFY_TOLERANCE:e}\n{summary}\n"))
    } else {
        Err(CliError::Mismatch(format!("FAIL, {summary}")))
    }
}
