//! `esk`: generate extremal sequences, search for higher-order monotone
//! subsets, and run the exact verifiers from the command line.
//!
//! Exit status: 0 on success, 1 when a verification finds a violation,
//! 2 on usage, input or configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use esk::bounds::known_bounds;
use esk::coloring::{geometric_coloring, transitivity_witness, Coloring, ColoringFile, Strength};
use esk::construction::{generate_extremal_with, verify_construction, ClusteredSet, GenerationConfig, VerifyMode};
use esk::lifts::{check_lift_identity, max_one_sided_subset, HyperplaneFamily};
use esk::par::Exec;
use esk::search::longest_kth_order_monotone;
use esk::PointSequence;

#[derive(Parser)]
#[command(name = "esk", version, about = "Higher-order monotone subsets with exact arithmetic")]
struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Build generation n of the recursive construction.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: PathBuf,
        /// Refuse to build more points than this.
        #[arg(long, default_value_t = esk::construction::DEFAULT_MAX_POINTS)]
        max_points: usize,
    },
    /// Largest kth-order monotone subset of a sequence.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a generated set against the sign-by-type table.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a transitivity violation in a coloring or a sign coloring.
    Transitivity {
        /// Order of the sign coloring; required for point sequences.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare divided-difference signs with lifted orientations.
    LiftCheck {
        #[arg(long)]
        d: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hyperplane family of a sequence and its largest one-sided subfamily.
    Hyperplanes {
        #[arg(long)]
        d: usize,
        #[arg(long = "in")]
        input: PathBuf,
        /// Where to write the family itself.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Known bounds on the Erdős–Szekeres numbers.
    Bounds {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    /// The report was produced and records a violation.
    Violation,
}

impl From<esk::Error> for Failure {
    fn from(e: esk::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(value: Value, path: &Path) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A plain sequence file or the points of a generated set.
fn read_sequence(path: &Path) -> Result<PointSequence, Failure> {
    let value = read_json(path)?;
    if value.get("cluster_of").is_some() {
        Ok(parse::<ClusteredSet>(value, path)?.points().clone())
    } else {
        parse(value, path)
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Prints the report and mirrors it to `out` when given.
fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Outcome {
    println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
    match out {
        Some(path) => write_json(report, path),
        None => Ok(()),
    }
}

fn verify_mode(mode: Mode, samples: usize, seed: Option<u64>) -> Result<VerifyMode, Failure> {
    match (mode, seed) {
        (Mode::Exhaustive, _) => Ok(VerifyMode::Exhaustive),
        (Mode::Sampled, Some(seed)) => Ok(VerifyMode::Sampled { count: samples, seed }),
        (Mode::Sampled, None) => Err(Failure::Usage("sampled mode needs an explicit --seed".into())),
    }
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Generate { n, out, max_points } => {
            let config = GenerationConfig { max_points, ..GenerationConfig::default() };
            let cs = generate_extremal_with(n, &config)?;
            write_json(&cs, &out)?;
            emit(
                &json!({
                    "generation": cs.params().generation,
                    "points": cs.len(),
                    "clusters": cs.cluster_count(),
                    "a_by_generation": cs.params().a_by_generation.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                None,
            )
        }
        Command::Search { k, input, out } => {
            let seq = read_sequence(&input)?;
            let result = longest_kth_order_monotone(&seq, k)?;
            emit(&json!({"k": k, "points": seq.len(), "result": result}), out.as_deref())
        }
        Command::Verify { input, mode, samples, seed, out } => {
            let mode = verify_mode(mode, samples, seed)?;
            let cs: ClusteredSet = parse(read_json(&input)?, &input)?;
            let report = verify_construction(&cs, mode)?;
            emit(&report, out.as_deref())?;
            verdict(report.passed)
        }
        Command::Transitivity { k, input, out } => {
            let value = read_json(&input)?;
            let c = if value.get("colors").is_some() {
                Coloring::from_file(&parse::<ColoringFile>(value, &input)?)?
            } else {
                let k = k.ok_or_else(|| Failure::Usage("--k is required for point sequences".into()))?;
                let seq = match value.get("cluster_of") {
                    Some(_) => parse::<ClusteredSet>(value, &input)?.points().clone(),
                    None => parse::<PointSequence>(value, &input)?,
                };
                geometric_coloring(&seq, k)?
            };
            let witness = transitivity_witness(&c, Strength::Full);
            emit(
                &json!({
                    "ground_size": c.ground_size(),
                    "arity": c.arity(),
                    "transitive": witness.is_none(),
                    "witness": witness,
                }),
                out.as_deref(),
            )?;
            verdict(witness.is_none())
        }
        Command::LiftCheck { d, input, mode, samples, seed, out } => {
            let mode = verify_mode(mode, samples, seed)?;
            let seq = read_sequence(&input)?;
            let report = check_lift_identity(&seq, d, mode, Exec::default())?;
            emit(&report, out.as_deref())?;
            verdict(report.passed)
        }
        Command::Hyperplanes { d, input, out } => {
            let seq = read_sequence(&input)?;
            let family = HyperplaneFamily::from_sequence(&seq, d)?;
            let best = max_one_sided_subset(&family)?;
            if let Some(path) = out.as_deref() {
                write_json(&family, path)?;
            }
            emit(&json!({"d": d, "hyperplanes": family.len(), "max_one_sided": best}), None)
        }
        Command::Bounds { k, n, out } => emit(&known_bounds(k, n)?, out.as_deref()),
    }
}

fn configure_workers(workers: usize) -> Outcome {
    if workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Failure::Usage(format!("worker pool: {e}")))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_workers(cli.workers).and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("esk: {message}");
            ExitCode::from(2)
        }
    }
}
