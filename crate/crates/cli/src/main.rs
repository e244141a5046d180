//! `mfe`: encode manifold functions, reconstruct fields, run convergence
//! studies and train operator-learning models, reproducibly.
//!
//! Exit codes: 0 success, 2 usage, 3 data/validation, 4 numerical
//! failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

mod commands;
mod errors;

#[derive(Parser)]
#[command(
    name = "mfe",
    about = "Spectral encoding of functions on simplicial manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a manifold function into a coefficient file.
    Encode(EncodeArgs),
    /// Sample a reconstruction field on a grid (CSV + PGM per block).
    Reconstruct(ReconstructArgs),
    /// Convergence-rate study against quadrature oracles.
    Study(StudyArgs),
    /// Shrinking-ball consistency deviations around a point.
    Consistency(ConsistencyArgs),
    /// Monte Carlo vs quadrature error study.
    McStudy(McStudyArgs),
    /// Generate an operator-learning dataset.
    GenData(GenDataArgs),
    /// Train the branch/trunk product network on a dataset.
    Train(TrainArgs),
    /// Mean relative L2 error of a checkpoint on a dataset.
    Evaluate(EvaluateArgs),
    /// Fit log-log slopes from a rate CSV.
    Report(ReportArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["mesh", "pointcloud"])))]
struct EncodeArgs {
    /// Mesh document (JSON) or point-cloud CSV.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Basis family.
    #[arg(long, value_parser = ["legendre", "fourier"])]
    family: String,
    /// Per-axis basis order.
    #[arg(long)]
    n: usize,
    /// Per-axis quadrature degree override (default: n + 2).
    #[arg(long)]
    degree: Option<usize>,
    /// Further mesh files for a joint encoding (one part per intrinsic
    /// dimension, measure-normalized).
    #[arg(long, num_args = 1.., conflicts_with_all = ["pointcloud", "measured"])]
    joint: Vec<PathBuf>,
    /// Measure-weighted encoding with lumped per-vertex masses.
    #[arg(long, conflicts_with = "pointcloud")]
    measured: bool,
    /// Monte Carlo encoding of a point-cloud CSV.
    #[arg(long, requires = "seed")]
    pointcloud: Option<PathBuf>,
    /// Seed tag recorded with Monte Carlo provenance.
    #[arg(long)]
    seed: Option<u64>,
    /// Ambient dimension for point-cloud CSVs without a value column.
    #[arg(long)]
    dim: Option<usize>,
    /// Output coefficient file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Encoded coefficient file.
    #[arg(long)]
    encoded: PathBuf,
    /// Grid resolution per axis (>= 2).
    #[arg(long)]
    grid: usize,
    /// Premultiply coefficients by the inverse H^s Gram matrix.
    #[arg(long)]
    s: Option<usize>,
    /// Apply log(max(1, value)) before writing outputs.
    #[arg(long)]
    log_transform: bool,
    /// Output prefix; writes <out>.<block>.csv and <out>.<block>.pgm.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, value_parser = ["legendre", "fourier"])]
    family: String,
    /// Sobolev order of the projection.
    #[arg(long)]
    s: usize,
    /// Comma-separated basis orders, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Test function: expsum, runge, periodic or poly:k.
    #[arg(long)]
    test_fn: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConsistencyArgs {
    /// Ball center, comma-separated coordinates.
    #[arg(long, value_delimiter = ',')]
    point: Vec<f64>,
    /// Ball radii, comma-separated.
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    /// Basis order.
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = ["legendre", "fourier"], default_value = "legendre")]
    family: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct McStudyArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    n: usize,
    /// Comma-separated sample counts.
    #[arg(long = "N-list", value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Number of seeded repetitions.
    #[arg(long)]
    seeds: usize,
    /// Base seed; repetition i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = ["legendre", "fourier"], default_value = "legendre")]
    family: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenDataArgs {
    #[arg(long, value_parser = ["poisson1d"])]
    problem: String,
    #[arg(long)]
    count: usize,
    /// Basis order used for the encoded inputs.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_parser = ["desk", "paper"])]
    preset: String,
    #[arg(long)]
    seed: u64,
    /// deterministic: bit-reproducible single-threaded reduction;
    /// fast: parallel reduction with unspecified summation order.
    #[arg(long, value_parser = ["deterministic", "fast"], default_value = "deterministic")]
    mode: String,
    /// Output checkpoint file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Rate CSV produced by the study command.
    #[arg(long)]
    csv: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(args) => commands::encode(args),
        Command::Reconstruct(args) => commands::reconstruct(args),
        Command::Study(args) => commands::study(args),
        Command::Consistency(args) => commands::consistency(args),
        Command::McStudy(args) => commands::mc_study(args),
        Command::GenData(args) => commands::gen_data(args),
        Command::Train(args) => commands::train(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Report(args) => commands::report(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}
