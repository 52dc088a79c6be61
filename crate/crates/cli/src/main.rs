//! `windtree`: surface checks, representations, kernel search and diffusion
//! runs, each writing versioned JSON/CSV artifacts plus a run manifest.

mod artifact;
mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "windtree", version, about = "Wind-tree Veech group kernels and diffusion experiments")]
pub struct Cli {
    /// Seed for every randomised choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving artifacts and manifests; also the default place
    /// inputs are read from.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or validate a square-tiled surface file.
    #[command(subcommand)]
    Surface(SurfaceCommand),
    /// Veech generators, their (co)homology action and restricted representations.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Kernel words, the commutator chain, and fixed-direction gaps.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Billiard run in one direction, or in every kernel eigen-direction.
    Diffuse(DiffuseArgs),
    /// Seeded generic directions.
    Scan(ScanArgs),
    /// Pairing of the strip cycles against the cover classes.
    RankCheck(TableArgs),
    /// Consolidated table of kernel directions against generic slopes.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Obstacle sides `a,b`, rationals in (0, 1).
    #[arg(long, default_value = "1/2,1/2")]
    pub table: String,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCommand {
    /// Check a surface file and print its invariants.
    Validate { file: PathBuf },
    /// Write the wind-tree unfolding as `surface.json`.
    Build(TableArgs),
}

#[derive(Debug, Subcommand)]
pub enum RepCommand {
    /// Writes `rep.json`.
    Compute(RepArgs),
}

#[derive(Debug, Args)]
pub struct RepArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Use this surface instead of the wind-tree unfolding (needs `--seeds`).
    #[arg(long, requires = "seeds")]
    pub surface: Option<PathBuf>,
    /// Cohomology classes, in dual coordinates of the computed homology basis.
    #[arg(long, requires = "surface")]
    pub seeds: Option<PathBuf>,
    #[arg(long, default_value_t = windtree::setup::DEFAULT_SEARCH_BOUND)]
    pub search_bound: i64,
}

#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// Writes `kernel.json`.
    Search {
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// 1-based subspace, or 0 for the intersection of all kernels.
        #[arg(long, default_value_t = 0)]
        subspace: usize,
    },
    /// Writes `chain.json`.
    Chain {
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        sample_len: usize,
        #[arg(long, default_value_t = windtree::kernel::DEFAULT_CONJUGATOR_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = windtree::kernel::DEFAULT_STAGE_LIMIT)]
        stage_limit: usize,
    },
    /// Writes `gaps.json`.
    Gaps {
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Comma-separated conjugator budgets.
        #[arg(long, default_value = "2,4,6")]
        budget: String,
    },
}

#[derive(Debug, Args)]
pub struct DiffuseArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Direction angle in radians.
    #[arg(long, conflicts_with = "kernel", required_unless_present = "kernel")]
    pub direction: Option<f64>,
    /// Run every distinct expanding direction of the hyperbolic words in this file.
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    #[arg(long)]
    pub rep: Option<PathBuf>,
    #[arg(long, default_value_t = 1e7)]
    pub horizon: f64,
    /// Start point `x,y` in cell (0, 0); drawn from the seed when absent.
    #[arg(long)]
    pub start: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub table: TableArgs,
    #[arg(long, default_value_t = 64)]
    pub count: usize,
    #[arg(long, default_value_t = 1e7)]
    pub horizon: f64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding the prior artifacts; defaults to `--out-dir`.
    #[arg(long)]
    pub artifacts: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
