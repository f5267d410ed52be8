//! Command-line front end. Every run writes its outputs and a
//! `manifest.json` recording the parameters and SHA-256 digests, which
//! `rerun` replays and compares.

mod commands;
mod manifest;
mod plot;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sfdesign::error::Error;

pub use manifest::Outputs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED_CHECK: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sfdesign",
    version,
    about = "Space-filling designs for computer experiments"
)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a random, OA-based or Gram-Schmidt design.
    Gen(GenArgs),
    /// Build an orthogonal or nearly orthogonal Latin hypercube.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Optimize a design under a criterion.
    Search(SearchArgs),
    /// Report metrics of a design.
    Eval(EvalArgs),
    /// Scatter-matrix SVG of a design.
    Plot(PlotArgs),
    /// Check an orthogonal array's strength.
    VerifyOa(VerifyOaArgs),
    /// Check the (t, m, s)-net or sequence-prefix property.
    VerifyNet(VerifyNetArgs),
    /// Compute one discrepancy.
    Discrepancy(DiscrepancyArgs),
    /// Replicated mean-estimation variance under a sampling scheme.
    VarianceLab(VarianceLabArgs),
    /// Write an embedded table.
    DumpTable(DumpTableArgs),
    /// Replay a manifest and compare output digests.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    RandomLh,
    OaLh,
    GramSchmidt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Jitter {
    Random,
    Midpoint,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Orthogonal array file (oa-lh).
    #[arg(long)]
    pub oa: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "midpoint")]
    pub jitter: Jitter,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructCommand {
    /// Couple a small OLH with an orthogonal array.
    #[command(alias = "oa-coupling")]
    Lin2009 {
        /// Small OLH as a level CSV.
        #[arg(long)]
        b: PathBuf,
        /// Orthogonal array file; a Galois-field array is used when absent.
        #[arg(long)]
        oa: Option<PathBuf>,
    },
    /// Recursive sign-based construction.
    #[command(alias = "recursive")]
    Sun {
        #[arg(long)]
        c: u32,
        #[arg(long, value_enum, default_value = "odd")]
        parity: Parity,
    },
    /// `A⊗B + n₂·E⊗F` from sign matrices A, F and level designs B, E.
    #[command(alias = "kronecker")]
    Kron {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Append the `-n₁·A⊗B + E⊗F` block (needs n₁ = n₂).
        #[arg(long)]
        augmented: bool,
    },
    /// Four successive doublings of an OLH.
    #[command(alias = "doubling")]
    Double {
        #[arg(long)]
        b: PathBuf,
        /// Hadamard matrix CSV; built from the run size when absent.
        #[arg(long)]
        hadamard: Option<PathBuf>,
    },
    /// Block Kronecker product of a sign matrix with designs.
    #[command(alias = "block-kronecker")]
    Bingham {
        /// Sign matrix CSV; a Hadamard matrix of `--order` when absent.
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        order: Option<usize>,
        /// One design per column of A, or a single design for all.
        #[arg(long = "d", required = true, num_args = 1..)]
        d: Vec<PathBuf>,
    },
    /// The implemented construction with the most columns for `n` runs.
    Best {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Anneal,
    Cp,
    Ta,
    Maximin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveName {
    PhiQ,
    RhoAveSq,
    RhoMax,
    AudzeEglais,
    Dmin2,
    Cl2,
    Sl2,
    Ml2,
    L2,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "phi-q")]
    pub objective: ObjectiveName,
    #[arg(long, value_enum, default_value = "anneal")]
    pub method: Method,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// φ_q exponent.
    #[arg(long, default_value_t = 15)]
    pub q: u32,
    /// Distance exponent; `inf` for the maximum norm.
    #[arg(long, default_value = "2")]
    pub t: String,
    /// Levels per column for threshold accepting; `n` when absent.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub cooling: Option<f64>,
    /// `key = value` file presetting the schedule; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// Comma-separated metric names; defaults to phi_q, rho_max, rho_ave_sq, cl2.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Vec<String>,
    #[arg(long, default_value_t = 15)]
    pub q: u32,
    #[arg(long, default_value = "2")]
    pub t: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PlotArgs {
    #[arg(long)]
    pub design: PathBuf,
    /// Draw an s-by-s grid in every panel.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyOaArgs {
    #[arg(long)]
    pub oa: PathBuf,
    /// Strength to check; the declared strength when absent.
    #[arg(long)]
    pub strength: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyNetArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub base: u64,
    #[arg(long)]
    pub t: u32,
    #[arg(long)]
    pub m: u32,
    /// Check every aligned slice of b^j points for t < j ≤ m instead.
    #[arg(long)]
    pub sequence: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Star,
    L2,
    Cl2,
    Sl2,
    Ml2,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DiscrepancyArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long, value_enum)]
    pub measure: Measure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Srs,
    Lhs,
    OaLhs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VarianceLabArgs {
    /// constant, linear, exp, interaction, product or quadratic.
    #[arg(long)]
    pub f: String,
    #[arg(long, value_enum)]
    pub scheme: SchemeName,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Array for oa-lhs; a Galois-field array when n is a prime-power square.
    #[arg(long)]
    pub oa: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DumpTableArgs {
    /// Table identifier; `list` prints them all.
    pub id: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RerunArgs {
    pub manifest: PathBuf,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILED_CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::InvalidParameter(_) => EXIT_USAGE,
            _ => EXIT_FAILED_CHECK,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command, &cli.out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Runs a command, writes its manifest, and returns the exit code.
pub fn execute(command: &Command, out: &std::path::Path) -> CliResult<i32> {
    if let Command::Rerun(args) = command {
        return manifest::rerun(&args.manifest, out);
    }
    let mut outputs = Outputs::new(out)?;
    let code = commands::run(command, &mut outputs)?;
    manifest::write(command, &outputs)?;
    Ok(code)
}
