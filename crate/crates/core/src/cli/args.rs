use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "soliton-forge", version, about = "Exact solitons by dressing, with residual checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Q_{b,1..j+1} and the flow right-hand side on a sampled potential.
    Qflow(Opts),
    /// A pure multi-soliton of the (b, j) flow.
    Soliton(Opts),
    /// A dressed solution of the U(n)-system.
    Unsystem(Opts),
    /// A monopole built from Ward solitons and Bäcklund transformations.
    Monopole(Opts),
    /// Residual of a soliton CSV against a named equation.
    Verify(Opts),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Flow index, at most 6.
    #[arg(long)]
    pub j: Option<usize>,
    /// Diagonal entries "i,-i"; repeat once per coordinate for unsystem.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Vec<String>,
    /// Diagonal entries of b; defaults to a.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Pole "re+imi", one per dressing step.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Spanning columns of a step's projection: "1,1" or "1,0,0|0,1,0".
    #[arg(long, allow_hyphen_values = true)]
    pub span: Vec<String>,
    /// Polynomial columns of a monopole seed: entries split by ';',
    /// ascending coefficients by ',', columns by '|', e.g. "1;0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub pi0: Vec<String>,
    /// "xmin:xmax:m[,...]".
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Potential for qflow: gaussian or zero.
    #[arg(long)]
    pub profile: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check the result and fail with exit code 4 above --tol.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Soliton CSV for verify.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Equation for verify: nls, mkdv or translation.
    #[arg(long)]
    pub equation: Option<String>,
    /// Time of the exported monopole slice.
    #[arg(long, allow_hyphen_values = true)]
    pub t_slice: Option<f64>,
}
