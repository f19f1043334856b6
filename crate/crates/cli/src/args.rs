use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "su2lab",
    version,
    about = "Sampling, zero statistics and hole probabilities of Gaussian random SU(2) polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the coefficients of sampled polynomials
    Sample(SampleArgs),
    /// Find all roots of one sampled polynomial
    Roots(PolyArgs),
    /// Count the zeros of one sampled polynomial in B(0, r)
    Count(CountArgs),
    /// Estimate the mean zero count in B(0, r)
    MeanZeros(McArgs),
    /// Estimate P(|Ξ − N r²/(1+r²)| ≥ ΔN)
    Deviation(DeviationArgs),
    /// Estimate the probability of no zeros in B(0, r)
    Hole(McArgs),
    /// Exact log-probability of the coefficient event forcing a hole
    OmegaBound(OmegaArgs),
    /// Fit log P against N² from a results file or a fresh grid of hole runs
    FitDecay(FitArgs),
    /// Run the invariant suites and report each against its threshold
    Verify(VerifyArgs),
    /// Quadrature checks of the Fubini–Study inner product
    Orthonormality(OrthoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write data here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add workers, wall time and a UTC timestamp to JSON records
    #[arg(long)]
    pub provenance: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(short = 'N', long)]
    pub degree: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of polynomials (trial indices 0..trials)
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(short = 'N', long)]
    pub degree: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Trial index of the polynomial within the seed's stream
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(short = 'r', long, allow_hyphen_values = true)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(short = 'N', long, conflicts_with = "grid")]
    pub degree: Option<usize>,
    /// Comma-separated degrees, one run each
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    #[arg(short = 'r', long, allow_hyphen_values = true)]
    pub radius: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "SU2LAB_WORKERS")]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct OmegaArgs {
    #[arg(short = 'N', long, conflicts_with = "grid")]
    pub degree: Option<usize>,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    #[arg(short = 'r', long, allow_hyphen_values = true)]
    pub radius: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Results file (CSV or JSON) with N and point columns
    #[arg(long, conflicts_with = "grid")]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    #[arg(short = 'r', long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "SU2LAB_WORKERS")]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Run only this suite
    #[arg(long)]
    pub suite: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OrthoArgs {
    #[arg(short = 'N', long, default_value_t = 10)]
    pub degree: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parsed `--grid` list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<usize>);

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    if s.trim().is_empty() {
        return Ok(Grid(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad degree {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("4,8, 12").unwrap(), Grid(vec![4, 8, 12]));
        assert_eq!(parse_grid("").unwrap(), Grid(vec![]));
        assert!(parse_grid("4,x").is_err());
        assert!(parse_grid("-3").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
