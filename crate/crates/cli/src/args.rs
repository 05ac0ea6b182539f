//! Command-line grammar.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prior_forge::{DivisorClass, TheoremTag};

#[derive(Debug, Parser)]
#[command(
    name = "prior-forge",
    version,
    about = "Plan and verify prioritary bundle constructions on ruled surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan one construction and emit its document
    Plan(PlanArgs),
    /// Re-verify a saved plan document
    Check(CheckArgs),
    /// Plan every point of a parameter grid
    Sweep(SweepArgs),
    /// Desk calculator over the divisor lattice and Riemann-Roch
    #[command(subcommand)]
    Calc(CalcCommand),
    /// Run the independent recomputation suites
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub genus: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub e: i64,
    #[arg(long)]
    pub rank: i64,
    /// First Chern class `S,T` meaning S·C0 + T·f
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub c1: DivisorClass,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: i64,
    /// Force a construction instead of the default dispatch
    #[arg(long)]
    pub theorem: Option<TheoremTag>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Inclusive range `A..B` or a single value
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub genus: RangeInclusive<i64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub e: RangeInclusive<i64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub rank: RangeInclusive<i64>,
    /// Coefficient of C0 in c1
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub s: RangeInclusive<i64>,
    /// Coefficient of f in c1
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub t: RangeInclusive<i64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub c2: RangeInclusive<i64>,
    #[arg(long)]
    pub theorem: Option<TheoremTag>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CalcCommand {
    /// Intersection number D1·D2
    Intersect {
        #[arg(long, default_value_t = 0)]
        genus: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        d1: DivisorClass,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        d2: DivisorClass,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Euler characteristic of a sheaf with the given Chern data
    Chi {
        #[arg(long)]
        genus: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long)]
        rank: i64,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        c1: DivisorClass,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Canonical class
    Canonical {
        #[arg(long)]
        genus: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Upper bound for h0 O(D)
    H0upper {
        #[arg(long)]
        genus: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        d: DivisorClass,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Check every closed form over a grid
    Suite(SuiteArgs),
    /// Recompute a saved plan by Whitney expansion and parameter search
    CrossCheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub genus: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub e: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub m: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub b: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub d: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub t: Option<RangeInclusive<i64>>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub l: Option<RangeInclusive<i64>>,
    /// Lengths of the zero-dimensional subschemes
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub z: Option<RangeInclusive<i64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// `A,B` as the class A·C0 + B·f.
pub fn parse_pair(s: &str) -> Result<DivisorClass, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `A,B`, got `{s}`"))?;
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|e| format!("`{x}` in `{s}`: {e}"))
    };
    Ok(DivisorClass::new(num(a)?, num(b)?))
}

/// `A..B` (inclusive) or a single integer. `B < A` is the empty range.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|e| format!("`{x}` in `{s}`: {e}"))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => num(s).map(|v| v..=v),
    }
}
