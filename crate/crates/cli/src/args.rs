use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoball::exactmath::{parse_rational, Natural, Rational};
use isoball::search::{BoundKind, Generator, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "isoball", version, about = "Exact vertex-isoperimetry checks on hypercubes and Hamming balls")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for enumerations and sweeps. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a verification; exit 1 if it finds a failure.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exhaustive, sampled, or local searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Build a named family and print it.
    Construct(ConstructArgs),
    /// Evaluate a bound formula.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

pub fn parse_natural(s: &str) -> Result<Natural, String> {
    s.parse().map_err(|_| format!("'{s}' is not a nonnegative integer"))
}

pub fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("'{s}' is not a rational (use p/q or a decimal)"))
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Ratio monotonicity and the slice lower bound for every n up to --n.
    ///
    /// CSV columns: n, r, size (|S_n(r)|), ball (|B_n(r)|), ratio (size/ball
    /// as p/q), ratio_decimal, monotone_step, slice_bound (empty when not
    /// applicable).
    Lemma6 {
        #[arg(long, default_value_t = 64)]
        n: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Normalized matching bounds over every subfamily of S_n(r).
    Nm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Local expansion inequality over every subfamily of S_n(r).
    LocalExpansion {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Root claims at one instance (--r, --s, --alpha), or a sweep over
    /// 2 <= r <= s <= --grid with alpha = 0.05, 0.10, ..., 0.95.
    Interlace {
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long, value_parser = parse_rat)]
        alpha: Option<Rational>,
        #[arg(long)]
        grid: Option<u64>,
    },
    /// Both polynomial identities and their positivity certificates.
    Appendix,
    /// Hypergeometric ratio bound for every 1 <= r < n' <= --n.
    ///
    /// CSV columns: n, r, size (C(n,r)), max_ratio (p/q), max_ratio_decimal.
    Prop9 {
        #[arg(long, default_value_t = 200)]
        n: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Exact minimum vertex boundary over all sets of a given size (n <= 5).
    MinBoundary {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        size: u64,
        /// Search inside B_n(R) instead of the whole cube.
        #[arg(long = "R")]
        radius: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check a bound on seeded random or constructed families.
    Sample(SampleArgs),
    /// Greedy local search for small boundary at a fixed size.
    Local {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        radius: u32,
        #[arg(long)]
        size: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
    },
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "random-profile")]
    pub generator: GeneratorArg,
    #[arg(long, value_enum, default_value = "thm1")]
    pub bound: BoundArg,
    #[arg(long, default_value_t = 100)]
    pub n: u32,
    #[arg(long = "R", default_value_t = 50)]
    pub radius: u32,
    #[arg(long, value_parser = parse_rat, default_value = "1/4")]
    pub rho: Rational,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Treat the theorem's threshold n0 as this value.
    #[arg(long = "assume-n0")]
    pub assume_n0: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum GeneratorArg {
    RandomProfile,
    RandomExplicit,
    Construction,
}

impl From<GeneratorArg> for Generator {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::RandomProfile => Generator::RandomProfile,
            GeneratorArg::RandomExplicit => Generator::RandomExplicit,
            GeneratorArg::Construction => Generator::Construction,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum BoundArg {
    Thm1,
    Lemma7,
}

impl From<BoundArg> for BoundKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Thm1 => BoundKind::Thm1,
            BoundArg::Lemma7 => BoundKind::Lemma7,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionName {
    Star,
    Costar,
    BallHalfspace,
    SliceHalfspace,
    Cplus,
    SizedBallHalfspace,
    SizedSliceHalfspace,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub name: ConstructionName,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long = "R")]
    pub radius: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Target size for the sized constructions.
    #[arg(long, value_parser = parse_natural)]
    pub size: Option<Natural>,
    /// Distinguished element for star and costar.
    #[arg(long, default_value_t = 1)]
    pub e: u32,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    Eval(EvalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Nm,
    Eq4,
    Thm1,
    Lemma7,
    Hypergeom,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long = "R")]
    pub radius: Option<u32>,
    #[arg(long, value_parser = parse_natural)]
    pub size: Option<Natural>,
    #[arg(long, value_parser = parse_natural)]
    pub boundary: Option<Natural>,
    #[arg(long, value_parser = parse_rat)]
    pub rho: Option<Rational>,
    #[arg(long = "assume-n0")]
    pub assume_n0: Option<u64>,
    /// Marked items, for a single hypergeometric probability.
    #[arg(long)]
    pub m: Option<u32>,
    /// Outcome, for a single hypergeometric probability.
    #[arg(long)]
    pub k: Option<u32>,
}
