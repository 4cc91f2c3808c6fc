use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irrbase::exact::SnParse;
use irrbase::precreal::DEFAULT_MAX_PRECISION_BITS;

#[derive(Debug, Parser)]
#[command(name = "irrbase", version, about = "Certified computations around log S_n, I_n and irrationality bases")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub io: Io,
    #[command(subcommand)]
    pub command: Command,
}

/// Inclusive `a..b` (also `a..=b`) or a single `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl NRange {
    pub fn iter(&self) -> RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad integer {t:?} in range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("range {s:?} must satisfy 1 <= lo <= hi"));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Parse {
    /// base n+m, exponent 2 d_2n C(n,k)^2 / j
    #[value(name = "base-nm.exp-c2d/j.v1")]
    ExponentCarriesBinomial,
    /// base (n+m) C(n,k)^2, exponent 2 d_2n / j
    #[value(name = "base-nmc2.exp-d/j.v1")]
    BaseCarriesBinomial,
}

impl From<Parse> for SnParse {
    fn from(p: Parse) -> SnParse {
        match p {
            Parse::ExponentCarriesBinomial => SnParse::ExponentCarriesBinomial,
            Parse::BaseCarriesBinomial => SnParse::BaseCarriesBinomial,
        }
    }
}

/// Settings that determine the numbers produced; hashed into every header.
#[derive(Debug, Args)]
pub struct Common {
    /// Range of n, e.g. `1..10` (inclusive) or `7`.
    #[arg(long = "n", global = true, env = "IRRBASE_N", default_value = "1..10")]
    pub n: NRange,
    /// Decimal digits of every rendered value.
    #[arg(long, global = true, env = "IRRBASE_DIGITS", default_value_t = 6)]
    pub digits: usize,
    /// Working precision ceiling in bits.
    #[arg(long, global = true, env = "IRRBASE_PRECISION_CEILING", default_value_t = DEFAULT_MAX_PRECISION_BITS)]
    pub precision_ceiling: usize,
    #[arg(long, global = true, env = "IRRBASE_FORMAT", value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
    /// How the S_n product is split into bases and exponents.
    #[arg(long, global = true, env = "IRRBASE_PARSE", value_enum, default_value = "base-nm.exp-c2d/j.v1")]
    pub parse: Parse,
}

/// Where results go; not part of the config hash.
#[derive(Debug, Args)]
pub struct Io {
    /// Checkpoint file for f-series and plot.
    #[arg(long, global = true, env = "IRRBASE_CHECKPOINT")]
    pub checkpoint: Option<PathBuf>,
    /// Output file (the SVG path for `plot`); standard output otherwise.
    #[arg(long, global = true, env = "IRRBASE_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Alpha {
    Sqrt2,
    Golden,
    E,
    Pi,
    Ln2,
    Gamma,
    /// [0; 10^1!, 10^2!, ...]
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Tower,
    L,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// {log S_n}, ||log S_n|| and F(n) = (1/n) log ||log S_n||.
    FSeries,
    /// log S_n with its size.
    Sn,
    /// The double integral I_n by two independent quadratures.
    Integral,
    /// Integrality of d_2n A_n = d_2n C(2n,n) gamma + log S_n - d_2n I_n.
    RelationCheck {
        #[arg(long, env = "IRRBASE_TOLERANCE", default_value_t = 1e-20)]
        tolerance: f64,
    },
    /// The gap d_2n I_n - {log S_n} and normalized growth exponents.
    CriterionGap,
    /// Irrationality exponent and base estimates from continued-fraction convergents.
    Estimate {
        #[arg(long, env = "IRRBASE_ALPHA", value_enum, default_value_t = Alpha::Sqrt2)]
        alpha: Alpha,
        /// Number of partial quotients.
        #[arg(long, env = "IRRBASE_DEPTH", default_value_t = 30)]
        depth: usize,
        /// Tail window of the summary maxima.
        #[arg(long, env = "IRRBASE_WINDOW", default_value_t = 10)]
        window: usize,
    },
    /// The super-Liouville tower T and the Liouville number L.
    Examples {
        #[arg(long, env = "IRRBASE_WHICH", value_enum, default_value_t = Which::All)]
        which: Which,
        /// lambda for the tower inequality (default 2^n at each n); `p/q` or decimal.
        #[arg(long, env = "IRRBASE_LAMBDA")]
        lambda: Option<String>,
        #[arg(long, env = "IRRBASE_EPS", default_value_t = 0.5)]
        eps: f64,
    },
    /// Closed-form exponent and base bounds.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<u64>,
    },
    /// n with {log S_n} or ||log S_n|| near a/b, and the growth of that subsequence.
    Scan {
        #[arg(long, env = "IRRBASE_A", default_value_t = 0)]
        a: i64,
        #[arg(long, env = "IRRBASE_B", default_value_t = 1)]
        b: u64,
        #[arg(long, env = "IRRBASE_THRESHOLD", default_value_t = 0.01)]
        threshold: f64,
    },
    /// SVG scatter of F(n) with the reference lines 0 and -2 log(4/e).
    Plot,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FSeries => "f-series",
            Command::Sn => "sn",
            Command::Integral => "integral",
            Command::RelationCheck { .. } => "relation-check",
            Command::CriterionGap => "criterion-gap",
            Command::Estimate { .. } => "estimate",
            Command::Examples { .. } => "examples",
            Command::Bounds { .. } => "bounds",
            Command::Scan { .. } => "scan",
            Command::Plot => "plot",
        }
    }
}
