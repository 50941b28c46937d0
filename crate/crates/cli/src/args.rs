use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wci_core::{FilterId, Profile};

#[derive(Debug, Parser)]
#[command(name = "wci", version, about = "Enumerate and filter weighted complete intersection tuples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every filter of a profile on one tuple.
    Check(CheckArgs),
    /// List the survivors of one (dim, index, codim) slice.
    Enumerate(EnumerateArgs),
    /// Check a classification statement against the search.
    Verify(VerifyArgs),
    /// Apply one reduction and print its trace.
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TupleArgs {
    /// Comma-separated weights, e.g. `1,1,1,2`.
    #[arg(long)]
    pub weights: IntList,
    /// Comma-separated degrees; empty for a weighted projective space.
    #[arg(long, default_value = "")]
    pub degrees: IntList,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub tuple: TupleArgs,
    /// `smooth-fano`, `calabi-yau`, `none`, or a comma list of filter names.
    #[arg(long, default_value = "smooth-fano")]
    pub profile: ProfileArg,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub index: i64,
    #[arg(long)]
    pub codim: usize,
    /// Largest weight searched. Defaults to `WCI_DEFAULT_MAX_WEIGHT`, then
    /// to `4 (dim + codim + index)`.
    #[arg(long, allow_hyphen_values = true)]
    pub max_weight: Option<i64>,
    #[arg(long, default_value = "smooth-fano")]
    pub profile: ProfileArg,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// `A..B` (inclusive) or a single value.
    #[arg(long)]
    pub dim: RangeArg<usize>,
    /// Restricts the indices for case i; selects the indices for the survey
    /// (default 1).
    #[arg(long)]
    pub index: Option<RangeArg<i64>>,
    /// Cap for every slice. Defaults to `WCI_DEFAULT_MAX_WEIGHT`, then to the
    /// per-slice default.
    #[arg(long, allow_hyphen_values = true)]
    pub max_weight: Option<i64>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(value_enum)]
    pub kind: TransformArg,
    #[command(flatten)]
    pub tuple: TupleArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    I,
    Ii,
    Iii,
    Hypersurface,
    Survey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Wellformize,
    Unconize,
    Section,
}

/// Comma-separated integers. Sign is not checked here; tuple validation
/// reports non-positive entries with their position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IntList(Vec::new()));
        }
        s.split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<i64>().map_err(|_| format!("`{part}` is not an integer"))
            })
            .collect::<Result<_, _>>()
            .map(IntList)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileArg(pub Profile);

impl FromStr for ProfileArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let profile = match s.trim() {
            "smooth-fano" => Profile::smooth_fano(),
            "calabi-yau" => Profile::calabi_yau(),
            "none" | "" => Profile::empty(),
            list => Profile::new(
                list.split(',')
                    .map(|name| name.trim().parse::<FilterId>())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(ProfileArg(profile))
    }
}

/// `A..B` inclusive, or `A` alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeArg<T>(pub RangeInclusive<T>);

impl<T> FromStr for RangeArg<T>
where
    T: FromStr + PartialOrd + Copy + std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| {
            x.trim()
                .parse::<T>()
                .map_err(|_| format!("`{}` is not a valid bound", x.trim()))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let x = parse(s)?;
                (x, x)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(RangeArg(lo..=hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!("1, 2,3".parse::<IntList>().unwrap().0, vec![1, 2, 3]);
        assert_eq!("".parse::<IntList>().unwrap().0, Vec::<i64>::new());
        assert_eq!("1,0,-2".parse::<IntList>().unwrap().0, vec![1, 0, -2]);
        assert!("1,,2".parse::<IntList>().is_err());
        assert!("1,x".parse::<IntList>().is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!("2..6".parse::<RangeArg<usize>>().unwrap().0, 2..=6);
        assert_eq!("2..=6".parse::<RangeArg<usize>>().unwrap().0, 2..=6);
        assert_eq!("4".parse::<RangeArg<usize>>().unwrap().0, 4..=4);
        assert!("6..2".parse::<RangeArg<usize>>().is_err());
        assert!("a..2".parse::<RangeArg<usize>>().is_err());
    }

    #[test]
    fn profiles() {
        assert_eq!("smooth-fano".parse::<ProfileArg>().unwrap().0, Profile::smooth_fano());
        assert!("none".parse::<ProfileArg>().unwrap().0.is_empty());
        let p = "gcd-cover,Deltas".parse::<ProfileArg>().unwrap().0;
        assert_eq!(p.filters(), &[FilterId::Deltas, FilterId::GcdCover]);
        assert!("gcd-cover,bogus".parse::<ProfileArg>().is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
