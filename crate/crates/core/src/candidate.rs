//! Weight/degree tuples and the integer machinery shared by every other module.
//!
//! A [`Candidate`] is the numeric shadow of a weighted complete intersection
//! `X ⊂ P(a_0, ..., a_N)` of multidegree `(d_1, ..., d_k)`. Nothing here knows
//! about equations: all information is carried by the two integer lists.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CandidateError {
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("non-positive {list} entry {value} at position {position}")]
    NonPositiveEntry {
        list: TupleKind,
        position: usize,
        value: i64,
    },
    #[error("{degrees} degrees exceed N = {ambient_dim} (codimension larger than ambient dimension)")]
    TooManyDegrees { degrees: usize, ambient_dim: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

/// Which of the two lists of a candidate an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleKind {
    Weights,
    Degrees,
}

impl fmt::Display for TupleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleKind::Weights => f.write_str("weight"),
            TupleKind::Degrees => f.write_str("degree"),
        }
    }
}

/// Weights `a_0..a_N` and degrees `d_1..d_k`.
///
/// Construction validates positivity and `k <= N`; it never reorders. The
/// derived ordering compares weights first and degrees second, which is the
/// canonical order used for all sorted output once candidates are normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    weights: Vec<i64>,
    degrees: Vec<i64>,
}

impl Candidate {
    pub fn new(weights: Vec<i64>, degrees: Vec<i64>) -> Result<Self, CandidateError> {
        if weights.is_empty() {
            return Err(CandidateError::EmptyWeights);
        }
        for (kind, list) in [(TupleKind::Weights, &weights), (TupleKind::Degrees, &degrees)] {
            if let Some((position, &value)) = list.iter().enumerate().find(|(_, &v)| v < 1) {
                return Err(CandidateError::NonPositiveEntry {
                    list: kind,
                    position,
                    value,
                });
            }
        }
        if degrees.len() > weights.len() - 1 {
            return Err(CandidateError::TooManyDegrees {
                degrees: degrees.len(),
                ambient_dim: weights.len() - 1,
            });
        }
        Ok(Self { weights, degrees })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// `N`, the dimension of the ambient weighted projective space.
    pub fn ambient_dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// `k`, the number of equations.
    pub fn codim(&self) -> usize {
        self.degrees.len()
    }

    /// `n = N - k`.
    pub fn dim(&self) -> usize {
        self.ambient_dim() - self.codim()
    }

    pub fn is_normalized(&self) -> bool {
        is_sorted(&self.weights) && is_sorted(&self.degrees)
    }

    /// Both lists sorted non-decreasing. Idempotent.
    pub fn normalize(&self) -> Candidate {
        let mut weights = self.weights.clone();
        let mut degrees = self.degrees.clone();
        weights.sort_unstable();
        degrees.sort_unstable();
        Candidate { weights, degrees }
    }

    /// `Σ a_i − Σ d_j`, with checked arithmetic.
    pub fn fano_index(&self) -> Result<IndexValue, CandidateError> {
        let sum = |xs: &[i64], what| {
            xs.iter()
                .try_fold(0i64, |acc, &x| acc.checked_add(x))
                .ok_or(CandidateError::Overflow(what))
        };
        let a = sum(&self.weights, "sum of weights")?;
        let d = sum(&self.degrees, "sum of degrees")?;
        a.checked_sub(d)
            .map(IndexValue)
            .ok_or(CandidateError::Overflow("fano index"))
    }

    /// Divisibility classes of the weights; see [`GcdClass`].
    pub fn gcd_classes(&self) -> Vec<GcdClass> {
        gcd_classes(&self.weights)
    }

    pub(crate) fn from_parts_unchecked(weights: Vec<i64>, degrees: Vec<i64>) -> Self {
        debug_assert!(Candidate::new(weights.clone(), degrees.clone()).is_ok());
        Candidate { weights, degrees }
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weights
            .cmp(&other.weights)
            .then_with(|| self.degrees.cmp(&other.degrees))
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}) ⊃ X_({})", join(&self.weights), join(&self.degrees))
    }
}

pub(crate) fn join(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn is_sorted(xs: &[i64]) -> bool {
    xs.windows(2).all(|w| w[0] <= w[1])
}

/// The Fano index `i_X`. Positive for Fano tuples, zero for Calabi–Yau ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexValue(pub i64);

impl IndexValue {
    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_fano(self) -> bool {
        self.0 > 0
    }

    pub fn is_calabi_yau(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All weight positions divisible by some `delta > 1`, with their gcd.
///
/// `delta` is the smallest integer producing this member set; `class_gcd` is
/// the gcd of the member weights, hence the largest such integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GcdClass {
    pub delta: i64,
    pub members: Vec<usize>,
    pub class_gcd: i64,
}

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of a list; 0 for the empty list.
pub fn gcd_all<I: IntoIterator<Item = i64>>(xs: I) -> i64 {
    xs.into_iter().fold(0, gcd)
}

/// Divisors greater than one, ascending. Trial division up to `sqrt(x)`.
pub fn divisors_above_one(x: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1i64;
    while d.saturating_mul(d) <= x {
        if x % d == 0 {
            small.push(d);
            if d != x / d {
                large.push(x / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small.retain(|&d| d > 1);
    small
}

/// One class per distinct member set `{i : delta | a_i}` over all `delta > 1`
/// dividing some weight, sorted by `delta`.
pub fn gcd_classes(weights: &[i64]) -> Vec<GcdClass> {
    let mut deltas: Vec<i64> = weights.iter().flat_map(|&a| divisors_above_one(a)).collect();
    deltas.sort_unstable();
    deltas.dedup();

    let mut classes: Vec<GcdClass> = Vec::new();
    for delta in deltas {
        let members: Vec<usize> = weights
            .iter()
            .enumerate()
            .filter(|(_, &a)| a % delta == 0)
            .map(|(i, _)| i)
            .collect();
        if classes.iter().any(|c| c.members == members) {
            continue;
        }
        let class_gcd = gcd_all(members.iter().map(|&i| weights[i]));
        classes.push(GcdClass {
            delta,
            members,
            class_gcd,
        });
    }
    classes
}
