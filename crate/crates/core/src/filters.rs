//! Necessary conditions for a tuple to come from a smooth well formed Fano
//! weighted complete intersection that is not an intersection with a linear
//! cone.
//!
//! Every filter returns a [`FilterVerdict`]. A failed verdict always carries a
//! [`Witness`] that can be re-checked against the candidate with
//! [`Witness::certifies`], independently of the code that produced it.
//!
//! Index conventions in witnesses follow the usual notation: weight positions
//! are 0-based (`a_0..a_N`), degree positions are 1-based (`d_1..d_k`).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candidate::{gcd, gcd_all, Candidate, CandidateError, IndexValue, TupleKind};

/// Largest `N` accepted by [`gcd_cover_bruteforce`].
pub const BRUTEFORCE_MAX_AMBIENT_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("candidate is not normalized (weights and degrees must be sorted non-decreasing)")]
    NotNormalized,
    #[error("filter needs at least one degree")]
    NoDegrees,
    #[error("brute-force check limited to N <= {max}, got N = {ambient_dim}")]
    TooLarge { ambient_dim: usize, max: usize },
    #[error(transparent)]
    Candidate(#[from] CandidateError),
}

/// Filter identifiers. Declaration order is the fixed evaluation and
/// reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FilterId {
    Normalized,
    AmbientWellFormed,
    FanoPositivity,
    CalabiYau,
    LinearCone,
    Deltas,
    LastWeight,
    GcdCover,
    UnitPrefix,
}

impl FilterId {
    pub const ALL: [FilterId; 9] = [
        FilterId::Normalized,
        FilterId::AmbientWellFormed,
        FilterId::FanoPositivity,
        FilterId::CalabiYau,
        FilterId::LinearCone,
        FilterId::Deltas,
        FilterId::LastWeight,
        FilterId::GcdCover,
        FilterId::UnitPrefix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterId::Normalized => "Normalized",
            FilterId::AmbientWellFormed => "AmbientWellFormed",
            FilterId::FanoPositivity => "FanoPositivity",
            FilterId::CalabiYau => "CalabiYau",
            FilterId::LinearCone => "LinearCone",
            FilterId::Deltas => "Deltas",
            FilterId::LastWeight => "LastWeight",
            FilterId::GcdCover => "GcdCover",
            FilterId::UnitPrefix => "UnitPrefix",
        }
    }

    /// Filters whose verdict depends on the order of the lists.
    pub fn needs_normalized_input(self) -> bool {
        matches!(
            self,
            FilterId::Normalized | FilterId::Deltas | FilterId::LastWeight | FilterId::UnitPrefix
        )
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FilterId {
    type Err = String;

    /// Accepts the CamelCase name or its kebab-case form (`gcd-cover`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let squashed: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .flat_map(char::to_lowercase)
            .collect();
        FilterId::ALL
            .into_iter()
            .find(|id| id.name().to_lowercase() == squashed)
            .ok_or_else(|| format!("unknown filter `{s}`"))
    }
}

/// A set of filters, kept sorted in evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Profile {
    filters: Vec<FilterId>,
}

impl Profile {
    pub fn new<I: IntoIterator<Item = FilterId>>(ids: I) -> Self {
        let mut filters: Vec<FilterId> = ids.into_iter().collect();
        filters.sort_unstable();
        filters.dedup();
        Profile { filters }
    }

    pub fn empty() -> Self {
        Profile::default()
    }

    pub fn smooth_fano() -> Self {
        Profile::new([
            FilterId::Normalized,
            FilterId::AmbientWellFormed,
            FilterId::FanoPositivity,
            FilterId::LinearCone,
            FilterId::Deltas,
            FilterId::LastWeight,
            FilterId::GcdCover,
            FilterId::UnitPrefix,
        ])
    }

    /// Same conditions as [`Profile::smooth_fano`] with index zero in place of
    /// positivity.
    pub fn calabi_yau() -> Self {
        Profile::new([
            FilterId::Normalized,
            FilterId::AmbientWellFormed,
            FilterId::CalabiYau,
            FilterId::LinearCone,
            FilterId::Deltas,
            FilterId::LastWeight,
            FilterId::GcdCover,
            FilterId::UnitPrefix,
        ])
    }

    pub fn contains(&self, id: FilterId) -> bool {
        self.filters.binary_search(&id).is_ok()
    }

    pub fn filters(&self) -> &[FilterId] {
        &self.filters
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }
}

/// Re-checkable evidence that a filter failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `list[position] > list[position + 1]` (0-based positions).
    Unsorted { list: TupleKind, position: usize },
    /// gcd of all weights except `a_omitted` is `gcd > 1`.
    NotWellFormed { omitted: usize, gcd: i64 },
    /// Index outside the range the filter requires.
    Index { index: i64 },
    /// `d_degree_index = a_weight_index = value`.
    LinearCone {
        weight_index: usize,
        degree_index: usize,
        value: i64,
    },
    /// `d_j <= a_{n+j}`.
    Deltas { j: usize, degree: i64, weight: i64 },
    /// `d_k < 2 a_N`.
    LastWeight { degree: i64, weight: i64 },
    /// At least `required` weights are divisible by `class_gcd`, but only
    /// `available < required` degrees are.
    GcdCover {
        class_gcd: i64,
        required: usize,
        available: usize,
    },
    /// `a_position = weight > 1` inside the prefix that must consist of units.
    UnitPrefix { position: usize, weight: i64 },
    /// The unit prefix would need more positions than there are weights.
    InfeasiblePrefix { prefix_len: usize, weight_count: usize },
}

impl Witness {
    /// Independently re-evaluates the witness on `c`. True iff the witness
    /// really demonstrates a failure of the filter it was produced by.
    pub fn certifies(&self, c: &Candidate) -> bool {
        let w = c.weights();
        let d = c.degrees();
        match *self {
            Witness::Unsorted { list, position } => {
                let xs = match list {
                    TupleKind::Weights => w,
                    TupleKind::Degrees => d,
                };
                position + 1 < xs.len() && xs[position] > xs[position + 1]
            }
            Witness::NotWellFormed { omitted, gcd: g } => {
                omitted < w.len()
                    && g > 1
                    && w.len() > 1
                    && w.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != omitted)
                        .all(|(_, &a)| a % g == 0)
            }
            Witness::Index { index } => c.fano_index().map(|i| i.value() == index).unwrap_or(false),
            Witness::LinearCone {
                weight_index,
                degree_index,
                value,
            } => {
                weight_index < w.len()
                    && (1..=d.len()).contains(&degree_index)
                    && w[weight_index] == value
                    && d[degree_index - 1] == value
            }
            Witness::Deltas { j, degree, weight } => {
                let n = c.dim();
                (1..=d.len()).contains(&j)
                    && d[j - 1] == degree
                    && w[n + j] == weight
                    && degree <= weight
            }
            Witness::LastWeight { degree, weight } => {
                d.last() == Some(&degree)
                    && w.last() == Some(&weight)
                    && weight.checked_mul(2).is_none_or(|twice| degree < twice)
            }
            Witness::GcdCover {
                class_gcd,
                required,
                available,
            } => {
                class_gcd > 1
                    && available < required
                    && w.iter().filter(|&&a| a % class_gcd == 0).count() >= required
                    && d.iter().filter(|&&x| x % class_gcd == 0).count() == available
            }
            Witness::UnitPrefix { position, weight } => {
                let Ok(index) = c.fano_index() else { return false };
                let prefix = c.codim() + index.value().max(0) as usize;
                position < prefix && position < w.len() && w[position] == weight && weight > 1
            }
            Witness::InfeasiblePrefix {
                prefix_len,
                weight_count,
            } => {
                let Ok(index) = c.fano_index() else { return false };
                let prefix = c.codim() + index.value().max(0) as usize;
                prefix == prefix_len && weight_count == w.len() && prefix_len > weight_count
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterVerdict {
    pub filter: FilterId,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl FilterVerdict {
    fn pass(filter: FilterId) -> Self {
        FilterVerdict {
            filter,
            passed: true,
            witness: None,
        }
    }

    fn fail(filter: FilterId, witness: Witness) -> Self {
        FilterVerdict {
            filter,
            passed: false,
            witness: Some(witness),
        }
    }

    fn from_witness(filter: FilterId, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => FilterVerdict::fail(filter, w),
            None => FilterVerdict::pass(filter),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterReport {
    pub candidate: Candidate,
    pub profile: Profile,
    /// One verdict per profile filter, in [`FilterId`] order.
    pub verdicts: Vec<FilterVerdict>,
}

impl FilterReport {
    pub fn survives(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, id: FilterId) -> Option<&FilterVerdict> {
        self.verdicts.iter().find(|v| v.filter == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FilterVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

fn require_normalized(c: &Candidate) -> Result<(), FilterError> {
    if c.is_normalized() {
        Ok(())
    } else {
        Err(FilterError::NotNormalized)
    }
}

pub fn normalized(c: &Candidate) -> FilterVerdict {
    let unsorted = |list, xs: &[i64]| {
        xs.windows(2)
            .position(|p| p[0] > p[1])
            .map(|position| Witness::Unsorted { list, position })
    };
    let witness = unsorted(TupleKind::Weights, c.weights())
        .or_else(|| unsorted(TupleKind::Degrees, c.degrees()));
    FilterVerdict::from_witness(FilterId::Normalized, witness)
}

/// Every `N` of the `N + 1` weights are coprime. A single weight (`N = 0`)
/// passes vacuously.
pub fn ambient_well_formed(c: &Candidate) -> FilterVerdict {
    let w = c.weights();
    if w.len() == 1 {
        return FilterVerdict::pass(FilterId::AmbientWellFormed);
    }
    // gcd of everything except position i = gcd(prefix[i], suffix[i + 1])
    let mut prefix = vec![0i64; w.len() + 1];
    let mut suffix = vec![0i64; w.len() + 1];
    for i in 0..w.len() {
        prefix[i + 1] = gcd(prefix[i], w[i]);
    }
    for i in (0..w.len()).rev() {
        suffix[i] = gcd(suffix[i + 1], w[i]);
    }
    let witness = (0..w.len()).find_map(|i| {
        let g = gcd(prefix[i], suffix[i + 1]);
        (g > 1).then_some(Witness::NotWellFormed { omitted: i, gcd: g })
    });
    FilterVerdict::from_witness(FilterId::AmbientWellFormed, witness)
}

pub fn fano_positivity(c: &Candidate) -> Result<FilterVerdict, FilterError> {
    let index = c.fano_index()?;
    let witness = (!index.is_fano()).then_some(Witness::Index { index: index.value() });
    Ok(FilterVerdict::from_witness(FilterId::FanoPositivity, witness))
}

pub fn calabi_yau(c: &Candidate) -> Result<FilterVerdict, FilterError> {
    let index = c.fano_index()?;
    let witness = (!index.is_calabi_yau()).then_some(Witness::Index { index: index.value() });
    Ok(FilterVerdict::from_witness(FilterId::CalabiYau, witness))
}

/// Fails when some degree equals some weight. Reports the pair with the
/// smallest degree position, then the smallest weight position.
pub fn is_linear_cone(c: &Candidate) -> FilterVerdict {
    let witness = c.degrees().iter().enumerate().find_map(|(j, &d)| {
        c.weights()
            .iter()
            .position(|&a| a == d)
            .map(|i| Witness::LinearCone {
                weight_index: i,
                degree_index: j + 1,
                value: d,
            })
    });
    FilterVerdict::from_witness(FilterId::LinearCone, witness)
}

/// `d_j > a_{n+j}` for every `1 <= j <= k`.
pub fn deltas_ok(c: &Candidate) -> Result<FilterVerdict, FilterError> {
    require_normalized(c)?;
    let n = c.dim();
    let w = c.weights();
    let witness = c.degrees().iter().enumerate().find_map(|(idx, &d)| {
        let j = idx + 1;
        (d <= w[n + j]).then_some(Witness::Deltas {
            j,
            degree: d,
            weight: w[n + j],
        })
    });
    Ok(FilterVerdict::from_witness(FilterId::Deltas, witness))
}

/// `d_k >= 2 a_N`.
pub fn last_weight_ok(c: &Candidate) -> Result<FilterVerdict, FilterError> {
    require_normalized(c)?;
    let (Some(&d_k), Some(&a_n)) = (c.degrees().last(), c.weights().last()) else {
        return Err(FilterError::NoDegrees);
    };
    let twice = a_n
        .checked_mul(2)
        .ok_or(CandidateError::Overflow("2 * a_N"))?;
    let witness = (d_k < twice).then_some(Witness::LastWeight {
        degree: d_k,
        weight: a_n,
    });
    Ok(FilterVerdict::from_witness(FilterId::LastWeight, witness))
}

/// Divisibility form of the smoothness criterion: for every divisibility
/// class `S` of the weights with class gcd `g`, at least `|S|` degrees are
/// divisible by `g`.
///
/// This is equivalent to the statement over arbitrary weight subsets: a subset
/// with gcd `δ` lies inside the class of `δ`, whose gcd `g` is a multiple of
/// `δ`, so the class condition implies the subset condition; the class itself
/// is one of the subsets. [`gcd_cover_bruteforce`] checks the subset form
/// literally.
pub fn gcd_cover_ok(c: &Candidate) -> FilterVerdict {
    let witness = c.gcd_classes().into_iter().find_map(|class| {
        let available = c
            .degrees()
            .iter()
            .filter(|&&d| d % class.class_gcd == 0)
            .count();
        (available < class.members.len()).then_some(Witness::GcdCover {
            class_gcd: class.class_gcd,
            required: class.members.len(),
            available,
        })
    });
    FilterVerdict::from_witness(FilterId::GcdCover, witness)
}

/// Literal subset form of the smoothness criterion, exponential in `N`.
///
/// For every nonempty set of `r` weights with gcd `δ > 1`, looks for `r`
/// degrees whose gcd is divisible by `δ`. Test oracle for [`gcd_cover_ok`].
pub fn gcd_cover_bruteforce(c: &Candidate) -> Result<FilterVerdict, FilterError> {
    if c.ambient_dim() > BRUTEFORCE_MAX_AMBIENT_DIM {
        return Err(FilterError::TooLarge {
            ambient_dim: c.ambient_dim(),
            max: BRUTEFORCE_MAX_AMBIENT_DIM,
        });
    }
    let w = c.weights();
    let d = c.degrees();
    let k = d.len();

    // gcd of every degree subset, indexed by bitmask
    let mut degree_gcd = vec![0i64; 1 << k];
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        degree_gcd[mask] = gcd(degree_gcd[mask & (mask - 1)], d[low]);
    }
    let mut found: HashMap<(i64, usize), bool> = HashMap::new();

    for mask in 1usize..(1 << w.len()) {
        let delta = gcd_all((0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]));
        if delta <= 1 {
            continue;
        }
        let r = mask.count_ones() as usize;
        let ok = *found.entry((delta, r)).or_insert_with(|| {
            r <= k
                && (1usize..(1 << k))
                    .filter(|m| m.count_ones() as usize == r)
                    .any(|m| degree_gcd[m] % delta == 0)
        });
        if !ok {
            let available = d.iter().filter(|&&x| x % delta == 0).count();
            return Ok(FilterVerdict::fail(
                FilterId::GcdCover,
                Witness::GcdCover {
                    class_gcd: delta,
                    required: r,
                    available,
                },
            ));
        }
    }
    Ok(FilterVerdict::pass(FilterId::GcdCover))
}

/// `a_0 = ... = a_{k+i-1} = 1` where `i = max(index, 0)`.
///
/// Covers both the Fano (`i >= 1`) and Calabi–Yau (`i = 0`) forms. An empty
/// prefix (`k = 0`, `i = 0`) passes vacuously.
pub fn unit_prefix_ok(c: &Candidate, index: IndexValue) -> Result<FilterVerdict, FilterError> {
    require_normalized(c)?;
    let w = c.weights();
    let prefix_len = c.codim() + index.value().max(0) as usize;
    if prefix_len > w.len() {
        return Ok(FilterVerdict::fail(
            FilterId::UnitPrefix,
            Witness::InfeasiblePrefix {
                prefix_len,
                weight_count: w.len(),
            },
        ));
    }
    let witness = w[..prefix_len]
        .iter()
        .position(|&a| a > 1)
        .map(|position| Witness::UnitPrefix {
            position,
            weight: w[position],
        });
    Ok(FilterVerdict::from_witness(FilterId::UnitPrefix, witness))
}

/// Evaluates every filter in `profile`, in [`FilterId`] order, without
/// short-circuiting.
///
/// With `k = 0` the last-weight condition has no degree to talk about and is
/// reported as passed.
pub fn run_all(c: &Candidate, profile: &Profile) -> Result<FilterReport, FilterError> {
    let mut verdicts = Vec::with_capacity(profile.filters().len());
    for &id in profile.filters() {
        let verdict = match id {
            FilterId::Normalized => normalized(c),
            FilterId::AmbientWellFormed => ambient_well_formed(c),
            FilterId::FanoPositivity => fano_positivity(c)?,
            FilterId::CalabiYau => calabi_yau(c)?,
            FilterId::LinearCone => is_linear_cone(c),
            FilterId::Deltas => deltas_ok(c)?,
            FilterId::LastWeight => {
                if c.codim() == 0 {
                    require_normalized(c)?;
                    FilterVerdict::pass(FilterId::LastWeight)
                } else {
                    last_weight_ok(c)?
                }
            }
            FilterId::GcdCover => gcd_cover_ok(c),
            FilterId::UnitPrefix => unit_prefix_ok(c, c.fano_index()?)?,
        };
        verdicts.push(verdict);
    }
    Ok(FilterReport {
        candidate: c.clone(),
        profile: profile.clone(),
        verdicts,
    })
}
