//! Bounded exhaustive search for normalized tuples with prescribed dimension
//! `n`, index `i` and codimension `k`.
//!
//! For `k >= 1` every generated tuple has the shape
//!
//! ```text
//! weights = 1^(k+i) | m_1 <= .. <= m_M | t_1 <= .. <= t_k      M = n - k - i + 1
//! degrees = d_j = t_j + e_j,  e_j >= 1
//! ```
//!
//! The unit prefix and `e_j >= 1` are built into the generator. Writing the
//! index as `(k + i) + Σm + Σt − Σd` turns it into the excess identity
//! `Σ e_j = k + Σ m_l`, which fixes the total excess once the middle weights
//! are chosen. `M < 0` leaves no room for the prefix and the slice is empty.
//!
//! Every other filter of the query profile runs on the finished tuple. Some of
//! them also bound the search, which is what lets certain slices finish below
//! the weight cap:
//!
//! * last weight (`e_k >= t_k`) gives `t_k <= Σm + 1`, so tails are bounded by
//!   the middle;
//! * with `M = 1` and the linear cone, last weight and gcd-cover filters
//!   active, the middle weight `m` is at most 2. Tails lie in `{m, m+1}`. If
//!   all tails equal `m >= 2`, the `k + 1` weights divisible by `m` need
//!   `k + 1` degrees. Otherwise `t_k = m + 1` forces `e_k = m + 1` and every
//!   other `e_j = 1`; a tail equal to `m` would give the degree `m + 1 = a_N`,
//!   and `k >= 2` tails equal to `m + 1` meet only one degree divisible by
//!   `m + 1`. What is left is `k = 1` with degree `2m + 2`, and the class of
//!   `m` needs `m | 2`.
//!
//! `cap_touched` is set exactly when some loop had values above the cap that
//! none of these bounds excluded.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::candidate::{gcd_classes, Candidate};
use crate::filters::{ambient_well_formed, run_all, FilterError, FilterId, Profile};

/// Upper limit on the weight cap and on the index accepted by a query.
pub const MAX_SEARCH_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("weight cap {0} is below 1")]
    CapTooSmall(i64),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationQuery {
    /// `n`
    pub dim: usize,
    /// `i_X`
    pub index: i64,
    /// `k`
    pub codim: usize,
    pub max_weight: i64,
    pub profile: Profile,
}

impl EnumerationQuery {
    /// Smooth-Fano profile and the default cap.
    pub fn new(dim: usize, index: i64, codim: usize) -> Self {
        EnumerationQuery {
            dim,
            index,
            codim,
            max_weight: Self::default_max_weight(dim, index, codim),
            profile: Profile::smooth_fano(),
        }
    }

    /// `4 (n + k + i)`. A heuristic, not a bound.
    pub fn default_max_weight(dim: usize, index: i64, codim: usize) -> i64 {
        4 * (dim as i64 + codim as i64 + index.max(0))
    }

    pub fn with_max_weight(mut self, max_weight: i64) -> Self {
        self.max_weight = max_weight;
        self
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        self
    }

    pub fn validate(&self) -> Result<(), EnumerationError> {
        if self.max_weight < 1 {
            return Err(EnumerationError::CapTooSmall(self.max_weight));
        }
        if self.dim < 1 {
            return Err(EnumerationError::InvalidQuery("dimension must be at least 1".into()));
        }
        if self.index < 0 {
            return Err(EnumerationError::InvalidQuery("index must be non-negative".into()));
        }
        if self.max_weight > MAX_SEARCH_BOUND || self.index > MAX_SEARCH_BOUND {
            return Err(EnumerationError::InvalidQuery(format!(
                "weight cap and index are limited to {MAX_SEARCH_BOUND}"
            )));
        }
        if self.dim + self.codim > 4096 {
            return Err(EnumerationError::InvalidQuery("dimension plus codimension too large".into()));
        }
        Ok(())
    }

    /// `M = n - k - i + 1`, the number of weights between the unit prefix
    /// and the tail.
    pub fn middle_len(&self) -> i64 {
        self.dim as i64 - self.codim as i64 - self.index + 1
    }

    /// Why the slice is empty regardless of the cap, if it is.
    pub fn infeasibility(&self) -> Option<Infeasibility> {
        if self.codim == 0 {
            let least = self.dim as i64 + 1;
            return (self.index < least).then_some(Infeasibility::IndexBelowWeightCount {
                index: self.index,
                weight_count: self.dim + 1,
            });
        }
        (self.middle_len() < 0).then(|| Infeasibility::PrefixExceedsDimension {
            prefix_len: self.codim + self.index as usize,
            available: self.dim + 1,
        })
    }
}

/// Reasons a slice is empty for every cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// The unit prefix `a_0..a_{k+i-1}` would reach past `a_n`, forcing
    /// `i <= n + 1 - k` against the query.
    PrefixExceedsDimension { prefix_len: usize, available: usize },
    /// `k = 0`: `n + 1` positive weights cannot sum to the index.
    IndexBelowWeightCount { index: i64, weight_count: usize },
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::PrefixExceedsDimension {
                prefix_len,
                available,
            } => write!(
                f,
                "infeasible prefix: {prefix_len} unit weights required but only {available} positions precede the tail"
            ),
            Infeasibility::IndexBelowWeightCount {
                index,
                weight_count,
            } => write!(f, "infeasible: {weight_count} positive weights cannot sum to index {index}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub tested: u64,
}

impl SearchStats {
    fn merge(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.tested += other.tested;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub query: EnumerationQuery,
    /// Canonical order.
    pub survivors: Vec<Candidate>,
    /// Always true: the search is exhaustive below the cap.
    pub complete_within_cap: bool,
    /// Some branch had admissible values above the cap.
    pub cap_touched: bool,
    pub infeasible: Option<Infeasibility>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl SearchOptions {
    pub fn workers(workers: usize) -> Self {
        SearchOptions { workers }
    }
}

pub fn enumerate(query: &EnumerationQuery) -> Result<EnumerationResult, EnumerationError> {
    enumerate_with(query, SearchOptions::default())
}

pub fn enumerate_with(
    query: &EnumerationQuery,
    options: SearchOptions,
) -> Result<EnumerationResult, EnumerationError> {
    enumerate_streaming(query, options, |_| {})
}

/// Like [`enumerate_with`], handing each survivor to `sink` as soon as its
/// position in canonical order is settled.
///
/// The search is split on the middle weights. Branches are evaluated in
/// parallel batches and flushed in order, so the sink sees the same sequence
/// for any worker count.
pub fn enumerate_streaming<F>(
    query: &EnumerationQuery,
    options: SearchOptions,
    mut sink: F,
) -> Result<EnumerationResult, EnumerationError>
where
    F: FnMut(&Candidate),
{
    query.validate()?;
    let mut result = EnumerationResult {
        query: query.clone(),
        survivors: Vec::new(),
        complete_within_cap: true,
        cap_touched: false,
        infeasible: query.infeasibility(),
        stats: SearchStats::default(),
    };
    if result.infeasible.is_some() {
        return Ok(result);
    }

    let mut emit = |outcome: BranchOutcome, result: &mut EnumerationResult| {
        for c in &outcome.survivors {
            sink(c);
        }
        result.survivors.extend(outcome.survivors);
        result.cap_touched |= outcome.cap_touched;
        result.stats.merge(outcome.stats);
    };

    if query.codim == 0 {
        let outcome = search_ambient(query)?;
        emit(outcome, &mut result);
        return Ok(result);
    }

    let plan = Arc::new(Plan::new(query));
    let (branches, middle_touched) = plan.middle_branches();
    result.cap_touched |= middle_touched;
    result.stats.nodes += branches.len() as u64;

    if options.workers == 1 || branches.len() <= 1 {
        for middle in &branches {
            emit(plan.explore(middle)?, &mut result);
        }
        return Ok(result);
    }

    let pool = if options.workers == 0 {
        None
    } else {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.workers)
                .build()
                .map_err(|e| EnumerationError::InvalidQuery(format!("thread pool: {e}")))?,
        )
    };
    let threads = pool
        .as_ref()
        .map_or_else(rayon::current_num_threads, |p| p.current_num_threads());
    let batch = (threads * 8).max(1);
    for chunk in branches.chunks(batch) {
        let run = || {
            chunk
                .par_iter()
                .map(|middle| plan.explore(middle))
                .collect::<Vec<_>>()
        };
        let outcomes = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for outcome in outcomes {
            emit(outcome?, &mut result);
        }
    }
    Ok(result)
}

#[derive(Default)]
struct BranchOutcome {
    survivors: Vec<Candidate>,
    cap_touched: bool,
    stats: SearchStats,
}

/// Query-wide constants for the `k >= 1` search.
struct Plan {
    codim: usize,
    prefix_len: usize,
    middle_len: usize,
    cap: i64,
    profile: Profile,
    last_weight: bool,
    linear_cone: bool,
    gcd_cover: bool,
    well_formed: bool,
    middle_bound: Option<i64>,
}

impl Plan {
    fn new(q: &EnumerationQuery) -> Self {
        let has = |id| q.profile.contains(id);
        let middle_len = q.middle_len() as usize;
        let closes =
            has(FilterId::LinearCone) && has(FilterId::LastWeight) && has(FilterId::GcdCover);
        Plan {
            codim: q.codim,
            prefix_len: q.codim + q.index as usize,
            middle_len,
            cap: q.max_weight,
            profile: q.profile.clone(),
            last_weight: has(FilterId::LastWeight),
            linear_cone: has(FilterId::LinearCone),
            gcd_cover: has(FilterId::GcdCover),
            well_formed: has(FilterId::AmbientWellFormed),
            middle_bound: (middle_len == 1 && closes).then_some(2),
        }
    }

    /// All middle tuples within the cap, in lexicographic order.
    fn middle_branches(&self) -> (Vec<Vec<i64>>, bool) {
        if self.middle_len == 0 {
            return (vec![Vec::new()], false);
        }
        let hi = self.middle_bound.map_or(self.cap, |b| b.min(self.cap));
        let touched = self.middle_bound.is_none_or(|b| b > self.cap);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.middle_len);
        nondecreasing(1, hi, self.middle_len, &mut cur, &mut |m| out.push(m.to_vec()));
        (out, touched)
    }

    fn explore(&self, middle: &[i64]) -> Result<BranchOutcome, EnumerationError> {
        let mut out = BranchOutcome::default();
        let middle_sum: i64 = middle.iter().sum();
        let lo = middle.last().copied().unwrap_or(1);
        // e_k >= t_k together with Σe = k + Σm
        let bound = self.last_weight.then_some(middle_sum + 1);
        let hi = bound.map_or(self.cap, |b| b.min(self.cap));
        if bound.is_none_or(|b| b > self.cap) && lo.max(self.cap + 1) <= bound.unwrap_or(i64::MAX) {
            out.cap_touched = true;
        }

        let mut weights = vec![1i64; self.prefix_len];
        weights.extend_from_slice(middle);
        let total_excess = self.codim as i64 + middle_sum;

        let mut tails = Vec::with_capacity(self.codim);
        let mut failure = None;
        nondecreasing(lo, hi, self.codim, &mut tails, &mut |t| {
            if failure.is_some() {
                return;
            }
            out.stats.nodes += 1;
            let mut w = weights.clone();
            w.extend_from_slice(t);
            if !self.weights_admissible(&w) {
                return;
            }
            let mut degrees = Vec::with_capacity(self.codim);
            if let Err(e) = self.place_degrees(&w, t, total_excess, &mut degrees, &mut out) {
                failure = Some(e);
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Filters that only look at the weights, applied before any degree is
    /// placed. A gcd class with more than `k` members can never be covered.
    fn weights_admissible(&self, w: &[i64]) -> bool {
        if self.gcd_cover && gcd_classes(w).iter().any(|c| c.members.len() > self.codim) {
            return false;
        }
        if self.well_formed {
            let c = Candidate::from_parts_unchecked(w.to_vec(), Vec::new());
            if !ambient_well_formed(&c).passed {
                return false;
            }
        }
        true
    }

    /// Chooses `d_j = t_j + e_j` left to right with `d` non-decreasing and
    /// `Σe = remaining`.
    fn place_degrees(
        &self,
        weights: &[i64],
        tails: &[i64],
        remaining: i64,
        degrees: &mut Vec<i64>,
        out: &mut BranchOutcome,
    ) -> Result<(), EnumerationError> {
        out.stats.nodes += 1;
        let j = degrees.len();
        let prev = degrees.last().copied().unwrap_or(1);
        let k = tails.len();
        let blocked = |d: i64| self.linear_cone && weights.binary_search(&d).is_ok();

        if j + 1 == k {
            let e = remaining;
            let d = tails[j] + e;
            let min_e = if self.last_weight { tails[j] } else { 1 };
            if e >= min_e && d >= prev && !blocked(d) {
                degrees.push(d);
                self.test(weights, degrees, out)?;
                degrees.pop();
            }
            return Ok(());
        }

        let mut e = 1;
        loop {
            let d = tails[j] + e;
            // least excess the later positions need once d_j = d
            let need: i64 = (j + 1..k)
                .map(|p| {
                    let floor = if p + 1 == k && self.last_weight { tails[p] } else { 1 };
                    floor.max(d - tails[p])
                })
                .sum();
            if remaining - e < need {
                break;
            }
            if d >= prev && !blocked(d) {
                degrees.push(d);
                self.place_degrees(weights, tails, remaining - e, degrees, out)?;
                degrees.pop();
            }
            e += 1;
        }
        Ok(())
    }

    fn test(&self, weights: &[i64], degrees: &[i64], out: &mut BranchOutcome) -> Result<(), EnumerationError> {
        out.stats.tested += 1;
        let c = Candidate::from_parts_unchecked(weights.to_vec(), degrees.to_vec());
        if run_all(&c, &self.profile)?.survives() {
            out.survivors.push(c);
        }
        Ok(())
    }
}

/// `k = 0`: the weighted projective spaces `P(a_0..a_n)` with `Σa = i`.
fn search_ambient(q: &EnumerationQuery) -> Result<BranchOutcome, EnumerationError> {
    let mut out = BranchOutcome::default();
    let slots = q.dim + 1;
    // the largest weight can reach i - n
    let bound = q.index - q.dim as i64;
    out.cap_touched = bound > q.max_weight;
    let hi = bound.min(q.max_weight);
    let mut cur = Vec::with_capacity(slots);
    let mut failure = None;
    nondecreasing(1, hi, slots, &mut cur, &mut |w| {
        out.stats.nodes += 1;
        if failure.is_some() || w.iter().sum::<i64>() != q.index {
            return;
        }
        out.stats.tested += 1;
        let c = Candidate::from_parts_unchecked(w.to_vec(), Vec::new());
        match run_all(&c, &q.profile) {
            Ok(r) if r.survives() => out.survivors.push(c),
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

/// Calls `f` on every non-decreasing sequence of length `len` in `[lo, hi]`,
/// lexicographically.
fn nondecreasing<F: FnMut(&[i64])>(lo: i64, hi: i64, len: usize, cur: &mut Vec<i64>, f: &mut F) {
    if cur.len() == len {
        f(cur);
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        nondecreasing(x, hi, len, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(w: &[i64], d: &[i64]) -> Candidate {
        Candidate::new(w.to_vec(), d.to_vec()).unwrap()
    }

    fn ones_then(count: usize, rest: &[i64]) -> Vec<i64> {
        let mut w = vec![1; count];
        w.extend_from_slice(rest);
        w
    }

    #[test]
    fn codim_above_bound_is_empty_and_closed() {
        let r = enumerate(&EnumerationQuery::new(2, 1, 3).with_max_weight(10)).unwrap();
        assert!(r.survivors.is_empty());
        assert!(r.complete_within_cap);
        assert!(!r.cap_touched);
        assert!(matches!(r.infeasible, Some(Infeasibility::PrefixExceedsDimension { .. })));
    }

    #[test]
    fn quadrics_slice() {
        let r = enumerate(&EnumerationQuery::new(2, 1, 2).with_max_weight(10)).unwrap();
        assert_eq!(r.survivors, vec![cand(&[1; 5], &[2, 2])]);
        assert!(!r.cap_touched);
    }

    #[test]
    fn index_two_threefold_hypersurfaces() {
        let r = enumerate(&EnumerationQuery::new(3, 2, 1).with_max_weight(50)).unwrap();
        assert_eq!(
            r.survivors,
            vec![
                cand(&[1; 5], &[3]),
                cand(&ones_then(4, &[2]), &[4]),
                cand(&ones_then(3, &[2, 3]), &[6]),
            ]
        );
        assert!(!r.cap_touched);
    }

    #[test]
    fn six_dimensional_survey_contains_named_family() {
        let r = enumerate(&EnumerationQuery::new(6, 1, 4).with_max_weight(20)).unwrap();
        assert!(r.survivors.contains(&cand(&ones_then(10, &[3]), &[2, 2, 2, 6])));
        assert!(r.cap_touched);
    }

    #[test]
    fn streaming_matches_batch_for_any_worker_count() {
        let q = EnumerationQuery::new(5, 1, 3).with_max_weight(12);
        let batch = enumerate_with(&q, SearchOptions::workers(1)).unwrap();
        for workers in [0, 2, 4] {
            let mut seen = Vec::new();
            let r = enumerate_streaming(&q, SearchOptions::workers(workers), |c| seen.push(c.clone()))
                .unwrap();
            assert_eq!(r, batch);
            assert_eq!(seen, batch.survivors);
        }
    }

    #[test]
    fn codim_zero() {
        let r = enumerate(&EnumerationQuery::new(3, 4, 0)).unwrap();
        assert_eq!(r.survivors, vec![cand(&[1; 4], &[])]);
        let raw = enumerate(&EnumerationQuery::new(2, 5, 0).with_profile(Profile::empty())).unwrap();
        assert_eq!(raw.survivors, vec![cand(&[1, 1, 3], &[]), cand(&[1, 2, 2], &[])]);
        let r = enumerate(&EnumerationQuery::new(3, 2, 0)).unwrap();
        assert!(matches!(r.infeasible, Some(Infeasibility::IndexBelowWeightCount { .. })));
        // largest weight could be 8 > cap 3
        let r = enumerate(&EnumerationQuery::new(1, 9, 0).with_max_weight(3)).unwrap();
        assert!(r.cap_touched);
    }

    #[test]
    fn query_validation() {
        assert_eq!(
            enumerate(&EnumerationQuery::new(2, 1, 1).with_max_weight(0)),
            Err(EnumerationError::CapTooSmall(0))
        );
        assert!(matches!(
            enumerate(&EnumerationQuery::new(0, 1, 1)),
            Err(EnumerationError::InvalidQuery(_))
        ));
        assert!(matches!(
            enumerate(&EnumerationQuery::new(2, -1, 1)),
            Err(EnumerationError::InvalidQuery(_))
        ));
    }

    #[test]
    fn default_cap() {
        assert_eq!(EnumerationQuery::new(6, 1, 4).max_weight, 44);
    }

    #[test]
    fn starved_cap_is_reported() {
        let r = enumerate(&EnumerationQuery::new(3, 2, 1).with_max_weight(2)).unwrap();
        assert!(r.cap_touched);
        assert!(!r.survivors.contains(&cand(&ones_then(3, &[2, 3]), &[6])));
    }
}
