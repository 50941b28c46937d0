//! Executable checks of the classification statements over enumerator output.
//!
//! Each check runs one or more `(n, i, k)` slices and compares the survivors
//! with the expected families.
//!
//! * Case (i): `k <= n - i + 1`, so every slice above that is empty.
//! * Case (ii): `k = n - i + 1` leaves only `k` quadrics in `P^{n+k}`.
//! * Case (iii): `k = n - i >= 2` leaves only `k - 1` quadrics and a cubic.
//! * Hypersurfaces of index `n - 1`: the cubic, the quartic in
//!   `P(1^{n+1}, 2)` and the sextic in `P(1^n, 2, 3)`.
//! * Codimension `n - i - 1`: a survey. Named families must appear; counts are
//!   only compared and flagged, since the filters are necessary conditions and
//!   may leave extra tuples.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use thiserror::Error;

use crate::candidate::Candidate;
use crate::enumerator::{enumerate, EnumerationError, EnumerationQuery, EnumerationResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("dimension range {start}..{end} is empty")]
    EmptyRange { start: usize, end: usize },
    #[error("case {case} needs n >= {min}, got {n}")]
    DimensionTooSmall { case: CaseId, min: usize, n: usize },
    #[error("survey needs codimension n - i - 1 >= 1, got n = {n}, i = {index}")]
    NoSurveySlice { n: usize, index: i64 },
    #[error("index must be positive, got {0}")]
    NonPositiveIndex(i64),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    CaseI,
    CaseII,
    CaseIII,
    HypersurfaceRemark,
    CodimSurvey,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::CaseI => "i",
            CaseId::CaseII => "ii",
            CaseId::CaseIII => "iii",
            CaseId::HypersurfaceRemark => "hypersurface",
            CaseId::CodimSurvey => "survey",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mismatch {
    /// Survived but is not an expected family.
    Unexpected,
    /// Expected but did not survive.
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted {
        candidate: Candidate,
        mismatch: Mismatch,
    },
    InconclusiveCapTouched,
}

/// One enumerated slice with what it was expected to contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceCheck {
    pub dim: usize,
    pub index: i64,
    pub codim: usize,
    pub expected: Vec<Candidate>,
    pub result: EnumerationResult,
}

/// Survey counts next to the published value, if there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub actual: usize,
    pub expected: Option<usize>,
}

impl CountReport {
    pub fn discrepancy(&self) -> bool {
        self.expected.is_some_and(|e| e != self.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyParams {
    pub dims: RangeInclusive<usize>,
    pub indices: Option<RangeInclusive<i64>>,
    /// `None`: the default cap of each slice.
    pub cap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationResult {
    pub case: CaseId,
    pub params: VerifyParams,
    pub slices: Vec<SliceCheck>,
    pub verdict: Verdict,
    pub count: Option<CountReport>,
}

impl VerificationResult {
    /// Expected families over all slices.
    pub fn expected(&self) -> impl Iterator<Item = &Candidate> {
        self.slices.iter().flat_map(|s| s.expected.iter())
    }
}

fn ones_then(count: usize, rest: &[i64]) -> Vec<i64> {
    let mut w = vec![1; count];
    w.extend_from_slice(rest);
    w
}

fn family(weights: Vec<i64>, degrees: Vec<i64>) -> Candidate {
    Candidate::new(weights, degrees).expect("family tuples are valid")
}

/// `k` quadrics in `P^{n+k}`.
pub fn quadrics(n: usize, k: usize) -> Candidate {
    family(vec![1; n + k + 1], vec![2; k])
}

/// `k - 1` quadrics and a cubic in `P^{n+k}`.
pub fn quadrics_and_cubic(n: usize, k: usize) -> Candidate {
    let mut d = vec![2; k - 1];
    d.push(3);
    family(vec![1; n + k + 1], d)
}

/// The three hypersurface families of dimension `n` and index `n - 1`.
pub fn index_n_minus_one_hypersurfaces(n: usize) -> Vec<Candidate> {
    vec![
        family(vec![1; n + 2], vec![3]),
        family(ones_then(n + 1, &[2]), vec![4]),
        family(ones_then(n, &[2, 3]), vec![6]),
    ]
}

/// Families named for a survey slice, and the published family count.
pub fn survey_reference(n: usize, index: i64) -> (Vec<Candidate>, Option<usize>) {
    match (n, index) {
        (5, 1) => (Vec::new(), Some(5)),
        (6, 1) => (vec![family(ones_then(10, &[3]), vec![2, 2, 2, 6])], Some(5)),
        _ => (Vec::new(), None),
    }
}

fn check_range(dims: &RangeInclusive<usize>, case: CaseId, min: usize) -> Result<(), VerifyError> {
    if dims.is_empty() {
        return Err(VerifyError::EmptyRange {
            start: *dims.start(),
            end: *dims.end(),
        });
    }
    if *dims.start() < min {
        return Err(VerifyError::DimensionTooSmall {
            case,
            min,
            n: *dims.start(),
        });
    }
    Ok(())
}

fn run_slices(
    slices: Vec<(usize, i64, usize, Vec<Candidate>)>,
    cap: Option<i64>,
) -> Result<Vec<SliceCheck>, VerifyError> {
    slices
        .into_par_iter()
        .map(|(dim, index, codim, mut expected)| {
            let mut q = EnumerationQuery::new(dim, index, codim);
            if let Some(cap) = cap {
                q = q.with_max_weight(cap);
            }
            expected.sort();
            Ok(SliceCheck {
                dim,
                index,
                codim,
                expected,
                result: enumerate(&q)?,
            })
        })
        .collect()
}

/// Exact-set verdict over all slices.
fn exact_verdict(slices: &[SliceCheck]) -> Verdict {
    let mut touched = false;
    let mut missing = None;
    for s in slices {
        if let Some(c) = s.result.survivors.iter().find(|c| !s.expected.contains(c)) {
            return Verdict::Refuted {
                candidate: c.clone(),
                mismatch: Mismatch::Unexpected,
            };
        }
        touched |= s.result.cap_touched;
        if missing.is_none() {
            missing = s.expected.iter().find(|c| !s.result.survivors.contains(c)).cloned();
        }
    }
    match (missing, touched) {
        (_, true) => Verdict::InconclusiveCapTouched,
        (Some(candidate), false) => Verdict::Refuted {
            candidate,
            mismatch: Mismatch::Missing,
        },
        (None, false) => Verdict::Verified,
    }
}

fn finish(case: CaseId, params: VerifyParams, slices: Vec<SliceCheck>) -> VerificationResult {
    let verdict = exact_verdict(&slices);
    VerificationResult {
        case,
        params,
        slices,
        verdict,
        count: None,
    }
}

/// Every slice with `k` from `n - i + 2` to `n + 1` is empty. `indices`
/// defaults to `1..=n-1` for each `n` and is clipped to that range.
pub fn verify_case_i(
    dims: RangeInclusive<usize>,
    indices: Option<RangeInclusive<i64>>,
    cap: Option<i64>,
) -> Result<VerificationResult, VerifyError> {
    check_range(&dims, CaseId::CaseI, 2)?;
    let mut plan = Vec::new();
    for n in dims.clone() {
        let top = n as i64 - 1;
        let (lo, hi) = indices
            .as_ref()
            .map_or((1, top), |r| (*r.start().max(&1), *r.end().min(&top)));
        for i in lo..=hi {
            for k in (n as i64 - i + 2) as usize..=n + 1 {
                plan.push((n, i, k, Vec::new()));
            }
        }
    }
    let slices = run_slices(plan, cap)?;
    Ok(finish(
        CaseId::CaseI,
        VerifyParams {
            dims,
            indices,
            cap,
        },
        slices,
    ))
}

/// For `i = 1..=n` and `k = n - i + 1`, only `k` quadrics survive.
pub fn verify_case_ii(
    dims: RangeInclusive<usize>,
    cap: Option<i64>,
) -> Result<VerificationResult, VerifyError> {
    check_range(&dims, CaseId::CaseII, 2)?;
    let mut plan = Vec::new();
    for n in dims.clone() {
        for i in 1..=n as i64 {
            let k = (n as i64 - i + 1) as usize;
            plan.push((n, i, k, vec![quadrics(n, k)]));
        }
    }
    let slices = run_slices(plan, cap)?;
    Ok(finish(
        CaseId::CaseII,
        VerifyParams {
            dims,
            indices: None,
            cap,
        },
        slices,
    ))
}

/// For `k = n - i >= 2`, only `k - 1` quadrics and a cubic survive.
pub fn verify_case_iii(
    dims: RangeInclusive<usize>,
    cap: Option<i64>,
) -> Result<VerificationResult, VerifyError> {
    check_range(&dims, CaseId::CaseIII, 3)?;
    let mut plan = Vec::new();
    for n in dims.clone() {
        for i in 1..=n as i64 - 2 {
            let k = (n as i64 - i) as usize;
            plan.push((n, i, k, vec![quadrics_and_cubic(n, k)]));
        }
    }
    let slices = run_slices(plan, cap)?;
    Ok(finish(
        CaseId::CaseIII,
        VerifyParams {
            dims,
            indices: None,
            cap,
        },
        slices,
    ))
}

/// `k = 1`, `i = n - 1`: exactly three families.
pub fn verify_hypersurface_remark(
    dims: RangeInclusive<usize>,
    cap: Option<i64>,
) -> Result<VerificationResult, VerifyError> {
    check_range(&dims, CaseId::HypersurfaceRemark, 3)?;
    let plan = dims
        .clone()
        .map(|n| (n, n as i64 - 1, 1, index_n_minus_one_hypersurfaces(n)))
        .collect();
    let slices = run_slices(plan, cap)?;
    Ok(finish(
        CaseId::HypersurfaceRemark,
        VerifyParams {
            dims,
            indices: None,
            cap,
        },
        slices,
    ))
}

/// The slice `k = n - i - 1`. Verified when every named family is present;
/// the survivor count is reported next to the published one.
pub fn survey_codim(n: usize, index: i64, cap: Option<i64>) -> Result<VerificationResult, VerifyError> {
    if index < 1 {
        return Err(VerifyError::NonPositiveIndex(index));
    }
    let k = n as i64 - index - 1;
    if k < 1 {
        return Err(VerifyError::NoSurveySlice { n, index });
    }
    let (named, expected_count) = survey_reference(n, index);
    let slices = run_slices(vec![(n, index, k as usize, named)], cap)?;
    let slice = &slices[0];
    let missing = slice
        .expected
        .iter()
        .find(|c| !slice.result.survivors.contains(c))
        .cloned();
    let verdict = match missing {
        None => Verdict::Verified,
        Some(_) if slice.result.cap_touched => Verdict::InconclusiveCapTouched,
        Some(candidate) => Verdict::Refuted {
            candidate,
            mismatch: Mismatch::Missing,
        },
    };
    let count = Some(CountReport {
        actual: slice.result.survivors.len(),
        expected: expected_count,
    });
    Ok(VerificationResult {
        case: CaseId::CodimSurvey,
        params: VerifyParams {
            dims: n..=n,
            indices: Some(index..=index),
            cap,
        },
        slices,
        verdict,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_i_small() {
        let r = verify_case_i(2..=5, None, Some(15)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.slices.iter().all(|s| s.result.survivors.is_empty()));
        let single = verify_case_i(4..=4, Some(2..=2), Some(15)).unwrap();
        assert_eq!(single.slices.len(), 2);
        assert_eq!(single.slices[0].codim, 4);
    }

    #[test]
    fn case_ii_and_iii() {
        let r = verify_case_ii(2..=6, Some(15)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let s = r.slices.iter().find(|s| s.dim == 5 && s.index == 4).unwrap();
        assert_eq!(s.result.survivors, vec![quadrics(5, 2)]);

        let r = verify_case_iii(3..=6, Some(15)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let s = r.slices.iter().find(|s| s.dim == 5 && s.index == 3).unwrap();
        assert_eq!(s.result.survivors, vec![quadrics_and_cubic(5, 2)]);
    }

    #[test]
    fn closed_cases_never_touch_a_cap_of_four() {
        for r in [verify_case_ii(2..=6, Some(4)).unwrap(), verify_case_iii(3..=6, Some(4)).unwrap()] {
            assert_eq!(r.verdict, Verdict::Verified, "{:?}", r.case);
        }
    }

    #[test]
    fn hypersurfaces() {
        let r = verify_hypersurface_remark(3..=6, Some(50)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let starved = verify_hypersurface_remark(3..=3, Some(2)).unwrap();
        assert_eq!(starved.verdict, Verdict::InconclusiveCapTouched);
    }

    #[test]
    fn survey_six_dimensional() {
        let r = survey_codim(6, 1, Some(20)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.count.as_ref().unwrap().expected, Some(5));
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            verify_case_ii(1..=3, None),
            Err(VerifyError::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            verify_case_iii(2..=3, None),
            Err(VerifyError::DimensionTooSmall { .. })
        ));
        assert!(matches!(survey_codim(3, 2, None), Err(VerifyError::NoSurveySlice { .. })));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=3;
        assert!(matches!(verify_case_i(empty, None, None), Err(VerifyError::EmptyRange { .. })));
    }

    #[test]
    fn unexpected_survivor_refutes() {
        // expectation deliberately wrong: drop the sextic
        let mut expected = index_n_minus_one_hypersurfaces(3);
        expected.pop();
        let slices = run_slices(vec![(3, 2, 1, expected)], Some(50)).unwrap();
        assert!(matches!(
            exact_verdict(&slices),
            Verdict::Refuted {
                mismatch: Mismatch::Unexpected,
                ..
            }
        ));
    }
}
