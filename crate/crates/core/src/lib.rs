//! Enumeration, filtering and classification of weighted complete
//! intersections by their weight and degree tuples.
//!
//! * [`candidate`]: tuples, normalization, Fano index, gcd classes.
//! * [`filters`]: necessary conditions with re-checkable witnesses.
//! * [`transforms`]: wellformization, linear cone removal, hyperplane section.
//! * [`enumerator`]: pruned exhaustive search of a `(n, i, k)` slice.
//! * [`verify`]: classification statements checked against the search.

#![forbid(unsafe_code)]

pub mod candidate;
pub mod enumerator;
pub mod filters;
pub mod transforms;
pub mod verify;

pub use candidate::{gcd, gcd_all, gcd_classes, Candidate, CandidateError, GcdClass, IndexValue, TupleKind};
pub use enumerator::{
    enumerate, enumerate_streaming, enumerate_with, EnumerationError, EnumerationQuery, EnumerationResult,
    Infeasibility, SearchOptions, SearchStats,
};
pub use filters::{run_all, FilterError, FilterId, FilterReport, FilterVerdict, Profile, Witness};
pub use transforms::{hyperplane_section, unconize, wellformize, TransformError, TransformKind, TransformStep, TransformTrace};
pub use verify::{CaseId, CountReport, Mismatch, SliceCheck, VerificationResult, Verdict, VerifyError};
