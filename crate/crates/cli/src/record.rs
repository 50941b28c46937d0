use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use wci_core::{Candidate, CandidateError, FilterId, FilterReport, Witness};

/// One checked tuple as emitted by `check` and `enumerate`.
///
/// Maps are ordered by filter id, so the JSON encoding of a record is a
/// function of its content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
    pub dim: usize,
    pub codim: usize,
    pub fano_index: i64,
    pub verdicts: BTreeMap<FilterId, bool>,
    /// Failed filters only.
    pub witnesses: BTreeMap<FilterId, Witness>,
}

impl OutputRecord {
    pub fn from_report(report: &FilterReport) -> Result<Self, CandidateError> {
        let c = &report.candidate;
        Ok(OutputRecord {
            weights: c.weights().to_vec(),
            degrees: c.degrees().to_vec(),
            dim: c.dim(),
            codim: c.codim(),
            fano_index: c.fano_index()?.value(),
            verdicts: report.verdicts.iter().map(|v| (v.filter, v.passed)).collect(),
            witnesses: report
                .verdicts
                .iter()
                .filter_map(|v| v.witness.clone().map(|w| (v.filter, w)))
                .collect(),
        })
    }

    pub fn candidate(&self) -> Result<Candidate, CandidateError> {
        Candidate::new(self.weights.clone(), self.degrees.clone())
    }

    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&p| p)
    }

    pub fn failed_filters(&self) -> impl Iterator<Item = FilterId> + '_ {
        self.verdicts.iter().filter(|(_, &p)| !p).map(|(&id, _)| id)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records contain only plain data")
    }
}
