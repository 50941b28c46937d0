//! Tuple-level rewrites: wellformization, linear cone removal and hyperplane
//! section. Each returns a [`TransformTrace`] whose steps replay exactly.

use std::fmt;

use thiserror::Error;

use crate::candidate::{gcd, gcd_all, join, Candidate, CandidateError};
use crate::filters::ambient_well_formed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("gcd of all weights is {gcd}, expected 1")]
    OverallGcdNotOne { gcd: i64 },
    #[error("degree d_{j} = {degree} is not divisible by the Veronese factor {factor}")]
    DegreeNotDivisible { j: usize, degree: i64, factor: i64 },
    #[error("candidate is not normalized")]
    NotNormalized,
    #[error("a_0 = {a0}, a unit weight is required")]
    NoUnitWeight { a0: i64 },
    #[error("Fano index {index} is not positive")]
    NotFano { index: i64 },
    #[error("candidate has dimension zero")]
    DimensionZero,
    #[error("removal would leave no weights")]
    DegenerateEmpty,
    #[error("step {step} does not apply: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error(transparent)]
    Candidate(#[from] CandidateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    Wellformize,
    Unconize,
    HyperplaneSection,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Wellformize => "wellformize",
            TransformKind::Unconize => "unconize",
            TransformKind::HyperplaneSection => "section",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformStep {
    /// Divide `a_i` by `factor` for every `i` in `affected` (all positions but
    /// `exempt`) and divide every degree by `factor`.
    Veronese {
        factor: i64,
        exempt: usize,
        affected: Vec<usize>,
    },
    /// Remove `a_weight_index` and `d_degree_index` (1-based), which are equal.
    RemovePair {
        weight_index: usize,
        degree_index: usize,
        value: i64,
    },
    /// Remove the unit weight at `position`.
    DropUnitWeight { position: usize },
    /// Sort both lists.
    Normalize,
}

impl fmt::Display for TransformStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformStep::Veronese {
                factor,
                exempt,
                affected,
            } => {
                let pos: Vec<String> = affected.iter().map(|p| format!("a_{p}")).collect();
                write!(
                    f,
                    "veronese factor {factor}: divide {} and all degrees (a_{exempt} exempt)",
                    pos.join(",")
                )
            }
            TransformStep::RemovePair {
                weight_index,
                degree_index,
                value,
            } => write!(f, "remove pair a_{weight_index} = d_{degree_index} = {value}"),
            TransformStep::DropUnitWeight { position } => write!(f, "drop unit weight a_{position}"),
            TransformStep::Normalize => f.write_str("normalize"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTrace {
    pub kind: TransformKind,
    pub before: Candidate,
    pub after: Candidate,
    pub steps: Vec<TransformStep>,
}

impl TransformTrace {
    pub fn is_identity(&self) -> bool {
        self.before == self.after
    }

    /// Re-applies `steps` to `before`.
    pub fn replay(&self) -> Result<Candidate, TransformError> {
        replay(&self.before, &self.steps)
    }
}

impl fmt::Display for TransformTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "transform: {}", self.kind)?;
        writeln!(
            f,
            "before: weights {}; degrees {}",
            join(self.before.weights()),
            join(self.before.degrees())
        )?;
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: {step}", i + 1)?;
        }
        write!(
            f,
            "after: weights {}; degrees {}",
            join(self.after.weights()),
            join(self.after.degrees())
        )
    }
}

struct Work {
    weights: Vec<i64>,
    degrees: Vec<i64>,
}

impl Work {
    fn from(c: &Candidate) -> Self {
        Work {
            weights: c.weights().to_vec(),
            degrees: c.degrees().to_vec(),
        }
    }

    fn apply(&mut self, step: &TransformStep, index: usize) -> Result<(), TransformError> {
        let bad = |reason: String| TransformError::InvalidStep { step: index, reason };
        match step {
            TransformStep::Veronese {
                factor,
                exempt,
                affected,
            } => {
                if *factor < 2 || *exempt >= self.weights.len() {
                    return Err(bad("bad factor or exempt position".into()));
                }
                for &i in affected {
                    if i >= self.weights.len() || i == *exempt || self.weights[i] % factor != 0 {
                        return Err(bad(format!("a_{i} not divisible by {factor}")));
                    }
                    self.weights[i] /= factor;
                }
                for d in &mut self.degrees {
                    if *d % factor != 0 {
                        return Err(bad(format!("degree {d} not divisible by {factor}")));
                    }
                    *d /= factor;
                }
            }
            TransformStep::RemovePair {
                weight_index,
                degree_index,
                value,
            } => {
                let (i, j) = (*weight_index, *degree_index);
                if i >= self.weights.len()
                    || j == 0
                    || j > self.degrees.len()
                    || self.weights[i] != *value
                    || self.degrees[j - 1] != *value
                {
                    return Err(bad(format!("a_{i} = d_{j} = {value} does not hold")));
                }
                if self.weights.len() == 1 {
                    return Err(TransformError::DegenerateEmpty);
                }
                self.weights.remove(i);
                self.degrees.remove(j - 1);
            }
            TransformStep::DropUnitWeight { position } => {
                if self.weights.get(*position) != Some(&1) {
                    return Err(bad(format!("a_{position} is not 1")));
                }
                self.weights.remove(*position);
            }
            TransformStep::Normalize => {
                self.weights.sort_unstable();
                self.degrees.sort_unstable();
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<Candidate, TransformError> {
        Ok(Candidate::new(self.weights, self.degrees)?)
    }
}

pub fn replay(before: &Candidate, steps: &[TransformStep]) -> Result<Candidate, TransformError> {
    let mut work = Work::from(before);
    for (i, step) in steps.iter().enumerate() {
        work.apply(step, i + 1)?;
    }
    work.finish()
}

/// Repeatedly divides a common factor out of all weights but one (and out of
/// every degree) until the ambient space is well formed. The result is
/// normalized.
///
/// Each round picks the first position whose complement has gcd `a > 1` and
/// uses that whole gcd as the factor. The overall gcd stays 1 and the product
/// of the weights drops each round, so the loop terminates.
pub fn wellformize(c: &Candidate) -> Result<TransformTrace, TransformError> {
    let overall = gcd_all(c.weights().iter().copied());
    if overall != 1 {
        return Err(TransformError::OverallGcdNotOne { gcd: overall });
    }
    let mut work = Work::from(c);
    let mut steps = Vec::new();
    loop {
        let w = &work.weights;
        let Some((exempt, factor)) = (0..w.len()).filter(|_| w.len() > 1).find_map(|i| {
            let g = w
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != i)
                .fold(0, |acc, (_, &a)| gcd(acc, a));
            (g > 1).then_some((i, g))
        }) else {
            break;
        };
        if let Some((j, &degree)) = work.degrees.iter().enumerate().find(|(_, &d)| d % factor != 0) {
            return Err(TransformError::DegreeNotDivisible {
                j: j + 1,
                degree,
                factor,
            });
        }
        let step = TransformStep::Veronese {
            factor,
            exempt,
            affected: (0..w.len()).filter(|&p| p != exempt).collect(),
        };
        work.apply(&step, steps.len() + 1)?;
        steps.push(step);
    }
    if !(is_sorted(&work.weights) && is_sorted(&work.degrees)) {
        work.apply(&TransformStep::Normalize, steps.len() + 1)?;
        steps.push(TransformStep::Normalize);
    }
    let after = work.finish()?;
    debug_assert!(ambient_well_formed(&after).passed);
    Ok(TransformTrace {
        kind: TransformKind::Wellformize,
        before: c.clone(),
        after,
        steps,
    })
}

fn is_sorted(xs: &[i64]) -> bool {
    xs.windows(2).all(|p| p[0] <= p[1])
}

/// Removes matching (weight, degree) pairs until no degree equals a weight.
///
/// Ties go to the largest degree value, then the largest degree position, then
/// the largest weight position. Both `N` and `k` drop by one per step, so the
/// dimension and the index are unchanged.
pub fn unconize(c: &Candidate) -> Result<TransformTrace, TransformError> {
    let mut work = Work::from(c);
    let mut steps = Vec::new();
    loop {
        let best = work
            .degrees
            .iter()
            .enumerate()
            .filter_map(|(j, &d)| {
                work.weights
                    .iter()
                    .rposition(|&a| a == d)
                    .map(|i| (d, j, i))
            })
            .max();
        let Some((value, j, i)) = best else { break };
        let step = TransformStep::RemovePair {
            weight_index: i,
            degree_index: j + 1,
            value,
        };
        work.apply(&step, steps.len() + 1)?;
        steps.push(step);
    }
    Ok(TransformTrace {
        kind: TransformKind::Unconize,
        before: c.clone(),
        after: work.finish()?,
        steps,
    })
}

/// Drops the unit weight `a_0`: a general member of `|O_X(1)|`.
///
/// The degrees are unchanged; `n` and the index both drop by one.
pub fn hyperplane_section(c: &Candidate) -> Result<TransformTrace, TransformError> {
    if !c.is_normalized() {
        return Err(TransformError::NotNormalized);
    }
    if c.weights()[0] != 1 {
        return Err(TransformError::NoUnitWeight { a0: c.weights()[0] });
    }
    let index = c.fano_index()?;
    if !index.is_fano() {
        return Err(TransformError::NotFano { index: index.value() });
    }
    if c.dim() == 0 {
        return Err(TransformError::DimensionZero);
    }
    let step = TransformStep::DropUnitWeight { position: 0 };
    let mut work = Work::from(c);
    work.apply(&step, 1)?;
    Ok(TransformTrace {
        kind: TransformKind::HyperplaneSection,
        before: c.clone(),
        after: work.finish()?,
        steps: vec![step],
    })
}
