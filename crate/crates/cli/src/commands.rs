use std::fmt;
use std::io::{self, BufWriter, Write};

use wci_core::verify::{survey_codim, verify_case_i, verify_case_ii, verify_case_iii, verify_hypersurface_remark};
use wci_core::{
    enumerate_streaming, hyperplane_section, run_all, unconize, wellformize, Candidate, EnumerationError,
    EnumerationQuery, Mismatch, SearchOptions, VerificationResult, Verdict,
};

use crate::args::{CaseArg, CheckArgs, Command, EnumerateArgs, TransformArg, TransformArgs, TupleArgs, VerifyArgs};
use crate::output::RecordWriter;
use crate::record::OutputRecord;
use crate::{exit, MAX_WEIGHT_ENV};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range input.
    Input(String),
    /// The operation itself failed on valid input.
    Failed(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => exit::INPUT_ERROR,
            CliError::Failed(_) | CliError::Io(_) => exit::FAIL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Failed(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "write failed: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check(a) => check(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Verify(a) => verify(a),
        Command::Transform(a) => transform(a),
    }
}

fn candidate(t: &TupleArgs) -> Result<Candidate, CliError> {
    Candidate::new(t.weights.0.clone(), t.degrees.0.clone()).map_err(input)
}

/// `--max-weight`, else the environment override, else `None`.
pub fn resolve_cap(flag: Option<i64>) -> Result<Option<i64>, CliError> {
    let cap = match flag {
        Some(w) => Some(w),
        None => match std::env::var(MAX_WEIGHT_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::Input(format!("{MAX_WEIGHT_ENV}: `{v}` is not an integer")))?,
            ),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(CliError::Input(format!("{MAX_WEIGHT_ENV}: {e}"))),
        },
    };
    match cap {
        Some(w) if w < 1 => Err(CliError::Input(format!("max weight must be positive, got {w}"))),
        _ => Ok(cap),
    }
}

fn check(a: CheckArgs) -> Result<u8, CliError> {
    let given = candidate(&a.tuple)?;
    let c = given.normalize();
    if c != given {
        eprintln!("note: checking the sorted tuple {c}");
    }
    let report = run_all(&c, &a.profile.0).map_err(input)?;
    let record = OutputRecord::from_report(&report).map_err(input)?;
    let mut w = RecordWriter::new(io::stdout().lock(), a.format, a.profile.0.filters())?;
    w.write(&record)?;
    w.finish()?;
    Ok(if record.passed() { exit::PASS } else { exit::FAIL })
}

fn enumerate(a: EnumerateArgs) -> Result<u8, CliError> {
    let mut q = EnumerationQuery::new(a.dim, a.index, a.codim).with_profile(a.profile.0);
    if let Some(cap) = resolve_cap(a.max_weight)? {
        q = q.with_max_weight(cap);
    }
    q.validate().map_err(input)?;

    let profile = q.profile.clone();
    let mut w = RecordWriter::new(BufWriter::new(io::stdout().lock()), a.format, profile.filters())?;
    let mut failure: Option<CliError> = None;
    let result = enumerate_streaming(&q, SearchOptions::workers(a.workers), |c| {
        if failure.is_some() {
            return;
        }
        let written = run_all(c, &profile)
            .map_err(|e| CliError::Failed(e.to_string()))
            .and_then(|r| OutputRecord::from_report(&r).map_err(|e| CliError::Failed(e.to_string())))
            .and_then(|r| w.write(&r).map_err(CliError::Io));
        if let Err(e) = written {
            failure = Some(e);
        }
    })
    .map_err(|e| match e {
        EnumerationError::Filter(f) => CliError::Failed(f.to_string()),
        other => input(other),
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    w.finish()?;

    let mut summary = format!(
        "survivors: {}; max_weight: {}; cap_touched: {}; nodes: {}; tested: {}",
        result.survivors.len(),
        q.max_weight,
        result.cap_touched,
        result.stats.nodes,
        result.stats.tested
    );
    if let Some(why) = result.infeasible {
        summary.push_str(&format!("; {why}"));
    }
    eprintln!("{summary}");
    Ok(exit::PASS)
}

fn verify(a: VerifyArgs) -> Result<u8, CliError> {
    let cap = resolve_cap(a.max_weight)?;
    let dims = a.dim.0;
    let indices = a.index.map(|r| r.0);
    if indices.is_some() && !matches!(a.case, CaseArg::I | CaseArg::Survey) {
        return Err(CliError::Input("--index applies to cases i and survey only".into()));
    }
    let results = match a.case {
        CaseArg::I => vec![verify_case_i(dims, indices, cap).map_err(input)?],
        CaseArg::Ii => vec![verify_case_ii(dims, cap).map_err(input)?],
        CaseArg::Iii => vec![verify_case_iii(dims, cap).map_err(input)?],
        CaseArg::Hypersurface => vec![verify_hypersurface_remark(dims, cap).map_err(input)?],
        CaseArg::Survey => {
            let mut out = Vec::new();
            for n in dims {
                for i in indices.clone().unwrap_or(1..=1) {
                    out.push(survey_codim(n, i, cap).map_err(input)?);
                }
            }
            out
        }
    };

    let mut out = BufWriter::new(io::stdout().lock());
    for r in &results {
        write_report(&mut out, r)?;
    }
    out.flush()?;

    let code = if results.iter().any(|r| matches!(r.verdict, Verdict::Refuted { .. })) {
        exit::FAIL
    } else if results.iter().any(|r| r.verdict == Verdict::InconclusiveCapTouched) {
        exit::INCONCLUSIVE
    } else {
        exit::PASS
    };
    Ok(code)
}

fn list(cs: &[Candidate]) -> String {
    if cs.is_empty() {
        return "none".into();
    }
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}

pub fn write_report<W: Write>(out: &mut W, r: &VerificationResult) -> io::Result<()> {
    let p = &r.params;
    let cap = p.cap.map_or("per-slice default".to_string(), |c| c.to_string());
    write!(out, "case {}: n {}..{}", r.case, p.dims.start(), p.dims.end())?;
    if let Some(i) = &p.indices {
        write!(out, ", i {}..{}", i.start(), i.end())?;
    }
    writeln!(out, ", max weight {cap}")?;
    for s in &r.slices {
        writeln!(
            out,
            "  n={} i={} k={} max_weight={} cap_touched={}",
            s.dim, s.index, s.codim, s.result.query.max_weight, s.result.cap_touched
        )?;
        if let Some(why) = s.result.infeasible {
            writeln!(out, "    {why}")?;
        }
        writeln!(out, "    expected: {}", list(&s.expected))?;
        writeln!(out, "    actual:   {}", list(&s.result.survivors))?;
    }
    if let Some(count) = &r.count {
        match count.expected {
            Some(e) if count.discrepancy() => {
                writeln!(out, "  count: {} survivors, reference count {e}: MISMATCH (flagged)", count.actual)?
            }
            Some(e) => writeln!(out, "  count: {} survivors, reference count {e}: match", count.actual)?,
            None => writeln!(out, "  count: {} survivors, no reference count", count.actual)?,
        }
        writeln!(
            out,
            "  note: the filters are necessary conditions only, so a count that differs from the reference is reported, not failed"
        )?;
    }
    match &r.verdict {
        Verdict::Verified => writeln!(out, "verdict: verified"),
        Verdict::Refuted { candidate, mismatch } => {
            let what = match mismatch {
                Mismatch::Unexpected => "unexpected survivor",
                Mismatch::Missing => "missing family",
            };
            writeln!(out, "verdict: refuted ({what} {candidate})")
        }
        Verdict::InconclusiveCapTouched => writeln!(out, "verdict: inconclusive (cap touched)"),
    }
}

fn transform(a: TransformArgs) -> Result<u8, CliError> {
    let c = candidate(&a.tuple)?;
    let trace = match a.kind {
        TransformArg::Wellformize => wellformize(&c),
        TransformArg::Unconize => unconize(&c),
        TransformArg::Section => hyperplane_section(&c),
    }
    .map_err(|e| CliError::Failed(format!("transform failed: {e}")))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{trace}")?;
    Ok(exit::PASS)
}
