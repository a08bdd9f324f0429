//! Executable checkers for the power-monoid results, one per statement.
//!
//! Each checker returns a typed result; [`Record`] is the line-oriented form
//! used in reports. A conclusion is only asserted when its hypotheses hold.
//! Violations observed outside the hypotheses are kept as findings and never
//! count as failures.

use std::fmt;

mod equations;
mod order;
mod pullback;
mod relations;
pub mod suites;

pub use equations::{
    count_equation_solutions, two_element_case_count, CaseCount, EquationCount, Universe,
};
pub use order::{
    check_order_stabilization, check_shifted_power, stabilization_index, ShiftedPowerCheck,
    StabilizationCheck,
};
pub use pullback::{
    check_two_to_two, extract_pullback, pullback_report, Hypotheses, Pullback, PullbackReport,
    TwoToTwoCheck, Violation,
};
pub use relations::{check_cross_relation, minimal_relation, CrossRelationCheck, MinimalRelation};

use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::subset::MAX_BASE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// `Pass`/`Fail` when the hypotheses hold, otherwise `NotApplicable`.
    pub fn gated(hypothesis: bool, ok: bool) -> Self {
        if hypothesis {
            Self::from_bool(ok)
        } else {
            Status::NotApplicable
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        })
    }
}

/// One report line: checker, input descriptor, status, witness payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub checker: &'static str,
    pub input: String,
    pub status: Status,
    pub witness: String,
    /// A violated conclusion whose hypotheses do not hold.
    pub finding: bool,
}

impl Record {
    pub fn new(checker: &'static str, input: impl Into<String>, status: Status) -> Self {
        Self {
            checker,
            input: input.into(),
            status,
            witness: String::new(),
            finding: false,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = witness.into();
        self
    }

    pub fn as_finding(mut self) -> Self {
        self.finding = true;
        self
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.finding {
            format!("{} (finding)", self.status)
        } else {
            self.status.to_string()
        };
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.checker, self.input, status, self.witness
        )
    }
}

/// Records of one suite run.
#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub name: String,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.records.extend(other.records);
    }

    pub fn cases(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.finding)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

pub(crate) fn require_subset_base(m: &FiniteMonoid) -> Result<()> {
    if m.size() > MAX_BASE {
        return Err(Error::SizeLimitExceeded {
            what: "subset base",
            required: m.size(),
            limit: MAX_BASE,
        });
    }
    Ok(())
}
