//! Machine-readable run reports and the exit-code contract.

use crate::certify::{CertCheck, Status};
use crate::harness::TrialRecord;
use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Violated,
    Inconclusive,
    Informational,
}

/// Anything that can be tallied into a summary.
pub trait Tallied {
    fn outcome(&self) -> Outcome;
}

impl Tallied for CertCheck {
    fn outcome(&self) -> Outcome {
        match self.status {
            Status::CertifiedTrue => Outcome::Pass,
            Status::Violated => Outcome::Violated,
            Status::Inconclusive => Outcome::Inconclusive,
            Status::Informational => Outcome::Informational,
        }
    }
}

impl Tallied for TrialRecord {
    fn outcome(&self) -> Outcome {
        self.outcome
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub informational: usize,
}

impl Summary {
    pub fn of<'a, T: Tallied + 'a>(items: impl IntoIterator<Item = &'a T>) -> Self {
        let mut s = Summary::default();
        for it in items {
            s.add(it.outcome());
        }
        s
    }

    pub fn add(&mut self, o: Outcome) {
        self.total += 1;
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Violated => self.violated += 1,
            Outcome::Inconclusive => self.inconclusive += 1,
            Outcome::Informational => self.informational += 1,
        }
    }

    /// 0 all pass, 1 any violation, 3 otherwise inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }
}

/// A command's report. `details` carries command-specific extras.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report<C: Serialize, D: Serialize = ()> {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<C>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<D>,
    pub wall_time: f64,
}

impl<C: Serialize + Tallied, D: Serialize> Report<C, D> {
    pub fn new(command: &str, seed: u64, checks: Vec<C>, details: Option<D>, wall_time: f64) -> Self {
        let summary = Summary::of(&checks);
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            checks,
            summary,
            details,
            wall_time,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed(Outcome);
    impl Tallied for Fixed {
        fn outcome(&self) -> Outcome {
            self.0
        }
    }

    #[test]
    fn exit_code_from_summary() {
        use Outcome::*;
        let code = |os: &[Outcome]| Summary::of(&os.iter().map(|&o| Fixed(o)).collect::<Vec<_>>()).exit_code();
        assert_eq!(code(&[]), 0);
        assert_eq!(code(&[Pass, Informational]), 0);
        assert_eq!(code(&[Pass, Inconclusive]), 3);
        assert_eq!(code(&[Inconclusive, Violated]), 1);
    }

    #[test]
    fn summary_counts_match() {
        let items: Vec<Fixed> = [Outcome::Pass, Outcome::Pass, Outcome::Violated].into_iter().map(Fixed).collect();
        let s = Summary::of(&items);
        assert_eq!((s.total, s.pass, s.violated, s.inconclusive), (3, 2, 1, 0));
    }
}
