use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::ExportedSubgroup;
use crate::subgroup::Subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipKind {
    /// the condition refers to data beyond the finite tower (e.g. `P_N`)
    Boundary,
    /// the caller did not ask for this condition
    NotRequested,
    /// a computation exceeded a configured cap
    Cap,
    /// required input (such as a designated subgroup) is missing
    MissingInput,
    /// a simple group could not be identified from the multiplier table
    Unidentified,
}

impl SkipKind {
    /// Blocking skips prevent certification.
    pub fn is_blocking(self) -> bool {
        matches!(self, SkipKind::Cap | SkipKind::MissingInput | SkipKind::Unidentified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub explanation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroups: Vec<ExportedSubgroup>,
}

impl Witness {
    pub fn text(explanation: impl Into<String>) -> Self {
        Witness {
            explanation: explanation.into(),
            subgroups: Vec::new(),
        }
    }

    pub fn with(explanation: impl Into<String>, subgroups: &[&Subgroup]) -> Self {
        Witness {
            explanation: explanation.into(),
            subgroups: subgroups.iter().map(|h| ExportedSubgroup::of(h)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub id: String,
    pub description: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip: Option<SkipKind>,
    pub witness: Option<Witness>,
}

/// Outcome of a single check: `Ok(None)` passes, `Ok(Some(w))` fails with `w`.
pub type Check = crate::error::Result<Option<Witness>>;

impl Condition {
    pub fn pass(id: &str, description: &str) -> Self {
        Condition {
            id: id.into(),
            description: description.into(),
            verdict: Verdict::Pass,
            skip: None,
            witness: None,
        }
    }

    pub fn fail(id: &str, description: &str, witness: Witness) -> Self {
        Condition {
            verdict: Verdict::Fail,
            witness: Some(witness),
            ..Condition::pass(id, description)
        }
    }

    pub fn skipped(id: &str, description: &str, kind: SkipKind, reason: impl Into<String>) -> Self {
        Condition {
            verdict: Verdict::Skipped,
            skip: Some(kind),
            witness: Some(Witness::text(reason)),
            ..Condition::pass(id, description)
        }
    }

    /// Caps and unidentifiable simple groups become skips; any other error
    /// is a failure carrying the error message.
    pub fn from_check(id: &str, description: &str, check: Check) -> Self {
        match check {
            Ok(None) => Condition::pass(id, description),
            Ok(Some(w)) => Condition::fail(id, description, w),
            Err(e @ Error::CapExceeded { .. }) => Condition::skipped(id, description, SkipKind::Cap, e.to_string()),
            Err(e @ Error::Unidentified(_)) => {
                Condition::skipped(id, description, SkipKind::Unidentified, e.to_string())
            }
            Err(e) => Condition::fail(id, description, Witness::text(e.to_string())),
        }
    }

    pub fn is_blocking_skip(&self) -> bool {
        self.skip.is_some_and(SkipKind::is_blocking)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub n: usize,
    pub conditions: Vec<Condition>,
}

impl LevelReport {
    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// no failures, but blocking skips prevent certification
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub status: Status,
    pub failures: usize,
    pub blocking_skips: usize,
    /// least `k` such that every level `>= k` has no failure and no blocking skip
    pub certified_from: Option<usize>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub criteria: String,
    pub levels: Vec<LevelReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier_table: Option<String>,
}

impl VerificationReport {
    pub fn new(criteria: impl Into<String>, levels: Vec<LevelReport>) -> Self {
        let failures = count(&levels, |c| c.verdict == Verdict::Fail);
        let blocking_skips = count(&levels, Condition::is_blocking_skip);
        let status = if failures > 0 {
            Status::Fail
        } else if blocking_skips > 0 {
            Status::Incomplete
        } else {
            Status::Pass
        };
        let mut certified_from = None;
        for level in levels.iter().rev() {
            let clean = level
                .conditions
                .iter()
                .all(|c| c.verdict != Verdict::Fail && !c.is_blocking_skip());
            if !clean {
                break;
            }
            certified_from = Some(level.n);
        }
        let text = match (status, certified_from) {
            (Status::Pass, _) => "all checked levels pass".to_string(),
            (_, Some(k)) => format!("all checked levels from index {k} pass"),
            (Status::Fail, None) => "the top level fails".to_string(),
            (_, None) => "the top level is not certified".to_string(),
        };
        VerificationReport {
            criteria: criteria.into(),
            levels,
            summary: Summary {
                status,
                failures,
                blocking_skips,
                certified_from,
                text,
            },
            multiplier_table: None,
        }
    }

    pub fn level(&self, n: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.n == n)
    }

    pub fn conditions(&self) -> impl Iterator<Item = (usize, &Condition)> {
        self.levels
            .iter()
            .flat_map(|l| l.conditions.iter().map(move |c| (l.n, c)))
    }

    /// Verdicts of condition `id`, by level.
    pub fn verdicts(&self, id: &str) -> Vec<(usize, Verdict)> {
        self.conditions()
            .filter(|(_, c)| c.id == id)
            .map(|(n, c)| (n, c.verdict))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.summary.status == Status::Pass
    }

    /// 0 on pass, 1 on any failure, 3 when only blocking skips prevent certification.
    pub fn exit_code(&self) -> i32 {
        match self.summary.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Incomplete => 3,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "criteria: {}", self.criteria);
        if let Some(t) = &self.multiplier_table {
            let _ = writeln!(out, "multiplier table: {t}");
        }
        for level in &self.levels {
            let _ = writeln!(out, "level {}", level.n);
            for c in &level.conditions {
                let verdict = match (c.verdict, c.skip) {
                    (Verdict::Pass, _) => "pass".to_string(),
                    (Verdict::Fail, _) => "FAIL".to_string(),
                    (Verdict::Skipped, Some(k)) => format!("skipped ({})", skip_name(k)),
                    (Verdict::Skipped, None) => "skipped".to_string(),
                };
                let _ = writeln!(out, "  {:<24} {:<24} {}", c.id, verdict, c.description);
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "      {}", w.explanation);
                    for h in &w.subgroups {
                        let _ = writeln!(out, "      subgroup of order {}: {:?}", h.order, h.generators);
                    }
                }
            }
        }
        let _ = writeln!(
            out,
            "summary: {} ({} failures, {} blocking skips)",
            self.summary.text, self.summary.failures, self.summary.blocking_skips
        );
        out
    }
}

fn skip_name(k: SkipKind) -> &'static str {
    match k {
        SkipKind::Boundary => "boundary",
        SkipKind::NotRequested => "not requested",
        SkipKind::Cap => "cap",
        SkipKind::MissingInput => "missing input",
        SkipKind::Unidentified => "unidentified",
    }
}

fn count(levels: &[LevelReport], pred: impl Fn(&Condition) -> bool) -> usize {
    levels
        .iter()
        .flat_map(|l| l.conditions.iter())
        .filter(|c| pred(c))
        .count()
}
