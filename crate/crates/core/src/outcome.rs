//! Verdicts and witnesses shared by every check in the crate.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "NOT-APPLICABLE",
            Verdict::Error => "ERROR",
        })
    }
}

/// Location of a failed equation together with its two unequal sides.
///
/// `coords` names the indices (e.g. `"s,t,r,u"`) and `at` holds their
/// values in the same order, so the equation can be re-evaluated on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub coords: String,
    pub at: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(coords: &str, at: Vec<usize>, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness {
            coords: coords.to_string(),
            at,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

impl fmt::Display for Witness {
    /// Single token, no whitespace: `s,t,r=0,1,2;lhs=1;rhs=0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at: Vec<String> = self.at.iter().map(usize::to_string).collect();
        write!(
            f,
            "{}={};lhs={};rhs={}",
            self.coords,
            at.join(","),
            self.lhs.replace(char::is_whitespace, ""),
            self.rhs.replace(char::is_whitespace, "")
        )
    }
}

/// Result of a single check. A `Fail` always carries a witness; a `Pass`
/// never does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    verdict: Verdict,
    witness: Option<Witness>,
    detail: Option<String>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome {
            verdict: Verdict::Pass,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Outcome {
            verdict: Verdict::Fail,
            witness: Some(witness),
            detail: None,
        }
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Outcome {
            verdict: Verdict::NotApplicable,
            witness: None,
            detail: Some(reason.into()),
        }
    }

    pub fn error(reason: impl Into<String>) -> Self {
        Outcome {
            verdict: Verdict::Error,
            witness: None,
            detail: Some(reason.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// First failure wins; details of passing outcomes are dropped.
    pub fn and(self, other: Outcome) -> Outcome {
        if self.verdict == Verdict::Pass {
            other
        } else {
            self
        }
    }

    /// Prefixes the witness (if any) with the coordinates of the case that
    /// produced it, e.g. the dimension vectors a check was run on.
    pub fn in_case(mut self, names: &str, values: &[usize]) -> Outcome {
        if let Some(w) = self.witness.as_mut() {
            w.coords = format!("{names},{}", w.coords);
            w.at.splice(0..0, values.iter().copied());
        }
        self
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn detail(&self) -> Option<&str> {
        self.detail.as_deref()
    }
}

/// Runs `check` over `items` in order and returns the first failure, or a
/// pass if none fails.
pub fn first_failure<I, F>(items: I, mut check: F) -> Outcome
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Option<Witness>,
{
    for item in items {
        if let Some(w) = check(item) {
            return Outcome::fail(w);
        }
    }
    Outcome::pass()
}
