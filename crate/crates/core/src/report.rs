//! Verdicts and line-oriented suite reports.

use std::fmt;

/// The single verdict vocabulary shared by every check.
///
/// `ResolutionExhausted` means the finite truncation cannot decide the
/// statement; it is neither a pass nor a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    ResolutionExhausted,
    PreconditionUnmet,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ResolutionExhausted => "resolution-exhausted",
            Verdict::PreconditionUnmet => "precondition-unmet",
        }
    }

    /// Conjunction: any failure dominates, then unmet preconditions, then
    /// exhausted resolution.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (PreconditionUnmet, _) | (_, PreconditionUnmet) => PreconditionUnmet,
            (ResolutionExhausted, _) | (_, ResolutionExhausted) => ResolutionExhausted,
            _ => Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One record of a suite run: a verdict plus ordered `key=value` details.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub instance: String,
    pub verdict: Verdict,
    pub details: Vec<(String, String)>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, instance: impl Into<String>, verdict: Verdict) -> Self {
        SuiteReport {
            suite: suite.into(),
            instance: instance.into(),
            verdict,
            details: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// `suite=… instance=… verdict=… k=v …` on one line; values containing
    /// whitespace are quoted.
    pub fn to_record(&self) -> String {
        let mut line = format!(
            "suite={} instance={} verdict={}",
            self.suite, self.instance, self.verdict
        );
        for (k, v) in &self.details {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            if v.is_empty() || v.contains(char::is_whitespace) || v.contains('"') {
                line.push('"');
                line.push_str(&v.replace('"', "'"));
                line.push('"');
            } else {
                line.push_str(v);
            }
        }
        line
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("[{}] {} / {}", self.verdict, self.suite, self.instance);
        for (k, v) in &self.details {
            s.push_str(&format!("\n    {k}: {v}"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

pub fn render(reports: &[SuiteReport], format: Format) -> String {
    let mut out = String::new();
    for r in reports {
        match format {
            Format::Text => out.push_str(&r.to_text()),
            Format::Records => out.push_str(&r.to_record()),
        }
        out.push('\n');
    }
    out
}

/// Overall verdict of a report stream.
pub fn overall(reports: &[SuiteReport]) -> Verdict {
    reports
        .iter()
        .fold(Verdict::Pass, |acc, r| acc.and(r.verdict))
}

/// Process exit code: 0 all pass, 1 any failure or unmet precondition,
/// 3 when the only non-pass outcomes are exhausted resolution.
pub fn exit_code(reports: &[SuiteReport]) -> i32 {
    match overall(reports) {
        Verdict::Pass => 0,
        Verdict::Fail | Verdict::PreconditionUnmet => 1,
        Verdict::ResolutionExhausted => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_conjunction() {
        use Verdict::*;
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!(Pass.and(ResolutionExhausted), ResolutionExhausted);
        assert_eq!(ResolutionExhausted.and(Fail), Fail);
        assert_eq!(
            PreconditionUnmet.and(ResolutionExhausted),
            PreconditionUnmet
        );
    }

    #[test]
    fn record_quoting() {
        let r = SuiteReport::new("s", "0", Verdict::Pass)
            .with("a", 1)
            .with("b", "x y");
        assert_eq!(
            r.to_record(),
            "suite=s instance=0 verdict=pass a=1 b=\"x y\""
        );
    }

    #[test]
    fn exit_codes() {
        let pass = SuiteReport::new("s", "0", Verdict::Pass);
        let ex = SuiteReport::new("s", "1", Verdict::ResolutionExhausted);
        let fail = SuiteReport::new("s", "2", Verdict::Fail);
        assert_eq!(exit_code(std::slice::from_ref(&pass)), 0);
        assert_eq!(exit_code(&[pass.clone(), ex.clone()]), 3);
        assert_eq!(exit_code(&[pass, ex, fail]), 1);
    }
}
