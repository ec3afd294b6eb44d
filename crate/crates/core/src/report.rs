//! Verification reports and their building blocks.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::contractions::RadiusEstimate;
use crate::metric::{Disc, Point};
use crate::theorems::{FixedSetSummary, MaxFixedRadius};
use crate::tolerance::Tolerances;

/// Non-finite numbers (the unbounded-radius sentinel) serialize as `null`.
pub(crate) fn ser_num<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The premise never fired on the samples.
    Vacuous,
    Undetermined,
}

impl Status {
    /// Pass or vacuous.
    pub fn holds(self) -> bool {
        matches!(self, Status::Pass | Status::Vacuous)
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
            Status::Undetermined => "undetermined",
        }
    }

    /// Worst of two statuses: fail > undetermined > pass > vacuous.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            (Pass, _) | (_, Pass) => Pass,
            (Vacuous, Vacuous) => Vacuous,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<Point>,
    /// The offending quantity (a zeta value, a margin, a distance).
    #[serde(serialize_with = "ser_num")]
    pub value: f64,
}

impl Witness {
    pub fn at(x: &Point, value: f64) -> Self {
        Witness {
            points: vec![x.clone()],
            value,
        }
    }

    pub fn pair(x: &Point, y: &Point, value: f64) -> Self {
        Witness {
            points: vec![x.clone(), y.clone()],
            value,
        }
    }
}

/// Outcome of checking a universally quantified condition on samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub status: Status,
    /// Number of samples on which the premise fired.
    pub checked: usize,
    /// Total number of violations (not capped).
    pub violations: usize,
    /// First violations in sample order, capped.
    pub witnesses: Vec<Witness>,
}

impl CheckOutcome {
    pub(crate) fn collector(cap: usize) -> Collector {
        Collector {
            cap,
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status.holds()
    }
}

pub(crate) struct Collector {
    cap: usize,
    checked: usize,
    violations: usize,
    witnesses: Vec<Witness>,
}

impl Collector {
    pub fn premise(&mut self) {
        self.checked += 1;
    }

    pub fn violation(&mut self, w: Witness) {
        self.violations += 1;
        if self.witnesses.len() < self.cap {
            self.witnesses.push(w);
        }
    }

    pub fn finish(self) -> CheckOutcome {
        let status = if self.violations > 0 {
            Status::Fail
        } else if self.checked == 0 {
            Status::Vacuous
        } else {
            Status::Pass
        };
        CheckOutcome {
            status,
            checked: self.checked,
            violations: self.violations,
            witnesses: self.witnesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub checked: usize,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
}

impl Hypothesis {
    pub fn from_outcome(name: &str, o: CheckOutcome) -> Self {
        Hypothesis {
            name: name.to_string(),
            status: o.status,
            checked: o.checked,
            violations: o.violations,
            witnesses: o.witnesses,
        }
    }

    pub fn simple(name: &str, status: Status) -> Self {
        Hypothesis {
            name: name.to_string(),
            status,
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conclusion {
    pub status: Status,
    /// Disc on which the conclusion was checked, if any.
    pub disc: Option<Disc>,
    pub checked: usize,
    pub counterexamples: Vec<Witness>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Numbers {
    pub rho: Option<RadiusEstimate>,
    /// Displacement radius of the second map in a pair analysis.
    pub rho_second: Option<RadiusEstimate>,
    pub r: Option<RadiusEstimate>,
    pub mu: Option<RadiusEstimate>,
    pub fixed_set: Option<FixedSetSummary>,
    pub maximal_fixed_radius: Option<MaxFixedRadius>,
    pub coincidence_set: Option<FixedSetSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleMeta {
    pub count: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub note: String,
}

impl SampleMeta {
    pub fn new(count: usize, seed: u64, tolerances: Tolerances) -> Self {
        SampleMeta {
            count,
            seed,
            tolerances,
            note: format!("verified on {count} samples"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "hypothesis_failed")]
    HypothesisFailed,
    /// Every hypothesis held but the conclusion failed. The theorems are
    /// proved, so this points at a tolerance or sampling artifact.
    #[serde(rename = "REFUTATION_CANDIDATE")]
    RefutationCandidate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::HypothesisFailed => "hypothesis_failed",
            Verdict::RefutationCandidate => "REFUTATION_CANDIDATE",
        }
    }

    pub fn decide(hypotheses: &[Hypothesis], conclusion: Status) -> Verdict {
        let all_hold = hypotheses.iter().all(|h| h.status.holds());
        match (all_hold, conclusion.holds()) {
            (true, true) => Verdict::Consistent,
            (true, false) => Verdict::RefutationCandidate,
            (false, _) => Verdict::HypothesisFailed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub detail: String,
}

impl Diagnostic {
    pub fn new(name: &str, detail: impl Into<String>) -> Self {
        Diagnostic {
            name: name.to_string(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
    pub numbers: Numbers,
    pub samples: SampleMeta,
    pub verdict: Verdict,
    pub diagnostics: Vec<Diagnostic>,
}

impl VerificationReport {
    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.theorem, self.verdict.name());
        let _ = writeln!(out, "  {}", self.samples.note);
        for h in &self.hypotheses {
            let _ = write!(out, "  [{}] {}", h.status.name(), h.name);
            if h.violations > 0 {
                let _ = write!(out, " ({} violations", h.violations);
                if let Some(w) = h.witnesses.first() {
                    let pts: Vec<String> = w.points.iter().map(Point::to_string).collect();
                    let _ = write!(out, ", first at {}", pts.join(", "));
                }
                out.push(')');
            }
            out.push('\n');
        }
        let _ = write!(out, "  conclusion: {}", self.conclusion.status.name());
        if let Some(d) = &self.conclusion.disc {
            let _ = write!(out, " on D({}, {})", d.center, fmt_radius(d.radius));
        }
        out.push('\n');
        if let Some(rho) = &self.numbers.rho {
            let _ = writeln!(
                out,
                "  rho = {} (conservative {})",
                fmt_radius(rho.value),
                fmt_radius(rho.lower)
            );
        }
        if let Some(r) = &self.numbers.r {
            let _ = writeln!(out, "  r = {}", fmt_radius(r.value));
        }
        if let Some(mu) = &self.numbers.mu {
            let _ = writeln!(
                out,
                "  mu = {} (conservative {})",
                fmt_radius(mu.value),
                fmt_radius(mu.lower)
            );
        }
        if let Some(m) = &self.numbers.maximal_fixed_radius {
            let _ = writeln!(out, "  maximal fixed radius = {}", fmt_radius(m.radius));
        }
        if let Some(fs) = &self.numbers.fixed_set {
            let _ = writeln!(out, "  fixed samples: {}", fs.count);
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "  note [{}]: {}", d.name, d.detail);
        }
        out
    }
}

pub(crate) fn fmt_radius(r: f64) -> String {
    if r.is_finite() {
        format!("{r}")
    } else {
        "unbounded".to_string()
    }
}
