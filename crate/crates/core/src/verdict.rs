//! Four-valued check outcomes.
//!
//! Every hypothesis check in the crate reports a [`Verdict`]. A verdict is
//! `Holds` when a decision rule or an exhaustive enumeration settled the
//! question, `HoldsSampled` when only sampled probes were available and all
//! of them passed, `Fails` with a concrete witness that can be replayed, and
//! `Unknown` when no rule applies and sampling was inconclusive.

use std::fmt;

use serde::Serialize;

/// Tolerance used where limits are detected numerically (solver, series tails).
pub const EPS: f64 = 1e-9;

/// Slack added to the right-hand side of every checked inequality.
pub const EPS_CMP: f64 = 1e-12;

/// A checked inequality only fails when the violation exceeds this margin.
/// Violations inside `(EPS_CMP, FAIL_MARGIN]` are reported as `Unknown`.
pub const FAIL_MARGIN: f64 = 1e-9;

/// Outcome grade, ordered from strongest pass to failure.
///
/// The derived ordering is the aggregation order used by conjunctions:
/// `Fails` dominates `Unknown`, which dominates `HoldsSampled`, which
/// dominates `Holds`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VerdictKind {
    Holds,
    HoldsSampled,
    Unknown,
    Fails,
}

impl VerdictKind {
    pub fn passes(self) -> bool {
        matches!(self, VerdictKind::Holds | VerdictKind::HoldsSampled)
    }

    pub fn label(self) -> &'static str {
        match self {
            VerdictKind::Holds => "holds",
            VerdictKind::HoldsSampled => "holds (sampled)",
            VerdictKind::Unknown => "unknown",
            VerdictKind::Fails => "fails",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Structured evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Point {
        x: f64,
    },
    Pair {
        x: f64,
        y: f64,
    },
    Triple {
        x: f64,
        y: f64,
        z: f64,
    },
    /// A sequence inside the space whose limit escapes it.
    Sequence {
        terms: Vec<f64>,
        limit: f64,
        description: String,
    },
    /// A pair at which `lhs <= rhs` was tested.
    Inequality {
        x: f64,
        y: f64,
        lhs: f64,
        rhs: f64,
    },
    /// Series evidence at argument `t` after `n` terms.
    Series {
        t: f64,
        n: usize,
        detail: String,
    },
    /// A set that was required to be non-empty.
    Empty {
        what: String,
    },
    /// An orbit that failed to behave as required.
    Orbit {
        start: f64,
        points: Vec<f64>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { x } => write!(f, "x = {x}"),
            Witness::Pair { x, y } => write!(f, "({x}, {y})"),
            Witness::Triple { x, y, z } => write!(f, "({x}, {y}, {z})"),
            Witness::Sequence { limit, description, .. } => {
                write!(f, "{description} -> {limit}")
            }
            Witness::Inequality { x, y, lhs, rhs } => {
                write!(f, "({x}, {y}): {lhs} > {rhs}")
            }
            Witness::Series { t, n, detail } => write!(f, "t = {t}, n = {n}: {detail}"),
            Witness::Empty { what } => write!(f, "{what} is empty"),
            Witness::Orbit { start, points } => {
                write!(f, "orbit from {start} (")?;
                for (i, p) in points.iter().take(6).enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                if points.len() > 6 {
                    f.write_str(", ...")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    pub note: String,
}

impl Verdict {
    pub fn holds(note: impl Into<String>) -> Self {
        Verdict { kind: VerdictKind::Holds, witness: None, note: note.into() }
    }

    pub fn sampled(note: impl Into<String>) -> Self {
        Verdict { kind: VerdictKind::HoldsSampled, witness: None, note: note.into() }
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Verdict { kind: VerdictKind::Unknown, witness: None, note: note.into() }
    }

    pub fn fails(witness: Witness, note: impl Into<String>) -> Self {
        Verdict { kind: VerdictKind::Fails, witness: Some(witness), note: note.into() }
    }

    /// A passing verdict graded by whether the evidence was exhaustive.
    pub fn pass(exhaustive: bool, note: impl Into<String>) -> Self {
        if exhaustive {
            Verdict::holds(note)
        } else {
            Verdict::sampled(note)
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passes(&self) -> bool {
        self.kind.passes()
    }

    pub fn is_fails(&self) -> bool {
        self.kind == VerdictKind::Fails
    }

    /// Conjunction: the more severe verdict wins, ties keep `self`.
    pub fn and(self, other: Verdict) -> Verdict {
        if other.kind > self.kind {
            other
        } else {
            self
        }
    }

    /// Disjunction: the stronger verdict wins, ties keep `self`.
    pub fn or(self, other: Verdict) -> Verdict {
        if other.kind < self.kind {
            other
        } else {
            self
        }
    }

    /// Conjunction over many verdicts; an empty input holds vacuously.
    pub fn all<I: IntoIterator<Item = Verdict>>(verdicts: I, empty_note: &str) -> Verdict {
        verdicts
            .into_iter()
            .reduce(Verdict::and)
            .unwrap_or_else(|| Verdict::holds(empty_note))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(w) = &self.witness {
            write!(f, " [witness {w}]")?;
        }
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        Ok(())
    }
}

/// Grades `lhs <= rhs` with the crate-wide deadband.
pub fn compare_leq(lhs: f64, rhs: f64) -> VerdictKind {
    if lhs <= rhs + EPS_CMP {
        VerdictKind::Holds
    } else if lhs > rhs + FAIL_MARGIN {
        VerdictKind::Fails
    } else {
        VerdictKind::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_order() {
        let h = Verdict::holds("a");
        let s = Verdict::sampled("b");
        let u = Verdict::unknown("c");
        let f = Verdict::fails(Witness::Point { x: 1.0 }, "d");
        assert_eq!(h.clone().and(s.clone()).kind, VerdictKind::HoldsSampled);
        assert_eq!(s.clone().and(u.clone()).kind, VerdictKind::Unknown);
        assert_eq!(u.clone().and(f.clone()).kind, VerdictKind::Fails);
        assert_eq!(f.clone().and(h.clone()).kind, VerdictKind::Fails);
        assert_eq!(f.or(s.clone()).kind, VerdictKind::HoldsSampled);
        assert_eq!(u.or(h).kind, VerdictKind::Holds);
    }

    #[test]
    fn first_failure_is_kept() {
        let a = Verdict::fails(Witness::Point { x: 1.0 }, "first");
        let b = Verdict::fails(Witness::Point { x: 2.0 }, "second");
        assert_eq!(Verdict::all([a, b], "").note, "first");
        assert_eq!(Verdict::all(Vec::new(), "vacuous").kind, VerdictKind::Holds);
    }

    #[test]
    fn deadband() {
        assert_eq!(compare_leq(1.0, 1.0), VerdictKind::Holds);
        assert_eq!(compare_leq(1.0 + 1e-13, 1.0), VerdictKind::Holds);
        assert_eq!(compare_leq(1.0 + 1e-10, 1.0), VerdictKind::Unknown);
        assert_eq!(compare_leq(1.0 + 1e-6, 1.0), VerdictKind::Fails);
    }
}
