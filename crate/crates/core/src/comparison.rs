//! Comparison functions and numerical membership tests for the Φ and Λ classes.
//!
//! Φ asks for a non-decreasing `φ: [0, ∞) → [0, ∞)` whose iterates are
//! summable at every `t > 0`. Λ asks for `0 < ψ(t) < t`, a strictly
//! decreasing `g(t) = t / (t − ψ(t))` and a finite integral of `g` near 0.
//! Linear functions are decided by closed form; everything else is sampled,
//! and the verdicts say so.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::verdict::{Verdict, VerdictKind, Witness, EPS};

pub const DEFAULT_TERMS: usize = 10_000;
pub const DEFAULT_QUAD_POINTS: usize = 64;
const LADDER: usize = 20;
const QUAD_REL_TOL: f64 = 1e-6;

/// The default sampling grid `{10^k : k = -3..1}`.
pub fn default_grid() -> Vec<f64> {
    (-3..=1).map(|k| 10f64.powi(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ComparisonFunction {
    /// `φ(t) = k t`.
    Linear { k: f64 },
    /// `φ(t) = c t / (c + t)`.
    Rational { c: f64 },
    /// `φ(t) = t / (c + t)`.
    Hyperbolic { c: f64 },
    /// Piecewise-linear interpolation through `(t, φ(t))` breakpoints,
    /// extended linearly past the last one.
    OrderedTable { points: Vec<(f64, f64)> },
}

impl ComparisonFunction {
    pub fn linear(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::InvalidComparison("k must lie in [0,1)".into()));
        }
        Ok(ComparisonFunction::Linear { k })
    }

    pub fn rational(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidComparison("c must be positive".into()));
        }
        Ok(ComparisonFunction::Rational { c })
    }

    pub fn hyperbolic(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidComparison("c must be positive".into()));
        }
        Ok(ComparisonFunction::Hyperbolic { c })
    }

    /// Breakpoints must start at `(0, 0)`, increase strictly in `t` and be
    /// non-decreasing in value. `value < t` is deliberately not enforced so
    /// that counterexamples such as the identity can be expressed.
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidComparison("a table needs at least two breakpoints".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::InvalidComparison("a table must start at (0, 0)".into()));
        }
        for &(t, v) in &points {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::InvalidComparison("breakpoints must be finite".into()));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidComparison("breakpoints must increase strictly".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidComparison("table values must be non-decreasing".into()));
            }
        }
        Ok(ComparisonFunction::OrderedTable { points })
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeArgument(t));
        }
        Ok(self.eval(t))
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        match self {
            ComparisonFunction::Linear { k } => k * t,
            ComparisonFunction::Rational { c } => {
                if t == 0.0 {
                    0.0
                } else {
                    c * t / (c + t)
                }
            }
            ComparisonFunction::Hyperbolic { c } => {
                if t == 0.0 {
                    0.0
                } else {
                    t / (c + t)
                }
            }
            ComparisonFunction::OrderedTable { points } => {
                let i = points.partition_point(|p| p.0 <= t).clamp(1, points.len() - 1);
                let (t0, v0) = points[i - 1];
                let (t1, v1) = points[i];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// `φ^n(t)`, with `φ^0` the identity.
    pub fn iterate(&self, n: usize, t: f64) -> Result<f64> {
        let mut x = t;
        self.evaluate(x)?;
        for _ in 0..n {
            x = self.eval(x);
        }
        Ok(x)
    }

    pub fn linear_coefficient(&self) -> Option<f64> {
        match self {
            ComparisonFunction::Linear { k } => Some(*k),
            _ => None,
        }
    }

    fn is_non_decreasing_by_rule(&self) -> Option<Verdict> {
        match self {
            ComparisonFunction::Linear { k } => Some(if *k >= 0.0 {
                Verdict::holds("k t with k >= 0 is non-decreasing")
            } else {
                Verdict::fails(Witness::Pair { x: 0.0, y: 1.0 }, "negative slope")
            }),
            ComparisonFunction::Rational { .. } => Some(Verdict::holds("c t / (c + t) has derivative c^2 / (c + t)^2 > 0")),
            ComparisonFunction::Hyperbolic { .. } => Some(Verdict::holds("t / (c + t) has derivative c / (c + t)^2 > 0")),
            ComparisonFunction::OrderedTable { points } => {
                for w in points.windows(2) {
                    if w[1].1 < w[0].1 {
                        return Some(Verdict::fails(Witness::Pair { x: w[0].0, y: w[1].0 }, "table value drops"));
                    }
                }
                Some(Verdict::holds(format!("{} table values are non-decreasing and the extension keeps the last slope", points.len())))
            }
        }
    }

    /// Whether `φ(t) < t` for all `t > 0`, decided exactly for linear
    /// functions and tables, `None` otherwise.
    fn below_identity_by_rule(&self) -> Option<Verdict> {
        match self {
            ComparisonFunction::Linear { k } => Some(if *k < 1.0 {
                Verdict::holds("k < 1")
            } else {
                Verdict::fails(Witness::Point { x: 1.0 }, format!("phi(1) = {k} >= 1"))
            }),
            ComparisonFunction::OrderedTable { points } => {
                // On each segment `φ(t) − t` is affine, so the sign at the ends decides it.
                for &(t, v) in &points[1..] {
                    if v >= t {
                        return Some(Verdict::fails(Witness::Point { x: t }, format!("phi({t}) = {v} >= {t}")));
                    }
                }
                let (t0, v0) = points[0];
                let (t1, v1) = points[1];
                if (v1 - v0) / (t1 - t0) >= 1.0 {
                    let t = t1 / 2.0;
                    return Some(Verdict::fails(Witness::Point { x: t }, "first segment has slope >= 1"));
                }
                let n = points.len();
                let (ta, va) = points[n - 2];
                let (tb, vb) = points[n - 1];
                if (vb - va) / (tb - ta) > 1.0 {
                    let t = tb + (tb - vb) / ((vb - va) / (tb - ta) - 1.0) + 1.0;
                    return Some(Verdict::fails(Witness::Point { x: t }, "the linear extension crosses the identity"));
                }
                Some(Verdict::holds("phi(t) < t at every breakpoint and on both unbounded ends"))
            }
            _ => None,
        }
    }

    pub fn check_phi_membership(&self, grid: &[f64], terms: usize) -> Result<PhiReport> {
        if grid.is_empty() || grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument("the grid must be nonempty, positive and finite".into()));
        }
        if terms == 0 {
            return Err(Error::InvalidArgument("terms must be at least 1".into()));
        }
        let phi1 = self.is_non_decreasing_by_rule().expect("every family has a monotonicity rule");
        let phi2 = match self {
            ComparisonFunction::Linear { k } => Verdict::holds(format!("geometric series with ratio {k}")),
            _ => Verdict::all(grid.iter().map(|&t| self.series_test(t, terms)), "empty grid"),
        };
        let below_identity = self.below_identity_by_rule().unwrap_or_else(|| {
            match grid.iter().find(|&&t| self.eval(t) >= t) {
                Some(&t) => Verdict::fails(Witness::Point { x: t }, format!("phi({t}) = {} >= {t}", self.eval(t))),
                None => Verdict::sampled(format!("phi(t) < t on {} grid points", grid.len())),
            }
        });
        let inconsistency = (phi1.passes() && phi2.passes() && !below_identity.passes())
            .then(|| "(Φ1) and (Φ2) pass but phi(t) < t fails".to_string());
        Ok(PhiReport {
            phi1,
            phi2,
            below_identity,
            lambda1: None,
            lambda2: None,
            lambda3: None,
            lambda_implies_phi: None,
            sample_grid: grid.to_vec(),
            inconsistency,
        })
    }

    /// Summability of `φ^n(t)` from dyadic block sums over
    /// `[N, 2N)`, `[2N, 4N)`, `[4N, 8N)` with `N = terms / 8`.
    ///
    /// Convergent series have block sums that shrink; harmonic-like
    /// iterates keep them constant and non-decaying iterates grow them.
    fn series_test(&self, t: f64, terms: usize) -> Verdict {
        if terms < 8 {
            return Verdict::unknown(format!("{terms} terms are too few for the block test"));
        }
        let n0 = terms / 8;
        let mut x = t;
        let mut blocks = [0.0f64; 3];
        let mut partial = 0.0;
        for n in 1..=8 * n0 {
            x = self.eval(x);
            partial += x;
            if n >= n0 {
                let b = match n {
                    _ if n < 2 * n0 => 0,
                    _ if n < 4 * n0 => 1,
                    _ => 2,
                };
                if n < 8 * n0 {
                    blocks[b] += x;
                }
            }
        }
        let last = x;
        let [b1, _, b3] = blocks;
        let detail = format!("partial sum {partial:.6e}, block sums {:.3e}, {:.3e}, {:.3e}, last term {last:.3e}", blocks[0], blocks[1], blocks[2]);
        if last < EPS && b3 < EPS {
            return Verdict::sampled(format!("t = {t}: tail term and last block below {EPS}"));
        }
        let ratio = if b1 > 0.0 { b3 / b1 } else { f64::INFINITY };
        if ratio >= 0.99 {
            return Verdict::fails(
                Witness::Series { t, n: 8 * n0, detail },
                format!("t = {t}: dyadic block sums do not decay (ratio {ratio:.4}), the series diverges"),
            );
        }
        Verdict::unknown(format!("t = {t}: block ratio {ratio:.4} is inconclusive ({detail})"))
    }

    /// Samples the Λ conditions on a log grid in `(0, T]` and integrates `g`
    /// over a dyadic ladder towards 0.
    pub fn check_lambda_membership(&self, t_max: f64, quad_points: usize) -> Result<PhiReport> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidArgument("T must be positive".into()));
        }
        let quad_points = quad_points.max(2);
        let grid: Vec<f64> = (0..=quad_points)
            .map(|i| t_max * 10f64.powf(-6.0 * (quad_points - i) as f64 / quad_points as f64))
            .collect();

        let lambda1 = match self {
            ComparisonFunction::Linear { k } if *k > 0.0 => Verdict::holds("0 < k t < t for 0 < k < 1"),
            _ => {
                let bad = grid.iter().find(|&&t| {
                    let v = self.eval(t);
                    !(v > 0.0 && v < t)
                });
                match bad {
                    Some(&t) => Verdict::fails(Witness::Point { x: t }, format!("psi({t}) = {} is outside (0, {t})", self.eval(t))),
                    None => Verdict::sampled(format!("0 < psi(t) < t on {} log-spaced points", grid.len())),
                }
            }
        };

        let g = |t: f64| t / (t - self.eval(t));
        let lambda2 = if !lambda1.passes() {
            Verdict::unknown("g is undefined where (Λ1) fails")
        } else if let ComparisonFunction::Linear { k } = self {
            Verdict::fails(
                Witness::Pair { x: grid[0], y: grid[1] },
                format!("g is constant {}", 1.0 / (1.0 - k)),
            )
        } else {
            let bad = grid.windows(2).find(|w| g(w[1]) >= g(w[0]));
            match bad {
                Some(w) => Verdict::fails(
                    Witness::Pair { x: w[0], y: w[1] },
                    format!("g({}) = {} <= g({}) = {}", w[0], g(w[0]), w[1], g(w[1])),
                ),
                None => Verdict::sampled(format!("g decreases strictly on {} log-spaced points", grid.len())),
            }
        };

        let lambda3 = if !lambda1.passes() {
            Verdict::unknown("g is undefined where (Λ1) fails")
        } else {
            integrate_to_zero(&g, t_max, quad_points).0
        };

        let phi = self.check_phi_membership(&default_grid(), DEFAULT_TERMS)?;
        let all_lambda = lambda1.passes() && lambda2.passes() && lambda3.passes();
        let lambda_implies_phi = all_lambda.then(|| {
            if phi.phi1.passes() && phi.phi2.passes() {
                Verdict::pass(phi.phi1.kind == VerdictKind::Holds && phi.phi2.kind == VerdictKind::Holds, "Λ membership and Φ membership agree")
            } else {
                Verdict::fails(
                    phi.phi2.witness.clone().or(phi.phi1.witness.clone()).unwrap_or(Witness::Empty { what: "Φ evidence".into() }),
                    "Λ conditions pass but the Φ checks do not",
                )
            }
        });
        let inconsistency = match &lambda_implies_phi {
            Some(v) if v.is_fails() => Some("Λ passes while Φ fails".to_string()),
            _ => phi.inconsistency.clone(),
        };
        Ok(PhiReport {
            lambda1: Some(lambda1),
            lambda2: Some(lambda2),
            lambda3: Some(lambda3),
            lambda_implies_phi,
            inconsistency,
            ..phi
        })
    }
}

/// `∫_0^T g` as a sum over `[T 2^-j, T 2^-(j-1)]`, `j = 1..20`, each by
/// composite Simpson, with the tail below the ladder extrapolated from the
/// ratio of the last two segments.
/// Returns the verdict and the extrapolated value.
fn integrate_to_zero(g: &dyn Fn(f64) -> f64, t_max: f64, quad_points: usize) -> (Verdict, f64) {
    let m = quad_points + quad_points % 2;
    let simpson = |a: f64, b: f64| {
        let h = (b - a) / m as f64;
        let mut s = g(a) + g(b);
        for i in 1..m {
            s += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let mut segs = Vec::with_capacity(LADDER);
    let mut estimates = Vec::with_capacity(LADDER);
    let mut partial = 0.0;
    for j in 1..=LADDER {
        let hi = t_max * 0.5f64.powi(j as i32 - 1);
        let seg = simpson(hi / 2.0, hi);
        if !seg.is_finite() {
            return (Verdict::unknown(format!("g is not finite on [{}, {hi}]", hi / 2.0)), f64::NAN);
        }
        partial += seg;
        segs.push(seg);
        let tail = if j >= 2 {
            let r = seg / segs[j - 2];
            if r < 1.0 {
                seg * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        };
        estimates.push(partial + tail);
    }
    let r = segs[LADDER - 1] / segs[LADDER - 2];
    let e1 = estimates[LADDER - 1];
    let e0 = estimates[LADDER - 2];
    if r >= 0.9 {
        let v = Verdict::fails(
            Witness::Series { t: t_max * 0.5f64.powi(LADDER as i32), n: LADDER, detail: format!("partial integral {partial:.6}, segment ratio {r:.4}") },
            "dyadic segments of the integral do not decay, the integral diverges at 0",
        );
        return (v, f64::INFINITY);
    }
    let rel = (e1 - e0).abs() / e1.abs().max(f64::MIN_POSITIVE);
    let v = if rel < QUAD_REL_TOL {
        Verdict::sampled(format!("integral over (0, {t_max}] stabilizes at {e1:.9} (relative change {rel:.1e})"))
    } else {
        Verdict::unknown(format!("extrapolated integral still moves by {rel:.1e} relative"))
    };
    (v, e1)
}

impl fmt::Display for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonFunction::Linear { k } => write!(f, "phi(t) = {k} t"),
            ComparisonFunction::Rational { c } => write!(f, "phi(t) = {c} t / ({c} + t)"),
            ComparisonFunction::Hyperbolic { c } => write!(f, "phi(t) = t / ({c} + t)"),
            ComparisonFunction::OrderedTable { points } => write!(f, "table with {} breakpoints", points.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiReport {
    pub phi1: Verdict,
    pub phi2: Verdict,
    pub below_identity: Verdict,
    pub lambda1: Option<Verdict>,
    pub lambda2: Option<Verdict>,
    pub lambda3: Option<Verdict>,
    pub lambda_implies_phi: Option<Verdict>,
    pub sample_grid: Vec<f64>,
    pub inconsistency: Option<String>,
}

impl PhiReport {
    /// `φ ∈ Φ` on the evidence gathered.
    pub fn phi_verdict(&self) -> Verdict {
        self.phi1.clone().and(self.phi2.clone())
    }

    /// `ψ ∈ Λ` on the evidence gathered; `None` without a Λ check.
    pub fn lambda_verdict(&self) -> Option<Verdict> {
        Some(self.lambda1.clone()?.and(self.lambda2.clone()?).and(self.lambda3.clone()?))
    }
}
