//! Picard iteration, fixed-point enumeration and the two uniqueness
//! procedures.

use std::collections::HashMap;

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::comparison::ComparisonFunction;
use crate::contraction::ContractionInstance;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::space::PointSet;
use crate::verdict::{Verdict, VerdictKind, Witness};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 100_000;
pub const DEFAULT_TAIL_TERMS: usize = 10_000;
const CYCLE_WINDOW: usize = 1_000;
/// Slack allowed on the displacement bound `d_n <= φ^n(d_0)`.
pub const DISPLACEMENT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrbitStatus {
    /// `d(x_n, x_{n+1}) < tol` first at index `iterations`.
    Converged { limit: f64, iterations: usize, in_carrier: bool },
    /// An exact repeat at distance `period`.
    Cycled { period: usize },
    BudgetExhausted,
    /// The map was undefined at the last point.
    Escaped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit {
    pub start: f64,
    pub points: Vec<f64>,
    pub displacements: Vec<f64>,
    pub status: OrbitStatus,
}

impl Orbit {
    pub fn limit(&self) -> Option<f64> {
        match self.status {
            OrbitStatus::Converged { limit, .. } => Some(limit),
            _ => None,
        }
    }

    pub fn iterations(&self) -> Option<usize> {
        match self.status {
            OrbitStatus::Converged { iterations, .. } => Some(iterations),
            _ => None,
        }
    }
}

/// `X(f, R)` with its smallest (or first representative) element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartSet {
    pub set: PointSet,
    pub witness: Option<f64>,
}

/// `X(f, R) = {x : (x, fx) ∈ R}`.
pub fn compute_x_f_r(inst: &ContractionInstance, relation: &Relation) -> Result<StartSet> {
    let carrier = inst.space().carrier();
    let map = inst.map();
    let set = match (relation, carrier) {
        (Relation::Pairs(p), _) => {
            let mut pts = Vec::new();
            for x in p.support() {
                if carrier.contains(x) && p.contains(x, map.apply(x)?) {
                    pts.push(x);
                }
            }
            PointSet::finite(pts)?
        }
        (_, PointSet::Finite(points)) => {
            let mut pts = Vec::new();
            for &x in points {
                if relation.related(x, map.apply(x)?) {
                    pts.push(x);
                }
            }
            PointSet::finite(pts)?
        }
        (Relation::Universal, _) => carrier.clone(),
        (Relation::Geq, _) | (Relation::Leq, _) => {
            let above = matches!(relation, Relation::Geq);
            map.pieces().iter().map(|p| p.solve_order(above)).fold(PointSet::empty(), |acc, s| acc.union(&s))
        }
    };
    let witness = set.representative();
    Ok(StartSet { set, witness })
}

/// `F(f)`, exact per affine piece.
pub fn fixed_points(inst: &ContractionInstance) -> PointSet {
    inst.map().fixed_points(inst.space().carrier())
}

/// Runs `x_{n+1} = f(x_n)` from `x0`.
pub fn picard(inst: &ContractionInstance, x0: f64, max_iters: usize, tol: f64) -> Result<Orbit> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if !inst.space().contains(x0) {
        return Err(Error::OutsideCarrier(x0));
    }
    let space = inst.space();
    let mut points = vec![x0];
    let mut displacements = Vec::new();
    let mut seen: HashMap<OrderedFloat<f64>, usize> = HashMap::new();
    seen.insert(OrderedFloat(x0 + 0.0), 0);
    let mut x = x0;
    for n in 0..max_iters {
        let next = match inst.map().apply(x) {
            Ok(v) if space.contains(v) => v,
            Ok(v) => {
                points.push(v);
                return Ok(Orbit { start: x0, points, displacements, status: OrbitStatus::Escaped });
            }
            Err(_) => return Ok(Orbit { start: x0, points, displacements, status: OrbitStatus::Escaped }),
        };
        let d = space.distance_unchecked(x, next);
        points.push(next);
        displacements.push(d);
        if d < tol {
            let limit = snap(inst, next, tol);
            let status = OrbitStatus::Converged { limit, iterations: n, in_carrier: space.contains(limit) };
            return Ok(Orbit { start: x0, points, displacements, status });
        }
        let key = OrderedFloat(next + 0.0);
        if let Some(&j) = seen.get(&key) {
            return Ok(Orbit { start: x0, points, displacements, status: OrbitStatus::Cycled { period: n + 1 - j } });
        }
        seen.insert(key, n + 1);
        if n + 1 >= CYCLE_WINDOW {
            seen.remove(&OrderedFloat(points[n + 1 - CYCLE_WINDOW] + 0.0));
        }
        x = next;
    }
    Ok(Orbit { start: x0, points, displacements, status: OrbitStatus::BudgetExhausted })
}

/// The nearest exact candidate (fixed point, breakpoint, closed endpoint)
/// within `10 tol`, or `x` itself.
fn snap(inst: &ContractionInstance, x: f64, tol: f64) -> f64 {
    let mut candidates: Vec<f64> = Vec::new();
    if let Some(p) = fixed_points(inst).points() {
        candidates.extend_from_slice(p);
    } else {
        candidates.extend(fixed_points(inst).closed_endpoints());
    }
    candidates.extend(inst.map().breakpoints());
    candidates.extend(inst.space().carrier().closed_endpoints());
    candidates
        .into_iter()
        .filter(|c| (c - x).abs() <= 10.0 * tol)
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
        .unwrap_or(x)
}

/// `Σ_{k>=n} φ^k(d0)`: closed form for linear `φ`, otherwise a truncated sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub value: f64,
    pub truncated: bool,
    /// The last summed term when truncated.
    pub remainder: f64,
}

pub fn error_bound(phi: &ComparisonFunction, d0: f64, n: usize, tail_terms: usize) -> Result<TailBound> {
    if !(d0 >= 0.0) {
        return Err(Error::NegativeArgument(d0));
    }
    if let Some(k) = phi.linear_coefficient() {
        let value = k.powi(n as i32) * d0 / (1.0 - k);
        return Ok(TailBound { value, truncated: false, remainder: 0.0 });
    }
    let mut t = phi.iterate(n, d0)?;
    let mut value = 0.0;
    for _ in 0..tail_terms {
        value += t;
        t = phi.eval(t);
    }
    Ok(TailBound { value, truncated: true, remainder: t })
}

/// `d(x_n, x_{n+1}) <= φ^n(d(x_0, x_1)) + 1e-9` along the orbit.
pub fn check_displacements(orbit: &Orbit, phi: &ComparisonFunction) -> Verdict {
    let Some(&d0) = orbit.displacements.first() else {
        return Verdict::holds("no displacement recorded");
    };
    let mut bound = d0;
    for (n, &d) in orbit.displacements.iter().enumerate() {
        if d > bound + DISPLACEMENT_SLACK {
            return Verdict::fails(
                Witness::Inequality { x: orbit.points[n], y: orbit.points[n + 1], lhs: d, rhs: bound },
                format!("d(x_{n}, x_{}) = {d} exceeds phi^{n}(d0) = {bound}", n + 1),
            );
        }
        bound = phi.eval(bound);
    }
    Verdict::holds(format!("{} displacements within phi^n(d0)", orbit.displacements.len()))
}

/// `d(x_{n+1}, x_{n+2}) <= φ(max{d(x_n, x_{n+1}), d(x_{n+1}, x_{n+2})})`.
pub fn check_step_domination(orbit: &Orbit, phi: &ComparisonFunction) -> Verdict {
    for (n, w) in orbit.displacements.windows(2).enumerate() {
        let rhs = phi.eval(w[0].max(w[1]));
        if crate::verdict::compare_leq(w[1], rhs) == VerdictKind::Fails {
            return Verdict::fails(
                Witness::Inequality { x: orbit.points[n + 1], y: orbit.points[n + 2], lhs: w[1], rhs },
                format!("step {} is not dominated", n + 1),
            );
        }
    }
    Verdict::holds(format!("{} consecutive steps dominated", orbit.displacements.len().saturating_sub(1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UniquenessMode {
    Directedness,
    CompleteRestriction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniquenessEvidence {
    pub mode: UniquenessMode,
    pub bridge_point: Option<f64>,
    pub bridge_orbit: Option<Orbit>,
    pub verdict: Verdict,
}

fn ensure_fixed(inst: &ContractionInstance, p: f64) -> Result<()> {
    if inst.space().contains(p) && inst.map().apply(p) == Ok(p) {
        Ok(())
    } else {
        Err(Error::NotFixed(p))
    }
}

/// Candidate bridge points: relation support, fixed points and breakpoints.
pub fn default_pool(inst: &ContractionInstance) -> Vec<f64> {
    let mut pool: Vec<f64> = inst.relation().support().unwrap_or_default();
    pool.extend(fixed_points(inst).closed_endpoints());
    pool.extend(inst.map().breakpoints());
    pool.retain(|&p| inst.space().contains(p));
    pool.sort_by(f64::total_cmp);
    pool.dedup();
    pool
}

/// Two fixed points `p, q` and a `z` with `[p, z], [q, z] ∈ R`: the orbit
/// of `z` must approach both.
pub fn uniqueness_via_directedness(
    inst: &ContractionInstance,
    relation: &Relation,
    p: f64,
    q: f64,
    pool: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<UniquenessEvidence> {
    ensure_fixed(inst, p)?;
    ensure_fixed(inst, q)?;
    let mode = UniquenessMode::Directedness;
    if p == q {
        return Ok(UniquenessEvidence { mode, bridge_point: Some(p), bridge_orbit: None, verdict: Verdict::holds("p = q") });
    }
    let closure = relation.symmetric_closure();
    let z = match closure.common_successor(p, q, pool) {
        Some(z) if inst.space().contains(z) => z,
        _ => {
            let scope = if matches!(relation, Relation::Pairs(_)) { "exhaustive over the relation support" } else { "over the candidate pool" };
            return Ok(UniquenessEvidence {
                mode,
                bridge_point: None,
                bridge_orbit: None,
                verdict: Verdict::unknown(format!("no z with [{p}, z] and [{q}, z] related ({scope})")),
            });
        }
    };
    let orbit = picard(inst, z, max_iters, tol)?;
    let last = *orbit.points.last().expect("orbits are nonempty");
    let dp = inst.space().distance_unchecked(p, last);
    let dq = inst.space().distance_unchecked(q, last);
    let verdict = if dp < tol && dq < tol {
        Verdict::holds(format!("the orbit of z = {z} approaches both"))
    } else {
        Verdict::fails(
            Witness::Orbit { start: z, points: orbit.points.iter().copied().take(16).collect() },
            format!("the orbit of z = {z} ends at {last}: d(p, z_n) = {dp}, d(q, z_n) = {dq}"),
        )
    };
    Ok(UniquenessEvidence { mode, bridge_point: Some(z), bridge_orbit: Some(orbit), verdict })
}

/// With `R|fX` complete, two distinct fixed points would satisfy
/// `d(p, q) <= φ(d(p, q))`, contradicting `φ(t) < t`.
pub fn uniqueness_via_complete_restriction(
    inst: &ContractionInstance,
    relation: &Relation,
    contraction: &Verdict,
    p: f64,
    q: f64,
) -> Result<UniquenessEvidence> {
    ensure_fixed(inst, p)?;
    ensure_fixed(inst, q)?;
    let mode = UniquenessMode::CompleteRestriction;
    let ev = |verdict| UniquenessEvidence { mode, bridge_point: None, bridge_orbit: None, verdict };
    if p == q {
        return Ok(ev(Verdict::holds("p = q")));
    }
    let complete = relation.is_complete_relation(inst.image());
    if !complete.passes() {
        return Ok(ev(Verdict::holds(format!("no uniqueness claim: R restricted to fX is not complete ({complete})"))));
    }
    if !contraction.passes() {
        return Ok(ev(Verdict::holds("no uniqueness claim: the contraction condition does not pass")));
    }
    Ok(ev(Verdict::fails(
        Witness::Pair { x: p, y: q },
        "inconsistent instance: [p, q] is related and the contraction passes, yet p != q",
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub fixed_point: Option<f64>,
    pub orbit: Orbit,
    pub error_bound: Option<TailBound>,
    pub uniqueness: Option<UniquenessEvidence>,
}

/// Picard from `x0` (default: the smallest point of `X(f, R)`), with the
/// a-priori tail bound at the final index.
pub fn solve(inst: &ContractionInstance, x0: Option<f64>, max_iters: usize, tol: f64) -> Result<SolveResult> {
    let x0 = match x0 {
        Some(x) => x,
        None => compute_x_f_r(inst, inst.relation())?
            .witness
            .ok_or_else(|| Error::InvalidArgument("X(f, R) is empty, give a starting point".into()))?,
    };
    let orbit = picard(inst, x0, max_iters, tol)?;
    let fixed_point = orbit.limit().filter(|&p| inst.map().apply(p).map_or(false, |fp| (fp - p).abs() <= tol));
    let error_bound = match (inst.effective_phi(), orbit.displacements.first()) {
        (Some(phi), Some(&d0)) => Some(error_bound(&phi, d0, orbit.displacements.len(), DEFAULT_TAIL_TERMS)?),
        _ => None,
    };
    Ok(SolveResult { fixed_point, orbit, error_bound, uniqueness: None })
}
