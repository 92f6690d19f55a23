//! Contraction instances, the `M_f` / `N_f` functionals and the contraction
//! conditions they control.

use std::fmt;

use serde::Serialize;

use crate::comparison::ComparisonFunction;
use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::relation::Relation;
use crate::space::{MetricSpace, PointSet};
use crate::verdict::{compare_leq, Verdict, VerdictKind, Witness, EPS};

pub const DEFAULT_PAIR_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionKind {
    /// `d(fx, fy) <= φ(M_f(x, y))`.
    PhiM,
    /// `d(fx, fy) <= φ(N_f(x, y))`.
    PhiN,
    /// `d(fx, fy) <= ψ(N_f(x, y))` with `ψ` in Λ.
    LambdaN,
    /// `d(fx, fy) <= k d(x, y)`.
    LinearBanach { k: f64 },
    /// `d(fx, fy) <= k N_f(x, y)`.
    LinearCiric { k: f64 },
    /// `d(fx, fy) <= a d(x, y) + b [d(x, fx) + d(y, fy)] + c [d(x, fy) + d(y, fx)]`.
    RationalAbc { a: f64, b: f64, c: f64 },
    /// `d(fx, fy) <= k [d(x, fx) + d(y, fy)]`.
    Kannan { k: f64 },
    /// `d(fx, fy) <= k [d(x, fy) + d(y, fx)]`.
    Chatterjea { k: f64 },
}

impl ConditionKind {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidCondition(m.into()));
        match *self {
            ConditionKind::LinearBanach { k } | ConditionKind::LinearCiric { k } if !(0.0..1.0).contains(&k) => {
                bad("k must lie in [0,1)")
            }
            ConditionKind::Kannan { k } | ConditionKind::Chatterjea { k } if !(0.0..0.5).contains(&k) => {
                bad("k must lie in [0,1/2)")
            }
            ConditionKind::RationalAbc { a, b, c } => {
                if a < 0.0 || b < 0.0 || c < 0.0 {
                    bad("a, b, c must be nonnegative")
                } else if a + 2.0 * b + 2.0 * c >= 1.0 {
                    bad("a + 2b + 2c must be below 1")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn needs_phi(&self) -> bool {
        matches!(self, ConditionKind::PhiM | ConditionKind::PhiN | ConditionKind::LambdaN)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ConditionKind::PhiM => "phi_m",
            ConditionKind::PhiN => "phi_n",
            ConditionKind::LambdaN => "lambda_n",
            ConditionKind::LinearBanach { .. } => "linear_banach",
            ConditionKind::LinearCiric { .. } => "linear_ciric",
            ConditionKind::RationalAbc { .. } => "rational_abc",
            ConditionKind::Kannan { .. } => "kannan",
            ConditionKind::Chatterjea { .. } => "chatterjea",
        }
    }

    /// A linear `φ(t) = k t` under which this condition implies the
    /// `φ(N_f)` form (and so the `φ(M_f)` form).
    pub fn implied_phi(&self) -> Option<ComparisonFunction> {
        let k = match *self {
            ConditionKind::LinearBanach { k } | ConditionKind::LinearCiric { k } => k,
            ConditionKind::Kannan { k } | ConditionKind::Chatterjea { k } => 2.0 * k,
            ConditionKind::RationalAbc { a, b, c } => a + 2.0 * b + 2.0 * c,
            _ => return None,
        };
        Some(ComparisonFunction::Linear { k })
    }

    /// Right-hand side of the condition at a pair.
    pub fn rhs(&self, phi: Option<&ComparisonFunction>, t: &Terms) -> Result<f64> {
        let phi = || phi.ok_or_else(|| Error::InvalidCondition(format!("{} needs a comparison function", self.tag())));
        Ok(match *self {
            ConditionKind::PhiM => phi()?.eval(t.m()),
            ConditionKind::PhiN | ConditionKind::LambdaN => phi()?.eval(t.n()),
            ConditionKind::LinearBanach { k } => k * t.d_xy,
            ConditionKind::LinearCiric { k } => k * t.n(),
            ConditionKind::RationalAbc { a, b, c } => a * t.d_xy + b * (t.d_xfx + t.d_yfy) + c * (t.d_xfy + t.d_yfx),
            ConditionKind::Kannan { k } => k * (t.d_xfx + t.d_yfy),
            ConditionKind::Chatterjea { k } => k * (t.d_xfy + t.d_yfx),
        })
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionKind::PhiM => f.write_str("d(fx,fy) <= phi(M_f(x,y))"),
            ConditionKind::PhiN => f.write_str("d(fx,fy) <= phi(N_f(x,y))"),
            ConditionKind::LambdaN => f.write_str("d(fx,fy) <= psi(N_f(x,y)), psi in Lambda"),
            ConditionKind::LinearBanach { k } => write!(f, "d(fx,fy) <= {k} d(x,y)"),
            ConditionKind::LinearCiric { k } => write!(f, "d(fx,fy) <= {k} N_f(x,y)"),
            ConditionKind::RationalAbc { a, b, c } => {
                write!(f, "d(fx,fy) <= {a} d(x,y) + {b} [d(x,fx)+d(y,fy)] + {c} [d(x,fy)+d(y,fx)]")
            }
            ConditionKind::Kannan { k } => write!(f, "d(fx,fy) <= {k} [d(x,fx)+d(y,fy)]"),
            ConditionKind::Chatterjea { k } => write!(f, "d(fx,fy) <= {k} [d(x,fy)+d(y,fx)]"),
        }
    }
}

/// The six distances that every condition is built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Terms {
    pub d_xy: f64,
    pub d_xfx: f64,
    pub d_yfy: f64,
    pub d_xfy: f64,
    pub d_yfx: f64,
    pub d_fxfy: f64,
}

impl Terms {
    pub fn m(&self) -> f64 {
        self.d_xy.max(self.d_xfx).max(self.d_yfy).max(0.5 * (self.d_xfy + self.d_yfx))
    }

    pub fn n(&self) -> f64 {
        self.d_xy.max(0.5 * (self.d_xfx + self.d_yfy)).max(0.5 * (self.d_xfy + self.d_yfx))
    }
}

/// Which linear bound to infer from the data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Banach,
    Ciric,
    Kannan,
    Chatterjea,
}

impl BoundKind {
    /// Exclusive upper limit for the constant.
    pub fn limit(self) -> f64 {
        match self {
            BoundKind::Banach | BoundKind::Ciric => 1.0,
            BoundKind::Kannan | BoundKind::Chatterjea => 0.5,
        }
    }

    fn gauge(self, t: &Terms) -> f64 {
        match self {
            BoundKind::Banach => t.d_xy,
            BoundKind::Ciric => t.n(),
            BoundKind::Kannan => t.d_xfx + t.d_yfy,
            BoundKind::Chatterjea => t.d_xfy + t.d_yfx,
        }
    }

    pub fn condition(self, k: f64) -> ConditionKind {
        match self {
            BoundKind::Banach => ConditionKind::LinearBanach { k },
            BoundKind::Ciric => ConditionKind::LinearCiric { k },
            BoundKind::Kannan => ConditionKind::Kannan { k },
            BoundKind::Chatterjea => ConditionKind::Chatterjea { k },
        }
    }
}

/// Smallest constant consistent with the checked pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearBound {
    pub kind: BoundKind,
    /// `sup d(fx,fy) / gauge`, infinite when the gauge vanishes under a
    /// positive left side.
    pub value: f64,
    pub argmax: Option<(f64, f64)>,
    pub lhs: f64,
    pub gauge: f64,
    pub exhaustive: bool,
}

/// A deterministic set of related pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSample {
    pub pairs: Vec<(f64, f64)>,
    pub exhaustive: bool,
}

/// One evaluated inequality with a positive left side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ActiveCase {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionReport {
    pub verdict: Verdict,
    pub pairs_checked: usize,
    pub active_cases: usize,
    /// The first few active cases, for display.
    pub active: Vec<ActiveCase>,
    pub exhaustive: bool,
}

const ACTIVE_KEPT: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionInstance {
    space: MetricSpace,
    y: MetricSpace,
    relation: Relation,
    map: SelfMap,
    phi: Option<ComparisonFunction>,
    condition: ConditionKind,
    image: PointSet,
}

impl ContractionInstance {
    /// Validates `fX ⊆ Y ⊆ X`, the map's domain, the condition's constants,
    /// that pair lists live in `X` and that `φ` is given exactly for
    /// φ-conditions. `y = None` takes `Y = X`.
    pub fn new(
        space: MetricSpace,
        y: Option<PointSet>,
        relation: Relation,
        map: SelfMap,
        phi: Option<ComparisonFunction>,
        condition: ConditionKind,
    ) -> Result<Self> {
        let carrier = space.carrier();
        map.check_domain(carrier)?;
        condition.validate()?;
        if condition.needs_phi() != phi.is_some() {
            return Err(Error::InvalidInstance(if phi.is_some() {
                format!("{} takes no comparison function", condition.tag())
            } else {
                format!("{} needs a comparison function", condition.tag())
            }));
        }
        if let Relation::Pairs(p) = &relation {
            if let Some((x, y)) = p.iter().find(|&(x, y)| !carrier.contains(x) || !carrier.contains(y)) {
                return Err(Error::InvalidRelation(format!("pair ({x}, {y}) is outside the carrier")));
            }
        }
        let y_set = y.unwrap_or_else(|| carrier.clone());
        if !y_set.is_subset_of(carrier) {
            return Err(Error::InvalidInstance(format!("Y = {y_set} is not contained in X = {carrier}")));
        }
        let image = map.image(carrier)?;
        if !image.is_subset_of(&y_set) {
            let x = image.point_outside(&y_set).map(|v| format!(" ({v} escapes)")).unwrap_or_default();
            return Err(Error::InvalidInstance(format!("fX = {image} is not contained in Y = {y_set}{x}")));
        }
        let y = space.subspace(&y_set)?;
        Ok(ContractionInstance { space, y, relation, map, phi, condition, image })
    }

    /// Skips the inclusion and domain checks, for negative tests of the
    /// self-map invariant.
    pub fn unchecked(
        space: MetricSpace,
        relation: Relation,
        map: SelfMap,
        phi: Option<ComparisonFunction>,
        condition: ConditionKind,
    ) -> Self {
        let image = map.image(space.carrier()).unwrap_or_else(|_| PointSet::empty());
        let y = space.clone();
        ContractionInstance { space, y, relation, map, phi, condition, image }
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn y(&self) -> &MetricSpace {
        &self.y
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn map(&self) -> &SelfMap {
        &self.map
    }

    pub fn phi(&self) -> Option<&ComparisonFunction> {
        self.phi.as_ref()
    }

    pub fn condition(&self) -> ConditionKind {
        self.condition
    }

    /// `fX`, computed exactly.
    pub fn image(&self) -> &PointSet {
        &self.image
    }

    pub fn with_relation(&self, relation: Relation) -> ContractionInstance {
        ContractionInstance { relation, ..self.clone() }
    }

    pub fn with_condition(&self, condition: ConditionKind, phi: Option<ComparisonFunction>) -> Result<ContractionInstance> {
        condition.validate()?;
        if condition.needs_phi() && phi.is_none() {
            return Err(Error::InvalidInstance(format!("{} needs a comparison function", condition.tag())));
        }
        Ok(ContractionInstance { condition, phi: if condition.needs_phi() { phi } else { None }, ..self.clone() })
    }

    /// `Y = X` with everything else unchanged.
    pub fn with_full_subspace(&self) -> ContractionInstance {
        ContractionInstance { y: self.space.clone(), ..self.clone() }
    }

    /// The comparison function of a φ-condition, or the linear one implied
    /// by a linear condition.
    pub fn effective_phi(&self) -> Option<ComparisonFunction> {
        self.phi.clone().or_else(|| self.condition.implied_phi())
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !self.space.contains(x) {
            return Err(Error::OutsideCarrier(x));
        }
        self.map.apply(x)
    }

    pub fn terms(&self, x: f64, y: f64) -> Result<Terms> {
        let fx = self.apply(x)?;
        let fy = self.apply(y)?;
        let d = |a: f64, b: f64| self.space.distance(a, b);
        Ok(Terms { d_xy: d(x, y)?, d_xfx: d(x, fx)?, d_yfy: d(y, fy)?, d_xfy: d(x, fy)?, d_yfx: d(y, fx)?, d_fxfy: d(fx, fy)? })
    }

    pub fn m_f(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.terms(x, y)?.m())
    }

    pub fn n_f(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.terms(x, y)?.n())
    }

    /// Both sides of the instance's condition at `(x, y)`.
    pub fn evaluate_pair(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let t = self.terms(x, y)?;
        Ok((t.d_fxfy, self.condition.rhs(self.phi.as_ref(), &t)?))
    }

    /// Carrier points for sampled checks: all of a finite carrier, or a
    /// stratified grid with every breakpoint `b` and `b ± EPS max(1, |b|)`.
    pub fn point_sample(&self, n: usize) -> (Vec<f64>, bool) {
        let carrier = self.space.carrier();
        if carrier.is_finite() {
            return (carrier.sample(0), true);
        }
        let mut pts = carrier.sample(n);
        for b in self.map.breakpoints() {
            let h = EPS * b.abs().max(1.0);
            pts.extend([b - h, b, b + h].into_iter().filter(|&p| carrier.contains(p)));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        (pts, false)
    }

    /// Pairs related under `relation`, exhaustive when the relation is a
    /// pair list or the carrier is finite.
    pub fn pair_sample(&self, relation: &Relation, budget: usize) -> PairSample {
        if let Relation::Pairs(p) = relation {
            return PairSample { pairs: p.iter().collect(), exhaustive: true };
        }
        let (pts, exhaustive) = self.point_sample((budget as f64).sqrt().ceil() as usize);
        let mut pairs = Vec::new();
        for &x in &pts {
            for &y in &pts {
                if relation.related(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        PairSample { pairs, exhaustive }
    }

    pub fn check_contraction(&self, budget: usize) -> Result<ContractionReport> {
        self.check_contraction_under(&self.relation, budget)
    }

    pub fn check_contraction_under(&self, relation: &Relation, budget: usize) -> Result<ContractionReport> {
        if self.condition.needs_phi() && self.phi.is_none() {
            return Err(Error::InvalidCondition(format!("{} needs a comparison function", self.condition.tag())));
        }
        let sample = self.pair_sample(relation, budget);
        let mut worst = Verdict::pass(sample.exhaustive, "");
        let mut active = Vec::new();
        let mut active_cases = 0;
        for &(x, y) in &sample.pairs {
            let (lhs, rhs) = self.evaluate_pair(x, y)?;
            if lhs > 0.0 {
                active_cases += 1;
                if active.len() < ACTIVE_KEPT {
                    active.push(ActiveCase { x, y, lhs, rhs });
                }
            }
            match compare_leq(lhs, rhs) {
                VerdictKind::Fails => {
                    return Ok(ContractionReport {
                        verdict: Verdict::fails(
                            Witness::Inequality { x, y, lhs, rhs },
                            format!("{} violated at ({x}, {y}): {lhs} > {rhs}", self.condition),
                        ),
                        pairs_checked: sample.pairs.len(),
                        active_cases,
                        active,
                        exhaustive: sample.exhaustive,
                    })
                }
                VerdictKind::Unknown if worst.kind != VerdictKind::Unknown => {
                    worst = Verdict::unknown(format!("({x}, {y}) lies in the tolerance band: {lhs} vs {rhs}"))
                        .with_witness(Witness::Inequality { x, y, lhs, rhs });
                }
                _ => {}
            }
        }
        let n = sample.pairs.len();
        let how = if sample.exhaustive { "exhaustive over" } else { "sampled on" };
        if worst.passes() {
            worst.note = format!("{how} {n} related pairs, {active_cases} with d(fx,fy) > 0");
        }
        Ok(ContractionReport { verdict: worst, pairs_checked: n, active_cases, active, exhaustive: sample.exhaustive })
    }

    /// `N_f <= M_f` on the given pairs.
    pub fn check_n_below_m(&self, pairs: &[(f64, f64)], exhaustive: bool) -> Result<Verdict> {
        for &(x, y) in pairs {
            let t = self.terms(x, y)?;
            if t.n() > t.m() {
                return Ok(Verdict::fails(
                    Witness::Inequality { x, y, lhs: t.n(), rhs: t.m() },
                    "N_f exceeds M_f: implementation bug",
                ));
            }
        }
        Ok(Verdict::pass(exhaustive, format!("N_f <= M_f on {} pairs", pairs.len())))
    }

    /// `M_f(x, fx) <= max{d(x, fx), d(fx, f²x)}` on the given points.
    pub fn check_orbit_step_bound(&self, points: &[f64], exhaustive: bool) -> Result<Verdict> {
        for &x in points {
            let fx = self.apply(x)?;
            let ffx = self.apply(fx)?;
            let lhs = self.m_f(x, fx)?;
            let rhs = self.space.distance(x, fx)?.max(self.space.distance(fx, ffx)?);
            if compare_leq(lhs, rhs) == VerdictKind::Fails {
                return Ok(Verdict::fails(Witness::Inequality { x, y: fx, lhs, rhs }, format!("M_f({x}, f{x}) = {lhs} > {rhs}")));
            }
        }
        Ok(Verdict::pass(exhaustive, format!("checked at {} points", points.len())))
    }

    /// The φ(M_f) condition over `R` and over its symmetric closure must
    /// agree.
    pub fn check_symmetric_closure_agrees(&self, budget: usize) -> Result<Verdict> {
        if self.condition != ConditionKind::PhiM {
            return Err(Error::ConditionMismatch {
                theorem: "the symmetric-closure equivalence".into(),
                required: "phi_m".into(),
                found: self.condition.tag().into(),
            });
        }
        let a = self.check_contraction(budget)?.verdict;
        let b = self.check_contraction_under(&self.relation.symmetric_closure(), budget)?.verdict;
        Ok(match (a.kind, b.kind) {
            (VerdictKind::Unknown, _) | (_, VerdictKind::Unknown) => Verdict::unknown("one side is inside the tolerance band"),
            (ka, kb) if ka.passes() == kb.passes() => {
                let exhaustive = ka == VerdictKind::Holds || ka == VerdictKind::Fails;
                Verdict::pass(exhaustive, if ka.passes() { "both forms hold" } else { "both forms fail" })
            }
            _ => {
                let w = b.witness.clone().or(a.witness.clone()).expect("a failing verdict has a witness");
                Verdict::fails(w, format!("forms disagree: over R {}, over the closure {}", a.kind, b.kind))
            }
        })
    }

    /// The smallest constant of the given linear form that the checked
    /// related pairs allow.
    pub fn infer_linear_bound(&self, kind: BoundKind, budget: usize) -> Result<LinearBound> {
        let sample = self.pair_sample(&self.relation, budget);
        let mut best = LinearBound { kind, value: 0.0, argmax: None, lhs: 0.0, gauge: 0.0, exhaustive: sample.exhaustive };
        for &(x, y) in &sample.pairs {
            let t = self.terms(x, y)?;
            if t.d_fxfy <= 0.0 {
                continue;
            }
            let g = kind.gauge(&t);
            let r = if g > 0.0 { t.d_fxfy / g } else { f64::INFINITY };
            if r > best.value {
                best = LinearBound { value: r, argmax: Some((x, y)), lhs: t.d_fxfy, gauge: g, ..best };
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::AffinePiece;
    use crate::space::Interval;

    pub(crate) fn example_4_1() -> ContractionInstance {
        let x = MetricSpace::interval(Interval::open(-1.0, 4.0).unwrap()).unwrap();
        let f = SelfMap::piecewise(vec![
            AffinePiece::new(Interval::open_closed(-1.0, 2.0).unwrap(), 0.5, 0.0).unwrap(),
            AffinePiece::constant(Interval::open(2.0, 4.0).unwrap(), 1.0).unwrap(),
        ])
        .unwrap();
        let y = PointSet::intervals(vec![Interval::closed_open(-0.5, 2.0).unwrap()]);
        ContractionInstance::new(x, Some(y), Relation::Geq, f, Some(ComparisonFunction::linear(0.5).unwrap()), ConditionKind::PhiM)
            .unwrap()
    }

    fn example_4_3(condition: ConditionKind, phi: Option<ComparisonFunction>) -> ContractionInstance {
        let x = MetricSpace::interval(Interval::closed(0.0, 4.0).unwrap()).unwrap();
        let f = SelfMap::step(vec![
            (Interval::closed_open(0.0, 1.0).unwrap(), 0.0),
            (Interval::closed_open(1.0, 2.0).unwrap(), 3.0),
            (Interval::closed(2.0, 4.0).unwrap(), 4.0),
        ])
        .unwrap();
        let r = Relation::pairs([(0.0, 0.0), (1.0, 1.0), (3.0, 3.0), (4.0, 4.0), (1.0, 2.0), (3.0, 4.0)]).unwrap();
        ContractionInstance::new(x, None, r, f, phi, condition).unwrap()
    }

    #[test]
    fn functionals() {
        let e3 = example_4_3(ConditionKind::PhiM, Some(ComparisonFunction::linear(0.75).unwrap()));
        assert_eq!(e3.m_f(1.0, 2.0).unwrap(), 2.0);
        assert_eq!(e3.n_f(1.0, 2.0).unwrap(), 2.0);
        assert_eq!(e3.m_f(4.0, 4.0).unwrap(), 0.0);
        let e1 = example_4_1();
        assert_eq!(e1.m_f(3.0, 1.0).unwrap(), 2.0);
        assert!(e1.m_f(5.0, 1.0).is_err());
    }

    #[test]
    fn example_4_3_conditions() {
        let e3 = example_4_3(ConditionKind::PhiM, Some(ComparisonFunction::linear(0.75).unwrap()));
        let r = e3.check_contraction(DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(r.verdict.kind, VerdictKind::Holds);
        assert_eq!(r.pairs_checked, 6);
        assert_eq!(r.active, vec![ActiveCase { x: 1.0, y: 2.0, lhs: 1.0, rhs: 1.5 }]);
        for k in [0.0, 0.5, 0.99] {
            let b = example_4_3(ConditionKind::LinearBanach { k }, None);
            let v = b.check_contraction(DEFAULT_PAIR_BUDGET).unwrap().verdict;
            assert_eq!(v.witness, Some(Witness::Inequality { x: 1.0, y: 2.0, lhs: 1.0, rhs: k }));
        }
        let bound = e3.infer_linear_bound(BoundKind::Banach, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(bound.value, 1.0);
        assert_eq!(bound.argmax, Some((1.0, 2.0)));
        assert_eq!(e3.check_symmetric_closure_agrees(DEFAULT_PAIR_BUDGET).unwrap().kind, VerdictKind::Holds);
    }

    #[test]
    fn example_4_1_conditions() {
        let e1 = example_4_1();
        assert_eq!(e1.image().to_string(), "(-0.5, 1]");
        let r = e1.check_contraction(DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(r.verdict.kind, VerdictKind::HoldsSampled);
        assert!(!r.exhaustive);
        let n = e1.with_condition(ConditionKind::PhiN, e1.phi().cloned()).unwrap();
        assert!(n.check_contraction(DEFAULT_PAIR_BUDGET).unwrap().verdict.passes());
        assert!(e1.check_symmetric_closure_agrees(DEFAULT_PAIR_BUDGET).unwrap().passes());
        let (pts, _) = e1.point_sample(50);
        assert!(pts.contains(&2.0));
        assert!(e1.check_orbit_step_bound(&pts, false).unwrap().passes());
    }

    #[test]
    fn construction_errors() {
        let x = MetricSpace::interval(Interval::closed(0.0, 1.0).unwrap()).unwrap();
        let f = SelfMap::step(vec![(Interval::closed(0.0, 1.0).unwrap(), 0.0)]).unwrap();
        let err = ContractionInstance::new(x.clone(), None, Relation::Geq, f.clone(), None, ConditionKind::LinearBanach { k: 1.0 });
        assert_eq!(err.unwrap_err(), Error::InvalidCondition("k must lie in [0,1)".into()));
        assert!(ContractionInstance::new(x.clone(), None, Relation::Geq, f.clone(), None, ConditionKind::PhiM).is_err());
        let y = PointSet::intervals(vec![Interval::closed(0.5, 1.0).unwrap()]);
        assert!(ContractionInstance::new(x.clone(), Some(y), Relation::Geq, f.clone(), None, ConditionKind::Kannan { k: 0.1 }).is_err());
        assert!(ConditionKind::RationalAbc { a: 0.5, b: 0.1, c: 0.15 }.validate().is_err());
        assert!(ConditionKind::RationalAbc { a: 0.5, b: 0.1, c: 0.1 }.validate().is_ok());
        let outside = Relation::pairs([(0.0, 2.0)]).unwrap();
        assert!(ContractionInstance::new(x, None, outside, f, None, ConditionKind::Kannan { k: 0.1 }).is_err());
    }
}
