//! Hypothesis bundles for each theorem, conclusion validation against the
//! solver, and side-by-side comparison of several theorems on one instance.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::comparison::{default_grid, ComparisonFunction, PhiReport, DEFAULT_QUAD_POINTS, DEFAULT_TERMS};
use crate::contraction::{BoundKind, ConditionKind, ContractionInstance, DEFAULT_PAIR_BUDGET};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::solver::{self, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::space::PointSet;
use crate::verdict::{Verdict, VerdictKind, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    T1_17,
    T1_18,
    T2_1,
    C2_2,
    C2_3,
    C2_4,
    T2_5,
    T2_7,
    C2_8,
    C2_10,
    C3_1,
    C3_3,
    C3_5,
    C3_6,
    C3_8,
    C3_10,
}

/// The condition family a theorem's slot (v) is stated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RequiredCondition {
    PhiM,
    PhiN,
    LambdaN,
    Banach,
    Ciric,
    RationalAbc,
    Kannan,
    Chatterjea,
}

impl RequiredCondition {
    pub fn matches(self, c: ConditionKind) -> bool {
        matches!(
            (self, c),
            (RequiredCondition::PhiM, ConditionKind::PhiM)
                | (RequiredCondition::PhiN, ConditionKind::PhiN)
                | (RequiredCondition::LambdaN, ConditionKind::LambdaN)
                | (RequiredCondition::Banach, ConditionKind::LinearBanach { .. })
                | (RequiredCondition::Ciric, ConditionKind::LinearCiric { .. })
                | (RequiredCondition::RationalAbc, ConditionKind::RationalAbc { .. })
                | (RequiredCondition::Kannan, ConditionKind::Kannan { .. })
                | (RequiredCondition::Chatterjea, ConditionKind::Chatterjea { .. })
        )
    }

    fn phi_condition(self) -> Option<ConditionKind> {
        match self {
            RequiredCondition::PhiM => Some(ConditionKind::PhiM),
            RequiredCondition::PhiN => Some(ConditionKind::PhiN),
            RequiredCondition::LambdaN => Some(ConditionKind::LambdaN),
            _ => None,
        }
    }

    fn bound_kind(self) -> Option<BoundKind> {
        match self {
            RequiredCondition::Banach => Some(BoundKind::Banach),
            RequiredCondition::Ciric => Some(BoundKind::Ciric),
            RequiredCondition::Kannan => Some(BoundKind::Kannan),
            RequiredCondition::Chatterjea => Some(BoundKind::Chatterjea),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConclusionKind {
    Existence,
    ExistenceAndUniqueness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RelationUse {
    Own,
    Closure,
    Universal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Completeness {
    /// `(Y, d)` is R-complete.
    RCompleteY,
    /// `(X, d)` is R-complete.
    RCompleteX,
    /// `(Y, d)` is complete.
    CompleteY,
    /// `(X, d)` is complete.
    CompleteX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Regularity {
    /// R-continuity of `f` or d-self-closedness of `R|Y`.
    RContinuityOrClosed,
    /// Continuity of `f` or d-self-closedness of `R|Y`.
    ContinuityOrClosed,
    /// Regularity of `(X, d, S)` only.
    RegularX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Uniqueness {
    FxDirected,
    RestrictionComplete,
    FixedSetDirected,
    PathsBetweenFixed,
}

impl Uniqueness {
    fn label(self) -> &'static str {
        match self {
            Uniqueness::RestrictionComplete => "(vi)'",
            _ => "(vi)",
        }
    }

    fn description(self) -> &'static str {
        match self {
            Uniqueness::FxDirected => "fX is R^s-directed",
            Uniqueness::RestrictionComplete => "R restricted to fX is complete",
            Uniqueness::FixedSetDirected => "F(f) is S-directed",
            Uniqueness::PathsBetweenFixed => "a path in R^s joins every pair of fixed points",
        }
    }
}

struct Bundle {
    condition: RequiredCondition,
    relation: RelationUse,
    completeness: Completeness,
    regularity: Regularity,
    required: Option<Uniqueness>,
    optional: Option<Uniqueness>,
    note: &'static str,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T1_17,
        TheoremId::T1_18,
        TheoremId::T2_1,
        TheoremId::C2_2,
        TheoremId::C2_3,
        TheoremId::C2_4,
        TheoremId::T2_5,
        TheoremId::T2_7,
        TheoremId::C2_8,
        TheoremId::C2_10,
        TheoremId::C3_1,
        TheoremId::C3_3,
        TheoremId::C3_5,
        TheoremId::C3_6,
        TheoremId::C3_8,
        TheoremId::C3_10,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T1_17 => "T1.17",
            TheoremId::T1_18 => "T1.18",
            TheoremId::T2_1 => "T2.1",
            TheoremId::C2_2 => "C2.2",
            TheoremId::C2_3 => "C2.3",
            TheoremId::C2_4 => "C2.4",
            TheoremId::T2_5 => "T2.5",
            TheoremId::T2_7 => "T2.7",
            TheoremId::C2_8 => "C2.8",
            TheoremId::C2_10 => "C2.10",
            TheoremId::C3_1 => "C3.1",
            TheoremId::C3_3 => "C3.3",
            TheoremId::C3_5 => "C3.5",
            TheoremId::C3_6 => "C3.6",
            TheoremId::C3_8 => "C3.8",
            TheoremId::C3_10 => "C3.10",
        }
    }

    fn bundle(self) -> Bundle {
        use Completeness::*;
        use Regularity::*;
        use RelationUse::*;
        use RequiredCondition as C;
        let b = |condition, relation, completeness, regularity, required, optional, note| Bundle {
            condition,
            relation,
            completeness,
            regularity,
            required,
            optional,
            note,
        };
        let fx = Some(Uniqueness::FxDirected);
        match self {
            TheoremId::T1_17 => b(C::PhiN, Closure, CompleteX, RegularX, None, Some(Uniqueness::FixedSetDirected), ""),
            TheoremId::T1_18 => b(
                C::Banach,
                Own,
                RCompleteY,
                RContinuityOrClosed,
                None,
                Some(Uniqueness::PathsBetweenFixed),
                "(vi) is checked between fixed points only; the stated hypothesis quantifies over all of X and is stronger",
            ),
            TheoremId::T2_1 => b(C::PhiM, Own, RCompleteY, RContinuityOrClosed, None, None, ""),
            TheoremId::C2_2 => b(C::PhiM, Own, RCompleteX, RContinuityOrClosed, None, None, "Y = X"),
            TheoremId::C2_3 => b(C::PhiM, Own, CompleteY, ContinuityOrClosed, None, None, ""),
            TheoremId::C2_4 => b(C::PhiN, Own, RCompleteY, RContinuityOrClosed, None, None, ""),
            TheoremId::T2_5 => b(C::PhiN, Own, RCompleteY, RContinuityOrClosed, fx, None, ""),
            TheoremId::T2_7 => b(C::PhiN, Own, RCompleteY, RContinuityOrClosed, Some(Uniqueness::RestrictionComplete), None, ""),
            TheoremId::C2_8 => b(
                C::PhiN,
                Closure,
                RCompleteY,
                RContinuityOrClosed,
                None,
                Some(Uniqueness::FixedSetDirected),
                "uniqueness is stated with F(f) S-directed, where the parent theorem asks for fX R^s-directed",
            ),
            TheoremId::C2_10 => b(C::LambdaN, Own, RCompleteY, RContinuityOrClosed, fx, None, ""),
            TheoremId::C3_1 => b(C::Ciric, Own, RCompleteY, RContinuityOrClosed, None, fx, ""),
            TheoremId::C3_3 => b(C::RationalAbc, Own, RCompleteY, RContinuityOrClosed, None, fx, ""),
            TheoremId::C3_5 => b(C::Banach, Own, RCompleteY, RContinuityOrClosed, None, fx, ""),
            TheoremId::C3_6 => b(C::Kannan, Own, RCompleteY, RContinuityOrClosed, None, fx, ""),
            TheoremId::C3_8 => b(C::Chatterjea, Own, RCompleteY, RContinuityOrClosed, None, fx, ""),
            TheoremId::C3_10 => b(
                C::PhiN,
                Universal,
                CompleteY,
                RContinuityOrClosed,
                Some(Uniqueness::RestrictionComplete),
                None,
                "the universal relation substituted into the N_f bundle",
            ),
        }
    }

    pub fn required_condition(self) -> RequiredCondition {
        self.bundle().condition
    }

    pub fn conclusion(self) -> ConclusionKind {
        if self.bundle().required.is_some() {
            ConclusionKind::ExistenceAndUniqueness
        } else {
            ConclusionKind::Existence
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        TheoremId::ALL
            .into_iter()
            .find(|id| id.label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id {t:?}")))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Sampling budgets shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Budgets {
    pub pairs: usize,
    pub terms: usize,
    pub quad_points: usize,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            pairs: DEFAULT_PAIR_BUDGET,
            terms: DEFAULT_TERMS,
            quad_points: DEFAULT_QUAD_POINTS,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Slot {
    pub label: String,
    pub description: String,
    pub verdict: Verdict,
    /// A "moreover" hypothesis that only upgrades the conclusion.
    pub optional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub condition: String,
    pub slots: Vec<Slot>,
    pub overall: Verdict,
    pub first_failing: Option<String>,
    pub conclusion: ConclusionKind,
    /// Whether uniqueness is claimed (required, or an optional slot passed).
    pub claims_uniqueness: bool,
    pub conclusion_check: Option<Verdict>,
    pub phi_report: Option<PhiReport>,
    pub note: String,
}

impl HypothesisReport {
    /// `pass`, `pass (sampled)`, `fail(i)`, `unknown(v)`.
    pub fn summary(&self) -> String {
        match self.overall.kind {
            VerdictKind::Holds => "pass".into(),
            VerdictKind::HoldsSampled => "pass (sampled)".into(),
            k => {
                let slot = self.slots.iter().filter(|s| !s.optional).find(|s| s.verdict.kind == k).map(|s| s.label.as_str()).unwrap_or("");
                let word = if k == VerdictKind::Fails { "fail" } else { "unknown" };
                format!("{word}{slot}")
            }
        }
    }

    pub fn slot(&self, label: &str) -> Option<&Slot> {
        self.slots.iter().find(|s| s.label == label)
    }
}

/// Runs every hypothesis of `theorem` on the instance, whose condition must
/// be of the theorem's family.
pub fn check_hypotheses(inst: &ContractionInstance, theorem: TheoremId, budgets: &Budgets) -> Result<HypothesisReport> {
    let bundle = theorem.bundle();
    if !bundle.condition.matches(inst.condition()) {
        return Err(Error::ConditionMismatch {
            theorem: theorem.label().into(),
            required: format!("{:?}", bundle.condition),
            found: inst.condition().tag().into(),
        });
    }
    assemble(inst, theorem, budgets, None)
}

fn assemble(inst: &ContractionInstance, theorem: TheoremId, budgets: &Budgets, forced_v: Option<(Verdict, String)>) -> Result<HypothesisReport> {
    let bundle = theorem.bundle();
    let relation = match bundle.relation {
        RelationUse::Own => inst.relation().clone(),
        RelationUse::Closure => inst.relation().symmetric_closure(),
        RelationUse::Universal => Relation::Universal,
    };
    let inst = inst.with_relation(relation.clone());
    let carrier = inst.space().carrier();
    let mut slots = Vec::new();
    let slot = |label: &str, description: String, verdict: Verdict, optional: bool| Slot {
        label: label.into(),
        description,
        verdict,
        optional,
    };

    // (i)
    let whole_space = matches!(bundle.completeness, Completeness::RCompleteX | Completeness::CompleteX);
    let space = if whole_space { inst.space() } else { inst.y() };
    let (inclusion, space_name) = if whole_space {
        (Verdict::holds(format!("fX = {} lies in X = {}", inst.image(), carrier)), "X")
    } else if inst.image().is_subset_of(inst.y().carrier()) && inst.y().carrier().is_subset_of(carrier) {
        (Verdict::holds(format!("fX = {} ⊆ Y = {} ⊆ X = {}", inst.image(), inst.y().carrier(), carrier)), "Y")
    } else {
        let x = inst.image().point_outside(inst.y().carrier()).unwrap_or(f64::NAN);
        (Verdict::fails(Witness::Point { x }, "fX ⊆ Y ⊆ X does not hold"), "Y")
    };
    let (completeness, what) = match bundle.completeness {
        Completeness::RCompleteX | Completeness::RCompleteY => (space.is_r_complete(&relation), "R-complete"),
        Completeness::CompleteX | Completeness::CompleteY => (space.is_complete(), "complete"),
    };
    slots.push(slot("(i)", format!("({space_name}, d) is {what}"), completeness.and(inclusion), false));

    // (ii)
    let starts = solver::compute_x_f_r(&inst, &relation)?;
    let v = if starts.set.is_empty() {
        Verdict::fails(Witness::Empty { what: "X(f, R)".into() }, "no x with (x, fx) related")
    } else {
        Verdict::holds(format!("X(f, R) = {}", starts.set))
    };
    slots.push(slot("(ii)", "X(f, R) is non-empty".into(), v, false));

    // (iii)
    slots.push(slot("(iii)", "R is f-closed".into(), relation.is_f_closed(inst.map(), carrier), false));

    // (iv)
    let closed_space = if whole_space { inst.space() } else { inst.y() };
    let closed = relation.is_d_self_closed(closed_space);
    let (v, description) = match bundle.regularity {
        Regularity::RegularX => (closed, "(X, d, S) is regular".to_string()),
        Regularity::RContinuityOrClosed => {
            let cont = r_continuity(&inst, &relation);
            (cont.or(closed), format!("f is R-continuous or R restricted to {space_name} is d-self-closed"))
        }
        Regularity::ContinuityOrClosed => {
            let cont = inst.map().one_sided_continuity(carrier, true, true);
            (cont.or(closed), format!("f is continuous or R restricted to {space_name} is d-self-closed"))
        }
    };
    slots.push(slot("(iv)", description, v, false));

    // (v)
    let x0_scale = starts.witness.and_then(|x| inst.apply(x).ok().map(|fx| (fx - x).abs())).filter(|d| *d > 0.0);
    let (v, phi_report, description) = match forced_v {
        Some((v, d)) => (v, None, d),
        None => {
            let (v, p) = contraction_slot(&inst, bundle.condition, budgets, x0_scale)?;
            (v, p, inst.condition().to_string())
        }
    };
    slots.push(slot("(v)", description, v, false));

    // (vi)
    for (u, optional) in [(bundle.required, false), (bundle.optional, true)] {
        if let Some(u) = u {
            let v = uniqueness_slot(&inst, &relation, u)?;
            slots.push(slot(u.label(), u.description().into(), v, optional));
        }
    }

    let required: Vec<&Slot> = slots.iter().filter(|s| !s.optional).collect();
    let overall = Verdict::all(required.iter().map(|s| s.verdict.clone()), "");
    let first_failing = required.iter().find(|s| s.verdict.kind == overall.kind && !overall.passes()).map(|s| s.label.clone());
    let overall = if overall.passes() {
        Verdict::pass(overall.kind == VerdictKind::Holds, "every hypothesis passes")
    } else {
        let s = required.iter().find(|s| s.verdict.kind == overall.kind).expect("the worst slot exists");
        Verdict { note: format!("slot {} {}: {}", s.label, s.verdict.kind, s.verdict.note), ..s.verdict.clone() }
    };
    let claims_uniqueness = bundle.required.is_some() || slots.iter().any(|s| s.optional && s.verdict.passes());
    let mut report = HypothesisReport {
        theorem,
        condition: inst.condition().to_string(),
        slots,
        overall,
        first_failing,
        conclusion: theorem.conclusion(),
        claims_uniqueness,
        conclusion_check: None,
        phi_report,
        note: bundle.note.into(),
    };
    if report.overall.passes() {
        report.conclusion_check = Some(validate_conclusion(&inst, &report, budgets)?);
    }
    Ok(report)
}

/// One-sided continuity in the direction R-preserving sequences approach
/// their limit.
pub fn r_continuity(inst: &ContractionInstance, relation: &Relation) -> Verdict {
    let carrier = inst.space().carrier();
    match relation {
        Relation::Geq => inst.map().one_sided_continuity(carrier, true, false),
        Relation::Leq => inst.map().one_sided_continuity(carrier, false, true),
        Relation::Universal => inst.map().one_sided_continuity(carrier, true, true),
        Relation::Pairs(_) => Verdict::holds("R-preserving sequences live on the finite support and are eventually constant"),
    }
}

fn contraction_slot(
    inst: &ContractionInstance,
    required: RequiredCondition,
    budgets: &Budgets,
    scale: Option<f64>,
) -> Result<(Verdict, Option<PhiReport>)> {
    let report = inst.check_contraction(budgets.pairs)?;
    let mut v = report.verdict;
    let Some(phi) = inst.phi() else {
        return Ok((v, None));
    };
    let mut grid = default_grid();
    grid.extend(scale);
    if required == RequiredCondition::LambdaN {
        let lr = phi.check_lambda_membership(lambda_horizon(phi, scale), budgets.quad_points)?;
        let lambda = lr.lambda_verdict().expect("a Λ check fills every Λ slot");
        if !v.is_fails() {
            v = if lambda.passes() {
                v.and(lambda)
            } else {
                Verdict::unknown(format!("contraction {}, but psi is not shown to be in Λ: {lambda}", v.kind))
            };
        }
        return Ok((v, Some(lr)));
    }
    let pr = phi.check_phi_membership(&grid, budgets.terms)?;
    let member = pr.phi_verdict();
    if !member.passes() {
        v = v.and(Verdict { note: format!("phi is not shown to be in Φ: {}", member.note), ..member });
    } else {
        v = v.and(member);
    }
    Ok((v, Some(pr)))
}

fn generic_condition(kind: BoundKind) -> String {
    let limit = kind.limit();
    let law = match kind {
        BoundKind::Banach => "k d(x,y)",
        BoundKind::Ciric => "k N_f(x,y)",
        BoundKind::Kannan => "k [d(x,fx)+d(y,fy)]",
        BoundKind::Chatterjea => "k [d(x,fy)+d(y,fx)]",
    };
    format!("d(fx,fy) <= {law} for some k in [0, {limit})")
}

fn lambda_horizon(_phi: &ComparisonFunction, scale: Option<f64>) -> f64 {
    scale.unwrap_or(1.0).max(1.0)
}

fn uniqueness_slot(inst: &ContractionInstance, relation: &Relation, u: Uniqueness) -> Result<Verdict> {
    let fixed = solver::fixed_points(inst);
    let pool = solver::default_pool(inst);
    Ok(match u {
        Uniqueness::FxDirected => relation.is_directed(inst.image(), true, &pool),
        Uniqueness::RestrictionComplete => relation.is_complete_relation(inst.image()),
        Uniqueness::FixedSetDirected => {
            if fixed.is_empty() {
                Verdict::holds("F(f) is empty, directedness is vacuous")
            } else {
                relation.is_directed(&fixed, false, &pool)
            }
        }
        Uniqueness::PathsBetweenFixed => match fixed.points() {
            None => Verdict::unknown("F(f) is a continuum; paths are not enumerated"),
            Some(points) => {
                let closure = relation.symmetric_closure();
                let max_len = closure.default_max_len();
                let mut out = Verdict::holds(format!("paths found between all {} fixed points", points.len()));
                'outer: for (i, &p) in points.iter().enumerate() {
                    for &q in &points[i + 1..] {
                        if closure.find_path(p, q, max_len)?.is_none() {
                            out = Verdict::fails(Witness::Pair { x: p, y: q }, format!("no path of length <= {max_len} joins {p} and {q}"));
                            break 'outer;
                        }
                    }
                }
                out
            }
        },
    })
}

/// Existence: `F(f)` is nonempty and Picard from `X(f, R)` reaches it.
/// Uniqueness: `F(f)` is a single point.
pub fn validate_conclusion(inst: &ContractionInstance, report: &HypothesisReport, budgets: &Budgets) -> Result<Verdict> {
    if !report.overall.passes() {
        return Err(Error::HypothesesFail(report.theorem.label().into()));
    }
    let fixed = solver::fixed_points(inst);
    if fixed.is_empty() {
        return Ok(Verdict::fails(Witness::Empty { what: "F(f)".into() }, "the hypotheses pass but f has no fixed point"));
    }
    let relation = inst.relation();
    let starts = solver::compute_x_f_r(inst, relation)?;
    let x0 = starts.witness.expect("slot (ii) passed");
    let orbit = solver::picard(inst, x0, budgets.max_iters, budgets.tol)?;
    let limit = match orbit.limit() {
        Some(l) if fixed.contains(l) => l,
        _ => {
            return Ok(Verdict::fails(
                Witness::Orbit { start: x0, points: orbit.points.iter().copied().take(16).collect() },
                format!("Picard from {x0} does not reach F(f) = {fixed}"),
            ))
        }
    };
    let mut note = format!("F(f) = {fixed}; Picard from {x0} converges to {limit}");
    if !inst.y().contains(limit) {
        note.push_str(&format!(", outside Y = {}", inst.y().carrier()));
        return Ok(Verdict::fails(Witness::Point { x: limit }, note));
    }
    if report.claims_uniqueness {
        match fixed.points() {
            Some([_]) => note.push_str(", and it is the only fixed point"),
            _ => return Ok(Verdict::fails(Witness::Point { x: limit }, format!("uniqueness claimed but F(f) = {fixed}"))),
        }
    }
    Ok(Verdict::pass(report.overall.kind == VerdictKind::Holds, note))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Applicability {
    /// The instance's condition is of the theorem's family.
    Direct,
    /// Slot (v) was rebuilt in the theorem's family from the instance.
    Rederived { note: String },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub theorem: TheoremId,
    pub applicability: Applicability,
    pub report: Option<HypothesisReport>,
}

impl ComparisonRow {
    pub fn summary(&self) -> String {
        match &self.report {
            Some(r) => r.summary(),
            None => "n/a".into(),
        }
    }

    pub fn overall(&self) -> Option<VerdictKind> {
        self.report.as_ref().map(|r| r.overall.kind)
    }
}

/// One row per requested theorem, in request order.
pub fn compare_theorems(inst: &ContractionInstance, ids: &[TheoremId], budgets: &Budgets) -> Result<Vec<ComparisonRow>> {
    if ids.is_empty() {
        return Err(Error::InvalidArgument("no theorems requested".into()));
    }
    ids.iter().map(|&id| compare_one(inst, id, budgets)).collect()
}

fn compare_one(inst: &ContractionInstance, id: TheoremId, budgets: &Budgets) -> Result<ComparisonRow> {
    let required = id.required_condition();
    let row = |applicability, report| ComparisonRow { theorem: id, applicability, report: Some(report) };
    if required.matches(inst.condition()) {
        return Ok(row(Applicability::Direct, assemble(inst, id, budgets, None)?));
    }
    if let Some(cond) = required.phi_condition() {
        let Some(phi) = inst.effective_phi() else {
            return Ok(ComparisonRow {
                theorem: id,
                applicability: Applicability::NotApplicable { reason: "no comparison function can be derived".into() },
                report: None,
            });
        };
        let note = format!("slot (v) rebuilt as {} with {phi}", cond.tag());
        let adapted = inst.with_condition(cond, Some(phi))?;
        return Ok(row(Applicability::Rederived { note }, assemble(&adapted, id, budgets, None)?));
    }
    if let Some(kind) = required.bound_kind() {
        let rel = match id.bundle().relation {
            RelationUse::Own => inst.relation().clone(),
            RelationUse::Closure => inst.relation().symmetric_closure(),
            RelationUse::Universal => Relation::Universal,
        };
        let bound = inst.with_relation(rel).infer_linear_bound(kind, budgets.pairs)?;
        let limit = kind.limit();
        if bound.value < limit {
            let note = format!("constant inferred as k = {} (sup over checked pairs)", bound.value);
            let adapted = inst.with_condition(kind.condition(bound.value), None)?;
            return Ok(row(Applicability::Rederived { note }, assemble(&adapted, id, budgets, None)?));
        }
        let (x, y) = bound.argmax.expect("a positive bound has a witness");
        let forced = Verdict::fails(
            Witness::Pair { x, y },
            format!(
                "d(fx,fy) = {} and the bound term is {}, so {} > k * {} for every k in [0, {limit})",
                bound.lhs, bound.gauge, bound.lhs, bound.gauge
            ),
        );
        let note = format!("no constant below {limit} exists (ratio {} at ({x}, {y}))", bound.value);
        let adapted = inst.with_condition(kind.condition(0.0), None)?;
        return Ok(row(Applicability::Rederived { note }, assemble(&adapted, id, budgets, Some((forced, generic_condition(kind))))?));
    }
    Ok(ComparisonRow {
        theorem: id,
        applicability: Applicability::NotApplicable { reason: format!("{} constants are not inferred", inst.condition().tag()) },
        report: None,
    })
}

/// Fixed points that a theorem's conclusion speaks about, for display.
pub fn fixed_point_set(inst: &ContractionInstance) -> PointSet {
    solver::fixed_points(inst)
}
