//! Plain-text and JSON rendering, and the scripted reproductions of the three
//! worked examples.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::checker::{compare_theorems, Applicability, Budgets, ComparisonRow};
use crate::contraction::{BoundKind, ContractionInstance};
use crate::document::{builtin, parse_instance};
use crate::error::{Error, Result};
use crate::solver::{self, Orbit, OrbitStatus, TailBound};
use crate::verdict::{Verdict, VerdictKind};

const GOLDEN: [(&str, &str); 3] = [
    ("4.1", include_str!("../golden/example4_1.txt")),
    ("4.2", include_str!("../golden/example4_2.txt")),
    ("4.3", include_str!("../golden/example4_3.txt")),
];

/// Orbit points shown before eliding.
const ORBIT_PREFIX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "machine" => Ok(Format::Machine),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

pub fn golden(id: &str) -> Option<&'static str> {
    let id = id.strip_prefix("example").unwrap_or(id);
    GOLDEN.iter().find(|(k, _)| *k == id).map(|(_, g)| *g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub name: String,
    pub space: String,
    pub subspace_y: String,
    pub relation: String,
    pub map: String,
    pub phi: Option<String>,
    pub condition: String,
    pub image: String,
    pub start_set: String,
    pub fixed_points: String,
}

pub fn summarize(name: &str, inst: &ContractionInstance) -> Result<InstanceSummary> {
    Ok(InstanceSummary {
        name: name.into(),
        space: inst.space().carrier().to_string(),
        subspace_y: inst.y().carrier().to_string(),
        relation: inst.relation().to_string(),
        map: inst.map().to_string(),
        phi: inst.phi().map(|p| p.to_string()),
        condition: inst.condition().to_string(),
        image: inst.image().to_string(),
        start_set: solver::compute_x_f_r(inst, inst.relation())?.set.to_string(),
        fixed_points: solver::fixed_points(inst).to_string(),
    })
}

fn write_summary(out: &mut String, s: &InstanceSummary) {
    let _ = writeln!(out, "instance {}", s.name);
    let _ = writeln!(out, "  X = {}", s.space);
    let _ = writeln!(out, "  Y = {}", s.subspace_y);
    let _ = writeln!(out, "  R = {}", s.relation);
    let _ = writeln!(out, "  f = {}", s.map);
    if let Some(phi) = &s.phi {
        let _ = writeln!(out, "  {phi}");
    }
    let _ = writeln!(out, "  condition {}", s.condition);
    let _ = writeln!(out, "  fX = {}", s.image);
    let _ = writeln!(out, "  X(f, R) = {}", s.start_set);
    let _ = writeln!(out, "  F(f) = {}", s.fixed_points);
}

fn source(a: &Applicability) -> String {
    match a {
        Applicability::Direct => "as given".into(),
        Applicability::Rederived { note } => format!("rederived: {note}"),
        Applicability::NotApplicable { reason } => format!("not applicable: {reason}"),
    }
}

fn write_rows(out: &mut String, rows: &[ComparisonRow]) {
    let _ = writeln!(out, "\n{:<7} {:<16} slot (v)", "theorem", "result");
    for r in rows {
        let _ = writeln!(out, "{:<7} {:<16} {}", r.theorem.label(), r.summary(), source(&r.applicability));
    }
    for r in rows {
        let Some(rep) = &r.report else { continue };
        let _ = writeln!(out, "\n{} {}", rep.theorem, rep.summary());
        for s in &rep.slots {
            let tag = if s.optional { " (moreover)" } else { "" };
            let _ = writeln!(out, "  {:<6} {}{tag}", s.label, s.description);
            let _ = writeln!(out, "         {}", s.verdict);
        }
        if let Some(c) = &rep.conclusion_check {
            let _ = writeln!(out, "  conclusion {c}");
        }
        if !rep.note.is_empty() {
            let _ = writeln!(out, "  note: {}", rep.note);
        }
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    instance: &'a InstanceSummary,
    rows: &'a [ComparisonRow],
}

pub fn render_check(summary: &InstanceSummary, rows: &[ComparisonRow], format: Format) -> String {
    match format {
        Format::Machine => json(&CheckOutput { instance: summary, rows }),
        Format::Text => {
            let mut out = String::new();
            write_summary(&mut out, summary);
            write_rows(&mut out, rows);
            out
        }
    }
}

/// 0 when every row passes, 1 on any failure, 2 otherwise.
pub fn exit_code(rows: &[ComparisonRow]) -> i32 {
    let kinds: Vec<Option<VerdictKind>> = rows.iter().map(ComparisonRow::overall).collect();
    if kinds.contains(&Some(VerdictKind::Fails)) {
        1
    } else if kinds.iter().all(|k| k.is_some_and(|k| k <= VerdictKind::HoldsSampled)) {
        0
    } else {
        2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveRun {
    pub orbit: Orbit,
    pub fixed_point: Option<f64>,
    pub error_bound: Option<TailBound>,
    pub displacement_check: Option<Verdict>,
}

pub fn solve_runs(inst: &ContractionInstance, starts: &[f64], budgets: &Budgets) -> Result<Vec<SolveRun>> {
    starts
        .iter()
        .map(|&x0| {
            let r = solver::solve(inst, Some(x0), budgets.max_iters, budgets.tol)?;
            let displacement_check = inst.effective_phi().map(|phi| solver::check_displacements(&r.orbit, &phi));
            Ok(SolveRun { orbit: r.orbit, fixed_point: r.fixed_point, error_bound: r.error_bound, displacement_check })
        })
        .collect()
}

/// Every point of `X(f, R)`, which must be finite.
pub fn all_starts(inst: &ContractionInstance) -> Result<Vec<f64>> {
    let starts = solver::compute_x_f_r(inst, inst.relation())?.set;
    match starts.points() {
        Some(p) if !p.is_empty() => Ok(p.to_vec()),
        Some(_) => Err(Error::InvalidArgument("X(f, R) is empty".into())),
        None => Err(Error::InvalidArgument(format!("X(f, R) = {starts} is not finite; give --x0"))),
    }
}

fn write_runs(out: &mut String, runs: &[SolveRun]) {
    for r in runs {
        let o = &r.orbit;
        let shown: Vec<String> = o.points.iter().take(ORBIT_PREFIX).map(|x| x.to_string()).collect();
        let more = if o.points.len() > ORBIT_PREFIX { format!(", ... ({} points)", o.points.len()) } else { String::new() };
        let _ = writeln!(out, "\nPicard from {}", o.start);
        let _ = writeln!(out, "  orbit {}{more}", shown.join(", "));
        let status = match o.status {
            OrbitStatus::Converged { limit, iterations, in_carrier } => {
                format!("converged to {limit} after {iterations} iterations{}", if in_carrier { "" } else { ", limit outside X" })
            }
            OrbitStatus::Cycled { period } => format!("cycled with period {period}"),
            OrbitStatus::BudgetExhausted => "iteration budget exhausted".into(),
            OrbitStatus::Escaped => "left the domain of f".into(),
        };
        let _ = writeln!(out, "  {status}");
        match r.fixed_point {
            Some(p) => {
                let _ = writeln!(out, "  fixed point {p}");
            }
            None => {
                let _ = writeln!(out, "  no fixed point reached");
            }
        }
        if let Some(b) = &r.error_bound {
            let kind = if b.truncated { "truncated tail sum" } else { "geometric tail" };
            let _ = writeln!(out, "  a-priori error bound {:e} ({kind})", b.value);
        }
        if let Some(v) = &r.displacement_check {
            let _ = writeln!(out, "  displacements {v}");
        }
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    instance: &'a InstanceSummary,
    runs: &'a [SolveRun],
}

pub fn render_solve(summary: &InstanceSummary, runs: &[SolveRun], format: Format) -> String {
    match format {
        Format::Machine => json(&SolveOutput { instance: summary, runs }),
        Format::Text => {
            let mut out = String::new();
            write_summary(&mut out, summary);
            write_runs(&mut out, runs);
            out
        }
    }
}

/// A statement from the example's discussion and the check that backs it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub text: String,
    pub expected: VerdictKind,
    pub verdict: Verdict,
    pub confirmed: bool,
}

fn claim(text: &str, expect_fail: bool, verdict: Verdict) -> Claim {
    let confirmed = if expect_fail { verdict.is_fails() } else { verdict.passes() };
    let expected = if expect_fail { VerdictKind::Fails } else { VerdictKind::Holds };
    Claim { text: text.into(), expected, verdict, confirmed }
}

fn equals(what: &str, got: String, want: &str) -> Verdict {
    if got == want {
        Verdict::holds(format!("{what} = {got}"))
    } else {
        Verdict::fails(crate::Witness::Empty { what: got.clone() }, format!("{what} = {got}, expected {want}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub id: String,
    pub instance: InstanceSummary,
    pub rows: Vec<ComparisonRow>,
    pub runs: Vec<SolveRun>,
    pub claims: Vec<Claim>,
}

impl Scenario {
    pub fn confirmed(&self) -> bool {
        self.claims.iter().all(|c| c.confirmed)
    }
}

/// Hypothesis table, Picard runs and the example's own claims.
pub fn scenario(id: &str) -> Result<Scenario> {
    let key = id.strip_prefix("example").unwrap_or(id);
    let text = builtin(key).ok_or_else(|| Error::InvalidArgument(format!("unknown example {id:?}; choose 4.1, 4.2 or 4.3")))?;
    let p = parse_instance(text).map_err(|d| Error::InvalidInstance(d.to_string()))?;
    let inst = &p.instance;
    let name = p.document.name.clone().unwrap_or_else(|| format!("example{key}"));
    let summary = summarize(&name, inst)?;
    let rows = compare_theorems(inst, &p.theorems, &p.budgets)?;
    let mut starts = all_starts(inst).unwrap_or_default();
    if let Some(x0) = p.x0.filter(|x| !starts.contains(x)) {
        starts.push(x0);
    }
    let runs = solve_runs(inst, &starts, &p.budgets)?;
    let carrier = inst.space().carrier();
    let fixed = solver::fixed_points(inst).to_string();
    let mut claims = Vec::new();
    match key {
        "4.1" => {
            claims.push(claim("fX = (-1/2, 1]", false, equals("fX", inst.image().to_string(), "(-0.5, 1]")));
            claims.push(claim("Y is R-complete", false, inst.y().is_r_complete(inst.relation())));
            claims.push(claim("X is not R-complete", true, inst.space().is_r_complete(inst.relation())));
            claims.push(claim("X is not complete", true, inst.space().is_complete()));
            claims.push(claim("R is f-closed", false, inst.relation().is_f_closed(inst.map(), carrier)));
            claims.push(claim("f is R-continuous", false, inst.map().one_sided_continuity(carrier, true, false)));
            claims.push(claim("R is not symmetric", true, inst.relation().is_symmetric(carrier)));
            claims.push(claim("0 is the only fixed point", false, equals("F(f)", fixed, "{0}")));
        }
        "4.2" => {
            claims.push(claim("fX = {0, 1}", false, equals("fX", inst.image().to_string(), "{0, 1}")));
            let s = inst.relation().symmetric_closure();
            let xfs = solver::compute_x_f_r(inst, &s)?.set.to_string();
            claims.push(claim("X(f, S) = {0, 1}", false, equals("X(f, S)", xfs, "{0, 1}")));
            claims.push(claim("Y is S-complete", false, inst.y().is_r_complete(&s)));
            claims.push(claim("X is not complete", true, inst.space().is_complete()));
            claims.push(claim("f is not continuous", true, inst.map().one_sided_continuity(carrier, true, true)));
            claims.push(claim("S is f-closed", false, s.is_f_closed(inst.map(), carrier)));
            claims.push(claim("fX is S-directed", false, s.is_directed(inst.image(), false, &solver::default_pool(inst))));
            claims.push(claim("0 is the only fixed point", false, equals("F(f)", fixed, "{0}")));
        }
        "4.3" => {
            claims.push(claim("fX = {0, 3, 4}", false, equals("fX", inst.image().to_string(), "{0, 3, 4}")));
            claims.push(claim("f is not continuous", true, inst.map().one_sided_continuity(carrier, true, true)));
            claims.push(claim("R is f-closed", false, inst.relation().is_f_closed(inst.map(), carrier)));
            let bound = inst.infer_linear_bound(BoundKind::Banach, p.budgets.pairs)?;
            let banach = match bound.argmax {
                Some((x, y)) if bound.value >= 1.0 => Verdict::fails(
                    crate::Witness::Pair { x, y },
                    format!("d(f{x}, f{y}) = {} and d({x}, {y}) = {}, so the constant must be at least {}", bound.lhs, bound.gauge, bound.value),
                ),
                _ => Verdict::holds(format!("a constant {} < 1 works", bound.value)),
            };
            claims.push(claim("no k < 1 satisfies d(fx,fy) <= k d(x,y) on R", true, banach));
            claims.push(claim("fX is not R^s-directed", true, inst.relation().is_directed(inst.image(), true, &solver::default_pool(inst))));
            claims.push(claim("R restricted to fX is not complete", true, inst.relation().is_complete_relation(inst.image())));
            claims.push(claim("R is not symmetric, so it is no symmetric closure", true, inst.relation().is_symmetric(carrier)));
            claims.push(claim("0 and 4 are the fixed points", false, equals("F(f)", fixed, "{0, 4}")));
        }
        _ => unreachable!("builtin ids are 4.1, 4.2 and 4.3"),
    }
    Ok(Scenario { id: key.into(), instance: summary, rows, runs, claims })
}

pub fn render_scenario(s: &Scenario, format: Format) -> String {
    match format {
        Format::Machine => json(s),
        Format::Text => {
            let mut out = String::new();
            write_summary(&mut out, &s.instance);
            write_rows(&mut out, &s.rows);
            write_runs(&mut out, &s.runs);
            let _ = writeln!(out, "\nclaims");
            for c in &s.claims {
                let mark = if c.confirmed { "confirmed" } else { "REFUTED" };
                let _ = writeln!(out, "  {mark:<9} {}", c.text);
                let _ = writeln!(out, "            {}", c.verdict);
            }
            out
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
