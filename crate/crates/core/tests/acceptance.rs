//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use relfix::checker::{check_hypotheses, compare_theorems, Budgets, ComparisonRow, TheoremId};
use relfix::comparison::{default_grid, ComparisonFunction, DEFAULT_QUAD_POINTS, DEFAULT_TERMS};
use relfix::contraction::{BoundKind, ContractionInstance};
use relfix::document::{builtin, parse_instance, ParsedInstance};
use relfix::properties::{run_properties, PropertyConfig};
use relfix::report::{golden, render_scenario, scenario, Format};
use relfix::solver::{self, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use relfix::{PointSet, VerdictKind, Witness};

const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const PROPERTY_BUDGET: Duration = Duration::from_secs(30);
const PROPERTY_CASES: u32 = 500;
/// `|x_n| <= 2 * 2^-n` is checked for `n` up to this index.
const ORBIT_HORIZON: usize = 40;
const DISPLACEMENT_SLACK: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(text: &str) -> ParsedInstance {
    parse_instance(text).expect("shipped documents parse")
}

fn rows(p: &ParsedInstance) -> Vec<ComparisonRow> {
    compare_theorems(&p.instance, &p.theorems, &p.budgets).expect("comparison runs")
}

fn slot_kind(row: &ComparisonRow, label: &str) -> Option<VerdictKind> {
    row.report.as_ref()?.slot(label).map(|s| s.verdict.kind)
}

/// A completeness failure whose witness sequence escapes through `limit`.
fn open_endpoint(row: &ComparisonRow, carrier: &PointSet, limit: f64) -> Result<(), String> {
    let v = &row.report.as_ref().ok_or("no report")?.slot("(i)").ok_or("no slot (i)")?.verdict;
    match &v.witness {
        Some(Witness::Sequence { terms, limit: l, .. }) if *l == limit && !carrier.contains(*l) && terms.iter().all(|t| carrier.contains(*t)) => Ok(()),
        other => Err(format!("{} slot (i) witness {other:?}, expected a sequence escaping to {limit}", row.theorem)),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = load(builtin("4.1").unwrap());
    let inst = &p.instance;
    let fixed = solver::fixed_points(inst);
    ensure(fixed == PointSet::finite([0.0]).unwrap(), format!("F(f) = {fixed}"))?;
    let orbit = solver::picard(inst, 1.0, DEFAULT_MAX_ITERS, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure(orbit.limit() == Some(0.0), format!("limit {:?}", orbit.limit()))?;
    ensure(orbit.points.len() > ORBIT_HORIZON, format!("orbit has only {} points", orbit.points.len()))?;
    for (n, x) in orbit.points.iter().enumerate().take(ORBIT_HORIZON + 1) {
        ensure(x.abs() <= 2.0 * 0.5f64.powi(n as i32), format!("|x_{n}| = {x}"))?;
    }
    let r = rows(&p);
    let ids: Vec<TheoremId> = r.iter().map(|r| r.theorem).collect();
    ensure(ids == [TheoremId::T2_1, TheoremId::T2_5, TheoremId::T2_7, TheoremId::T1_17, TheoremId::C2_2], format!("{ids:?}"))?;
    for row in &r[..3] {
        ensure(row.overall().is_some_and(VerdictKind::passes), format!("{} {}", row.theorem, row.summary()))?;
    }
    for row in &r[3..] {
        ensure(row.summary() == "fail(i)", format!("{} {}", row.theorem, row.summary()))?;
    }
    open_endpoint(&r[3], inst.space().carrier(), 4.0)?;
    open_endpoint(&r[4], inst.space().carrier(), -1.0)?;
    let t = start.elapsed();
    ensure(t < EXAMPLE_BUDGET, format!("took {t:?}"))?;
    Ok(format!("F(f) = {{0}}, |x_n| <= 2^(1-n) to n = {ORBIT_HORIZON}, rows pass/pass/pass/fail(i)->4/fail(i)->-1, {t:.0?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = load(builtin("4.2").unwrap());
    let inst = &p.instance;
    ensure(solver::fixed_points(inst) == PointSet::finite([0.0]).unwrap(), "F(f) != {0}")?;
    let s = inst.relation().symmetric_closure();
    let xfs = solver::compute_x_f_r(inst, &s).map_err(|e| e.to_string())?.set;
    ensure(xfs == PointSet::finite([0.0, 1.0]).unwrap(), format!("X(f, S) = {xfs}"))?;
    ensure(inst.y().carrier().to_string() == "[0, 1]", "Y != [0, 1]")?;
    let r = rows(&p);
    ensure(r[0].theorem == TheoremId::C2_8 && r[0].overall().is_some_and(VerdictKind::passes), format!("C2.8 {}", r[0].summary()))?;
    ensure(r[1].theorem == TheoremId::T1_17 && r[1].summary() == "fail(i)", format!("T1.17 {}", r[1].summary()))?;
    open_endpoint(&r[1], inst.space().carrier(), 3.0)?;
    let t = start.elapsed();
    ensure(t < EXAMPLE_BUDGET, format!("took {t:?}"))?;
    Ok(format!("F(f) = {{0}}, X(f, S) = {{0, 1}}, C2.8 pass on Y = [0, 1], T1.17 fail(i)->3, {t:.0?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let p = load(builtin("4.3").unwrap());
    let inst = &p.instance;
    ensure(solver::fixed_points(inst) == PointSet::finite([0.0, 4.0]).unwrap(), "F(f) != {0, 4}")?;
    let report = inst.check_contraction(p.budgets.pairs).map_err(|e| e.to_string())?;
    ensure(report.exhaustive && report.pairs_checked == 6, format!("{} pairs, exhaustive {}", report.pairs_checked, report.exhaustive))?;
    ensure(report.active_cases == 1, format!("{} active cases", report.active_cases))?;
    let a = &report.active[0];
    ensure((a.x, a.y, a.lhs, a.rhs) == (1.0, 2.0, 1.0, 1.5), format!("active case {a:?}"))?;
    let t21 = check_hypotheses(inst, TheoremId::T2_1, &p.budgets).map_err(|e| e.to_string())?;
    ensure(t21.overall.kind == VerdictKind::Holds, format!("T2.1 {}", t21.summary()))?;
    let r = rows(&p);
    let t118 = r.iter().find(|r| r.theorem == TheoremId::T1_18).ok_or("no T1.18 row")?;
    ensure(slot_kind(t118, "(v)") == Some(VerdictKind::Fails), "T1.18 slot (v) does not fail")?;
    let w = &t118.report.as_ref().unwrap().slot("(v)").unwrap().verdict.witness;
    ensure(*w == Some(Witness::Pair { x: 1.0, y: 2.0 }), format!("T1.18 witness {w:?}"))?;
    let bound = inst.infer_linear_bound(BoundKind::Banach, p.budgets.pairs).map_err(|e| e.to_string())?;
    ensure(bound.lhs == 1.0 && bound.gauge == 1.0 && bound.value == 1.0, format!("{bound:?}"))?;
    for k in [0.0, 0.5, 0.9, 0.999_999] {
        ensure(bound.lhs > k * bound.gauge, format!("residual fails at k = {k}"))?;
    }
    let pool = solver::default_pool(inst);
    let dir = inst.relation().is_directed(inst.image(), true, &pool);
    ensure(dir.is_fails() && dir.witness == Some(Witness::Pair { x: 0.0, y: 3.0 }), format!("directedness {dir}"))?;
    let comp = inst.relation().is_complete_relation(inst.image());
    ensure(comp.is_fails() && comp.witness == Some(Witness::Pair { x: 0.0, y: 3.0 }), format!("completeness {comp}"))?;
    let summary: Vec<String> = r.iter().map(ComparisonRow::summary).collect();
    ensure(summary == ["pass", "fail(v)", "fail(vi)", "fail(vi)'"], format!("{summary:?}"))?;
    let t = start.elapsed();
    ensure(t < EXAMPLE_BUDGET, format!("took {t:?}"))?;
    Ok(format!("F(f) = {{0, 4}}, 6 pairs with one active case 1 <= 3/2, Banach residual 1 > k at (1, 2), (0, 3) witnesses, {t:.0?}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let out = run_properties(PropertyConfig { cases: PROPERTY_CASES, ..PropertyConfig::default() }).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    if let Some(f) = out.failure {
        return Err(f);
    }
    ensure(t < PROPERTY_BUDGET, format!("took {t:?}"))?;
    for name in ["n_below_m", "orbit_step_bound", "symmetric_membership", "symmetric_closure_agrees", "condition_ordering", "existence_soundness", "uniqueness_soundness"] {
        ensure(out.counters.get(name).copied().unwrap_or(0) > 0, format!("{name} never exercised"))?;
    }
    let counts: Vec<String> = out.counters.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!("{PROPERTY_CASES} cases, seed {}, zero violations ({}), {t:.0?}", out.seed, counts.join(", ")))
}

fn criterion_5() -> Outcome {
    let grid = default_grid();
    for k in [0.0, 0.5, 0.75, 0.99] {
        let r = ComparisonFunction::linear(k).unwrap().check_phi_membership(&grid, DEFAULT_TERMS).map_err(|e| e.to_string())?;
        for (name, v) in [("phi1", &r.phi1), ("phi2", &r.phi2), ("phi(t) < t", &r.below_identity)] {
            ensure(v.kind == VerdictKind::Holds, format!("Linear({k}) {name}: {v}"))?;
        }
    }
    let id = ComparisonFunction::table(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
    let r = id.check_phi_membership(&grid, DEFAULT_TERMS).map_err(|e| e.to_string())?;
    ensure(r.below_identity.is_fails() && r.below_identity.witness.is_some(), format!("identity table phi(t) < t: {}", r.below_identity))?;
    let harmonic = ComparisonFunction::rational(1.0).unwrap().check_phi_membership(&grid, DEFAULT_TERMS).map_err(|e| e.to_string())?;
    ensure(harmonic.phi2.is_fails(), format!("t/(1+t) phi2: {}", harmonic.phi2))?;
    let psi = ComparisonFunction::hyperbolic(2.0).unwrap();
    let r = psi.check_lambda_membership(1.0, DEFAULT_QUAD_POINTS).map_err(|e| e.to_string())?;
    for (name, v) in [("lambda1", &r.lambda1), ("lambda2", &r.lambda2), ("lambda3", &r.lambda3), ("Λ implies Φ", &r.lambda_implies_phi)] {
        let v = v.as_ref().ok_or(format!("{name} missing"))?;
        ensure(v.passes(), format!("t/(2+t) {name}: {v}"))?;
    }
    Ok("Linear k in {0, 0.5, 0.75, 0.99} exact, identity table fails phi(t) < t, t/(1+t) fails phi2, t/(2+t) passes lambda1-3 and Λ implies Φ".into())
}

fn corpus() -> Vec<(String, String)> {
    let mut docs: Vec<(String, String)> = ["4.1", "4.2", "4.3"].iter().map(|id| (format!("example{id}"), builtin(id).unwrap().to_string())).collect();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        docs.push((p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()));
    }
    docs
}

fn displacement_ok(inst: &ContractionInstance, phi: &ComparisonFunction, x0: f64, budgets: &Budgets) -> Result<usize, String> {
    let orbit = solver::picard(inst, x0, budgets.max_iters, budgets.tol).map_err(|e| e.to_string())?;
    let mut bound = *orbit.displacements.first().unwrap_or(&0.0);
    for (n, &d) in orbit.displacements.iter().enumerate() {
        ensure(d <= bound + DISPLACEMENT_SLACK, format!("from {x0}: d_{n} = {d} > phi^{n}(d0) = {bound}"))?;
        bound = phi.evaluate(bound).map_err(|e| e.to_string())?;
    }
    Ok(orbit.displacements.len())
}

fn criterion_6() -> Outcome {
    let mut instances = 0;
    let mut steps = 0;
    for (name, text) in corpus() {
        let p = load(&text);
        let r = rows(&p);
        let passing: Vec<&ComparisonRow> = r.iter().filter(|r| r.overall().is_some_and(VerdictKind::passes)).collect();
        if passing.is_empty() {
            continue;
        }
        instances += 1;
        let phi = p.instance.effective_phi().ok_or(format!("{name}: no comparison function"))?;
        let mut starts: Vec<f64> = match solver::compute_x_f_r(&p.instance, p.instance.relation()).map_err(|e| e.to_string())? {
            s if s.set.is_finite() => s.set.points().unwrap().to_vec(),
            s => s.witness.into_iter().collect(),
        };
        starts.extend(p.x0);
        for x0 in starts {
            steps += displacement_ok(&p.instance, &phi, x0, &p.budgets).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    ensure(instances >= 5, format!("only {instances} passing instances"))?;
    Ok(format!("{instances} passing instances, {steps} displacements within phi^n(d0) + {DISPLACEMENT_SLACK:e}"))
}

fn criterion_7() -> Outcome {
    for id in ["4.1", "4.2", "4.3"] {
        let s = scenario(id).map_err(|e| e.to_string())?;
        ensure(s.confirmed(), format!("example {id}: a claim is refuted"))?;
        ensure(render_scenario(&s, Format::Text) == golden(id).unwrap(), format!("example {id}: report differs from its golden file"))?;
    }
    Ok("no tables or large-scale runs to reproduce; every example-level claim is confirmed and the three golden reports match".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 Example 4.1 reproduction", criterion_1),
        ("2 Example 4.2 reproduction", criterion_2),
        ("3 Example 4.3 reproduction", criterion_3),
        ("4 property suite", criterion_4),
        ("5 comparison-function suite", criterion_5),
        ("6 displacement bound", criterion_6),
        ("7 scale note", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
