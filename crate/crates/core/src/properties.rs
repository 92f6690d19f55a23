//! Seeded randomized checks over small finite instances.
//!
//! Each case is a finite subset of the integers with the usual metric, a
//! table map, a pair-list relation and a linear comparison function. The
//! functionals are recomputed from the raw case data, independently of the
//! library, and every cross-module invariant is asserted.

use std::cell::RefCell;
use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use serde::Serialize;

use crate::checker::{check_hypotheses, Budgets, TheoremId};
use crate::comparison::ComparisonFunction;
use crate::contraction::{ConditionKind, ContractionInstance};
use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::relation::Relation;
use crate::solver;
use crate::space::{MetricSpace, PointSet};
use crate::verdict::VerdictKind;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CASES: u32 = 500;

/// A deliberate defect substituted for a library routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutant {
    /// `N_f` without its `½[d(x,fy) + d(y,fx)]` term.
    NfDropsTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyConfig {
    pub seed: u64,
    pub cases: u32,
    pub mutant: Option<Mutant>,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        PropertyConfig { seed: DEFAULT_SEED, cases: DEFAULT_CASES, mutant: None }
    }
}

/// Points are `values`; `f(values[i]) = values[images[i]]`; `pairs` index
/// into `values`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCase {
    pub values: Vec<f64>,
    pub images: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
    pub k: f64,
}

impl FiniteCase {
    fn f(&self, x: f64) -> f64 {
        let i = self.values.iter().position(|&v| v == x).expect("x is a case point");
        self.values[self.images[i]]
    }

    pub fn instance(&self, condition: ConditionKind) -> Result<ContractionInstance> {
        let space = MetricSpace::usual(PointSet::finite(self.values.iter().copied())?)?;
        let map = SelfMap::table(self.values.iter().zip(&self.images).map(|(&x, &i)| (x, self.values[i])))?;
        let relation = Relation::pairs(self.pairs.iter().map(|&(i, j)| (self.values[i], self.values[j])))?;
        let phi = condition.needs_phi().then(|| ComparisonFunction::linear(self.k)).transpose()?;
        ContractionInstance::new(space, None, relation, map, phi, condition)
    }
}

fn case_strategy() -> impl Strategy<Value = FiniteCase> {
    (2usize..=6)
        .prop_flat_map(|n| {
            (
                proptest::sample::subsequence((0..12).collect::<Vec<i32>>(), n),
                proptest::collection::vec(0..n, n),
                proptest::collection::vec((0..n, 0..n), 0..=2 * n),
                proptest::sample::select(vec![0.0, 0.25, 0.5, 0.75, 0.9]),
            )
        })
        .prop_map(|(values, images, pairs, k)| FiniteCase { values: values.into_iter().map(f64::from).collect(), images, pairs, k })
}

fn d(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// `M_f` straight from the case data.
fn oracle_m(c: &FiniteCase, x: f64, y: f64) -> f64 {
    let (fx, fy) = (c.f(x), c.f(y));
    d(x, y).max(d(x, fx)).max(d(y, fy)).max((d(x, fy) + d(y, fx)) / 2.0)
}

/// `N_f` straight from the case data.
fn oracle_n(c: &FiniteCase, x: f64, y: f64) -> f64 {
    let (fx, fy) = (c.f(x), c.f(y));
    d(x, y).max((d(x, fx) + d(y, fy)) / 2.0).max((d(x, fy) + d(y, fx)) / 2.0)
}

fn n_under_test(inst: &ContractionInstance, mutant: Option<Mutant>, x: f64, y: f64) -> Result<f64> {
    match mutant {
        None => inst.n_f(x, y),
        Some(Mutant::NfDropsTerm) => {
            let t = inst.terms(x, y)?;
            Ok(t.d_xy.max((t.d_xfx + t.d_yfy) / 2.0))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub seed: u64,
    pub cases: u32,
    /// How often each property was exercised with a non-vacuous premise.
    pub counters: BTreeMap<&'static str, usize>,
    pub failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn render(&self) -> String {
        let mut out = format!("properties: seed {}, {} cases\n", self.seed, self.cases);
        for (name, n) in &self.counters {
            out.push_str(&format!("  {name:<28} {n}\n"));
        }
        match &self.failure {
            None => out.push_str("no violations\n"),
            Some(f) => out.push_str(&format!("VIOLATION (replay with --seed {})\n{f}\n", self.seed)),
        }
        out
    }
}

fn rng_for(seed: u64) -> TestRng {
    let mut bytes = [0u8; 32];
    for (i, chunk) in bytes.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&seed.wrapping_add(i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).to_le_bytes());
    }
    TestRng::from_seed(RngAlgorithm::ChaCha, &bytes)
}

pub fn run_properties(cfg: PropertyConfig) -> Result<PropertyOutcome> {
    if cfg.cases == 0 {
        return Err(Error::InvalidArgument("cases must be at least 1".into()));
    }
    let config = Config { cases: cfg.cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, rng_for(cfg.seed));
    let counters = RefCell::new(BTreeMap::new());
    let result = runner.run(&case_strategy(), |case| check_case(&case, cfg.mutant, &counters));
    let failure = match result {
        Ok(()) => None,
        Err(TestError::Fail(reason, case)) => Some(format!("{reason}\nshrunken case: {case:?}")),
        Err(TestError::Abort(reason)) => Some(format!("aborted: {reason}")),
    };
    Ok(PropertyOutcome { seed: cfg.seed, cases: cfg.cases, counters: counters.into_inner(), failure })
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn lib(e: Error) -> TestCaseError {
    fail(format!("library error: {e}"))
}

fn check_case(c: &FiniteCase, mutant: Option<Mutant>, counters: &RefCell<BTreeMap<&'static str, usize>>) -> std::result::Result<(), TestCaseError> {
    let bump = |name: &'static str| *counters.borrow_mut().entry(name).or_insert(0) += 1;
    let inst = c.instance(ConditionKind::PhiM).map_err(lib)?;
    let r = inst.relation().clone();
    let s = r.symmetric_closure();

    for &x in &c.values {
        for &y in &c.values {
            let m = inst.m_f(x, y).map_err(lib)?;
            let n = n_under_test(&inst, mutant, x, y).map_err(lib)?;
            if m != oracle_m(c, x, y) || n != oracle_n(c, x, y) {
                return Err(fail(format!(
                    "functional oracle disagrees at ({x}, {y}): M_f {m} vs {}, N_f {n} vs {}",
                    oracle_m(c, x, y),
                    oracle_n(c, x, y)
                )));
            }
            if n > m {
                return Err(fail(format!("N_f > M_f at ({x}, {y}): {n} > {m}")));
            }
            if r.sym_related(x, y) != s.related(x, y) {
                return Err(fail(format!("[x, y] in R and (x, y) in R^s disagree at ({x}, {y})")));
            }
        }
        let (fx, ffx) = (c.f(x), c.f(c.f(x)));
        let lhs = inst.m_f(x, fx).map_err(lib)?;
        if lhs > d(x, fx).max(d(fx, ffx)) {
            return Err(fail(format!("M_f(x, fx) exceeds max(d(x,fx), d(fx,f2x)) at x = {x}")));
        }
    }
    bump("functional_oracle");
    bump("n_below_m");
    bump("orbit_step_bound");
    bump("symmetric_membership");

    let budget = 10_000;
    let on_r = inst.check_contraction_under(&r, budget).map_err(lib)?.verdict;
    let on_s = inst.check_contraction_under(&s, budget).map_err(lib)?.verdict;
    if on_r.kind != on_s.kind {
        return Err(fail(format!("contraction over R is {} but over R^s is {}", on_r.kind, on_s.kind)));
    }
    bump("symmetric_closure_agrees");

    let k = c.k;
    let graded = |cond: ConditionKind| -> std::result::Result<VerdictKind, TestCaseError> {
        let i = inst.with_condition(cond, cond.needs_phi().then(|| ComparisonFunction::linear(k).unwrap())).map_err(lib)?;
        Ok(i.check_contraction(budget).map_err(lib)?.verdict.kind)
    };
    let banach = graded(ConditionKind::LinearBanach { k })?;
    let ciric = graded(ConditionKind::LinearCiric { k })?;
    let phim = if banach.passes() || ciric.passes() { Some(graded(ConditionKind::PhiM)?) } else { None };
    if banach.passes() && !ciric.passes() {
        return Err(fail(format!("Banach({k}) passes but Ciric({k}) is {ciric}")));
    }
    if ciric.passes() && !phim.is_some_and(VerdictKind::passes) {
        return Err(fail(format!("Ciric({k}) passes but the M_f condition with phi(t) = {k} t does not")));
    }
    if banach.passes() {
        bump("condition_ordering");
    }

    let budgets = Budgets::default();
    let t21 = check_hypotheses(&inst, TheoremId::T2_1, &budgets).map_err(lib)?;
    let fixed = solver::fixed_points(&inst);
    if t21.overall.kind == VerdictKind::Holds {
        if fixed.is_empty() {
            return Err(fail("T2.1 hypotheses hold but F(f) is empty".into()));
        }
        if !t21.conclusion_check.as_ref().is_some_and(|v| v.passes()) {
            return Err(fail(format!("T2.1 conclusion not validated: {:?}", t21.conclusion_check)));
        }
        let x0 = solver::compute_x_f_r(&inst, &r).map_err(lib)?.witness.expect("(ii) holds");
        let orbit = solver::picard(&inst, x0, 1000, 1e-12).map_err(lib)?;
        let v = solver::check_displacements(&orbit, inst.phi().expect("phi_m carries phi"));
        if !v.passes() {
            return Err(fail(format!("displacement bound: {v}")));
        }
        bump("existence_soundness");
        bump("displacement_bound");
    }

    let n_inst = inst.with_condition(ConditionKind::PhiN, inst.phi().cloned()).map_err(lib)?;
    for id in [TheoremId::T2_5, TheoremId::T2_7] {
        let rep = check_hypotheses(&n_inst, id, &budgets).map_err(lib)?;
        if rep.overall.kind == VerdictKind::Holds {
            if fixed.points().map(<[f64]>::len) != Some(1) {
                return Err(fail(format!("{id} hypotheses hold but F(f) = {fixed}")));
            }
            bump("uniqueness_soundness");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = PropertyConfig { cases: 20, ..PropertyConfig::default() };
        assert_eq!(run_properties(cfg).unwrap(), run_properties(cfg).unwrap());
        assert!(run_properties(PropertyConfig { cases: 0, ..cfg }).is_err());
    }

    #[test]
    fn mutant_is_caught() {
        let out = run_properties(PropertyConfig { cases: 200, mutant: Some(Mutant::NfDropsTerm), ..PropertyConfig::default() }).unwrap();
        let f = out.failure.expect("the mutant must be detected");
        assert!(f.contains("N_f"), "{f}");
    }
}
