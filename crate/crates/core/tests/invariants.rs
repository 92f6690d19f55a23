use approx::assert_relative_eq;
use proptest::prelude::*;

use relfix::checker::{check_hypotheses, compare_theorems, r_continuity, Budgets, TheoremId};
use relfix::comparison::ComparisonFunction;
use relfix::contraction::{ConditionKind, ContractionInstance};
use relfix::document::{builtin, parse_instance, to_toml};
use relfix::properties::FiniteCase;
use relfix::{AffinePiece, Interval, IntervalUnion, MetricSpace, PointSet, Relation, SelfMap, VerdictKind, Witness};

fn interval() -> impl Strategy<Value = Interval> {
    (-8i32..8, 0i32..6, any::<bool>(), any::<bool>()).prop_map(|(lo, len, lc, hc)| {
        let (lo, hi) = (f64::from(lo), f64::from(lo + len));
        if len == 0 {
            Interval::point(lo).unwrap()
        } else {
            Interval::new(lo, hi, lc, hc).unwrap()
        }
    })
}

/// Probe points: integers, half-integers and their neighbours.
fn probes() -> Vec<f64> {
    (-20..=30).map(|i| f64::from(i) / 2.0).flat_map(|x| [x, x - 1e-9, x + 1e-9]).collect()
}

fn pairs_on(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((0..n, 0..n), 0..=3 * n).prop_map(|v| v.into_iter().map(|(a, b)| (a as f64, b as f64)).collect())
}

/// Transitive closure by Floyd-Warshall over `0..n`.
fn reachable(n: usize, edges: &[(f64, f64)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in edges {
        r[a as usize][b as usize] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
            }
        }
    }
    r
}

/// A piecewise-affine self-map of `[0, 4]` with breaks at `cuts`.
fn piecewise_map() -> impl Strategy<Value = SelfMap> {
    (proptest::sample::subsequence(vec![1.0, 2.0, 3.0], 0..=3), proptest::collection::vec((0i32..=8, 0i32..=8), 4)).prop_map(|(cuts, ends)| {
        let mut bounds = vec![0.0];
        bounds.extend(cuts);
        bounds.push(4.0);
        let pieces = bounds
            .windows(2)
            .zip(ends)
            .enumerate()
            .map(|(i, (w, (a, b)))| {
                let last = i + 2 == bounds.len();
                let dom = Interval::new(w[0], w[1], true, last).unwrap();
                let (va, vb) = (f64::from(a) / 2.0, f64::from(b) / 2.0);
                let slope = (vb - va) / (w[1] - w[0]);
                AffinePiece::new(dom, slope, va - slope * w[0]).unwrap()
            })
            .collect();
        SelfMap::piecewise(pieces).unwrap()
    })
}

fn finite_case() -> impl Strategy<Value = FiniteCase> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                proptest::sample::subsequence((0..10).collect::<Vec<i32>>(), n),
                proptest::collection::vec(0..n, n),
                proptest::collection::vec((0..n, 0..n), 0..=2 * n),
                proptest::sample::select(vec![0.0, 0.3, 0.5, 0.8]),
            )
        })
        .prop_map(|(v, images, pairs, k)| FiniteCase { values: v.into_iter().map(f64::from).collect(), images, pairs, k })
}

proptest! {
    #[test]
    fn union_membership_matches_components(ivs in proptest::collection::vec(interval(), 1..5)) {
        let u = IntervalUnion::new(ivs.clone());
        for x in probes() {
            prop_assert_eq!(u.contains(x), ivs.iter().any(|iv| iv.contains(x)), "x = {}", x);
        }
        let comps = u.components();
        for w in comps.windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
        }
    }

    #[test]
    fn subset_agrees_with_membership(a in proptest::collection::vec(interval(), 1..4), b in proptest::collection::vec(interval(), 1..4)) {
        let (a, b) = (PointSet::intervals(a), PointSet::intervals(b));
        let probe_says = probes().into_iter().all(|x| !a.contains(x) || b.contains(x));
        if a.is_subset_of(&b) {
            prop_assert!(probe_says);
        } else {
            let x = a.point_outside(&b).expect("a witness point");
            prop_assert!(a.contains(x) && !b.contains(x));
        }
    }

    #[test]
    fn matrix_metric_axioms_match_oracle(raw in proptest::collection::vec(1u8..6, 6)) {
        let pts = vec![0.0, 1.0, 2.0, 3.0];
        let mut m = vec![vec![0.0; 4]; 4];
        let mut it = raw.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let d = f64::from(it.next().unwrap());
                m[i][j] = d;
                m[j][i] = d;
            }
        }
        let triangle = (0..4).all(|i| (0..4).all(|j| (0..4).all(|k| m[i][k] <= m[i][j] + m[j][k])));
        let v = MetricSpace::with_matrix(pts.clone(), m.clone()).unwrap().verify_metric_axioms();
        prop_assert_eq!(v.passes(), triangle);
        if let Some(Witness::Triple { x, y, z }) = v.witness {
            let (i, j, k) = (x as usize, y as usize, z as usize);
            prop_assert!(m[i][k] > m[i][j] + m[j][k]);
        }
    }

    #[test]
    fn closure_and_inverse_laws(pairs in pairs_on(5)) {
        let r = Relation::pairs(pairs).unwrap();
        let s = r.symmetric_closure();
        prop_assert_eq!(r.inverse().inverse(), r.clone());
        prop_assert!(s.is_symmetric(&PointSet::finite((0..5).map(f64::from)).unwrap()).passes());
        for x in 0..5 {
            for y in 0..5 {
                let (x, y) = (f64::from(x), f64::from(y));
                prop_assert_eq!(r.sym_related(x, y), s.related(x, y));
                prop_assert_eq!(r.related(x, y), r.inverse().related(y, x));
            }
        }
    }

    #[test]
    fn paths_follow_edges_and_match_reachability(pairs in pairs_on(5), x in 0usize..5, y in 0usize..5) {
        prop_assume!(x != y);
        let r = Relation::pairs(pairs.clone()).unwrap();
        let max_len = 5;
        let found = r.find_path(x as f64, y as f64, max_len).unwrap();
        prop_assert_eq!(found.is_some(), reachable(5, &pairs)[x][y]);
        if let Some(p) = found {
            let nodes = p.nodes();
            prop_assert_eq!(nodes[0], x as f64);
            prop_assert_eq!(*nodes.last().unwrap(), y as f64);
            prop_assert!(p.len() <= max_len);
            prop_assert!(r.is_preserving(nodes));
        }
    }

    #[test]
    fn failed_predicates_replay(case in finite_case()) {
        let inst = case.instance(ConditionKind::PhiM).unwrap();
        let r = inst.relation();
        let f = inst.map();
        let v = r.is_f_closed(f, inst.space().carrier());
        if let Some(Witness::Pair { x, y }) = v.witness {
            prop_assert!(v.is_fails());
            prop_assert!(r.related(x, y));
            prop_assert!(!r.related(f.apply(x).unwrap(), f.apply(y).unwrap()));
        } else {
            prop_assert!(v.passes());
        }
        let pool: Vec<f64> = case.values.clone();
        let d = r.is_directed(inst.image(), true, &pool);
        if let Some(Witness::Pair { x, y }) = d.witness {
            prop_assert!(pool.iter().all(|&z| !(r.sym_related(x, z) && r.sym_related(y, z))));
        }
        let c = inst.check_contraction(10_000).unwrap();
        if let Some(Witness::Inequality { x, y, lhs, rhs }) = c.verdict.witness {
            let (l, rr) = inst.evaluate_pair(x, y).unwrap();
            prop_assert_eq!((l, rr), (lhs, rhs));
            prop_assert!(l > rr);
        }
    }

    #[test]
    fn banach_constant_carries_to_ciric(case in finite_case()) {
        let inst = case.instance(ConditionKind::LinearBanach { k: case.k }).unwrap();
        let budgets = Budgets::default();
        let t118 = check_hypotheses(&inst, TheoremId::T1_18, &budgets).unwrap();
        if t118.slot("(v)").unwrap().verdict.passes() {
            let ciric = inst.with_condition(ConditionKind::LinearCiric { k: case.k }, None).unwrap();
            let c31 = check_hypotheses(&ciric, TheoremId::C3_1, &budgets).unwrap();
            prop_assert!(c31.slot("(v)").unwrap().verdict.passes());
        }
    }

    #[test]
    fn universal_relation_reduces_to_metric_notions(f in piecewise_map(), lo_closed in any::<bool>()) {
        let x = MetricSpace::interval(Interval::new(0.0, 4.0, lo_closed, true).unwrap()).unwrap();
        prop_assume!(f.check_domain(x.carrier()).is_ok() || !lo_closed);
        let map = if lo_closed { f } else { return Ok(()) };
        let inst = ContractionInstance::new(x, None, Relation::Universal, map, Some(ComparisonFunction::linear(0.5).unwrap()), ConditionKind::PhiM).unwrap();
        let rep = check_hypotheses(&inst, TheoremId::T2_1, &Budgets::default()).unwrap();
        prop_assert_eq!(rep.slot("(i)").unwrap().verdict.kind, inst.y().is_complete().kind);
        let carrier = inst.space().carrier();
        prop_assert_eq!(r_continuity(&inst, &Relation::Universal).kind, inst.map().one_sided_continuity(carrier, true, true).kind);
    }

    #[test]
    fn linear_iterates_are_geometric(k in 0.0f64..0.99, t in 0.0f64..100.0, n in 0usize..30) {
        let phi = ComparisonFunction::linear(k).unwrap();
        assert_relative_eq!(phi.iterate(n, t).unwrap(), k.powi(n as i32) * t, max_relative = 1e-12, epsilon = 1e-300);
    }

    #[test]
    fn parser_never_panics(text in "[a-z_\\[\\]=\" ,0-9./()\n-]{0,200}") {
        if let Err(d) = parse_instance(&text) {
            prop_assert!(d.line >= 1 && d.column >= 1);
        }
    }

    #[test]
    fn finite_documents_round_trip(case in finite_case()) {
        let pts: Vec<String> = case.values.iter().map(|v| v.to_string()).collect();
        let table: Vec<String> = case.values.iter().zip(&case.images).map(|(x, &i)| format!("[{x}, {}]", case.values[i])).collect();
        let pairs: Vec<String> = case.pairs.iter().map(|&(i, j)| format!("[{}, {}]", case.values[i], case.values[j])).collect();
        let text = format!(
            "[space]\npoints = [{}]\n[relation]\nkind = \"pairs\"\npairs = [{}]\n[map]\ntable = [{}]\n[phi]\nkind = \"linear\"\nk = {}\n[condition]\nkind = \"phi_n\"\n",
            pts.join(", "), pairs.join(", "), table.join(", "), case.k
        );
        let p = parse_instance(&text).unwrap();
        prop_assert_eq!(&p.instance, &case.instance(ConditionKind::PhiN).unwrap());
        let again = parse_instance(&to_toml(&p.document)).unwrap();
        prop_assert_eq!(again.instance, p.instance);
    }
}

#[test]
fn corollary_with_y_equal_x_matches_theorem() {
    for id in ["4.1", "4.2", "4.3"] {
        let p = parse_instance(builtin(id).unwrap()).unwrap();
        let inst = p.instance.with_condition(ConditionKind::PhiM, p.instance.effective_phi()).unwrap();
        let full = inst.with_full_subspace();
        let t21 = check_hypotheses(&full, TheoremId::T2_1, &p.budgets).unwrap();
        let c22 = check_hypotheses(&inst, TheoremId::C2_2, &p.budgets).unwrap();
        let kinds = |r: &relfix::checker::HypothesisReport| r.slots.iter().map(|s| s.verdict.kind).collect::<Vec<_>>();
        assert_eq!(kinds(&t21), kinds(&c22), "{id}");
        assert_eq!(t21.overall.kind, c22.overall.kind, "{id}");
    }
}

#[test]
fn lambda_violation_replays() {
    let text = builtin("4.3").unwrap().replace("kind = \"phi_m\"", "kind = \"lambda_n\"").replace("kind = \"linear\"\nk = \"3/4\"", "kind = \"hyperbolic\"\nc = \"1\"");
    let p = parse_instance(&text).unwrap();
    let rep = check_hypotheses(&p.instance, TheoremId::C2_10, &p.budgets).unwrap();
    let v = &rep.slot("(v)").unwrap().verdict;
    assert_eq!(v.kind, VerdictKind::Fails, "{v}");
    let Some(Witness::Inequality { x, y, lhs, rhs }) = v.witness else { panic!("no inequality witness: {v}") };
    assert_eq!(p.instance.evaluate_pair(x, y).unwrap(), (lhs, rhs));
    assert!(lhs > rhs, "{lhs} <= {rhs}");
}

#[test]
fn mismatched_condition_is_an_error() {
    let p = parse_instance(builtin("4.3").unwrap()).unwrap();
    assert!(check_hypotheses(&p.instance, TheoremId::C3_5, &p.budgets).is_err());
    assert!(compare_theorems(&p.instance, &[], &p.budgets).is_err());
}

#[test]
fn uniqueness_conclusions_hold_on_the_corpus() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus");
    let mut texts: Vec<String> = ["4.1", "4.2", "4.3"].iter().map(|id| builtin(id).unwrap().to_string()).collect();
    for e in std::fs::read_dir(dir).unwrap() {
        texts.push(std::fs::read_to_string(e.unwrap().path()).unwrap());
    }
    for text in texts {
        let p = parse_instance(&text).unwrap();
        let fixed = relfix::solver::fixed_points(&p.instance);
        for row in compare_theorems(&p.instance, &p.theorems, &p.budgets).unwrap() {
            let Some(rep) = row.report else { continue };
            if rep.overall.kind == VerdictKind::Holds {
                assert!(!fixed.is_empty(), "{}", rep.theorem);
                if rep.claims_uniqueness {
                    assert_eq!(fixed.points().map(<[f64]>::len), Some(1), "{}", rep.theorem);
                }
            }
            if rep.overall.passes() {
                assert!(rep.conclusion_check.unwrap().passes(), "{}", rep.theorem);
            }
        }
    }
}
