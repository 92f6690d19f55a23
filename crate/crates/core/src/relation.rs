//! Binary relations on the real line and their order-theoretic predicates.
//!
//! Relations are either intensional (`>=`, `<=`, the universal relation),
//! decided by comparison, or an explicit finite list of pairs. Relations do
//! not carry their carrier; instances check that pair lists live in it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use ordered_float::OrderedFloat;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::space::{check_finite, MetricSpace, PointSet};
use crate::verdict::{Verdict, Witness};

type Key = OrderedFloat<f64>;

/// A finite set of ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PairList {
    pairs: BTreeSet<(Key, Key)>,
}

impl PairList {
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            let x = check_finite(x).map_err(|e| Error::InvalidRelation(e.to_string()))?;
            let y = check_finite(y).map_err(|e| Error::InvalidRelation(e.to_string()))?;
            set.insert((OrderedFloat(x), OrderedFloat(y)));
        }
        Ok(PairList { pairs: set })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.pairs.contains(&(OrderedFloat(x + 0.0), OrderedFloat(y + 0.0)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs.iter().map(|(x, y)| (x.0, y.0))
    }

    /// Every point occurring in some pair, sorted.
    pub fn support(&self) -> Vec<f64> {
        let set: BTreeSet<Key> = self.pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
        set.into_iter().map(|k| k.0).collect()
    }

    pub fn inverse(&self) -> PairList {
        PairList { pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect() }
    }

    pub fn union(&self, other: &PairList) -> PairList {
        PairList { pairs: self.pairs.union(&other.pairs).copied().collect() }
    }

    pub fn successors(&self, x: f64) -> impl Iterator<Item = f64> + '_ {
        let k = OrderedFloat(x + 0.0);
        self.pairs
            .range((k, OrderedFloat(f64::NEG_INFINITY))..=(k, OrderedFloat(f64::INFINITY)))
            .map(|(_, y)| y.0)
    }
}

impl Serialize for PairList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl fmt::Display for PairList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Relation {
    /// `(x, y)` related iff `x >= y`.
    Geq,
    /// `(x, y)` related iff `x <= y`.
    Leq,
    /// Every pair is related.
    Universal,
    Pairs(PairList),
}

/// A chain `z_0, ..., z_l` whose consecutive terms are related.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Path {
    nodes: Vec<f64>,
}

impl Path {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Relation {
    pub fn pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        Ok(Relation::Pairs(PairList::new(pairs)?))
    }

    pub fn name(&self) -> String {
        match self {
            Relation::Geq => ">=".into(),
            Relation::Leq => "<=".into(),
            Relation::Universal => "universal".into(),
            Relation::Pairs(p) => format!("pair list of {} pairs", p.len()),
        }
    }

    pub fn inverse(&self) -> Relation {
        match self {
            Relation::Geq => Relation::Leq,
            Relation::Leq => Relation::Geq,
            Relation::Universal => Relation::Universal,
            Relation::Pairs(p) => Relation::Pairs(p.inverse()),
        }
    }

    /// `R ∪ R⁻¹`. The closure of either order is the universal relation.
    pub fn symmetric_closure(&self) -> Relation {
        match self {
            Relation::Geq | Relation::Leq | Relation::Universal => Relation::Universal,
            Relation::Pairs(p) => Relation::Pairs(p.union(&p.inverse())),
        }
    }

    /// Pairs with both coordinates in `subset`; intensional kinds are unchanged.
    pub fn restrict(&self, subset: &PointSet) -> Relation {
        match self {
            Relation::Pairs(p) => Relation::Pairs(PairList {
                pairs: p.pairs.iter().filter(|(x, y)| subset.contains(x.0) && subset.contains(y.0)).copied().collect(),
            }),
            other => other.clone(),
        }
    }

    pub fn related(&self, x: f64, y: f64) -> bool {
        match self {
            Relation::Geq => x >= y,
            Relation::Leq => x <= y,
            Relation::Universal => true,
            Relation::Pairs(p) => p.contains(x, y),
        }
    }

    /// A symmetric relation equals its own symmetric closure, so a failure
    /// also shows `R` is the closure of no relation.
    pub fn is_symmetric(&self, carrier: &PointSet) -> Verdict {
        let pair = match self {
            Relation::Universal => None,
            Relation::Geq | Relation::Leq => {
                let mut pts: Vec<f64> = (-2..=2).map(f64::from).filter(|&p| carrier.contains(p)).collect();
                pts.extend(carrier.sample(8));
                let lo = pts[0];
                pts.iter().copied().find(|&p| p > lo).map(|hi| if *self == Relation::Geq { (hi, lo) } else { (lo, hi) })
            }
            Relation::Pairs(p) => p.iter().find(|&(x, y)| !p.contains(y, x)),
        };
        match pair {
            Some((x, y)) => Verdict::fails(Witness::Pair { x, y }, format!("({x}, {y}) is related but ({y}, {x}) is not")),
            None => Verdict::holds(format!("{} is symmetric on the carrier", self.name())),
        }
    }

    /// `[x, y] ∈ R`: related in either direction.
    pub fn sym_related(&self, x: f64, y: f64) -> bool {
        self.related(x, y) || self.related(y, x)
    }

    pub fn support(&self) -> Option<Vec<f64>> {
        match self {
            Relation::Pairs(p) => Some(p.support()),
            _ => None,
        }
    }

    pub fn is_preserving(&self, seq: &[f64]) -> bool {
        seq.windows(2).all(|w| self.related(w[0], w[1]))
    }

    /// Whether `[x, y] ∈ R` for all `x, y` in `subset`.
    pub fn is_complete_relation(&self, subset: &PointSet) -> Verdict {
        let p = match self {
            Relation::Pairs(p) => p,
            _ => return Verdict::holds(format!("{} is total on the reals", self.name())),
        };
        match subset.points() {
            Some(points) => {
                for (i, &x) in points.iter().enumerate() {
                    for &y in &points[i..] {
                        if !self.sym_related(x, y) {
                            return Verdict::fails(Witness::Pair { x, y }, format!("neither ({x}, {y}) nor ({y}, {x}) is related"));
                        }
                    }
                }
                Verdict::holds(format!("exhaustive check of {} unordered pairs", points.len() * (points.len() + 1) / 2))
            }
            None => {
                let support = PointSet::finite(p.support()).expect("finite support");
                let x = subset.point_outside(&support).expect("an infinite set escapes a finite support");
                Verdict::fails(Witness::Pair { x, y: x }, format!("{x} lies outside the finite support, so [{x}, {x}] is unrelated"))
            }
        }
    }

    /// `(x, y) ∈ R ⇒ (fx, fy) ∈ R` over the carrier.
    pub fn is_f_closed(&self, f: &SelfMap, carrier: &PointSet) -> Verdict {
        match self {
            Relation::Universal => Verdict::holds("the universal relation is closed under every map"),
            Relation::Pairs(p) => {
                for (x, y) in p.iter() {
                    let (fx, fy) = match (f.apply(x), f.apply(y)) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => return Verdict::unknown(format!("pair ({x}, {y}) is outside the map's domain")),
                    };
                    if !p.contains(fx, fy) {
                        return Verdict::fails(Witness::Pair { x, y }, format!("({x}, {y}) is related but ({fx}, {fy}) is not"));
                    }
                }
                Verdict::holds(format!("exhaustive check of {} pairs", p.len()))
            }
            Relation::Geq | Relation::Leq => match f.monotonicity_violation(carrier) {
                None => Verdict::holds("the map is non-decreasing on the carrier (piece slopes and junction ordering)"),
                Some((u, v)) => {
                    let (x, y) = if matches!(self, Relation::Geq) { (v, u) } else { (u, v) };
                    Verdict::fails(Witness::Pair { x, y }, format!("the map reverses the order of {u} < {v}"))
                }
            },
        }
    }

    /// d-self-closedness of the relation restricted to `subspace`, decided by
    /// the argument appropriate to each kind.
    pub fn is_d_self_closed(&self, subspace: &MetricSpace) -> Verdict {
        match self {
            Relation::Pairs(p) => {
                let support = p.support();
                let inside = support.iter().filter(|&&x| subspace.contains(x)).count();
                Verdict::holds(format!(
                    "preserving sequences range over the finite support ({inside} points in the subspace); a convergent one is eventually constant at x with (x, x) related"
                ))
            }
            Relation::Geq => Verdict::holds("non-increasing convergent sequences stay above their limit"),
            Relation::Leq => Verdict::holds("non-decreasing convergent sequences stay below their limit"),
            Relation::Universal => Verdict::holds("the universal relation relates every term to the limit"),
        }
    }

    /// Whether every pair of `subset` has a common successor, searched in the
    /// relation support and `pool` for pair lists.
    pub fn is_directed(&self, subset: &PointSet, use_symmetric: bool, pool: &[f64]) -> Verdict {
        let rel = if use_symmetric { self.symmetric_closure() } else { self.clone() };
        let p = match &rel {
            Relation::Geq => return Verdict::holds("z = min(x, y) is a common successor"),
            Relation::Leq => return Verdict::holds("z = max(x, y) is a common successor"),
            Relation::Universal => return Verdict::holds("every point is a common successor under the universal relation"),
            Relation::Pairs(p) => p,
        };
        let points = match subset.points() {
            Some(points) => points,
            None => {
                let support = PointSet::finite(p.support()).expect("finite support");
                let x = subset.point_outside(&support).expect("an infinite set escapes a finite support");
                return Verdict::fails(Witness::Pair { x, y: x }, format!("{x} is outside the support and has no successor"));
            }
        };
        for (i, &x) in points.iter().enumerate() {
            for &y in &points[i..] {
                if rel.common_successor(x, y, pool).is_none() {
                    return Verdict::fails(
                        Witness::Pair { x, y },
                        format!("no z with both ({x}, z) and ({y}, z) related"),
                    );
                }
            }
        }
        Verdict::holds(format!("a common successor exists for all {} unordered pairs", points.len() * (points.len() + 1) / 2))
    }

    /// Some `z` with `(x, z)` and `(y, z)` related.
    ///
    /// Successors under a pair list lie in its support, so searching the
    /// support is exhaustive; `pool` only matters for the intensional kinds.
    pub fn common_successor(&self, x: f64, y: f64, pool: &[f64]) -> Option<f64> {
        match self {
            Relation::Geq => Some(x.min(y)),
            Relation::Leq => Some(x.max(y)),
            Relation::Universal => pool.first().copied().or(Some(x)),
            Relation::Pairs(p) => {
                let mut cands: Vec<f64> = p.successors(x).collect();
                cands.extend(pool.iter().copied());
                cands.into_iter().find(|&z| p.contains(x, z) && p.contains(y, z))
            }
        }
    }

    /// Default path length cap: `2·|support| + 1`.
    pub fn default_max_len(&self) -> usize {
        match self {
            Relation::Pairs(p) => 2 * p.support().len() + 1,
            _ => 1,
        }
    }

    /// A shortest path from `x` to `y` of length between 1 and `max_len`.
    pub fn find_path(&self, x: f64, y: f64, max_len: usize) -> Result<Option<Path>> {
        if max_len == 0 {
            return Err(Error::InvalidArgument("paths have length at least 1".into()));
        }
        let p = match self {
            Relation::Pairs(p) => p,
            _ => return Ok(self.related(x, y).then(|| Path { nodes: vec![x, y] })),
        };
        let start = OrderedFloat(x + 0.0);
        let goal = OrderedFloat(y + 0.0);
        let mut parent: HashMap<Key, Key> = HashMap::new();
        let mut queue: VecDeque<(Key, usize)> = VecDeque::new();
        queue.push_back((start, 0));
        let mut seen: BTreeSet<Key> = BTreeSet::new();
        if start != goal {
            seen.insert(start);
        }
        while let Some((node, depth)) = queue.pop_front() {
            if depth == max_len {
                continue;
            }
            for next in p.successors(node.0).map(OrderedFloat) {
                if !seen.insert(next) {
                    continue;
                }
                parent.insert(next, node);
                if next == goal {
                    let mut nodes = vec![goal.0];
                    let mut cur = goal;
                    loop {
                        let prev = parent[&cur];
                        nodes.push(prev.0);
                        if prev == start {
                            break;
                        }
                        cur = prev;
                    }
                    nodes.reverse();
                    return Ok(Some(Path { nodes }));
                }
                queue.push_back((next, depth + 1));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Pairs(p) => write!(f, "{p}"),
            other => f.write_str(&other.name()),
        }
    }
}
