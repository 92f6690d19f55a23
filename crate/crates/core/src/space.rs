//! Carriers, metrics and completeness.
//!
//! A carrier is either a finite set of reals or a finite union of real
//! intervals with tracked endpoint openness. Membership is decided exactly on
//! the stored values; no tolerance is involved.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::verdict::{Verdict, Witness};

/// Number of terms recorded in an escaping-sequence witness.
const WITNESS_TERMS: usize = 8;

/// Maps `-0.0` to `0.0` so that equal reals have one representation.
pub(crate) fn canonical(x: f64) -> f64 {
    x + 0.0
}

pub(crate) fn check_finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(canonical(x))
    } else {
        Err(Error::NonFinitePoint(x))
    }
}

/// A real interval; infinite endpoints are always open.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval("NaN endpoint".into()));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval(format!("endpoints {lo}, {hi} leave the real line")));
        }
        if (lo.is_infinite() && lo_closed) || (hi.is_infinite() && hi_closed) {
            return Err(Error::InvalidInterval("an infinite endpoint cannot be closed".into()));
        }
        if lo > hi {
            return Err(Error::InvalidInterval(format!("lower endpoint {lo} exceeds upper endpoint {hi}")));
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Err(Error::InvalidInterval(format!("interval at {lo} is empty")));
        }
        Ok(Interval { lo: canonical(lo), hi: canonical(hi), lo_closed, hi_closed })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, false, false)
    }

    pub fn closed_open(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, true, false)
    }

    pub fn open_closed(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi, false, true)
    }

    pub fn point(x: f64) -> Result<Self> {
        let x = check_finite(x)?;
        Interval::new(x, x, true, true)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo))
            && (x < self.hi || (self.hi_closed && x == self.hi))
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo)? {
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi)? {
            Ordering::Less => (self.hi, self.hi_closed),
            Ordering::Greater => (other.hi, other.hi_closed),
            Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    /// A point strictly inside the interval (the point itself when degenerate).
    pub fn interior_point(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => self.lo + (self.hi - self.lo) / 2.0,
            (true, false) => self.lo + 1.0,
            (false, true) => self.hi - 1.0,
            (false, false) => 0.0,
        }
    }

    /// `n` stratified points in the interval: cell midpoints plus closed endpoints.
    pub fn stratified(&self, n: usize) -> Vec<f64> {
        if self.is_degenerate() {
            return vec![self.lo];
        }
        let (a, b) = self.finite_window();
        let mut out = Vec::with_capacity(n + 2);
        if self.lo_closed {
            out.push(self.lo);
        }
        let n = n.max(1);
        for i in 0..n {
            let x = a + (b - a) * (i as f64 + 0.5) / n as f64;
            if self.contains(x) {
                out.push(x);
            }
        }
        if self.hi_closed {
            out.push(self.hi);
        }
        out
    }

    /// Finite bounds used for sampling unbounded intervals.
    fn finite_window(&self) -> (f64, f64) {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo + 10.0),
            (false, true) => (self.hi - 10.0, self.hi),
            (false, false) => (-10.0, 10.0),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{}}}", self.lo);
        }
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

fn lower_order(a: &Interval, b: &Interval) -> Ordering {
    a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed))
}

/// A normalized union of intervals: sorted, pairwise disjoint, non-adjacent.
#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct IntervalUnion {
    components: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(mut components: Vec<Interval>) -> Self {
        components.sort_by(lower_order);
        let mut merged: Vec<Interval> = Vec::with_capacity(components.len());
        for next in components {
            match merged.last_mut() {
                Some(cur)
                    if next.lo < cur.hi
                        || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed)) =>
                {
                    if next.hi > cur.hi {
                        cur.hi = next.hi;
                        cur.hi_closed = next.hi_closed;
                    } else if next.hi == cur.hi {
                        cur.hi_closed |= next.hi_closed;
                    }
                }
                _ => merged.push(next),
            }
        }
        IntervalUnion { components: merged }
    }

    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    /// True when every component is a single point.
    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Interval::is_degenerate)
    }

    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.components.iter().any(|c| iv.is_subset_of(c))
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.components.iter().all(|c| other.contains_interval(c))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.components.iter().chain(&other.components).copied().collect())
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalUnion {
        IntervalUnion::new(self.components.iter().filter_map(|c| c.intersect(iv)).collect())
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A subset of the real line: finitely many points or a union of intervals.
///
/// Unions whose components are all single points are stored as `Finite`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PointSet {
    Finite(Vec<f64>),
    Intervals(IntervalUnion),
}

impl PointSet {
    pub fn finite<I: IntoIterator<Item = f64>>(points: I) -> Result<Self> {
        let mut pts = points.into_iter().map(check_finite).collect::<Result<Vec<_>>>()?;
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Ok(PointSet::Finite(pts))
    }

    pub fn intervals(components: Vec<Interval>) -> Self {
        PointSet::from_union(IntervalUnion::new(components))
    }

    pub fn from_union(union: IntervalUnion) -> Self {
        if union.is_finite() {
            PointSet::Finite(union.components.iter().map(|c| c.lo).collect())
        } else {
            PointSet::Intervals(union)
        }
    }

    pub fn empty() -> Self {
        PointSet::Finite(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            PointSet::Finite(p) => p.is_empty(),
            PointSet::Intervals(u) => u.is_empty(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PointSet::Finite(_))
    }

    /// The points of a finite set, in increasing order.
    pub fn points(&self) -> Option<&[f64]> {
        match self {
            PointSet::Finite(p) => Some(p),
            PointSet::Intervals(_) => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            PointSet::Finite(p) => p.binary_search_by(|q| q.total_cmp(&canonical(x))).is_ok(),
            PointSet::Intervals(u) => u.contains(x),
        }
    }

    pub fn to_union(&self) -> IntervalUnion {
        match self {
            PointSet::Finite(p) => {
                IntervalUnion::new(p.iter().map(|&x| Interval { lo: x, hi: x, lo_closed: true, hi_closed: true }).collect())
            }
            PointSet::Intervals(u) => u.clone(),
        }
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        match self {
            PointSet::Finite(p) => p.iter().all(|&x| other.contains(x)),
            PointSet::Intervals(u) => match other {
                PointSet::Finite(_) => false,
                PointSet::Intervals(v) => u.is_subset_of(v),
            },
        }
    }

    /// Some point of `self` that is not in `other`, if one exists.
    pub fn point_outside(&self, other: &PointSet) -> Option<f64> {
        match self {
            PointSet::Finite(p) => p.iter().copied().find(|&x| !other.contains(x)),
            PointSet::Intervals(u) => {
                for c in u.components() {
                    for x in c.stratified(16) {
                        if !other.contains(x) {
                            return Some(x);
                        }
                    }
                    if other.to_union().contains_interval(c) {
                        continue;
                    }
                    // The interval leaves `other` somewhere between the probes.
                    for x in c.stratified(4096) {
                        if !other.contains(x) {
                            return Some(x);
                        }
                    }
                }
                None
            }
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        match (self, other) {
            (PointSet::Finite(a), PointSet::Finite(b)) => {
                PointSet::finite(a.iter().chain(b).copied()).expect("finite points stay finite")
            }
            _ => PointSet::from_union(self.to_union().union(&other.to_union())),
        }
    }

    /// The smallest element, when the infimum is attained.
    pub fn min_point(&self) -> Option<f64> {
        match self {
            PointSet::Finite(p) => p.first().copied(),
            PointSet::Intervals(u) => {
                let c = u.components().first()?;
                c.lo_closed.then_some(c.lo)
            }
        }
    }

    /// A deterministic element: the attained minimum, or an interior point of
    /// the first component.
    pub fn representative(&self) -> Option<f64> {
        self.min_point().or_else(|| match self {
            PointSet::Intervals(u) => u.components().first().map(Interval::interior_point),
            PointSet::Finite(_) => None,
        })
    }

    /// Endpoints of every component that belong to the set.
    pub fn closed_endpoints(&self) -> Vec<f64> {
        match self {
            PointSet::Finite(p) => p.clone(),
            PointSet::Intervals(u) => {
                let mut out = Vec::new();
                for c in u.components() {
                    if c.lo_closed {
                        out.push(c.lo);
                    }
                    if c.hi_closed && c.hi != c.lo {
                        out.push(c.hi);
                    }
                }
                out
            }
        }
    }

    /// Every point of a finite set, or a stratified sample of roughly `n`
    /// points spread over the components in proportion to their length.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        match self {
            PointSet::Finite(p) => p.clone(),
            PointSet::Intervals(u) => {
                let lengths: Vec<f64> = u
                    .components()
                    .iter()
                    .map(|c| {
                        let (a, b) = c.finite_window();
                        b - a
                    })
                    .collect();
                let total: f64 = lengths.iter().sum();
                let mut out = Vec::new();
                for (c, len) in u.components().iter().zip(&lengths) {
                    let share = if total > 0.0 { (n as f64 * len / total).ceil() as usize } else { 1 };
                    out.extend(c.stratified(share.max(1)));
                }
                out.sort_by(f64::total_cmp);
                out.dedup();
                out
            }
        }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSet::Finite(p) => {
                f.write_str("{")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            PointSet::Intervals(u) => write!(f, "{u}"),
        }
    }
}

/// The distance function of a space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Metric {
    /// `d(x, y) = |x - y|`.
    Usual,
    /// Explicit distances; rows follow the sorted carrier points.
    Matrix(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSpace {
    carrier: PointSet,
    metric: Metric,
}

impl MetricSpace {
    pub fn usual(carrier: PointSet) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::InvalidSpace("the carrier is empty".into()));
        }
        Ok(MetricSpace { carrier, metric: Metric::Usual })
    }

    pub fn interval(iv: Interval) -> Result<Self> {
        MetricSpace::usual(PointSet::intervals(vec![iv]))
    }

    /// A finite space with explicit distances. `rows[i][j]` is the distance
    /// between `points[i]` and `points[j]`.
    pub fn with_matrix(points: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidSpace("the carrier is empty".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedMatrix(format!("expected a {n}x{n} matrix")));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::MalformedMatrix(format!("entry ({i}, {j}) = {v} is not a nonnegative real")));
                }
                if v != rows[j][i] {
                    return Err(Error::MalformedMatrix(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        let pts = points.iter().map(|&x| check_finite(x)).collect::<Result<Vec<_>>>()?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| pts[a].total_cmp(&pts[b]));
        if order.windows(2).any(|w| pts[w[0]] == pts[w[1]]) {
            return Err(Error::InvalidSpace("duplicate carrier points".into()));
        }
        let sorted: Vec<f64> = order.iter().map(|&i| pts[i]).collect();
        let matrix = order.iter().map(|&i| order.iter().map(|&j| rows[i][j]).collect()).collect();
        Ok(MetricSpace { carrier: PointSet::Finite(sorted), metric: Metric::Matrix(matrix) })
    }

    pub fn carrier(&self) -> &PointSet {
        &self.carrier
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn contains(&self, x: f64) -> bool {
        self.carrier.contains(x)
    }

    fn index_of(&self, x: f64) -> Option<usize> {
        self.carrier
            .points()?
            .binary_search_by(|q| q.total_cmp(&canonical(x)))
            .ok()
    }

    pub fn distance(&self, x: f64, y: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::OutsideCarrier(x));
        }
        if !self.contains(y) {
            return Err(Error::OutsideCarrier(y));
        }
        Ok(self.distance_unchecked(x, y))
    }

    /// Distance for points already known to lie in the carrier.
    pub(crate) fn distance_unchecked(&self, x: f64, y: f64) -> f64 {
        match &self.metric {
            Metric::Usual => (x - y).abs(),
            Metric::Matrix(m) => {
                let i = self.index_of(x).expect("point in carrier");
                let j = self.index_of(y).expect("point in carrier");
                m[i][j]
            }
        }
    }

    /// The same metric restricted to `subset`, which must lie in the carrier.
    pub fn subspace(&self, subset: &PointSet) -> Result<MetricSpace> {
        if !subset.is_subset_of(&self.carrier) {
            let x = subset.point_outside(&self.carrier).unwrap_or(f64::NAN);
            return Err(Error::InvalidSpace(format!("subspace is not contained in the carrier (point {x})")));
        }
        match &self.metric {
            Metric::Usual => MetricSpace::usual(subset.clone()),
            Metric::Matrix(_) => {
                let pts = subset.points().expect("a subset of a finite carrier is finite").to_vec();
                let rows = pts
                    .iter()
                    .map(|&x| pts.iter().map(|&y| self.distance_unchecked(x, y)).collect())
                    .collect();
                MetricSpace::with_matrix(pts, rows)
            }
        }
    }

    /// Identity of indiscernibles and the triangle inequality, exhaustively on
    /// matrix metrics.
    pub fn verify_metric_axioms(&self) -> Verdict {
        let m = match &self.metric {
            Metric::Usual => return Verdict::holds("absolute difference is a metric on any subset of the reals"),
            Metric::Matrix(m) => m,
        };
        let pts = self.carrier.points().expect("matrix metrics live on finite carriers");
        let n = pts.len();
        for i in 0..n {
            if m[i][i] != 0.0 {
                return Verdict::fails(Witness::Point { x: pts[i] }, format!("d(x, x) = {} is not zero", m[i][i]));
            }
            for j in 0..n {
                if i != j && m[i][j] <= 0.0 {
                    return Verdict::fails(
                        Witness::Pair { x: pts[i], y: pts[j] },
                        "distinct points at distance zero",
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if m[i][k] > m[i][j] + m[j][k] {
                        return Verdict::fails(
                            Witness::Triple { x: pts[i], y: pts[j], z: pts[k] },
                            format!("d(x, z) = {} exceeds d(x, y) + d(y, z) = {}", m[i][k], m[i][j] + m[j][k]),
                        );
                    }
                }
            }
        }
        Verdict::holds(format!("exhaustive check of {} triples", n * n * n))
    }

    /// Metric completeness. Finite spaces are complete; an interval union is
    /// complete iff every finite endpoint is closed.
    pub fn is_complete(&self) -> Verdict {
        let u = match &self.carrier {
            PointSet::Finite(p) => {
                return Verdict::holds(format!(
                    "finite carrier ({} points): Cauchy sequences are eventually constant",
                    p.len()
                ))
            }
            PointSet::Intervals(u) => u,
        };
        for c in u.components() {
            if c.hi.is_finite() && !c.hi_closed {
                return Verdict::fails(upward_sequence(c), format!("component {c} is open at {}", c.hi));
            }
            if c.lo.is_finite() && !c.lo_closed {
                return Verdict::fails(downward_sequence(c), format!("component {c} is open at {}", c.lo));
            }
        }
        Verdict::holds("every component is closed at its finite endpoints")
    }

    /// Completeness with respect to `relation`-preserving Cauchy sequences.
    pub fn is_r_complete(&self, relation: &Relation) -> Verdict {
        match relation {
            Relation::Universal => self.is_complete(),
            Relation::Pairs(pairs) => Verdict::holds(format!(
                "relation-preserving sequences range over the finite support ({} points); Cauchy implies eventually constant",
                pairs.support().len()
            )),
            Relation::Geq | Relation::Leq => {
                let u = match &self.carrier {
                    PointSet::Finite(_) => return Verdict::holds("finite carrier is complete"),
                    PointSet::Intervals(u) => u,
                };
                let geq = matches!(relation, Relation::Geq);
                for c in u.components() {
                    if geq && c.lo.is_finite() && !c.lo_closed {
                        return Verdict::fails(
                            downward_sequence(c),
                            format!("non-increasing sequence in {c} converges to the missing endpoint {}", c.lo),
                        );
                    }
                    if !geq && c.hi.is_finite() && !c.hi_closed {
                        return Verdict::fails(
                            upward_sequence(c),
                            format!("non-decreasing sequence in {c} converges to the missing endpoint {}", c.hi),
                        );
                    }
                }
                let side = if geq { "left" } else { "right" };
                Verdict::holds(format!(
                    "monotone Cauchy sequences converge to a component {side} endpoint, all of which belong to the carrier"
                ))
            }
        }
    }
}

/// `hi - w / 2^n`, increasing to the open upper endpoint of `c`.
fn upward_sequence(c: &Interval) -> Witness {
    let start = if c.lo.is_finite() { c.lo + (c.hi - c.lo) / 2.0 } else { c.hi - 1.0 };
    let w = c.hi - start;
    let terms = (0..WITNESS_TERMS).map(|n| c.hi - w / 2f64.powi(n as i32)).collect();
    Witness::Sequence { terms, limit: c.hi, description: format!("{} - {}/2^n", c.hi, w) }
}

/// `lo + w / 2^n`, decreasing to the open lower endpoint of `c`.
fn downward_sequence(c: &Interval) -> Witness {
    let start = if c.hi.is_finite() { c.lo + (c.hi - c.lo) / 2.0 } else { c.lo + 1.0 };
    let w = start - c.lo;
    let terms = (0..WITNESS_TERMS).map(|n| c.lo + w / 2f64.powi(n as i32)).collect();
    Witness::Sequence { terms, limit: c.lo, description: format!("{} + {}/2^n", c.lo, w) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::PairList;
    use crate::verdict::VerdictKind;

    fn usual(ivs: Vec<Interval>) -> MetricSpace {
        MetricSpace::usual(PointSet::intervals(ivs)).unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(2.0, 1.0, true, true).is_err());
        assert!(Interval::new(1.0, 1.0, true, false).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 1.0, true, true).is_err());
        assert!(Interval::new(f64::NAN, 1.0, true, true).is_err());
        assert!(Interval::point(3.0).unwrap().is_degenerate());
    }

    #[test]
    fn membership_is_exact_on_endpoints() {
        let x = usual(vec![Interval::open(-1.0, 4.0).unwrap()]);
        assert!(!x.contains(4.0));
        assert!(!x.contains(-1.0));
        assert!(x.contains(3.999_999_999));
        let y = usual(vec![Interval::closed_open(-0.5, 2.0).unwrap()]);
        assert!(y.contains(-0.5));
        assert!(!y.contains(2.0));
        let f = MetricSpace::usual(PointSet::finite([0.0, 1.0, 2.0]).unwrap()).unwrap();
        assert!(!f.contains(1.5));
        assert!(f.contains(-0.0));
    }

    #[test]
    fn normalization_merges_overlaps_and_adjacency() {
        let u = IntervalUnion::new(vec![
            Interval::closed(2.0, 3.0).unwrap(),
            Interval::closed_open(0.0, 1.0).unwrap(),
            Interval::closed(1.0, 1.5).unwrap(),
            Interval::open(2.5, 4.0).unwrap(),
        ]);
        assert_eq!(u.components().len(), 2);
        assert_eq!(u.components()[0], Interval::closed(0.0, 1.5).unwrap());
        assert_eq!(u.components()[1], Interval::closed_open(2.0, 4.0).unwrap());
        // A missing single point keeps two components apart.
        let gap = IntervalUnion::new(vec![Interval::open(0.0, 1.0).unwrap(), Interval::open(1.0, 2.0).unwrap()]);
        assert_eq!(gap.components().len(), 2);
        assert_eq!(IntervalUnion::new(u.components().to_vec()), u);
    }

    #[test]
    fn degenerate_unions_become_finite() {
        let s = PointSet::intervals(vec![Interval::point(1.0).unwrap(), Interval::point(0.0).unwrap()]);
        assert_eq!(s, PointSet::Finite(vec![0.0, 1.0]));
    }

    #[test]
    fn distances() {
        let x = usual(vec![Interval::closed(0.0, 4.0).unwrap()]);
        assert_eq!(x.distance(1.0, 3.0).unwrap(), 2.0);
        assert_eq!(x.distance(2.5, 2.5).unwrap(), 0.0);
        assert_eq!(x.distance(3.0, 4.0).unwrap(), 1.0);
        assert_eq!(x.distance(5.0, 1.0), Err(Error::OutsideCarrier(5.0)));
    }

    #[test]
    fn metric_axioms() {
        let f = MetricSpace::usual(PointSet::finite([0.0, 1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(f.verify_metric_axioms().kind, VerdictKind::Holds);
        // a = 0, b = 1, c = 2 with d(a, c) = 5, d(a, b) = d(b, c) = 1.
        let bad = MetricSpace::with_matrix(
            vec![0.0, 1.0, 2.0],
            vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]],
        )
        .unwrap();
        let v = bad.verify_metric_axioms();
        assert_eq!(v.kind, VerdictKind::Fails);
        assert_eq!(v.witness, Some(Witness::Triple { x: 0.0, y: 1.0, z: 2.0 }));
        let x = usual(vec![Interval::open(-1.0, 4.0).unwrap()]);
        assert_eq!(x.verify_metric_axioms().kind, VerdictKind::Holds);
    }

    #[test]
    fn malformed_matrices_are_construction_errors() {
        assert!(matches!(
            MetricSpace::with_matrix(vec![0.0, 1.0], vec![vec![0.0, 1.0]]),
            Err(Error::MalformedMatrix(_))
        ));
        assert!(matches!(
            MetricSpace::with_matrix(vec![0.0, 1.0], vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(Error::MalformedMatrix(_))
        ));
    }

    #[test]
    fn matrix_rows_follow_sorted_points() {
        let s = MetricSpace::with_matrix(
            vec![2.0, 0.0, 1.0],
            vec![vec![0.0, 3.0, 1.0], vec![3.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]],
        )
        .unwrap();
        assert_eq!(s.distance(2.0, 0.0).unwrap(), 3.0);
        assert_eq!(s.distance(0.0, 1.0).unwrap(), 2.0);
        assert_eq!(s.distance(1.0, 2.0).unwrap(), 1.0);
    }

    fn limit_of(v: &Verdict) -> f64 {
        match &v.witness {
            Some(Witness::Sequence { limit, .. }) => *limit,
            other => panic!("expected a sequence witness, got {other:?}"),
        }
    }

    #[test]
    fn completeness() {
        let x = usual(vec![Interval::open(-1.0, 4.0).unwrap()]);
        let v = x.is_complete();
        assert_eq!(v.kind, VerdictKind::Fails);
        assert_eq!(limit_of(&v), 4.0);
        let x2 = usual(vec![Interval::closed_open(0.0, 3.0).unwrap()]);
        assert_eq!(limit_of(&x2.is_complete()), 3.0);
        let f = MetricSpace::usual(PointSet::finite([0.0, 1.0, 2.0, 3.0, 4.0]).unwrap()).unwrap();
        assert_eq!(f.is_complete().kind, VerdictKind::Holds);
        let ray = usual(vec![Interval::new(0.0, f64::INFINITY, true, false).unwrap()]);
        assert_eq!(ray.is_complete().kind, VerdictKind::Holds);
    }

    #[test]
    fn relation_completeness() {
        let y = usual(vec![Interval::closed_open(-0.5, 2.0).unwrap()]);
        assert_eq!(y.is_r_complete(&Relation::Geq).kind, VerdictKind::Holds);
        assert_eq!(y.is_r_complete(&Relation::Leq).kind, VerdictKind::Fails);
        let x = usual(vec![Interval::open(-1.0, 4.0).unwrap()]);
        let v = x.is_r_complete(&Relation::Geq);
        assert_eq!(v.kind, VerdictKind::Fails);
        assert_eq!(limit_of(&v), -1.0);
        let s = PairList::new([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, 2.0), (2.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        let unit = usual(vec![Interval::closed(0.0, 1.0).unwrap()]);
        assert_eq!(unit.is_r_complete(&Relation::Pairs(s)).kind, VerdictKind::Holds);
        assert_eq!(x.is_r_complete(&Relation::Universal), x.is_complete());
    }

    #[test]
    fn escaping_witnesses_replay() {
        for x in [
            usual(vec![Interval::open(-1.0, 4.0).unwrap()]),
            usual(vec![Interval::closed_open(0.0, 3.0).unwrap(), Interval::open(5.0, 9.0).unwrap()]),
        ] {
            for rel in [Relation::Geq, Relation::Leq, Relation::Universal] {
                let v = x.is_r_complete(&rel);
                if let Some(Witness::Sequence { terms, limit, .. }) = v.witness {
                    assert!(terms.iter().all(|&t| x.contains(t)));
                    assert!(!x.contains(limit));
                    assert!(rel.is_preserving(&terms));
                    assert!((terms[terms.len() - 1] - limit).abs() < (terms[0] - limit).abs());
                }
            }
        }
    }
}
