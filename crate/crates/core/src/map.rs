//! Piecewise-affine self-maps and finite point tables.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{canonical, check_finite, Interval, IntervalUnion, PointSet};
use crate::verdict::{Verdict, Witness, EPS_CMP};

const ROOT_ULPS: usize = 4;

/// `x ↦ slope·x + intercept` on `domain`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AffinePiece {
    domain: Interval,
    slope: f64,
    intercept: f64,
}

impl AffinePiece {
    pub fn new(domain: Interval, slope: f64, intercept: f64) -> Result<Self> {
        if !slope.is_finite() || !intercept.is_finite() {
            return Err(Error::InvalidMap(format!("affine law {slope}·x + {intercept} is not finite")));
        }
        Ok(AffinePiece { domain, slope: canonical(slope), intercept: canonical(intercept) })
    }

    pub fn constant(domain: Interval, value: f64) -> Result<Self> {
        AffinePiece::new(domain, 0.0, value)
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.slope == 0.0 {
            self.intercept
        } else {
            canonical(self.slope * x + self.intercept)
        }
    }

    /// Exact image of the domain, endpoint openness included.
    pub fn image(&self) -> Interval {
        let d = &self.domain;
        if self.slope == 0.0 || d.is_degenerate() {
            return Interval::point(self.eval(d.lo())).expect("finite value");
        }
        let a = self.slope * d.lo() + self.intercept;
        let b = self.slope * d.hi() + self.intercept;
        let iv = if self.slope > 0.0 {
            Interval::new(a, b, d.lo_closed(), d.hi_closed())
        } else {
            Interval::new(b, a, d.hi_closed(), d.lo_closed())
        };
        iv.expect("affine image of a valid interval is valid")
    }

    /// Solutions of `x = slope·x + intercept` inside the domain.
    pub fn fixed_points(&self) -> PointSet {
        if self.slope == 1.0 {
            if self.intercept == 0.0 {
                PointSet::intervals(vec![self.domain])
            } else {
                PointSet::empty()
            }
        } else {
            match self.nearest_root(canonical(self.intercept / (1.0 - self.slope))) {
                Some(x) if self.domain.contains(x) => PointSet::Finite(vec![x]),
                _ => PointSet::empty(),
            }
        }
    }

    /// The float near `guess` with the smallest residual `|f(x) - x|`, if that
    /// residual is within a few ulps. Ties go to the value with the shortest
    /// mantissa, so `1/(1 - 1/3)` lands on 1.5.
    fn nearest_root(&self, guess: f64) -> Option<f64> {
        let mut candidates = vec![guess];
        let (mut up, mut down) = (guess, guess);
        for _ in 0..ROOT_ULPS {
            up = up.next_up();
            down = down.next_down();
            candidates.extend([up, down]);
        }
        let residual = |x: f64| (self.eval(x) - x).abs();
        let best = candidates
            .into_iter()
            .map(canonical)
            .min_by(|&a, &b| residual(a).total_cmp(&residual(b)).then(b.to_bits().trailing_zeros().cmp(&a.to_bits().trailing_zeros())))?;
        let slack = ROOT_ULPS as f64 * f64::EPSILON * best.abs().max(1.0);
        (residual(best) <= slack).then_some(best)
    }

    /// Solutions of `x >= f(x)` (or `x <= f(x)` when `above` is false).
    pub fn solve_order(&self, above: bool) -> PointSet {
        // (1 - slope)·x >= intercept, or <= when !above
        let lead = 1.0 - self.slope;
        let whole = || PointSet::intervals(vec![self.domain]);
        if lead == 0.0 {
            let ok = if above { 0.0 >= self.intercept } else { 0.0 <= self.intercept };
            return if ok { whole() } else { PointSet::empty() };
        }
        let root = canonical(self.intercept / lead);
        let upward = (lead > 0.0) == above;
        let half = if upward {
            Interval::new(root, f64::INFINITY, true, false)
        } else {
            Interval::new(f64::NEG_INFINITY, root, false, true)
        }
        .expect("finite root");
        match self.domain.intersect(&half) {
            Some(iv) => PointSet::intervals(vec![iv]),
            None => PointSet::empty(),
        }
    }
}

impl fmt::Display for AffinePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope == 0.0 {
            write!(f, "{} on {}", self.intercept, self.domain)
        } else if self.intercept == 0.0 {
            write!(f, "{}·x on {}", self.slope, self.domain)
        } else {
            write!(f, "{}·x + {} on {}", self.slope, self.intercept, self.domain)
        }
    }
}

/// A self-map of a carrier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SelfMap {
    /// Affine pieces on pairwise disjoint domains, sorted left to right.
    Piecewise(Vec<AffinePiece>),
    /// Explicit `x ↦ f(x)` entries for finite carriers, sorted by `x`.
    Table(Vec<(f64, f64)>),
}

impl SelfMap {
    pub fn piecewise(mut pieces: Vec<AffinePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidMap("no pieces".into()));
        }
        pieces.sort_by(|a, b| {
            a.domain
                .lo()
                .total_cmp(&b.domain.lo())
                .then(b.domain.lo_closed().cmp(&a.domain.lo_closed()))
        });
        for w in pieces.windows(2) {
            if w[0].domain.intersect(&w[1].domain).is_some() {
                return Err(Error::InvalidMap(format!("piece domains {} and {} overlap", w[0].domain, w[1].domain)));
            }
        }
        Ok(SelfMap::Piecewise(pieces))
    }

    pub fn table<I: IntoIterator<Item = (f64, f64)>>(entries: I) -> Result<Self> {
        let mut entries = entries
            .into_iter()
            .map(|(x, y)| Ok((check_finite(x)?, check_finite(y)?)))
            .collect::<Result<Vec<_>>>()?;
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMap("a point is mapped twice".into()));
        }
        Ok(SelfMap::Table(entries))
    }

    /// Convenience for the identity-free constant-on-pieces maps of the examples.
    pub fn step(steps: Vec<(Interval, f64)>) -> Result<Self> {
        SelfMap::piecewise(steps.into_iter().map(|(d, v)| AffinePiece::constant(d, v)).collect::<Result<_>>()?)
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        match self {
            SelfMap::Piecewise(p) => p,
            SelfMap::Table(_) => &[],
        }
    }

    /// The set on which the map is defined.
    pub fn domain(&self) -> PointSet {
        match self {
            SelfMap::Piecewise(p) => PointSet::intervals(p.iter().map(|p| p.domain).collect()),
            SelfMap::Table(t) => PointSet::Finite(t.iter().map(|e| e.0).collect()),
        }
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        match self {
            SelfMap::Piecewise(pieces) => pieces
                .iter()
                .find(|p| p.domain.contains(x))
                .map(|p| p.eval(x))
                .ok_or(Error::OutsideCarrier(x)),
            SelfMap::Table(t) => t
                .binary_search_by(|e| e.0.total_cmp(&canonical(x)))
                .map(|i| t[i].1)
                .map_err(|_| Error::OutsideCarrier(x)),
        }
    }

    /// Checks that the map is defined on exactly `carrier` (on finite
    /// carriers: at every carrier point).
    pub fn check_domain(&self, carrier: &PointSet) -> Result<()> {
        match carrier {
            PointSet::Finite(points) => {
                for &x in points {
                    self.apply(x).map_err(|_| Error::InvalidMap(format!("map is undefined at carrier point {x}")))?;
                }
                Ok(())
            }
            PointSet::Intervals(u) => {
                if matches!(self, SelfMap::Table(_)) {
                    return Err(Error::InvalidMap("point tables need a finite carrier".into()));
                }
                let dom = self.domain().to_union();
                if &dom != u {
                    return Err(Error::InvalidMap(format!("piece domains cover {dom}, the carrier is {u}")));
                }
                Ok(())
            }
        }
    }

    /// The image `f(carrier)`, exact for affine pieces.
    pub fn image(&self, carrier: &PointSet) -> Result<PointSet> {
        match carrier {
            PointSet::Finite(points) => PointSet::finite(points.iter().map(|&x| self.apply(x)).collect::<Result<Vec<_>>>()?),
            PointSet::Intervals(_) => {
                Ok(PointSet::from_union(IntervalUnion::new(self.pieces().iter().map(AffinePiece::image).collect())))
            }
        }
    }

    /// Finite piece endpoints, where piecewise maps may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .pieces()
            .iter()
            .flat_map(|p| [p.domain.lo(), p.domain.hi()])
            .filter(|x| x.is_finite())
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Fixed points of the map on `carrier`, exact per piece.
    pub fn fixed_points(&self, carrier: &PointSet) -> PointSet {
        match carrier {
            PointSet::Finite(points) => {
                PointSet::Finite(points.iter().copied().filter(|&x| self.apply(x) == Ok(x)).collect())
            }
            PointSet::Intervals(_) => self
                .pieces()
                .iter()
                .map(AffinePiece::fixed_points)
                .fold(PointSet::empty(), |acc, s| acc.union(&s)),
        }
    }

    /// A pair `u < v` in `carrier` with `f(u) > f(v)`, if the map is not
    /// non-decreasing.
    pub fn monotonicity_violation(&self, carrier: &PointSet) -> Option<(f64, f64)> {
        if let PointSet::Finite(points) = carrier {
            let values: Vec<f64> = points.iter().map(|&x| self.apply(x).unwrap_or(f64::NAN)).collect();
            return (0..points.len().saturating_sub(1))
                .find(|&i| values[i] > values[i + 1])
                .map(|i| (points[i], points[i + 1]));
        }
        let pieces = self.pieces();
        for p in pieces {
            if p.slope < 0.0 && !p.domain.is_degenerate() {
                let s = p.domain.stratified(2);
                return Some((s[0], s[s.len() - 1]));
            }
        }
        for w in pieces.windows(2) {
            let (left, right) = (&w[0], &w[1]);
            let sup = left.image().hi();
            let inf = right.image().lo();
            if sup > inf {
                return junction_witness(left, right, sup - inf);
            }
        }
        None
    }

    /// Continuity at every junction of adjacent pieces, from the right
    /// (`right = true`), the left (`left = true`) or both.
    pub fn one_sided_continuity(&self, carrier: &PointSet, right: bool, left: bool) -> Verdict {
        if carrier.is_finite() {
            return Verdict::holds("maps on finite carriers are continuous");
        }
        let side = match (right, left) {
            (true, true) => "continuous",
            (true, false) => "right-continuous",
            _ => "left-continuous",
        };
        for w in self.pieces().windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let j = a.domain.hi();
            if j != b.domain.lo() || !(a.domain.hi_closed() || b.domain.lo_closed()) {
                continue;
            }
            let owned_by_left = a.domain.hi_closed();
            let limit_from_left = a.slope * j + a.intercept;
            let limit_from_right = b.slope * j + b.intercept;
            let value = if owned_by_left { limit_from_left } else { limit_from_right };
            let other = if owned_by_left { limit_from_right } else { limit_from_left };
            // Only the side that approaches from outside the owning piece matters.
            let checked = if owned_by_left { right } else { left };
            if checked && (value - other).abs() > EPS_CMP * value.abs().max(1.0) {
                return Verdict::fails(
                    Witness::Point { x: j },
                    format!("f({j}) = {value} but the one-sided limit is {other}"),
                );
            }
        }
        Verdict::holds(format!("every piece junction is {side} by exact comparison of affine laws"))
    }
}

/// Points `u` in `left` near its supremum and `v` in `right` near its
/// infimum with `f(u) > f(v)`.
fn junction_witness(left: &AffinePiece, right: &AffinePiece, gap: f64) -> Option<(f64, f64)> {
    let near_hi = |p: &AffinePiece, delta: f64| {
        let d = p.domain;
        if d.hi_closed() {
            d.hi()
        } else {
            let w = if d.lo().is_finite() { (d.hi() - d.lo()) / 2.0 } else { 1.0 };
            d.hi() - w.min(delta)
        }
    };
    let near_lo = |p: &AffinePiece, delta: f64| {
        let d = p.domain;
        if d.lo_closed() {
            d.lo()
        } else {
            let w = if d.hi().is_finite() { (d.hi() - d.lo()) / 2.0 } else { 1.0 };
            d.lo() + w.min(delta)
        }
    };
    let step = |p: &AffinePiece| if p.slope > 0.0 { gap / (4.0 * p.slope) } else { f64::INFINITY };
    let (mut du, mut dv) = (step(left), step(right));
    for _ in 0..64 {
        let (u, v) = (near_hi(left, du), near_lo(right, dv));
        if left.domain.contains(u) && right.domain.contains(v) && left.eval(u) > right.eval(v) {
            return Some((u, v));
        }
        du /= 2.0;
        dv /= 2.0;
    }
    None
}

impl fmt::Display for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfMap::Piecewise(p) => {
                for (i, piece) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{piece}")?;
                }
                Ok(())
            }
            SelfMap::Table(t) => {
                for (i, (x, y)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}->{y}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::VerdictKind;

    fn example_4_1() -> SelfMap {
        SelfMap::piecewise(vec![
            AffinePiece::new(Interval::open_closed(-1.0, 2.0).unwrap(), 0.5, 0.0).unwrap(),
            AffinePiece::constant(Interval::open(2.0, 4.0).unwrap(), 1.0).unwrap(),
        ])
        .unwrap()
    }

    fn example_4_3() -> SelfMap {
        SelfMap::step(vec![
            (Interval::closed_open(0.0, 1.0).unwrap(), 0.0),
            (Interval::closed_open(1.0, 2.0).unwrap(), 3.0),
            (Interval::closed(2.0, 4.0).unwrap(), 4.0),
        ])
        .unwrap()
    }

    #[test]
    fn apply_dispatches_on_exact_endpoints() {
        let f = example_4_1();
        assert_eq!(f.apply(2.0).unwrap(), 1.0);
        assert_eq!(f.apply(3.0).unwrap(), 1.0);
        assert_eq!(f.apply(-0.5).unwrap(), -0.25);
        assert_eq!(f.apply(4.0), Err(Error::OutsideCarrier(4.0)));
        let g = example_4_3();
        assert_eq!(g.apply(1.0).unwrap(), 3.0);
        assert_eq!(g.apply(0.999).unwrap(), 0.0);
        assert_eq!(g.apply(2.0).unwrap(), 4.0);
    }

    #[test]
    fn images() {
        let x = PointSet::intervals(vec![Interval::open(-1.0, 4.0).unwrap()]);
        let fx = example_4_1().image(&x).unwrap();
        assert_eq!(fx, PointSet::intervals(vec![Interval::open_closed(-0.5, 1.0).unwrap()]));
        let x3 = PointSet::intervals(vec![Interval::closed(0.0, 4.0).unwrap()]);
        assert_eq!(example_4_3().image(&x3).unwrap(), PointSet::Finite(vec![0.0, 3.0, 4.0]));
        let neg = AffinePiece::new(Interval::closed_open(0.0, 1.0).unwrap(), -2.0, 1.0).unwrap();
        assert_eq!(neg.image(), Interval::open_closed(-1.0, 1.0).unwrap());
    }

    #[test]
    fn overlapping_pieces_are_rejected() {
        let r = SelfMap::step(vec![(Interval::closed(0.0, 1.0).unwrap(), 0.0), (Interval::closed(1.0, 2.0).unwrap(), 1.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn domain_must_partition_the_carrier() {
        let x = PointSet::intervals(vec![Interval::open(-1.0, 4.0).unwrap()]);
        assert!(example_4_1().check_domain(&x).is_ok());
        let wider = PointSet::intervals(vec![Interval::closed(-1.0, 4.0).unwrap()]);
        assert!(example_4_1().check_domain(&wider).is_err());
    }

    #[test]
    fn fixed_points_per_piece() {
        let x = PointSet::intervals(vec![Interval::open(-1.0, 4.0).unwrap()]);
        assert_eq!(example_4_1().fixed_points(&x), PointSet::Finite(vec![0.0]));
        let x3 = PointSet::intervals(vec![Interval::closed(0.0, 4.0).unwrap()]);
        assert_eq!(example_4_3().fixed_points(&x3), PointSet::Finite(vec![0.0, 4.0]));
        let id = SelfMap::piecewise(vec![AffinePiece::new(Interval::closed(0.0, 1.0).unwrap(), 1.0, 0.0).unwrap()]).unwrap();
        let unit = PointSet::intervals(vec![Interval::closed(0.0, 1.0).unwrap()]);
        assert_eq!(id.fixed_points(&unit), unit);
    }

    #[test]
    fn order_solutions() {
        let f = example_4_1();
        let sets: Vec<PointSet> = f.pieces().iter().map(|p| p.solve_order(true)).collect();
        assert_eq!(sets[0], PointSet::intervals(vec![Interval::closed(0.0, 2.0).unwrap()]));
        assert_eq!(sets[1], PointSet::intervals(vec![Interval::open(2.0, 4.0).unwrap()]));
    }

    #[test]
    fn monotonicity() {
        let x = PointSet::intervals(vec![Interval::open(-1.0, 4.0).unwrap()]);
        assert_eq!(example_4_1().monotonicity_violation(&x), None);
        let neg = SelfMap::piecewise(vec![AffinePiece::new(Interval::closed(0.0, 1.0).unwrap(), -1.0, 0.0).unwrap()]).unwrap();
        let unit = PointSet::intervals(vec![Interval::closed(0.0, 1.0).unwrap()]);
        assert_eq!(neg.monotonicity_violation(&unit), Some((0.0, 1.0)));
        let drop = SelfMap::piecewise(vec![
            AffinePiece::new(Interval::closed_open(0.0, 1.0).unwrap(), 1.0, 0.0).unwrap(),
            AffinePiece::new(Interval::open_closed(1.0, 2.0).unwrap(), 1.0, -0.5).unwrap(),
        ])
        .unwrap();
        let dom = drop.domain();
        let (u, v) = drop.monotonicity_violation(&dom).unwrap();
        assert!(u < v && drop.apply(u).unwrap() > drop.apply(v).unwrap());
    }

    #[test]
    fn continuity_at_junctions() {
        let x = PointSet::intervals(vec![Interval::open(-1.0, 4.0).unwrap()]);
        let f = example_4_1();
        assert_eq!(f.one_sided_continuity(&x, true, false).kind, VerdictKind::Holds);
        assert_eq!(f.one_sided_continuity(&x, true, true).kind, VerdictKind::Holds);
        let g = SelfMap::step(vec![(Interval::closed(0.0, 1.0).unwrap(), 0.0), (Interval::open(1.0, 3.0).unwrap(), 1.0)]).unwrap();
        let x2 = g.domain();
        let v = g.one_sided_continuity(&x2, true, false);
        assert_eq!(v.kind, VerdictKind::Fails);
        assert_eq!(v.witness, Some(Witness::Point { x: 1.0 }));
        // Approaching 1 from the left stays on the closed piece.
        assert_eq!(g.one_sided_continuity(&x2, false, true).kind, VerdictKind::Holds);
    }
}
