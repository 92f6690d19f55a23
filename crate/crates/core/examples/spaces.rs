//! Interval carriers, completeness and R-completeness.

use relfix::{Interval, MetricSpace, PointSet, Relation};

fn main() -> relfix::Result<()> {
    let x = MetricSpace::interval(Interval::open(-1.0, 4.0)?)?;
    let y = x.subspace(&PointSet::intervals(vec![Interval::closed_open(-0.5, 2.0)?]))?;

    println!("X = {}", x.carrier());
    println!("  metric axioms: {}", x.verify_metric_axioms());
    println!("  complete:      {}", x.is_complete());
    println!("  >=-complete:   {}", x.is_r_complete(&Relation::Geq));
    println!("Y = {}", y.carrier());
    println!("  complete:      {}", y.is_complete());
    println!("  >=-complete:   {}", y.is_r_complete(&Relation::Geq));

    // a matrix metric that breaks the triangle inequality
    let bad = MetricSpace::with_matrix(vec![0.0, 1.0, 2.0], vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]])?;
    println!("matrix metric: {}", bad.verify_metric_axioms());
    Ok(())
}
