//! Picard iteration with the a-priori error bound.

use relfix::solver::{check_displacements, solve, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use relfix::{AffinePiece, ComparisonFunction, ConditionKind, ContractionInstance, Interval, MetricSpace, Relation, SelfMap};

fn main() -> relfix::Result<()> {
    let dom = Interval::closed(0.0, 10.0)?;
    let f = SelfMap::piecewise(vec![AffinePiece::new(dom, 1.0 / 3.0, 1.0)?])?;
    let phi = ComparisonFunction::linear(1.0 / 3.0)?;
    let inst = ContractionInstance::new(MetricSpace::interval(dom)?, None, Relation::Universal, f, Some(phi.clone()), ConditionKind::PhiM)?;

    let run = solve(&inst, Some(10.0), DEFAULT_MAX_ITERS, DEFAULT_TOL)?;
    for (n, x) in run.orbit.points.iter().take(6).enumerate() {
        println!("x_{n} = {x}");
    }
    println!("fixed point {:?} after {:?} steps", run.fixed_point, run.orbit.iterations());
    if let Some(b) = run.error_bound {
        println!("tail bound {:e}", b.value);
    }
    println!("displacements: {}", check_displacements(&run.orbit, &phi));
    Ok(())
}
