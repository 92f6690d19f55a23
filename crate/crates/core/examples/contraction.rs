//! Checking a contractive condition over the related pairs.

use relfix::{ComparisonFunction, ConditionKind, ContractionInstance, Interval, MetricSpace, Relation, SelfMap};

fn main() -> relfix::Result<()> {
    let space = MetricSpace::interval(Interval::closed(0.0, 1.0)?)?;
    let f = SelfMap::step(vec![(Interval::closed_open(0.0, 0.5)?, 0.25), (Interval::closed(0.5, 1.0)?, 0.2)])?;
    let kannan = ContractionInstance::new(space, None, Relation::Universal, f, None, ConditionKind::Kannan { k: 1.0 / 3.0 })?;

    let report = kannan.check_contraction(10_000)?;
    println!("{}: {} ({} pairs)", kannan.condition(), report.verdict, report.pairs_checked);

    // the same map is no Banach contraction: the jump at 1/2 breaks it
    let banach = kannan.with_condition(ConditionKind::LinearBanach { k: 0.9 }, None)?;
    let report = banach.check_contraction(10_000)?;
    println!("{}: {}", banach.condition(), report.verdict);

    let phi_m = kannan.with_condition(ConditionKind::PhiM, Some(ComparisonFunction::linear(0.5)?))?;
    println!("{}: {}", phi_m.condition(), phi_m.check_contraction(10_000)?.verdict);
    Ok(())
}
