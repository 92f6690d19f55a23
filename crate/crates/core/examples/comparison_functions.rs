//! Membership checks for comparison functions.

use relfix::comparison::default_grid;
use relfix::ComparisonFunction;

fn main() -> relfix::Result<()> {
    let grid = default_grid();
    for phi in [ComparisonFunction::linear(0.75)?, ComparisonFunction::rational(1.0)?, ComparisonFunction::hyperbolic(2.0)?] {
        let r = phi.check_phi_membership(&grid, 10_000)?;
        println!("{phi}");
        println!("  phi1 {}", r.phi1);
        println!("  phi2 {}", r.phi2);
        println!("  phi(t) < t {}", r.below_identity);
        println!("  phi^5(1) = {}", phi.iterate(5, 1.0)?);
    }

    let psi = ComparisonFunction::hyperbolic(2.0)?;
    let l = psi.check_lambda_membership(10.0, 2_000)?;
    println!("{psi} in Lambda: {}", l.lambda_verdict().expect("filled by the Lambda check"));
    Ok(())
}
