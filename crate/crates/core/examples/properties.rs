//! The seeded property suite, once clean and once with a planted bug.

use relfix::properties::{run_properties, Mutant, PropertyConfig, DEFAULT_SEED};

fn main() -> relfix::Result<()> {
    let clean = run_properties(PropertyConfig { seed: DEFAULT_SEED, cases: 200, mutant: None })?;
    print!("{}", clean.render());
    let broken = run_properties(PropertyConfig { seed: DEFAULT_SEED, cases: 200, mutant: Some(Mutant::NfDropsTerm) })?;
    print!("{}", broken.render());
    Ok(())
}
