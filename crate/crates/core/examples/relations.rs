//! Finite relations: closures, f-closedness, directedness and paths.

use relfix::{PointSet, Relation, SelfMap};

fn main() -> relfix::Result<()> {
    let r = Relation::pairs([(0.0, 0.0), (0.0, 1.0), (1.0, 2.0), (3.0, 2.0)])?;
    let carrier = PointSet::finite([0.0, 1.0, 2.0, 3.0])?;
    println!("R   = {r}");
    println!("R^s = {}", r.symmetric_closure());
    println!("symmetric: {}", r.is_symmetric(&carrier));

    let f = SelfMap::table([(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 1.0)])?;
    println!("f-closed:  {}", r.is_f_closed(&f, &carrier));
    println!("directed:  {}", r.is_directed(&carrier, true, &[0.0, 1.0, 2.0, 3.0]));

    for (a, b) in [(0.0, 2.0), (2.0, 0.0), (3.0, 0.0)] {
        match r.find_path(a, b, r.default_max_len())? {
            Some(p) => println!("path {a} -> {b}: {:?}", p.nodes()),
            None => println!("path {a} -> {b}: none"),
        }
    }
    Ok(())
}
