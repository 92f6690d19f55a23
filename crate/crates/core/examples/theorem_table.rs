//! Every theorem checked on one instance, side by side.

use relfix::checker::{compare_theorems, Budgets, TheoremId};
use relfix::document::{builtin, parse_instance};

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "4.3".into());
    let Some(text) = builtin(&id) else {
        eprintln!("unknown example {id}");
        std::process::exit(64);
    };
    let parsed = parse_instance(text).expect("builtin instances parse");
    let rows = compare_theorems(&parsed.instance, &TheoremId::ALL, &Budgets::default()).expect("applicable theorems");
    for row in &rows {
        println!("{:6} {}", row.theorem, row.summary());
        if let Some(rep) = &row.report {
            if let Some(s) = rep.first_failing.as_deref().and_then(|l| rep.slot(l)) {
                println!("       {} {}: {}", s.label, s.description, s.verdict);
            }
        }
    }
}
