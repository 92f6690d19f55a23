//! Parsing instance documents, with positioned diagnostics.

use relfix::document::{parse_instance, to_toml};

const DOC: &str = r#"name = "halving"
theorems = ["T2.1", "C3.5"]

[space]
intervals = ["[0, 1]"]

[relation]
kind = "leq"

[[map.pieces]]
domain = "[0, 1]"
slope = "1/2"
intercept = "0"

[phi]
kind = "linear"
k = "1/2"

[condition]
kind = "phi_m"
"#;

fn main() {
    let p = parse_instance(DOC).expect("valid document");
    println!("{} theorems, X = {}", p.theorems.len(), p.instance.space().carrier());
    print!("{}", to_toml(&p.document));

    let broken = DOC.replace("kind = \"leq\"", "kind = \"leq\"\ncolour = \"red\"");
    match parse_instance(&broken) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(d) => println!("rejected: {d}"),
    }
}
