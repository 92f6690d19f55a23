use relfix::report::{golden, render_scenario, scenario, Format};

/// Set `RELFIX_BLESS=1` to rewrite the fixtures after an intended change.
#[test]
fn reports_match_golden_files() {
    for id in ["4.1", "4.2", "4.3"] {
        let s = scenario(id).unwrap();
        assert!(s.confirmed(), "{id}: {:?}", s.claims.iter().filter(|c| !c.confirmed).collect::<Vec<_>>());
        let text = render_scenario(&s, Format::Text);
        if std::env::var_os("RELFIX_BLESS").is_some() {
            let path = format!("{}/golden/example{}.txt", env!("CARGO_MANIFEST_DIR"), id.replace('.', "_"));
            std::fs::write(path, &text).unwrap();
            continue;
        }
        assert_eq!(text, golden(id).unwrap(), "{id}");
    }
}

#[test]
fn reports_are_deterministic() {
    for id in ["4.1", "4.3"] {
        let a = render_scenario(&scenario(id).unwrap(), Format::Machine);
        let b = render_scenario(&scenario(id).unwrap(), Format::Machine);
        assert_eq!(a, b);
    }
}
