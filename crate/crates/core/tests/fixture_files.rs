use gzloc::cat::{CompositionTable, FiniteCategory, SigmaSet};
use gzloc::corpus::corpus;
use gzloc::fixtures;
use gzloc::format::{parse, serialize, FormatError};

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn sigma(c: &FiniteCategory, names: &[&str]) -> SigmaSet {
    SigmaSet::from_names(c, names.iter().copied()).unwrap()
}

#[test]
fn files_match_builders() {
    let cases: Vec<(&str, FiniteCategory, Vec<&str>)> = vec![
        ("terminal.cat", fixtures::terminal(), vec![]),
        ("fixI.cat", fixtures::walking_arrow(), vec!["f"]),
        ("fixI_sigma_all.cat", fixtures::walking_arrow(), vec!["1_0", "1_1", "f"]),
        ("fixI_identities.cat", fixtures::walking_arrow(), vec!["1_0", "1_1"]),
        ("fixP.cat", fixtures::parallel_pair(), vec!["1_X", "1_Y", "1_Z", "t"]),
        ("walking_iso.cat", fixtures::walking_iso(), vec![]),
        ("z2.cat", fixtures::z2(), vec![]),
        ("idempotent.cat", fixtures::idempotent(), vec![]),
        ("swapped_pair.cat", fixtures::swapped_pair(), vec!["1_X", "1_Y", "f", "g"]),
    ];
    for (file, c, names) in cases {
        let p = parse(&read(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
        let s = sigma(&c, &names);
        assert_eq!(p.category, c, "{file}");
        assert_eq!(p.sigma, s, "{file}");
    }
}

#[test]
fn undeclared_composite_is_reported_with_its_line() {
    match parse(&read("bad_unknown.cat")) {
        Err(FormatError::UnknownIdent { line, ident }) => assert_eq!((line, ident.as_str()), (6, "q")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn serialization_round_trips_on_corpus() {
    for inst in corpus() {
        let text = serialize(&inst.category, &inst.sigma);
        let p = parse(&text).unwrap();
        assert_eq!(p.category, *inst.category, "{}", inst.name);
        assert_eq!(p.sigma, inst.sigma, "{}", inst.name);
        assert_eq!(serialize(&p.category, &p.sigma), text);
    }
}

#[test]
fn canonical_form_ignores_declaration_order() {
    let a = parse("ob Y\nob X\nmor g : X -> Y\nmor f : X -> Y\nsigma f\n").unwrap();
    let b = parse("ob X\nob Y\nmor f : X -> Y\nmor g : X -> Y\nsigma f\n").unwrap();
    assert_eq!(serialize(&a.category, &a.sigma), serialize(&b.category, &b.sigma));
    assert_eq!(a.category.mor_count(), 4);
}
