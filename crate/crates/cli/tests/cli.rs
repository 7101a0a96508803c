use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn weyl_components_of_som_raychaudhuri() {
    let o = run(&["components", &fixture("som-raychaudhuri.toml"), "--tensor", "C"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in [
        "C_1212 = -2/3*a^2*r^2",
        "C_1313 = -2/3*a^2",
        "C_1414 = 4/3*a^2",
        "C_3434 = 2/3*a^2",
    ] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn minkowski_is_flat() {
    let o = run(&["components", &fixture("minkowski.toml"), "--tensor", "R"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "R: all components zero");
}

#[test]
fn minkowski_dimension_parameter() {
    let o = run(&["components", "minkowski:n=3", "--tensor", "g"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn godel_ricci_square() {
    let o = run(&["components", "godel", "--tensor", "S2,S"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("S^2_44 = m^4"), "{out}");
    assert!(out.contains("S_44 = -m^2"), "{out}");
}

#[test]
fn derivative_labels_carry_a_comma() {
    let o = run(&["components", "godel", "--tensor", "dR"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("R_1212,1 = -m^3*exp(m*x)^2"));
}

#[test]
fn classify_matches_expectations() {
    for (metric, expect) in [
        ("som-raychaudhuri".to_string(), "som-raychaudhuri.toml"),
        ("godel".to_string(), "godel.toml"),
        (fixture("minkowski.toml"), "minkowski.toml"),
    ] {
        let o = run(&[
            "classify",
            &metric,
            "--all",
            "--expect",
            &fixture(&format!("expect/{expect}")),
        ]);
        assert!(o.status.success(), "{metric}: {}", stderr(&o));
    }
}

#[test]
fn catalog_names_agree_with_files() {
    let a = run(&["classify", "sr", "--all", "--json"]);
    let b = run(&["classify", &fixture("som-raychaudhuri.toml"), "--all", "--json"]);
    let results = |o: &Output| {
        let mut v = serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["results"].take();
        // Decomposition vectors and the profile exist only for catalog entries.
        v.as_object_mut().unwrap().remove("decompositions");
        v["roter"].as_object_mut().unwrap().remove("tau");
        v
    };
    let (ra, rb) = (results(&a), results(&b));
    assert_eq!(ra, rb);
    assert_eq!(ra["quasi_einstein"]["k"], 2);
}

#[test]
fn expectation_mismatch_exits_one() {
    let o = run(&["classify", "sr", "--all", "--expect", &fixture("expect/wrong.toml")]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("quasi_einstein.k"), "{err}");
    assert!(!err.contains("ein.level"), "{err}");
}

#[test]
fn degenerate_metric_is_an_input_error() {
    let o = run(&["classify", &fixture("degenerate.toml"), "--all"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn undeclared_symbol_is_reported() {
    let o = run(&["components", &fixture("unknown-symbol.toml"), "--tensor", "R"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`b`"), "{}", stderr(&o));
}

#[test]
fn bad_selectors_and_checks() {
    assert_eq!(run(&["components", "godel", "--tensor", "Zq"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "godel", "--checks", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "nowhere", "--all"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "godel-type", "--all"]).status.code(), Some(2));
}

#[test]
fn godel_type_with_inline_profile() {
    let o = run(&[
        "classify",
        "godel-type",
        "--param",
        "h=a*r^2",
        "--param",
        "f=r",
        "--checks",
        "quasi_einstein",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("rank(S - alpha g) = 2 with alpha = 2*a^2"));
}

#[test]
fn compare_separates_shared_and_distinct_properties() {
    let o = run(&["compare", "godel", "som-raychaudhuri"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let (sim, dis) = out.split_once("B. Dissimilarity").expect("two sections");
    assert!(sim.contains("cyclic parallel, not Codazzi"));
    assert!(sim.contains("R.R = 1 Q(S,R)"));
    assert!(dis.contains("Ein(2)") && dis.contains("Ein(3)"));
    assert!(dis.contains("generalized Roter type"));
}

#[test]
fn json_is_deterministic_for_a_seed() {
    let a = run(&["classify", "godel", "--all", "--json", "--seed", "7"]);
    let b = run(&["classify", "godel", "--all", "--json", "--seed", "0x7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn catalog_list_names_every_entry() {
    let o = run(&["catalog", "list"]);
    let out = stdout(&o);
    for n in ["minkowski", "som-raychaudhuri", "godel", "godel-type"] {
        assert!(out.contains(n));
    }
}
