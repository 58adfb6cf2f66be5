use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn ifg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifg")).args(args).output().expect("spawn ifg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = ifg(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    ifg(args).status.code().unwrap()
}

#[test]
fn matching_pennies_is_undetermined() {
    let eq2 = data("eq2.ifgs");
    assert_eq!(ok(&["truth", "-s", &eq2, "-f", "A v0/{} E v1/{0} (v0=v1)", "-n", "2"]), "undetermined\n");
}

#[test]
fn meaning_of_the_diagonal() {
    let eq2 = data("eq2.ifgs");
    assert_eq!(
        ok(&["meaning", "-s", &eq2, "-f", "v0=v1", "-n", "2"]),
        "base=2 dim=2 count=1\nplus=[{},{00},{11},{00,11}] minus=[{},{10},{01},{01,10}]\n"
    );
}

#[test]
fn empty_team_satisfies_both_ways() {
    let eq2 = data("eq2.ifgs");
    assert_eq!(ok(&["eval", "-s", &eq2, "-f", "v0=v0", "-n", "1", "--team", ""]), "+ yes / - yes\n");
    assert_eq!(ok(&["eval", "-s", &eq2, "-f", "v0=v0", "-n", "1"]), "+ yes / - no\n");
}

#[test]
fn game_prints_a_copying_strategy() {
    let eq2 = data("eq2.ifgs");
    let args = ["game", "-s", &eq2, "-f", "E v1/{} (v0=v1)", "-n", "2", "--team", "00,10"];
    assert_eq!(ok(&args), "player 1 wins\npos=ε class=00 -> 0\npos=ε class=10 -> 1\n");
    let mut blind = args;
    blind[4] = "E v1/{0} (v0=v1)";
    assert_eq!(ok(&blind), "player 1 has no winning strategy\n");
    assert_eq!(code(&["game", "-s", &eq2, "-f", "v0=v1", "-n", "2", "--player", "2"]), 1);
}

#[test]
fn generated_algebra_over_one_variable() {
    let eq2 = data("eq2.ifgs");
    assert_eq!(
        ok(&["algebra-gen", "-s", &eq2, "-n", "1"]),
        "base=2 dim=1 count=2\nplus=[{}] minus=[{},{0},{1},{0,1}]\nplus=[{},{0},{1},{0,1}] minus=[{}]\n"
    );
}

#[test]
fn exit_codes() {
    let eq2 = data("eq2.ifgs");
    assert_eq!(code(&["truth", "-s", &eq2, "-f", "v0=", "-n", "2"]), 1);
    assert_eq!(code(&["truth", "-s", "no-such-file", "-f", "v0=v0", "-n", "1"]), 1);
    assert_eq!(code(&["eval", "-s", &eq2, "-f", "v0=v0", "-n", "1", "--team", "2"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["meaning", "-s", &eq2, "-f", "v0=v1", "-n", "5"]), 2);
    assert_eq!(code(&["algebra-gen", "-s", &eq2, "-n", "2", "--cap", "3"]), 2);
}

#[test]
fn laws_exit_status_follows_expectation() {
    let eq2 = data("eq2.ifgs");
    let sample = ["laws", "-s", &eq2, "-n", "2", "--sample", "20", "--seed", "3", "--law", "de-morgan-pairs"];
    assert!(ok(&sample).starts_with("de-morgan-pairs holds"));
    assert_eq!(ok(&sample), ok(&sample));
    // the two-element algebra has no counterexample to mixed associativity
    let o = ifg(&["laws", "-s", &eq2, "-n", "1", "--law", "associativity-mixed"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("associativity-mixed holds"));
    assert_eq!(code(&["laws", "-s", &eq2, "-n", "1", "--law", "nope"]), 1);
    assert!(ok(&["laws", "--list"]).lines().any(|l| l.starts_with("kleene ")));
}

#[test]
fn laws_read_a_dump() {
    let eq2 = data("eq2.ifgs");
    let dump = ok(&["algebra-gen", "-s", &eq2, "-n", "2"]);
    let path = std::env::temp_dir().join(format!("ifg-cli-test-{}.dump", std::process::id()));
    std::fs::write(&path, dump).unwrap();
    let out = ok(&["laws", path.to_str().unwrap(), "--law", "kleene"]);
    std::fs::remove_file(&path).unwrap();
    assert!(out.starts_with("kleene holds"), "{out}");
}

#[test]
fn classify_monadic_algebras() {
    let k0 = ok(&["monadic", "classify", &data("k_nabla0.alg")]);
    assert!(k0.contains("quantifier true\nshape type0\n"));
    assert!(k0.contains("fix-marker false (fails at 1)"));
    let k1 = ok(&["monadic", "classify", &data("k_nabla1.alg")]);
    assert!(k1.contains("quantifier true\nshape type1 a=1\n"));
    assert!(k1.contains("fix-marker true"));
    let m2 = ok(&["monadic", "classify", &data("m_nabla2.alg")]);
    assert!(m2.contains("shape type2 a=1 b=2"));
    let bad = ok(&["monadic", "classify", &data("m_bad_nabla.alg")]);
    assert!(bad.contains("Q4: fails at [2, 1]\n"));
    assert!(bad.contains("quantifier false"));
    assert_eq!(code(&["monadic", "classify", &data("m.alg")]), 1);
}

#[test]
fn congruences_of_the_six_element_algebra() {
    let out = ok(&["monadic", "congruences", &data("sixkxm.alg")]);
    assert!(out.starts_with("2 congruences\n"));
    assert!(out.ends_with("simple true\nsubdirectly irreducible true\n"));
}

#[test]
fn embed_k() {
    assert_eq!(
        ok(&["embed", &data("k_nabla1.alg")]),
        "base 1\nh(0) = plus=[{}] minus=[{},{0}]\nh(1) = plus=[{}] minus=[{}]\nh(2) = plus=[{},{0}] minus=[{}]\n"
    );
    assert_eq!(code(&["embed", &data("m_nabla2.alg")]), 1);
}

#[test]
fn selftest_passes() {
    let out = ok(&["selftest"]);
    assert!(out.lines().last().unwrap().ends_with("passed, 0 failed"));
    assert!(out.contains("PASS  matching pennies: neither true nor false"));
}
