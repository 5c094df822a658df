use std::path::PathBuf;
use std::process::{Command, Output};

use ctip::syntax::{parse_formula_with, ParseOptions};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn ctip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctip")).args(args).output().expect("run ctip")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("ctip-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn interpolate_example() {
    let o = ctip(&["interpolate", &fixture("corpus/skolem_term_f.p"), &fixture("corpus/skolem_term_g.p")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "![V1]: ?[V2]: p(V1, V2)");
}

#[test]
fn simulate_example() {
    let o = ctip(&["simulate", &fixture("pqr_tree.json"), "--method", "huang"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q");
}

#[test]
fn simulate_emits_a_valid_tableau() {
    let out = temp("sim.json", "");
    let o = ctip(&["simulate", &fixture("pqr_tree.json"), "--method", "mcmillan", "--emit-tableau", &out]);
    assert_eq!(o.status.code(), Some(0));
    let o = ctip(&["validate-tableau", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o), "valid\nq\n");
}

#[test]
fn verify_rejects_a_violating_interpolant() {
    let f = temp("vf.p", "p & q.");
    let g = temp("vg.p", "p | r.");
    let h = temp("vh.p", "~p.");
    assert_eq!(ctip(&["verify", &f, &g, &h]).status.code(), Some(3));
    let good = temp("vgood.p", "p.");
    assert_eq!(ctip(&["verify", &f, &g, &good]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let f = temp("ef.p", "p(a).");
    let g = temp("eg.p", "p(b).");
    assert_eq!(ctip(&["interpolate", &f, &g]).status.code(), Some(1));
    let bad = temp("bad.p", "p(a &");
    assert_eq!(ctip(&["interpolate", &bad, &g]).status.code(), Some(2));
    let quantified = temp("q.p", "![X]: p(X).");
    assert_eq!(ctip(&["ground-interpolate", &quantified, &g]).status.code(), Some(2));
    let eq = temp("eq.p", "a = b.");
    assert_eq!(ctip(&["interpolate", &eq, &eq]).status.code(), Some(2));
    assert_eq!(ctip(&["interpolate", &eq, &eq, "--equality"]).status.code(), Some(0));
}

#[test]
fn output_round_trips_and_is_deterministic() {
    let dir = fixture("corpus");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok()?.strip_suffix("_f.p").map(str::to_string))
        .collect();
    names.sort();
    for n in names {
        let (f, g) = (format!("{dir}/{n}_f.p"), format!("{dir}/{n}_g.p"));
        let a = ctip(&["interpolate", &f, &g]);
        let b = ctip(&["interpolate", &f, &g]);
        assert_eq!(a.status.code(), Some(0), "{n}");
        assert_eq!(a.stdout, b.stdout, "{n}");
        let text = stdout(&a);
        let h = parse_formula_with(&text, ParseOptions::default()).unwrap_or_else(|e| panic!("{n}: {text}: {e}"));
        assert_eq!(h.to_string(), text.trim(), "{n}");
    }
}

#[test]
fn side_policy_map_and_emitted_tableau() {
    let f = temp("sf.p", "(a | e) & (~a | b) & (~a | c).");
    let g = temp("sg.p", "(b & c) | e.");
    let out = temp("st.json", "");
    let o = ctip(&["ground-interpolate", &f, &g, "--verify", "--emit-tableau", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = ctip(&["validate-tableau", &out]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).ends_with(&stdout(&o)), "{} vs {}", stdout(&v), stdout(&o));

    let map = temp("sides.json", "{\"b\": \"g\"}");
    let o = ctip(&["ground-interpolate", &f, &g, &format!("--side-policy=map={map}")]);
    assert_eq!(o.status.code(), Some(0));
    let bad = temp("sides_bad.json", "{\"b\": \"x\"}");
    let o = ctip(&["ground-interpolate", &f, &g, &format!("--side-policy=map={bad}")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prove_prints_a_tableau() {
    let o = ctip(&["prove", &fixture("corpus/skolem_term_f.p"), &fixture("corpus/skolem_term_g.p")]);
    assert_eq!(o.status.code(), Some(0));
    let t = ctip::tableau::TableauJson::from_str(&stdout(&o)).unwrap().to_tableau().unwrap();
    assert!(t.validate().is_ok());
    let valid = temp("valid.p", "p | ~p.");
    assert_eq!(ctip(&["prove", &valid]).status.code(), Some(0));
}
