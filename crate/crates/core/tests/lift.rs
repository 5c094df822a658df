mod common;

use common::load_pairs;
use ctip::config::InterpolationConfig;
use ctip::lift::{ctif, fg_maximal_terms, lift, LiftingFront};
use ctip::syntax::{parse_formula, Formula, Symbol};
use ctip::verify::check_syntactic;
use ctip::Error;
use std::collections::BTreeSet;

fn p(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn syms(ss: &[(&str, usize)]) -> BTreeSet<Symbol> {
    ss.iter().map(|(n, a)| Symbol::function(*n, *a)).collect()
}

#[test]
fn corpus_interpolants_respect_vocabulary() {
    let cfg = InterpolationConfig { verify: true, ..Default::default() };
    for (name, f, g) in load_pairs("corpus", false) {
        let r = ctif(&f, &g, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        let h = &r.interpolant;
        assert!(check_syntactic(&f, &g, h).lyndon_ok, "{name}: {h}");
        let v = r.verification.unwrap();
        assert!(!v.failed(), "{name}: {v}");
        assert_eq!(h.free_vars().difference(&f.free_vars()).count(), 0, "{name}: {h}");
    }
}

#[test]
fn pipeline_is_deterministic() {
    let cfg = InterpolationConfig::default();
    for (name, f, g) in load_pairs("corpus", false) {
        let a = ctif(&f, &g, &cfg).unwrap();
        let b = ctif(&f, &g, &cfg).unwrap();
        assert_eq!(a.interpolant, b.interpolant, "{name}");
        assert_eq!(a.tableau, b.tableau, "{name}");
    }
}

#[test]
fn maximal_terms_come_before_their_superterms() {
    let h = p("q(h(g1, f(g1)), f(g1), g1)");
    let ts = fg_maximal_terms(&h, &syms(&[("f", 1)]), &syms(&[("g1", 0)]));
    let r: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
    assert_eq!(r, vec!["g1", "f(g1)"]);
}

#[test]
fn lifting_avoids_free_variable_names() {
    let front = LiftingFront::new(p("p(V1, f)"), p("?[Y]: p(V1, Y)"), syms(&[("f", 0)]), syms(&[]), p("p(a, f)")).unwrap();
    let l = lift(&front);
    assert_eq!(l.formula().to_string(), "?[V2]: p(a, V2)");
}

#[test]
fn non_theorems_are_not_proved() {
    let r = ctif(&p("p(a)"), &p("p(b)"), &InterpolationConfig::default());
    assert!(matches!(r, Err(Error::NotProved(_))), "{r:?}");
    assert_eq!(r.unwrap_err().exit_code(), 1);
}

#[test]
fn equality_needs_the_mode() {
    let opts = ctip::syntax::ParseOptions { equality: true };
    let f = ctip::syntax::parse_formula_with("a = b & p(a)", opts).unwrap();
    let g = ctip::syntax::parse_formula_with("p(b)", opts).unwrap();
    assert!(ctif(&f, &g, &InterpolationConfig::default()).is_err());
    let r = ctif(&f, &g, &InterpolationConfig { equality: true, ..Default::default() }).unwrap();
    assert!(check_syntactic(&f, &g, &r.interpolant).craig_ok, "{}", r.interpolant);
}
