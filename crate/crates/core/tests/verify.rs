use ctip::prover::ProofLimits;
use ctip::syntax::{parse_formula, Formula};
use ctip::verify::{check_semantic, check_syntactic, close_with_constants, verify, SemanticVerdict};

fn p(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

#[test]
fn polarity_violations_are_named() {
    let c = check_syntactic(&p("p & q"), &p("p | r"), &p("~p"));
    assert!(!c.lyndon_ok);
    assert!(c.craig_ok);
    assert!(!c.violations.is_empty());
    let c = check_syntactic(&p("p & q"), &p("p | r"), &p("q"));
    assert!(!c.craig_ok);
}

#[test]
fn truth_table_verdicts() {
    let (l, r, _) = check_semantic(&p("p & q"), &p("p | r"), &p("p"), ProofLimits::default());
    assert_eq!((l, r), (SemanticVerdict::OraclePass, SemanticVerdict::OraclePass));
    let (l, _, _) = check_semantic(&p("p | q"), &p("p | r"), &p("p"), ProofLimits::default());
    assert_eq!(l, SemanticVerdict::OracleFail);
}

#[test]
fn first_order_reports() {
    let rep = verify(&p("![X]: p(X, f(X))"), &p("?[X]: p(g, X)"), &p("![V1]: ?[V2]: p(V1, V2)"), ProofLimits::default());
    assert!(rep.confirmed(), "{rep}");
    let rep = verify(&p("![X]: p(X, f(X))"), &p("?[X]: p(g, X)"), &p("?[V1]: ![V2]: p(V1, V2)"), ProofLimits::default());
    assert!(!rep.confirmed(), "{rep}");
}

#[test]
fn free_variables_become_shared_constants() {
    let (closed, names) = close_with_constants(&[&p("p(X)"), &p("q(X, Y)")]);
    assert_eq!(names.len(), 2);
    assert!(closed.iter().all(Formula::is_sentence));
    assert_eq!(closed[0].functions(), closed[1].functions().into_iter().filter(|s| s.name == names["X"]).collect());
}
