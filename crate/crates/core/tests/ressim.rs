mod common;

use common::{random_unsat_pair, read_fixture};
use ctip::ressim::{derive_provenance, simulate, treegen, validate_tree, DTNode, DeductionTree, Method};
use ctip::syntax::{parse_clause, Atom};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_tree(seed: u64) -> DeductionTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (f, g) = random_unsat_pair(&mut rng, 6, 7);
    let mut t = treegen::refute(&f, &g).expect("unsatisfiable");
    t.labels = Some(derive_provenance(&t));
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translations_are_valid_and_linear(seed in any::<u64>()) {
        let t = random_tree(seed);
        prop_assert!(validate_tree(&t).is_empty());
        for m in Method::ALL {
            let sim = simulate(&t, m).unwrap();
            let tab = &sim.translation.tableau;
            let rep = tab.validate();
            prop_assert!(rep.is_ok(), "{}: {:?}", m, rep.violations);
            prop_assert!(tab.len() <= 6 * t.root.size());
            prop_assert_eq!(sim.translation.ct.len(), t.root.size());
        }
    }

    #[test]
    fn huang_crosses_sides_only_at_cut_leaves(seed in any::<u64>()) {
        let t = random_tree(seed);
        let sim = simulate(&t, Method::Huang).unwrap();
        let tab = &sim.translation.tableau;
        for leaf in tab.leaves() {
            let tg = tab.nodes[leaf].target.unwrap();
            if tab.nodes[tg].side != tab.nodes[leaf].side {
                prop_assert!(sim.translation.cut_leaves.contains(&leaf), "leaf {} targets the other side", leaf);
            }
        }
    }

    #[test]
    fn tree_json_round_trip(seed in any::<u64>()) {
        let t = random_tree(seed);
        let back = DeductionTree::from_json(&t.to_json_string()).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn three_atom_tree_gives_q_for_every_method() {
    let mut t = DeductionTree::from_json(&read_fixture("pqr_tree.json")).unwrap();
    assert!(simulate(&t, Method::OptHuang).is_err(), "labels are required");
    t.labels = Some(derive_provenance(&t));
    for m in Method::ALL {
        assert_eq!(simulate(&t, m).unwrap().interpolant.to_string(), "q", "{m}");
    }
}

#[test]
fn invalid_trees_are_rejected() {
    let c = |s: &str| parse_clause(s).unwrap();
    let root = DTNode::resolve(DTNode::leaf(c("p")), DTNode::leaf(c("~q")), Atom::prop("p"));
    let t = DeductionTree { f_clauses: vec![c("p")], g_clauses: vec![c("~q")], root, labels: None };
    assert!(!validate_tree(&t).is_empty());
    assert!(simulate(&t, Method::Huang).is_err());

    let t = DeductionTree { f_clauses: vec![c("p")], g_clauses: vec![c("~p")], root: DTNode::leaf(c("r")), labels: None };
    assert!(!validate_tree(&t).is_empty());
}

#[test]
fn method_names_parse() {
    for m in Method::ALL {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    assert!("resolution".parse::<Method>().is_err());
}
