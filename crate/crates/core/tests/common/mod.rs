//! Test oracles and generators shared by the integration and acceptance tests.
//! The truth-table evaluator here is written against the formula type only and
//! does not use the library's own checking code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ctip::ressim::{DTNode, DeductionTree};
use ctip::syntax::{parse_formula_with, Atom, Clause, Formula, Literal, ParseOptions};
use ctip::tableau::{NodeId, Side, Tableau};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// `(name, f, g)` for every `<name>_f.p` / `<name>_g.p` pair in a fixture directory.
pub fn load_pairs(dir: &str, equality: bool) -> Vec<(String, Formula, Formula)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture(dir))
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter_map(|n| n.strip_suffix("_f.p").map(str::to_string))
        .collect();
    names.sort();
    let opts = ParseOptions { equality };
    names
        .into_iter()
        .map(|n| {
            let f = parse_formula_with(&read_fixture(&format!("{dir}/{n}_f.p")), opts).unwrap();
            let g = parse_formula_with(&read_fixture(&format!("{dir}/{n}_g.p")), opts).unwrap();
            (n, f, g)
        })
        .collect()
}

/// Truth value of a quantifier-free formula; atoms missing from `v` are false.
pub fn eval(f: &Formula, v: &BTreeMap<Atom, bool>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => v.get(a).copied().unwrap_or(false),
        Formula::Not(a) => !eval(a, v),
        Formula::And(a, b) => eval(a, v) && eval(b, v),
        Formula::Or(a, b) => eval(a, v) || eval(b, v),
        Formula::Imp(a, b) => !eval(a, v) || eval(b, v),
        Formula::Iff(a, b) => eval(a, v) == eval(b, v),
        Formula::Quant(..) => panic!("eval on a quantified formula"),
    }
}

pub fn atoms(fs: &[&Formula]) -> Vec<Atom> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.for_each_atom(&mut |a| {
            out.insert(a.clone());
        });
    }
    out.into_iter().collect()
}

fn all_assignments(atoms: &[Atom]) -> impl Iterator<Item = BTreeMap<Atom, bool>> + '_ {
    assert!(atoms.len() <= 20, "too many atoms for the oracle");
    (0u32..(1 << atoms.len())).map(move |bits| atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect())
}

pub fn entails(f: &Formula, g: &Formula) -> bool {
    let ats = atoms(&[f, g]);
    let holds = all_assignments(&ats).all(|v| !eval(f, &v) || eval(g, &v));
    holds
}

pub fn satisfiable(fs: &[&Formula]) -> bool {
    let ats = atoms(fs);
    let sat = all_assignments(&ats).any(|v| fs.iter().all(|f| eval(f, &v)));
    sat
}

pub fn clauses_formula(cs: &[Clause]) -> Formula {
    Formula::conj(cs.iter().map(|c| Formula::disj(c.iter().map(Formula::literal))))
}

/// Literals of a formula built from literals with `&`, `|` and truth values.
pub fn literals_of(f: &Formula) -> BTreeSet<Literal> {
    fn go(f: &Formula, out: &mut BTreeSet<Literal>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(Literal::pos(a.clone()));
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => {
                    out.insert(Literal::neg(a.clone()));
                }
                other => panic!("negation of a non-atom: {other}"),
            },
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            other => panic!("not a literal combination: {other}"),
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

/// Predicate symbols of `f`, ignoring polarity.
pub fn atom_names(f: &Formula) -> BTreeSet<Atom> {
    atoms(&[f]).into_iter().collect()
}

fn random_clause(rng: &mut impl Rng, names: &[Atom], max_len: usize) -> Clause {
    // Mostly two or three literals; all-unit sets make trivial refutations.
    let len = if rng.gen_bool(0.2) { 1 } else { rng.gen_range(2..=max_len) }.min(names.len());
    let picked: Vec<&Atom> = names.choose_multiple(rng, len).collect();
    Clause(picked.into_iter().map(|a| if rng.gen_bool(0.5) { Literal::pos(a.clone()) } else { Literal::neg(a.clone()) }).collect())
}

/// A pair of propositional clause sets with an unsatisfiable union and no
/// common clause, certified by truth table. Up to `max_atoms` atoms and
/// `max_clauses` clauses per side.
pub fn random_unsat_pair<R: Rng>(rng: &mut R, max_atoms: usize, max_clauses: usize) -> (Vec<Clause>, Vec<Clause>) {
    loop {
        let n = rng.gen_range(2..=max_atoms);
        let names: Vec<Atom> = (0..n).map(|i| Atom::prop(format!("p{i}"))).collect();
        let side = |rng: &mut R| {
            let k = rng.gen_range(1..=max_clauses);
            let mut cs: Vec<Clause> = Vec::new();
            for _ in 0..k {
                let c = random_clause(rng, &names, 3);
                if !cs.iter().any(|d| d.same_literals(&c)) {
                    cs.push(c);
                }
            }
            cs
        };
        let f = side(rng);
        let g: Vec<Clause> = side(rng).into_iter().filter(|c| !f.iter().any(|d| d.same_literals(c))).collect();
        if g.is_empty() {
            continue;
        }
        let (ff, gf) = (clauses_formula(&f), clauses_formula(&g));
        if !satisfiable(&[&ff, &gf]) {
            return (f, g);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Col {
    F,
    G,
    T,
}

pub fn colors(f: &[Clause], g: &[Clause]) -> BTreeMap<Atom, Col> {
    let of = |cs: &[Clause]| cs.iter().flat_map(|c| c.iter().map(|l| l.atom.clone())).collect::<BTreeSet<_>>();
    let (af, ag) = (of(f), of(g));
    af.union(&ag)
        .map(|a| {
            let c = match (af.contains(a), ag.contains(a)) {
                (true, true) => Col::T,
                (true, false) => Col::F,
                _ => Col::G,
            };
            (a.clone(), c)
        })
        .collect()
}

fn in_f(t: &DeductionTree, c: &Clause) -> bool {
    t.f_clauses.iter().any(|d| d.same_literals(c))
}

/// Huang's partial interpolants keyed by node path (`""` root, `"0"` left
/// child, ...), with truth-value simplification.
pub fn huang_oracle(t: &DeductionTree) -> BTreeMap<String, Formula> {
    let col = colors(&t.f_clauses, &t.g_clauses);
    let mut out = BTreeMap::new();
    fn go(t: &DeductionTree, col: &BTreeMap<Atom, Col>, n: &DTNode, path: String, out: &mut BTreeMap<String, Formula>) -> Formula {
        let v = if n.children.is_empty() {
            if in_f(t, &n.clause) {
                Formula::False
            } else {
                Formula::True
            }
        } else {
            let a = n.pivot.clone().unwrap();
            let p1 = go(t, col, &n.children[0], format!("{path}0"), out);
            let p2 = go(t, col, &n.children[1], format!("{path}1"), out);
            match col[&a] {
                Col::F => Formula::or_s(p1, p2),
                Col::G => Formula::and_s(p1, p2),
                Col::T => Formula::or_s(
                    Formula::and_s(p1, Formula::not(Formula::atom(a.clone()))),
                    Formula::and_s(Formula::atom(a), p2),
                ),
            }
        };
        out.insert(path, v.clone());
        v
    }
    go(t, &col, &t.root, String::new(), &mut out);
    out
}

/// McMillan's partial interpolants keyed by node path.
pub fn mcmillan_oracle(t: &DeductionTree) -> BTreeMap<String, Formula> {
    let col = colors(&t.f_clauses, &t.g_clauses);
    let mut out = BTreeMap::new();
    fn go(t: &DeductionTree, col: &BTreeMap<Atom, Col>, n: &DTNode, path: String, out: &mut BTreeMap<String, Formula>) -> Formula {
        let v = if n.children.is_empty() {
            if in_f(t, &n.clause) {
                let mut acc: Option<Formula> = None;
                for l in n.clause.iter().rev() {
                    let x = if col[&l.atom] == Col::T { Formula::literal(l) } else { Formula::False };
                    acc = Some(match acc {
                        None => x,
                        Some(r) => Formula::or_s(x, r),
                    });
                }
                acc.unwrap_or(Formula::False)
            } else {
                Formula::True
            }
        } else {
            let a = n.pivot.clone().unwrap();
            let p1 = go(t, col, &n.children[0], format!("{path}0"), out);
            let p2 = go(t, col, &n.children[1], format!("{path}1"), out);
            match col[&a] {
                Col::F => Formula::or_s(p1, p2),
                _ => Formula::and_s(p1, p2),
            }
        };
        out.insert(path, v.clone());
        v
    }
    go(t, &col, &t.root, String::new(), &mut out);
    out
}

/// Checks the node invariants of ground interpolant extraction at `n`: the
/// entailments `F & path_F(n) |= ipol(n) |= ~G_R | ~path_G(n)` and the literal
/// containment of `ipol(n)` in both sides.
pub fn node_invariant(t: &Tableau, n: NodeId, ipol: &Formula, f: &[Clause], gr: &[Clause]) -> Result<(), String> {
    let mut branch = Vec::new();
    let mut cur = Some(n);
    while let Some(id) = cur {
        if let (Some(l), Some(s)) = (&t.nodes[id].label, t.nodes[id].side) {
            branch.push((l.clone(), s));
        }
        cur = t.nodes[id].parent;
    }
    let path = |side: Side| branch.iter().filter(|(_, s)| *s == side).map(|(l, _)| l.clone()).collect::<Vec<_>>();
    let (pf, pg) = (path(Side::F), path(Side::G));
    let left = Formula::and(clauses_formula(f), Formula::conj(pf.iter().map(Formula::literal)));
    let right = Formula::or(Formula::not(clauses_formula(gr)), Formula::not(Formula::conj(pg.iter().map(Formula::literal))));
    if !entails(&left, ipol) {
        return Err(format!("node {n}: F & path_F does not entail {ipol}"));
    }
    if !entails(ipol, &right) {
        return Err(format!("node {n}: {ipol} does not entail ~G_R | ~path_G"));
    }
    let mut lf: BTreeSet<Literal> = f.iter().flat_map(|c| c.iter().cloned()).collect();
    lf.extend(pf);
    let mut lg: BTreeSet<Literal> = gr.iter().flat_map(|c| c.iter().map(Literal::complement)).collect();
    lg.extend(pg.iter().map(Literal::complement));
    for l in literals_of(ipol) {
        if !lf.contains(&l) || !lg.contains(&l) {
            return Err(format!("node {n}: literal {l} of {ipol} is not shared"));
        }
    }
    Ok(())
}
