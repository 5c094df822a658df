use std::collections::BTreeSet;
use std::fmt;

/// Name of the reserved binary equality predicate.
pub const EQUALITY: &str = "=";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
}

/// A function or predicate symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn function(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity, kind: SymbolKind::Function }
    }

    pub fn predicate(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity, kind: SymbolKind::Predicate }
    }

    pub fn is_constant(&self) -> bool {
        self.kind == SymbolKind::Function && self.arity == 0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Outermost function symbol, `None` for variables.
    pub fn head(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    /// True if `self` occurs in `other` at a position other than the root.
    pub fn is_strict_subterm_of(&self, other: &Term) -> bool {
        match other {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(|a| a == self || self.is_strict_subterm_of(a)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn collect_functions(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(f, args) = self {
            out.insert(Symbol::function(f.clone(), args.len()));
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    /// Visits every subterm, outermost first.
    pub fn for_each_subterm<'a>(&'a self, visit: &mut impl FnMut(&'a Term)) {
        visit(self);
        if let Term::App(_, args) = self {
            for a in args {
                a.for_each_subterm(visit);
            }
        }
    }

    /// Rebuilds the term bottom-up, giving `f` the chance to replace any subterm
    /// before descending into it.
    pub fn replace_top_down(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(g, args) => {
                Term::App(g.clone(), args.iter().map(|a| a.replace_top_down(f)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Atom { pred: name.into(), args: Vec::new() }
    }

    pub fn equality(lhs: Term, rhs: Term) -> Self {
        Atom { pred: EQUALITY.to_string(), args: vec![lhs, rhs] }
    }

    pub fn is_equality(&self) -> bool {
        self.pred == EQUALITY
    }

    pub fn predicate(&self) -> Symbol {
        Symbol::predicate(self.pred.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn map_args(&self, f: impl FnMut(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(f).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equality() && self.args.len() == 2 {
            return write!(f, "{} = {}", self.args[0], self.args[1]);
        }
        f.write_str(&self.pred)?;
        write_args(f, &self.args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "+",
            Polarity::Negative => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn polarity(&self) -> Polarity {
        if self.positive {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn map_args(&self, f: impl FnMut(&Term) -> Term) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_args(f) }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.atom.args.iter().for_each(|a| a.collect_vars(out));
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// An ordered disjunction of literals. The empty clause denotes falsity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause(pub Vec<Literal>);

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.0.iter()
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(Literal::is_ground)
    }

    pub fn is_tautology(&self) -> bool {
        self.0.iter().enumerate().any(|(i, l)| self.0[i + 1..].iter().any(|k| k.is_complement_of(l)))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.0.iter().for_each(|l| l.collect_vars(&mut out));
        out
    }

    /// Literal set equality, ignoring order and multiplicity.
    pub fn same_literals(&self, other: &Clause) -> bool {
        self.0.iter().all(|l| other.0.contains(l)) && other.0.iter().all(|l| self.0.contains(l))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Clause {
    type Item = &'a Literal;
    type IntoIter = std::slice::Iter<'a, Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: Vec<Term>) -> Atom {
        Atom::new("p", args)
    }

    #[test]
    fn complement_flips_sign() {
        let l = Literal::pos(Atom::prop("p"));
        assert_eq!(l.complement(), Literal::neg(Atom::prop("p")));
        let q = Literal::neg(Atom::new("q", vec![Term::app("f", vec![Term::var("X")])]));
        assert_eq!(q.complement().to_string(), "q(f(X))");
        let a = Literal::pos(p(vec![Term::constant("a")]));
        assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn strict_subterm() {
        let fa = Term::app("f", vec![Term::constant("a")]);
        let gfa = Term::app("g", vec![fa.clone()]);
        assert!(fa.is_strict_subterm_of(&gfa));
        assert!(Term::constant("a").is_strict_subterm_of(&gfa));
        assert!(!gfa.is_strict_subterm_of(&gfa));
        assert!(!gfa.is_strict_subterm_of(&fa));
    }

    #[test]
    fn render_terms_and_clauses() {
        let t = Term::app("f", vec![Term::var("X"), Term::constant("a")]);
        assert_eq!(t.to_string(), "f(X, a)");
        let c = Clause::new(vec![
            Literal::neg(Atom::prop("b")),
            Literal::pos(Atom::new("p", vec![t])),
        ]);
        assert_eq!(c.to_string(), "~b | p(f(X, a))");
        assert_eq!(Clause::default().to_string(), "$false");
        let eq = Literal::neg(Atom::equality(Term::constant("a"), Term::constant("b")));
        assert_eq!(eq.to_string(), "~a = b");
    }

    #[test]
    fn tautology_detection() {
        let c = Clause::new(vec![Literal::pos(Atom::prop("p")), Literal::neg(Atom::prop("p"))]);
        assert!(c.is_tautology());
        assert!(!Clause::new(vec![Literal::pos(Atom::prop("p"))]).is_tautology());
    }
}
