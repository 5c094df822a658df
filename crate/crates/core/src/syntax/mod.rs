//! First-order syntax: terms, literals, clauses, formulas, substitutions, and the
//! text grammar.

mod formula;
mod parse;
mod render;
mod subst;
mod term;

use std::collections::BTreeSet;
use std::fmt;

pub use formula::{Formula, Quantifier};
pub use parse::{
    check_signature, parse_atom, parse_clause, parse_formula, parse_formula_with, parse_literal, parse_term,
    ParseOptions,
};
pub use render::render;
pub use subst::{NotInjective, Substitution};
pub use term::{Atom, Clause, Literal, Polarity, Symbol, SymbolKind, Term, EQUALITY};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    /// 1-based; 0 when the error is not tied to a position.
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        SyntaxError { line, col, message: message.into() }
    }

    pub fn signature(message: impl Into<String>) -> Self {
        SyntaxError { line: 0, col: 0, message: message.into() }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "{}:{}: {}", self.line, self.col, self.message)
        }
    }
}

/// Everything a formula talks about.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub free_vars: BTreeSet<String>,
    pub functions: BTreeSet<Symbol>,
    pub predicates: BTreeSet<(Symbol, Polarity)>,
    pub literals: BTreeSet<(Atom, Polarity)>,
}

pub fn vocabulary(f: &Formula) -> Vocabulary {
    Vocabulary {
        free_vars: f.free_vars(),
        functions: f.functions(),
        predicates: f.pred_polarities(),
        literals: f.literal_polarities(),
    }
}

pub fn term_vocabulary(t: &Term) -> Vocabulary {
    let mut v = Vocabulary::default();
    t.collect_vars(&mut v.free_vars);
    t.collect_functions(&mut v.functions);
    v
}

pub fn complement(l: &Literal) -> Literal {
    l.complement()
}
