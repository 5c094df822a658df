use std::collections::BTreeMap;

use super::formula::{Formula, Quantifier};
use super::term::{Atom, Clause, Literal, SymbolKind, Term, EQUALITY};
use super::SyntaxError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept infix `=` as the reserved equality predicate.
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    True,
    False,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Bang,
    Question,
    Tilde,
    Amp,
    Bar,
    Imp,
    Iff,
    Eq,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::True => "`$true`".into(),
            Tok::False => "`$false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 6)].iter().collect();
        let fixed = [
            ("<=>", Tok::Iff),
            ("=>", Tok::Imp),
            ("$true", Tok::True),
            ("$false", Tok::False),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push(Spanned { tok: t.clone(), line: l0, col: c0 });
            advance(s.len(), &mut i, &mut col);
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '!' => Some(Tok::Bang),
            '?' => Some(Tok::Question),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Eq),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Spanned { tok: t, line: l0, col: c0 });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if c.is_ascii_lowercase() { Tok::Lower(word) } else { Tok::Upper(word) };
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        return Err(SyntaxError::at(l0, c0, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    opts: ParseOptions,
    end: (usize, usize),
    sig: BTreeMap<String, (usize, SymbolKind)>,
}

impl Parser {
    fn new(text: &str, opts: ParseOptions) -> Result<Self, SyntaxError> {
        let toks = lex(text)?;
        let lines = text.split('\n').count();
        let last = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, pos: 0, opts, end: (lines, last + 1), sig: BTreeMap::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (l, c) = self.here();
        SyntaxError::at(l, c, msg)
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {}", t.describe())),
            None => self.err(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn declare(&mut self, name: &str, arity: usize, kind: SymbolKind, at: (usize, usize)) -> Result<(), SyntaxError> {
        match self.sig.get(name) {
            Some(&(a, k)) if a != arity || k != kind => Err(SyntaxError::at(
                at.0,
                at.1,
                format!(
                    "symbol `{name}` used as {} of arity {arity} but earlier as {} of arity {a}",
                    kind_name(kind),
                    kind_name(k)
                ),
            )),
            Some(_) => Ok(()),
            None => {
                self.sig.insert(name.to_string(), (arity, kind));
                Ok(())
            }
        }
    }

    /// One or more formulas, each optionally ended by `.`, read as their conjunction.
    fn formulas(&mut self) -> Result<Formula, SyntaxError> {
        let mut parts = Vec::new();
        loop {
            parts.push(self.iff()?);
            let dotted = self.eat(&Tok::Dot);
            if self.at_end() {
                break;
            }
            if !dotted {
                return Err(self.unexpected("an operator or `.`"));
            }
        }
        Ok(Formula::conj(parts))
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Bang) | Some(Tok::Question) => {
                let q = if self.peek() == Some(&Tok::Bang) { Quantifier::Forall } else { Quantifier::Exists };
                self.pos += 1;
                self.expect(Tok::LBrack)?;
                let mut vars = Vec::new();
                loop {
                    match self.peek() {
                        Some(Tok::Upper(v)) => {
                            vars.push(v.clone());
                            self.pos += 1;
                        }
                        _ => return Err(self.unexpected("a variable")),
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBrack)?;
                self.expect(Tok::Colon)?;
                let mut body = self.unary()?;
                for v in vars.into_iter().rev() {
                    body = Formula::Quant(q, v, Box::new(body));
                }
                Ok(body)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Lower(_)) | Some(Tok::Upper(_)) => Ok(Formula::Atom(self.atom()?)),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        let at = self.here();
        let (name, args, is_var) = match self.peek().cloned() {
            Some(Tok::Lower(name)) => {
                self.pos += 1;
                (name, self.args()?, false)
            }
            Some(Tok::Upper(name)) => {
                self.pos += 1;
                (name, Vec::new(), true)
            }
            _ => return Err(self.unexpected("an atom")),
        };
        if self.peek() == Some(&Tok::Eq) {
            if !self.opts.equality {
                return Err(self.err("`=` requires equality mode"));
            }
            self.pos += 1;
            let lhs = if is_var {
                Term::Var(name)
            } else {
                self.declare(&name, args.len(), SymbolKind::Function, at)?;
                Term::App(name, args)
            };
            let rhs = self.term()?;
            return Ok(Atom::equality(lhs, rhs));
        }
        if is_var {
            return Err(SyntaxError::at(at.0, at.1, format!("variable `{name}` used as a formula")));
        }
        self.declare(&name, args.len(), SymbolKind::Predicate, at)?;
        Ok(Atom::new(name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Upper(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Lower(f)) => {
                self.pos += 1;
                let args = self.args()?;
                self.declare(&f, args.len(), SymbolKind::Function, at)?;
                Ok(Term::App(f, args))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let mut positive = true;
        while self.eat(&Tok::Tilde) {
            positive = !positive;
        }
        let atom = self.atom()?;
        Ok(Literal { positive, atom })
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

fn kind_name(k: SymbolKind) -> &'static str {
    match k {
        SymbolKind::Function => "function",
        SymbolKind::Predicate => "predicate",
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with(text, ParseOptions::default())
}

pub fn parse_formula_with(text: &str, opts: ParseOptions) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, opts)?;
    let f = p.formulas()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, ParseOptions::default())?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// A single atom; `a = b` is accepted regardless of equality mode.
pub fn parse_atom(text: &str) -> Result<Atom, SyntaxError> {
    let mut p = Parser::new(text, ParseOptions { equality: true })?;
    let a = p.atom()?;
    p.finish()?;
    Ok(a)
}

pub fn parse_literal(text: &str) -> Result<Literal, SyntaxError> {
    let mut p = Parser::new(text, ParseOptions { equality: true })?;
    let l = p.literal()?;
    p.finish()?;
    Ok(l)
}

/// A disjunction of literals, or `$false` for the empty clause.
pub fn parse_clause(text: &str) -> Result<Clause, SyntaxError> {
    let mut p = Parser::new(text, ParseOptions { equality: true })?;
    if p.eat(&Tok::False) {
        p.finish()?;
        return Ok(Clause::default());
    }
    let mut lits = vec![p.literal()?];
    while p.eat(&Tok::Bar) {
        lits.push(p.literal()?);
    }
    p.finish()?;
    Ok(Clause(lits))
}

/// Checks that every symbol name is used with one arity and one kind across all
/// given formulas.
pub fn check_signature<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Result<(), SyntaxError> {
    let mut sig: BTreeMap<String, (usize, SymbolKind)> = BTreeMap::new();
    for f in fs {
        let syms = f.predicates().into_iter().chain(f.functions());
        for s in syms {
            if s.name == EQUALITY {
                continue;
            }
            match sig.get(&s.name) {
                Some(&(a, k)) if a != s.arity || k != s.kind => {
                    return Err(SyntaxError::signature(format!(
                        "symbol `{}` used as {} of arity {} and as {} of arity {}",
                        s.name,
                        kind_name(k),
                        a,
                        kind_name(s.kind),
                        s.arity
                    )))
                }
                Some(_) => {}
                None => {
                    sig.insert(s.name.clone(), (s.arity, s.kind));
                }
            }
        }
    }
    Ok(())
}
