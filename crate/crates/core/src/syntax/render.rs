use super::formula::{Formula, Quantifier};

/// Canonical text form. Operands of binary connectives are parenthesized whenever
/// they are binary or quantified, so the output re-parses to the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("$true"),
        Formula::False => out.push_str("$false"),
        Formula::Atom(a) => out.push_str(&a.to_string()),
        Formula::Not(a) => {
            out.push('~');
            write_unary_operand(a, out);
        }
        Formula::And(a, b) => write_binary(a, " & ", b, out),
        Formula::Or(a, b) => write_binary(a, " | ", b, out),
        Formula::Imp(a, b) => write_binary(a, " => ", b, out),
        Formula::Iff(a, b) => write_binary(a, " <=> ", b, out),
        Formula::Quant(q, v, body) => {
            out.push(match q {
                Quantifier::Forall => '!',
                Quantifier::Exists => '?',
            });
            out.push('[');
            out.push_str(v);
            out.push_str("]: ");
            write_unary_operand(body, out);
        }
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Imp(..) | Formula::Iff(..))
}

fn write_unary_operand(f: &Formula, out: &mut String) {
    // An equality atom under `~` stays unbracketed: `~a = b` is the negated atom.
    if is_binary(f) {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    for (i, x) in [a, b].into_iter().enumerate() {
        if i == 1 {
            out.push_str(op);
        }
        if is_binary(x) || matches!(x, Formula::Quant(..)) {
            out.push('(');
            write_formula(x, out);
            out.push(')');
        } else {
            write_formula(x, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse::parse_formula;

    fn rt(s: &str) -> String {
        parse_formula(s).unwrap().to_string()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(rt("b & c | e"), "(b & c) | e");
        assert_eq!(rt("(e | b) & (e | c)"), "(e | b) & (e | c)");
        assert_eq!(rt("![X,Y]: p(X, Y)"), "![X]: ![Y]: p(X, Y)");
        assert_eq!(rt("![X]: (p(X) & q)"), "![X]: (p(X) & q)");
        assert_eq!(rt("~(p & q)"), "~(p & q)");
        assert_eq!(rt("a & b & c"), "(a & b) & c");
        assert_eq!(rt("a => b => c"), "a => (b => c)");
        assert_eq!(rt("~ ~p"), "~~p");
        assert_eq!(rt("(![X]: p(X)) | q"), "(![X]: p(X)) | q");
    }
}
