use super::Formula;

fn binary_parts(f: &Formula) -> Option<(&'static str, &Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some(("&", a, b)),
        Formula::Or(a, b) => Some(("|", a, b)),
        Formula::Imp(a, b) => Some(("->", a, b)),
        Formula::Iff(a, b) => Some(("<->", a, b)),
        _ => None,
    }
}

fn prefix_parts(f: &Formula) -> Option<(&'static str, &Formula)> {
    use Formula::*;
    Some(match f {
        Not(g) => ("~", g),
        BoxA(g) => ("[a]", g),
        DiaA(g) => ("<a>", g),
        BoxP(g) => ("[p]", g),
        DiaP(g) => ("<p>", g),
        Box(g) => ("[]", g),
        Dia(g) => ("<>", g),
        BoxMin(g) => ("[m]", g),
        DiaMin(g) => ("<m>", g),
        BoxComp(g) => ("[c]", g),
        DiaComp(g) => ("<c>", g),
        DiaConv(g) => ("<inv>", g),
        _ => return None,
    })
}

fn same_connective(a: &Formula, b: &Formula) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

pub(super) fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write(f: &Formula, out: &mut String) {
    if let Some((op, lhs, rhs)) = binary_parts(f) {
        // A binary child is bracketed unless it continues the same
        // right-nested chain.
        write_operand(lhs, binary_parts(lhs).is_some(), out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        let chain = same_connective(f, rhs);
        write_operand(rhs, binary_parts(rhs).is_some() && !chain, out);
        return;
    }
    if let Some((op, inner)) = prefix_parts(f) {
        out.push_str(op);
        let bracket = binary_parts(inner).is_some();
        if op != "~" && !bracket {
            out.push(' ');
        }
        write_operand(inner, bracket, out);
        return;
    }
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Ocond(b, a) => {
            out.push_str("O(");
            write(b, out);
            out.push_str(" / ");
            write(a, out);
            out.push(')');
        }
        Formula::Oa(g) | Formula::Op(g) => {
            out.push_str(if matches!(f, Formula::Oa(_)) {
                "Oa("
            } else {
                "Op("
            });
            write(g, out);
            out.push(')');
        }
        _ => unreachable!("connectives handled above"),
    }
}

fn write_operand(f: &Formula, bracket: bool, out: &mut String) {
    if bracket {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::{atom, parse, render, Formula};

    #[test]
    fn golden_renderings() {
        assert_eq!(render(&Formula::and(atom("p"), atom("q"))), "p & q");
        assert_eq!(render(&Formula::ocond(atom("q"), atom("p"))), "O(q / p)");
        assert_eq!(render(&Formula::not(Formula::Top)), "~true");
        assert_eq!(
            render(&Formula::imp(
                Formula::dia_a(Formula::not(atom("p"))),
                Formula::box_p(atom("p"))
            )),
            "<a> ~p -> [p] p"
        );
    }

    #[test]
    fn nested_binaries_are_bracketed() {
        let left = Formula::and(Formula::and(atom("a"), atom("b")), atom("c"));
        assert_eq!(render(&left), "(a & b) & c");
        let right = Formula::and(atom("a"), Formula::and(atom("b"), atom("c")));
        assert_eq!(render(&right), "a & b & c");
        let mixed = Formula::imp(Formula::or(atom("a"), atom("b")), atom("c"));
        assert_eq!(render(&mixed), "(a | b) -> c");
        for f in [left, right, mixed] {
            assert_eq!(parse(&render(&f)).unwrap(), f);
        }
    }

    #[test]
    fn modal_prefix_spacing() {
        let f = Formula::boxed(Formula::imp(atom("p"), atom("q")));
        assert_eq!(render(&f), "[](p -> q)");
        let g = Formula::not(Formula::dia_min(atom("p")));
        assert_eq!(render(&g), "~<m> p");
        let h = Formula::dia_conv(Formula::oa(atom("x")));
        assert_eq!(render(&h), "<inv> Oa(x)");
    }
}
