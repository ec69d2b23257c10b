use std::fmt::Write;

use serde_json::{json, Value};

use super::ast::{Axiom, Context, Equation, Hypothesis, Judgment, Theory};

pub fn render_context(c: &Context) -> String {
    let mut s = String::from("[");
    s.push_str(&c.vars.join(", "));
    if !c.hyps.is_empty() {
        s.push_str(" | ");
        let hyps: Vec<String> = c
            .hyps
            .iter()
            .map(|h| match h {
                Hypothesis::Leq(a, b) => format!("{a} <= {b}"),
                Hypothesis::Dist(a, b, e) => format!("d({a}, {b}) <= {e}"),
            })
            .collect();
        s.push_str(&hyps.join(", "));
    }
    s.push(']');
    s
}

pub fn render_judgment(j: &Judgment) -> String {
    match j {
        Judgment::Eq(a, b) => format!("{a} = {b}"),
        Judgment::Leq(a, b) => format!("{a} <= {b}"),
        Judgment::Dist(a, b, e) => format!("d({a}, {b}) <= {e}"),
    }
}

pub fn render_axiom(a: &Axiom) -> String {
    format!(
        "{} {} : context {} |- {};",
        a.judgment.keyword(),
        a.name,
        render_context(&a.context),
        render_judgment(&a.judgment)
    )
}

pub fn render_theory(t: &Theory) -> String {
    let mut s = format!("theory {} over {} {{\n", t.name, t.backend());
    for op in &t.signature.ops {
        let arity = if op.arity.is_numbered() {
            op.arity.len().to_string()
        } else {
            render_context(&op.arity)
        };
        writeln!(s, "  op {} : {};", op.name, arity).unwrap();
    }
    for a in &t.axioms {
        writeln!(s, "  {}", render_axiom(a)).unwrap();
    }
    s.push_str("}\n");
    s
}

fn render_family(f: &[super::ast::Term]) -> String {
    if f.len() == 1 {
        return f[0].to_string();
    }
    let parts: Vec<String> = f.iter().map(|t| t.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn render_equation(e: &Equation) -> String {
    format!(
        "contextY {} ; contextX {} |- {} == {}",
        render_context(&e.y),
        render_context(&e.x),
        render_family(&e.p),
        render_family(&e.q)
    )
}

pub fn theory_json(t: &Theory) -> Value {
    json!({
        "name": t.name,
        "backend": t.backend(),
        "ops": t.signature.ops.iter().map(|o| json!({
            "name": o.name,
            "arity": render_context(&o.arity),
            "discrete": o.is_discrete(),
        })).collect::<Vec<_>>(),
        "axioms": t.axioms.iter().map(|a| json!({
            "name": a.name,
            "kind": a.judgment.keyword(),
            "context": render_context(&a.context),
            "judgment": render_judgment(&a.judgment),
        })).collect::<Vec<_>>(),
    })
}

pub fn equation_json(e: &Equation) -> Value {
    json!({
        "contextY": render_context(&e.y),
        "contextX": render_context(&e.x),
        "p": e.p.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "q": e.q.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "text": render_equation(e),
    })
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_equation_raw, parse_theory};
    use super::*;

    const OM: &str = "theory om over pos { op mul : 2; op e : 0;
        eq assoc : context [x, y, z] |- mul(mul(x,y),z) = mul(x,mul(y,z));
        eq unit : context [x] |- mul(e, x) = x;
        ineq grow : context [x] |- x <= mul(x, x);
        eq comm : context [x <= y] |- mul(x,y) = mul(y,x); }";

    #[test]
    fn theory_round_trip() {
        let t = parse_theory(OM).unwrap();
        let text = render_theory(&t);
        assert_eq!(parse_theory(&text).unwrap(), t);
        assert_eq!(render_theory(&parse_theory(&text).unwrap()), text);
    }

    #[test]
    fn met_round_trip_keeps_exact_fractions() {
        let src = "theory c over met { op u : 1; op s : [a, b | d(a, b) <= 2/3];
            qeq c : context [x, y | d(x,y) <= 1] |- d(u(x),u(y)) <= 7/12; }";
        let t = parse_theory(src).unwrap();
        let text = render_theory(&t);
        assert!(text.contains("7/12") && text.contains("2/3"));
        assert_eq!(parse_theory(&text).unwrap(), t);
    }

    #[test]
    fn equation_round_trip_with_infinity() {
        let t = parse_theory("theory c over met { op u : 1; }").unwrap();
        let e = parse_equation_raw("contextY [a, b | d(a,b) <= ∞] ; contextX [x, y | d(x,y) <= inf] |- (u(x), x) == (u(y), x)", &t).unwrap();
        let text = render_equation(&e);
        assert!(text.contains("inf"));
        assert_eq!(parse_equation_raw(&text, &t).unwrap(), e);
    }
}
