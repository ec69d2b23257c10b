use proptest::prelude::*;

use wb_core::dist::Dist;
use wb_core::theory::{parse_equation_raw, parse_theory, render_equation, render_theory};

const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug)]
struct Shape {
    met: bool,
    /// `(name, Some(count))` for numbered arities, `None` for a two-variable
    /// ordered or bounded arity.
    ops: Vec<(String, Option<usize>)>,
}

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (1i64..40, 1i64..12)
}

fn shape() -> impl Strategy<Value = Shape> {
    (any::<bool>(), proptest::collection::vec(prop_oneof![(0usize..4).prop_map(Some), Just(None)], 1..4)).prop_map(
        |(met, arities)| Shape {
            met,
            ops: arities.into_iter().enumerate().map(|(i, a)| (format!("op{i}"), a)).collect(),
        },
    )
}

/// A term over `VARS` using only numbered-arity operations.
fn term(ops: Vec<(String, usize)>, depth: u32) -> BoxedStrategy<String> {
    let leaf = proptest::sample::select(VARS.to_vec()).prop_map(str::to_string);
    if ops.is_empty() {
        return leaf.boxed();
    }
    leaf.prop_recursive(depth, 16, 3, move |inner| {
        let ops = ops.clone();
        (proptest::sample::select(ops), proptest::collection::vec(inner, 3)).prop_map(|((name, k), args)| {
            if k == 0 {
                name
            } else {
                format!("{name}({})", args[..k].join(", "))
            }
        })
    })
    .boxed()
}

fn hypothesis(met: bool, r: (i64, i64)) -> String {
    if met {
        format!("d(x, y) <= {}/{}", r.0, r.1)
    } else {
        "x <= y".to_string()
    }
}

fn theory_text() -> impl Strategy<Value = String> {
    shape().prop_flat_map(|s| {
        let numbered: Vec<(String, usize)> = s.ops.iter().filter_map(|(n, a)| a.map(|k| (n.clone(), k))).collect();
        let axiom = (term(numbered.clone(), 3), term(numbered, 3), rational(), any::<bool>(), 0u8..3);
        (Just(s), rational(), proptest::collection::vec(axiom, 0..4))
    })
    .prop_map(|(s, r, axioms)| {
        let mut text = format!("theory t over {} {{\n", if s.met { "met" } else { "pos" });
        for (name, arity) in &s.ops {
            match arity {
                Some(k) => text.push_str(&format!("op {name} : {k};\n")),
                None => text.push_str(&format!("op {name} : [x, y | {}];\n", hypothesis(s.met, r))),
            }
        }
        for (i, (a, b, e, hyp, kind)) in axioms.into_iter().enumerate() {
            let ctx = if hyp {
                format!("[x, y, z | {}]", hypothesis(s.met, e))
            } else {
                "[x, y, z]".to_string()
            };
            let line = match (kind, s.met) {
                (1, false) => format!("ineq a{i} : context {ctx} |- {a} <= {b};\n"),
                (1, true) => format!("qeq a{i} : context {ctx} |- d({a}, {b}) <= {}/{};\n", e.0, e.1),
                _ => format!("eq a{i} : context {ctx} |- {a} = {b};\n"),
            };
            text.push_str(&line);
        }
        text.push('}');
        text
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_stable(text in theory_text()) {
        let t = parse_theory(&text).unwrap();
        let rendered = render_theory(&t);
        let again = parse_theory(&rendered).unwrap();
        prop_assert_eq!(&again, &t);
        prop_assert_eq!(render_theory(&again), rendered);
    }

    #[test]
    fn rationals_survive_round_trips(num in 1i64..1000, den in 1i64..1000) {
        let d = Dist::ratio(num, den);
        prop_assert_eq!(d.to_string().parse::<Dist>().unwrap(), d);
        let text = format!("theory t over met {{ op u : 1; qeq a : context [x, y | d(x, y) <= {num}/{den}] |- d(u(x), u(y)) <= {num}/{den}; }}");
        let t = parse_theory(&text).unwrap();
        let again = parse_theory(&render_theory(&t)).unwrap();
        prop_assert_eq!(again, t);
    }

    #[test]
    fn equations_round_trip(a in term(vec![("m".into(), 2), ("e".into(), 0)], 3), b in term(vec![("m".into(), 2), ("e".into(), 0)], 3)) {
        let t = parse_theory("theory t over pos { op m : 2; op e : 0; }").unwrap();
        let text = format!("contextY [*] ; contextX [x, y, z | x <= y] |- {a} == {b}");
        let e = parse_equation_raw(&text, &t).unwrap();
        let rendered = render_equation(&e);
        let again = parse_equation_raw(&rendered, &t).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(render_equation(&again), rendered);
    }

    #[test]
    fn truncated_input_is_an_error_not_a_panic(text in theory_text(), cut in 0usize..400) {
        let cut = cut.min(text.len());
        if cut < text.len() {
            prop_assert!(parse_theory(&text[..cut]).is_err());
        }
    }
}
