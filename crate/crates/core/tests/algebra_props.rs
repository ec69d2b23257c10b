use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use wb_core::algebra::{
    algebra_from_json, algebra_key, algebra_to_json, cotensor_algebra, enumerate_algebras, is_isomorphic_algebra,
    product_algebra, split_quotients, subalgebras, Algebra,
};
use wb_core::freeterm::{parse_equation, TermBank};
use wb_core::limits::Limits;
use wb_core::suite::samples;
use wb_core::theory::{Equation, Theory};
use wb_core::vbase::{enumerate_morphisms, enumerate_objects, Backend, FiniteObject, Morphism, Structure};

const CANDIDATES: [&str; 6] = [
    "contextY [*] ; contextX [x, y] |- mul(x, y) == mul(y, x)",
    "contextY [*] ; contextX [x] |- x == mul(x, x)",
    "contextY [*] ; contextX [x, y] |- mul(x, y) == x",
    "contextY [*] ; contextX [x, y] |- mul(x, mul(x, y)) == mul(x, y)",
    "contextY [*] ; contextX [x, y | x <= y] |- mul(x, y) == y",
    "contextY [*] ; contextX [x, y | x <= y] |- mul(y, x) == mul(x, y)",
];

fn osg() -> Arc<Theory> {
    samples::osg()
}

fn candidates(theory: &Theory) -> &'static [Equation] {
    static CELL: OnceLock<Vec<Equation>> = OnceLock::new();
    CELL.get_or_init(|| {
        CANDIDATES
            .iter()
            .map(|t| parse_equation(t, theory, 2, &Limits::default()).unwrap())
            .collect()
    })
}

fn small_models() -> &'static Vec<Algebra> {
    static CELL: OnceLock<Vec<Algebra>> = OnceLock::new();
    CELL.get_or_init(|| enumerate_algebras(&osg(), 3, &Limits::default()).unwrap())
}

/// The same algebra with element `i` moved to position `p[i]`.
fn relabel(a: &Algebra, p: &[usize]) -> Algebra {
    let n = a.len();
    let mut inv = vec![0; n];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    let c = &a.carrier;
    let labels: Vec<String> = (0..n).map(|k| c.label(inv[k]).to_string()).collect();
    let structure = match c.structure() {
        Structure::Pos(_) => Structure::Pos((0..n).map(|i| (0..n).map(|j| c.leq(inv[i], inv[j])).collect()).collect()),
        Structure::Met(_) => Structure::Met((0..n).map(|i| (0..n).map(|j| c.dist(inv[i], inv[j])).collect()).collect()),
        _ => unreachable!(),
    };
    let carrier = Arc::new(FiniteObject::new(labels, structure).unwrap());
    Algebra::from_fn(a.theory.clone(), carrier, |op, args| {
        let old: Vec<usize> = args.iter().map(|&x| inv[x]).collect();
        p[a.apply(op, &old)]
    })
    .unwrap()
}

fn model_and_permutation() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..small_models().len()).prop_flat_map(|k| {
        let n = small_models()[k].len();
        (Just(k), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn satisfaction_is_invariant_under_isomorphism((k, p) in model_and_permutation()) {
        let a = &small_models()[k];
        let b = relabel(a, &p);
        prop_assert!(b.is_algebra());
        prop_assert_eq!(algebra_key(a), algebra_key(&b));
        prop_assert!(is_isomorphic_algebra(a, &b));
        let h = Morphism::new(a.carrier.clone(), b.carrier.clone(), p.clone(), vec![]).unwrap();
        prop_assert!(a.is_homomorphism(&b, &h));
        for e in candidates(&a.theory) {
            prop_assert_eq!(a.satisfies(e).holds, b.satisfies(e).holds);
        }
    }

    #[test]
    fn json_round_trips(k in 0..small_models().len()) {
        let a = &small_models()[k];
        let text = algebra_to_json(a).to_string();
        let b = algebra_from_json(&text, &a.theory).unwrap();
        prop_assert_eq!(&b.tables, &a.tables);
        prop_assert_eq!(&*b.carrier, &*a.carrier);
    }
}

#[test]
fn evaluation_commutes_with_homomorphisms() {
    let limits = Limits::default();
    let theory = osg();
    let vars = vec!["x".to_string(), "y".to_string()];
    let bank = TermBank::generate(&vars, &theory.signature, 2, 10_000).unwrap();
    let models: Vec<&Algebra> = small_models().iter().filter(|a| a.len() <= 2).collect();
    let mut homs = 0;
    for a in &models {
        for b in &models {
            for h in enumerate_morphisms(&a.carrier, &b.carrier, &limits).unwrap() {
                if !a.is_homomorphism(b, &h) {
                    continue;
                }
                homs += 1;
                for x in 0..a.len() {
                    for y in 0..a.len() {
                        let va = [x, y];
                        let vb = [h.apply(x), h.apply(y)];
                        for t in 0..bank.len() {
                            let term = bank.term(t);
                            let ea = a.evaluate(&term, &|v| vars.iter().position(|w| w == v).map(|i| va[i])).unwrap();
                            let eb = b.evaluate(&term, &|v| vars.iter().position(|w| w == v).map(|i| vb[i])).unwrap();
                            assert_eq!(h.apply(ea), eb);
                        }
                    }
                }
            }
        }
    }
    assert!(homs > models.len());
}

#[test]
fn constructions_preserve_every_candidate_equation() {
    let limits = Limits::default();
    let theory = osg();
    let eqs = candidates(&theory);
    let models = small_models();
    for e in eqs {
        let sat: Vec<&Algebra> = models.iter().filter(|a| a.satisfies(e).holds).collect();
        for a in &sat {
            for (s, m) in subalgebras(a, &limits).unwrap() {
                assert!(s.is_algebra() && s.satisfies(e).holds);
                assert!(s.is_homomorphism(a, &m));
            }
            for q in split_quotients(a, &limits).unwrap() {
                assert!(q.algebra.is_algebra() && q.algebra.satisfies(e).holds);
                assert!(a.is_homomorphism(&q.algebra, &q.map));
            }
            for b in sat.iter().filter(|b| a.len() * b.len() <= 6) {
                let (p, legs) = product_algebra(&[(*a).clone(), (*b).clone()], &limits).unwrap();
                assert!(p.is_algebra() && p.satisfies(e).holds);
                assert!(p.is_homomorphism(a, &legs[0]) && p.is_homomorphism(b, &legs[1]));
            }
        }
    }
}

#[test]
fn cotensors_preserve_every_candidate_equation() {
    let limits = Limits::default();
    let theory = osg();
    let eqs = candidates(&theory);
    let powers: Vec<Arc<FiniteObject>> = enumerate_objects(Backend::Pos, 2, &limits.met_grid).into_iter().map(Arc::new).collect();
    for a in small_models().iter().filter(|a| a.len() <= 2) {
        for v in &powers {
            let c = cotensor_algebra(v, a, &limits).unwrap();
            assert!(c.is_algebra());
            for e in eqs {
                if a.satisfies(e).holds {
                    assert!(c.satisfies(e).holds);
                }
            }
        }
    }
}
