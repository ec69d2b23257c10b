use std::sync::Arc;

use wb_core::algebra::{enumerate_algebras, Algebra};
use wb_core::factor::is_surjection;
use wb_core::freeterm::{monad_map, Deduction};
use wb_core::limits::Limits;
use wb_core::suite::samples;
use wb_core::theory::{parse_context, Context, Term, Theory};
use wb_core::vbase::{enumerate_morphisms, enumerate_objects, Backend, FiniteObject, Morphism};

/// Every assignment of the context's variables into `alg` that respects
/// the context's structure.
fn assignments(alg: &Algebra, ctx: &Context) -> Vec<Vec<usize>> {
    let limits = Limits::default();
    let x = ctx.object.clone();
    let c = alg.carrier.clone();
    enumerate_morphisms(&x, &c, &limits)
        .unwrap()
        .into_iter()
        .map(|m| m.points().to_vec())
        .collect()
}

fn eval(alg: &Algebra, ctx: &Context, t: &Term, a: &[usize]) -> usize {
    alg.evaluate(t, &|v| ctx.index_of(v).map(|i| a[i])).unwrap()
}

fn models(theory: &Arc<Theory>) -> Vec<Algebra> {
    enumerate_algebras(theory, 3, &Limits::default()).unwrap()
}

#[test]
fn derived_judgments_hold_in_every_small_model_pos() {
    let theory = samples::om();
    let algebras = models(&theory);
    assert!(algebras.len() > 1);
    let ctx = parse_context("[x, y | x <= y]", Backend::Pos).unwrap();
    let ded = Deduction::run(&theory, &ctx, 2, &Limits::default()).unwrap();
    let terms: Vec<usize> = ded.well_formed().collect();
    for alg in &algebras {
        for a in assignments(alg, &ctx) {
            let vals: Vec<usize> = terms.iter().map(|&t| eval(alg, &ctx, &ded.bank.term(t), &a)).collect();
            for (i, &s) in terms.iter().enumerate() {
                for (j, &t) in terms.iter().enumerate() {
                    if ded.equal(s, t) {
                        assert_eq!(vals[i], vals[j], "{} = {}", ded.bank.term(s), ded.bank.term(t));
                    }
                    if ded.leq(s, t) {
                        assert!(alg.carrier.leq(vals[i], vals[j]));
                    }
                }
            }
        }
    }
}

#[test]
fn derived_bounds_hold_in_every_small_model_met() {
    let theory = samples::unary();
    let algebras = models(&theory);
    let ctx = parse_context("[x, y, z | d(x, y) <= 1, d(y, z) <= 2]", Backend::Met).unwrap();
    let ded = Deduction::run(&theory, &ctx, 2, &Limits::default()).unwrap();
    let terms: Vec<usize> = ded.well_formed().collect();
    for alg in &algebras {
        for a in assignments(alg, &ctx) {
            let vals: Vec<usize> = terms.iter().map(|&t| eval(alg, &ctx, &ded.bank.term(t), &a)).collect();
            for (i, &s) in terms.iter().enumerate() {
                for (j, &t) in terms.iter().enumerate() {
                    assert!(alg.carrier.dist(vals[i], vals[j]) <= ded.bound(s, t));
                }
            }
        }
    }
}

#[test]
fn deeper_deduction_keeps_shallow_facts() {
    let limits = Limits::default();
    let theory = samples::om();
    let ctx = parse_context("[x, y | x <= y]", Backend::Pos).unwrap();
    let shallow = Deduction::run(&theory, &ctx, 1, &limits).unwrap();
    let deep = Deduction::run(&theory, &ctx, 2, &limits).unwrap();
    let lift = |t: usize| deep.bank.find(&shallow.bank.term(t)).unwrap();
    for s in shallow.well_formed() {
        assert!(deep.wf[lift(s)]);
        for t in shallow.well_formed() {
            if shallow.equal(s, t) {
                assert!(deep.equal(lift(s), lift(t)));
            }
            if shallow.leq(s, t) {
                assert!(deep.leq(lift(s), lift(t)));
            }
        }
    }
}

#[test]
fn monad_preserves_split_epis() {
    let limits = Limits::default();
    let theory = samples::om();
    let objs: Vec<Arc<FiniteObject>> = enumerate_objects(Backend::Pos, 3, &limits.met_grid).into_iter().map(Arc::new).collect();
    let mut checked = 0;
    for x in &objs {
        for y in &objs {
            for f in enumerate_morphisms(x, y, &limits).unwrap() {
                let sections: Vec<Morphism> = enumerate_morphisms(y, x, &limits)
                    .unwrap()
                    .into_iter()
                    .filter(|s| s.then(&f).unwrap().is_identity())
                    .collect();
                let Some(s) = sections.first() else { continue };
                let (_, _, tf) = monad_map(&theory, &f, 1, &limits).unwrap();
                let (_, _, ts) = monad_map(&theory, s, 1, &limits).unwrap();
                assert!(is_surjection(&tf));
                assert!(ts.then(&tf).unwrap().is_identity());
                checked += 1;
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn monad_map_is_functorial() {
    let limits = Limits::default();
    let theory = samples::om();
    let objs: Vec<Arc<FiniteObject>> = enumerate_objects(Backend::Pos, 2, &limits.met_grid).into_iter().map(Arc::new).collect();
    for x in &objs {
        let (_, _, id) = monad_map(&theory, &Morphism::identity(x), 1, &limits).unwrap();
        assert!(id.is_identity());
        for y in &objs {
            for z in &objs {
                for f in enumerate_morphisms(x, y, &limits).unwrap() {
                    for g in enumerate_morphisms(y, z, &limits).unwrap() {
                        let (_, _, tf) = monad_map(&theory, &f, 1, &limits).unwrap();
                        let (_, _, tg) = monad_map(&theory, &g, 1, &limits).unwrap();
                        let (_, _, tfg) = monad_map(&theory, &f.then(&g).unwrap(), 1, &limits).unwrap();
                        assert!(tf.then(&tg).unwrap().same_map(&tfg));
                    }
                }
            }
        }
    }
}
