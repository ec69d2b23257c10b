use std::sync::Arc;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::theory::{render_equation, Context, Equation, Judgment, Term, Theory};
use crate::vbase::{Backend, FiniteObject, Morphism, Structure};

use super::engine::Deduction;

/// Outcome of a single derivation query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derived {
    pub holds: bool,
    /// Least derivable distance bound (quantitative judgments only).
    pub bound: Option<Dist>,
    pub depth: usize,
}

/// Decide a judgment in context at the given depth. `Eq` and `Leq` report
/// derivability; `Dist` also reports the least derivable bound.
pub fn derive(theory: &Theory, ctx: &Context, j: &Judgment, depth: usize, limits: &Limits) -> Result<Derived> {
    let (s, t) = j.sides();
    let needed = s.depth().max(t.depth());
    if needed > depth {
        return Err(Error::DepthExhausted { depth, needed });
    }
    if matches!(j, Judgment::Leq(..)) && theory.backend() != Backend::Pos {
        return Err(Error::Unsupported("inequations need a pos theory".into()));
    }
    if matches!(j, Judgment::Dist(..)) && theory.backend() != Backend::Met {
        return Err(Error::Unsupported("distance judgments need a met theory".into()));
    }
    let ded = Deduction::run(theory, ctx, depth, limits)?;
    let find = |t: &Term| ded.bank.find(t).ok_or_else(|| Error::UnknownVar(t.to_string()));
    let (s, t) = (find(s)?, find(t)?);
    if !ded.wf[s] || !ded.wf[t] {
        return Ok(Derived {
            holds: false,
            bound: None,
            depth,
        });
    }
    Ok(match j {
        Judgment::Eq(..) => Derived {
            holds: ded.equal(s, t),
            bound: None,
            depth,
        },
        Judgment::Leq(..) => Derived {
            holds: ded.leq(s, t),
            bound: None,
            depth,
        },
        Judgment::Dist(_, _, e) => Derived {
            holds: ded.bound(s, t) <= *e,
            bound: Some(ded.bound(s, t)),
            depth,
        },
    })
}

/// Well-formed terms of depth `≤ depth` modulo derivable equality, with the
/// derived order or metric, and the unit `X → carrier`.
#[derive(Clone, Debug)]
pub struct FreeAlgebraApprox {
    pub context: Context,
    pub depth: usize,
    pub carrier: Arc<FiniteObject>,
    pub unit: Morphism,
    /// Representative term of each carrier element.
    pub terms: Vec<Term>,
    /// Carrier element of each well-formed bank term.
    pub class_of: Vec<Option<usize>>,
    pub deduction: Deduction,
}

pub fn free_algebra(theory: &Theory, ctx: &Context, depth: usize, limits: &Limits) -> Result<FreeAlgebraApprox> {
    let ded = Deduction::run(theory, ctx, depth, limits)?;
    build_free(ded, ctx, depth)
}

fn rep_key(t: &Term) -> (usize, String) {
    (t.size(), t.to_string())
}

fn build_free(ded: Deduction, ctx: &Context, depth: usize) -> Result<FreeAlgebraApprox> {
    let live: Vec<usize> = ded.well_formed().collect();
    // Group into derivable-equality classes.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &t in &live {
        match groups.iter_mut().find(|g| ded.equal(g[0], t)) {
            Some(g) => g.push(t),
            None => groups.push(vec![t]),
        }
    }
    let mut reps: Vec<(usize, Term)> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&t| (t, ded.bank.term(t)))
                .min_by_key(|(_, t)| rep_key(t))
                .expect("groups are nonempty")
        })
        .collect();
    reps.sort_by_key(|(_, t)| rep_key(t));
    let mut class_of = vec![None; ded.bank.len()];
    for &t in &live {
        let c = reps.iter().position(|&(r, _)| ded.equal(r, t)).expect("every term has a class");
        class_of[t] = Some(c);
    }
    let labels: Vec<String> = reps.iter().map(|(_, t)| t.to_string()).collect();
    let k = reps.len();
    let structure = match ded.backend {
        Backend::Pos => Structure::Pos((0..k).map(|i| (0..k).map(|j| ded.leq(reps[i].0, reps[j].0)).collect()).collect()),
        Backend::Met => Structure::Met((0..k).map(|i| (0..k).map(|j| ded.bound(reps[i].0, reps[j].0)).collect()).collect()),
        b => return Err(Error::Unsupported(format!("free algebras over {b}"))),
    };
    let carrier = Arc::new(FiniteObject::new(labels, structure)?);
    let points = (0..ctx.len()).map(|v| class_of[ded.bank.var(v)].expect("variables are well-formed")).collect();
    let unit = Morphism::new(ctx.object.clone(), carrier.clone(), points, vec![])?;
    Ok(FreeAlgebraApprox {
        context: ctx.clone(),
        depth,
        carrier,
        unit,
        terms: reps.into_iter().map(|(_, t)| t).collect(),
        class_of,
        deduction: ded,
    })
}

/// `T_d(f)`: rename variables along `f` and pass to classes. The domain and
/// codomain of `f` are read as contexts over their labels.
pub fn monad_map(theory: &Theory, f: &Morphism, depth: usize, limits: &Limits) -> Result<(FreeAlgebraApprox, FreeAlgebraApprox, Morphism)> {
    let cx = Context::from_object(f.dom())?;
    let cy = Context::from_object(f.cod())?;
    let fx = free_algebra(theory, &cx, depth, limits)?;
    let fy = free_algebra(theory, &cy, depth, limits)?;
    let m = transport_classes(&fx, &fy, f.points())?;
    Ok((fx, fy, m))
}

/// The carrier map induced by renaming variable `v` to `rename[v]`.
pub fn transport_classes(fx: &FreeAlgebraApprox, fy: &FreeAlgebraApprox, rename: &[usize]) -> Result<Morphism> {
    let (bx, by) = (&fx.deduction.bank, &fy.deduction.bank);
    let image = bx.transport(by, rename);
    let mut points = vec![usize::MAX; fx.carrier.len()];
    for t in fx.deduction.well_formed() {
        let c = fx.class_of[t].unwrap();
        let u = image[t].ok_or_else(|| Error::Invariant(format!("no image for {}", bx.term(t))))?;
        let d = fy.class_of[u].ok_or_else(|| Error::Invariant(format!("image of {} is not well-formed", bx.term(t))))?;
        if points[c] != usize::MAX && points[c] != d {
            return Err(Error::Invariant(format!("renaming does not respect the class of {}", bx.term(t))));
        }
        points[c] = d;
    }
    Morphism::new(fx.carrier.clone(), fy.carrier.clone(), points, vec![])
}

/// Check that both families of `e` are well-formed and respect the
/// structure of `Y`, so that they define morphisms `FY → FX`.
pub fn certify_equation(theory: &Theory, e: &Equation, depth: usize, limits: &Limits) -> Result<()> {
    let needed = e.p.iter().chain(&e.q).map(Term::depth).max().unwrap_or(0);
    let depth = depth.max(needed);
    let ded = Deduction::run(theory, &e.x, depth, limits)?;
    let uncertified = |detail: String| Error::UncertifiedFamily { depth, detail };
    for (name, fam) in [("p", &e.p), ("q", &e.q)] {
        let ids: Vec<usize> = fam
            .iter()
            .map(|t| ded.bank.find(t).ok_or_else(|| uncertified(format!("{t} is not a term over the context"))))
            .collect::<Result<_>>()?;
        for (t, &id) in fam.iter().zip(&ids) {
            if !ded.wf[id] {
                return Err(uncertified(format!("{t} is not well-formed")));
            }
        }
        let y = &e.y.object;
        for i in 0..y.len() {
            for j in 0..y.len() {
                if i == j {
                    continue;
                }
                let ok = match theory.backend() {
                    Backend::Pos => !y.leq(i, j) || ded.leq(ids[i], ids[j]),
                    _ => ded.bound(ids[i], ids[j]) <= y.dist(i, j),
                };
                if !ok {
                    let rel = match theory.backend() {
                        Backend::Pos => format!("{} <= {}", fam[i], fam[j]),
                        _ => format!("d({}, {}) <= {}", fam[i], fam[j], y.dist(i, j)),
                    };
                    return Err(uncertified(format!(
                        "family {name} needs {rel} (from {} in contextY)",
                        crate::theory::render_context(&e.y)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Parse and certify an equation.
pub fn parse_equation(text: &str, theory: &Theory, depth: usize, limits: &Limits) -> Result<Equation> {
    let e = crate::theory::parse_equation_raw(text, theory)?;
    certify_equation(theory, &e, depth, limits)?;
    debug_assert_eq!(crate::theory::parse_equation_raw(&render_equation(&e), theory).as_ref(), Ok(&e));
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{parse_context, parse_theory};
    use crate::vbase::{enumerate_constrained, shortest_paths};

    fn l() -> Limits {
        Limits::default()
    }

    const OM: &str = "theory om over pos {
        op mul : 2; op e : 0;
        eq assoc : context [x, y, z] |- mul(mul(x, y), z) = mul(x, mul(y, z));
        eq lunit : context [x] |- mul(e, x) = x;
        eq runit : context [x] |- mul(x, e) = x;
        eq comm : context [x <= y] |- mul(x, y) = mul(y, x); }";

    #[test]
    fn derive_examples() {
        let t = parse_theory("theory e over pos { }").unwrap();
        let c = parse_context("[x <= y]", Backend::Pos).unwrap();
        let j = Judgment::Leq(Term::var("x"), Term::var("y"));
        assert!(derive(&t, &c, &j, 0, &l()).unwrap().holds);
        let m = parse_theory("theory e over met { op u : 1; }").unwrap();
        let c = parse_context("[x]", Backend::Met).unwrap();
        let tt = Term::app("u", vec![Term::var("x")]);
        let j = Judgment::Dist(tt.clone(), tt, Dist::ZERO);
        assert_eq!(derive(&m, &c, &j, 1, &l()).unwrap().bound, Some(Dist::ZERO));
        assert!(matches!(derive(&m, &c, &j, 0, &l()), Err(Error::DepthExhausted { depth: 0, needed: 1 })));
    }

    #[test]
    fn variable_fragment_matches_shortest_paths() {
        let m = parse_theory("theory e over met { op u : 1; }").unwrap();
        let c = parse_context("[d(a,b) <= 1, d(b,c) <= 2, d(a,c) <= 7/2, d(c,e) <= 1/3]", Backend::Met).unwrap();
        let ded = Deduction::run(&m, &c, 0, &l()).unwrap();
        let n = c.len();
        let mut d = vec![vec![Dist::Inf; n]; n];
        for i in 0..n {
            d[i][i] = Dist::ZERO;
        }
        for h in &c.hyps {
            if let crate::theory::Hypothesis::Dist(a, b, e) = h {
                let (i, j) = (c.index_of(a).unwrap(), c.index_of(b).unwrap());
                d[i][j] = d[i][j].min(*e);
                d[j][i] = d[i][j];
            }
        }
        shortest_paths(&mut d);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(ded.bound(ded.bank.var(i), ded.bank.var(j)), d[i][j]);
            }
        }
    }

    #[test]
    fn empty_theory_free_algebra_is_the_context() {
        let t = parse_theory("theory e over pos { }").unwrap();
        let c = parse_context("[x <= y, z]", Backend::Pos).unwrap();
        let f = free_algebra(&t, &c, 3, &l()).unwrap();
        assert_eq!(f.carrier.len(), 3);
        assert!(f.unit.is_iso());
    }

    #[test]
    fn ordered_monoid_on_one_point() {
        let t = parse_theory(OM).unwrap();
        let c = parse_context("[x]", Backend::Pos).unwrap();
        let f1 = free_algebra(&t, &c, 1, &l()).unwrap();
        // Depth 1 holds only e, x and x·x.
        assert_eq!(f1.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["e()", "x", "mul(x, x)"]);
        let f2 = free_algebra(&t, &c, 2, &l()).unwrap();
        // Words x^0..x^4 reachable at depth 2.
        assert_eq!(f2.carrier.len(), 5);
        assert!(f2.carrier.is_discrete());
    }

    #[test]
    fn depth_inclusion_is_a_morphism() {
        let t = parse_theory(OM).unwrap();
        let c = parse_context("[x <= y]", Backend::Pos).unwrap();
        let f1 = free_algebra(&t, &c, 1, &l()).unwrap();
        let f2 = free_algebra(&t, &c, 2, &l()).unwrap();
        let id: Vec<usize> = (0..c.len()).collect();
        let m = transport_classes(&f1, &f2, &id).unwrap();
        assert_eq!(m.dom().len(), f1.carrier.len());
    }

    #[test]
    fn monad_map_identity_and_split_epi() {
        let t = parse_theory(OM).unwrap();
        let x = Arc::new(FiniteObject::chain(2));
        let (_, _, m) = monad_map(&t, &Morphism::identity(&x), 2, &l()).unwrap();
        assert!(m.is_identity());
        let three = Arc::new(FiniteObject::chain(3));
        let f = Morphism::new(three.clone(), x.clone(), vec![0, 0, 1], vec![]).unwrap();
        let (_, _, m) = monad_map(&t, &f, 2, &l()).unwrap();
        assert!(crate::factor::is_surjection(&m));
    }

    #[test]
    fn certification() {
        let t = parse_theory(OM).unwrap();
        assert!(parse_equation("contextY [*] ; contextX [x, y] |- mul(x,y) == mul(y,x)", &t, 2, &l()).is_ok());
        let e = parse_equation("contextY [a, b] ; contextX [x, y] |- (x, y) == (mul(x,y), e)", &t, 2, &l()).unwrap();
        assert_eq!(e.p.len(), 2);
        let err = parse_equation("contextY [a <= b] ; contextX [x, y] |- (x, y) == (x, y)", &t, 2, &l()).unwrap_err();
        assert!(matches!(err, Error::UncertifiedFamily { .. }));
        assert!(parse_equation("contextY [a <= b] ; contextX [x <= y] |- (x, y) == (x, mul(y, e))", &t, 2, &l()).is_ok());
        let ch = parse_theory("theory ch over pos { op s : [a, b | a <= b]; }").unwrap();
        assert!(matches!(
            parse_equation("contextY [*] ; contextX [x, y] |- s(x, y) == s(x, y)", &ch, 1, &l()),
            Err(Error::UncertifiedFamily { .. })
        ));
    }

    #[test]
    fn derivable_inequations_hold_in_a_model() {
        // max on the 3-chain with unit 0 models the ordered-monoid theory.
        let t = parse_theory(OM).unwrap();
        let c = parse_context("[x <= y, z]", Backend::Pos).unwrap();
        let ded = Deduction::run(&t, &c, 2, &l()).unwrap();
        let chain = Arc::new(FiniteObject::chain(3));
        let ctx = c.object.clone();
        fn eval(t: &Term, a: &[usize], c: &Context) -> usize {
            match t {
                Term::Var(v) => a[c.index_of(v).unwrap()],
                Term::App(op, _) if op == "e" => 0,
                Term::App(_, args) => eval(&args[0], a, c).max(eval(&args[1], a, c)),
            }
        }
        enumerate_constrained(&ctx, &chain, |_, _| true, |a| {
            for s in ded.well_formed() {
                for u in ded.well_formed() {
                    if ded.leq(s, u) {
                        assert!(eval(&ded.bank.term(s), a.points(), &c) <= eval(&ded.bank.term(u), a.points(), &c));
                    }
                }
            }
            true
        });
    }
}
