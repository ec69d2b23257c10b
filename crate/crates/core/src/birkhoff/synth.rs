use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, UNDEF};
use crate::error::{Error, Result};
use crate::freeterm::{Deduction, Node, TermBank};
use crate::limits::Limits;
use crate::theory::{render_equation, Context, Equation, Term, Theory};
use crate::vbase::{canonical_form, coproduct, enumerate_constrained, enumerate_objects, FiniteObject};

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisSpec {
    /// Largest component of a context.
    pub mu_cap: usize,
    pub depth: usize,
    /// Most components in a context; 1 gives single-component contexts.
    pub max_components: usize,
    /// Most variables in a context.
    pub max_vars: usize,
}

impl SynthesisSpec {
    pub fn new(mu_cap: usize, depth: usize) -> SynthesisSpec {
        SynthesisSpec {
            mu_cap,
            depth,
            max_components: 2,
            max_vars: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthEquation {
    #[serde(skip)]
    pub equation: Equation,
    pub text: String,
    /// Sizes of the components of the context, in order.
    pub components: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationSet {
    pub spec: SynthesisSpec,
    /// Every context is a coproduct of components within `spec.mu_cap`.
    pub clustered: bool,
    pub contexts: usize,
    pub equations: Vec<SynthEquation>,
}

impl EquationSet {
    pub fn equations(&self) -> impl Iterator<Item = &Equation> {
        self.equations.iter().map(|e| &e.equation)
    }

    /// The equations whose context has a single component.
    pub fn single_component(&self) -> EquationSet {
        EquationSet {
            spec: SynthesisSpec {
                max_components: 1,
                ..self.spec.clone()
            },
            clustered: self.clustered,
            contexts: self.contexts,
            equations: self.equations.iter().filter(|e| e.components.len() <= 1).cloned().collect(),
        }
    }

    pub fn satisfied_by(&self, a: &Algebra) -> bool {
        self.equations().all(|e| a.satisfies(e).holds)
    }
}

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn var_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string()))
        .collect()
}

/// Contexts built as coproducts of up to `max_components` components of
/// size `≤ mu_cap`, one per isomorphism class, with their component sizes.
fn clustered_contexts(theory: &Theory, spec: &SynthesisSpec, limits: &Limits) -> Result<Vec<(Context, Vec<usize>)>> {
    let parts: Vec<Arc<FiniteObject>> = enumerate_objects(theory.backend(), spec.mu_cap, &limits.met_grid)
        .into_iter()
        .filter(|o| !o.is_empty())
        .map(Arc::new)
        .collect();
    let mut seen: BTreeMap<(usize, Vec<crate::dist::Dist>), ()> = BTreeMap::new();
    let mut out = Vec::new();
    // Multisets of component indices, nondecreasing.
    let mut stack: Vec<Vec<usize>> = (0..parts.len()).map(|i| vec![i]).collect();
    stack.reverse();
    let mut combos = Vec::new();
    while let Some(c) = stack.pop() {
        let total: usize = c.iter().map(|&i| parts[i].len()).sum();
        if total > spec.max_vars {
            continue;
        }
        combos.push(c.clone());
        if c.len() < spec.max_components {
            let last = *c.last().unwrap();
            for i in (last..parts.len()).rev() {
                let mut d = c.clone();
                d.push(i);
                stack.push(d);
            }
        }
    }
    combos.sort_by_key(|c| (c.iter().map(|&i| parts[i].len()).sum::<usize>(), c.len(), c.clone()));
    for c in combos {
        let comps: Vec<Arc<FiniteObject>> = c.iter().map(|&i| parts[i].clone()).collect();
        let x = coproduct(&comps)?.object;
        let key = (x.len(), canonical_form(&x).0);
        if seen.insert(key, ()).is_some() {
            continue;
        }
        let x = x.with_labels(var_names(x.len()))?;
        out.push((Context::from_object(&x)?, comps.iter().map(|p| p.len()).collect()));
    }
    Ok(out)
}

/// Equations `p = q` between well-formed terms over clustered contexts
/// that hold in every member of `class`, one equation per derivable class
/// beyond the least one in each group of indistinguishable terms.
///
/// Families are indexed by the one-point context: an equation indexed by a
/// larger context is the conjunction of its components.
pub fn synthesize_equations(theory: &Theory, class: &[Algebra], spec: &SynthesisSpec, limits: &Limits) -> Result<EquationSet> {
    if class.is_empty() {
        return Err(Error::Shape("synthesis needs a nonempty class".into()));
    }
    let contexts = clustered_contexts(theory, spec, limits)?;
    let y = Context::singleton(theory.backend());
    let mut equations = Vec::new();
    for (ctx, components) in &contexts {
        let ded = Deduction::run(theory, ctx, spec.depth, limits)?;
        let live: Vec<usize> = ded.well_formed().collect();
        let profiles = profiles(&ded.bank, &live, ctx, class, limits)?;
        let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
        let mut order: Vec<&[usize]> = Vec::new();
        for (k, p) in profiles.iter().enumerate() {
            let g = groups.entry(p.as_slice()).or_insert_with(|| {
                order.push(p.as_slice());
                Vec::new()
            });
            g.push(live[k]);
        }
        let mut found: Vec<(Term, Term)> = Vec::new();
        for key in order {
            let group = &groups[key];
            // Representatives of the derivable classes inside the group.
            let mut reps: Vec<usize> = Vec::new();
            for &t in group {
                if !reps.iter().any(|&r| ded.equal(r, t)) {
                    reps.push(t);
                }
            }
            if reps.len() < 2 {
                continue;
            }
            let mut terms: Vec<Term> = reps.iter().map(|&r| least_in_class(&ded, group, r)).collect();
            terms.sort_by_key(|t| (t.size(), t.to_string()));
            for t in &terms[1..] {
                found.push((terms[0].clone(), t.clone()));
            }
        }
        found.sort_by_key(|(p, q)| (q.size(), p.to_string(), q.to_string()));
        for (p, q) in found {
            let equation = Equation {
                y: y.clone(),
                x: ctx.clone(),
                p: vec![p],
                q: vec![q],
            };
            equations.push(SynthEquation {
                text: render_equation(&equation),
                equation,
                components: components.clone(),
            });
        }
    }
    Ok(EquationSet {
        spec: spec.clone(),
        clustered: contexts.iter().all(|(_, c)| c.iter().all(|&s| s <= spec.mu_cap)),
        contexts: contexts.len(),
        equations,
    })
}

fn least_in_class(ded: &Deduction, group: &[usize], r: usize) -> Term {
    group
        .iter()
        .filter(|&&t| ded.equal(r, t))
        .map(|&t| ded.bank.term(t))
        .min_by_key(|t| (t.size(), t.to_string()))
        .expect("the representative is in its own class")
}

/// Values of each live term under every assignment into every algebra.
fn profiles(bank: &TermBank, live: &[usize], ctx: &Context, class: &[Algebra], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); live.len()];
    let mut vals = vec![0usize; bank.len()];
    for a in class {
        limits.check_maps("synthesis assignments", ctx.len(), a.len())?;
        enumerate_constrained(&ctx.object, &a.carrier, |_, _| true, |h| {
            for id in 0..bank.len() {
                vals[id] = match bank.node(id) {
                    Node::Var(v) => h.points()[*v],
                    Node::App(op, args) => {
                        let n = a.len();
                        let mut idx = 0usize;
                        let mut undef = false;
                        for &x in args.iter() {
                            if vals[x] == UNDEF {
                                undef = true;
                                break;
                            }
                            idx = idx * n + vals[x];
                        }
                        if undef {
                            UNDEF
                        } else {
                            a.tables[*op][idx]
                        }
                    }
                };
            }
            for (k, &t) in live.iter().enumerate() {
                out[k].push(vals[t]);
            }
            true
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_algebras;
    use crate::theory::parse_theory;
    use crate::vbase::FiniteObject;

    fn l() -> Limits {
        Limits::default()
    }

    fn semilattice() -> (Arc<Theory>, Algebra) {
        let t = Arc::new(parse_theory("theory sg over pos { op mul : 2; eq assoc : context [x, y, z] |- mul(mul(x, y), z) = mul(x, mul(y, z)); }").unwrap());
        let a = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::chain(2)), |_, x| x[0].min(x[1])).unwrap();
        (t, a)
    }

    #[test]
    fn meet_semilattice_laws_appear() {
        let (t, a) = semilattice();
        let set = synthesize_equations(&t, &[a.clone()], &SynthesisSpec::new(2, 2), &l()).unwrap();
        let texts: Vec<&str> = set.equations.iter().map(|e| e.text.as_str()).collect();
        assert!(texts.contains(&"contextY [*] ; contextX [x] |- x == mul(x, x)"), "{texts:?}");
        assert!(texts.contains(&"contextY [*] ; contextX [x, y] |- mul(x, y) == mul(y, x)"), "{texts:?}");
        assert!(set.clustered);
        assert!(set.satisfied_by(&a));
    }

    #[test]
    fn empty_signature_has_no_laws() {
        let t = Arc::new(parse_theory("theory b over pos { }").unwrap());
        let a = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::chain(2)), |_, _| 0).unwrap();
        let set = synthesize_equations(&t, &[a], &SynthesisSpec::new(2, 2), &l()).unwrap();
        assert!(set.equations.is_empty());
        // On an antichain, comparable variables are forced equal.
        let b = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::antichain(2)), |_, _| 0).unwrap();
        let set = synthesize_equations(&t, &[b], &SynthesisSpec::new(2, 2), &l()).unwrap();
        assert_eq!(set.equations[0].text, "contextY [*] ; contextX [x, y | x <= y] |- x == y");
    }

    #[test]
    fn all_small_algebras_give_nothing_new() {
        let t = Arc::new(parse_theory("theory u over pos { op u : 1; }").unwrap());
        let all = enumerate_algebras(&t, 2, &l()).unwrap();
        let set = synthesize_equations(&t, &all, &SynthesisSpec::new(2, 2), &l()).unwrap();
        assert!(set.equations.is_empty(), "{:?}", set.equations.iter().map(|e| &e.text).collect::<Vec<_>>());
    }

    #[test]
    fn larger_class_gives_fewer_equations() {
        let (t, a) = semilattice();
        let max = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::chain(3)), |_, x| x[0].max(x[1])).unwrap();
        let left = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::antichain(2)), |_, x| x[0]).unwrap();
        let spec = SynthesisSpec::new(2, 2);
        let one = synthesize_equations(&t, &[a.clone()], &spec, &l()).unwrap();
        let two = synthesize_equations(&t, &[a, max, left.clone()], &spec, &l()).unwrap();
        assert!(two.equations.len() < one.equations.len());
        assert!(two.satisfied_by(&left));
    }
}
