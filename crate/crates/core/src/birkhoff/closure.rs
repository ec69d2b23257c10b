use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{algebra_key, product_algebra, quotients, split_section, subalgebras, terminal_algebra, Algebra, AlgebraKey};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::vbase::{enumerate_constrained, enumerate_objects, FiniteObject, Morphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClosureOp {
    Products,
    InjSubalgebras,
    SplitQuotients,
    MuPureQuotients,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureSpec {
    pub ops: BTreeSet<ClosureOp>,
    /// Constructions with larger carriers are dropped.
    pub max_carrier: usize,
    /// Size bound on the test objects of the μ-purity check.
    pub mu_cap: usize,
    pub max_rounds: usize,
}

impl ClosureSpec {
    pub fn new(ops: impl IntoIterator<Item = ClosureOp>, max_carrier: usize, mu_cap: usize) -> Result<ClosureSpec> {
        let ops: BTreeSet<ClosureOp> = ops.into_iter().collect();
        if ops.is_empty() {
            return Err(Error::Shape("a closure needs at least one operator".into()));
        }
        Ok(ClosureSpec {
            ops,
            max_carrier,
            mu_cap,
            max_rounds: 16,
        })
    }

    /// Products, injective subalgebras and split quotients.
    pub fn surj_birkhoff(max_carrier: usize) -> ClosureSpec {
        ClosureSpec::new([ClosureOp::Products, ClosureOp::InjSubalgebras, ClosureOp::SplitQuotients], max_carrier, 0)
            .expect("nonempty")
    }

    /// Products, injective subalgebras and μ-pure quotients.
    pub fn mu_birkhoff(max_carrier: usize, mu_cap: usize) -> ClosureSpec {
        ClosureSpec::new([ClosureOp::Products, ClosureOp::InjSubalgebras, ClosureOp::MuPureQuotients], max_carrier, mu_cap)
            .expect("nonempty")
    }
}

/// Does every morphism from an object of size `≤ mu_cap` (and from
/// `cod(f)` itself) into `cod(f)` factor through `f`?
///
/// With `cod(f)` among the test objects this coincides with `f` being a
/// split epimorphism; the coincidence is checked and a mismatch is an error.
pub fn is_mu_pure(f: &Morphism, mu_cap: usize, limits: &Limits) -> Result<bool> {
    let cod = f.cod();
    let mut tests: Vec<Arc<FiniteObject>> = vec![cod.clone()];
    tests.extend(enumerate_objects(f.backend(), mu_cap, &limits.met_grid).into_iter().map(Arc::new));
    let mut pure = true;
    'outer: for k in &tests {
        limits.check_maps("is_mu_pure", k.len(), cod.len())?;
        let mut all = true;
        enumerate_constrained(k, cod, |_, _| true, |h| {
            if !factors_through(&h, f) {
                all = false;
            }
            all
        });
        if !all {
            pure = false;
            break 'outer;
        }
    }
    let split = split_section(f).is_some();
    if pure != split {
        return Err(Error::Invariant(format!(
            "μ-purity ({pure}) and splitness ({split}) disagree on a finite morphism"
        )));
    }
    Ok(pure)
}

/// Is there `g` with `g` followed by `f` equal to `h`?
fn factors_through(h: &Morphism, f: &Morphism) -> bool {
    let mut found = false;
    enumerate_constrained(h.dom(), f.dom(), |i, v| f.apply(v) == h.apply(i), |g| {
        found = g.then(f).is_ok_and(|gf| gf.same_map(h));
        !found
    });
    found
}

/// The class extended by one application of each selected operator,
/// one algebra per isomorphism class, ordered by canonical key.
pub fn closure_step(class: &[Algebra], spec: &ClosureSpec, limits: &Limits) -> Result<Vec<Algebra>> {
    let Some(first) = class.first() else {
        return Ok(Vec::new());
    };
    let theory = first.theory.clone();
    if class.iter().any(|a| *a.theory != *theory) {
        return Err(Error::Shape("closure of algebras of different theories".into()));
    }
    let mut out: BTreeMap<AlgebraKey, Algebra> = BTreeMap::new();
    for a in class {
        out.entry(algebra_key(a)).or_insert_with(|| a.clone());
    }
    let mut fresh: Vec<Algebra> = Vec::new();
    if spec.ops.contains(&ClosureOp::Products) {
        fresh.push(terminal_algebra(&theory));
        let pairs: Vec<(usize, usize)> = (0..class.len())
            .flat_map(|i| (i..class.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| class[i].len() * class[j].len() <= spec.max_carrier)
            .collect();
        let prods: Vec<Result<Algebra>> = pairs
            .par_iter()
            .map(|&(i, j)| product_algebra(&[class[i].clone(), class[j].clone()], limits).map(|(p, _)| p))
            .collect();
        for p in prods {
            fresh.push(p?);
        }
    }
    let per_member: Vec<Result<Vec<Algebra>>> = class
        .par_iter()
        .map(|a| {
            let mut got = Vec::new();
            if spec.ops.contains(&ClosureOp::InjSubalgebras) {
                got.extend(subalgebras(a, limits)?.into_iter().map(|(s, _)| s));
            }
            let split = spec.ops.contains(&ClosureOp::SplitQuotients);
            let pure = spec.ops.contains(&ClosureOp::MuPureQuotients);
            if split || pure {
                for q in quotients(a, limits)? {
                    if (split && q.section.is_some()) || (pure && is_mu_pure(&q.map, spec.mu_cap, limits)?) {
                        got.push(q.algebra);
                    }
                }
            }
            Ok(got)
        })
        .collect();
    for got in per_member {
        fresh.extend(got?);
    }
    for a in fresh {
        if a.len() <= spec.max_carrier {
            out.entry(algebra_key(&a)).or_insert(a);
        }
    }
    Ok(out.into_values().collect())
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub members: Vec<Algebra>,
    pub rounds: usize,
    /// Whether a fixpoint was reached within `max_rounds`.
    pub saturated: bool,
}

pub fn closure(class: &[Algebra], spec: &ClosureSpec, limits: &Limits) -> Result<ClosureResult> {
    let mut members = closure_step(class, &ClosureSpec { ops: BTreeSet::new(), ..spec.clone() }, limits)?;
    for round in 1..=spec.max_rounds {
        let next = closure_step(&members, spec, limits)?;
        if next.len() == members.len() {
            return Ok(ClosureResult {
                members: next,
                rounds: round,
                saturated: true,
            });
        }
        members = next;
    }
    Ok(ClosureResult {
        members,
        rounds: spec.max_rounds,
        saturated: false,
    })
}
