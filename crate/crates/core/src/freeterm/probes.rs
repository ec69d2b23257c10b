use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::is_surjection;
use crate::limits::Limits;
use crate::theory::{render_context, Context, Term, Theory};
use crate::vbase::{enumerate_morphisms, enumerate_objects, FiniteObject, Morphism};

use super::bank::TermBank;
use super::engine::Deduction;

#[derive(Clone, Debug, Serialize)]
pub struct DiscreteReport {
    pub holds: bool,
    pub depth: usize,
    pub size_bound: usize,
    pub contexts_checked: usize,
    /// `(context, term)`: a well-formed term over the context that is not
    /// derivably equal to any term over its discretization.
    pub witness: Option<(String, String)>,
}

/// Does every depth-`≤ depth` term over every context up to `size_bound`
/// factor through the discretization of its context?
pub fn check_discrete(theory: &Theory, depth: usize, size_bound: usize, limits: &Limits) -> Result<DiscreteReport> {
    let objects = enumerate_objects(theory.backend(), size_bound, &limits.met_grid);
    let mut checked = 0;
    for x in &objects {
        checked += 1;
        let ctx = Context::from_object(x)?;
        if let Some(t) = undiscrete_term(theory, &ctx, depth, limits)? {
            return Ok(DiscreteReport {
                holds: false,
                depth,
                size_bound,
                contexts_checked: checked,
                witness: Some((render_context(&ctx), t.to_string())),
            });
        }
    }
    Ok(DiscreteReport {
        holds: true,
        depth,
        size_bound,
        contexts_checked: checked,
        witness: None,
    })
}

/// First well-formed term over `ctx` with no derivably equal term over the
/// discretization of `ctx`.
pub(crate) fn undiscrete_term(theory: &Theory, ctx: &Context, depth: usize, limits: &Limits) -> Result<Option<Term>> {
    // Discrete arities: every term is already a term over the discretization.
    if theory.signature.all_discrete() {
        return Ok(None);
    }
    let bank = TermBank::generate(&ctx.vars, &theory.signature, depth, limits.max_terms)?;
    let ctx0 = Context::discrete(ctx.backend(), ctx.vars.clone())?;
    let ded = Deduction::with_bank(theory, ctx, bank.clone(), depth)?;
    let ded0 = Deduction::with_bank(theory, &ctx0, bank, depth)?;
    // Same variables, same signature: both banks number terms identically.
    let from_x0: Vec<usize> = ded0.well_formed().collect();
    for t in ded.well_formed() {
        if ded0.wf[t] {
            continue;
        }
        if !from_x0.iter().any(|&u| ded.equal(u, t)) {
            return Ok(Some(ded.bank.term(t)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityFailure {
    pub domain: String,
    pub codomain: String,
    pub map: Vec<(String, String)>,
    /// A term over the codomain outside the image of `T_d(f)`.
    pub term: String,
}

/// Is `T_d(f)` surjective on terms? `None` if so, else an uncovered term.
///
/// A term `t` over the codomain is covered if `t∘s` is well-formed over the
/// domain for some section `s` of `f` (its renaming is `t` itself), or
/// failing that if some well-formed domain term renames to a term
/// derivably equal to `t`.
pub fn monad_surjectivity(theory: &Theory, f: &Morphism, depth: usize, limits: &Limits) -> Result<Option<SurjectivityFailure>> {
    if !is_surjection(f) {
        return Err(Error::Shape("monad_surjectivity needs a surjection".into()));
    }
    let cx = Context::from_object(f.dom())?;
    let cy = Context::from_object(f.cod())?;
    let discrete = theory.signature.all_discrete();
    let cap = if discrete { limits.max_enumerated_terms } else { limits.max_terms };
    let bx = TermBank::generate(&cx.vars, &theory.signature, depth, cap)?;
    let by = TermBank::generate(&cy.vars, &theory.signature, depth, cap)?;
    let (dx, dy) = if discrete {
        (None, None)
    } else {
        (
            Some(Deduction::with_bank(theory, &cx, bx.clone(), depth)?),
            Some(Deduction::with_bank(theory, &cy, by.clone(), depth)?),
        )
    };
    let wf_x = |s: usize| dx.as_ref().is_none_or(|d| d.wf[s]);
    let wf_y = |t: usize| dy.as_ref().is_none_or(|d| d.wf[t]);
    let image = bx.transport(&by, f.points());
    let pulls: Vec<Vec<Option<usize>>> = sections(f, 64).iter().map(|s| by.transport(&bx, s)).collect();
    for t in 0..by.len() {
        if !wf_y(t) {
            continue;
        }
        let mut covered = pulls
            .iter()
            .any(|p| p[t].is_some_and(|s| wf_x(s) && image[s] == Some(t)));
        if !covered {
            if let Some(dy) = &dy {
                covered = (0..bx.len()).any(|s| wf_x(s) && image[s].is_some_and(|u| dy.wf[u] && dy.equal(u, t)));
            }
        }
        if !covered {
            return Ok(Some(SurjectivityFailure {
                domain: render_context(&cx),
                codomain: render_context(&cy),
                map: (0..f.dom().len())
                    .map(|i| (f.dom().label(i).to_string(), f.cod().label(f.apply(i)).to_string()))
                    .collect(),
                term: by.term(t).to_string(),
            }));
        }
    }
    Ok(None)
}

/// Up to `cap` point sections of a surjection, in lexicographic order.
fn sections(f: &Morphism, cap: usize) -> Vec<Vec<usize>> {
    let fibres: Vec<Vec<usize>> = (0..f.cod().len())
        .map(|y| (0..f.dom().len()).filter(|&x| f.apply(x) == y).collect())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; fibres.len()];
    loop {
        out.push(pick.iter().zip(&fibres).map(|(&k, fib)| fib[k]).collect());
        if out.len() >= cap {
            break;
        }
        let mut k = fibres.len();
        let advanced = loop {
            if k == 0 {
                break false;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < fibres[k].len() {
                break true;
            }
            pick[k] = 0;
        };
        if !advanced {
            break;
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub holds: bool,
    pub depth: usize,
    pub size_bound: usize,
    pub surjections_checked: usize,
    pub failure: Option<SurjectivityFailure>,
    pub discrete: DiscreteReport,
    /// Whether the verdict matches the discreteness check at the same bounds.
    pub agrees_with_discreteness: bool,
}

/// `T_d(f)` surjective for every surjection `f` between objects of size
/// `≤ size_bound`, cross-checked against [`check_discrete`].
pub fn preserves_surjections_probe(theory: &Theory, depth: usize, size_bound: usize, limits: &Limits) -> Result<SurjectivityReport> {
    let objects: Vec<Arc<FiniteObject>> = enumerate_objects(theory.backend(), size_bound, &limits.met_grid)
        .into_iter()
        .map(Arc::new)
        .collect();
    let mut surjections = Vec::new();
    for x in &objects {
        for y in &objects {
            surjections.extend(enumerate_morphisms(x, y, limits)?.into_iter().filter(is_surjection));
        }
    }
    let verdicts: Vec<Result<Option<SurjectivityFailure>>> = surjections
        .par_iter()
        .map(|f| monad_surjectivity(theory, f, depth, limits))
        .collect();
    let mut failure = None;
    for v in verdicts {
        if let Some(fail) = v? {
            failure = Some(fail);
            break;
        }
    }
    let discrete = check_discrete(theory, depth, size_bound, limits)?;
    let holds = failure.is_none();
    Ok(SurjectivityReport {
        holds,
        depth,
        size_bound,
        surjections_checked: surjections.len(),
        failure,
        agrees_with_discreteness: holds == discrete.holds,
        discrete,
    })
}
