//! Surjections, injections and the `(Surj, Inj)` factorization.
//!
//! A surjection is a morphism that is surjective on global points of the
//! unit. Injections are the morphisms with the unique right lifting property
//! against every surjection; for `Pos`, `Met` and `MGra` they have closed
//! forms, for `Gra` the predicate is decided by brute-force lifting tests
//! against all surjections between objects up to a size bound.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::vbase::{
    coproduct, copair, enumerate_constrained, enumerate_morphisms, enumerate_objects, hom_points, induced_subobject,
    Backend, FiniteObject, Morphism,
};

/// `e` then `m` with `m ∘ e = original`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub original: Morphism,
    pub epi_part: Morphism,
    pub mono_part: Morphism,
}

/// The commuting square `v∘f = g∘u` and all of its diagonals.
#[derive(Clone, Debug)]
pub struct LiftingReport {
    pub f: Morphism,
    pub g: Morphism,
    pub u: Morphism,
    pub v: Morphism,
    pub diagonals: Vec<Morphism>,
}

impl LiftingReport {
    pub fn unique(&self) -> bool {
        self.diagonals.len() == 1
    }
}

pub fn is_surjection(f: &Morphism) -> bool {
    let mut hit = vec![false; f.cod().len()];
    for p in hom_points(f.dom()) {
        hit[f.apply(p)] = true;
    }
    hom_points(f.cod()).into_iter().all(|q| hit[q])
}

/// Injective on points and order-reflecting, isometric, or full over the
/// vertex image; bound-relative lifting test for graphs.
pub fn is_injection(g: &Morphism, limits: &Limits) -> Result<bool> {
    match g.backend() {
        Backend::Pos => Ok(injective(g.points())
            && (0..g.dom().len()).all(|a| {
                (0..g.dom().len()).all(|b| g.dom().leq(a, b) == g.cod().leq(g.apply(a), g.apply(b)))
            })),
        Backend::Met => Ok((0..g.dom().len())
            .all(|a| (a + 1..g.dom().len()).all(|b| g.dom().dist(a, b) == g.cod().dist(g.apply(a), g.apply(b))))),
        Backend::MGra => Ok(is_full_vertex_injection(g)),
        Backend::Gra => LiftingTester::new(Backend::Gra, limits.gra_injection_bound, limits)?.is_orthogonal(g),
    }
}

/// The looser multigraph class: injective on vertices only.
pub fn is_vertex_injective(g: &Morphism) -> bool {
    injective(g.points())
}

fn is_full_vertex_injection(g: &Morphism) -> bool {
    if !injective(g.points()) {
        return false;
    }
    let (de, ce) = (g.dom().edges().unwrap(), g.cod().edges().unwrap());
    let n = g.dom().len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let mut image: Vec<usize> = de.between(a, b).map(|e| g.edges()[e]).collect();
            image.sort();
            let mut target: Vec<usize> = ce.between(g.apply(a), g.apply(b)).collect();
            target.sort();
            image == target
        })
    })
}

fn injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    map.iter().all(|p| seen.insert(p))
}

/// Brute-force orthogonality against every surjection between objects up
/// to a size bound.
pub struct LiftingTester {
    pub bound: usize,
    surjections: Vec<Morphism>,
    limits: Limits,
}

impl LiftingTester {
    pub fn new(backend: Backend, bound: usize, limits: &Limits) -> Result<LiftingTester> {
        let objects: Vec<Arc<FiniteObject>> = enumerate_objects(backend, bound, &limits.met_grid)
            .into_iter()
            .map(Arc::new)
            .collect();
        let mut surjections = Vec::new();
        for a in &objects {
            for b in &objects {
                for f in enumerate_morphisms(a, b, limits)? {
                    if is_surjection(&f) {
                        surjections.push(f);
                    }
                }
            }
        }
        Ok(LiftingTester {
            bound,
            surjections,
            limits: limits.clone(),
        })
    }

    pub fn surjections(&self) -> &[Morphism] {
        &self.surjections
    }

    /// True iff every square of a test surjection against `g` has exactly
    /// one diagonal.
    pub fn is_orthogonal(&self, g: &Morphism) -> Result<bool> {
        for f in &self.surjections {
            if first_non_unique_square(f, g, &self.limits)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// First commuting square `(u, v)` of `f` against `g` whose diagonal is
/// missing or not unique.
pub fn first_non_unique_square(f: &Morphism, g: &Morphism, limits: &Limits) -> Result<Option<LiftingReport>> {
    for v in enumerate_morphisms(f.cod(), g.cod(), limits)? {
        let vf = f.then(&v)?;
        // u is pinned pointwise to the fibre of g over v∘f.
        let mut candidates = Vec::new();
        enumerate_constrained(f.dom(), g.dom(), |a, c| g.apply(c) == vf.apply(a), |u| {
            candidates.push(u);
            true
        });
        for u in candidates {
            if !u.then(g)?.same_map(&vf) {
                continue;
            }
            let report = lifting(f, g, &u, &v)?;
            if !report.unique() {
                return Ok(Some(report));
            }
        }
    }
    Ok(None)
}

/// All diagonals `t` with `t∘f = u` and `g∘t = v`.
pub fn check_unique_lifting(f: &Morphism, g: &Morphism, u: &Morphism, v: &Morphism) -> Result<LiftingReport> {
    let shapes = **f.dom() == **u.dom() && **f.cod() == **v.dom() && **g.dom() == **u.cod() && **g.cod() == **v.cod();
    if !shapes {
        return Err(Error::Shape("square (f, g, u, v) has mismatched corners".into()));
    }
    if !f.then(v)?.same_map(&u.then(g)?) {
        return Err(Error::NonCommutingSquare);
    }
    lifting(f, g, u, v)
}

fn lifting(f: &Morphism, g: &Morphism, u: &Morphism, v: &Morphism) -> Result<LiftingReport> {
    let a_len = f.dom().len();
    let allowed = |b: usize, c: usize| {
        g.apply(c) == v.apply(b) && (0..a_len).all(|a| f.apply(a) != b || u.apply(a) == c)
    };
    let mut diagonals = Vec::new();
    enumerate_constrained(f.cod(), g.dom(), allowed, |t| {
        let edges_ok = (0..f.dom().edge_count()).all(|e| t.edges()[f.edges()[e]] == u.edges()[e])
            && (0..t.dom().edge_count()).all(|e| g.edges()[t.edges()[e]] == v.edges()[e]);
        if edges_ok {
            diagonals.push(t);
        }
        true
    });
    Ok(LiftingReport {
        f: f.clone(),
        g: g.clone(),
        u: u.clone(),
        v: v.clone(),
        diagonals,
    })
}

/// Image factorization: surjection onto the (full) image, then its inclusion.
pub fn factorize(f: &Morphism) -> Result<Factorization> {
    if f.backend() == Backend::Gra {
        return Err(Error::NoFactorizationSystem(Backend::Gra));
    }
    let cod = f.cod();
    let mut keep: Vec<usize> = f.points().to_vec();
    keep.sort();
    keep.dedup();
    let keep_edges: Vec<usize> = match cod.edges() {
        Some(e) => (0..e.len())
            .filter(|&k| keep.binary_search(&e.src[k]).is_ok() && keep.binary_search(&e.tgt[k]).is_ok())
            .collect(),
        None => vec![],
    };
    let mono = induced_subobject(cod, &keep, &keep_edges);
    let points = f.points().iter().map(|p| keep.binary_search(p).unwrap()).collect();
    let edges = f
        .edges()
        .iter()
        .map(|e| keep_edges.binary_search(e).unwrap())
        .collect();
    let epi = Morphism::new(f.dom().clone(), mono.dom().clone(), points, edges)?;
    Ok(Factorization {
        original: f.clone(),
        epi_part: epi,
        mono_part: mono,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongConnectivity {
    pub backend: Backend,
    pub size_bound: usize,
    pub holds: bool,
    /// `(K, K')` with `K'` non-initial and no morphism `K → K'`.
    #[serde(skip)]
    pub witness: Option<(FiniteObject, FiniteObject)>,
}

pub fn is_strongly_connected(backend: Backend, size_bound: usize, limits: &Limits) -> Result<StrongConnectivity> {
    let objects: Vec<Arc<FiniteObject>> = enumerate_objects(backend, size_bound, &limits.met_grid)
        .into_iter()
        .map(Arc::new)
        .collect();
    for k in &objects {
        for k2 in objects.iter().filter(|o| !o.is_empty()) {
            let mut found = false;
            enumerate_constrained(k, k2, |_, _| true, |_| {
                found = true;
                false
            });
            if !found {
                return Ok(StrongConnectivity {
                    backend,
                    size_bound,
                    holds: false,
                    witness: Some(((**k).clone(), (**k2).clone())),
                });
            }
        }
    }
    Ok(StrongConnectivity {
        backend,
        size_bound,
        holds: true,
        witness: None,
    })
}

/// A retraction `r` of the coproduct injection at `index`: `r ∘ u_index = id`.
pub fn split_coproduct_injection(parts: &[Arc<FiniteObject>], index: usize) -> Result<Morphism> {
    if index >= parts.len() {
        return Err(Error::Shape(format!("no part {index}")));
    }
    if let Some(m) = parts.iter().position(|p| p.is_empty()) {
        return Err(Error::Shape(format!("part {m} is initial")));
    }
    let cone = coproduct(parts)?;
    let target = &parts[index];
    let mut cocone = Vec::with_capacity(parts.len());
    for (m, part) in parts.iter().enumerate() {
        if m == index {
            cocone.push(Morphism::identity(target));
            continue;
        }
        let mut first = None;
        enumerate_constrained(part, target, |_, _| true, |h| {
            first = Some(h);
            false
        });
        cocone.push(first.ok_or(Error::NotStronglyConnected { from: m, to: index })?);
    }
    copair(&cone, &cocone)
}
