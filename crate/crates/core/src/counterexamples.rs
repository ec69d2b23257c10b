//! Two negative results made executable: `(Surj, Inj)` fails to be a
//! factorization system on graphs, and finite products in `Met` do not
//! commute with reflexive coequalizers.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::factor::{factorize, is_surjection};
use crate::limits::Limits;
use crate::vbase::json::{RawMorphism, RawObject};
use crate::vbase::{
    coequalizer, copair, coproduct, encode_tuple, enumerate_objects, hom_points, is_isomorphic, is_regular_epi, product,
    Backend, FiniteObject, Morphism,
};

#[derive(Clone, Debug, Serialize)]
pub struct GraphReport {
    /// The coequalizer of the two vertex inclusions `V ⇉ E` is the loop.
    pub coequalizer_is_loop: bool,
    /// Loop vertices of the edge graph.
    pub points_of_edge: Vec<String>,
    pub edge_to_loop_is_surjection: bool,
    pub edge_to_loop_is_regular_epi: bool,
    /// What `factorize` says about the edge-to-loop map.
    pub factorize_error: Option<String>,
    /// All of the above line up into the contradiction.
    pub holds: bool,
}

/// `V` a loopless vertex, `E` a single edge, `I` the loop: `E → I` is a
/// coequalizer of `V ⇉ E`, hence a strong epimorphism, yet `E` has no
/// points, so `E → I` is not a surjection.
pub fn graph_factorization_failure(limits: &Limits) -> Result<GraphReport> {
    let v = Arc::new(FiniteObject::graph(&["v"], &[])?);
    let e = Arc::new(FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)])?);
    let i = Arc::new(FiniteObject::unit(Backend::Gra));
    let to_a = Morphism::new(v.clone(), e.clone(), vec![0], vec![])?;
    let to_b = Morphism::new(v, e.clone(), vec![1], vec![])?;
    let (q, _) = coequalizer(&to_a, &to_b)?;
    let f = Morphism::new(e.clone(), i.clone(), vec![0, 0], vec![])?;
    let coequalizer_is_loop = is_isomorphic(&q, &i);
    let points_of_edge: Vec<String> = hom_points(&e).into_iter().map(|p| e.label(p).to_string()).collect();
    let surj = is_surjection(&f);
    let regular = is_regular_epi(&f, limits)?;
    let factorize_error = factorize(&f).err().map(|err| err.to_string());
    Ok(GraphReport {
        holds: coequalizer_is_loop && points_of_edge.is_empty() && !surj && regular,
        coequalizer_is_loop,
        points_of_edge,
        edge_to_loop_is_surjection: surj,
        edge_to_loop_is_regular_epi: regular,
        factorize_error,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapWitness {
    /// The space multiplied in.
    pub factor: RawObject,
    /// The codomain `B` of the pair.
    pub base: RawObject,
    /// The two points of `B` the pair identifies.
    pub identified: (String, String),
    /// `f, g : B ⊔ 1 → B` with common section `s`.
    pub f: RawMorphism,
    pub g: RawMorphism,
    pub s: RawMorphism,
    /// Two points of `factor × B`, each as `(factor label, base label)`.
    pub points: ((String, String), (String, String)),
    /// Distance in `factor × coeq(f, g)`.
    pub lhs: Dist,
    /// Distance in `coeq(factor × f, factor × g)`.
    pub rhs: Dist,
    pub max_points: usize,
    pub grid: Vec<Dist>,
}

/// The reflexive pair on `B ⊔ 1` identifying `i` and `j`, with its section.
fn reflexive_pair(b: &Arc<FiniteObject>, i: usize, j: usize) -> Result<(Morphism, Morphism, Morphism)> {
    let one = Arc::new(FiniteObject::unit(b.backend()));
    let cone = coproduct(&[b.clone(), one.clone()])?;
    let id = Morphism::identity(b);
    let f = copair(&cone, &[id.clone(), Morphism::new(one.clone(), b.clone(), vec![i], vec![])?])?;
    let g = copair(&cone, &[id, Morphism::new(one, b.clone(), vec![j], vec![])?])?;
    Ok((f, g, cone.legs[0].clone()))
}

/// `X × h` for `h : A → B`, on the products built by [`product`].
fn times(x: &Arc<FiniteObject>, h: &Morphism, limits: &Limits) -> Result<Morphism> {
    let xa = product(x, h.dom(), limits)?.object;
    let xb = product(x, h.cod(), limits)?.object;
    let (na, nb) = (h.dom().len(), h.cod().len());
    let points = (0..xa.len())
        .map(|p| encode_tuple(&[p / na, h.apply(p % na)], &[x.len(), nb]))
        .collect();
    Morphism::new(xa, xb, points, vec![])
}

/// First pair of points of `X × B` (in index order) whose distance in the
/// coequalizer of the product pair exceeds the distance in the product
/// with the coequalizer.
pub fn gap_for(x: &Arc<FiniteObject>, b: &Arc<FiniteObject>, i: usize, j: usize, limits: &Limits) -> Result<Option<GapWitness>> {
    let (f, g, s) = reflexive_pair(b, i, j)?;
    let (q_obj, q) = coequalizer(&f, &g)?;
    let lhs_space = product(x, &q_obj, limits)?.object;
    let (r_obj, r) = coequalizer(&times(x, &f, limits)?, &times(x, &g, limits)?)?;
    let (nx, nb, nq) = (x.len(), b.len(), q_obj.len());
    let compare = |p: usize| encode_tuple(&[p / nb, q.apply(p % nb)], &[nx, nq]);
    // The comparison map is a point bijection.
    if r_obj.len() != lhs_space.len() {
        return Err(Error::Invariant("comparison map is not bijective on points".into()));
    }
    let mut found = None;
    for p in 0..nx * nb {
        for p2 in p + 1..nx * nb {
            let same_r = r.apply(p) == r.apply(p2);
            if same_r != (compare(p) == compare(p2)) {
                return Err(Error::Invariant("comparison map is not well defined".into()));
            }
            let lhs = lhs_space.dist(compare(p), compare(p2));
            let rhs = r_obj.dist(r.apply(p), r.apply(p2));
            if rhs < lhs {
                return Err(Error::Invariant("comparison map expands a distance".into()));
            }
            if lhs < rhs && found.is_none() {
                found = Some((p, p2, lhs, rhs));
            }
        }
    }
    Ok(found.map(|(p, p2, lhs, rhs)| {
        let lab = |p: usize| (x.label(p / nb).to_string(), b.label(p % nb).to_string());
        GapWitness {
            factor: RawObject::from_object(x),
            base: RawObject::from_object(b),
            identified: (b.label(i).to_string(), b.label(j).to_string()),
            f: RawMorphism::from_morphism(&f),
            g: RawMorphism::from_morphism(&g),
            s: RawMorphism::from_morphism(&s),
            points: (lab(p), lab(p2)),
            lhs,
            rhs,
            max_points: 0,
            grid: Vec::new(),
        }
    }))
}

/// Search spaces `B` and `X` with at most `max_points` points and
/// distances from `grid`, in order of `|B|`, then `B`, then the identified
/// pair, then `|X|` and `X`, for the first product/coequalizer gap.
pub fn met_product_coeq_gap(max_points: usize, grid: &[Dist], limits: &Limits) -> Result<GapWitness> {
    if max_points < 2 {
        return Err(Error::NoWitnessInBounds(format!("max_points = {max_points}")));
    }
    let spaces: Vec<Arc<FiniteObject>> = enumerate_objects(Backend::Met, max_points, grid)
        .into_iter()
        .map(Arc::new)
        .collect();
    let factors: Vec<&Arc<FiniteObject>> = spaces.iter().filter(|x| x.len() >= 2).collect();
    for nb in 2..=max_points {
        let candidates: Vec<(&Arc<FiniteObject>, usize, usize)> = spaces
            .iter()
            .filter(|b| b.len() == nb)
            .flat_map(|b| (0..nb).flat_map(move |i| (i + 1..nb).map(move |j| (b, i, j))))
            .collect();
        let hit = candidates.par_iter().find_map_first(|&(b, i, j)| {
            for x in &factors {
                match gap_for(x, b, i, j, limits) {
                    Ok(Some(w)) => return Some(Ok(w)),
                    Ok(None) => {}
                    Err(e) => return Some(Err(e)),
                }
            }
            None
        });
        if let Some(w) = hit {
            let mut w = w?;
            w.max_points = max_points;
            w.grid = grid.to_vec();
            return Ok(w);
        }
    }
    Err(Error::NoWitnessInBounds(format!(
        "no gap with at most {max_points} points over grid {}",
        grid.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    )))
}

/// Recompute both sides of a witness from its raw data alone: shortest
/// paths on `B` with the identified pair at distance 0 (then the max
/// metric with `X`), against shortest paths on `X × B` with every
/// identified copy at distance 0.
pub fn revalidate_gap(w: &GapWitness) -> Result<(Dist, Dist)> {
    let x = w.factor.validate()?;
    let b = w.base.validate()?;
    let find = |o: &FiniteObject, l: &str| o.index_of(l).ok_or_else(|| Error::UnknownVar(l.to_string()));
    let (i, j) = (find(&b, &w.identified.0)?, find(&b, &w.identified.1)?);
    let (nx, nb) = (x.len(), b.len());
    let mut db: Vec<Vec<Dist>> = (0..nb).map(|u| (0..nb).map(|v| b.dist(u, v)).collect()).collect();
    db[i][j] = Dist::ZERO;
    db[j][i] = Dist::ZERO;
    floyd(&mut db);
    let n = nx * nb;
    let mut dp: Vec<Vec<Dist>> = (0..n)
        .map(|p| (0..n).map(|p2| x.dist(p / nb, p2 / nb).max(b.dist(p % nb, p2 % nb))).collect())
        .collect();
    for u in 0..nx {
        dp[u * nb + i][u * nb + j] = Dist::ZERO;
        dp[u * nb + j][u * nb + i] = Dist::ZERO;
    }
    floyd(&mut dp);
    let (a, c) = (&w.points.0, &w.points.1);
    let (ua, ba) = (find(&x, &a.0)?, find(&b, &a.1)?);
    let (uc, bc) = (find(&x, &c.0)?, find(&b, &c.1)?);
    let lhs = x.dist(ua, uc).max(db[ba][bc]);
    let rhs = dp[ua * nb + ba][uc * nb + bc];
    Ok((lhs, rhs))
}

fn floyd(d: &mut [Vec<Dist>]) {
    let n = d.len();
    for k in 0..n {
        for a in 0..n {
            for c in 0..n {
                let via = d[a][k] + d[k][c];
                if via < d[a][c] {
                    d[a][c] = via;
                }
            }
        }
    }
}
