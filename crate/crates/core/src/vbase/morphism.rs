use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::object::{Backend, FiniteObject, Structure, Violation, ViolationKind};

/// A structure-preserving map between two objects of one backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: Arc<FiniteObject>,
    cod: Arc<FiniteObject>,
    points: Vec<usize>,
    /// Edge component; empty unless the backend is `MGra`.
    edges: Vec<usize>,
}

impl Morphism {
    pub fn new(
        dom: Arc<FiniteObject>,
        cod: Arc<FiniteObject>,
        points: Vec<usize>,
        edges: Vec<usize>,
    ) -> Result<Morphism> {
        if dom.backend() != cod.backend() {
            return Err(Error::BackendMismatch {
                expected: dom.backend(),
                found: cod.backend(),
            });
        }
        let shape_ok = points.len() == dom.len()
            && points.iter().all(|&p| p < cod.len())
            && edges.len() == dom.edge_count()
            && edges.iter().all(|&e| e < cod.edge_count());
        if !shape_ok {
            return Err(Error::InvariantViolation(vec![Violation::new(ViolationKind::Shape, &[])]));
        }
        let m = Morphism { dom, cod, points, edges };
        let v = m.violations();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvariantViolation(v))
        }
    }

    pub(crate) fn new_unchecked(
        dom: Arc<FiniteObject>,
        cod: Arc<FiniteObject>,
        points: Vec<usize>,
        edges: Vec<usize>,
    ) -> Morphism {
        let m = Morphism { dom, cod, points, edges };
        debug_assert!(m.violations().is_empty(), "{:?}", m.violations());
        m
    }

    /// Convenience constructor for backends without edges.
    pub fn from_points(dom: &FiniteObject, cod: &FiniteObject, points: Vec<usize>) -> Result<Morphism> {
        Morphism::new(Arc::new(dom.clone()), Arc::new(cod.clone()), points, vec![])
    }

    pub fn identity(obj: &Arc<FiniteObject>) -> Morphism {
        Morphism {
            dom: obj.clone(),
            cod: obj.clone(),
            points: (0..obj.len()).collect(),
            edges: (0..obj.edge_count()).collect(),
        }
    }

    pub fn backend(&self) -> Backend {
        self.dom.backend()
    }

    pub fn dom(&self) -> &Arc<FiniteObject> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteObject> {
        &self.cod
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn apply(&self, i: usize) -> usize {
        self.points[i]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if *self.cod != *g.dom {
            return Err(Error::Shape("codomain does not match domain".into()));
        }
        Ok(Morphism {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            points: self.points.iter().map(|&p| g.points[p]).collect(),
            edges: self.edges.iter().map(|&e| g.edges[e]).collect(),
        })
    }

    /// Same underlying maps, ignoring object identity beyond equality.
    pub fn same_map(&self, other: &Morphism) -> bool {
        self.points == other.points && self.edges == other.edges
    }

    pub fn is_identity(&self) -> bool {
        *self.dom == *self.cod
            && self.points.iter().enumerate().all(|(i, &p)| i == p)
            && self.edges.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn is_bijective(&self) -> bool {
        bijective(&self.points, self.cod.len()) && bijective(&self.edges, self.cod.edge_count())
    }

    /// Inverse when the map is an isomorphism.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut points = vec![0; self.points.len()];
        for (i, &p) in self.points.iter().enumerate() {
            points[p] = i;
        }
        let mut edges = vec![0; self.edges.len()];
        for (i, &e) in self.edges.iter().enumerate() {
            edges[e] = i;
        }
        let inv = Morphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            points,
            edges,
        };
        inv.violations().is_empty().then_some(inv)
    }

    pub fn is_iso(&self) -> bool {
        self.inverse().is_some()
    }

    fn violations(&self) -> Vec<Violation> {
        let (x, y) = (&*self.dom, &*self.cod);
        let f = &self.points;
        let mut out = Vec::new();
        let bad = |a: usize, b: usize| Violation::new(ViolationKind::NotAMorphism, &[x.label(a), x.label(b)]);
        match (x.structure(), y.structure()) {
            (Structure::Pos(_), _) => {
                for a in 0..x.len() {
                    for b in 0..x.len() {
                        if x.leq(a, b) && !y.leq(f[a], f[b]) {
                            out.push(bad(a, b));
                        }
                    }
                }
            }
            (Structure::Met(_), _) => {
                for a in 0..x.len() {
                    for b in a + 1..x.len() {
                        if y.dist(f[a], f[b]) > x.dist(a, b) {
                            out.push(bad(a, b));
                        }
                    }
                }
            }
            (Structure::Gra(_), _) => {
                for a in 0..x.len() {
                    for b in a..x.len() {
                        if x.adj(a, b) && !y.adj(f[a], f[b]) {
                            out.push(bad(a, b));
                        }
                    }
                }
            }
            (Structure::MGra(ex), Structure::MGra(ey)) => {
                for e in 0..ex.len() {
                    let e2 = self.edges[e];
                    if ey.src[e2] != f[ex.src[e]] || ey.tgt[e2] != f[ex.tgt[e]] {
                        out.push(Violation::new(ViolationKind::NotAMorphism, &[&ex.labels[e]]));
                    }
                }
            }
            _ => out.push(Violation::new(ViolationKind::Shape, &[])),
        }
        out
    }
}

fn bijective(map: &[usize], cod_len: usize) -> bool {
    if map.len() != cod_len {
        return false;
    }
    let mut hit = vec![false; cod_len];
    for &p in map {
        if hit[p] {
            return false;
        }
        hit[p] = true;
    }
    true
}

/// Global points `𝒱₀(I, X)`, as element indices.
///
/// Posets and metric spaces: every element. Graphs: the looped vertices.
/// Multigraphs: every vertex.
pub fn hom_points(x: &FiniteObject) -> Vec<usize> {
    match x.backend() {
        Backend::Gra => (0..x.len()).filter(|&i| x.adj(i, i)).collect(),
        _ => (0..x.len()).collect(),
    }
}

/// The function `𝒱₀(I, f)` as a list of `(point, image)` pairs.
pub fn hom_points_map(f: &Morphism) -> Vec<(usize, usize)> {
    hom_points(f.dom()).into_iter().map(|p| (p, f.apply(p))).collect()
}

/// Every morphism `X → Y`, in lexicographic order of the point map (then
/// the edge map).
pub fn enumerate_morphisms(
    x: &Arc<FiniteObject>,
    y: &Arc<FiniteObject>,
    limits: &Limits,
) -> Result<Vec<Morphism>> {
    if x.backend() != y.backend() {
        return Err(Error::BackendMismatch {
            expected: x.backend(),
            found: y.backend(),
        });
    }
    limits.check_maps("enumerate_morphisms", x.len(), y.len())?;
    let mut out = Vec::new();
    point_maps(x, y, |_| true, |points| {
        for edges in edge_maps(x, y, points) {
            out.push(Morphism::new_unchecked(x.clone(), y.clone(), points.to_vec(), edges));
        }
        true
    });
    Ok(out)
}

/// Morphisms `X → Y` whose point map satisfies `allowed(i)` membership
/// constraints; used for constrained searches (sections, factorizations).
pub fn enumerate_constrained(
    x: &Arc<FiniteObject>,
    y: &Arc<FiniteObject>,
    allowed: impl Fn(usize, usize) -> bool,
    mut visit: impl FnMut(Morphism) -> bool,
) {
    point_maps(
        x,
        y,
        |(i, v)| allowed(i, v),
        |points| {
            for edges in edge_maps(x, y, points) {
                if !visit(Morphism::new_unchecked(x.clone(), y.clone(), points.to_vec(), edges)) {
                    return false;
                }
            }
            true
        },
    );
}

/// Backtracking over point maps compatible with the structure; `emit`
/// returns `false` to stop.
fn point_maps(
    x: &FiniteObject,
    y: &FiniteObject,
    allowed: impl Fn((usize, usize)) -> bool,
    mut emit: impl FnMut(&[usize]) -> bool,
) {
    let n = x.len();
    let mut f = vec![0usize; n];
    fn compatible(x: &FiniteObject, y: &FiniteObject, f: &[usize], i: usize) -> bool {
        let v = f[i];
        match x.backend() {
            Backend::Pos => (0..i).all(|j| {
                (!x.leq(i, j) || y.leq(v, f[j])) && (!x.leq(j, i) || y.leq(f[j], v))
            }),
            Backend::Met => (0..i).all(|j| y.dist(v, f[j]) <= x.dist(i, j)),
            Backend::Gra => (0..=i).all(|j| !x.adj(i, j) || y.adj(v, f[j])),
            // Edges must find targets; checked per edge once both ends are set.
            Backend::MGra => {
                let (ex, ey) = (x.edges().unwrap(), y.edges().unwrap());
                (0..ex.len()).all(|e| {
                    let (s, t) = (ex.src[e], ex.tgt[e]);
                    if s > i || t > i || (s != i && t != i) {
                        return true;
                    }
                    ey.between(f[s], f[t]).next().is_some()
                })
            }
        }
    }
    fn go(
        x: &FiniteObject,
        y: &FiniteObject,
        f: &mut Vec<usize>,
        i: usize,
        allowed: &dyn Fn((usize, usize)) -> bool,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == f.len() {
            return emit(f);
        }
        for v in 0..y.len() {
            if !allowed((i, v)) {
                continue;
            }
            f[i] = v;
            if compatible(x, y, f, i) && !go(x, y, f, i + 1, allowed, emit) {
                return false;
            }
        }
        true
    }
    go(x, y, &mut f, 0, &allowed, &mut emit);
}

/// All edge maps lying over a fixed vertex map, lexicographically.
fn edge_maps(x: &FiniteObject, y: &FiniteObject, points: &[usize]) -> Vec<Vec<usize>> {
    let (Some(ex), Some(ey)) = (x.edges(), y.edges()) else {
        return vec![vec![]];
    };
    let choices: Vec<Vec<usize>> = (0..ex.len())
        .map(|e| ey.between(points[ex.src[e]], points[ex.tgt[e]]).collect())
        .collect();
    let mut out = vec![vec![]];
    for c in &choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for &t in c {
                let mut p = prefix.clone();
                p.push(t);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(x: FiniteObject) -> Arc<FiniteObject> {
        Arc::new(x)
    }

    #[test]
    fn two_chain_endomorphisms() {
        let c = arc(FiniteObject::chain(2));
        let ms = enumerate_morphisms(&c, &c, &Limits::default()).unwrap();
        let maps: Vec<_> = ms.iter().map(|m| m.points().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn loop_to_loopless_vertex_has_no_maps() {
        let i = arc(FiniteObject::unit(Backend::Gra));
        let v = arc(FiniteObject::graph(&["v"], &[]).unwrap());
        assert!(enumerate_morphisms(&i, &v, &Limits::default()).unwrap().is_empty());
        assert_eq!(enumerate_morphisms(&v, &i, &Limits::default()).unwrap().len(), 1);
    }

    #[test]
    fn maps_into_terminal() {
        let l = Limits::default();
        for b in Backend::ALL {
            let t = arc(FiniteObject::terminal(b));
            let x = arc(match b {
                Backend::Pos => FiniteObject::chain(3),
                Backend::Met => FiniteObject::discrete_metric(3),
                Backend::Gra => FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)]).unwrap(),
                Backend::MGra => FiniteObject::multigraph(&["a", "b"], &[("e", 0, 1), ("f", 0, 1)]).unwrap(),
            });
            assert_eq!(enumerate_morphisms(&x, &t, &l).unwrap().len(), 1, "{b}");
        }
    }

    #[test]
    fn size_limit() {
        let l = Limits { max_maps: 10, ..Limits::default() };
        let c = arc(FiniteObject::antichain(3));
        assert!(matches!(
            enumerate_morphisms(&c, &c, &l),
            Err(Error::SizeLimitExceeded { requested: 27, .. })
        ));
    }

    #[test]
    fn hom_points_per_backend() {
        let met = FiniteObject::metric_from_pairs(&["a", "b"], &[(0, 1, crate::Dist::int(1))]).unwrap();
        assert_eq!(hom_points(&met), vec![0, 1]);
        let e = FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)]).unwrap();
        assert!(hom_points(&e).is_empty());
        let mg = FiniteObject::multigraph(
            &["a", "b", "c"],
            &[("e0", 0, 1), ("e1", 1, 2), ("e2", 2, 0), ("e3", 0, 0), ("e4", 1, 0)],
        )
        .unwrap();
        assert_eq!(hom_points(&mg).len(), 3);
    }

    #[test]
    fn morphism_validation() {
        let c = FiniteObject::chain(2);
        assert!(Morphism::from_points(&c, &c, vec![1, 0]).is_err());
        assert!(Morphism::from_points(&c, &c, vec![0, 1]).unwrap().is_identity());
    }
}
