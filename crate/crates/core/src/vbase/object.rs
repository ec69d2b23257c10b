use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};

/// The four base categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Posets and monotone maps.
    Pos,
    /// Generalized metric spaces and nonexpansive maps.
    Met,
    /// Graphs (symmetric relations) and homomorphisms.
    Gra,
    /// Directed multigraphs.
    #[serde(rename = "mgra")]
    MGra,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Pos, Backend::Met, Backend::Gra, Backend::MGra];
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Pos => "pos",
            Backend::Met => "met",
            Backend::Gra => "gra",
            Backend::MGra => "mgra",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "pos" => Ok(Backend::Pos),
            "met" => Ok(Backend::Met),
            "gra" => Ok(Backend::Gra),
            "mgra" => Ok(Backend::MGra),
            other => Err(Error::Unsupported(format!("backend `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationKind {
    DuplicateLabel,
    Shape,
    ReflexivityViolation,
    AntisymmetryViolation,
    TransitivityViolation,
    ZeroDiagonalViolation,
    NegativeDistance,
    SymmetryViolation,
    TriangleViolation,
    SeparationViolation,
    DanglingEdge,
    NotAMorphism,
}

/// One broken invariant, with the offending element labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<String>,
}

impl Violation {
    pub fn new(kind: ViolationKind, witness: &[&str]) -> Violation {
        Violation {
            kind,
            witness: witness.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.witness.join(","))
    }
}

/// Edges of a directed multigraph; vertices live in the owning object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiEdges {
    pub labels: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
}

impl MultiEdges {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Edge indices from `u` to `v`.
    pub fn between(&self, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&e| self.src[e] == u && self.tgt[e] == v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    /// `leq[i][j]` iff `i ≤ j`.
    Pos(Vec<Vec<bool>>),
    Met(Vec<Vec<Dist>>),
    /// Symmetric adjacency; `adj[i][i]` is a loop.
    Gra(Vec<Vec<bool>>),
    MGra(MultiEdges),
}

/// A validated finite object of one of the base categories.
///
/// Elements are indexed `0..len()`; the index order is the canonical order
/// used by every enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteObject {
    labels: Vec<String>,
    structure: Structure,
}

impl FiniteObject {
    /// Validate raw structure, reporting every broken invariant.
    pub fn new(labels: Vec<String>, structure: Structure) -> Result<FiniteObject> {
        let violations = check(&labels, &structure);
        if violations.is_empty() {
            Ok(FiniteObject { labels, structure })
        } else {
            Err(Error::InvariantViolation(violations))
        }
    }

    pub(crate) fn new_unchecked(labels: Vec<String>, structure: Structure) -> FiniteObject {
        debug_assert!(
            check(&labels, &structure).is_empty(),
            "{:?}",
            check(&labels, &structure)
        );
        FiniteObject { labels, structure }
    }

    /// Poset generated by `pairs` under reflexive-transitive closure.
    pub fn poset<S: AsRef<str>>(labels: &[S], pairs: &[(usize, usize)]) -> Result<FiniteObject> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        transitive_closure(&mut leq);
        FiniteObject::new(owned(labels), Structure::Pos(leq))
    }

    pub fn chain(n: usize) -> FiniteObject {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteObject::poset(&numbered(n), &pairs).expect("chains are posets")
    }

    pub fn antichain(n: usize) -> FiniteObject {
        FiniteObject::poset(&numbered(n), &[]).expect("antichains are posets")
    }

    pub fn metric<S: AsRef<str>>(labels: &[S], dist: Vec<Vec<Dist>>) -> Result<FiniteObject> {
        FiniteObject::new(owned(labels), Structure::Met(dist))
    }

    /// Metric space given by its finite off-diagonal distances; unlisted pairs are `∞`.
    pub fn metric_from_pairs<S: AsRef<str>>(
        labels: &[S],
        pairs: &[(usize, usize, Dist)],
    ) -> Result<FiniteObject> {
        let n = labels.len();
        let mut d = vec![vec![Dist::Inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Dist::ZERO;
        }
        for &(a, b, e) in pairs {
            d[a][b] = e;
            d[b][a] = e;
        }
        FiniteObject::metric(labels, d)
    }

    /// Discrete metric space: all off-diagonal distances `∞`.
    pub fn discrete_metric(n: usize) -> FiniteObject {
        FiniteObject::metric_from_pairs(&numbered(n), &[]).expect("discrete spaces are valid")
    }

    /// Graph from an edge list; the list must already be symmetric.
    pub fn graph<S: AsRef<str>>(labels: &[S], edges: &[(usize, usize)]) -> Result<FiniteObject> {
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            adj[a][b] = true;
        }
        FiniteObject::new(owned(labels), Structure::Gra(adj))
    }

    /// Graph from undirected edges (symmetrized).
    pub fn graph_undirected<S: AsRef<str>>(
        labels: &[S],
        edges: &[(usize, usize)],
    ) -> Result<FiniteObject> {
        let sym: Vec<_> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        FiniteObject::graph(labels, &sym)
    }

    pub fn multigraph<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(&str, usize, usize)],
    ) -> Result<FiniteObject> {
        let me = MultiEdges {
            labels: edges.iter().map(|e| e.0.to_string()).collect(),
            src: edges.iter().map(|e| e.1).collect(),
            tgt: edges.iter().map(|e| e.2).collect(),
        };
        FiniteObject::new(owned(vertices), Structure::MGra(me))
    }

    /// The empty (initial) object.
    pub fn empty(backend: Backend) -> FiniteObject {
        let structure = match backend {
            Backend::Pos => Structure::Pos(vec![]),
            Backend::Met => Structure::Met(vec![]),
            Backend::Gra => Structure::Gra(vec![]),
            Backend::MGra => Structure::MGra(MultiEdges {
                labels: vec![],
                src: vec![],
                tgt: vec![],
            }),
        };
        FiniteObject::new_unchecked(vec![], structure)
    }

    /// The unit object `I` whose global points define surjections.
    ///
    /// For multigraphs this is the bare vertex, so points are vertices.
    pub fn unit(backend: Backend) -> FiniteObject {
        let labels = vec!["*".to_string()];
        let structure = match backend {
            Backend::Pos => Structure::Pos(vec![vec![true]]),
            Backend::Met => Structure::Met(vec![vec![Dist::ZERO]]),
            Backend::Gra => Structure::Gra(vec![vec![true]]),
            Backend::MGra => Structure::MGra(MultiEdges {
                labels: vec![],
                src: vec![],
                tgt: vec![],
            }),
        };
        FiniteObject::new_unchecked(labels, structure)
    }

    /// The terminal object.
    pub fn terminal(backend: Backend) -> FiniteObject {
        match backend {
            Backend::MGra => FiniteObject::new_unchecked(
                vec!["*".into()],
                Structure::MGra(MultiEdges {
                    labels: vec!["loop".into()],
                    src: vec![0],
                    tgt: vec![0],
                }),
            ),
            b => FiniteObject::unit(b),
        }
    }

    pub fn backend(&self) -> Backend {
        match self.structure {
            Structure::Pos(_) => Backend::Pos,
            Structure::Met(_) => Backend::Met,
            Structure::Gra(_) => Backend::Gra,
            Structure::MGra(_) => Backend::MGra,
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Number of points (vertices for multigraphs).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Points plus edges; the measure used by size bounds.
    pub fn size(&self) -> usize {
        self.len() + self.edge_count()
    }

    pub fn edge_count(&self) -> usize {
        match &self.structure {
            Structure::MGra(e) => e.len(),
            _ => 0,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<FiniteObject> {
        FiniteObject::new(labels, self.structure.clone())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        match &self.structure {
            Structure::Pos(m) => m[i][j],
            _ => i == j,
        }
    }

    pub fn dist(&self, i: usize, j: usize) -> Dist {
        match &self.structure {
            Structure::Met(d) => d[i][j],
            _ if i == j => Dist::ZERO,
            _ => Dist::Inf,
        }
    }

    pub fn adj(&self, i: usize, j: usize) -> bool {
        match &self.structure {
            Structure::Gra(a) => a[i][j],
            Structure::MGra(e) => e.between(i, j).next().is_some(),
            _ => false,
        }
    }

    pub fn edges(&self) -> Option<&MultiEdges> {
        match &self.structure {
            Structure::MGra(e) => Some(e),
            _ => None,
        }
    }

    /// Order matrix, distance matrix or adjacency, as applicable.
    pub fn order_matrix(&self) -> Option<&Vec<Vec<bool>>> {
        match &self.structure {
            Structure::Pos(m) => Some(m),
            _ => None,
        }
    }

    pub fn dist_matrix(&self) -> Option<&Vec<Vec<Dist>>> {
        match &self.structure {
            Structure::Met(d) => Some(d),
            _ => None,
        }
    }

    /// True when the object is a copower of the unit.
    pub fn is_discrete(&self) -> bool {
        let n = self.len();
        match &self.structure {
            Structure::Pos(_) => (0..n).all(|i| (0..n).all(|j| i == j || !self.leq(i, j))),
            Structure::Met(_) => (0..n).all(|i| (0..n).all(|j| i == j || self.dist(i, j) == Dist::Inf)),
            Structure::Gra(a) => (0..n).all(|i| (0..n).all(|j| a[i][j] == (i == j))),
            Structure::MGra(e) => e.is_empty(),
        }
    }
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn owned<S: AsRef<str>>(labels: &[S]) -> Vec<String> {
    labels.iter().map(|s| s.as_ref().to_string()).collect()
}

pub(crate) fn transitive_closure(m: &mut [Vec<bool>]) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
}

fn check(labels: &[String], structure: &Structure) -> Vec<Violation> {
    use ViolationKind::*;
    let n = labels.len();
    let l = |i: usize| labels[i].as_str();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for lab in labels {
        if !seen.insert(lab) {
            out.push(Violation::new(DuplicateLabel, &[lab]));
        }
    }
    let square = |rows: usize, cols: &dyn Fn(usize) -> usize| rows == n && (0..n).all(|i| cols(i) == n);
    match structure {
        Structure::Pos(m) => {
            if !square(m.len(), &|i| m[i].len()) {
                out.push(Violation::new(Shape, &[]));
                return out;
            }
            for i in 0..n {
                if !m[i][i] {
                    out.push(Violation::new(ReflexivityViolation, &[l(i)]));
                }
                for j in i + 1..n {
                    if m[i][j] && m[j][i] {
                        out.push(Violation::new(AntisymmetryViolation, &[l(i), l(j)]));
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if m[i][j] && m[j][k] && !m[i][k] {
                            out.push(Violation::new(TransitivityViolation, &[l(i), l(j), l(k)]));
                        }
                    }
                }
            }
        }
        Structure::Met(d) => {
            if !square(d.len(), &|i| d[i].len()) {
                out.push(Violation::new(Shape, &[]));
                return out;
            }
            for i in 0..n {
                if !d[i][i].is_zero() {
                    out.push(Violation::new(ZeroDiagonalViolation, &[l(i)]));
                }
                for j in 0..n {
                    if d[i][j].is_negative() {
                        out.push(Violation::new(NegativeDistance, &[l(i), l(j)]));
                    }
                    if j > i {
                        if d[i][j] != d[j][i] {
                            out.push(Violation::new(SymmetryViolation, &[l(i), l(j)]));
                        } else if d[i][j].is_zero() {
                            out.push(Violation::new(SeparationViolation, &[l(i), l(j)]));
                        }
                    }
                }
            }
            for i in 0..n {
                for k in i + 1..n {
                    for j in 0..n {
                        if j != i && j != k && d[i][k] > d[i][j] + d[j][k] {
                            out.push(Violation::new(TriangleViolation, &[l(i), l(j), l(k)]));
                        }
                    }
                }
            }
        }
        Structure::Gra(a) => {
            if !square(a.len(), &|i| a[i].len()) {
                out.push(Violation::new(Shape, &[]));
                return out;
            }
            for i in 0..n {
                for j in i + 1..n {
                    if a[i][j] != a[j][i] {
                        out.push(Violation::new(SymmetryViolation, &[l(i), l(j)]));
                    }
                }
            }
        }
        Structure::MGra(e) => {
            if e.src.len() != e.labels.len() || e.tgt.len() != e.labels.len() {
                out.push(Violation::new(Shape, &[]));
                return out;
            }
            let mut seen = HashSet::new();
            for (k, lab) in e.labels.iter().enumerate() {
                if !seen.insert(lab) {
                    out.push(Violation::new(DuplicateLabel, &[lab]));
                }
                if e.src[k] >= n || e.tgt[k] >= n {
                    out.push(Violation::new(DanglingEdge, &[lab]));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_is_valid() {
        let c = FiniteObject::poset(&["0", "1"], &[(0, 1)]).unwrap();
        assert!(c.leq(0, 1) && !c.leq(1, 0));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let err = FiniteObject::metric_from_pairs(
            &["a", "b", "c"],
            &[(0, 1, Dist::int(1)), (1, 2, Dist::int(1)), (0, 2, Dist::int(3))],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::InvariantViolation(vec![Violation::new(
                ViolationKind::TriangleViolation,
                &["a", "b", "c"]
            )])
        );
    }

    #[test]
    fn asymmetric_graph_rejected() {
        let err = FiniteObject::graph(&["a", "b"], &[(0, 1)]).unwrap_err();
        match err {
            Error::InvariantViolation(v) => assert_eq!(v[0].kind, ViolationKind::SymmetryViolation),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poset_cycle_rejected() {
        assert!(FiniteObject::poset(&["a", "b"], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn separation_and_dangling_edges() {
        let err = FiniteObject::metric_from_pairs(&["a", "b"], &[(0, 1, Dist::ZERO)]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(ref v) if v[0].kind == ViolationKind::SeparationViolation));
        let err = FiniteObject::multigraph(&["v"], &[("e", 0, 3)]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(ref v) if v[0].kind == ViolationKind::DanglingEdge));
    }
}
