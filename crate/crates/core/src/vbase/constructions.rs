use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::limits::Limits;

use super::morphism::{hom_points, Morphism};
use super::object::{transitive_closure, Backend, FiniteObject, MultiEdges, Structure};

/// `X₀` together with the counit `δ_X : X₀ → X`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub base: Arc<FiniteObject>,
    pub discrete: Arc<FiniteObject>,
    pub counit: Morphism,
}

pub fn discretize(x: &Arc<FiniteObject>) -> Discretization {
    let pts = hom_points(x);
    let labels: Vec<String> = pts.iter().map(|&p| x.label(p).to_string()).collect();
    let n = pts.len();
    let structure = match x.backend() {
        Backend::Pos => Structure::Pos(identity_matrix(n)),
        Backend::Met => Structure::Met(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Dist::ZERO } else { Dist::Inf }).collect())
                .collect(),
        ),
        Backend::Gra => Structure::Gra(identity_matrix(n)),
        Backend::MGra => Structure::MGra(MultiEdges {
            labels: vec![],
            src: vec![],
            tgt: vec![],
        }),
    };
    let discrete = Arc::new(FiniteObject::new_unchecked(labels, structure));
    let counit = Morphism::new_unchecked(discrete.clone(), x.clone(), pts, vec![]);
    Discretization {
        base: x.clone(),
        discrete,
        counit,
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
}

fn same_backend(parts: &[&FiniteObject]) -> Result<Backend> {
    let b = parts
        .first()
        .map(|p| p.backend())
        .ok_or_else(|| Error::Shape("empty list of objects".into()))?;
    for p in parts {
        if p.backend() != b {
            return Err(Error::BackendMismatch {
                expected: b,
                found: p.backend(),
            });
        }
    }
    Ok(b)
}

/// A limit or colimit object with its legs.
#[derive(Clone, Debug)]
pub struct Cone {
    pub object: Arc<FiniteObject>,
    pub legs: Vec<Morphism>,
}

/// Mixed-radix decoding: tuple index → component indices (first most significant).
pub fn decode_tuple(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for k in (0..radices.len()).rev() {
        out[k] = idx % radices[k];
        idx /= radices[k];
    }
    out
}

pub fn encode_tuple(tuple: &[usize], radices: &[usize]) -> usize {
    tuple.iter().zip(radices).fold(0, |acc, (&t, &r)| acc * r + t)
}

/// Binary product with its two projections.
pub fn product(x: &Arc<FiniteObject>, y: &Arc<FiniteObject>, limits: &Limits) -> Result<Cone> {
    product_many(&[x.clone(), y.clone()], limits)
}

/// Product of a list of objects; the empty list gives the terminal object
/// only when a backend can be inferred, so callers pass at least one part.
pub fn product_many(parts: &[Arc<FiniteObject>], limits: &Limits) -> Result<Cone> {
    let refs: Vec<&FiniteObject> = parts.iter().map(|p| &**p).collect();
    let backend = same_backend(&refs)?;
    let radices: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let n: usize = radices.iter().try_fold(1usize, |a, &r| a.checked_mul(r)).unwrap_or(usize::MAX);
    limits.check_carrier("product", n)?;
    let tuples: Vec<Vec<usize>> = (0..n).map(|i| decode_tuple(i, &radices)).collect();
    let labels: Vec<String> = tuples
        .iter()
        .map(|t| {
            let items: Vec<&str> = t.iter().zip(parts).map(|(&i, p)| p.label(i)).collect();
            format!("({})", items.join(","))
        })
        .collect();
    let structure = match backend {
        Backend::Pos => Structure::Pos(pairwise(&tuples, |a, b| {
            parts.iter().enumerate().all(|(k, p)| p.leq(a[k], b[k]))
        })),
        Backend::Gra => Structure::Gra(pairwise(&tuples, |a, b| {
            parts.iter().enumerate().all(|(k, p)| p.adj(a[k], b[k]))
        })),
        Backend::Met => Structure::Met(pairwise(&tuples, |a, b| {
            parts
                .iter()
                .enumerate()
                .map(|(k, p)| p.dist(a[k], b[k]))
                .fold(Dist::ZERO, Dist::max)
        })),
        Backend::MGra => {
            let eradices: Vec<usize> = parts.iter().map(|p| p.edge_count()).collect();
            let m: usize = eradices.iter().product();
            let mut me = MultiEdges {
                labels: vec![],
                src: vec![],
                tgt: vec![],
            };
            for i in 0..m {
                let et = decode_tuple(i, &eradices);
                let s: Vec<usize> = et.iter().zip(parts).map(|(&e, p)| p.edges().unwrap().src[e]).collect();
                let t: Vec<usize> = et.iter().zip(parts).map(|(&e, p)| p.edges().unwrap().tgt[e]).collect();
                let items: Vec<&str> = et
                    .iter()
                    .zip(parts)
                    .map(|(&e, p)| p.edges().unwrap().labels[e].as_str())
                    .collect();
                me.labels.push(format!("({})", items.join(",")));
                me.src.push(encode_tuple(&s, &radices));
                me.tgt.push(encode_tuple(&t, &radices));
            }
            Structure::MGra(me)
        }
    };
    let object = Arc::new(FiniteObject::new_unchecked(labels, structure));
    let legs = parts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let edges = match object.edges() {
                Some(me) => {
                    let eradices: Vec<usize> = parts.iter().map(|p| p.edge_count()).collect();
                    (0..me.len()).map(|e| decode_tuple(e, &eradices)[k]).collect()
                }
                None => vec![],
            };
            Morphism::new_unchecked(object.clone(), p.clone(), tuples.iter().map(|t| t[k]).collect(), edges)
        })
        .collect();
    Ok(Cone { object, legs })
}

fn pairwise<T>(tuples: &[Vec<usize>], f: impl Fn(&[usize], &[usize]) -> T) -> Vec<Vec<T>> {
    tuples
        .iter()
        .map(|a| tuples.iter().map(|b| f(a, b)).collect())
        .collect()
}

/// Disjoint union with its injections.
pub fn coproduct(parts: &[Arc<FiniteObject>]) -> Result<Cone> {
    let refs: Vec<&FiniteObject> = parts.iter().map(|p| &**p).collect();
    let backend = same_backend(&refs)?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut eoffsets = Vec::with_capacity(parts.len());
    let (mut n, mut m) = (0, 0);
    for p in parts {
        offsets.push(n);
        eoffsets.push(m);
        n += p.len();
        m += p.edge_count();
    }
    let mut labels: Vec<String> = parts.iter().flat_map(|p| p.labels().iter().cloned()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        labels = parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.labels().iter().map(move |l| format!("{k}.{l}")))
            .collect();
    }
    let owner: Vec<(usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(k, p)| (0..p.len()).map(move |i| (k, i)))
        .collect();
    let cross = |a: usize, b: usize| {
        let ((ka, ia), (kb, ib)) = (owner[a], owner[b]);
        (ka == kb).then_some((ka, ia, ib))
    };
    let structure = match backend {
        Backend::Pos => Structure::Pos(
            (0..n)
                .map(|a| (0..n).map(|b| cross(a, b).is_some_and(|(k, i, j)| parts[k].leq(i, j))).collect())
                .collect(),
        ),
        Backend::Gra => Structure::Gra(
            (0..n)
                .map(|a| (0..n).map(|b| cross(a, b).is_some_and(|(k, i, j)| parts[k].adj(i, j))).collect())
                .collect(),
        ),
        Backend::Met => Structure::Met(
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| cross(a, b).map_or(Dist::Inf, |(k, i, j)| parts[k].dist(i, j)))
                        .collect()
                })
                .collect(),
        ),
        Backend::MGra => {
            let mut me = MultiEdges {
                labels: vec![],
                src: vec![],
                tgt: vec![],
            };
            for (k, p) in parts.iter().enumerate() {
                let e = p.edges().unwrap();
                for i in 0..e.len() {
                    me.labels.push(format!("{k}.{}", e.labels[i]));
                    me.src.push(offsets[k] + e.src[i]);
                    me.tgt.push(offsets[k] + e.tgt[i]);
                }
            }
            Structure::MGra(me)
        }
    };
    let object = Arc::new(FiniteObject::new_unchecked(labels, structure));
    let legs = parts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            Morphism::new_unchecked(
                p.clone(),
                object.clone(),
                (0..p.len()).map(|i| offsets[k] + i).collect(),
                (0..p.edge_count()).map(|i| eoffsets[k] + i).collect(),
            )
        })
        .collect();
    Ok(Cone { object, legs })
}

/// The copairing `[f₀, …, fₖ] : ∐ parts → Y` out of a coproduct built by
/// [`coproduct`].
pub fn copair(coproduct: &Cone, maps: &[Morphism]) -> Result<Morphism> {
    if maps.len() != coproduct.legs.len() {
        return Err(Error::Shape("copairing needs one map per part".into()));
    }
    let cod = maps
        .first()
        .map(|m| m.cod().clone())
        .ok_or_else(|| Error::Shape("empty copairing".into()))?;
    let mut points = vec![0; coproduct.object.len()];
    let mut edges = vec![0; coproduct.object.edge_count()];
    for (leg, m) in coproduct.legs.iter().zip(maps) {
        if **m.cod() != *cod || **m.dom() != **leg.dom() {
            return Err(Error::Shape("copairing maps disagree with the coproduct".into()));
        }
        for (i, &p) in leg.points().iter().enumerate() {
            points[p] = m.apply(i);
        }
        for (i, &e) in leg.edges().iter().enumerate() {
            edges[e] = m.edges()[i];
        }
    }
    Morphism::new(coproduct.object.clone(), cod, points, edges)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
    /// Class index per element, classes numbered by least member.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut ids = BTreeMap::new();
        let mut out = vec![0; n];
        for i in 0..n {
            let r = self.find(i);
            let next = ids.len();
            out[i] = *ids.entry(r).or_insert(next);
        }
        (out, ids.len())
    }
}

/// The quotient of `cod(f) = cod(g)` by the congruence generated by
/// `f(a) ~ g(a)`, with its structure computed per backend.
pub fn coequalizer(f: &Morphism, g: &Morphism) -> Result<(Arc<FiniteObject>, Morphism)> {
    if **f.dom() != **g.dom() || **f.cod() != **g.cod() {
        return Err(Error::Shape("coequalizer needs a parallel pair".into()));
    }
    let b = f.cod().clone();
    let mut uf = UnionFind::new(b.len());
    for a in 0..f.dom().len() {
        uf.union(f.apply(a), g.apply(a));
    }
    let (cls, _) = uf.classes();
    let mut euf = UnionFind::new(b.edge_count());
    for e in 0..f.dom().edge_count() {
        euf.union(f.edges()[e], g.edges()[e]);
    }
    quotient_by(&b, &cls, &mut euf)
}

/// Quotient of `b` by an explicit partition (`cls[i]` = class id).
pub fn quotient(b: &Arc<FiniteObject>, cls: &[usize]) -> Result<(Arc<FiniteObject>, Morphism)> {
    let mut euf = UnionFind::new(b.edge_count());
    quotient_by(b, cls, &mut euf)
}

fn quotient_by(
    b: &Arc<FiniteObject>,
    cls: &[usize],
    euf: &mut UnionFind,
) -> Result<(Arc<FiniteObject>, Morphism)> {
    let n = b.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in 0..i {
            if cls[i] == cls[j] {
                uf.union(i, j);
            }
        }
    }
    // Classes may merge further: order cycles (Pos) or zero distances (Met).
    match b.backend() {
        Backend::Pos => loop {
            let (c, k) = uf.classes();
            let mut m = vec![vec![false; k]; k];
            for i in 0..n {
                for j in 0..n {
                    if b.leq(i, j) {
                        m[c[i]][c[j]] = true;
                    }
                }
            }
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = true;
            }
            transitive_closure(&mut m);
            let mut merged = false;
            for i in 0..n {
                for j in 0..n {
                    if m[c[i]][c[j]] && m[c[j]][c[i]] && uf.find(i) != uf.find(j) {
                        uf.union(i, j);
                        merged = true;
                    }
                }
            }
            if !merged {
                break;
            }
        },
        Backend::Met => loop {
            let (c, k) = uf.classes();
            let d = class_metric(b, &c, k);
            let mut merged = false;
            for i in 0..n {
                for j in 0..n {
                    if d[c[i]][c[j]].is_zero() && uf.find(i) != uf.find(j) {
                        uf.union(i, j);
                        merged = true;
                    }
                }
            }
            if !merged {
                break;
            }
        },
        _ => {}
    }
    let (c, k) = uf.classes();
    let mut members: Vec<Vec<usize>> = vec![vec![]; k];
    for i in 0..n {
        members[c[i]].push(i);
    }
    let labels: Vec<String> = members
        .iter()
        .map(|ms| ms.iter().map(|&i| b.label(i)).collect::<Vec<_>>().join("~"))
        .collect();
    let structure = match b.backend() {
        Backend::Pos => {
            let mut m = vec![vec![false; k]; k];
            for i in 0..n {
                for j in 0..n {
                    if b.leq(i, j) {
                        m[c[i]][c[j]] = true;
                    }
                }
            }
            transitive_closure(&mut m);
            Structure::Pos(m)
        }
        Backend::Met => Structure::Met(class_metric(b, &c, k)),
        Backend::Gra => {
            let mut m = vec![vec![false; k]; k];
            for i in 0..n {
                for j in 0..n {
                    if b.adj(i, j) {
                        m[c[i]][c[j]] = true;
                    }
                }
            }
            Structure::Gra(m)
        }
        Backend::MGra => {
            let be = b.edges().unwrap();
            let (ec, ek) = euf.classes();
            let mut emembers: Vec<Vec<usize>> = vec![vec![]; ek];
            for e in 0..be.len() {
                emembers[ec[e]].push(e);
            }
            Structure::MGra(MultiEdges {
                labels: emembers
                    .iter()
                    .map(|ms| ms.iter().map(|&e| be.labels[e].as_str()).collect::<Vec<_>>().join("~"))
                    .collect(),
                src: emembers.iter().map(|ms| c[be.src[ms[0]]]).collect(),
                tgt: emembers.iter().map(|ms| c[be.tgt[ms[0]]]).collect(),
            })
        }
    };
    let object = Arc::new(FiniteObject::new(labels, structure)?);
    let edges = match b.edges() {
        Some(be) => {
            let (ec, _) = euf.classes();
            (0..be.len()).map(|e| ec[e]).collect()
        }
        None => vec![],
    };
    let q = Morphism::new(b.clone(), object.clone(), c, edges)?;
    Ok((object, q))
}

/// Chain-infimum metric on classes: least distance between members, then
/// shortest paths.
fn class_metric(b: &FiniteObject, c: &[usize], k: usize) -> Vec<Vec<Dist>> {
    let n = b.len();
    let mut d = vec![vec![Dist::Inf; k]; k];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Dist::ZERO;
    }
    for i in 0..n {
        for j in 0..n {
            let v = b.dist(i, j);
            if v < d[c[i]][c[j]] {
                d[c[i]][c[j]] = v;
            }
        }
    }
    shortest_paths(&mut d);
    d
}

/// Floyd–Warshall closure in place.
pub(crate) fn shortest_paths(d: &mut [Vec<Dist>]) {
    let k = d.len();
    for m in 0..k {
        for i in 0..k {
            if d[i][m] == Dist::Inf {
                continue;
            }
            for j in 0..k {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Monoidal product: the sum metric on `Met`, the cartesian product elsewhere.
pub fn tensor(x: &Arc<FiniteObject>, y: &Arc<FiniteObject>, limits: &Limits) -> Result<Arc<FiniteObject>> {
    if x.backend() != Backend::Met || y.backend() != Backend::Met {
        return Ok(product(x, y, limits)?.object);
    }
    let cone = product(x, y, limits)?;
    let (p, q) = (&cone.legs[0], &cone.legs[1]);
    let n = cone.object.len();
    let d = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| x.dist(p.apply(a), p.apply(b)) + y.dist(q.apply(a), q.apply(b)))
                .collect()
        })
        .collect();
    Ok(Arc::new(FiniteObject::new(cone.object.labels().to_vec(), Structure::Met(d))?))
}

/// Pullback of a cospan `A → C ← B` with its projections.
pub fn pullback(f: &Morphism, g: &Morphism, limits: &Limits) -> Result<Cone> {
    if **f.cod() != **g.cod() {
        return Err(Error::Shape("pullback needs a cospan".into()));
    }
    let full = product(f.dom(), g.dom(), limits)?;
    let (p, q) = (&full.legs[0], &full.legs[1]);
    let keep: Vec<usize> = (0..full.object.len())
        .filter(|&t| f.apply(p.apply(t)) == g.apply(q.apply(t)))
        .collect();
    let keep_edges: Vec<usize> = (0..full.object.edge_count())
        .filter(|&e| f.edges()[p.edges()[e]] == g.edges()[q.edges()[e]])
        .collect();
    let incl = induced_subobject(&full.object, &keep, &keep_edges);
    let legs = vec![incl.then(p)?, incl.then(q)?];
    Ok(Cone {
        object: incl.dom().clone(),
        legs,
    })
}

/// Full subobject on `keep` (and, for multigraphs, the listed edges) with
/// its inclusion.
pub fn induced_subobject(x: &Arc<FiniteObject>, keep: &[usize], keep_edges: &[usize]) -> Morphism {
    let labels: Vec<String> = keep.iter().map(|&i| x.label(i).to_string()).collect();
    let pos = |i: usize| keep.iter().position(|&k| k == i).unwrap();
    let structure = match x.structure() {
        Structure::Pos(_) => Structure::Pos(keep.iter().map(|&a| keep.iter().map(|&b| x.leq(a, b)).collect()).collect()),
        Structure::Gra(_) => Structure::Gra(keep.iter().map(|&a| keep.iter().map(|&b| x.adj(a, b)).collect()).collect()),
        Structure::Met(_) => Structure::Met(keep.iter().map(|&a| keep.iter().map(|&b| x.dist(a, b)).collect()).collect()),
        Structure::MGra(e) => Structure::MGra(MultiEdges {
            labels: keep_edges.iter().map(|&k| e.labels[k].clone()).collect(),
            src: keep_edges.iter().map(|&k| pos(e.src[k])).collect(),
            tgt: keep_edges.iter().map(|&k| pos(e.tgt[k])).collect(),
        }),
    };
    let sub = Arc::new(FiniteObject::new_unchecked(labels, structure));
    Morphism::new_unchecked(sub, x.clone(), keep.to_vec(), keep_edges.to_vec())
}

/// Canonical form of an object up to isomorphism: a key that is equal for
/// two objects iff they are isomorphic, and the element order realising it.
pub fn canonical_form(x: &FiniteObject) -> (Vec<Dist>, Vec<usize>) {
    let n = x.len();
    let sig = |i: usize| -> Vec<Dist> {
        let mut row: Vec<Dist> = match x.backend() {
            Backend::Met => (0..n).map(|j| x.dist(i, j)).collect(),
            Backend::Pos => vec![
                Dist::int((0..n).filter(|&j| x.leq(j, i)).count() as i64),
                Dist::int((0..n).filter(|&j| x.leq(i, j)).count() as i64),
            ],
            Backend::Gra => vec![
                Dist::int(x.adj(i, i) as i64),
                Dist::int((0..n).filter(|&j| x.adj(i, j)).count() as i64),
            ],
            Backend::MGra => {
                let e = x.edges().unwrap();
                vec![
                    Dist::int((0..e.len()).filter(|&k| e.src[k] == i).count() as i64),
                    Dist::int((0..e.len()).filter(|&k| e.tgt[k] == i).count() as i64),
                    Dist::int(e.between(i, i).count() as i64),
                ]
            }
        };
        row.sort();
        row
    };
    let sigs: Vec<Vec<Dist>> = (0..n).map(sig).collect();
    let mut base: Vec<usize> = (0..n).collect();
    base.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    // Blocks of equal signature are permuted among themselves.
    let mut blocks: Vec<Vec<usize>> = vec![];
    for &i in &base {
        match blocks.last_mut() {
            Some(bl) if sigs[bl[0]] == sigs[i] => bl.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut best: Option<(Vec<Dist>, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(n);
    fn run(
        blocks: &[Vec<usize>],
        bi: usize,
        order: &mut Vec<usize>,
        x: &FiniteObject,
        best: &mut Option<(Vec<Dist>, Vec<usize>)>,
    ) {
        if bi == blocks.len() {
            let key = encode(x, order);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                *best = Some((key, order.clone()));
            }
            return;
        }
        let mut used = vec![false; blocks[bi].len()];
        perm_block(blocks, bi, 0, &mut used, order, x, best);
    }
    fn perm_block(
        blocks: &[Vec<usize>],
        bi: usize,
        depth: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        x: &FiniteObject,
        best: &mut Option<(Vec<Dist>, Vec<usize>)>,
    ) {
        let block = &blocks[bi];
        if depth == block.len() {
            run(blocks, bi + 1, order, x, best);
            return;
        }
        for k in 0..block.len() {
            if used[k] {
                continue;
            }
            used[k] = true;
            order.push(block[k]);
            perm_block(blocks, bi, depth + 1, used, order, x, best);
            order.pop();
            used[k] = false;
        }
    }
    run(&blocks, 0, &mut order, x, &mut best);
    let (mut key, order) = best.unwrap_or_default();
    let mut head: Vec<Dist> = vec![Dist::int(x.backend() as i64), Dist::int(n as i64)];
    for s in order.iter().map(|&i| &sigs[i]) {
        head.extend(s.iter().copied());
    }
    head.append(&mut key);
    (head, order)
}

fn encode(x: &FiniteObject, order: &[usize]) -> Vec<Dist> {
    let b = |v: bool| if v { Dist::int(1) } else { Dist::ZERO };
    match x.structure() {
        Structure::Pos(_) => order.iter().flat_map(|&i| order.iter().map(move |&j| b(x.leq(i, j)))).collect(),
        Structure::Gra(_) => order.iter().flat_map(|&i| order.iter().map(move |&j| b(x.adj(i, j)))).collect(),
        Structure::Met(_) => order.iter().flat_map(|&i| order.iter().map(move |&j| x.dist(i, j))).collect(),
        Structure::MGra(e) => {
            let mut rank = vec![0; order.len()];
            for (r, &i) in order.iter().enumerate() {
                rank[i] = r;
            }
            let mut pairs: Vec<(usize, usize)> = (0..e.len()).map(|k| (rank[e.src[k]], rank[e.tgt[k]])).collect();
            pairs.sort();
            pairs
                .into_iter()
                .flat_map(|(s, t)| [Dist::int(s as i64), Dist::int(t as i64)])
                .collect()
        }
    }
}

pub fn is_isomorphic(x: &FiniteObject, y: &FiniteObject) -> bool {
    x.backend() == y.backend() && x.len() == y.len() && x.edge_count() == y.edge_count() && canonical_form(x).0 == canonical_form(y).0
}

/// An explicit isomorphism `X → Y`, if one exists.
pub fn find_isomorphism(x: &Arc<FiniteObject>, y: &Arc<FiniteObject>) -> Option<Morphism> {
    if !is_isomorphic(x, y) {
        return None;
    }
    let (_, ox) = canonical_form(x);
    let (_, oy) = canonical_form(y);
    let mut points = vec![0; x.len()];
    for (k, &i) in ox.iter().enumerate() {
        points[i] = oy[k];
    }
    let edges = match (x.edges(), y.edges()) {
        (Some(ex), Some(ey)) => {
            let mut taken = vec![false; ey.len()];
            let mut out = Vec::with_capacity(ex.len());
            for e in 0..ex.len() {
                let (s, t) = (points[ex.src[e]], points[ex.tgt[e]]);
                let k = ey.between(s, t).find(|&k| !taken[k])?;
                taken[k] = true;
                out.push(k);
            }
            out
        }
        _ => vec![],
    };
    Morphism::new(x.clone(), y.clone(), points, edges).ok().filter(|m| m.is_iso())
}

/// Regular epimorphism test: `f` is the coequalizer of its kernel pair.
pub fn is_regular_epi(f: &Morphism, limits: &Limits) -> Result<bool> {
    let kp = pullback(f, f, limits)?;
    let (q_obj, q) = coequalizer(&kp.legs[0], &kp.legs[1])?;
    // The comparison q_obj → cod(f) is well defined because f coequalizes the pair.
    let mut points = vec![usize::MAX; q_obj.len()];
    for a in 0..f.dom().len() {
        points[q.apply(a)] = f.apply(a);
    }
    let mut edges = vec![usize::MAX; q_obj.edge_count()];
    for e in 0..f.dom().edge_count() {
        edges[q.edges()[e]] = f.edges()[e];
    }
    if points.contains(&usize::MAX) || edges.contains(&usize::MAX) {
        return Ok(false);
    }
    Ok(Morphism::new(q_obj, f.cod().clone(), points, edges).is_ok_and(|m| m.is_iso()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbase::enumerate_morphisms;

    fn arc(x: FiniteObject) -> Arc<FiniteObject> {
        Arc::new(x)
    }

    #[test]
    fn met_product_is_max() {
        let l = Limits::default();
        let x = arc(FiniteObject::metric_from_pairs(&["u", "v"], &[(0, 1, Dist::int(3))]).unwrap());
        let y = arc(FiniteObject::metric_from_pairs(&["p", "q"], &[(0, 1, Dist::int(2))]).unwrap());
        let p = product(&x, &y, &l).unwrap().object;
        let a = p.index_of("(u,p)").unwrap();
        let b = p.index_of("(v,q)").unwrap();
        assert_eq!(p.dist(a, b), Dist::int(3));
        let t = tensor(&x, &y, &l).unwrap();
        assert_eq!(t.dist(a, b), Dist::int(5));
    }

    #[test]
    fn sum_metric_example() {
        let l = Limits::default();
        let x = arc(FiniteObject::metric_from_pairs(&["a", "b"], &[(0, 1, Dist::int(1))]).unwrap());
        let y = arc(FiniteObject::metric_from_pairs(&["p", "q"], &[(0, 1, Dist::int(2))]).unwrap());
        let t = tensor(&x, &y, &l).unwrap();
        assert_eq!(t.dist(t.index_of("(a,p)").unwrap(), t.index_of("(b,q)").unwrap()), Dist::int(3));
        let unit = arc(FiniteObject::unit(Backend::Met));
        assert!(is_isomorphic(&tensor(&x, &unit, &l).unwrap(), &x));
        let c = arc(FiniteObject::chain(2));
        assert_eq!(*tensor(&c, &c, &l).unwrap(), *product(&c, &c, &l).unwrap().object);
    }

    #[test]
    fn chain_squared_has_incomparable_middle() {
        let c = arc(FiniteObject::chain(2));
        let p = product(&c, &c, &Limits::default()).unwrap().object;
        assert_eq!(p.len(), 4);
        let (a, b) = (p.index_of("(0,1)").unwrap(), p.index_of("(1,0)").unwrap());
        assert!(!p.leq(a, b) && !p.leq(b, a));
        let bot = p.index_of("(0,0)").unwrap();
        let top = p.index_of("(1,1)").unwrap();
        assert!((0..4).all(|i| p.leq(bot, i) && p.leq(i, top)));
    }

    #[test]
    fn product_with_terminal() {
        let l = Limits::default();
        for x in [FiniteObject::chain(3), FiniteObject::discrete_metric(2)] {
            let x = arc(x);
            let t = arc(FiniteObject::terminal(x.backend()));
            assert!(is_isomorphic(&product(&x, &t, &l).unwrap().object, &x));
        }
    }

    #[test]
    fn met_coproduct_is_infinitely_far() {
        let a = arc(FiniteObject::metric_from_pairs(&["a"], &[]).unwrap());
        let b = arc(FiniteObject::metric_from_pairs(&["b"], &[]).unwrap());
        let c = coproduct(&[a, b]).unwrap();
        assert_eq!(c.object.dist(0, 1), Dist::Inf);
        let p = coproduct(&[arc(FiniteObject::chain(2)), arc(FiniteObject::antichain(1))]).unwrap();
        assert_eq!(p.object.len(), 3);
        let comparable = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| i != j && p.object.leq(i, j)).count();
        assert_eq!(comparable, 1);
        let hit: std::collections::BTreeSet<usize> = p.legs.iter().flat_map(|l| l.points().to_vec()).collect();
        assert_eq!(hit.len(), 3);
    }

    #[test]
    fn graph_edge_coequalizer_is_loop() {
        let v = arc(FiniteObject::graph(&["v"], &[]).unwrap());
        let e = arc(FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)]).unwrap());
        let f = Morphism::new(v.clone(), e.clone(), vec![0], vec![]).unwrap();
        let g = Morphism::new(v, e, vec![1], vec![]).unwrap();
        let (q, _) = coequalizer(&f, &g).unwrap();
        assert!(is_isomorphic(&q, &FiniteObject::unit(Backend::Gra)));
    }

    #[test]
    fn met_coequalizer_chains() {
        // b0 -1- x ~ y -1- b2
        let b = arc(FiniteObject::metric_from_pairs(&["b0", "x", "y", "b2"], &[(0, 1, Dist::int(1)), (2, 3, Dist::int(1))]).unwrap());
        let pt = arc(FiniteObject::unit(Backend::Met));
        let f = Morphism::new(pt.clone(), b.clone(), vec![1], vec![]).unwrap();
        let g = Morphism::new(pt, b, vec![2], vec![]).unwrap();
        let (c, q) = coequalizer(&f, &g).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dist(q.apply(0), q.apply(3)), Dist::int(2));
    }

    #[test]
    fn coequalizer_of_equal_maps() {
        let c = arc(FiniteObject::chain(3));
        let f = Morphism::identity(&c);
        let (q, _) = coequalizer(&f, &f).unwrap();
        assert!(is_isomorphic(&q, &c));
    }

    #[test]
    fn pos_coequalizer_collapses_cycles() {
        // identify 0 and 2 in the 3-chain: 1 is squeezed into the class.
        let c = arc(FiniteObject::chain(3));
        let pt = arc(FiniteObject::unit(Backend::Pos));
        let f = Morphism::new(pt.clone(), c.clone(), vec![0], vec![]).unwrap();
        let g = Morphism::new(pt, c, vec![2], vec![]).unwrap();
        let (q, _) = coequalizer(&f, &g).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn discretization_examples() {
        let m = arc(FiniteObject::metric_from_pairs(&["a", "b"], &[(0, 1, Dist::int(1))]).unwrap());
        let d = discretize(&m);
        assert_eq!(d.discrete.dist(0, 1), Dist::Inf);
        assert_eq!(d.counit.points(), &[0, 1]);
        let a = arc(FiniteObject::antichain(3));
        assert!(discretize(&a).counit.is_iso());
        let e = arc(FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)]).unwrap());
        let de = discretize(&e);
        assert!(de.discrete.is_empty() && de.counit.points().is_empty());
    }

    #[test]
    fn iso_search_finds_relabelling() {
        let x = arc(FiniteObject::poset(&["a", "b", "c"], &[(0, 2), (1, 2)]).unwrap());
        let y = arc(FiniteObject::poset(&["p", "q", "r"], &[(1, 0), (2, 0)]).unwrap());
        assert!(find_isomorphism(&x, &y).is_some());
        assert!(find_isomorphism(&x, &arc(FiniteObject::chain(3))).is_none());
    }

    #[test]
    fn pullback_universal_on_small_cospan() {
        let l = Limits::default();
        let c = arc(FiniteObject::chain(2));
        let a = arc(FiniteObject::antichain(2));
        let f = Morphism::new(a.clone(), c.clone(), vec![0, 1], vec![]).unwrap();
        let g = Morphism::identity(&c);
        let pb = pullback(&f, &g, &l).unwrap();
        assert!(is_isomorphic(&pb.object, &a));
        assert_eq!(enumerate_morphisms(&pb.object, &c, &l).unwrap().len(), 4);
    }
}
