use crate::dist::Dist;
use crate::vbase::{decode_tuple, encode_tuple, Backend};

use super::{Algebra, UNDEF};

/// Isomorphism-invariant key of an algebra: equal keys iff isomorphic
/// (for algebras of the same theory).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraKey {
    pub theory: String,
    pub backend: Backend,
    pub size: usize,
    pub structure: Vec<Dist>,
    pub tables: Vec<usize>,
}

pub fn is_isomorphic_algebra(a: &Algebra, b: &Algebra) -> bool {
    a.len() == b.len() && *a.theory == *b.theory && algebra_key(a) == algebra_key(b)
}

/// Canonical labelling by colour refinement and individualization; the key
/// is the least encoding over the leaves of the search tree.
pub fn algebra_key(a: &Algebra) -> AlgebraKey {
    let n = a.len();
    let rel = relation_codes(a);
    let mut best: Option<(Vec<Dist>, Vec<usize>)> = None;
    let start = refine(a, &rel, vec![0; n]);
    search(a, &rel, start, &mut best);
    let (structure, tables) = best.unwrap_or_default();
    AlgebraKey {
        theory: a.theory.name.clone(),
        backend: a.backend(),
        size: n,
        structure,
        tables,
    }
}

fn search(a: &Algebra, rel: &[Vec<usize>], colors: Vec<usize>, best: &mut Option<(Vec<Dist>, Vec<usize>)>) {
    let n = colors.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    // First colour class with more than one element, if any.
    let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
        let mut order = vec![0; n];
        for (x, &c) in colors.iter().enumerate() {
            order[c] = x;
        }
        let enc = encode(a, &order);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    };
    for x in (0..n).filter(|&x| colors[x] == target) {
        let split: Vec<usize> = (0..n)
            .map(|y| 2 * colors[y] + usize::from(y != x))
            .collect();
        search(a, rel, refine(a, rel, rerank(&split)), best);
    }
}

fn encode(a: &Algebra, order: &[usize]) -> (Vec<Dist>, Vec<usize>) {
    let n = order.len();
    let mut inv = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        inv[x] = i;
    }
    let c = &a.carrier;
    let mut structure = Vec::with_capacity(n * n);
    for &x in order {
        for &y in order {
            structure.push(match c.backend() {
                Backend::Pos => {
                    if c.leq(x, y) {
                        Dist::ZERO
                    } else {
                        Dist::Inf
                    }
                }
                _ => c.dist(x, y),
            });
        }
    }
    let mut tables = Vec::new();
    for k in 0..a.tables.len() {
        let radices = a.radices(k);
        for idx in 0..a.tables[k].len() {
            let old: Vec<usize> = decode_tuple(idx, &radices).into_iter().map(|i| order[i]).collect();
            let v = a.tables[k][encode_tuple(&old, &radices)];
            tables.push(if v == UNDEF { UNDEF } else { inv[v] });
        }
    }
    (structure, tables)
}

/// Small integer codes for the carrier relation, invariant under relabelling.
fn relation_codes(a: &Algebra) -> Vec<Vec<usize>> {
    let c = &a.carrier;
    let n = c.len();
    match c.backend() {
        Backend::Pos => (0..n).map(|x| (0..n).map(|y| usize::from(c.leq(x, y))).collect()).collect(),
        _ => {
            let mut ds: Vec<Dist> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| c.dist(x, y)).collect();
            ds.sort();
            ds.dedup();
            (0..n)
                .map(|x| (0..n).map(|y| ds.binary_search(&c.dist(x, y)).unwrap()).collect())
                .collect()
        }
    }
}

fn rerank(sig: &[usize]) -> Vec<usize> {
    let mut vals = sig.to_vec();
    vals.sort();
    vals.dedup();
    sig.iter().map(|s| vals.binary_search(s).unwrap()).collect()
}

/// Split colour classes by the colours of neighbours and of operation
/// values until stable.
fn refine(a: &Algebra, rel: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    loop {
        let classes = colors.iter().max().map_or(0, |m| m + 1);
        let k_rel = n * n + 2;
        let mut sigs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|x| {
                let mut parts = Vec::new();
                let mut around: Vec<usize> = (0..n)
                    .map(|y| (colors[y] * k_rel + rel[x][y]) * k_rel + rel[y][x])
                    .collect();
                around.sort();
                parts.push(around);
                for k in 0..a.tables.len() {
                    let radices = a.radices(k);
                    for p in 0..radices.len() {
                        let mut seen: Vec<usize> = Vec::new();
                        for (idx, &v) in a.tables[k].iter().enumerate() {
                            let t = decode_tuple(idx, &radices);
                            if t[p] != x {
                                continue;
                            }
                            let mut code = 0usize;
                            for &y in &t {
                                code = code.wrapping_mul(n + 1).wrapping_add(colors[y]);
                            }
                            let out = if v == UNDEF { n } else { colors[v] };
                            let same = usize::from(v == x);
                            seen.push(code.wrapping_mul(2 * n + 2).wrapping_add(2 * out + same));
                        }
                        seen.sort();
                        parts.push(seen);
                    }
                    if radices.is_empty() {
                        parts.push(vec![usize::from(a.tables[k][0] == x)]);
                    }
                }
                (colors[x], parts)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs
            .drain(..)
            .map(|s| sorted.binary_search(&s).unwrap())
            .collect();
        let count = sorted.len();
        colors = next;
        if count == classes {
            return colors;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::tests::max_monoid;
    use crate::theory::parse_theory;
    use crate::vbase::FiniteObject;

    #[test]
    fn relabelled_algebras_share_a_key() {
        let a = max_monoid(3);
        // Same chain, elements listed top-down.
        let rev = Arc::new(FiniteObject::poset(&["2", "1", "0"], &[(2, 1), (1, 0)]).unwrap());
        let b = Algebra::from_fn(a.theory.clone(), rev, |k, x| if k == 0 { x[0].min(x[1]) } else { 2 }).unwrap();
        assert!(b.is_algebra());
        assert!(is_isomorphic_algebra(&a, &b));
    }

    #[test]
    fn different_tables_differ() {
        let t = Arc::new(parse_theory("theory u over pos { op u : 1; }").unwrap());
        let anti = Arc::new(FiniteObject::antichain(3));
        let id = Algebra::from_fn(t.clone(), anti.clone(), |_, x| x[0]).unwrap();
        let swap = Algebra::from_fn(t.clone(), anti.clone(), |_, x| [1, 0, 2][x[0]]).unwrap();
        let swap2 = Algebra::from_fn(t.clone(), anti.clone(), |_, x| [0, 2, 1][x[0]]).unwrap();
        let cycle = Algebra::from_fn(t, anti, |_, x| (x[0] + 1) % 3).unwrap();
        assert!(!is_isomorphic_algebra(&id, &swap));
        assert!(is_isomorphic_algebra(&swap, &swap2));
        assert!(!is_isomorphic_algebra(&swap, &cycle));
    }
}
