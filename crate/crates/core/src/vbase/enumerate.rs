use std::collections::BTreeMap;

use crate::dist::Dist;

use super::constructions::canonical_form;
use super::object::{numbered, transitive_closure, Backend, FiniteObject, MultiEdges, Structure};

/// All objects of `backend` with `size() ≤ max_size`, one per isomorphism
/// class, ordered by size and then canonical key.
///
/// Metric spaces draw their off-diagonal distances from `grid` (zero and
/// negative entries are skipped).
pub fn enumerate_objects(backend: Backend, max_size: usize, grid: &[Dist]) -> Vec<FiniteObject> {
    let mut classes: BTreeMap<(usize, Vec<Dist>), FiniteObject> = BTreeMap::new();
    let mut add = |x: FiniteObject| {
        let key = (x.size(), canonical_form(&x).0);
        classes.entry(key).or_insert(x);
    };
    match backend {
        Backend::Pos => {
            for n in 0..=max_size {
                let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                for mask in 0u64..(1 << slots.len()) {
                    let mut m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
                    for (k, &(i, j)) in slots.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            m[i][j] = true;
                        }
                    }
                    let before = m.clone();
                    transitive_closure(&mut m);
                    if m == before {
                        add(FiniteObject::new_unchecked(numbered(n), Structure::Pos(m)));
                    }
                }
            }
        }
        Backend::Met => {
            let values: Vec<Dist> = grid.iter().copied().filter(|d| !d.is_zero() && !d.is_negative()).collect();
            for n in 0..=max_size {
                let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                let mut choice = vec![0usize; slots.len()];
                loop {
                    let mut d = vec![vec![Dist::ZERO; n]; n];
                    for (k, &(i, j)) in slots.iter().enumerate() {
                        d[i][j] = values[choice[k]];
                        d[j][i] = values[choice[k]];
                    }
                    if let Ok(x) = FiniteObject::new(numbered(n), Structure::Met(d)) {
                        add(x);
                    }
                    if !bump(&mut choice, values.len()) {
                        break;
                    }
                }
            }
        }
        Backend::Gra => {
            for n in 0..=max_size {
                let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
                for mask in 0u64..(1 << slots.len()) {
                    let mut a = vec![vec![false; n]; n];
                    for (k, &(i, j)) in slots.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            a[i][j] = true;
                            a[j][i] = true;
                        }
                    }
                    add(FiniteObject::new_unchecked(numbered(n), Structure::Gra(a)));
                }
            }
        }
        Backend::MGra => {
            for v in 0..=max_size {
                let ends: Vec<(usize, usize)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
                for e in 0..=(max_size - v) {
                    if e > 0 && ends.is_empty() {
                        break;
                    }
                    // Multisets of `e` edge endpoints: nondecreasing index sequences.
                    let mut seq = vec![0usize; e];
                    loop {
                        let me = MultiEdges {
                            labels: (0..e).map(|k| format!("e{k}")).collect(),
                            src: seq.iter().map(|&k| ends[k].0).collect(),
                            tgt: seq.iter().map(|&k| ends[k].1).collect(),
                        };
                        add(FiniteObject::new_unchecked(numbered(v), Structure::MGra(me)));
                        if !bump_sorted(&mut seq, ends.len()) {
                            break;
                        }
                    }
                }
            }
        }
    }
    classes.into_values().collect()
}

/// Odometer increment; false once every digit wrapped.
pub(crate) fn bump(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn bump_sorted(seq: &mut [usize], base: usize) -> bool {
    let n = seq.len();
    for k in (0..n).rev() {
        if seq[k] + 1 < base {
            let v = seq[k] + 1;
            for s in &mut seq[k..] {
                *s = v;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts_match_known_sequence() {
        // Unlabelled posets: 1, 1, 2, 5, 16.
        let all = enumerate_objects(Backend::Pos, 4, &[]);
        let count = |n| all.iter().filter(|x| x.len() == n).count();
        assert_eq!((0..=4).map(count).collect::<Vec<_>>(), vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn graph_counts() {
        // Graphs with loops allowed, up to isomorphism: 1, 2, 6, 20.
        let all = enumerate_objects(Backend::Gra, 3, &[]);
        let count = |n| all.iter().filter(|x| x.len() == n).count();
        assert_eq!((0..=3).map(count).collect::<Vec<_>>(), vec![1, 2, 6, 20]);
        // The loopless vertex comes before the looped one.
        assert!(!all[1].adj(0, 0) && all[2].adj(0, 0));
    }

    #[test]
    fn metric_spaces_on_small_grid() {
        let grid = [Dist::int(1), Dist::int(2), Dist::Inf];
        let all = enumerate_objects(Backend::Met, 3, &grid);
        assert_eq!(all.iter().filter(|x| x.len() == 2).count(), 3);
        // multisets {a,b,c} over {1,2,∞} obeying the triangle inequality:
        // all 10 multisets except {1,1,∞} and {1,2,∞}... and {1,1,2} is fine.
        let three: Vec<_> = all.iter().filter(|x| x.len() == 3).collect();
        let mut brute = 0;
        let vals = [Dist::int(1), Dist::int(2), Dist::Inf];
        for a in 0..3 {
            for b in a..3 {
                for c in b..3 {
                    let (x, y, z) = (vals[a], vals[b], vals[c]);
                    if z <= x + y {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(three.len(), brute);
    }

    #[test]
    fn multigraph_sizes_count_edges() {
        let all = enumerate_objects(Backend::MGra, 2, &[]);
        assert!(all.iter().all(|x| x.size() <= 2));
        // empty; one vertex; two vertices; one vertex with a loop.
        assert_eq!(all.len(), 4);
    }
}
