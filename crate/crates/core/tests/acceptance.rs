//! One test per acceptance criterion. Each prints a `PASS`/`FAIL` line and,
//! where a cheap independent check exists, re-derives the verdict here.
//!
//! Run with `cargo test -p wb-core --test acceptance -- --nocapture`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use wb_core::birkhoff::is_mu_pure;
use wb_core::counterexamples::met_product_coeq_gap;
use wb_core::dist::Dist;
use wb_core::freeterm::{derive, Deduction};
use wb_core::limits::Limits;
use wb_core::suite::{run_criterion, samples, Outcome};
use wb_core::theory::{parse_term, Context, Hypothesis, Judgment};
use wb_core::vbase::{
    discretize, enumerate_morphisms, enumerate_objects, hom_points, Backend, FiniteObject, Morphism,
};

fn run(id: u8, budget: Duration) -> Outcome {
    let limits = Limits::default();
    let start = Instant::now();
    let outcome = run_criterion(id, &limits).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    let took = start.elapsed();
    println!(
        "criterion {:>2} {:<58} {} ({} checked, {:.2?})",
        id,
        outcome.name,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.checked,
        took
    );
    assert!(outcome.passed, "criterion {id} failed: {}", outcome.detail);
    assert!(took <= budget, "criterion {id} took {took:?}, budget {budget:?}");
    outcome
}

const NO_BUDGET: Duration = Duration::from_secs(3600);

#[test]
fn criterion_01_graph_counterexample() {
    let out = run(1, Duration::from_secs(1));
    // The edge graph, rebuilt here: no vertex carries a loop, so no point
    // maps onto it, and the vertex collapse is therefore not surjective.
    let e = FiniteObject::graph_undirected(&["a", "b"], &[(0, 1)]).unwrap();
    let loops: Vec<usize> = (0..e.len()).filter(|&v| e.adj(v, v)).collect();
    assert!(loops.is_empty());
    assert!(hom_points(&e).is_empty());
    let lp = FiniteObject::unit(Backend::Gra);
    assert!(lp.adj(0, 0));
    assert_eq!(out.detail["points_of_edge"], serde_json::json!([]));
    assert_eq!(out.detail["edge_to_loop_is_regular_epi"], true);
    assert_eq!(out.detail["edge_to_loop_is_surjection"], false);
}

#[test]
fn criterion_02_factorization_and_orthogonality() {
    run(2, Duration::from_secs(300));
}

#[test]
fn criterion_03_injections_monic_on_points() {
    run(3, NO_BUDGET);
}

#[test]
fn criterion_04_surjections_cancel_and_pull_back() {
    run(4, NO_BUDGET);
}

#[test]
fn criterion_05_monad_preserves_surjections() {
    run(5, Duration::from_secs(300));
}

#[test]
fn criterion_06_chain_arity_breaks_preservation() {
    run(6, NO_BUDGET);
    // Independent re-check by enumeration: the depth-1 terms over the
    // discrete two-point context are 0, 1, s(0, 0), s(1, 1); none of them
    // is derivably equal to s(0, 1) over the two-chain.
    let limits = Limits::default();
    let chain = samples::chain();
    let x = Arc::new(FiniteObject::chain(2));
    let delta = discretize(&x).counit;
    let cy = Context::from_object(delta.cod()).unwrap();
    let witness = parse_term("s(0, 1)", &cy, &chain.signature).unwrap();
    let images = ["0", "1", "s(0, 0)", "s(1, 1)"];
    for img in images {
        let u = parse_term(img, &cy, &chain.signature).unwrap();
        let d = derive(&chain, &cy, &Judgment::Eq(u, witness.clone()), 1, &limits).unwrap();
        assert!(!d.holds, "{img} = s(0, 1) should not be derivable");
    }
    let cx = Context::from_object(delta.dom()).unwrap();
    let well_formed_over_domain = match parse_term("s(0, 1)", &cx, &chain.signature) {
        Err(_) => false,
        Ok(t) => derive(&chain, &cx, &Judgment::Eq(t.clone(), t), 1, &limits).unwrap().holds,
    };
    assert!(!well_formed_over_domain);
}

#[test]
fn criterion_07_equations_survive_constructions() {
    run(7, NO_BUDGET);
}

/// Brute-force section search: every point map `cod → dom` that is a
/// morphism and splits `f`.
fn has_section(f: &Morphism, limits: &Limits) -> bool {
    let (dom, cod) = (f.dom().clone(), f.cod().clone());
    enumerate_morphisms(&cod, &dom, limits)
        .unwrap()
        .iter()
        .any(|s| (0..cod.len()).all(|y| f.apply(s.apply(y)) == y))
}

#[test]
fn criterion_08_mu_pure_equals_split() {
    run(8, NO_BUDGET);
    let limits = Limits::default();
    for backend in [Backend::Pos, Backend::Met] {
        let objs: Vec<Arc<FiniteObject>> = enumerate_objects(backend, 3, &limits.met_grid).into_iter().map(Arc::new).collect();
        for x in &objs {
            for y in &objs {
                for f in enumerate_morphisms(x, y, &limits).unwrap() {
                    assert_eq!(is_mu_pure(&f, 2, &limits).unwrap(), has_section(&f, &limits));
                }
            }
        }
    }
}

/// Floyd–Warshall over optional weights.
fn all_pairs(w: &[Vec<Option<Dist>>]) -> Vec<Vec<Dist>> {
    let n = w.len();
    let mut d: Vec<Vec<Dist>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Dist::ZERO } else { w[i][j].unwrap_or(Dist::Inf) }).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[test]
fn criterion_09_least_distance_is_path_metric() {
    run(9, NO_BUDGET);
    let limits = Limits::default();
    let theory = samples::unary();
    let options = [Some(Dist::ratio(1, 2)), Some(Dist::int(1)), Some(Dist::int(3)), None];
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let vars: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        for code in 0..options.len().pow(pairs.len() as u32) {
            let mut c = code;
            let mut w = vec![vec![None; n]; n];
            let mut hyps = Vec::new();
            for &(i, j) in &pairs {
                if let Some(d) = options[c % options.len()] {
                    hyps.push(Hypothesis::Dist(vars[i].clone(), vars[j].clone(), d));
                    w[i][j] = Some(d);
                    w[j][i] = Some(d);
                }
                c /= options.len();
            }
            let ctx = Context::new(Backend::Met, vars.clone(), hyps).unwrap();
            let ded = Deduction::run(&theory, &ctx, 0, &limits).unwrap();
            let fw = all_pairs(&w);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(ded.bound(ded.bank.var(i), ded.bank.var(j)), fw[i][j]);
                }
            }
        }
    }
}

/// Distance between `(x, b)` and `(x', b')` after gluing `(z, i) ~ (z, j)`
/// for every `z`, by Floyd–Warshall on the sup-metric product.
fn glued_product_distance(x: &FiniteObject, b: &FiniteObject, i: usize, j: usize, p: (usize, usize), q: (usize, usize)) -> Dist {
    let (nx, nb) = (x.len(), b.len());
    let idx = |u: usize, v: usize| u * nb + v;
    let mut w = vec![vec![None; nx * nb]; nx * nb];
    for u in 0..nx {
        for v in 0..nb {
            for u2 in 0..nx {
                for v2 in 0..nb {
                    w[idx(u, v)][idx(u2, v2)] = Some(x.dist(u, u2).max(b.dist(v, v2)));
                }
            }
        }
        w[idx(u, i)][idx(u, j)] = Some(Dist::ZERO);
        w[idx(u, j)][idx(u, i)] = Some(Dist::ZERO);
    }
    all_pairs(&w)[idx(p.0, p.1)][idx(q.0, q.1)]
}

#[test]
fn criterion_10_product_coequalizer_gap() {
    run(10, Duration::from_secs(60));
    let limits = Limits::default();
    let grid = vec![Dist::ZERO, Dist::int(1), Dist::int(2), Dist::int(3), Dist::Inf];
    let w = met_product_coeq_gap(4, &grid, &limits).unwrap();
    let x = w.factor.validate().unwrap();
    let b = w.base.validate().unwrap();
    let at = |o: &FiniteObject, l: &str| o.index_of(l).unwrap();
    let (i, j) = (at(&b, &w.identified.0), at(&b, &w.identified.1));
    let p = (at(&x, &w.points.0 .0), at(&b, &w.points.0 .1));
    let q = (at(&x, &w.points.1 .0), at(&b, &w.points.1 .1));
    let mut wb = vec![vec![None; b.len()]; b.len()];
    for (u, row) in wb.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = Some(b.dist(u, v));
        }
    }
    wb[i][j] = Some(Dist::ZERO);
    wb[j][i] = Some(Dist::ZERO);
    let lhs = x.dist(p.0, q.0).max(all_pairs(&wb)[p.1][q.1]);
    let rhs = glued_product_distance(&x, &b, i, j, p, q);
    assert_eq!((lhs, rhs), (w.lhs, w.rhs));
    assert!(lhs < rhs);
}

#[test]
fn criterion_11_closure_satisfies_synthesized_equations() {
    run(11, NO_BUDGET);
}

#[test]
fn criterion_12_cotensors_satisfy_equations() {
    run(12, NO_BUDGET);
}
