use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::algebra::{
    cotensor_algebra, enumerate_algebras, product_algebra, split_quotients, subalgebras, Algebra,
};
use crate::birkhoff::{is_mu_pure, variety_probe, SynthesisSpec};
use crate::counterexamples::{graph_factorization_failure, met_product_coeq_gap, revalidate_gap};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::factor::{factorize, first_non_unique_square, is_injection, is_surjection};
use crate::freeterm::{check_discrete, monad_map, monad_surjectivity, preserves_surjections_probe, Deduction};
use crate::limits::Limits;
use crate::theory::{parse_term, render_context, Context, Equation, Hypothesis, Theory};
use crate::vbase::{
    discretize, enumerate_morphisms, enumerate_objects, hom_points_map, pullback, Backend, FiniteObject, Morphism,
};

use super::samples;
use super::{Outcome, NAMES};

pub fn run_criterion(id: u8, limits: &Limits) -> Result<Outcome> {
    let (passed, checked, detail) = match id {
        1 => graph(limits)?,
        2 => orthogonality(limits)?,
        3 => injections_monic(limits)?,
        4 => surjection_remark(limits)?,
        5 => monad_preserves(limits)?,
        6 => chain_arity(limits)?,
        7 => birkhoff_constructions(limits)?,
        8 => mu_pure_split(limits)?,
        9 => path_metric(limits)?,
        10 => met_gap(limits)?,
        11 => variety_soundness(limits)?,
        12 => cotensors(limits)?,
        _ => return Err(Error::Unsupported(format!("no criterion {id}"))),
    };
    Ok(Outcome {
        id,
        name: NAMES[id as usize - 1].1,
        passed,
        checked,
        detail,
    })
}

type Verdict = (bool, usize, serde_json::Value);

fn objects(backend: Backend, max: usize, grid: &[Dist]) -> Vec<Arc<FiniteObject>> {
    enumerate_objects(backend, max, grid).into_iter().map(Arc::new).collect()
}

/// Every morphism between the listed objects.
fn all_morphisms(objs: &[Arc<FiniteObject>], limits: &Limits) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for x in objs {
        for y in objs {
            out.extend(enumerate_morphisms(x, y, limits)?);
        }
    }
    Ok(out)
}

fn graph(limits: &Limits) -> Result<Verdict> {
    let r = graph_factorization_failure(limits)?;
    Ok((r.holds, 1, serde_json::to_value(&r).expect("report serializes")))
}

fn half_grid() -> Vec<Dist> {
    vec![Dist::ratio(1, 2), Dist::int(1), Dist::int(2), Dist::Inf]
}

fn orthogonality(limits: &Limits) -> Result<Verdict> {
    let grid = half_grid();
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut squares = 0usize;
    for backend in [Backend::Pos, Backend::Met] {
        let objs = objects(backend, 3, &grid);
        let maps = all_morphisms(&objs, limits)?;
        let mut surj = Vec::new();
        let mut inj = Vec::new();
        for f in &maps {
            checked += 1;
            let fac = factorize(f)?;
            let ok = is_surjection(&fac.epi_part)
                && is_injection(&fac.mono_part, limits)?
                && fac.epi_part.then(&fac.mono_part)?.same_map(f);
            if !ok {
                failures.push(format!("{backend}: factorization of {:?}", f.points()));
            }
            if is_surjection(f) {
                surj.push(f.clone());
            }
            if is_injection(f, limits)? {
                inj.push(f.clone());
            }
        }
        let bad: Vec<Result<Option<String>>> = surj
            .par_iter()
            .map(|e| {
                for m in &inj {
                    if let Some(r) = first_non_unique_square(e, m, limits)? {
                        return Ok(Some(format!("{backend}: {} diagonals for {:?} against {:?}", r.diagonals.len(), e.points(), m.points())));
                    }
                }
                Ok(None)
            })
            .collect();
        for b in bad {
            if let Some(msg) = b? {
                failures.push(msg);
            }
        }
        squares += surj.len() * inj.len();
    }
    Ok((
        failures.is_empty(),
        checked,
        json!({"morphisms": checked, "surjection_injection_pairs": squares, "grid": grid, "failures": failures}),
    ))
}

fn injections_monic(limits: &Limits) -> Result<Verdict> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for backend in Backend::ALL {
        let objs = objects(backend, 3, &limits.met_grid);
        for f in all_morphisms(&objs, limits)? {
            if !is_injection(&f, limits)? {
                continue;
            }
            checked += 1;
            let mut images: Vec<usize> = hom_points_map(&f).into_iter().map(|(_, y)| y).collect();
            let n = images.len();
            images.sort();
            images.dedup();
            if images.len() != n {
                failures.push(format!("{backend}: {:?}", f.points()));
            }
        }
    }
    Ok((failures.is_empty(), checked, json!({"injections": checked, "failures": failures})))
}

fn surjection_remark(limits: &Limits) -> Result<Verdict> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for backend in Backend::ALL {
        let objs = objects(backend, 3, &limits.met_grid);
        let n = objs.len();
        let mut homs: Vec<Vec<Vec<Morphism>>> = Vec::with_capacity(n);
        for x in &objs {
            homs.push(objs.iter().map(|y| enumerate_morphisms(x, y, limits)).collect::<Result<_>>()?);
        }
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
        let results: Vec<Result<(usize, Vec<String>)>> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                let mut count = 0;
                let mut bad = Vec::new();
                // Right cancellation: g∘f surjective forces g surjective.
                for f in &homs[i][j] {
                    for g in &homs[j][k] {
                        count += 1;
                        if is_surjection(&f.then(g)?) && !is_surjection(g) {
                            bad.push(format!("{backend}: cancellation {:?} then {:?}", f.points(), g.points()));
                        }
                    }
                }
                // Pullback of a surjection X → Z along any Y → Z.
                for f in homs[i][k].iter().filter(|f| is_surjection(f)) {
                    for g in &homs[j][k] {
                        count += 1;
                        let cone = pullback(f, g, limits)?;
                        if !is_surjection(&cone.legs[1]) {
                            bad.push(format!("{backend}: pullback of {:?} along {:?}", f.points(), g.points()));
                        }
                    }
                }
                Ok((count, bad))
            })
            .collect();
        for r in results {
            let (c, bad) = r?;
            checked += c;
            failures.extend(bad);
        }
    }
    Ok((failures.is_empty(), checked, json!({"instances": checked, "failures": failures})))
}

fn monad_preserves(limits: &Limits) -> Result<Verdict> {
    let om = samples::om();
    let mut checked = 0;
    let mut reports = Vec::new();
    let mut passed = true;
    // Term level: every term over the codomain has a preimage term.
    for depth in 1..=3 {
        let r = preserves_surjections_probe(&om, depth, 3, limits)?;
        checked += r.surjections_checked;
        passed &= r.holds;
        reports.push(json!({"level": "terms", "depth": depth, "size_bound": 3, "surjections": r.surjections_checked, "holds": r.holds, "failure": r.failure}));
    }
    // Class level, where the deduction engine fits: the induced map of
    // approximate free algebras is itself a surjection.
    let objs = objects(Backend::Pos, 3, &limits.met_grid);
    let surj: Vec<Morphism> = all_morphisms(&objs, limits)?.into_iter().filter(is_surjection).collect();
    for depth in 1..=2 {
        let verdicts: Vec<Result<bool>> = surj
            .par_iter()
            .map(|f| Ok(is_surjection(&monad_map(&om, f, depth, limits)?.2)))
            .collect();
        let mut holds = true;
        for v in verdicts {
            holds &= v?;
        }
        checked += surj.len();
        passed &= holds;
        reports.push(json!({"level": "classes", "depth": depth, "size_bound": 3, "surjections": surj.len(), "holds": holds}));
    }
    Ok((passed, checked, json!({"theory": om.name, "probes": reports})))
}

fn chain_arity(limits: &Limits) -> Result<Verdict> {
    let chain = samples::chain();
    let disc = check_discrete(&chain, 1, 2, limits)?;
    let probe = preserves_surjections_probe(&chain, 1, 2, limits)?;
    let x = Arc::new(FiniteObject::chain(2));
    let delta = discretize(&x).counit;
    let failure = monad_surjectivity(&chain, &delta, 1, limits)?;
    let revalidated = match &failure {
        Some(f) => revalidate_uncovered(&chain, &delta, &f.term, 1, limits)?,
        None => false,
    };
    let passed = !disc.holds && !probe.holds && failure.is_some() && revalidated;
    Ok((
        passed,
        probe.surjections_checked + disc.contexts_checked,
        json!({
            "discrete": disc,
            "probe_holds": probe.holds,
            "witness": failure,
            "witness_revalidates": revalidated,
        }),
    ))
}

/// Re-parse `term` over the codomain of `f` and confirm that it is
/// well-formed there while no well-formed term over the domain renames to
/// anything derivably equal to it.
fn revalidate_uncovered(theory: &Theory, f: &Morphism, term: &str, depth: usize, limits: &Limits) -> Result<bool> {
    let cx = Context::from_object(f.dom())?;
    let cy = Context::from_object(f.cod())?;
    let t = parse_term(term, &cy, &theory.signature)?;
    let dy = Deduction::run(theory, &cy, depth, limits)?;
    let dx = Deduction::run(theory, &cx, depth, limits)?;
    let Some(tid) = dy.bank.find(&t) else {
        return Ok(false);
    };
    if !dy.wf[tid] {
        return Ok(false);
    }
    let image = dx.bank.transport(&dy.bank, f.points());
    let covered = dx
        .well_formed()
        .any(|s| image[s].is_some_and(|u| dy.wf[u] && dy.equal(u, tid)));
    Ok(!covered)
}

fn e_algebras(theory: &Arc<Theory>, eqs: &[Equation], max: usize, limits: &Limits) -> Result<Vec<Algebra>> {
    Ok(enumerate_algebras(theory, max, limits)?
        .into_iter()
        .filter(|a| a.satisfies_all(eqs))
        .collect())
}

fn birkhoff_constructions(limits: &Limits) -> Result<Verdict> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut per_theory = Vec::new();
    for (theory, eqs) in samples::with_equations(limits)? {
        let algs = e_algebras(&theory, &eqs, 3, limits)?;
        let mut built = Vec::new();
        for i in 0..algs.len() {
            for j in i..algs.len() {
                built.push(("product", product_algebra(&[algs[i].clone(), algs[j].clone()], limits)?.0));
            }
            built.extend(subalgebras(&algs[i], limits)?.into_iter().map(|(s, _)| ("subalgebra", s)));
            built.extend(split_quotients(&algs[i], limits)?.into_iter().map(|q| ("split quotient", q.algebra)));
        }
        let bad: Vec<String> = built
            .par_iter()
            .filter(|(_, b)| !(b.is_algebra() && b.satisfies_all(&eqs)))
            .map(|(kind, b)| format!("{}: {kind} on {} elements", theory.name, b.len()))
            .collect();
        checked += built.len();
        per_theory.push(json!({"theory": theory.name, "e_algebras": algs.len(), "constructions": built.len()}));
        failures.extend(bad);
    }
    Ok((failures.is_empty(), checked, json!({"theories": per_theory, "max_carrier": 3, "failures": failures})))
}

fn mu_pure_split(limits: &Limits) -> Result<Verdict> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mu_cap = 2;
    for backend in [Backend::Pos, Backend::Met] {
        let objs = objects(backend, 4, &limits.met_grid);
        let maps = all_morphisms(&objs, limits)?;
        let bad: Vec<Result<Option<String>>> = maps
            .par_iter()
            .map(|f| {
                let pure = is_mu_pure(f, mu_cap, limits)?;
                let split = has_section_exhaustive(f, limits)?;
                Ok((pure != split).then(|| format!("{backend}: {:?} pure={pure} split={split}", f.points())))
            })
            .collect();
        checked += maps.len();
        for b in bad {
            failures.extend(b?);
        }
    }
    Ok((failures.is_empty(), checked, json!({"morphisms": checked, "mu_cap": mu_cap, "max_size": 4, "failures": failures})))
}

/// Brute force over every morphism `cod(f) → dom(f)`.
fn has_section_exhaustive(f: &Morphism, limits: &Limits) -> Result<bool> {
    if !is_surjection(f) {
        return Ok(false);
    }
    for s in enumerate_morphisms(f.cod(), f.dom(), limits)? {
        if s.then(f)?.is_identity() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn path_metric(limits: &Limits) -> Result<Verdict> {
    let theory = samples::unary();
    let options = [Some(Dist::ratio(1, 2)), Some(Dist::int(1)), Some(Dist::int(2)), None];
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let total = options.len().pow(pairs.len() as u32);
        let vars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let bad: Vec<Result<Option<String>>> = (0..total)
            .into_par_iter()
            .map(|code| {
                let mut c = code;
                let mut w = vec![vec![None; n]; n];
                let mut hyps = Vec::new();
                for &(i, j) in &pairs {
                    let opt = options[c % options.len()];
                    c /= options.len();
                    if let Some(d) = opt {
                        hyps.push(Hypothesis::Dist(vars[i].clone(), vars[j].clone(), d));
                        w[i][j] = Some(d);
                        w[j][i] = Some(d);
                    }
                }
                let ctx = Context::new(Backend::Met, vars.clone(), hyps)?;
                let ded = Deduction::run(&theory, &ctx, 0, limits)?;
                for i in 0..n {
                    for j in 0..n {
                        let derived = ded.bound(ded.bank.var(i), ded.bank.var(j));
                        let expected = if i == j { Dist::ZERO } else { simple_path_min(&w, i, j) };
                        if derived != expected {
                            return Ok(Some(format!("{}: d({i},{j}) derived {derived}, paths give {expected}", render_context(&ctx))));
                        }
                    }
                }
                Ok(None)
            })
            .collect();
        checked += total;
        for b in bad {
            failures.extend(b?);
        }
    }
    Ok((failures.is_empty(), checked, json!({"contexts": checked, "max_points": 5, "failures": failures})))
}

/// Least total weight over simple paths, by depth-first enumeration.
fn simple_path_min(w: &[Vec<Option<Dist>>], from: usize, to: usize) -> Dist {
    fn go(w: &[Vec<Option<Dist>>], at: usize, to: usize, seen: &mut Vec<bool>, acc: Dist, best: &mut Dist) {
        if at == to {
            *best = (*best).min(acc);
            return;
        }
        for next in 0..w.len() {
            if let (false, Some(d)) = (seen[next], w[at][next]) {
                seen[next] = true;
                go(w, next, to, seen, acc + d, best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; w.len()];
    seen[from] = true;
    let mut best = Dist::Inf;
    go(w, from, to, &mut seen, Dist::ZERO, &mut best);
    best
}

fn met_gap(limits: &Limits) -> Result<Verdict> {
    let grid = vec![Dist::ZERO, Dist::int(1), Dist::int(2), Dist::int(3), Dist::Inf];
    let w = met_product_coeq_gap(4, &grid, limits)?;
    let (lhs, rhs) = revalidate_gap(&w)?;
    let passed = lhs == w.lhs && rhs == w.rhs && lhs < rhs;
    Ok((passed, 1, json!({"witness": w, "revalidated": {"lhs": lhs, "rhs": rhs}})))
}

fn generators() -> Vec<Algebra> {
    let osg = samples::osg();
    let unary = samples::unary();
    let max = Algebra::from_fn(osg, Arc::new(FiniteObject::chain(2)), |_, x| x[0].max(x[1])).expect("max on a chain");
    let far = Arc::new(FiniteObject::metric_from_pairs(&["0", "1"], &[(0, 1, Dist::int(2))]).expect("two points"));
    let id = Algebra::from_fn(unary, far, |_, x| x[0]).expect("identity");
    vec![max, id]
}

fn variety_soundness(limits: &Limits) -> Result<Verdict> {
    let spec = SynthesisSpec::new(2, 2);
    let mut passed = true;
    let mut checked = 0;
    let mut reports = Vec::new();
    for g in generators() {
        let r = variety_probe(&g.theory, &[g.clone()], 3, &spec, limits)?;
        passed &= r.sound;
        checked += r.closure_size;
        reports.push(json!({
            "theory": g.theory.name,
            "equations": r.equations.equations.len(),
            "closure": r.closure_size,
            "closure_saturated": r.closure_saturated,
            "universe": r.universe_size,
            "models": r.models,
            "sound": r.sound,
            "unsound": r.unsound,
            "completeness_findings": r.findings.len(),
            "single_component_same_models": r.single_component.same_models,
        }));
    }
    Ok((passed, checked, json!({"probes": reports, "max_carrier": 3, "depth": spec.depth, "mu_cap": spec.mu_cap})))
}

fn cotensors(limits: &Limits) -> Result<Verdict> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (theory, eqs) in samples::with_equations(limits)? {
        let algs = e_algebras(&theory, &eqs, 3, limits)?;
        let vs = objects(theory.backend(), 3, &limits.met_grid);
        let jobs: Vec<(&Algebra, &Arc<FiniteObject>)> = algs.iter().flat_map(|a| vs.iter().map(move |v| (a, v))).collect();
        let bad: Vec<Result<Option<String>>> = jobs
            .par_iter()
            .map(|&(a, v)| {
                let c = cotensor_algebra(v, a, limits)?;
                Ok((!(c.is_algebra() && c.satisfies_all(&eqs)))
                    .then(|| format!("{}: cotensor of a {}-element algebra by a {}-point object", theory.name, a.len(), v.len())))
            })
            .collect();
        checked += jobs.len();
        for b in bad {
            failures.extend(b?);
        }
    }
    Ok((failures.is_empty(), checked, json!({"cotensors": checked, "max_size": 3, "failures": failures})))
}
