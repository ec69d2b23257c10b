use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::theory::Theory;
use crate::vbase::{decode_tuple, enumerate_objects, Backend};

use super::{algebra_key, Algebra, AlgebraKey, UNDEF};

/// Every algebra of `theory` with at most `max_carrier` elements, one per
/// isomorphism class, ordered by canonical key (so by size first).
///
/// Metric carriers draw distances from `limits.met_grid`.
pub fn enumerate_algebras(theory: &Arc<Theory>, max_carrier: usize, limits: &Limits) -> Result<Vec<Algebra>> {
    let mut found: BTreeMap<AlgebraKey, Algebra> = BTreeMap::new();
    let mut budget = limits.max_maps;
    for carrier in enumerate_objects(theory.backend(), max_carrier, &limits.met_grid) {
        if carrier.is_empty() && theory.signature.ops.iter().any(|o| o.arg_count() == 0) {
            continue;
        }
        let carrier = Arc::new(carrier);
        let shell = Algebra::from_fn(theory.clone(), carrier.clone(), |_, _| 0)?;
        // Slots: the in-domain argument tuples of every operation.
        let slots: Vec<(usize, usize)> = (0..shell.tables.len())
            .flat_map(|k| {
                let shell = &shell;
                (0..shell.tables[k].len())
                    .filter(move |&i| shell.tables[k][i] != UNDEF)
                    .map(move |i| (k, i))
            })
            .collect();
        let mut tables = shell.tables.clone();
        let mut leaves = Vec::new();
        fill(&shell, &slots, 0, &mut tables, &mut budget, limits.max_maps, &mut |t| leaves.push(t.to_vec()))?;
        for t in leaves {
            let alg = Algebra {
                theory: theory.clone(),
                carrier: carrier.clone(),
                tables: t,
            };
            if alg.check().ok {
                found.entry(algebra_key(&alg)).or_insert(alg);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Backtracking over table entries, pruning assignments that already break
/// monotonicity (or nonexpansiveness) against earlier entries of the same
/// operation.
fn fill(
    shell: &Algebra,
    slots: &[(usize, usize)],
    s: usize,
    tables: &mut Vec<Vec<usize>>,
    budget: &mut u128,
    cap: u128,
    emit: &mut impl FnMut(&[Vec<usize>]),
) -> Result<()> {
    if s == slots.len() {
        emit(tables);
        return Ok(());
    }
    let (k, idx) = slots[s];
    let radices = shell.radices(k);
    let here = decode_tuple(idx, &radices);
    let c = &shell.carrier;
    for v in 0..c.len() {
        if *budget == 0 {
            return Err(Error::SizeLimitExceeded {
                what: "algebra table search",
                requested: cap + 1,
                cap,
            });
        }
        *budget -= 1;
        let ok = slots[..s].iter().filter(|(k2, _)| *k2 == k).all(|&(_, j)| {
            let there = decode_tuple(j, &radices);
            let w = tables[k][j];
            match c.backend() {
                Backend::Pos => {
                    let up = here.iter().zip(&there).all(|(a, b)| c.leq(*a, *b));
                    let down = here.iter().zip(&there).all(|(a, b)| c.leq(*b, *a));
                    (!up || c.leq(v, w)) && (!down || c.leq(w, v))
                }
                _ => {
                    let bound = here.iter().zip(&there).map(|(a, b)| c.dist(*a, *b)).fold(Dist::ZERO, Dist::max);
                    c.dist(v, w) <= bound
                }
            }
        });
        if ok {
            tables[k][idx] = v;
            fill(shell, slots, s + 1, tables, budget, cap, emit)?;
        }
    }
    Ok(())
}
