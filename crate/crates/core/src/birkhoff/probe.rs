use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{algebra_key, algebra_to_json, enumerate_algebras, Algebra, AlgebraKey};
use crate::error::Result;
use crate::factor::is_strongly_connected;
use crate::limits::Limits;
use crate::theory::Theory;

use super::closure::{closure, ClosureSpec};
use super::synth::{synthesize_equations, EquationSet, SynthesisSpec};

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub algebra: serde_json::Value,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleComponent {
    /// The backend is strongly connected at the probe's bounds.
    pub applicable: bool,
    pub equations: usize,
    pub models: usize,
    /// Single-component equations cut out the same algebras in the universe.
    pub same_models: bool,
    pub extra_models: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarietyReport {
    pub generators: Vec<serde_json::Value>,
    pub equations: EquationSet,
    pub closure_size: usize,
    pub closure_saturated: bool,
    pub universe_size: usize,
    pub models: usize,
    /// Every closure member satisfies every synthesized equation.
    pub sound: bool,
    pub unsound: Vec<Finding>,
    /// Models in the universe outside the computed closure.
    pub findings: Vec<Finding>,
    pub single_component: SingleComponent,
    pub max_carrier: usize,
}

/// Synthesize `E` from `generators`, close the generators under products,
/// injective subalgebras and μ-pure quotients within `universe` elements,
/// and compare the closure with the models of `E` among all algebras of
/// that size.
pub fn variety_probe(
    theory: &Arc<Theory>,
    generators: &[Algebra],
    universe: usize,
    spec: &SynthesisSpec,
    limits: &Limits,
) -> Result<VarietyReport> {
    let eqs = synthesize_equations(theory, generators, spec, limits)?;
    let closed = closure(generators, &ClosureSpec::mu_birkhoff(universe, spec.mu_cap), limits)?;
    let all = enumerate_algebras(theory, universe, limits)?;
    let unsound: Vec<Finding> = closed
        .members
        .iter()
        .filter_map(|a| {
            eqs.equations
                .iter()
                .find(|e| !a.satisfies(&e.equation).holds)
                .map(|e| Finding {
                    algebra: algebra_to_json(a),
                    note: format!("closure member violates {}", e.text),
                })
        })
        .collect();
    let in_closure: BTreeSet<AlgebraKey> = closed.members.iter().map(algebra_key).collect();
    let models: Vec<&Algebra> = all.iter().filter(|a| eqs.satisfied_by(a)).collect();
    let findings = models
        .iter()
        .filter(|a| !in_closure.contains(&algebra_key(a)))
        .map(|a| Finding {
            algebra: algebra_to_json(a),
            note: format!(
                "satisfies the synthesized equations (depth {}, components ≤ {}) but is not reached by the closure within {} elements",
                spec.depth, spec.mu_cap, universe
            ),
        })
        .collect();
    let single = eqs.single_component();
    let single_models: Vec<&Algebra> = all.iter().filter(|a| single.satisfied_by(a)).collect();
    let model_keys: BTreeSet<AlgebraKey> = models.iter().map(|a| algebra_key(a)).collect();
    let extra: Vec<serde_json::Value> = single_models
        .iter()
        .filter(|a| !model_keys.contains(&algebra_key(a)))
        .map(|a| algebra_to_json(a))
        .collect();
    let applicable = is_strongly_connected(theory.backend(), spec.mu_cap.max(2), limits)?.holds;
    Ok(VarietyReport {
        generators: generators.iter().map(algebra_to_json).collect(),
        closure_size: closed.members.len(),
        closure_saturated: closed.saturated,
        universe_size: all.len(),
        models: models.len(),
        sound: unsound.is_empty(),
        unsound,
        findings,
        single_component: SingleComponent {
            applicable,
            equations: single.equations.len(),
            models: single_models.len(),
            same_models: extra.is_empty() && single_models.len() == models.len(),
            extra_models: extra,
        },
        equations: eqs,
        max_carrier: universe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::terminal_algebra;
    use crate::theory::parse_theory;
    use crate::vbase::FiniteObject;

    #[test]
    fn semilattice_probe_is_sound() {
        let t = Arc::new(parse_theory("theory sg over pos { op mul : 2; eq assoc : context [x, y, z] |- mul(mul(x, y), z) = mul(x, mul(y, z)); }").unwrap());
        let g = Algebra::from_fn(t.clone(), Arc::new(FiniteObject::chain(2)), |_, x| x[0].max(x[1])).unwrap();
        let r = variety_probe(&t, &[g], 3, &SynthesisSpec::new(2, 2), &Limits::default()).unwrap();
        assert!(r.sound);
        assert!(r.single_component.applicable);
        assert!(r.models >= r.closure_size.min(r.models));
    }

    #[test]
    fn trivial_generator_collapses() {
        let t = Arc::new(parse_theory("theory u over pos { op u : 1; }").unwrap());
        let g = terminal_algebra(&t);
        let r = variety_probe(&t, &[g], 2, &SynthesisSpec::new(2, 1), &Limits::default()).unwrap();
        assert!(r.sound);
        assert!(r.equations.equations.iter().any(|e| e.text.ends_with("|- x == y")));
        // Only the empty and one-point algebras satisfy x = y.
        assert!(r.models <= 2);
        assert!(r.findings.len() <= 1);
    }
}
