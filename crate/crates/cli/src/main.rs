//! `wb`: batch front end to the workbench. Every command prints one report
//! (JSON by default) and exits 0 on pass, 1 on fail, 2 on bad input and 3
//! when a search bound or size cap was hit.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wb_core::algebra::{algebra_from_json, algebra_to_json, Algebra};
use wb_core::birkhoff::{closure, synthesize_equations, variety_probe, ClosureOp, ClosureSpec, SynthesisSpec};
use wb_core::counterexamples::{graph_factorization_failure, met_product_coeq_gap, revalidate_gap};
use wb_core::factor::{check_unique_lifting, factorize, first_non_unique_square, is_injection, is_strongly_connected, is_surjection};
use wb_core::freeterm::{certify_equation, check_discrete, derive, free_algebra, preserves_surjections_probe};
use wb_core::suite::{run_suite, samples, suite_ids};
use wb_core::theory::{parse_context, parse_equation_raw, parse_judgment, parse_theory, render_equation, Theory};
use wb_core::vbase::json::{morphism_from_json, RawMorphism, RawObject};
use wb_core::vbase::{Backend, Morphism};
use wb_core::{Dist, Error, Limits, Result};

use report::{Report, Verdict};

#[derive(Parser, Debug)]
#[command(name = "wb", version, about = "Finite workbench for discrete equational theories over Pos, Met, Gra and MGra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampled checks; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size bound for probes and enumerations.
    #[arg(long, global = true, visible_alias = "size")]
    max_size: Option<usize>,
    /// Term depth for derivations, free algebras and probes.
    #[arg(long, global = true)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Image factorization of a morphism.
    Factorize {
        #[arg(long)]
        morphism: PathBuf,
        /// Expected backend of the morphism.
        #[arg(long, value_parser = parse_backend)]
        backend: Option<Backend>,
    },
    /// Diagonals of squares of `f` against `g`; all squares unless `u`, `v` are given.
    CheckLifting {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, requires = "v")]
        u: Option<PathBuf>,
        #[arg(long, requires = "u")]
        v: Option<PathBuf>,
    },
    /// Validate an algebra against its theory.
    CheckAlgebra(AlgebraArgs),
    /// Does an algebra satisfy an equation?
    Satisfies {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        equation: EquationArgs,
    },
    /// Decide a judgment in context.
    Derive {
        #[arg(long)]
        theory: String,
        /// Context literal such as `[x, y | x <= y]`.
        #[arg(long)]
        context: String,
        /// `s = t`, `s <= t` or `d(s, t) <= e`.
        #[arg(long)]
        judgment: String,
    },
    /// Depth-bounded free algebra over a context.
    Free {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        context: String,
    },
    #[command(subcommand)]
    Probe(Probe),
    /// Close algebras under the chosen constructions.
    Closure {
        #[arg(long)]
        theory: String,
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Op::Products, Op::Subalgebras, Op::SplitQuotients])]
        ops: Vec<Op>,
        /// Size bound on μ-purity test objects.
        #[arg(long, default_value_t = 2)]
        mu: usize,
    },
    /// Equations satisfied by a class of algebras.
    Synthesize {
        #[arg(long)]
        theory: String,
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        mu: usize,
        #[arg(long, default_value_t = 2)]
        components: usize,
        #[arg(long, default_value_t = 3)]
        vars: usize,
    },
    #[command(subcommand)]
    Counterexample(Counterexample),
    /// Run a named group of acceptance checks.
    Suite { name: String },
}

#[derive(Subcommand, Debug)]
enum Probe {
    /// Do terms factor through the discretization of their context?
    Discrete {
        #[arg(long)]
        theory: String,
    },
    /// Is the depth-bounded monad surjective on every small surjection?
    PreservesSurjections {
        #[arg(long)]
        theory: String,
    },
    /// Is there a morphism between every pair of small objects?
    StrongConnected {
        #[arg(long, value_parser = parse_backend)]
        backend: Backend,
    },
    /// Synthesize, close, and compare against all small models.
    Variety {
        #[arg(long)]
        theory: String,
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        mu: usize,
        #[arg(long, default_value_t = 3)]
        universe: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Counterexample {
    /// The single-edge graph against the loop.
    Graph,
    /// Search for a product/reflexive-coequalizer gap among small metric spaces.
    MetProductCoeq {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,inf")]
        grid: Vec<Dist>,
    },
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long)]
    theory: String,
    #[arg(long)]
    algebra: PathBuf,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct EquationArgs {
    /// Equation text, e.g. `contextY [*] ; contextX [x, y] |- mul(x, y) == mul(y, x)`.
    #[arg(long)]
    equation: Option<String>,
    #[arg(long)]
    equation_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Op {
    Products,
    Subalgebras,
    SplitQuotients,
    MuPureQuotients,
}

impl Op {
    fn core(self) -> ClosureOp {
        match self {
            Op::Products => ClosureOp::Products,
            Op::Subalgebras => ClosureOp::InjSubalgebras,
            Op::SplitQuotients => ClosureOp::SplitQuotients,
            Op::MuPureQuotients => ClosureOp::MuPureQuotients,
        }
    }
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    Backend::ALL
        .into_iter()
        .find(|b| b.to_string() == s.to_ascii_lowercase())
        .ok_or_else(|| format!("unknown backend `{s}` (pos, met, gra, mgra)"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Shape(format!("{}: {e}", path.display())))
}

/// A theory file, or one of the shipped sample names when no such file exists.
fn load_theory(spec: &str) -> Result<Arc<Theory>> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(Arc::new(parse_theory(&read(path)?)?));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    let text = match stem {
        "om" => samples::OM,
        "chain" => samples::CHAIN,
        "osg" => samples::OSG,
        "unary" => samples::UNARY,
        _ => return Err(Error::Shape(format!("{spec}: no such theory file"))),
    };
    Ok(Arc::new(parse_theory(text)?))
}

/// One algebra per file, or a JSON array of them.
fn load_algebras(theory: &Arc<Theory>, paths: &[PathBuf]) -> Result<Vec<Algebra>> {
    let mut out = Vec::new();
    for p in paths {
        let text = read(p)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Shape(format!("{}: {e}", p.display())))?;
        match v {
            Value::Array(items) => {
                for it in items {
                    out.push(algebra_from_json(&it.to_string(), theory)?);
                }
            }
            _ => out.push(algebra_from_json(&text, theory)?),
        }
    }
    Ok(out)
}

fn load_morphism(path: &Path) -> Result<Morphism> {
    morphism_from_json(&read(path)?)
}

fn raw(f: &Morphism) -> Value {
    serde_json::to_value(RawMorphism::from_morphism(f)).expect("morphisms serialize")
}

struct Ctx {
    limits: Limits,
    seed: u64,
    max_size: Option<usize>,
    depth: Option<usize>,
}

impl Ctx {
    fn bounds(&self, extra: Value) -> Value {
        let mut b = json!({"limits": self.limits, "seed": self.seed});
        if let (Value::Object(m), Value::Object(e)) = (&mut b, extra) {
            m.extend(e);
        }
        b
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("WB_LIMITS: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        limits,
        seed: cli.seed,
        max_size: cli.max_size,
        depth: cli.depth,
    };
    let report = execute(&cli.command, &ctx);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("reports serialize")),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit)
}

fn execute(cmd: &Command, ctx: &Ctx) -> Report {
    let (name, inputs) = describe(cmd);
    let base = Report::new(&name, inputs, ctx.bounds(json!({})));
    match run(cmd, ctx, base) {
        Ok(r) => r,
        Err((r, e)) => r.error(&e),
    }
}

fn describe(cmd: &Command) -> (String, Value) {
    let p = |p: &PathBuf| p.display().to_string();
    let ps = |v: &[PathBuf]| v.iter().map(|x| x.display().to_string()).collect::<Vec<_>>();
    match cmd {
        Command::Factorize { morphism, backend } => ("factorize".into(), json!({"morphism": p(morphism), "backend": backend})),
        Command::CheckLifting { f, g, u, v } => (
            "check-lifting".into(),
            json!({"f": p(f), "g": p(g), "u": u.as_ref().map(p), "v": v.as_ref().map(p)}),
        ),
        Command::CheckAlgebra(a) => ("check-algebra".into(), json!({"theory": a.theory, "algebra": p(&a.algebra)})),
        Command::Satisfies { algebra, equation } => (
            "satisfies".into(),
            json!({"theory": algebra.theory, "algebra": p(&algebra.algebra), "equation": equation.equation,
                   "equation_file": equation.equation_file.as_ref().map(p)}),
        ),
        Command::Derive { theory, context, judgment } => (
            "derive".into(),
            json!({"theory": theory, "context": context, "judgment": judgment}),
        ),
        Command::Free { theory, context } => ("free".into(), json!({"theory": theory, "context": context})),
        Command::Probe(Probe::Discrete { theory }) => ("probe discrete".into(), json!({"theory": theory})),
        Command::Probe(Probe::PreservesSurjections { theory }) => {
            ("probe preserves-surjections".into(), json!({"theory": theory}))
        }
        Command::Probe(Probe::StrongConnected { backend }) => ("probe strong-connected".into(), json!({"backend": backend})),
        Command::Probe(Probe::Variety { theory, algebras, mu, universe }) => (
            "probe variety".into(),
            json!({"theory": theory, "algebras": ps(algebras), "mu": mu, "universe": universe}),
        ),
        Command::Closure { theory, algebras, ops, mu } => (
            "closure".into(),
            json!({"theory": theory, "algebras": ps(algebras), "ops": ops.iter().map(|o| format!("{o:?}")).collect::<Vec<_>>(), "mu": mu}),
        ),
        Command::Synthesize { theory, algebras, mu, components, vars } => (
            "synthesize".into(),
            json!({"theory": theory, "algebras": ps(algebras), "mu": mu, "components": components, "vars": vars}),
        ),
        Command::Counterexample(Counterexample::Graph) => ("counterexample graph".into(), json!({})),
        Command::Counterexample(Counterexample::MetProductCoeq { max_points, grid }) => (
            "counterexample met-product-coeq".into(),
            json!({"max_points": max_points, "grid": grid}),
        ),
        Command::Suite { name } => ("suite".into(), json!({"name": name})),
    }
}

type Run = std::result::Result<Report, (Report, Error)>;

/// Attach the report so far to an error.
trait OrReport<T> {
    fn or_report(self, r: &Report) -> std::result::Result<T, (Report, Error)>;
}

impl<T> OrReport<T> for Result<T> {
    fn or_report(self, r: &Report) -> std::result::Result<T, (Report, Error)> {
        self.map_err(|e| (clone_report(r), e))
    }
}

fn clone_report(r: &Report) -> Report {
    Report::new(&r.command, r.inputs.clone(), r.bounds.clone())
}

fn run(cmd: &Command, ctx: &Ctx, r: Report) -> Run {
    let limits = &ctx.limits;
    match cmd {
        Command::Factorize { morphism, backend } => {
            let f = load_morphism(morphism).or_report(&r)?;
            if let Some(b) = backend {
                if *b != f.backend() {
                    return Err((r, Error::BackendMismatch { expected: *b, found: f.backend() }));
                }
            }
            let fac = factorize(&f).or_report(&r)?;
            let surjection = is_surjection(&f);
            let injection = is_injection(&f, limits).or_report(&r)?;
            let epi_ok = is_surjection(&fac.epi_part);
            let mono_ok = is_injection(&fac.mono_part, limits).or_report(&r)?;
            let composes = fac.epi_part.then(&fac.mono_part).or_report(&r)?.same_map(&f);
            Ok(r.finish(
                Verdict::pass_if(epi_ok && mono_ok && composes),
                json!({
                    "surjection": surjection,
                    "injection": injection,
                    "epi_part": raw(&fac.epi_part),
                    "mono_part": raw(&fac.mono_part),
                    "image": RawObject::from_object(fac.mono_part.dom()),
                }),
            ))
        }
        Command::CheckLifting { f, g, u, v } => {
            let f = load_morphism(f).or_report(&r)?;
            let g = load_morphism(g).or_report(&r)?;
            let surjection = is_surjection(&f);
            let injection = is_injection(&g, limits).or_report(&r)?;
            match (u, v) {
                (Some(u), Some(v)) => {
                    let u = load_morphism(u).or_report(&r)?;
                    let v = load_morphism(v).or_report(&r)?;
                    let rep = check_unique_lifting(&f, &g, &u, &v).or_report(&r)?;
                    let diagonals: Vec<Value> = rep.diagonals.iter().map(raw).collect();
                    Ok(r.finish(
                        Verdict::pass_if(rep.unique()),
                        json!({"surjection": surjection, "injection": injection, "diagonals": diagonals.len(), "diagonal_maps": diagonals}),
                    ))
                }
                _ => {
                    let bad = first_non_unique_square(&f, &g, limits).or_report(&r)?;
                    let r = match &bad {
                        Some(rep) => r.witness(json!({"u": raw(&rep.u), "v": raw(&rep.v), "diagonals": rep.diagonals.iter().map(raw).collect::<Vec<_>>()})),
                        None => r,
                    };
                    let diagonals = bad.as_ref().map_or(1, |rep| rep.diagonals.len());
                    Ok(r.finish(
                        Verdict::pass_if(bad.is_none()),
                        json!({"surjection": surjection, "injection": injection, "diagonals": diagonals, "all_squares": true}),
                    ))
                }
            }
        }
        Command::CheckAlgebra(a) => {
            let theory = load_theory(&a.theory).or_report(&r)?;
            let alg = load_algebras(&theory, std::slice::from_ref(&a.algebra)).or_report(&r)?;
            let Some(alg) = alg.into_iter().next() else {
                return Err((r, Error::Shape("no algebra in input".into())));
            };
            let check = alg.check();
            let mut r = r;
            for v in &check.violations {
                r = r.witness(serde_json::to_value(v).unwrap_or(Value::Null));
            }
            Ok(r.finish(Verdict::pass_if(check.ok), json!({"ok": check.ok, "size": alg.len()})))
        }
        Command::Satisfies { algebra, equation } => {
            let theory = load_theory(&algebra.theory).or_report(&r)?;
            let text = match (&equation.equation, &equation.equation_file) {
                (Some(t), _) => t.clone(),
                (None, Some(p)) => read(p).or_report(&r)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let e = parse_equation_raw(text.trim(), &theory).or_report(&r)?;
            let depth = ctx
                .depth
                .unwrap_or_else(|| e.p.iter().chain(&e.q).map(|t| t.depth()).max().unwrap_or(0));
            certify_equation(&theory, &e, depth, limits).or_report(&r)?;
            let alg = load_algebras(&theory, std::slice::from_ref(&algebra.algebra)).or_report(&r)?;
            let Some(alg) = alg.into_iter().next() else {
                return Err((r, Error::Shape("no algebra in input".into())));
            };
            if !alg.is_algebra() {
                return Err((r, Error::Shape("input is not an algebra; run check-algebra".into())));
            }
            let s = alg.satisfies(&e);
            let mut r = r;
            if let Some(w) = &s.witness {
                r = r.witness(json!({"assignment": w, "component": s.component}));
            }
            r.bounds = ctx.bounds(json!({"depth": depth}));
            Ok(r.finish(Verdict::pass_if(s.holds), json!({"holds": s.holds, "equation": render_equation(&e)})))
        }
        Command::Derive { theory, context, judgment } => {
            let theory = load_theory(theory).or_report(&r)?;
            let c = parse_context(context, theory.backend()).or_report(&r)?;
            let j = parse_judgment(judgment, &c, &theory.signature).or_report(&r)?;
            let (s, t) = j.sides();
            let depth = ctx.depth.unwrap_or(s.depth().max(t.depth()));
            let mut r = r;
            r.bounds = ctx.bounds(json!({"depth": depth}));
            let d = derive(&theory, &c, &j, depth, limits).or_report(&r)?;
            Ok(r.finish(Verdict::pass_if(d.holds), json!({"holds": d.holds, "bound": d.bound, "depth": d.depth})))
        }
        Command::Free { theory, context } => {
            let theory = load_theory(theory).or_report(&r)?;
            let c = parse_context(context, theory.backend()).or_report(&r)?;
            let depth = ctx.depth.unwrap_or(2);
            let mut r = r;
            r.bounds = ctx.bounds(json!({"depth": depth}));
            let fa = free_algebra(&theory, &c, depth, limits).or_report(&r)?;
            Ok(r.finish(
                Verdict::Pass,
                json!({
                    "size": fa.carrier.len(),
                    "carrier": RawObject::from_object(&fa.carrier),
                    "terms": fa.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "unit": raw(&fa.unit),
                }),
            ))
        }
        Command::Probe(p) => probe(p, ctx, r),
        Command::Closure { theory, algebras, ops, mu } => {
            let theory = load_theory(theory).or_report(&r)?;
            let gens = load_algebras(&theory, algebras).or_report(&r)?;
            let max_carrier = ctx.max_size.unwrap_or(4);
            let spec = ClosureSpec::new(ops.iter().map(|o| o.core()), max_carrier, *mu).or_report(&r)?;
            let mut r = r;
            r.bounds = ctx.bounds(json!({"max_carrier": max_carrier, "mu": mu, "max_rounds": spec.max_rounds}));
            let c = closure(&gens, &spec, limits).or_report(&r)?;
            let verdict = if c.saturated { Verdict::Pass } else { Verdict::Finding };
            Ok(r.finish(
                verdict,
                json!({
                    "size": c.members.len(),
                    "rounds": c.rounds,
                    "saturated": c.saturated,
                    "members": c.members.iter().map(algebra_to_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Synthesize { theory, algebras, mu, components, vars } => {
            let theory = load_theory(theory).or_report(&r)?;
            let class = load_algebras(&theory, algebras).or_report(&r)?;
            let spec = SynthesisSpec {
                mu_cap: *mu,
                depth: ctx.depth.unwrap_or(2),
                max_components: *components,
                max_vars: *vars,
            };
            let mut r = r;
            r.bounds = ctx.bounds(json!({"synthesis": spec}));
            let eqs = synthesize_equations(&theory, &class, &spec, limits).or_report(&r)?;
            let sound = class.iter().all(|a| eqs.satisfied_by(a));
            Ok(r.finish(
                Verdict::pass_if(sound),
                json!({
                    "contexts": eqs.contexts,
                    "clustered": eqs.clustered,
                    "equations": eqs.equations.iter().map(|e| e.text.clone()).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Counterexample(Counterexample::Graph) => {
            let g = graph_factorization_failure(limits).or_report(&r)?;
            let value = serde_json::to_value(&g).expect("reports serialize");
            Ok(r.witness(value.clone()).finish(Verdict::pass_if(g.holds), value))
        }
        Command::Counterexample(Counterexample::MetProductCoeq { max_points, grid }) => {
            let mut r = r;
            r.bounds = ctx.bounds(json!({"max_points": max_points, "grid": grid}));
            let w = met_product_coeq_gap(*max_points, grid, limits).or_report(&r)?;
            let (lhs, rhs) = revalidate_gap(&w).or_report(&r)?;
            let ok = lhs == w.lhs && rhs == w.rhs && lhs < rhs;
            let value = serde_json::to_value(&w).expect("witnesses serialize");
            Ok(r.witness(value).finish(
                Verdict::pass_if(ok),
                json!({"lhs": w.lhs, "rhs": w.rhs, "revalidated": {"lhs": lhs, "rhs": rhs}}),
            ))
        }
        Command::Suite { name } => {
            if suite_ids(name).is_none() {
                return Err((r, Error::Unsupported(format!("unknown suite `{name}`"))));
            }
            let outcomes = run_suite(name, limits).or_report(&r)?;
            let all = outcomes.iter().all(|o| o.passed);
            let mut r = r;
            for o in outcomes.iter().filter(|o| o.id == 10 || !o.passed) {
                r = r.witness(json!({"criterion": o.id, "detail": o.detail}));
            }
            let lines: Vec<String> = outcomes
                .iter()
                .map(|o| format!("{:>2} {} {} ({} checked)", o.id, if o.passed { "PASS" } else { "FAIL" }, o.name, o.checked))
                .collect();
            Ok(r.finish(Verdict::pass_if(all), json!({"criteria": lines})))
        }
    }
}

fn probe(p: &Probe, ctx: &Ctx, r: Report) -> Run {
    let limits = &ctx.limits;
    let depth = ctx.depth.unwrap_or(2);
    let size = ctx.max_size.unwrap_or(3);
    let mut r = r;
    match p {
        Probe::Discrete { theory } => {
            let theory = load_theory(theory).or_report(&r)?;
            r.bounds = ctx.bounds(json!({"depth": depth, "size": size}));
            let d = check_discrete(&theory, depth, size, limits).or_report(&r)?;
            if let Some((c, t)) = &d.witness {
                r = r.witness(json!({"context": c, "term": t}));
            }
            Ok(r.finish(Verdict::pass_if(d.holds), serde_json::to_value(&d).expect("reports serialize")))
        }
        Probe::PreservesSurjections { theory } => {
            let theory = load_theory(theory).or_report(&r)?;
            r.bounds = ctx.bounds(json!({"depth": depth, "size": size}));
            let s = preserves_surjections_probe(&theory, depth, size, limits).or_report(&r)?;
            if let Some(f) = &s.failure {
                r = r.witness(serde_json::to_value(f).expect("witnesses serialize"));
            }
            Ok(r.finish(Verdict::pass_if(s.holds), serde_json::to_value(&s).expect("reports serialize")))
        }
        Probe::StrongConnected { backend } => {
            r.bounds = ctx.bounds(json!({"size": size}));
            let s = is_strongly_connected(*backend, size, limits).or_report(&r)?;
            if let Some((k, k2)) = &s.witness {
                r = r.witness(json!({"from": RawObject::from_object(k), "to": RawObject::from_object(k2)}));
            }
            Ok(r.finish(Verdict::pass_if(s.holds), serde_json::to_value(&s).expect("reports serialize")))
        }
        Probe::Variety { theory, algebras, mu, universe } => {
            let theory = load_theory(theory).or_report(&r)?;
            let gens = load_algebras(&theory, algebras).or_report(&r)?;
            let spec = SynthesisSpec::new(*mu, depth);
            r.bounds = ctx.bounds(json!({"synthesis": spec, "universe": universe}));
            let v = variety_probe(&theory, &gens, *universe, &spec, limits).or_report(&r)?;
            for f in v.unsound.iter().chain(&v.findings) {
                r = r.witness(serde_json::to_value(f).expect("findings serialize"));
            }
            let verdict = if !v.sound {
                Verdict::Fail
            } else if !v.findings.is_empty() {
                Verdict::Finding
            } else {
                Verdict::Pass
            };
            let mut value = serde_json::to_value(&v).expect("reports serialize");
            value["equation_list"] = json!(v.equations.equations.iter().map(|e| e.text.clone()).collect::<Vec<_>>());
            Ok(r.finish(verdict, value))
        }
    }
}
