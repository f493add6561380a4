//! Verb dispatch. Every verb returns a JSON value; the caller wraps it in a report.

use serde_json::{json, Value};
use starcone_core::correspondence::{
    cone_morphism_audit, functional_to_kernel, is_star_invariant, kernel_to_functional, pullback, rep_to_kernel,
    star_invariance_deviation,
};
use starcone_core::duality::{hilbert_bound, is_positive};
use starcone_core::gns::{commutant, decompose, gns_construct, intertwiner, is_irreducible, verify_star_rep};
use starcone_core::kernels::{
    chain_limit, kernel_difference, kernel_leq, kernel_scale, kernel_sum, min_dominating_scale, mutually_excluding,
    ordinary_subrep_check, weighted_kernel_sum, ChainDirection, ChainOptions,
};
use starcone_core::numerics::hermitian_eigen;
use starcone_core::{Error, Kernel, TolerancePolicy};

use crate::error::{CliError, CliResult};
use crate::workspace::Workspace;

pub const VERBS: &[&str] = &[
    "validate",
    "gns",
    "kernel",
    "functional",
    "cone-sum",
    "cone-scale",
    "cone-leq",
    "cone-diff",
    "exclude",
    "min-scale",
    "subrep",
    "chain",
    "weighted-sum",
    "decompose",
    "equiv",
    "pullback",
    "audit",
    "roundtrip",
];

/// Verb-specific knobs that come from flags rather than positionals.
#[derive(Debug, Clone, Copy)]
pub struct CommandOptions {
    pub seed: u64,
    pub ratio: f64,
    pub max_steps: usize,
    pub growth_ceiling: f64,
}

impl Default for CommandOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            ratio: 0.5,
            max_steps: ChainOptions::default().max_steps,
            growth_ceiling: ChainOptions::default().growth_ceiling,
        }
    }
}

pub struct Context<'a> {
    pub ws: &'a Workspace,
    pub pol: TolerancePolicy,
    pub opts: CommandOptions,
}

fn arity(verb: &str, args: &[String], n: usize, usage: &str) -> CliResult<()> {
    if args.len() != n {
        return Err(CliError::Usage(format!("usage: {verb} {usage}")));
    }
    Ok(())
}

fn number(s: &str, what: &str) -> CliResult<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("{what} must be a finite number, got `{s}`")))
}

fn kernel_json(k: &Kernel, pol: &TolerancePolicy) -> CliResult<Value> {
    let eig = hermitian_eigen(k.matrix(), pol)?;
    Ok(json!({
        "matrix": k.matrix(),
        "rank": k.rank(),
        "eigenvalues": eig.values,
    }))
}

fn same_algebra(a: Option<&str>, b: Option<&str>) -> CliResult<()> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(CliError::Usage(format!(
            "kernels live on different algebras `{x}` and `{y}`"
        ))),
        _ => Ok(()),
    }
}

pub fn run(verb: &str, args: &[String], cx: &Context) -> CliResult<Value> {
    let ws = cx.ws;
    let pol = &cx.pol;
    match verb {
        "validate" => validate(cx),
        "gns" => {
            arity(verb, args, 2, "<algebra> <functional>")?;
            let alg = ws.algebra(&args[0])?;
            let rho = ws.functional_on(&args[0], &args[1])?;
            let rep = gns_construct(alg, &rho, pol)?;
            let report = verify_star_rep(&rep, pol);
            let residual = rep.reproduced_functional().max_abs_diff(&rho);
            let irreducible = if rep.rep_dim > 0 { Some(is_irreducible(&rep, pol)?) } else { None };
            Ok(json!({
                "rep_dim": rep.rep_dim,
                "matrices": rep.matrices,
                "cyclic_vector": rep.cyclic_vector,
                "reproduction_residual": residual,
                "irreducible": irreducible,
                "verification": report,
            }))
        }
        "kernel" => {
            arity(verb, args, 2, "<algebra> <functional>")?;
            let alg = ws.algebra(&args[0])?;
            let rho = ws.functional_on(&args[0], &args[1])?;
            let positivity = is_positive(alg, &rho, pol)?;
            let k = functional_to_kernel(alg, &rho, pol)?;
            let mut out = kernel_json(&k, pol)?;
            out["star_invariant"] = json!(is_star_invariant(alg, &k, pol)?);
            out["min_eigenvalue"] = json!(positivity.min_eigenvalue);
            out["hilbert_bound"] = json!(hilbert_bound(alg, &rho, pol)?);
            Ok(out)
        }
        "functional" => {
            arity(verb, args, 2, "<algebra> <kernel>")?;
            let alg = ws.algebra(&args[0])?;
            let (k, _) = ws.kernel(&args[1], pol)?;
            let rho = kernel_to_functional(alg, &k, pol)?;
            Ok(json!({ "values": rho.values }))
        }
        "cone-sum" => {
            arity(verb, args, 2, "<kernel> <kernel>")?;
            let (k1, a1) = ws.kernel(&args[0], pol)?;
            let (k2, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            kernel_json(&kernel_sum(&k1, &k2, pol)?, pol)
        }
        "cone-scale" => {
            arity(verb, args, 2, "<kernel> <lambda>")?;
            let (k, _) = ws.kernel(&args[0], pol)?;
            let lambda = number(&args[1], "lambda")?;
            kernel_json(&kernel_scale(lambda, &k)?, pol)
        }
        "cone-leq" => {
            arity(verb, args, 2, "<kernel> <kernel>")?;
            let (k1, a1) = ws.kernel(&args[0], pol)?;
            let (k2, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            let leq = kernel_leq(&k1, &k2, pol)?;
            Ok(json!({ "leq": leq, "passed": leq }))
        }
        "cone-diff" => {
            arity(verb, args, 2, "<kernel> <subtracted kernel>")?;
            let (k, a1) = ws.kernel(&args[0], pol)?;
            let (k1, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            kernel_json(&kernel_difference(&k, &k1, pol)?, pol)
        }
        "exclude" => {
            arity(verb, args, 2, "<kernel> <kernel>")?;
            let (k1, a1) = ws.kernel(&args[0], pol)?;
            let (k2, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            let sum = kernel_sum(&k1, &k2, pol)?;
            Ok(json!({
                "mutually_excluding": mutually_excluding(&k1, &k2, pol)?,
                "ranks": [k1.rank(), k2.rank(), sum.rank()],
            }))
        }
        "min-scale" => {
            arity(verb, args, 2, "<kernel> <dominating kernel>")?;
            let (k1, a1) = ws.kernel(&args[0], pol)?;
            let (k2, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            let scale = min_dominating_scale(&k1, &k2, pol)?;
            Ok(json!({ "scale": scale.value(), "result": scale }))
        }
        "subrep" => {
            arity(verb, args, 2, "<kernel> <ambient kernel>")?;
            let (k1, a1) = ws.kernel(&args[0], pol)?;
            let (k, a2) = ws.kernel(&args[1], pol)?;
            same_algebra(a1, a2)?;
            Ok(json!({ "ordinary_subrepresentation": ordinary_subrep_check(&k1, &k, pol)? }))
        }
        "chain" => chain(args, cx),
        "weighted-sum" => {
            if args.is_empty() || args.len() % 2 != 0 {
                return Err(CliError::Usage("usage: weighted-sum <weight> <kernel> [<weight> <kernel> ...]".into()));
            }
            let mut terms = Vec::new();
            let mut owner: Option<&str> = None;
            for pair in args.chunks(2) {
                let w = number(&pair[0], "weight")?;
                let (k, a) = ws.kernel(&pair[1], pol)?;
                same_algebra(owner, a)?;
                owner = owner.or(a);
                terms.push((w, k));
            }
            let (sum, direct) = weighted_kernel_sum(&terms, pol)?;
            let mut out = kernel_json(&sum, pol)?;
            out["direct"] = json!(direct);
            Ok(out)
        }
        "decompose" => {
            arity(verb, args, 2, "<algebra> <functional>")?;
            let alg = ws.algebra(&args[0])?;
            let rho = ws.functional_on(&args[0], &args[1])?;
            let dec = decompose(alg, &rho, pol, cx.opts.seed)?;
            let components: Vec<Value> = dec
                .components
                .iter()
                .map(|c| {
                    json!({
                        "weight": c.weight,
                        "functional": c.functional,
                        "rep_dim": c.representation.rep_dim,
                    })
                })
                .collect();
            let commutant_dim = commutant(&gns_construct(alg, &rho, pol)?, pol)?.dimension;
            Ok(json!({
                "components": components,
                "multiplicity_classes": dec.multiplicity_classes,
                "reconstruction_error": dec.reconstruction_error,
                "commutant_dimension": commutant_dim,
            }))
        }
        "equiv" => {
            arity(verb, args, 3, "<algebra> <functional> <functional>")?;
            let alg = ws.algebra(&args[0])?;
            let r1 = gns_construct(alg, &ws.functional_on(&args[0], &args[1])?, pol)?;
            let r2 = gns_construct(alg, &ws.functional_on(&args[0], &args[2])?, pol)?;
            match intertwiner(&r1, &r2, pol) {
                Ok(u) => Ok(json!({ "equivalent": true, "intertwiner": u })),
                Err(Error::NotEquivalent { deviation }) => Ok(json!({ "equivalent": false, "deviation": deviation })),
                Err(e) => Err(e.into()),
            }
        }
        "pullback" => {
            arity(verb, args, 2, "<homomorphism> <kernel>")?;
            let hom = ws.homomorphism(&args[0])?;
            let (k, owner) = ws.kernel(&args[1], pol)?;
            if let Some(a) = owner {
                let target = &ws.file.homomorphisms[&args[0]].target;
                if a != target {
                    return Err(CliError::Usage(format!(
                        "kernel `{}` lives on `{a}`, homomorphism targets `{target}`",
                        args[1]
                    )));
                }
            }
            let h1 = pullback(hom, &k, pol)?;
            let mut out = kernel_json(&h1, pol)?;
            out["star_invariance_deviation"] = json!(star_invariance_deviation(hom.source(), &h1)?);
            Ok(out)
        }
        "audit" => {
            arity(verb, args, 4, "<algebra> <functional> <functional> <lambda>")?;
            let alg = ws.algebra(&args[0])?;
            let r1 = ws.functional_on(&args[0], &args[1])?;
            let r2 = ws.functional_on(&args[0], &args[2])?;
            let lambda = number(&args[3], "lambda")?;
            Ok(json!(cone_morphism_audit(alg, &r1, &r2, lambda, pol)?))
        }
        "roundtrip" => {
            arity(verb, args, 2, "<algebra> <functional>")?;
            let alg = ws.algebra(&args[0])?;
            let rho = ws.functional_on(&args[0], &args[1])?;
            let rep = gns_construct(alg, &rho, pol)?;
            let k = rep_to_kernel(&rep, pol)?;
            let back = kernel_to_functional(alg, &k, pol)?;
            let gram = functional_to_kernel(alg, &rho, pol)?;
            Ok(json!({
                "rep_dim": rep.rep_dim,
                "functional": back.values,
                "functional_error": back.max_abs_diff(&rho),
                "kernel_error": k.matrix().max_abs_diff(gram.matrix()),
            }))
        }
        other => Err(CliError::UnknownVerb(other.to_string())),
    }
}

fn validate(cx: &Context) -> CliResult<Value> {
    let ws = cx.ws;
    let pol = &cx.pol;
    let mut algebras = serde_json::Map::new();
    for (name, alg) in &ws.file.algebras {
        algebras.insert(name.clone(), json!({ "dim": alg.dim(), "report": alg.validate(pol) }));
    }
    let mut functionals = serde_json::Map::new();
    for name in ws.file.functionals.keys() {
        let (rho, owner) = ws.functional(name)?;
        let p = is_positive(ws.algebra(owner)?, &rho, pol)?;
        functionals.insert(name.clone(), json!({ "algebra": owner, "positivity": p }));
    }
    let mut kernels = serde_json::Map::new();
    for (name, k) in &ws.kernels {
        let invariant = match &ws.file.kernels[name].algebra {
            Some(a) => Some(is_star_invariant(ws.algebra(a)?, k, pol)?),
            None => None,
        };
        kernels.insert(name.clone(), json!({ "rank": k.rank(), "star_invariant": invariant }));
    }
    let mut homs = serde_json::Map::new();
    for (name, h) in &ws.homomorphisms {
        homs.insert(name.clone(), json!(h.validate(pol)));
    }
    Ok(json!({
        "algebras": algebras,
        "functionals": functionals,
        "kernels": kernels,
        "homomorphisms": homs,
    }))
}

/// `H_i = K_to + r^i (K_from − K_to)`.
fn chain(args: &[String], cx: &Context) -> CliResult<Value> {
    arity("chain", args, 3, "<decreasing|increasing> <kernel from> <kernel to>")?;
    let direction = match args[0].as_str() {
        "decreasing" => ChainDirection::Decreasing,
        "increasing" => ChainDirection::Increasing,
        other => return Err(CliError::Usage(format!("unknown chain direction `{other}`"))),
    };
    let pol = cx.pol;
    let (from, a1) = cx.ws.kernel(&args[1], &pol)?;
    let (to, a2) = cx.ws.kernel(&args[2], &pol)?;
    same_algebra(a1, a2)?;
    if from.dim() != to.dim() {
        return Err(Error::DimMismatch {
            expected: from.dim(),
            found: to.dim(),
        }
        .into());
    }
    let r = cx.opts.ratio;
    if !(r.is_finite() && r >= 0.0) {
        return Err(CliError::Usage(format!("ratio must be a finite nonnegative number, got {r}")));
    }
    let gap = from.matrix() - to.matrix();
    let options = ChainOptions {
        max_steps: cx.opts.max_steps,
        growth_ceiling: cx.opts.growth_ceiling,
    };
    // a term that fails the PSD test is reported as a monotonicity break at that step
    let failure = std::cell::Cell::new(None);
    let generator = |i: usize| {
        let m = to.matrix() + &gap.scale(r.powi(i as i32));
        Kernel::new(m, &pol).unwrap_or_else(|e| {
            if failure.get().is_none() {
                failure.set(Some((i, e.name())));
            }
            Kernel::zero(to.dim())
        })
    };
    let result = chain_limit(generator, direction, &pol, options);
    if let Some((step, _)) = failure.get() {
        return Err(Error::MonotonicityViolation { step }.into());
    }
    let limit = result?;
    let mut out = kernel_json(&limit.limit, &pol)?;
    out["steps"] = json!(limit.steps);
    out["ratio"] = json!(r);
    Ok(out)
}
