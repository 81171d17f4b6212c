//! Task dispatch and report assembly.

use copossible_core::finset::{disjointness_oracle, FinSet, FinSetCategory};
use copossible_core::finvect::{intersection_oracle, FinVectCategory, FpSpace, Subspace};
use copossible_core::kernel::{decide_compatibility, CompatibilityMode, Cospan, FiniteCategory};
use copossible_core::latalg::boolean::{
    adjudicate_atom_split, boole_independent, decide_subalgebras, scan_subalgebra_pairs, Subalgebra,
};
use copossible_core::latalg::oml::{decide_sub_omls, logical_independent, Oml, OmlCategory};
use copossible_core::opalg::{
    conjugated_tensor_witness, factorization_of, is_product_extension, search_joint_extension,
    tensor_operation, verify_extension, CpMap, FeasibilityParams, StarMono, FEASIBILITY_TOL, VERIFY_TOL,
};
use copossible_core::pregeom::{decide_closed_pair, pregeom_independence_oracle, PregeomCategory, Pregeometry};
use copossible_core::qft::{audit_site, AuditStatus, OpindParams};
use copossible_core::suite::{run_claims, run_suite, ClaimStatus, SuiteReport};
use copossible_core::tensor::{decide_tensor_independence, DirectSum, DisjointUnion, TensorVerdict};
use copossible_core::{decide_mor_independence, Budget, IndependenceVerdict, MonoPair};
use serde::Serialize;
use serde_json::{json, Value};

use crate::request::{subset_of, Payload, Request, Task};
use crate::CliError;

pub const TOOL: &str = "copossible";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportOutcome {
    /// Every verdict in the report is decided.
    Decided,
    /// Some verdict is Unknown, Undecided or Inconclusive.
    Open,
    /// A suite claim expected to hold did not.
    Failed,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: Task,
    pub kind: Option<&'static str>,
    pub outcome: ReportOutcome,
    pub summary: Vec<String>,
    pub result: Option<Value>,
    pub error: Option<String>,
}

impl Report {
    fn new(task: Task, kind: Option<&'static str>, outcome: ReportOutcome, summary: Vec<String>, result: Value) -> Self {
        Report { tool: TOOL, version: VERSION, task, kind, outcome, summary, result: Some(result), error: None }
    }

    pub fn error(task: Task, kind: Option<&'static str>, err: &CliError) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            task,
            kind,
            outcome: ReportOutcome::Error,
            summary: vec![format!("error: {err}")],
            result: None,
            error: Some(err.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            ReportOutcome::Decided => 0,
            ReportOutcome::Open => 2,
            ReportOutcome::Failed | ReportOutcome::Error => 1,
        }
    }
}

/// Effective limits: defaults, then request overrides, then command-line flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Settings {
    pub budget: Budget,
    pub tol: Option<f64>,
}

fn module<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Module(e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn decided(open: bool) -> ReportOutcome {
    if open {
        ReportOutcome::Open
    } else {
        ReportOutcome::Decided
    }
}

fn both<T: Clone>(a: &Option<T>, b: &Option<T>) -> Result<(T, T), CliError> {
    match (a, b) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(CliError::Missing("payload.a and payload.b".into())),
    }
}

fn verdict_line<M: Clone + Eq>(v: &IndependenceVerdict<M>, oracle: Option<(&str, bool)>) -> Vec<String> {
    let head = match v.independent() {
        Some(true) => "independent".to_string(),
        Some(false) => "not independent".to_string(),
        None => "undecided".to_string(),
    };
    let mut out = vec![format!(
        "verdict: {head} ({} endomorphism pairs, {} candidate extensions examined)",
        v.stats.pairs_examined, v.stats.candidates_examined
    )];
    if let Some((name, o)) = oracle {
        out.push(format!("{name}: {o}"));
    }
    out
}

fn decision_report<M: Serialize + Clone + Eq>(
    task: Task,
    kind: &'static str,
    v: IndependenceVerdict<M>,
    oracle: Option<(&str, bool)>,
    extra: Value,
) -> Report {
    let summary = verdict_line(&v, oracle);
    let open = v.independent().is_none();
    let mut result = json!({ "verdict": to_value(&v) });
    if let Some((name, o)) = oracle {
        result[name] = json!(o);
    }
    if !extra.is_null() {
        result["details"] = extra;
    }
    Report::new(task, Some(kind), decided(open), summary, result)
}

/// Runs `task` on a parsed request.
pub fn run(task: Task, req: &Request, settings: &Settings) -> Result<Report, CliError> {
    if let Some(t) = req.task {
        if t != task {
            return Err(CliError::TaskMismatch { request: format!("{t:?}"), command: format!("{task:?}") });
        }
    }
    let kind = req.payload.kind();
    let budget = &settings.budget;
    let unsupported = || CliError::Unsupported { task: format!("{task:?}").to_lowercase(), kind: kind.into() };
    match (task, &req.payload) {
        (Task::Decide, Payload::Finset(p)) => {
            let ambient = FinSet::new(p.ambient.iter().copied()).map_err(module)?;
            let (a, b) = both(&p.a, &p.b)?;
            let cat = FinSetCategory::default();
            let pair = MonoPair::new(&cat, subset_of(&ambient, &a).map_err(module)?, subset_of(&ambient, &b).map_err(module)?)
                .map_err(module)?;
            let v = decide_mor_independence(&cat, &pair, budget);
            let oracle = disjointness_oracle(pair.f_a(), pair.f_b()).map_err(module)?;
            Ok(decision_report(task, kind, v, Some(("oracle", oracle)), Value::Null))
        }
        (Task::Decide, Payload::Finvect(p)) => {
            let (sa, sb) = finvect_pair(p.p, p.dim, &p.a, &p.b)?;
            let cat = FinVectCategory::new(p.p, 0..=2);
            let pair = MonoPair::new(&cat, sa.inclusion(), sb.inclusion()).map_err(module)?;
            let v = decide_mor_independence(&cat, &pair, budget);
            let oracle = intersection_oracle(&sa, &sb).map_err(module)?;
            Ok(decision_report(task, kind, v, Some(("oracle", oracle)), Value::Null))
        }
        (Task::Decide, Payload::Pregeom(p)) => {
            let g = p.pregeometry()?;
            let (a, b) = both(&p.a, &p.b)?;
            let v = decide_closed_pair(&PregeomCategory::default(), &g, a, b, budget).map_err(module)?;
            let oracle = pregeom_independence_oracle(&g, a, b).map_err(module)?;
            Ok(decision_report(task, kind, v, Some(("oracle", oracle)), Value::Null))
        }
        (Task::Decide, Payload::Bool(p)) => {
            let (sa, sb) = bool_pair(p.atoms, &p.a, &p.b)?;
            let v = decide_subalgebras(&sa, &sb, budget).map_err(module)?;
            let disjoint = boole_independent(&sa, &sb).map_err(module)?;
            let extra = json!({ "boole_disjoint_atoms": disjoint });
            Ok(decision_report(task, kind, v, Some(("boole_independent", disjoint.is_none())), extra))
        }
        (Task::Decide, Payload::Oml(p)) => {
            let l = p.lattice()?;
            let (ma, mb) = oml_pair(p, &l)?;
            let v = decide_sub_omls(&l, ma, mb, budget).map_err(module)?;
            let disjoint = logical_independent(&l, ma, mb);
            let extra = json!({ "disjoint_elements": disjoint });
            Ok(decision_report(task, kind, v, Some(("logically_independent", disjoint.is_none())), extra))
        }
        (Task::Decide, Payload::Opalg(p)) => {
            let (fa, fb, aa, ab) = opalg_parts(p)?;
            let tol = settings.tol.unwrap_or(FEASIBILITY_TOL);
            if let Some(fact) = factorization_of(&fa, &fb, VERIFY_TOL).map_err(module)? {
                let gamma = conjugated_tensor_witness(&fact, &fa, &fb, &aa, &ab).map_err(module)?;
                let check = verify_extension(&gamma, &fa, &fb, &aa, &ab, tol).map_err(module)?;
                let summary = vec![
                    "route: tensor factorization".to_string(),
                    format!("extension found: {} (residual {:e})", check.holds, check.residual()),
                ];
                let result = json!({ "route": "factorization", "factorization": to_value(&fact), "extension": to_value(&gamma), "check": to_value(&check) });
                return Ok(Report::new(task, Some(kind), decided(!check.holds), summary, result));
            }
            let params = FeasibilityParams { tol, max_iter: p.max_iter.unwrap_or(FeasibilityParams::default().max_iter), ..FeasibilityParams::default() };
            let r = search_joint_extension(&fa, &fb, &aa, &ab, &params).map_err(module)?;
            let summary = vec![
                "route: feasibility search".to_string(),
                format!(
                    "status: {:?} after {} iterations (affine residual {:e}, consistency residual {:e})",
                    r.status, r.iterations, r.affine_residual, r.consistency_residual
                ),
            ];
            let result = json!({ "route": "feasibility", "search": to_value(&r) });
            Ok(Report::new(task, Some(kind), decided(!r.found()), summary, result))
        }
        (Task::Compat, payload) => compat(task, payload, budget).unwrap_or_else(|| Err(unsupported())),
        (Task::Tensor, Payload::Finset(p)) => {
            let ambient = FinSet::new(p.ambient.iter().copied()).map_err(module)?;
            let (a, b) = both(&p.a, &p.b)?;
            let (fa, fb) = (subset_of(&ambient, &a).map_err(module)?, subset_of(&ambient, &b).map_err(module)?);
            let v = decide_tensor_independence(&DisjointUnion::default(), &fa, &fb, budget).map_err(module)?;
            Ok(tensor_report(task, kind, v))
        }
        (Task::Tensor, Payload::Finvect(p)) => {
            let (sa, sb) = finvect_pair(p.p, p.dim, &p.a, &p.b)?;
            let t = DirectSum { cat: FinVectCategory::new(p.p, 0..=2) };
            let v = decide_tensor_independence(&t, &sa.inclusion(), &sb.inclusion(), budget).map_err(module)?;
            Ok(tensor_report(task, kind, v))
        }
        (Task::Tensor, Payload::Opalg(p)) => {
            let (fa, fb, aa, ab) = opalg_parts(p)?;
            let tol = settings.tol.unwrap_or(VERIFY_TOL);
            let gamma = tensor_operation(&aa, &ab);
            let (na, nb) = (fa.source_dim(), fb.source_dim());
            if gamma.n_in() != fa.target_dim() {
                return Err(CliError::Module(format!("M_{na} ⊗ M_{nb} is not the ambient M_{}", fa.target_dim())));
            }
            let check = verify_extension(&gamma, &fa, &fb, &aa, &ab, tol).map_err(module)?;
            let product = if check.holds {
                Some(is_product_extension(&gamma, &fa, &fb, &aa, &ab, tol).map_err(module)?)
            } else {
                None
            };
            let summary = vec![
                format!("α_A ⊗ α_B extends: {} (residual {:e})", check.holds, check.residual()),
                format!("min Choi eigenvalue: {:e}", gamma.min_choi_eigenvalue()),
                format!("product extension: {}", product.is_some_and(|p| p.holds)),
            ];
            let result = json!({ "extension": to_value(&gamma), "check": to_value(&check), "product": to_value(&product) });
            Ok(Report::new(task, Some(kind), ReportOutcome::Decided, summary, result))
        }
        (Task::Adjudicate, Payload::Bool(p)) => {
            let ks: Vec<usize> = match p.split {
                Some(k) => vec![k],
                None => (1..p.atoms).collect(),
            };
            let mut reports = Vec::new();
            let mut summary = Vec::new();
            for k in ks {
                let r = adjudicate_atom_split(p.atoms, k, budget).map_err(module)?;
                summary.push(format!(
                    "n = {}, k = {}: independent {:?}, counterexample re-checks {}, agrees with claim {}",
                    r.n, r.k, r.independent, r.counterexample_rechecks, r.agrees_with_claim
                ));
                reports.push(r);
            }
            let open = reports.iter().any(|r| r.independent.is_none());
            Ok(Report::new(task, Some(kind), decided(open), summary, to_value(&reports)))
        }
        (Task::Audit, Payload::Site(p)) => {
            let f = p.assignment()?;
            let mut params = OpindParams::default();
            if let Some(tol) = settings.tol {
                params.tol = tol;
            }
            if let Some(o) = p.opind {
                params.samples = o.samples.unwrap_or(params.samples);
                params.kraus_count = o.kraus_count.unwrap_or(params.kraus_count);
                params.seed = o.seed.unwrap_or(params.seed);
            }
            let cover = p.cover.as_ref().map(|c| (c.region, c.embeddings.as_slice()));
            let audit = audit_site(&p.site, &f, cover, &params).map_err(module)?;
            let mut summary = vec![
                format!("covariance: {:?} (residual {:e})", audit.covariance.status, audit.covariance.residual),
                format!("einstein causality: {:?} (residual {:e})", audit.causality.status, audit.causality.residual),
                format!("operational independence: {:?} ({} pairs)", audit.opind.status, audit.opind.pairs.len()),
            ];
            if let Some(w) = &audit.weak_additivity {
                summary.push(format!("weak additivity: {:?} (span {} of {})", w.status, w.span_dim, w.target_dim));
            }
            let open = audit.status() == AuditStatus::Inconclusive;
            Ok(Report::new(task, Some(kind), decided(open), summary, to_value(&audit)))
        }
        (Task::Enumerate, payload) => enumerate(task, payload, budget).unwrap_or_else(|| Err(unsupported())),
        (Task::Suite, _) => Err(CliError::Unsupported { task: "suite".into(), kind: format!("{kind} (the suite takes no input)") }),
        _ => Err(unsupported()),
    }
}

fn finvect_pair(p: u32, dim: usize, a: &Option<Vec<Vec<u32>>>, b: &Option<Vec<Vec<u32>>>) -> Result<(Subspace, Subspace), CliError> {
    let space = FpSpace::new(p, dim).map_err(module)?;
    let (a, b) = both(a, b)?;
    Ok((Subspace::span(space, &a).map_err(module)?, Subspace::span(space, &b).map_err(module)?))
}

fn bool_pair(atoms: usize, a: &Option<Vec<u32>>, b: &Option<Vec<u32>>) -> Result<(Subalgebra, Subalgebra), CliError> {
    let (a, b) = both(a, b)?;
    Ok((
        Subalgebra::from_blocks(atoms, a).map_err(module)?,
        Subalgebra::from_blocks(atoms, b).map_err(module)?,
    ))
}

fn oml_pair(p: &crate::request::OmlPayload, l: &Oml) -> Result<(u32, u32), CliError> {
    let (a, b) = both(&p.a, &p.b)?;
    Ok((p.mask(l, &a).map_err(CliError::Module)?, p.mask(l, &b).map_err(CliError::Module)?))
}

fn opalg_parts(p: &crate::request::OpalgPayload) -> Result<(StarMono, StarMono, CpMap, CpMap), CliError> {
    Ok((
        p.f_a.build().map_err(CliError::Module)?,
        p.f_b.build().map_err(CliError::Module)?,
        p.alpha_a.build().map_err(CliError::Module)?,
        p.alpha_b.build().map_err(CliError::Module)?,
    ))
}

fn tensor_report<M: Serialize>(task: Task, kind: &'static str, v: TensorVerdict<M>) -> Report {
    let (line, open) = match &v {
        TensorVerdict::Independent { from_copair, h_monic, .. } => (
            format!("tensor-independent: mediator found (copair {from_copair}, monic {h_monic})"),
            false,
        ),
        TensorVerdict::NotIndependent { searched } => (format!("not tensor-independent ({searched} candidates searched)"), false),
        TensorVerdict::Undecided { reason } => (format!("undecided: {reason}"), true),
    };
    Report::new(task, Some(kind), decided(open), vec![line], to_value(&v))
}

fn compat_on<C: FiniteCategory>(cat: &C, f_a: C::Morphism, f_b: C::Morphism, budget: &Budget) -> Result<(bool, Value), CliError>
where
    C::Morphism: Serialize,
{
    let span = Cospan::new(cat, f_a, f_b).map_err(module)?;
    let v = decide_compatibility(cat, &span, CompatibilityMode::Constructed, budget).map_err(module)?;
    Ok((v.is_compatible(), to_value(&v)))
}

fn compat(task: Task, payload: &Payload, budget: &Budget) -> Option<Result<Report, CliError>> {
    let kind = payload.kind();
    let run = || -> Result<(bool, Value), CliError> {
        match payload {
            Payload::Finset(p) => {
                let ambient = FinSet::new(p.ambient.iter().copied()).map_err(module)?;
                let (a, b) = both(&p.a, &p.b)?;
                let cat = FinSetCategory::default();
                compat_on(&cat, subset_of(&ambient, &a).map_err(module)?, subset_of(&ambient, &b).map_err(module)?, budget)
            }
            Payload::Finvect(p) => {
                let (sa, sb) = finvect_pair(p.p, p.dim, &p.a, &p.b)?;
                compat_on(&FinVectCategory::new(p.p, 0..=2), sa.inclusion(), sb.inclusion(), budget)
            }
            Payload::Pregeom(p) => {
                let g = p.pregeometry()?;
                let (a, b) = both(&p.a, &p.b)?;
                compat_on(&PregeomCategory::default(), g.restrict(a).map_err(module)?, g.restrict(b).map_err(module)?, budget)
            }
            Payload::Bool(p) => {
                let (sa, sb) = bool_pair(p.atoms, &p.a, &p.b)?;
                let cat = copossible_core::latalg::boolean::BoolCategory::injective();
                compat_on(&cat, sa.inclusion(), sb.inclusion(), budget)
            }
            Payload::Oml(p) => {
                let l = p.lattice()?;
                let (ma, mb) = oml_pair(p, &l)?;
                compat_on(&OmlCategory::injective(), l.restrict(ma).map_err(module)?, l.restrict(mb).map_err(module)?, budget)
            }
            _ => unreachable!("filtered below"),
        }
    };
    if matches!(payload, Payload::Opalg(_) | Payload::Site(_)) {
        return None;
    }
    Some(run().map(|(ok, v)| {
        let line = if ok { "compatible" } else { "incompatible" };
        Report::new(task, Some(kind), ReportOutcome::Decided, vec![format!("verdict: {line}")], json!({ "verdict": v }))
    }))
}

#[derive(Serialize)]
struct PairRow<S> {
    a: S,
    b: S,
    independent: Option<bool>,
    oracle: bool,
}

fn rows_report<S: Serialize>(task: Task, kind: &'static str, rows: Vec<PairRow<S>>) -> Report {
    let undecided = rows.iter().filter(|r| r.independent.is_none()).count();
    let independent = rows.iter().filter(|r| r.independent == Some(true)).count();
    let disagree = rows.iter().filter(|r| r.independent.is_some_and(|i| i != r.oracle)).count();
    let summary = vec![format!(
        "{} pairs: {independent} independent, {undecided} undecided, {disagree} differ from the oracle",
        rows.len()
    )];
    Report::new(task, Some(kind), decided(undecided > 0), summary, to_value(&rows))
}

fn enumerate(task: Task, payload: &Payload, budget: &Budget) -> Option<Result<Report, CliError>> {
    let kind = payload.kind();
    let run = || -> Result<Report, CliError> {
        match payload {
            Payload::Finset(p) => {
                let ambient = FinSet::new(p.ambient.iter().copied()).map_err(module)?;
                let labels = ambient.labels().to_vec();
                let cat = FinSetCategory::default();
                let mut rows = Vec::new();
                let subsets: Vec<Vec<u32>> = (0..1u32 << labels.len())
                    .map(|m| labels.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &l)| l).collect())
                    .collect();
                for a in &subsets {
                    for b in &subsets {
                        let pair = MonoPair::new(&cat, subset_of(&ambient, a).map_err(module)?, subset_of(&ambient, b).map_err(module)?)
                            .map_err(module)?;
                        let v = decide_mor_independence(&cat, &pair, budget);
                        let oracle = disjointness_oracle(pair.f_a(), pair.f_b()).map_err(module)?;
                        rows.push(PairRow { a: a.clone(), b: b.clone(), independent: v.independent(), oracle });
                    }
                }
                Ok(rows_report(task, kind, rows))
            }
            Payload::Finvect(p) => {
                let space = FpSpace::new(p.p, p.dim).map_err(module)?;
                let cat = FinVectCategory::new(p.p, 0..=2);
                let subs = Subspace::all(space);
                let mut rows = Vec::new();
                for a in &subs {
                    for b in &subs {
                        let pair = MonoPair::new(&cat, a.inclusion(), b.inclusion()).map_err(module)?;
                        let v = decide_mor_independence(&cat, &pair, budget);
                        let oracle = intersection_oracle(a, b).map_err(module)?;
                        rows.push(PairRow { a: a.clone(), b: b.clone(), independent: v.independent(), oracle });
                    }
                }
                Ok(rows_report(task, kind, rows))
            }
            Payload::Pregeom(p) => {
                let g: Pregeometry = p.pregeometry()?;
                let cat = PregeomCategory::default();
                let closed = g.closed_sets();
                let mut rows = Vec::new();
                for &a in &closed {
                    for &b in &closed {
                        let v = decide_closed_pair(&cat, &g, a, b, budget).map_err(module)?;
                        let oracle = pregeom_independence_oracle(&g, a, b).map_err(module)?;
                        rows.push(PairRow { a, b, independent: v.independent(), oracle });
                    }
                }
                Ok(rows_report(task, kind, rows))
            }
            Payload::Bool(p) => {
                Subalgebra::trivial(p.atoms).map_err(module)?;
                let rows = scan_subalgebra_pairs(p.atoms, budget)
                    .into_iter()
                    .map(|f| PairRow { a: f.a_blocks, b: f.b_blocks, independent: f.mor_independent, oracle: f.boole_independent })
                    .collect();
                Ok(rows_report(task, kind, rows))
            }
            Payload::Oml(p) => {
                let l = p.lattice()?;
                let subs = l.sub_omls();
                let mut rows = Vec::new();
                for &a in &subs {
                    for &b in &subs {
                        let v = decide_sub_omls(&l, a, b, budget).map_err(module)?;
                        rows.push(PairRow { a, b, independent: v.independent(), oracle: logical_independent(&l, a, b).is_none() });
                    }
                }
                Ok(rows_report(task, kind, rows))
            }
            _ => unreachable!("filtered below"),
        }
    };
    if matches!(payload, Payload::Opalg(_) | Payload::Site(_)) {
        return None;
    }
    Some(run())
}

/// Runs the bundled suite, or the named claims only.
pub fn run_suite_task(claims: &[String], settings: &Settings) -> Result<Report, CliError> {
    let report: SuiteReport = if claims.is_empty() {
        run_suite(&settings.budget)
    } else {
        let ids: Vec<&str> = claims.iter().map(String::as_str).collect();
        run_claims(&ids, &settings.budget).ok_or_else(|| CliError::Missing(format!("unknown claim in {claims:?}")))?
    };
    let summary = report
        .claims
        .iter()
        .map(|c| format!("{:<12} {}: {}", format!("{:?}", c.status).to_lowercase(), c.id, c.detail))
        .collect();
    let outcome = if report.claims.iter().any(|c| c.status == ClaimStatus::Failed) {
        ReportOutcome::Failed
    } else {
        decided(!report.decided())
    };
    Ok(Report::new(Task::Suite, None, outcome, summary, to_value(&report)))
}

/// Plain-text rendering: a header line, the outcome, then the summary.
pub fn render_text(r: &Report) -> String {
    let task = serde_json::to_value(r.task).expect("task").as_str().unwrap_or_default().to_string();
    let mut out = format!("{} {} {}", r.tool, r.version, task);
    if let Some(k) = r.kind {
        out.push(' ');
        out.push_str(k);
    }
    out.push_str(&format!("\noutcome: {}\n", serde_json::to_value(r.outcome).expect("outcome").as_str().unwrap_or_default()));
    for line in &r.summary {
        out.push_str(line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_request;

    fn go(task: Task, text: &str) -> Report {
        run(task, &parse_request(text).unwrap(), &Settings::default()).unwrap()
    }

    #[test]
    fn disjoint_finset_pair_is_independent() {
        let r = go(Task::Decide, r#"{"kind": "finset", "payload": {"ambient": [1, 2, 3], "a": [1], "b": [2, 3]}}"#);
        assert_eq!(r.outcome, ReportOutcome::Decided);
        let res = r.result.unwrap();
        assert_eq!(res["verdict"]["decision"]["outcome"], "independent");
        assert_eq!(res["oracle"], true);
        assert!(res["verdict"]["stats"]["pairs_examined"].as_u64().unwrap() > 0);
    }

    #[test]
    fn feasibility_budget_exhaustion_is_open() {
        // one embedding twice: no factorization, so the search runs, with no iterations allowed
        let text = r#"{"kind": "opalg", "payload": {
            "f_a": {"n": 2, "k": 2},
            "f_b": {"n": 2, "k": 2},
            "alpha_a": {"n": 2, "kraus": [["0","0","0.6","0","0.6","0","0","0"], ["0.8","0","0","0","0","0","-0.8","0"]]},
            "alpha_b": {"n": 2, "kraus": [["0","0","0.6","0","0.6","0","0","0"], ["0.8","0","0","0","0","0","-0.8","0"]]},
            "max_iter": 0}}"#;
        let r = go(Task::Decide, text);
        assert_eq!(r.result.as_ref().unwrap()["route"], "feasibility", "{r:?}");
        assert_eq!(r.outcome, ReportOutcome::Open);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn mismatched_task_is_rejected() {
        let req = parse_request(r#"{"kind": "bool", "task": "adjudicate", "payload": {"atoms": 3, "split": 1}}"#).unwrap();
        assert!(matches!(run(Task::Decide, &req, &Settings::default()), Err(CliError::TaskMismatch { .. })));
        let r = run(Task::Adjudicate, &req, &Settings::default()).unwrap();
        assert_eq!(r.outcome, ReportOutcome::Decided);
        assert_eq!(r.result.unwrap()[0]["agrees_with_claim"], false);
    }
}
