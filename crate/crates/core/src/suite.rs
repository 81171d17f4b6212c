//! Bundled claim suite: every check of the workbench over its built-in corpus.
//!
//! Each claim reports `Confirmed` when the statement holds on every instance,
//! `Contradicted` when an exhaustive search refutes it with re-checked
//! counterexamples, `Failed` when a statement expected to hold breaks, and
//! `Inconclusive` when a budget or semidecision stops short. Reports carry no
//! timings so that repeated runs serialize identically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::finset::{self, FinSet, FinSetCategory, FinSetMorphism};
use crate::finvect::{
    direct_sum, intersection_oracle, joint_extension_by_basis, FinVectCategory, FpSpace, Subspace,
};
use crate::kernel::{
    audit_coproduct_in, audit_coproduct_independence, compose, decide_compatibility,
    decide_mor_independence, decide_subobject_independence, inverse, recheck_counterexample, Budget,
    CompatibilityMode, Cospan, FiniteCategory, MonoPair, SubobjectClass,
};
use crate::latalg::boolean::{
    adjudicate_atom_split, internal_sum_coproduct, scan_subalgebra_pairs, BoolCategory, Subalgebra,
};
use crate::latalg::oml::{self, decide_sub_omls, delta_weakening_violation, logical_independent, Oml, OmlCategory};
use crate::opalg::{
    canonical_injections, factorization_of, is_product_extension, random_unitary,
    search_joint_extension, tensor_operation, verify_extension, CpMap, FeasibilityParams, StarMono,
    VERIFY_TOL,
};
use crate::pregeom::{self, decide_closed_pair, pregeom_independence_oracle, PregeomCategory};
use crate::qft::{
    audit_site, check_einstein_causality, same_image_assignment, two_factor_assignment, two_region_site,
    AuditStatus, OpindPairVerdict, OpindParams, CAUSALITY_TOL,
};
use crate::tensor::{
    certify_hom_injective, check_regularity, decide_tensor_independence, joint_extension_via_injectivity,
    DirectSum, DisjointUnion, PlainUnion, TensorStructure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Confirmed,
    Contradicted,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub module: &'static str,
    pub status: ClaimStatus,
    pub instances: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub claims: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn get(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// True when nothing failed and nothing was left open.
    pub fn decided(&self) -> bool {
        self.claims
            .iter()
            .all(|c| matches!(c.status, ClaimStatus::Confirmed | ClaimStatus::Contradicted))
    }
}

type ClaimFn = fn(&Budget) -> ClaimResult;

/// Claim ids in report order.
pub const CLAIMS: &[(&str, ClaimFn)] = &[
    ("composition-laws", composition_laws),
    ("finset-oracle", finset_oracle),
    ("finvect-oracle", finvect_oracle),
    ("representative-invariance", representative_invariance),
    ("independence-implies-compatibility", independence_implies_compatibility),
    ("coproduct-independence", coproduct_independence),
    ("pregeom-oracle", pregeom_oracle),
    ("atom-split", atom_split),
    ("boole-implies-mor", boole_implies_mor),
    ("generation-case", generation_case),
    ("delta-weakening", delta_weakening),
    ("tensor-regularity", tensor_regularity),
    ("canonical-injections", canonical_injections_independent),
    ("injective-object-pipeline", injective_object_pipeline),
    ("operator-tensor-independence", operator_tensor_independence),
    ("feasibility-honesty", feasibility_honesty),
    ("site-audit", site_audit),
];

/// Runs every claim. Claims run in parallel; the report order is fixed.
pub fn run_suite(budget: &Budget) -> SuiteReport {
    SuiteReport {
        claims: CLAIMS.par_iter().map(|(_, f)| f(budget)).collect(),
    }
}

/// Runs the named claims only, in the order given.
pub fn run_claims(ids: &[&str], budget: &Budget) -> Option<SuiteReport> {
    let fns: Vec<ClaimFn> = ids
        .iter()
        .map(|id| CLAIMS.iter().find(|(c, _)| c == id).map(|(_, f)| *f))
        .collect::<Option<_>>()?;
    Some(SuiteReport {
        claims: fns.par_iter().map(|f| f(budget)).collect(),
    })
}

#[derive(Default)]
struct Tally {
    instances: u64,
    failures: Vec<String>,
    open: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn decided(&mut self, v: Option<bool>, what: impl FnOnce() -> String) -> Option<bool> {
        if v.is_none() {
            self.open.push(what());
        }
        v
    }

    fn finish(self, id: &'static str, module: &'static str, summary: String) -> ClaimResult {
        let (status, detail) = if let Some(f) = self.failures.first() {
            (ClaimStatus::Failed, format!("{} exceptions, first: {f}", self.failures.len()))
        } else if let Some(o) = self.open.first() {
            (ClaimStatus::Inconclusive, format!("{} undecided, first: {o}", self.open.len()))
        } else {
            (ClaimStatus::Confirmed, summary)
        };
        ClaimResult { id, module, status, instances: self.instances, detail }
    }
}

fn subset(n: u32, mask: u32) -> FinSet {
    FinSet::new((0..n).filter(|i| mask >> i & 1 == 1)).expect("distinct labels")
}

fn inclusion(n: u32, mask: u32) -> FinSetMorphism {
    FinSetMorphism::inclusion(&subset(n, mask), &FinSet::range(n)).expect("subset")
}

fn isomorphisms<C: FiniteCategory>(cat: &C, x: &C::Object) -> Vec<C::Morphism> {
    cat.hom(x, x).into_iter().filter(|h| inverse(cat, h).is_some()).collect()
}

fn composition_laws(_: &Budget) -> ClaimResult {
    let cat = FinSetCategory::default();
    let objs: Vec<FinSet> = (0..=2).map(FinSet::range).collect();
    let mut t = Tally::default();
    for x in &objs {
        for y in &objs {
            for f in cat.hom(x, y) {
                t.check(
                    compose(&cat, &cat.identity(x), &f).as_ref() == Ok(&f)
                        && compose(&cat, &f, &cat.identity(y)).as_ref() == Ok(&f),
                    || format!("identity law fails at {f:?}"),
                );
                for z in &objs {
                    for g in cat.hom(y, z) {
                        for w in &objs {
                            for h in cat.hom(z, w) {
                                let left = compose(&cat, &compose(&cat, &f, &g).unwrap(), &h);
                                let right = compose(&cat, &f, &compose(&cat, &g, &h).unwrap());
                                t.check(left == right, || format!("associativity fails at {f:?}, {g:?}, {h:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let n = t.instances;
    t.finish("composition-laws", "cat-kernel", format!("identity and associativity hold on {n} composable chains over sets of size <= 2"))
}

fn finset_oracle(budget: &Budget) -> ClaimResult {
    let cat = FinSetCategory::default();
    let mut t = Tally::default();
    for n in 0..=4u32 {
        for a in 0..1u32 << n {
            for b in 0..1u32 << n {
                let pair = MonoPair::new(&cat, inclusion(n, a), inclusion(n, b)).expect("inclusions are monic");
                let v = decide_mor_independence(&cat, &pair, budget);
                let oracle = finset::disjointness_oracle(pair.f_a(), pair.f_b()).expect("inclusions");
                let what = || format!("|C| = {n}, A = {a:#b}, B = {b:#b}");
                if let Some(got) = t.decided(v.independent(), what) {
                    let sound = match v.counterexample() {
                        Some(ce) => recheck_counterexample(&cat, &pair, ce),
                        None => v.witness_sound(&cat, &pair),
                    };
                    t.check(got == oracle && sound, || format!("|C| = {n}, A = {a:#b}, B = {b:#b}: search {got}, oracle {oracle}"));
                }
            }
        }
    }
    let n = t.instances;
    t.finish("finset-oracle", "finset", format!("search agrees with the disjointness oracle on all {n} subset pairs with |C| <= 4"))
}

fn finvect_oracle(budget: &Budget) -> ClaimResult {
    let cat = FinVectCategory::new(2, 0..=2);
    let mut t = Tally::default();
    let mut extensions = 0u64;
    for dim in 0..=3 {
        let c = cat.space(dim);
        let subs = Subspace::all(c);
        for a in &subs {
            for b in &subs {
                let pair = MonoPair::new(&cat, a.inclusion(), b.inclusion()).expect("inclusions are monic");
                let v = decide_mor_independence(&cat, &pair, budget);
                let oracle = intersection_oracle(a, b).expect("same ambient");
                let Some(got) = t.decided(v.independent(), || format!("dim {dim}: {a:?} {b:?}")) else {
                    continue;
                };
                t.check(got == oracle, || format!("dim {dim}: {a:?} {b:?}: search {got}, oracle {oracle}"));
                if got {
                    for alpha_a in cat.hom(&a.space(), &a.space()) {
                        for alpha_b in cat.hom(&b.space(), &b.space()) {
                            let ok = joint_extension_by_basis(a, b, &alpha_a, &alpha_b).is_ok_and(|g| {
                                compose(&cat, pair.f_a(), &g) == compose(&cat, &alpha_a, pair.f_a())
                                    && compose(&cat, pair.f_b(), &g) == compose(&cat, &alpha_b, pair.f_b())
                            });
                            extensions += 1;
                            if !ok {
                                t.failures.push(format!("basis extension fails for {a:?} {b:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let n = t.instances;
    t.finish(
        "finvect-oracle",
        "finvect",
        format!("search agrees with the trivial-intersection oracle on {n} subspace pairs over F_2^d, d <= 3; {extensions} basis extensions re-verified"),
    )
}

fn invariance_trial<C: FiniteCategory>(
    cat: &C,
    f_a: C::Morphism,
    f_b: C::Morphism,
    rng: &mut ChaCha8Rng,
    budget: &Budget,
) -> Result<(Option<bool>, Option<bool>), String> {
    let class_a = SubobjectClass::new(cat, f_a).map_err(|e| e.to_string())?;
    let class_b = SubobjectClass::new(cat, f_b).map_err(|e| e.to_string())?;
    let pick = |rng: &mut ChaCha8Rng, class: &SubobjectClass<C::Morphism>| {
        let isos = isomorphisms(cat, &cat.dom(&class.representative));
        let iso = isos[rng.random_range(0..isos.len())].clone();
        class.rerepresent(cat, &iso).map_err(|e| e.to_string())
    };
    let (alt_a, alt_b) = (pick(rng, &class_a)?, pick(rng, &class_b)?);
    let before = decide_subobject_independence(cat, &class_a, &class_b, budget).map_err(|e| e.to_string())?;
    let after = decide_subobject_independence(cat, &alt_a, &alt_b, budget).map_err(|e| e.to_string())?;
    Ok((before.independent(), after.independent()))
}

fn representative_invariance(budget: &Budget) -> ClaimResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
    let set_cat = FinSetCategory::default();
    let vect_cat = FinVectCategory::new(2, 0..=2);
    let bool_cat = BoolCategory::injective();
    let spaces = Subspace::all(vect_cat.space(3));
    let algebras = Subalgebra::all(4);
    let mut t = Tally::default();
    for trial in 0..100 {
        let outcome = match trial % 3 {
            0 => {
                let (a, b) = (rng.random_range(0..16), rng.random_range(0..16));
                invariance_trial(&set_cat, inclusion(4, a), inclusion(4, b), &mut rng, budget)
            }
            1 => {
                let a = &spaces[rng.random_range(0..spaces.len())];
                let b = &spaces[rng.random_range(0..spaces.len())];
                invariance_trial(&vect_cat, a.inclusion(), b.inclusion(), &mut rng, budget)
            }
            _ => {
                let a = &algebras[rng.random_range(0..algebras.len())];
                let b = &algebras[rng.random_range(0..algebras.len())];
                invariance_trial(&bool_cat, a.inclusion(), b.inclusion(), &mut rng, budget)
            }
        };
        match outcome {
            Ok((before, after)) => {
                if t.decided(before.and(after), || format!("trial {trial}")).is_some() {
                    t.check(before == after, || format!("trial {trial}: {before:?} vs {after:?}"));
                }
            }
            Err(e) => t.check(false, || format!("trial {trial}: {e}")),
        }
    }
    let n = t.instances;
    t.finish(
        "representative-invariance",
        "cat-kernel",
        format!("{n} random re-representations (finset, finvect, Boolean) leave every verdict unchanged"),
    )
}

fn necessity_on<C: FiniteCategory>(
    cat: &C,
    spans: impl IntoIterator<Item = (String, C::Morphism, C::Morphism)>,
    budget: &Budget,
    t: &mut Tally,
    independent: &mut u64,
) {
    for (name, f_a, f_b) in spans {
        let Ok(span) = Cospan::new(cat, f_a, f_b) else {
            t.check(false, || format!("{name}: not a cospan"));
            continue;
        };
        if decide_mor_independence(cat, &span, budget).independent() != Some(true) {
            continue;
        }
        *independent += 1;
        match decide_compatibility(cat, &span, CompatibilityMode::Constructed, budget) {
            Ok(v) => t.check(v.is_compatible(), || format!("{name}: independent but incompatible")),
            Err(e) => t.check(false, || format!("{name}: {e}")),
        }
    }
}

fn independence_implies_compatibility(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let mut independent = 0u64;

    let set_cat = FinSetCategory::default();
    let sets = (0..=3u32).flat_map(|n| {
        (0..1u32 << n).flat_map(move |a| {
            (0..1u32 << n).map(move |b| (format!("set {n}: {a:#b} {b:#b}"), inclusion(n, a), inclusion(n, b)))
        })
    });
    necessity_on(&set_cat, sets, budget, &mut t, &mut independent);

    let vect_cat = FinVectCategory::new(2, 0..=2);
    let mut spaces = Vec::new();
    for d in 0..=2 {
        let subs = Subspace::all(vect_cat.space(d));
        for a in &subs {
            for b in &subs {
                spaces.push((format!("F_2^{d}: {a:?} {b:?}"), a.inclusion(), b.inclusion()));
            }
        }
    }
    necessity_on(&vect_cat, spaces, budget, &mut t, &mut independent);

    let bool_cat = BoolCategory::injective();
    let mut algebras = Vec::new();
    for n in 1..=4 {
        let subs = Subalgebra::all(n);
        for a in &subs {
            for b in &subs {
                algebras.push((format!("2^{n}: {:?} {:?}", a.blocks, b.blocks), a.inclusion(), b.inclusion()));
            }
        }
    }
    necessity_on(&bool_cat, algebras, budget, &mut t, &mut independent);

    let oml_cat = OmlCategory::injective();
    for (name, c) in oml::corpus() {
        let subs = c.sub_omls();
        let spans: Vec<_> = subs
            .iter()
            .flat_map(|&a| subs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (format!("{name}: {a:#b} {b:#b}"), c.restrict(a).unwrap(), c.restrict(b).unwrap()))
            .collect();
        necessity_on(&oml_cat, spans, budget, &mut t, &mut independent);
    }

    let pg_cat = PregeomCategory::default();
    for (name, c) in pregeom::corpus() {
        let closed = c.closed_sets();
        let spans: Vec<_> = closed
            .iter()
            .flat_map(|&a| closed.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (format!("{name}: {a:#b} {b:#b}"), c.restrict(a).unwrap(), c.restrict(b).unwrap()))
            .collect();
        necessity_on(&pg_cat, spans, budget, &mut t, &mut independent);
    }

    t.finish(
        "independence-implies-compatibility",
        "cat-kernel",
        format!("all {independent} independent pairs of the corpus are compatible"),
    )
}

fn coproduct_independence(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let set_cat = FinSetCategory::default();
    for i in 0..=3 {
        for j in 0..=3 {
            let (_, cop) = finset::coproduct(&FinSet::range(i), &FinSet::range(j));
            let ok = audit_coproduct_independence(&set_cat, &cop, budget).is_ok_and(|a| a.independent());
            t.check(ok, || format!("{i} ⊔ {j}"));
        }
    }
    let vect_cat = FinVectCategory::new(2, 0..=2);
    for i in 0..=2 {
        for j in 0..=2 {
            let cop = direct_sum(vect_cat.space(i), vect_cat.space(j));
            let ok = audit_coproduct_independence(&vect_cat, &cop, budget).is_ok_and(|a| a.independent());
            t.check(ok, || format!("F_2^{i} ⊕ F_2^{j}"));
        }
    }
    let (all, inj) = (BoolCategory::all_homs(), BoolCategory::injective());
    for n in 1..=4 {
        let subs = Subalgebra::all(n);
        for a in &subs {
            for b in &subs {
                let Ok((_, cop)) = internal_sum_coproduct(a, b) else { continue };
                let ok = audit_coproduct_in(&all, &inj, &cop, budget).is_ok_and(|a| a.independent());
                t.check(ok, || format!("2^{n}: {:?} + {:?}", a.blocks, b.blocks));
            }
        }
    }
    let n = t.instances;
    t.finish(
        "coproduct-independence",
        "cat-kernel",
        format!("coproduct injections are independent in all {n} audited coproducts"),
    )
}

fn pregeom_oracle(budget: &Budget) -> ClaimResult {
    let cat = PregeomCategory::default();
    let mut t = Tally::default();
    for (name, c) in pregeom::corpus() {
        let closed = c.closed_sets();
        for &a in &closed {
            for &b in &closed {
                let what = || format!("{name}: {a:#b} {b:#b}");
                let v = match decide_closed_pair(&cat, &c, a, b, budget) {
                    Ok(v) => v,
                    Err(e) => {
                        t.check(false, || format!("{name}: {e}"));
                        continue;
                    }
                };
                if let Some(got) = t.decided(v.independent(), what) {
                    let oracle = pregeom_independence_oracle(&c, a, b).expect("closed");
                    t.check(got == oracle, || format!("{name}: {a:#b} {b:#b}: search {got}, oracle {oracle}"));
                }
            }
        }
    }
    let n = t.instances;
    t.finish("pregeom-oracle", "pregeom", format!("search agrees with the closure-intersection oracle on {n} closed pairs"))
}

fn atom_split(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let mut refuted = Vec::new();
    for n in 2..=5 {
        for k in 1..n {
            let r = match adjudicate_atom_split(n, k, budget) {
                Ok(r) => r,
                Err(e) => {
                    t.check(false, || e.to_string());
                    continue;
                }
            };
            if t.decided(r.independent, || format!("n = {n}, k = {k}")) == Some(false) {
                t.check(r.counterexample_rechecks, || format!("n = {n}, k = {k}: counterexample does not re-check"));
                refuted.push(format!("{n}/{k}"));
            } else {
                t.instances += 1;
            }
        }
    }
    let mut res = t.finish("atom-split", "latalg", String::new());
    if res.status == ClaimStatus::Confirmed {
        if refuted.is_empty() {
            res.detail = "every atom split is independent".into();
        } else {
            res.status = ClaimStatus::Contradicted;
            res.detail = format!(
                "claimed independent; {} of {} splits (n/k: {}) have a re-checked counterexample",
                refuted.len(),
                res.instances,
                refuted.join(", ")
            );
        }
    }
    res
}

fn boole_implies_mor(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let mut violations = Vec::new();
    let mut mor_not_boole = 0u64;
    for n in 1..=5 {
        let mut count = 0;
        for f in scan_subalgebra_pairs(n, budget) {
            t.instances += 1;
            let Some(mor) = t.decided(f.mor_independent, || format!("2^{n}: {:?} {:?}", f.a_blocks, f.b_blocks)) else {
                continue;
            };
            if f.boole_independent && !mor {
                count += 1;
            }
            if mor && !f.boole_independent {
                mor_not_boole += 1;
            }
        }
        violations.push(count);
    }
    let mut res = t.finish("boole-implies-mor", "latalg", String::new());
    if res.status == ClaimStatus::Confirmed {
        let total: u64 = violations.iter().sum();
        res.status = if total > 0 { ClaimStatus::Contradicted } else { ClaimStatus::Confirmed };
        res.detail = format!(
            "Boole-independent but not Mor-independent pairs by atom count 1..=5: {violations:?}; Mor-independent but not Boole-independent: {mor_not_boole}"
        );
    }
    res
}

fn generation_case(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    for n in 1..=4 {
        for f in scan_subalgebra_pairs(n, budget) {
            if f.boole_independent && f.generates {
                let what = || format!("2^{n}: {:?} {:?}", f.a_blocks, f.b_blocks);
                if let Some(got) = t.decided(f.mor_independent, what) {
                    t.check(got, || format!("2^{n}: {:?} {:?}", f.a_blocks, f.b_blocks));
                }
            }
        }
    }
    for (name, c) in oml::corpus() {
        let subs = c.sub_omls();
        for &a in &subs {
            for &b in &subs {
                if logical_independent(&c, a, b).is_some() || c.generate(a | b) != c.full() {
                    continue;
                }
                let v = decide_sub_omls(&c, a, b, budget).map(|v| v.independent());
                match v {
                    Ok(v) => {
                        if let Some(got) = t.decided(v, || format!("{name}: {a:#b} {b:#b}")) {
                            t.check(got, || format!("{name}: {a:#b} {b:#b}"));
                        }
                    }
                    Err(e) => t.check(false, || format!("{name}: {e}")),
                }
            }
        }
    }
    let n = t.instances;
    t.finish(
        "generation-case",
        "latalg",
        format!("all {n} logically independent, jointly generating pairs are Mor-independent"),
    )
}

fn delta_weakening(_: &Budget) -> ClaimResult {
    let mut lattices: Vec<(String, Oml)> = (0..=4).map(|k| (format!("2^{k}"), Oml::boolean(k))).collect();
    lattices.extend(oml::corpus().into_iter().map(|(n, l)| (n.to_string(), l)));
    let mut witness = None;
    for (name, l) in &lattices {
        if let Some((x, y, z)) = delta_weakening_violation(l) {
            witness.get_or_insert(format!("{name}: x = {x}, y = {y}, z = {z}"));
        }
    }
    let boolean_ok = (0..=4).all(|k| delta_weakening_violation(&Oml::boolean(k)).is_none());
    let (status, detail) = match (boolean_ok, witness) {
        (false, _) => (ClaimStatus::Failed, "violation inside a Boolean algebra".to_string()),
        (true, Some(w)) => (
            ClaimStatus::Contradicted,
            format!("x ∧ y = 0 does not imply x δ y in general; holds on Boolean algebras, first violation {w}"),
        ),
        (true, None) => (ClaimStatus::Confirmed, "no violation in the corpus".to_string()),
    };
    ClaimResult { id: "delta-weakening", module: "latalg", status, instances: lattices.len() as u64, detail }
}

fn tensor_regularity(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let sets: Vec<FinSet> = (0..=2).map(FinSet::range).collect();
    let du = check_regularity(&DisjointUnion::default(), &sets, budget);
    t.check(du.as_ref().is_ok_and(|r| r.passed()), || format!("(finset, ⊔): {du:?}"));
    let ds = DirectSum { cat: FinVectCategory::new(2, 0..=2) };
    let spaces: Vec<FpSpace> = (0..=2).map(|d| ds.cat.space(d)).collect();
    let dr = check_regularity(&ds, &spaces, budget);
    t.check(dr.as_ref().is_ok_and(|r| r.passed()), || format!("(finvect, ⊕): {dr:?}"));

    // the plain union is expected to fail: no morphism bifunctor, overlapping injections not independent
    let pu = PlainUnion::default();
    let overlap = [FinSet::new([1, 2]).unwrap(), FinSet::new([2, 3]).unwrap()];
    let ur = check_regularity(&pu, &overlap, budget);
    t.check(ur.as_ref().is_ok_and(|r| !r.passed()), || format!("(finset, ∪) unexpectedly regular: {ur:?}"));
    let (ia, ib) = pu.injections(&overlap[0], &overlap[1]);
    let span = Cospan::new(&pu.cat, ia, ib).expect("common codomain");
    let v = decide_mor_independence(&pu.cat, &span, budget);
    let rechecks = v.counterexample().is_some_and(|ce| recheck_counterexample(&pu.cat, &span, ce));
    t.check(v.independent() == Some(false) && rechecks, || "(finset, ∪): overlapping injections independent".into());
    t.finish(
        "tensor-regularity",
        "tensorcat",
        "(finset, ⊔) and (finvect, ⊕) are regular; (finset, ∪) is not, and its overlapping injections are not independent".into(),
    )
}

fn injections_on<T: TensorStructure>(t: &T, objs: &[<T::Cat as FiniteCategory>::Object], budget: &Budget, tally: &mut Tally) {
    let cat = t.category();
    for a in objs {
        for b in objs {
            let (ia, ib) = t.injections(a, b);
            let what = || format!("{a:?} ⊗ {b:?}");
            let span = Cospan::new(cat, ia.clone(), ib.clone()).expect("common codomain");
            let v = decide_mor_independence(cat, &span, budget);
            if let Some(got) = tally.decided(v.independent(), what) {
                let mediated = decide_tensor_independence(t, &ia, &ib, budget).is_ok_and(|v| v.mediator().is_some());
                tally.check(got && mediated && v.witness_sound(cat, &span), || format!("{a:?} ⊗ {b:?}"));
            }
        }
    }
}

fn canonical_injections_independent(budget: &Budget) -> ClaimResult {
    let mut t = Tally::default();
    let du = DisjointUnion::default();
    injections_on(&du, &(0..=2).map(FinSet::range).collect::<Vec<_>>(), budget, &mut t);
    let ds = DirectSum { cat: FinVectCategory::new(2, 0..=2) };
    let spaces: Vec<FpSpace> = (0..=2).map(|d| ds.cat.space(d)).collect();
    injections_on(&ds, &spaces, budget, &mut t);
    let n = t.instances;
    t.finish(
        "canonical-injections",
        "tensorcat",
        format!("canonical injections are Mor- and tensor-independent in all {n} (finset, ⊔) and (finvect, ⊕) instances"),
    )
}

fn injective_object_pipeline(budget: &Budget) -> ClaimResult {
    let cat = FinVectCategory::new(2, 0..=3);
    let t_sum = DirectSum { cat: cat.clone() };
    let q = cat.space(3);
    let domains: Vec<FpSpace> = (0..=3).map(|d| cat.space(d)).collect();
    let cert = match certify_hom_injective(&cat, &q, &domains, budget) {
        Ok(Ok(cert)) => cert,
        other => {
            return ClaimResult {
                id: "injective-object-pipeline",
                module: "tensorcat",
                status: ClaimStatus::Failed,
                instances: 0,
                detail: format!("F_2^3 not certified injective: {:?}", other.map(|r| r.err())),
            }
        }
    };
    let mut t = Tally::default();
    t.check(cert.verify(&cat), || "certificate does not verify".into());
    let subs = Subspace::all(q);
    let mut rng = ChaCha8Rng::seed_from_u64(0x47);
    let mut trials = 0;
    while trials < 50 {
        let a = &subs[rng.random_range(0..subs.len())];
        let b = &subs[rng.random_range(0..subs.len())];
        if !intersection_oracle(a, b).expect("same ambient") {
            continue;
        }
        trials += 1;
        let ends_a = cat.hom(&a.space(), &a.space());
        let ends_b = cat.hom(&b.space(), &b.space());
        let alpha_a = &ends_a[rng.random_range(0..ends_a.len())];
        let alpha_b = &ends_b[rng.random_range(0..ends_b.len())];
        let (fa, fb) = (a.inclusion(), b.inclusion());
        match joint_extension_via_injectivity(&t_sum, &fa, &fb, alpha_a, alpha_b, &cert, budget) {
            Ok(ext) => t.check(
                compose(&cat, &fa, &ext.j) == compose(&cat, alpha_a, &fa)
                    && compose(&cat, &fb, &ext.j) == compose(&cat, alpha_b, &fb)
                    && compose(&cat, &ext.u, &ext.j) == compose(&cat, &ext.h, &ext.v),
                || format!("squares fail for {a:?} {b:?}"),
            ),
            Err(e) => t.check(false, || format!("{a:?} {b:?}: {e}")),
        }
    }
    t.finish(
        "injective-object-pipeline",
        "tensorcat",
        format!("F_2^3 certified injective ({} entries); 50 random joint extensions pass both squares", cert.len()),
    )
}

fn operator_tensor_independence(_: &Budget) -> ClaimResult {
    let (fa, fb) = canonical_injections(2, 2).expect("unitary");
    let mut rng = ChaCha8Rng::seed_from_u64(0x55);
    let mut t = Tally::default();
    let mut worst = 0f64;
    let mut min_eig = f64::INFINITY;
    for i in 0..100 {
        let kraus = 1 + i % 4;
        let a = CpMap::random_unital(2, kraus, &mut rng);
        let b = CpMap::random_unital(2, kraus, &mut rng);
        let gamma = tensor_operation(&a, &b);
        let ext = verify_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).expect("dimensions");
        let product = is_product_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).is_ok_and(|p| p.holds);
        let eig = gamma.min_choi_eigenvalue();
        worst = worst.max(ext.residual());
        min_eig = min_eig.min(eig);
        t.check(ext.holds && ext.residual() <= 1e-10 && eig >= -1e-10 && product, || {
            format!("pair {i}: residual {:e}, min eigenvalue {eig:e}, product {product}", ext.residual())
        });
    }
    t.finish(
        "operator-tensor-independence",
        "opalg",
        format!("100 random unital CP pairs on M_2: α_A ⊗ α_B is a CP unital product extension (residual <= {worst:.1e}, min Choi eigenvalue >= {min_eig:.1e})"),
    )
}

fn feasibility_honesty(_: &Budget) -> ClaimResult {
    let params = FeasibilityParams::default();
    let (ca, cb) = canonical_injections(2, 2).expect("unitary");
    let mut rng = ChaCha8Rng::seed_from_u64(0xfe);
    let mut t = Tally::default();
    let mut iterations = Vec::new();
    for i in 0..20 {
        let u = random_unitary(4, &mut rng);
        let fa = StarMono::new(2, 2, &u * ca.unitary()).expect("unitary");
        let fb = StarMono::new(2, 2, &u * cb.unitary()).expect("unitary");
        let a = CpMap::random_unital(2, 2, &mut rng);
        let b = CpMap::random_unital(2, 2, &mut rng);
        let factored = factorization_of(&fa, &fb, VERIFY_TOL).is_ok_and(|f| f.is_some());
        match search_joint_extension(&fa, &fb, &a, &b, &params) {
            Ok(r) => {
                let verified = r
                    .extension
                    .as_ref()
                    .is_some_and(|g| verify_extension(g, &fa, &fb, &a, &b, params.tol).is_ok_and(|c| c.holds));
                iterations.push(r.iterations);
                t.check(factored && r.found() && verified, || format!("conjugated instance {i}: {:?}", r.status));
            }
            Err(e) => t.check(false, || format!("conjugated instance {i}: {e}")),
        }
    }
    for i in 0..5 {
        // one embedding, two operations that disagree on it
        let (a, b) = (CpMap::random_unital(2, 2, &mut rng), CpMap::random_unital(2, 2, &mut rng));
        match search_joint_extension(&ca, &ca, &a, &b, &params) {
            Ok(r) => t.check(!r.found() && r.extension.is_none(), || format!("inconsistent instance {i} reported Found")),
            Err(e) => t.check(false, || format!("inconsistent instance {i}: {e}")),
        }
    }
    let max_iter = iterations.iter().max().copied().unwrap_or(0);
    t.finish(
        "feasibility-honesty",
        "opalg",
        format!("20 conjugated tensor instances in M_4 Found and re-verified (at most {max_iter} iterations); 5 inconsistent instances Unknown"),
    )
}

fn site_audit(_: &Budget) -> ClaimResult {
    let site = two_region_site();
    let mut t = Tally::default();
    let params = OpindParams::default();
    match two_factor_assignment(None).and_then(|f| audit_site(&site, &f, Some((2, &[3, 4])), &params)) {
        Ok(a) => {
            t.check(a.covariance.status == AuditStatus::Pass && a.covariance.residual == 0.0, || format!("covariance {:?}", a.covariance));
            t.check(
                a.causality.status == AuditStatus::Pass && a.causality.residual <= CAUSALITY_TOL,
                || format!("causality {:?}", a.causality),
            );
            let certified = a.opind.status == AuditStatus::Pass
                && a.opind.pairs.iter().all(|p| matches!(p, OpindPairVerdict::Pass { residual, .. } if *residual <= VERIFY_TOL));
            t.check(certified, || format!("opind {:?}", a.opind.status));
            let additivity = a.weak_additivity.as_ref().is_some_and(|w| w.status == AuditStatus::Pass && w.span_dim == 16);
            t.check(additivity, || format!("weak additivity {:?}", a.weak_additivity));
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    match same_image_assignment().and_then(|f| Ok((check_einstein_causality(&site, &f, CAUSALITY_TOL)?, f))) {
        Ok((v, f)) => {
            let rechecks = v.witness.as_ref().is_some_and(|w| w.recheck(&f) > CAUSALITY_TOL);
            t.check(v.status == AuditStatus::Fail && rechecks, || format!("same-image causality {:?}", v.status));
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    t.finish(
        "site-audit",
        "qft-audit",
        "two-factor site passes covariance, causality, operational independence and weak additivity; same-image site violates causality with a re-checked witness".into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_are_unique() {
        let mut ids: Vec<_> = CLAIMS.iter().map(|(id, _)| *id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CLAIMS.len());
    }

    #[test]
    fn fast_claims_hold() {
        let r = run_claims(&["composition-laws", "delta-weakening", "tensor-regularity", "site-audit"], &Budget::default()).unwrap();
        let statuses: Vec<_> = r.claims.iter().map(|c| c.status).collect();
        assert_eq!(
            statuses,
            vec![ClaimStatus::Confirmed, ClaimStatus::Contradicted, ClaimStatus::Confirmed, ClaimStatus::Confirmed],
            "{r:#?}"
        );
        assert!(run_claims(&["no-such-claim"], &Budget::default()).is_none());
    }

    #[test]
    fn starved_budget_is_inconclusive() {
        // End(X) of a 3-set already has 27 maps
        let budget = Budget { max_endomorphisms: 16, ..Budget::default() };
        let r = run_claims(&["finset-oracle"], &budget).unwrap();
        assert_eq!(r.claims[0].status, ClaimStatus::Inconclusive, "{r:#?}");
    }
}
