//! Tensor structures on finite categories: regularity, tensor independence,
//! injective objects, and joint extension through an injective object.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::finset::{self, FinSet, FinSetCategory, FinSetMorphism};
use crate::finvect::{direct_sum, FinVectCategory, FpSpace, LinearMap};
use crate::fp::FpMatrix;
use crate::kernel::{compose, is_monomorphism, Budget, FiniteCategory, KernelError};

type Obj<T> = <<T as TensorStructure>::Cat as FiniteCategory>::Object;
type Mor<T> = <<T as TensorStructure>::Cat as FiniteCategory>::Morphism;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("tensor of morphisms is not defined for {0}")]
    Undefined(String),
    #[error("tensor is not functorial: {0}")]
    NotFunctorial(String),
    #[error("no mediating morphism out of the tensor product")]
    NotTensorIndependent,
    #[error("injectivity certificate has no entry for ({m}, {a})")]
    CertificateMiss { m: String, a: String },
    #[error("certificate does not cover the domain {0}")]
    UncoveredDomain(String),
    #[error("extension fails its restriction square on the {0} side")]
    SquareFails(&'static str),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Object and morphism bifunctor with unit and canonical injections.
/// Associativity and unit isomorphisms are not represented.
pub trait TensorStructure: Sync {
    type Cat: FiniteCategory;

    fn category(&self) -> &Self::Cat;

    fn tensor(&self, a: &Obj<Self>, b: &Obj<Self>) -> Obj<Self>;

    /// `m_a ⊗ m_b`, or `None` where the bifunctor is not defined.
    fn tensor_morphisms(&self, m_a: &Mor<Self>, m_b: &Mor<Self>) -> Option<Mor<Self>>;

    fn unit(&self) -> Obj<Self>;

    /// `(i_A, i_B)` into `A ⊗ B`.
    fn injections(&self, a: &Obj<Self>, b: &Obj<Self>) -> (Mor<Self>, Mor<Self>);

    /// A mediating `A ⊗ B -> C` built directly, when the tensor is a coproduct.
    fn copair(&self, _f_a: &Mor<Self>, _f_b: &Mor<Self>) -> Option<Mor<Self>> {
        None
    }
}

/// Finite sets with tagged disjoint union.
#[derive(Debug, Clone, Default)]
pub struct DisjointUnion {
    pub cat: FinSetCategory,
}

impl TensorStructure for DisjointUnion {
    type Cat = FinSetCategory;

    fn category(&self) -> &FinSetCategory {
        &self.cat
    }

    fn tensor(&self, a: &FinSet, b: &FinSet) -> FinSet {
        finset::coproduct(a, b).0
    }

    fn tensor_morphisms(&self, m_a: &FinSetMorphism, m_b: &FinSetMorphism) -> Option<FinSetMorphism> {
        let dom = self.tensor(m_a.dom(), m_b.dom());
        let cod = self.tensor(m_a.cod(), m_b.cod());
        let shift = m_a.cod().len() as u32;
        let table = m_a
            .table()
            .iter()
            .copied()
            .chain(m_b.table().iter().map(|&t| t + shift))
            .collect();
        FinSetMorphism::new(&dom, &cod, table).ok()
    }

    fn unit(&self) -> FinSet {
        FinSet::range(0)
    }

    fn injections(&self, a: &FinSet, b: &FinSet) -> (FinSetMorphism, FinSetMorphism) {
        let cop = finset::coproduct(a, b).1;
        (cop.i1, cop.i2)
    }

    fn copair(&self, f_a: &FinSetMorphism, f_b: &FinSetMorphism) -> Option<FinSetMorphism> {
        if f_a.cod() != f_b.cod() {
            return None;
        }
        let dom = self.tensor(f_a.dom(), f_b.dom());
        let table = f_a.table().iter().chain(f_b.table()).copied().collect();
        FinSetMorphism::new(&dom, f_a.cod(), table).ok()
    }
}

/// Finite sets with plain union of labels. Only the object part is defined.
#[derive(Debug, Clone, Default)]
pub struct PlainUnion {
    pub cat: FinSetCategory,
}

impl TensorStructure for PlainUnion {
    type Cat = FinSetCategory;

    fn category(&self) -> &FinSetCategory {
        &self.cat
    }

    fn tensor(&self, a: &FinSet, b: &FinSet) -> FinSet {
        let mut labels: Vec<u32> = a.labels().iter().chain(b.labels()).copied().collect();
        labels.sort_unstable();
        labels.dedup();
        FinSet::new(labels).expect("deduplicated")
    }

    fn tensor_morphisms(&self, _: &FinSetMorphism, _: &FinSetMorphism) -> Option<FinSetMorphism> {
        None
    }

    fn unit(&self) -> FinSet {
        FinSet::range(0)
    }

    fn injections(&self, a: &FinSet, b: &FinSet) -> (FinSetMorphism, FinSetMorphism) {
        let u = self.tensor(a, b);
        (
            FinSetMorphism::inclusion(a, &u).expect("subset"),
            FinSetMorphism::inclusion(b, &u).expect("subset"),
        )
    }
}

/// `F_p`-vector spaces with direct sum.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub cat: FinVectCategory,
}

impl TensorStructure for DirectSum {
    type Cat = FinVectCategory;

    fn category(&self) -> &FinVectCategory {
        &self.cat
    }

    fn tensor(&self, a: &FpSpace, b: &FpSpace) -> FpSpace {
        FpSpace {
            p: a.p,
            dim: a.dim + b.dim,
        }
    }

    fn tensor_morphisms(&self, m_a: &LinearMap, m_b: &LinearMap) -> Option<LinearMap> {
        let dom = self.tensor(&m_a.dom, &m_b.dom);
        let cod = self.tensor(&m_a.cod, &m_b.cod);
        let mut m = FpMatrix::zeros(dom.p, cod.dim, dom.dim);
        for i in 0..m_a.cod.dim {
            for j in 0..m_a.dom.dim {
                m.set(i, j, m_a.matrix.get(i, j));
            }
        }
        for i in 0..m_b.cod.dim {
            for j in 0..m_b.dom.dim {
                m.set(m_a.cod.dim + i, m_a.dom.dim + j, m_b.matrix.get(i, j));
            }
        }
        LinearMap::new(dom, cod, m).ok()
    }

    fn unit(&self) -> FpSpace {
        self.cat.space(0)
    }

    fn injections(&self, a: &FpSpace, b: &FpSpace) -> (LinearMap, LinearMap) {
        let cop = direct_sum(*a, *b);
        (cop.i1, cop.i2)
    }

    fn copair(&self, f_a: &LinearMap, f_b: &LinearMap) -> Option<LinearMap> {
        if f_a.cod != f_b.cod {
            return None;
        }
        let dom = self.tensor(&f_a.dom, &f_b.dom);
        LinearMap::new(dom, f_a.cod, f_a.matrix.hstack(&f_b.matrix)).ok()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RegularityReport {
    pub injections_monic: bool,
    pub bifunctor_defined: bool,
    pub square_commutes: bool,
    /// Every `hom(A, A') x hom(B, B')` was enumerated in full.
    pub exhaustive: bool,
    pub squares_checked: u64,
    pub counterexamples: Vec<String>,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.injections_monic && self.bifunctor_defined && self.square_commutes
    }
}

const MAX_COUNTEREXAMPLES: usize = 8;

/// Checks that canonical injections are monic `Hom`-arrows and that
/// `i_A ; (m_A ⊗ m_B) = m_A ; i_A'` (and the `B` side) for morphisms between
/// the given objects. Hom-set products above `budget.max_pairs` are sampled
/// by their first `budget.max_pairs` elements in canonical order.
pub fn check_regularity<T: TensorStructure>(
    t: &T,
    objects: &[Obj<T>],
    budget: &Budget,
) -> Result<RegularityReport, TensorError> {
    let cat = t.category();
    let mut report = RegularityReport {
        injections_monic: true,
        bifunctor_defined: true,
        square_commutes: true,
        exhaustive: true,
        ..RegularityReport::default()
    };
    let note = |r: &mut RegularityReport, msg: String| {
        if r.counterexamples.len() < MAX_COUNTEREXAMPLES {
            r.counterexamples.push(msg);
        }
    };
    for a in objects {
        for b in objects {
            let (ia, ib) = t.injections(a, b);
            for i in [&ia, &ib] {
                if !cat.is_hom(i) || !is_monomorphism(cat, i) {
                    report.injections_monic = false;
                    note(&mut report, format!("injection {} is not a Hom-mono", cat.describe(i)));
                }
            }
            check_functor_on_identities(t, a, b)?;
        }
    }
    for a in objects {
        for a2 in objects {
            let homs_a = cat.hom(a, a2);
            for b in objects {
                for b2 in objects {
                    let homs_b = cat.hom(b, b2);
                    let total = homs_a.len() as u128 * homs_b.len() as u128;
                    if total > budget.max_pairs {
                        report.exhaustive = false;
                    }
                    let (ia, ib) = t.injections(a, b);
                    let (ia2, ib2) = t.injections(a2, b2);
                    let pairs = homs_a
                        .iter()
                        .flat_map(|ma| homs_b.iter().map(move |mb| (ma, mb)))
                        .take(budget.max_pairs.min(usize::MAX as u128) as usize);
                    for (ma, mb) in pairs {
                        report.squares_checked += 1;
                        let Some(h) = t.tensor_morphisms(ma, mb) else {
                            if report.bifunctor_defined {
                                note(
                                    &mut report,
                                    format!(
                                        "{} ⊗ {} is undefined",
                                        cat.describe(ma),
                                        cat.describe(mb)
                                    ),
                                );
                            }
                            report.bifunctor_defined = false;
                            report.square_commutes = false;
                            continue;
                        };
                        let left = cat.compose_unchecked(&ia, &h) == cat.compose_unchecked(ma, &ia2);
                        let right = cat.compose_unchecked(&ib, &h) == cat.compose_unchecked(mb, &ib2);
                        if !(left && right) {
                            report.square_commutes = false;
                            note(
                                &mut report,
                                format!(
                                    "square fails for ({}, {})",
                                    cat.describe(ma),
                                    cat.describe(mb)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `id ⊗ id = id` and `(f;g) ⊗ (f;g) = (f⊗f);(g⊗g)` on endomorphisms.
fn check_functor_on_identities<T: TensorStructure>(
    t: &T,
    a: &Obj<T>,
    b: &Obj<T>,
) -> Result<(), TensorError> {
    let cat = t.category();
    let Some(idt) = t.tensor_morphisms(&cat.identity(a), &cat.identity(b)) else {
        return Ok(());
    };
    if idt != cat.identity(&t.tensor(a, b)) {
        return Err(TensorError::NotFunctorial(format!(
            "id ⊗ id is not the identity on {:?}",
            t.tensor(a, b)
        )));
    }
    let (ea, eb) = (cat.hom(a, a), cat.hom(b, b));
    for (f, g) in ea.iter().zip(eb.iter().rev()).take(16) {
        let (f2, g2) = (&ea[ea.len() / 2], &eb[eb.len() / 2]);
        let lhs = t.tensor_morphisms(&cat.compose_unchecked(f, f2), &cat.compose_unchecked(g, g2));
        let rhs = match (t.tensor_morphisms(f, g), t.tensor_morphisms(f2, g2)) {
            (Some(x), Some(y)) => Some(cat.compose_unchecked(&x, &y)),
            _ => None,
        };
        if lhs != rhs {
            return Err(TensorError::NotFunctorial(format!(
                "composition not preserved at ({}, {})",
                cat.describe(f),
                cat.describe(g)
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TensorVerdict<M> {
    Independent {
        h: M,
        from_copair: bool,
        h_is_hom: bool,
        h_monic: bool,
    },
    NotIndependent {
        searched: u64,
    },
    Undecided {
        reason: String,
    },
}

impl<M> TensorVerdict<M> {
    pub fn mediator(&self) -> Option<&M> {
        match self {
            TensorVerdict::Independent { h, .. } => Some(h),
            _ => None,
        }
    }
}

/// Looks for `h: A ⊗ B -> C` with `i_A ; h = f_A` and `i_B ; h = f_B`,
/// using the instance's copair when it has one.
pub fn decide_tensor_independence<T: TensorStructure>(
    t: &T,
    f_a: &Mor<T>,
    f_b: &Mor<T>,
    budget: &Budget,
) -> Result<TensorVerdict<Mor<T>>, TensorError> {
    let cat = t.category();
    let c = cat.cod(f_a);
    if cat.cod(f_b) != c {
        return Err(KernelError::CodomainMismatch {
            left: format!("{c:?}"),
            right: format!("{:?}", cat.cod(f_b)),
        }
        .into());
    }
    let (a, b) = (cat.dom(f_a), cat.dom(f_b));
    let (ia, ib) = t.injections(&a, &b);
    let mediates = |h: &Mor<T>| {
        cat.compose_unchecked(&ia, h) == *f_a && cat.compose_unchecked(&ib, h) == *f_b
    };
    let verdict = |h: Mor<T>, from_copair| TensorVerdict::Independent {
        h_is_hom: cat.is_hom(&h),
        h_monic: is_monomorphism(cat, &h),
        h,
        from_copair,
    };
    if let Some(h) = t.copair(f_a, f_b) {
        if mediates(&h) {
            return Ok(verdict(h, true));
        }
    }
    let ab = t.tensor(&a, &b);
    if cat.hom_bound(&ab, &c) > budget.max_endomorphisms {
        return Ok(TensorVerdict::Undecided {
            reason: format!("hom({ab:?}, {c:?}) exceeds the enumeration budget"),
        });
    }
    let homs = cat.hom(&ab, &c);
    match homs.iter().position(mediates) {
        Some(k) => Ok(verdict(homs[k].clone(), false)),
        None => Ok(TensorVerdict::NotIndependent {
            searched: homs.len() as u64,
        }),
    }
}

/// Extension table for a `Hom`-injective object `Q` over the listed domains.
#[derive(Debug, Clone)]
pub struct InjectivityCertificate<C: FiniteCategory> {
    pub q: C::Object,
    pub domains: Vec<C::Object>,
    table: HashMap<(C::Morphism, C::Morphism), C::Morphism>,
}

impl<C: FiniteCategory> InjectivityCertificate<C> {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `j` with `m ; j = a`.
    pub fn lookup(&self, m: &C::Morphism, a: &C::Morphism) -> Option<&C::Morphism> {
        self.table.get(&(m.clone(), a.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&C::Morphism, &C::Morphism, &C::Morphism)> {
        self.table.iter().map(|((m, a), j)| (m, a, j))
    }

    /// Every entry closes its triangle.
    pub fn verify(&self, cat: &C) -> bool {
        self.entries()
            .all(|(m, a, j)| cat.compose_unchecked(m, j) == *a)
    }
}

/// A `Hom`-mono `m: A -> Q` and a `Mor`-arrow `a: A -> Q` with no `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityFailure<M> {
    pub m: M,
    pub a: M,
}

/// Enumerates every `Hom`-mono `m: A -> Q` and `Mor`-arrow `a: A -> Q` for `A`
/// in `domains` and finds `j: Q -> Q` with `m ; j = a`, first through the
/// instance's constructive extension and otherwise by search of `End(Q)`.
pub fn certify_hom_injective<C: FiniteCategory>(
    cat: &C,
    q: &C::Object,
    domains: &[C::Object],
    budget: &Budget,
) -> Result<Result<InjectivityCertificate<C>, InjectivityFailure<C::Morphism>>, TensorError> {
    let mut end_q: Option<Vec<C::Morphism>> = None;
    let mut table = HashMap::new();
    for a_obj in domains {
        if cat.hom_bound(a_obj, q) > budget.max_endomorphisms {
            return Err(KernelError::Unsupported(format!("hom({a_obj:?}, {q:?}) too large")).into());
        }
        let arrows = cat.hom(a_obj, q);
        for m in arrows.iter().filter(|m| cat.is_hom(m) && is_monomorphism(cat, m)) {
            for a in &arrows {
                let constructed = cat
                    .extend_along(m, a)
                    .filter(|j| cat.compose_unchecked(m, j) == *a);
                let j = match constructed {
                    Some(j) => Some(j),
                    None => {
                        let end = end_q.get_or_insert_with(|| cat.hom(q, q));
                        end.iter().find(|j| cat.compose_unchecked(m, j) == *a).cloned()
                    }
                };
                match j {
                    Some(j) => {
                        table.insert((m.clone(), a.clone()), j);
                    }
                    None => {
                        return Ok(Err(InjectivityFailure {
                            m: m.clone(),
                            a: a.clone(),
                        }))
                    }
                }
            }
        }
    }
    Ok(Ok(InjectivityCertificate {
        q: q.clone(),
        domains: domains.to_vec(),
        table,
    }))
}

/// The arrows of the joint-extension construction.
#[derive(Debug, Clone, Serialize)]
pub struct JointExtension<M> {
    /// Mediator for `(f_A, f_B)`.
    pub u: M,
    /// Mediator used on the transported side.
    pub v: M,
    /// `alpha_A ⊗ alpha_B`.
    pub h: M,
    /// `u ; j = h ; v`.
    pub j: M,
}

/// Builds `j: Q -> Q` with `f_A ; j = alpha_A ; f_A` and `f_B ; j = alpha_B ; f_B`
/// from tensor independence, regularity and an injectivity certificate.
pub fn joint_extension_via_injectivity<T: TensorStructure>(
    t: &T,
    f_a: &Mor<T>,
    f_b: &Mor<T>,
    alpha_a: &Mor<T>,
    alpha_b: &Mor<T>,
    cert: &InjectivityCertificate<T::Cat>,
    budget: &Budget,
) -> Result<JointExtension<Mor<T>>, TensorError> {
    let cat = t.category();
    let u = decide_tensor_independence(t, f_a, f_b, budget)?
        .mediator()
        .cloned()
        .ok_or(TensorError::NotTensorIndependent)?;
    let v = u.clone();
    let h = t
        .tensor_morphisms(alpha_a, alpha_b)
        .ok_or_else(|| TensorError::Undefined(format!("{} ⊗ {}", cat.describe(alpha_a), cat.describe(alpha_b))))?;
    let hv = compose(cat, &h, &v)?;
    if !cert.domains.contains(&cat.dom(&u)) {
        return Err(TensorError::UncoveredDomain(format!("{:?}", cat.dom(&u))));
    }
    let j = cert
        .lookup(&u, &hv)
        .cloned()
        .ok_or_else(|| TensorError::CertificateMiss {
            m: cat.describe(&u),
            a: cat.describe(&hv),
        })?;
    if compose(cat, f_a, &j)? != compose(cat, alpha_a, f_a)? {
        return Err(TensorError::SquareFails("A"));
    }
    if compose(cat, f_b, &j)? != compose(cat, alpha_b, f_b)? {
        return Err(TensorError::SquareFails("B"));
    }
    Ok(JointExtension { u, v, h, j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finvect::Subspace;
    use crate::kernel::{decide_mor_independence, Cospan};

    fn sets() -> Vec<FinSet> {
        (0..=2).map(FinSet::range).collect()
    }

    #[test]
    fn disjoint_union_is_regular() {
        let t = DisjointUnion::default();
        let r = check_regularity(&t, &sets(), &Budget::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.exhaustive);
    }

    #[test]
    fn direct_sum_is_regular() {
        let t = DirectSum {
            cat: FinVectCategory::new(2, 0..=2),
        };
        let objs: Vec<FpSpace> = (0..=2).map(|d| t.cat.space(d)).collect();
        let r = check_regularity(&t, &objs, &Budget::default()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn plain_union_reports_undefined_bifunctor() {
        let t = PlainUnion::default();
        let objs = vec![FinSet::new([1, 2]).unwrap(), FinSet::new([2, 3]).unwrap()];
        let r = check_regularity(&t, &objs, &Budget::default()).unwrap();
        assert!(r.injections_monic);
        assert!(!r.bifunctor_defined && !r.passed());
        assert!(!r.counterexamples.is_empty());
    }

    #[test]
    fn plain_union_injections_of_overlapping_sets_are_not_independent() {
        let t = PlainUnion::default();
        let (a, b) = (FinSet::new([1, 2]).unwrap(), FinSet::new([2, 3]).unwrap());
        let (ia, ib) = t.injections(&a, &b);
        let span = Cospan::new(&t.cat, ia, ib).unwrap();
        let v = decide_mor_independence(&t.cat, &span, &Budget::default());
        assert_eq!(v.independent(), Some(false));
    }

    #[test]
    fn canonical_injections_are_independent() {
        let t = DisjointUnion::default();
        for a in sets() {
            for b in sets() {
                let (ia, ib) = t.injections(&a, &b);
                let span = Cospan::new(&t.cat, ia, ib).unwrap();
                let v = decide_mor_independence(&t.cat, &span, &Budget::default());
                assert_eq!(v.independent(), Some(true));
                // m_A ⊗ m_B is a witness for every pair
                for w in v.witness().unwrap() {
                    let h = t.tensor_morphisms(&w.alpha_a, &w.alpha_b).unwrap();
                    assert!(crate::kernel::extends(&t.cat, &span, &w.alpha_a, &w.alpha_b, &h));
                }
            }
        }
    }

    #[test]
    fn tensor_independence_examples() {
        let t = DisjointUnion::default();
        let (a, b) = (FinSet::range(1), FinSet::range(2));
        let (ia, ib) = t.injections(&a, &b);
        let v = decide_tensor_independence(&t, &ia, &ib, &Budget::default()).unwrap();
        assert_eq!(v.mediator(), Some(&t.cat.identity(&t.tensor(&a, &b))));

        // overlapping inclusions into the union: the merge map mediates but is not monic
        let (a, b, u) = (
            FinSet::new([1, 2]).unwrap(),
            FinSet::new([2, 3]).unwrap(),
            FinSet::new([1, 2, 3]).unwrap(),
        );
        let fa = FinSetMorphism::inclusion(&a, &u).unwrap();
        let fb = FinSetMorphism::inclusion(&b, &u).unwrap();
        match decide_tensor_independence(&t, &fa, &fb, &Budget::default()).unwrap() {
            TensorVerdict::Independent { h, h_monic, .. } => {
                assert_eq!(h.table(), &[0, 1, 1, 2]);
                assert!(!h_monic);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn search_agrees_with_copair() {
        // a structure without the copair shortcut
        struct NoShortcut(DirectSum);
        impl TensorStructure for NoShortcut {
            type Cat = FinVectCategory;
            fn category(&self) -> &FinVectCategory {
                &self.0.cat
            }
            fn tensor(&self, a: &FpSpace, b: &FpSpace) -> FpSpace {
                self.0.tensor(a, b)
            }
            fn tensor_morphisms(&self, x: &LinearMap, y: &LinearMap) -> Option<LinearMap> {
                self.0.tensor_morphisms(x, y)
            }
            fn unit(&self) -> FpSpace {
                self.0.unit()
            }
            fn injections(&self, a: &FpSpace, b: &FpSpace) -> (LinearMap, LinearMap) {
                self.0.injections(a, b)
            }
        }
        let cat = FinVectCategory::new(2, 0..=2);
        let c = cat.space(2);
        let fa = Subspace::new(c, &[vec![1, 0]]).unwrap().inclusion();
        let fb = Subspace::new(c, &[vec![1, 1]]).unwrap().inclusion();
        let with = decide_tensor_independence(&DirectSum { cat: cat.clone() }, &fa, &fb, &Budget::default()).unwrap();
        let without = decide_tensor_independence(&NoShortcut(DirectSum { cat }), &fa, &fb, &Budget::default()).unwrap();
        assert_eq!(with.mediator(), without.mediator());
    }

    #[test]
    fn injectivity_certificates() {
        let cat = FinSetCategory::with_probe_sizes(0..=2);
        let q = FinSet::range(3);
        let cert = certify_hom_injective(&cat, &q, &sets(), &Budget::default()).unwrap().unwrap();
        assert!(cert.verify(&cat));
        // monos 0->3: 1, 1->3: 3, 2->3: 6; arrows 1, 3, 9
        assert_eq!(cert.len(), 1 + 3 * 3 + 6 * 9);

        let vcat = FinVectCategory::new(2, 0..=2);
        let vq = vcat.space(2);
        let dom: Vec<FpSpace> = (0..=2).map(|d| vcat.space(d)).collect();
        let vcert = certify_hom_injective(&vcat, &vq, &dom, &Budget::default()).unwrap().unwrap();
        assert!(vcert.verify(&vcat));

        // nothing maps monically from a nonempty set into the empty set
        let empty = FinSet::range(0);
        let ecert = certify_hom_injective(&cat, &empty, &[FinSet::range(2)], &Budget::default())
            .unwrap()
            .unwrap();
        assert!(ecert.is_empty());
    }

    #[test]
    fn joint_extension_on_the_direct_sum_is_the_block_map() {
        let cat = FinVectCategory::new(2, 0..=2);
        let t = DirectSum { cat: cat.clone() };
        let (a, b) = (cat.space(1), cat.space(1));
        let (fa, fb) = t.injections(&a, &b);
        let q = t.tensor(&a, &b);
        let cert = certify_hom_injective(&cat, &q, &[q], &Budget::default()).unwrap().unwrap();
        for alpha_a in cat.hom(&a, &a) {
            for alpha_b in cat.hom(&b, &b) {
                let ext = joint_extension_via_injectivity(&t, &fa, &fb, &alpha_a, &alpha_b, &cert, &Budget::default()).unwrap();
                assert_eq!(ext.j, t.tensor_morphisms(&alpha_a, &alpha_b).unwrap());
                if alpha_a == cat.identity(&a) && alpha_b == cat.identity(&b) {
                    assert_eq!(ext.j, cat.identity(&q));
                }
            }
        }
    }

    #[test]
    fn joint_extension_in_a_larger_set_fixes_the_rest() {
        let cat = FinSetCategory::with_probe_sizes(0..=2);
        let t = DisjointUnion { cat: cat.clone() };
        let q = FinSet::new([1, 2, 3, 4]).unwrap();
        let (a, b) = (FinSet::new([1]).unwrap(), FinSet::new([3]).unwrap());
        let fa = FinSetMorphism::inclusion(&a, &q).unwrap();
        let fb = FinSetMorphism::inclusion(&b, &q).unwrap();
        let ab = t.tensor(&a, &b);
        let cert = certify_hom_injective(&cat, &q, &[ab], &Budget::default()).unwrap().unwrap();
        let id_a = cat.identity(&a);
        let id_b = cat.identity(&b);
        let ext = joint_extension_via_injectivity(&t, &fa, &fb, &id_a, &id_b, &cert, &Budget::default()).unwrap();
        assert_eq!(ext.j, cat.identity(&q));
    }

    #[test]
    fn missing_mediator_is_reported() {
        let t = DisjointUnion::default();
        let (a, b) = (FinSet::range(1), FinSet::range(1));
        // f_A lands in a set f_B cannot reach: codomains differ
        let fa = FinSetMorphism::new(&a, &FinSet::range(2), vec![0]).unwrap();
        let fb = FinSetMorphism::new(&b, &FinSet::range(3), vec![0]).unwrap();
        assert!(decide_tensor_independence(&t, &fa, &fb, &Budget::default()).is_err());
    }
}
