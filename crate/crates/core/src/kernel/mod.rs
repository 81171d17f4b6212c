//! Finite categories as enumerable data, and the generic decision procedures
//! for independence of subobjects.
//!
//! Composition is written in diagrammatic order throughout: `compose(f, g)`
//! is "`f` then `g`", so for `f: A -> B` and `g: B -> C` the result is
//! `A -> C`. Every commuting square in this crate is read that way, e.g. the
//! extension square for `f_a: A -> X` is `f_a ; alpha == alpha_a ; f_a`.

mod compat;
mod coproduct;
mod decide;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

pub use compat::{
    decide_compatibility, verify_pullback, CompatibilityMode, CompatibilityVerdict, PullbackData,
};
pub use coproduct::{audit_coproduct_independence, audit_coproduct_in, verify_coproduct, CoproductAudit, CoproductData};
#[cfg(test)]
pub(crate) use decide::extends;
pub use decide::{
    decide_mor_independence, decide_subobject_independence, decide_with_endomorphisms,
    find_extension, recheck_counterexample, Budget, Counterexample, Decision,
    IndependenceVerdict, SearchStats, WitnessEntry,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("domain mismatch: cod of the first morphism is {left}, dom of the second is {right}")]
    DomainMismatch { left: String, right: String },
    #[error("codomain mismatch: {left} vs {right}")]
    CodomainMismatch { left: String, right: String },
    #[error("morphism {0} is not in the distinguished subcategory")]
    NotHom(String),
    #[error("morphism {0} is not a monomorphism over the registered objects")]
    NotMono(String),
    #[error("invalid coproduct: {0}")]
    InvalidCoproduct(String),
    #[error("invalid pullback: {0}")]
    InvalidPullback(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// A category whose hom-sets can be listed.
///
/// `hom` enumerates the ambient class `Mor`; `is_hom` marks the distinguished
/// subcategory `Hom` (monomorphisms defining subobjects come from there).
/// Quantifiers over "all objects" (monomorphism tests, universal properties)
/// range over [`FiniteCategory::objects`], the registered probe objects.
pub trait FiniteCategory: Sync {
    type Object: Clone + Eq + Hash + Debug + Send + Sync;
    type Morphism: Clone + Eq + Hash + Debug + Send + Sync;

    /// Registered probe objects.
    fn objects(&self) -> Vec<Self::Object>;

    fn dom(&self, f: &Self::Morphism) -> Self::Object;

    fn cod(&self, f: &Self::Morphism) -> Self::Object;

    fn identity(&self, x: &Self::Object) -> Self::Morphism;

    /// `f` then `g`. Callers guarantee `cod(f) == dom(g)`; use [`compose`]
    /// for the checked version.
    fn compose_unchecked(&self, f: &Self::Morphism, g: &Self::Morphism) -> Self::Morphism;

    /// Upper bound on `|hom(x, y)|`, used for budget checks before enumerating.
    fn hom_bound(&self, x: &Self::Object, y: &Self::Object) -> u128;

    /// All `Mor`-morphisms `x -> y` in the instance's canonical order.
    fn hom(&self, x: &Self::Object, y: &Self::Object) -> Vec<Self::Morphism>;

    fn is_hom(&self, _f: &Self::Morphism) -> bool {
        true
    }

    /// Constructive extension along a `Hom`-monomorphism: some `j: cod(m) -> cod(m)`
    /// with `m ; j == a`, if the instance knows how to build one directly.
    fn extend_along(&self, _m: &Self::Morphism, _a: &Self::Morphism) -> Option<Self::Morphism> {
        None
    }

    /// A pullback of the cospan, when the instance can construct one.
    fn pullback(
        &self,
        _f_a: &Self::Morphism,
        _f_b: &Self::Morphism,
    ) -> Option<PullbackData<Self::Morphism>> {
        None
    }

    /// Short human-readable rendering used in error messages and reports.
    fn describe(&self, f: &Self::Morphism) -> String {
        format!("{f:?}")
    }
}

/// Checked composition, `f` then `g`.
pub fn compose<C: FiniteCategory>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
) -> Result<C::Morphism, KernelError> {
    let left = cat.cod(f);
    let right = cat.dom(g);
    if left != right {
        return Err(KernelError::DomainMismatch {
            left: format!("{left:?}"),
            right: format!("{right:?}"),
        });
    }
    Ok(cat.compose_unchecked(f, g))
}

/// Left-cancellability over the registered objects: for every probe `c` and
/// `g1, g2: c -> dom(f)`, `g1 ; f == g2 ; f` implies `g1 == g2`.
pub fn is_monomorphism<C: FiniteCategory>(cat: &C, f: &C::Morphism) -> bool {
    use std::collections::HashSet;
    let a = cat.dom(f);
    cat.objects().iter().all(|c| {
        let mut seen = HashSet::new();
        cat.hom(c, &a)
            .into_iter()
            .all(|g| seen.insert(cat.compose_unchecked(&g, f)))
    })
}

/// Finds the inverse of `h` in `hom(cod h, dom h)`, if `h` is an isomorphism.
pub fn inverse<C: FiniteCategory>(cat: &C, h: &C::Morphism) -> Option<C::Morphism> {
    let (a, b) = (cat.dom(h), cat.cod(h));
    let (id_a, id_b) = (cat.identity(&a), cat.identity(&b));
    cat.hom(&b, &a).into_iter().find(|k| {
        cat.compose_unchecked(h, k) == id_a && cat.compose_unchecked(k, h) == id_b
    })
}

/// Two morphisms into a common object; the configuration every independence
/// question is asked about.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cospan<M> {
    pub f_a: M,
    pub f_b: M,
}

impl<M: Clone> Cospan<M> {
    pub fn new<C>(cat: &C, f_a: M, f_b: M) -> Result<Self, KernelError>
    where
        C: FiniteCategory<Morphism = M>,
    {
        let (x, y) = (cat.cod(&f_a), cat.cod(&f_b));
        if x != y {
            return Err(KernelError::CodomainMismatch {
                left: format!("{x:?}"),
                right: format!("{y:?}"),
            });
        }
        Ok(Cospan { f_a, f_b })
    }
}

/// A cospan of `Hom`-monomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonoPair<M>(Cospan<M>);

impl<M: Clone> MonoPair<M> {
    pub fn new<C>(cat: &C, f_a: M, f_b: M) -> Result<Self, KernelError>
    where
        C: FiniteCategory<Morphism = M>,
    {
        let span = Cospan::new(cat, f_a, f_b)?;
        for f in [&span.f_a, &span.f_b] {
            if !cat.is_hom(f) {
                return Err(KernelError::NotHom(cat.describe(f)));
            }
            if !is_monomorphism(cat, f) {
                return Err(KernelError::NotMono(cat.describe(f)));
            }
        }
        Ok(MonoPair(span))
    }

    pub fn cospan(&self) -> &Cospan<M> {
        &self.0
    }

    pub fn f_a(&self) -> &M {
        &self.0.f_a
    }

    pub fn f_b(&self) -> &M {
        &self.0.f_b
    }
}

impl<M> std::ops::Deref for MonoPair<M> {
    type Target = Cospan<M>;
    fn deref(&self) -> &Cospan<M> {
        &self.0
    }
}

/// A `Hom`-subobject, stored through one representative monomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubobjectClass<M> {
    pub representative: M,
}

impl<M: Clone + Eq> SubobjectClass<M> {
    pub fn new<C>(cat: &C, representative: M) -> Result<Self, KernelError>
    where
        C: FiniteCategory<Morphism = M>,
    {
        if !cat.is_hom(&representative) {
            return Err(KernelError::NotHom(cat.describe(&representative)));
        }
        if !is_monomorphism(cat, &representative) {
            return Err(KernelError::NotMono(cat.describe(&representative)));
        }
        Ok(SubobjectClass { representative })
    }

    /// The `Hom`-isomorphism witnessing that `g` represents this class.
    pub fn member_iso<C>(&self, cat: &C, g: &M) -> Result<Option<M>, KernelError>
    where
        C: FiniteCategory<Morphism = M>,
    {
        subobject_equal(cat, g, &self.representative)
    }

    /// Re-represents the class through a `Hom`-isomorphism `i: D -> dom(rep)`.
    pub fn rerepresent<C>(&self, cat: &C, iso: &M) -> Result<Self, KernelError>
    where
        C: FiniteCategory<Morphism = M>,
    {
        let g = compose(cat, iso, &self.representative)?;
        Ok(SubobjectClass { representative: g })
    }
}

/// Returns a `Hom`-isomorphism `h: dom f -> dom g` with `h ; g == f` and
/// `h^-1 ; f == g`, when `f` and `g` represent the same subobject.
pub fn subobject_equal<C: FiniteCategory>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
) -> Result<Option<C::Morphism>, KernelError> {
    let (x, y) = (cat.cod(f), cat.cod(g));
    if x != y {
        return Err(KernelError::CodomainMismatch {
            left: format!("{x:?}"),
            right: format!("{y:?}"),
        });
    }
    let (a, b) = (cat.dom(f), cat.dom(g));
    for h in cat.hom(&a, &b) {
        if !cat.is_hom(&h) || cat.compose_unchecked(&h, g) != *f {
            continue;
        }
        if let Some(h_inv) = inverse(cat, &h) {
            if cat.is_hom(&h_inv) && cat.compose_unchecked(&h_inv, f) == *g {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}
