use std::collections::HashMap;

use serde::Serialize;

use super::decide::{find_extension, WitnessEntry};
use super::{
    decide_mor_independence, is_monomorphism, Budget, Cospan, FiniteCategory,
    IndependenceVerdict, KernelError,
};

/// Coproduct injections `i1: X1 -> S`, `i2: X2 -> S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoproductData<M> {
    pub i1: M,
    pub i2: M,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoproductAudit<M> {
    pub verdict: IndependenceVerdict<M>,
    /// `[m1 i1, m2 i2]` for every endomorphism pair `(m1, m2)`.
    pub copairs: Vec<WitnessEntry<M>>,
    pub copairs_sound: bool,
    pub i1_monic: bool,
    pub i2_monic: bool,
}

impl<M: Clone + Eq> CoproductAudit<M> {
    pub fn independent(&self) -> bool {
        self.verdict.independent() == Some(true)
    }
}

/// Checks the universal property against every registered object and the sum
/// itself: each `(m1, m2)` into `Y` has exactly one mediating `S -> Y`.
pub fn verify_coproduct<C: FiniteCategory>(
    cat: &C,
    cop: &CoproductData<C::Morphism>,
) -> Result<(), KernelError> {
    let sum = cat.cod(&cop.i1);
    if cat.cod(&cop.i2) != sum {
        return Err(KernelError::InvalidCoproduct(
            "injections have different codomains".into(),
        ));
    }
    let (x1, x2) = (cat.dom(&cop.i1), cat.dom(&cop.i2));
    let mut probes = cat.objects();
    if !probes.contains(&sum) {
        probes.push(sum.clone());
    }
    for y in probes {
        let mut mediators: HashMap<(C::Morphism, C::Morphism), usize> = HashMap::new();
        for m in cat.hom(&sum, &y) {
            let key = (
                cat.compose_unchecked(&cop.i1, &m),
                cat.compose_unchecked(&cop.i2, &m),
            );
            *mediators.entry(key).or_default() += 1;
        }
        let legs_2 = cat.hom(&x2, &y);
        for m1 in cat.hom(&x1, &y) {
            for m2 in &legs_2 {
                let n = mediators.get(&(m1.clone(), m2.clone())).copied().unwrap_or(0);
                if n != 1 {
                    return Err(KernelError::InvalidCoproduct(format!(
                        "pair into {y:?} has {n} mediating morphisms"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Verifies the coproduct and decides independence of its injections in the
/// same category.
pub fn audit_coproduct_independence<C: FiniteCategory>(
    cat: &C,
    cop: &CoproductData<C::Morphism>,
    budget: &Budget,
) -> Result<CoproductAudit<C::Morphism>, KernelError> {
    audit_coproduct_in(cat, cat, cop, budget)
}

/// As [`audit_coproduct_independence`], with the universal property checked in
/// `universal` and independence decided in `ambient`. The two categories share
/// objects and morphisms; this covers settings where the coproduct lives in a
/// wider morphism class than the one independence is asked about.
pub fn audit_coproduct_in<C: FiniteCategory>(
    universal: &C,
    ambient: &C,
    cop: &CoproductData<C::Morphism>,
    budget: &Budget,
) -> Result<CoproductAudit<C::Morphism>, KernelError> {
    verify_coproduct(universal, cop)?;
    let span = Cospan::new(ambient, cop.i1.clone(), cop.i2.clone())?;
    let verdict = decide_mor_independence(ambient, &span, budget);

    let sum = universal.cod(&cop.i1);
    let (x1, x2) = (universal.dom(&cop.i1), universal.dom(&cop.i2));
    let end_s = universal.hom(&sum, &sum);
    let ambient_end_s = ambient.hom(&sum, &sum);
    let end_2 = ambient.hom(&x2, &x2);
    let mut copairs = Vec::new();
    let mut sound = true;
    for m1 in ambient.hom(&x1, &x1) {
        for m2 in &end_2 {
            match find_extension(universal, &span, &end_s, &m1, m2).0 {
                Some(m) => {
                    sound &= ambient_end_s.contains(&m);
                    copairs.push(WitnessEntry {
                        alpha_a: m1.clone(),
                        alpha_b: m2.clone(),
                        alpha: m,
                    });
                }
                None => sound = false,
            }
        }
    }
    Ok(CoproductAudit {
        verdict,
        copairs,
        copairs_sound: sound,
        i1_monic: is_monomorphism(ambient, &cop.i1),
        i2_monic: is_monomorphism(ambient, &cop.i2),
    })
}
