use std::collections::HashMap;

use serde::Serialize;

use super::{Budget, Cospan, FiniteCategory, KernelError};

/// Projections out of a pullback apex `P`: `p_a: P -> A`, `p_b: P -> B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackData<M> {
    pub p_a: M,
    pub p_b: M,
}

/// How the "intersection" side of the compatibility square is supplied.
#[derive(Debug, Clone)]
pub enum CompatibilityMode<M> {
    /// A caller-supplied pullback; verified before use.
    Pullback(PullbackData<M>),
    /// The pullback constructed by the instance category.
    Constructed,
    /// No pullback: quantify over every registered `Y` with a commuting pair
    /// of arrows `Y -> A`, `Y -> B`.
    ProbeObjects,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CompatibilityVerdict<M> {
    Compatible {
        pairs_checked: u64,
    },
    Incompatible {
        alpha_a: M,
        alpha_b: M,
        /// The cone legs `(y_a, y_b)` on which the two composites differ.
        leg_a: M,
        leg_b: M,
    },
}

impl<M> CompatibilityVerdict<M> {
    pub fn is_compatible(&self) -> bool {
        matches!(self, CompatibilityVerdict::Compatible { .. })
    }
}

/// Checks that `pb` closes the square over `span` and is universal among
/// cones from the registered objects.
pub fn verify_pullback<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    pb: &PullbackData<C::Morphism>,
) -> Result<(), KernelError> {
    let apex = cat.dom(&pb.p_a);
    if cat.dom(&pb.p_b) != apex
        || cat.cod(&pb.p_a) != cat.dom(&span.f_a)
        || cat.cod(&pb.p_b) != cat.dom(&span.f_b)
    {
        return Err(KernelError::InvalidPullback("projection shapes".into()));
    }
    if cat.compose_unchecked(&pb.p_a, &span.f_a) != cat.compose_unchecked(&pb.p_b, &span.f_b) {
        return Err(KernelError::InvalidPullback("square does not commute".into()));
    }
    let (a, b) = (cat.dom(&span.f_a), cat.dom(&span.f_b));
    for y in cat.objects() {
        let mut mediators: HashMap<(C::Morphism, C::Morphism), usize> = HashMap::new();
        for u in cat.hom(&y, &apex) {
            let key = (
                cat.compose_unchecked(&u, &pb.p_a),
                cat.compose_unchecked(&u, &pb.p_b),
            );
            *mediators.entry(key).or_default() += 1;
        }
        let legs_b = cat.hom(&y, &b);
        for q_a in cat.hom(&y, &a) {
            let via_a = cat.compose_unchecked(&q_a, &span.f_a);
            for q_b in &legs_b {
                if cat.compose_unchecked(q_b, &span.f_b) != via_a {
                    continue;
                }
                let n = mediators.get(&(q_a.clone(), q_b.clone())).copied().unwrap_or(0);
                if n != 1 {
                    return Err(KernelError::InvalidPullback(format!(
                        "cone from {y:?} has {n} mediating morphisms"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn endos<C: FiniteCategory>(
    cat: &C,
    x: &C::Object,
    budget: &Budget,
) -> Result<Vec<C::Morphism>, KernelError> {
    if cat.hom_bound(x, x) > budget.max_endomorphisms {
        return Err(KernelError::Unsupported(format!(
            "End({x:?}) exceeds the endomorphism budget"
        )));
    }
    Ok(cat.hom(x, x))
}

/// Decides `Mor`-compatibility: for all `(alpha_a, alpha_b)`,
/// `p_a ; alpha_a ; f_a == p_b ; alpha_b ; f_b`. The first violating pair in
/// canonical `End(A) x End(B)` order is returned.
pub fn decide_compatibility<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    mode: CompatibilityMode<C::Morphism>,
    budget: &Budget,
) -> Result<CompatibilityVerdict<C::Morphism>, KernelError> {
    let (a, b) = (cat.dom(&span.f_a), cat.dom(&span.f_b));
    let cones: Vec<(C::Morphism, C::Morphism)> = match mode {
        CompatibilityMode::Pullback(pb) => {
            verify_pullback(cat, span, &pb)?;
            vec![(pb.p_a, pb.p_b)]
        }
        CompatibilityMode::Constructed => {
            let pb = cat.pullback(&span.f_a, &span.f_b).ok_or_else(|| {
                KernelError::Unsupported("no pullback constructible in this category".into())
            })?;
            verify_pullback(cat, span, &pb)?;
            vec![(pb.p_a, pb.p_b)]
        }
        CompatibilityMode::ProbeObjects => {
            let mut cones = Vec::new();
            for y in cat.objects() {
                let legs_b = cat.hom(&y, &b);
                for y_a in cat.hom(&y, &a) {
                    let via_a = cat.compose_unchecked(&y_a, &span.f_a);
                    for y_b in &legs_b {
                        if cat.compose_unchecked(y_b, &span.f_b) == via_a {
                            cones.push((y_a.clone(), y_b.clone()));
                        }
                    }
                }
            }
            cones
        }
    };
    let end_a = endos(cat, &a, budget)?;
    let end_b = endos(cat, &b, budget)?;
    let mut checked = 0u64;
    for alpha_a in &end_a {
        let left = cat.compose_unchecked(alpha_a, &span.f_a);
        for alpha_b in &end_b {
            let right = cat.compose_unchecked(alpha_b, &span.f_b);
            checked += 1;
            for (leg_a, leg_b) in &cones {
                if cat.compose_unchecked(leg_a, &left) != cat.compose_unchecked(leg_b, &right) {
                    return Ok(CompatibilityVerdict::Incompatible {
                        alpha_a: alpha_a.clone(),
                        alpha_b: alpha_b.clone(),
                        leg_a: leg_a.clone(),
                        leg_b: leg_b.clone(),
                    });
                }
            }
        }
    }
    Ok(CompatibilityVerdict::Compatible {
        pairs_checked: checked,
    })
}
