use rayon::prelude::*;
use serde::Serialize;

use super::{Cospan, FiniteCategory, KernelError, SubobjectClass};

/// Outer pairs are evaluated in fixed-size chunks; budgets are checked and
/// counterexamples reported at chunk granularity, so results do not depend on
/// the thread schedule.
const CHUNK: usize = 256;

/// Search limits. Exceeding any of them yields [`Decision::Undecided`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximum `|End(A)| * |End(B)|`.
    pub max_pairs: u128,
    /// Maximum size of any enumerated endomorphism set.
    pub max_endomorphisms: u128,
    /// Maximum number of candidate extensions tested in total.
    pub max_checks: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 1 << 22,
            max_endomorphisms: 1 << 20,
            max_checks: 1 << 34,
        }
    }
}

impl Budget {
    pub fn with_max_checks(max_checks: u128) -> Self {
        Budget {
            max_checks,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub end_a: u64,
    pub end_b: u64,
    pub end_x: u64,
    pub pairs_examined: u64,
    pub candidates_examined: u64,
}

/// One solved square: `alpha` extends both `alpha_a` and `alpha_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry<M> {
    pub alpha_a: M,
    pub alpha_b: M,
    pub alpha: M,
}

/// An endomorphism pair with no joint extension in `End(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample<M> {
    pub alpha_a: M,
    pub alpha_b: M,
    /// Position of the pair in the canonical `End(A) x End(B)` order.
    pub pair_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Decision<M> {
    Independent { witness: Vec<WitnessEntry<M>> },
    NotIndependent { counterexample: Counterexample<M> },
    Undecided { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceVerdict<M> {
    pub decision: Decision<M>,
    pub stats: SearchStats,
}

impl<M: Clone + Eq> IndependenceVerdict<M> {
    /// `Some(true)` / `Some(false)` when decided, `None` when undecided.
    pub fn independent(&self) -> Option<bool> {
        match self.decision {
            Decision::Independent { .. } => Some(true),
            Decision::NotIndependent { .. } => Some(false),
            Decision::Undecided { .. } => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample<M>> {
        match &self.decision {
            Decision::NotIndependent { counterexample } => Some(counterexample),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&[WitnessEntry<M>]> {
        match &self.decision {
            Decision::Independent { witness } => Some(witness),
            _ => None,
        }
    }

    /// Re-checks every stored witness square exactly.
    pub fn witness_sound<C>(&self, cat: &C, span: &Cospan<M>) -> bool
    where
        C: FiniteCategory<Morphism = M>,
    {
        self.witness().is_none_or(|entries| {
            entries
                .iter()
                .all(|w| extends(cat, span, &w.alpha_a, &w.alpha_b, &w.alpha))
        })
    }
}

/// `f_a ; alpha == alpha_a ; f_a` and `f_b ; alpha == alpha_b ; f_b`.
pub(crate) fn extends<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    alpha_a: &C::Morphism,
    alpha_b: &C::Morphism,
    alpha: &C::Morphism,
) -> bool {
    cat.compose_unchecked(&span.f_a, alpha) == cat.compose_unchecked(alpha_a, &span.f_a)
        && cat.compose_unchecked(&span.f_b, alpha) == cat.compose_unchecked(alpha_b, &span.f_b)
}

/// First `alpha` in `end_x` (canonical order) extending the pair, together
/// with the number of candidates tested.
pub fn find_extension<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    end_x: &[C::Morphism],
    alpha_a: &C::Morphism,
    alpha_b: &C::Morphism,
) -> (Option<C::Morphism>, u64) {
    let target_a = cat.compose_unchecked(alpha_a, &span.f_a);
    let target_b = cat.compose_unchecked(alpha_b, &span.f_b);
    let mut checks = 0;
    for alpha in end_x {
        checks += 1;
        if cat.compose_unchecked(&span.f_a, alpha) == target_a
            && cat.compose_unchecked(&span.f_b, alpha) == target_b
        {
            return (Some(alpha.clone()), checks);
        }
    }
    (None, checks)
}

fn endomorphisms<C: FiniteCategory>(
    cat: &C,
    x: &C::Object,
    budget: &Budget,
) -> Result<Vec<C::Morphism>, String> {
    let bound = cat.hom_bound(x, x);
    if bound > budget.max_endomorphisms {
        return Err(format!(
            "End({x:?}) has up to {bound} elements, budget allows {}",
            budget.max_endomorphisms
        ));
    }
    Ok(cat.hom(x, x))
}

fn undecided<M>(reason: String, stats: SearchStats) -> IndependenceVerdict<M> {
    IndependenceVerdict {
        decision: Decision::Undecided { reason },
        stats,
    }
}

/// Exhaustive decision of `Mor`-independence of the two legs of `span`:
/// every `(alpha_a, alpha_b)` in `End(A) x End(B)` must admit some `alpha` in
/// `End(X)` closing both squares.
pub fn decide_mor_independence<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    budget: &Budget,
) -> IndependenceVerdict<C::Morphism> {
    let (a, b) = (cat.dom(&span.f_a), cat.dom(&span.f_b));
    let end_a = match endomorphisms(cat, &a, budget) {
        Ok(e) => e,
        Err(reason) => return undecided(reason, SearchStats::default()),
    };
    let end_b = match endomorphisms(cat, &b, budget) {
        Ok(e) => e,
        Err(reason) => return undecided(reason, SearchStats::default()),
    };
    decide_with_endomorphisms(cat, span, &end_a, &end_b, budget)
}

/// As [`decide_mor_independence`], with the endomorphism pairs drawn from the
/// supplied lists instead of the full `End(A)` and `End(B)`.
pub fn decide_with_endomorphisms<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    end_a: &[C::Morphism],
    end_b: &[C::Morphism],
    budget: &Budget,
) -> IndependenceVerdict<C::Morphism> {
    let mut stats = SearchStats {
        end_a: end_a.len() as u64,
        end_b: end_b.len() as u64,
        ..SearchStats::default()
    };
    let pairs = end_a.len() as u128 * end_b.len() as u128;
    if pairs > budget.max_pairs {
        return undecided(
            format!("{pairs} endomorphism pairs, budget allows {}", budget.max_pairs),
            stats,
        );
    }
    let x = cat.cod(&span.f_a);
    let end_x = match endomorphisms(cat, &x, budget) {
        Ok(e) => e,
        Err(reason) => return undecided(reason, stats),
    };
    stats.end_x = end_x.len() as u64;

    let total = pairs as usize;
    let nb = end_b.len();
    let mut witness = Vec::with_capacity(total);
    let mut checks_so_far: u128 = 0;
    for start in (0..total).step_by(CHUNK) {
        let end = (start + CHUNK).min(total);
        let results: Vec<(Option<C::Morphism>, u64)> = (start..end)
            .into_par_iter()
            .map(|k| find_extension(cat, span, &end_x, &end_a[k / nb], &end_b[k % nb]))
            .collect();
        for (offset, (found, checks)) in results.iter().enumerate() {
            let k = start + offset;
            stats.pairs_examined += 1;
            stats.candidates_examined += checks;
            match found {
                Some(alpha) => witness.push(WitnessEntry {
                    alpha_a: end_a[k / nb].clone(),
                    alpha_b: end_b[k % nb].clone(),
                    alpha: alpha.clone(),
                }),
                None => {
                    return IndependenceVerdict {
                        decision: Decision::NotIndependent {
                            counterexample: Counterexample {
                                alpha_a: end_a[k / nb].clone(),
                                alpha_b: end_b[k % nb].clone(),
                                pair_index: k as u64,
                            },
                        },
                        stats,
                    };
                }
            }
        }
        checks_so_far += results.iter().map(|r| r.1 as u128).sum::<u128>();
        if checks_so_far > budget.max_checks && end < total {
            return undecided(
                format!("candidate budget of {} checks exhausted", budget.max_checks),
                stats,
            );
        }
    }
    IndependenceVerdict {
        decision: Decision::Independent { witness },
        stats,
    }
}

/// Re-runs the inner search on a reported counterexample; `true` when no
/// extension exists in the full `End(X)`.
pub fn recheck_counterexample<C: FiniteCategory>(
    cat: &C,
    span: &Cospan<C::Morphism>,
    counterexample: &Counterexample<C::Morphism>,
) -> bool {
    let x = cat.cod(&span.f_a);
    let end_x = cat.hom(&x, &x);
    find_extension(cat, span, &end_x, &counterexample.alpha_a, &counterexample.alpha_b)
        .0
        .is_none()
}

/// Decides independence of two subobjects on their stored representatives.
/// Any other pair of representatives yields the same decision.
pub fn decide_subobject_independence<C: FiniteCategory>(
    cat: &C,
    class_a: &SubobjectClass<C::Morphism>,
    class_b: &SubobjectClass<C::Morphism>,
    budget: &Budget,
) -> Result<IndependenceVerdict<C::Morphism>, KernelError> {
    let span = Cospan::new(
        cat,
        class_a.representative.clone(),
        class_b.representative.clone(),
    )?;
    Ok(decide_mor_independence(cat, &span, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinSet, FinSetCategory, FinSetMorphism};
    use crate::kernel::MonoPair;

    fn setup(a: &[u32], b: &[u32], x: &[u32]) -> (FinSetCategory, MonoPair<FinSetMorphism>) {
        let cat = FinSetCategory::with_probe_sizes(0..=2);
        let x = FinSet::new(x.iter().copied()).unwrap();
        let a = FinSet::new(a.iter().copied()).unwrap();
        let b = FinSet::new(b.iter().copied()).unwrap();
        let pair = MonoPair::new(
            &cat,
            FinSetMorphism::inclusion(&a, &x).unwrap(),
            FinSetMorphism::inclusion(&b, &x).unwrap(),
        )
        .unwrap();
        (cat, pair)
    }

    #[test]
    fn disjoint_subsets_are_independent() {
        let (cat, pair) = setup(&[1, 2], &[3], &[1, 2, 3]);
        let v = decide_mor_independence(&cat, &pair, &Budget::default());
        assert_eq!(v.independent(), Some(true));
        assert_eq!(v.stats.end_x, 27);
        assert_eq!(v.witness().unwrap().len(), 4);
        assert!(v.witness_sound(&cat, &pair));
    }

    #[test]
    fn overlapping_subsets_fail_at_swap() {
        let (cat, pair) = setup(&[1, 2], &[2, 3], &[1, 2, 3]);
        let v = decide_mor_independence(&cat, &pair, &Budget::default());
        let ce = v.counterexample().expect("not independent");
        assert!(recheck_counterexample(&cat, &pair, ce));
        // the swap of 1 and 2 paired with the identity has no extension
        let a = cat.dom(pair.f_a());
        let b = cat.dom(pair.f_b());
        let swap = FinSetMorphism::from_labels(&a, &a, &[(1, 2), (2, 1)]).unwrap();
        let x = cat.cod(pair.f_a());
        let end_x = cat.hom(&x, &x);
        let (found, _) = find_extension(&cat, &pair, &end_x, &swap, &cat.identity(&b));
        assert!(found.is_none());
    }

    #[test]
    fn trivial_endomorphism_monoids_extend_by_identity() {
        let (cat, pair) = setup(&[1], &[1], &[1, 2]);
        let v = decide_mor_independence(&cat, &pair, &Budget::default());
        assert_eq!(v.independent(), Some(true));
        let w = &v.witness().unwrap()[0];
        let id_x = cat.identity(&cat.cod(pair.f_a()));
        assert!(extends(&cat, &pair, &w.alpha_a, &w.alpha_b, &id_x));
    }

    #[test]
    fn exhausted_budget_is_undecided() {
        let (cat, pair) = setup(&[1, 2], &[3], &[1, 2, 3]);
        let tight = Budget {
            max_endomorphisms: 10,
            ..Budget::default()
        };
        let v = decide_mor_independence(&cat, &pair, &tight);
        assert_eq!(v.independent(), None);
    }

    #[test]
    fn same_class_twice_is_not_independent() {
        let (cat, pair) = setup(&[1, 2], &[1, 2], &[1, 2, 3]);
        let ca = SubobjectClass::new(&cat, pair.f_a().clone()).unwrap();
        let v = decide_subobject_independence(&cat, &ca, &ca, &Budget::default()).unwrap();
        assert_eq!(v.independent(), Some(false));
    }

    #[test]
    fn verdicts_do_not_depend_on_thread_count() {
        let (cat, pair) = setup(&[1, 2], &[2, 3], &[1, 2, 3, 4]);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| decide_mor_independence(&cat, &pair, &Budget::default()))
        };
        assert_eq!(run(1), run(4));
    }
}
