use copossible_core::finset::{self, disjointness_oracle, FinSet, FinSetCategory, FinSetMorphism};
use copossible_core::finvect::{intersection_oracle, joint_extension_by_basis, FinVectCategory, Subspace};
use copossible_core::kernel::{
    audit_coproduct_independence, decide_compatibility, recheck_counterexample, CompatibilityMode,
};
use copossible_core::latalg::boolean::{decide_subalgebras, Subalgebra};
use copossible_core::{
    compose, decide_mor_independence, decide_subobject_independence, Budget, Cospan, FiniteCategory,
    SubobjectClass,
};
use proptest::prelude::*;

fn sub(ambient: &FinSet, mask: u32) -> FinSet {
    FinSet::new(ambient.labels().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l))
        .unwrap()
}

/// Ambient label set of size <= 4 drawn from 0..8, with two subset masks.
fn arb_pair() -> impl Strategy<Value = (FinSet, FinSetMorphism, FinSetMorphism)> {
    proptest::sample::subsequence((0u32..8).collect::<Vec<_>>(), 0..=4).prop_flat_map(|labels| {
        let n = labels.len() as u32;
        let ambient = FinSet::new(labels).unwrap();
        (Just(ambient), 0..1u32 << n, 0..1u32 << n).prop_map(|(c, a, b)| {
            let fa = FinSetMorphism::inclusion(&sub(&c, a), &c).unwrap();
            let fb = FinSetMorphism::inclusion(&sub(&c, b), &c).unwrap();
            (c, fa, fb)
        })
    })
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finset_search_matches_oracle((_c, fa, fb) in arb_pair()) {
        let cat = FinSetCategory::default();
        let span = Cospan::new(&cat, fa.clone(), fb.clone()).unwrap();
        let v = decide_mor_independence(&cat, &span, &Budget::default());
        prop_assert_eq!(v.independent(), Some(disjointness_oracle(&fa, &fb).unwrap()));
        prop_assert!(v.witness_sound(&cat, &span));
        if let Some(ce) = v.counterexample() {
            prop_assert!(recheck_counterexample(&cat, &span, ce));
        }
    }

    #[test]
    fn verdicts_do_not_depend_on_the_thread_count((_c, fa, fb) in arb_pair()) {
        let cat = FinSetCategory::default();
        let span = Cospan::new(&cat, fa, fb).unwrap();
        let one = pool(1).install(|| decide_mor_independence(&cat, &span, &Budget::default()));
        let four = pool(4).install(|| decide_mor_independence(&cat, &span, &Budget::default()));
        prop_assert_eq!(one, four);
    }

    #[test]
    fn independent_pairs_are_compatible((_c, fa, fb) in arb_pair()) {
        let cat = FinSetCategory::default();
        let span = Cospan::new(&cat, fa, fb).unwrap();
        if decide_mor_independence(&cat, &span, &Budget::default()).independent() == Some(true) {
            let v = decide_compatibility(&cat, &span, CompatibilityMode::Constructed, &Budget::default()).unwrap();
            prop_assert!(v.is_compatible());
        }
    }

    #[test]
    fn rerepresentation_keeps_the_verdict((_c, fa, fb) in arb_pair(), pick_a in any::<usize>(), pick_b in any::<usize>()) {
        let cat = FinSetCategory::default();
        let budget = Budget::default();
        let (ca, cb) = (SubobjectClass::new(&cat, fa).unwrap(), SubobjectClass::new(&cat, fb).unwrap());
        let iso = |class: &SubobjectClass<FinSetMorphism>, pick: usize| {
            let d = cat.dom(&class.representative);
            let isos: Vec<_> = cat.hom(&d, &d).into_iter().filter(|h| h.is_injective()).collect();
            class.rerepresent(&cat, &isos[pick % isos.len()]).unwrap()
        };
        let (ra, rb) = (iso(&ca, pick_a), iso(&cb, pick_b));
        let before = decide_subobject_independence(&cat, &ca, &cb, &budget).unwrap();
        let after = decide_subobject_independence(&cat, &ra, &rb, &budget).unwrap();
        prop_assert_eq!(before.independent(), after.independent());
    }

    #[test]
    fn finset_coproducts_are_independent(i in 0u32..=3, j in 0u32..=3) {
        let (_, cop) = finset::coproduct(&FinSet::range(i), &FinSet::range(j));
        let audit = audit_coproduct_independence(&FinSetCategory::default(), &cop, &Budget::default()).unwrap();
        prop_assert!(audit.independent());
    }

    #[test]
    fn basis_extensions_restrict_correctly(ia in any::<usize>(), ib in any::<usize>(), ea in any::<usize>(), eb in any::<usize>()) {
        let cat = FinVectCategory::new(2, 0..=3);
        let subs = Subspace::all(cat.space(3));
        let (a, b) = (&subs[ia % subs.len()], &subs[ib % subs.len()]);
        let ends_a = cat.hom(&a.space(), &a.space());
        let ends_b = cat.hom(&b.space(), &b.space());
        let (alpha_a, alpha_b) = (&ends_a[ea % ends_a.len()], &ends_b[eb % ends_b.len()]);
        match joint_extension_by_basis(a, b, alpha_a, alpha_b) {
            Ok(gamma) => {
                prop_assert!(intersection_oracle(a, b).unwrap());
                let (fa, fb) = (a.inclusion(), b.inclusion());
                prop_assert_eq!(compose(&cat, &fa, &gamma).unwrap(), compose(&cat, alpha_a, &fa).unwrap());
                prop_assert_eq!(compose(&cat, &fb, &gamma).unwrap(), compose(&cat, alpha_b, &fb).unwrap());
            }
            Err(_) => prop_assert!(!intersection_oracle(a, b).unwrap()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boolean_verdicts_carry_sound_evidence(ia in any::<usize>(), ib in any::<usize>()) {
        let algebras = Subalgebra::all(4);
        let (a, b) = (&algebras[ia % algebras.len()], &algebras[ib % algebras.len()]);
        let v = decide_subalgebras(a, b, &Budget::default()).unwrap();
        prop_assert!(v.independent().is_some());
        let cat = copossible_core::latalg::boolean::BoolCategory::injective();
        let span = Cospan::new(&cat, a.inclusion(), b.inclusion()).unwrap();
        prop_assert!(v.witness_sound(&cat, &span));
        if let Some(ce) = v.counterexample() {
            prop_assert!(recheck_counterexample(&cat, &span, ce));
        }
    }
}

#[test]
fn counterexample_is_the_first_in_canonical_order() {
    let c = FinSet::range(3);
    let fa = FinSetMorphism::inclusion(&FinSet::new([0, 1]).unwrap(), &c).unwrap();
    let fb = FinSetMorphism::inclusion(&FinSet::new([1, 2]).unwrap(), &c).unwrap();
    let cat = FinSetCategory::default();
    let span = Cospan::new(&cat, fa, fb).unwrap();
    let v = decide_mor_independence(&cat, &span, &Budget::default());
    let ce = v.counterexample().expect("overlapping subsets");
    // every earlier pair extends
    let end_a = cat.hom(&cat.dom(&span.f_a), &cat.dom(&span.f_a));
    let end_b = cat.hom(&cat.dom(&span.f_b), &cat.dom(&span.f_b));
    let nb = end_b.len() as u64;
    let end_x = cat.hom(&c, &c);
    for k in 0..ce.pair_index {
        let (aa, ab) = (&end_a[(k / nb) as usize], &end_b[(k % nb) as usize]);
        let extends = end_x.iter().any(|g| {
            compose(&cat, &span.f_a, g).unwrap() == compose(&cat, aa, &span.f_a).unwrap()
                && compose(&cat, &span.f_b, g).unwrap() == compose(&cat, ab, &span.f_b).unwrap()
        });
        assert!(extends, "pair {k} precedes the counterexample but does not extend");
    }
}
