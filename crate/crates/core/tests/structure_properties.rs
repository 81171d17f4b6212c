use copossible_core::latalg::boolean::{boole_independent, generates, scan_subalgebra_pairs, Subalgebra};
use copossible_core::latalg::oml::{self, delta_weakening_violation, validate_oml, Oml};
use copossible_core::pregeom::{self, pregeom_independence_oracle, validate_pregeometry, Pregeometry};
use copossible_core::qft::{
    audit_site, chain_assignment, chain_site, check_covariance, check_einstein_causality, check_opind,
    two_factor_assignment, two_region_site, AuditStatus, OpindParams, CAUSALITY_TOL,
};
use copossible_core::opalg::random_unitary;
use copossible_core::Budget;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_structures_satisfy_their_axioms() {
    for (name, c) in pregeom::corpus() {
        assert_eq!(validate_pregeometry(c.len(), c.closure_table()).unwrap(), None, "{name}");
    }
    for (name, c) in oml::corpus() {
        let n = c.len();
        let leq: Vec<bool> = (0..n as u32).flat_map(|x| (0..n as u32).map(move |y| (x, y))).map(|(x, y)| c.leq(x, y)).collect();
        let comp: Vec<u32> = c.elements().map(|x| c.comp(x)).collect();
        assert_eq!(validate_oml(n, &leq, &comp), Ok(()), "{name}");
    }
}

#[test]
fn distributive_lattices_never_weaken_delta() {
    for k in 1..=4 {
        assert_eq!(delta_weakening_violation(&Oml::boolean(k)), None, "2^{k}");
    }
}

#[test]
fn free_pregeometries_reduce_to_disjointness() {
    for n in 0..=4 {
        let c = Pregeometry::free(n);
        for a in c.closed_sets() {
            for b in c.closed_sets() {
                // every subset is closed; the closure of the empty set is empty
                let predicted = a & b == 0 || (a == b && a.count_ones() == 1) || a == 0 || b == 0;
                assert_eq!(pregeom_independence_oracle(&c, a, b).unwrap(), predicted, "{a:#b} {b:#b}");
            }
        }
    }
}

#[test]
fn generated_boole_independent_pairs_are_mor_independent() {
    for n in 1..=4 {
        let subs = Subalgebra::all(n);
        let findings = scan_subalgebra_pairs(n, &Budget::default());
        for f in findings {
            let a = subs.iter().find(|s| s.blocks == f.a_blocks).unwrap();
            let b = subs.iter().find(|s| s.blocks == f.b_blocks).unwrap();
            if boole_independent(a, b).unwrap().is_none() && generates(a, b) {
                assert_eq!(f.mor_independent, Some(true), "2^{n}: {:?} {:?}", a.blocks, b.blocks);
            }
        }
    }
}

#[test]
fn sites_without_spacelike_pairs_pass_vacuously() {
    let site = chain_site();
    let f = chain_assignment(3, true).unwrap();
    assert_eq!(check_einstein_causality(&site, &f, CAUSALITY_TOL).unwrap().status, AuditStatus::Pass);
    assert_eq!(check_opind(&site, &f, &OpindParams::default()).unwrap().status, AuditStatus::Pass);
    assert_eq!(check_covariance(&site, &f).unwrap().status, AuditStatus::Pass);
    let twisted = chain_assignment(3, false).unwrap();
    assert_eq!(check_covariance(&site, &twisted).unwrap().status, AuditStatus::Fail);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugated_two_factor_sites_pass_every_audit(seed in any::<u64>()) {
        let u = random_unitary(4, &mut ChaCha8Rng::seed_from_u64(seed));
        let f = two_factor_assignment(Some(&u)).unwrap();
        let audit = audit_site(&two_region_site(), &f, Some((2, &[3, 4])), &OpindParams::default()).unwrap();
        prop_assert_eq!(audit.status(), AuditStatus::Pass);
        prop_assert!(audit.causality.residual <= CAUSALITY_TOL * 4.0);
    }
}
