use copossible_core::opalg::{
    canonical_injections, conjugated_tensor_witness, decode_matrix, encode_matrix, factorization_of,
    is_product_extension, random_unitary, search_joint_extension, tensor_operation, verify_extension, CpMap,
    FeasibilityParams, StarMono, VALIDATION_TOL, VERIFY_TOL,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensor_operation_extends_and_factorizes(seed in any::<u64>(), ka in 1usize..=4, kb in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CpMap::random_unital(2, ka, &mut rng);
        let b = CpMap::random_unital(2, kb, &mut rng);
        let gamma = tensor_operation(&a, &b);
        prop_assert!(gamma.validate(VALIDATION_TOL).is_ok());
        let (fa, fb) = canonical_injections(2, 2).unwrap();
        let ext = verify_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).unwrap();
        prop_assert!(ext.holds && ext.residual() <= 1e-10, "residual {}", ext.residual());
        let product = is_product_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).unwrap();
        prop_assert!(product.holds);
    }

    #[test]
    fn product_extensions_are_extensions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fa, fb) = canonical_injections(2, 2).unwrap();
        let a = CpMap::random_unital(2, 2, &mut rng);
        let b = CpMap::random_unital(2, 2, &mut rng);
        // a random operation on M_4 is almost never an extension and must not be reported as a product one
        for gamma in [CpMap::random_unital(4, 3, &mut rng), tensor_operation(&a, &b)] {
            let plain = verify_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).unwrap().holds;
            match is_product_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL) {
                Ok(p) => prop_assert!(plain || !p.holds),
                Err(_) => prop_assert!(!plain),
            }
        }
    }

    #[test]
    fn conjugated_factors_admit_witnesses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ca, cb) = canonical_injections(2, 2).unwrap();
        let u = random_unitary(4, &mut rng);
        let fa = StarMono::new(2, 2, &u * ca.unitary()).unwrap();
        let fb = StarMono::new(2, 2, &u * cb.unitary()).unwrap();
        let a = CpMap::random_unital(2, 2, &mut rng);
        let b = CpMap::random_unital(2, 3, &mut rng);
        let fact = factorization_of(&fa, &fb, VERIFY_TOL).unwrap().expect("conjugated tensor factors");
        let gamma = conjugated_tensor_witness(&fact, &fa, &fb, &a, &b).unwrap();
        prop_assert!(gamma.validate(VALIDATION_TOL).is_ok());
        prop_assert!(verify_extension(&gamma, &fa, &fb, &a, &b, VERIFY_TOL).unwrap().holds);
    }

    #[test]
    fn matrices_survive_the_text_encoding(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_unitary(n, &mut rng);
        let back = decode_matrix(n, &encode_matrix(&m)).unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn found_results_verify(seed in any::<u64>(), same in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = FeasibilityParams::default();
        let (ca, cb) = canonical_injections(2, 2).unwrap();
        let u = random_unitary(4, &mut rng);
        let fa = StarMono::new(2, 2, &u * ca.unitary()).unwrap();
        let fb = if same { fa.clone() } else { StarMono::new(2, 2, &u * cb.unitary()).unwrap() };
        let a = CpMap::random_unital(2, 2, &mut rng);
        let b = if same { a.clone() } else { CpMap::random_unital(2, 2, &mut rng) };
        let r = search_joint_extension(&fa, &fb, &a, &b, &params).unwrap();
        prop_assert_eq!(r.found(), r.extension.is_some());
        if let Some(gamma) = &r.extension {
            prop_assert!(verify_extension(gamma, &fa, &fb, &a, &b, params.tol).unwrap().holds);
            prop_assert!(gamma.validate(params.tol).is_ok());
        }
    }
}
