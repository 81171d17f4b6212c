//! Fixtures shared by the benchmarks.

use copossible_core::finset::{FinSet, FinSetCategory, FinSetMorphism};
use copossible_core::finvect::{FinVectCategory, Subspace};
use copossible_core::opalg::{canonical_injections, random_unitary, CpMap, StarMono};
use copossible_core::{Cospan, FiniteCategory};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Inclusions of `{0, 1}` and `{2, 3}` into `{0, 1, 2, 3}`.
pub fn disjoint_subsets() -> (FinSetCategory, Cospan<FinSetMorphism>) {
    let c = FinSet::range(4);
    let a = FinSetMorphism::inclusion(&FinSet::new([0, 1]).unwrap(), &c).unwrap();
    let b = FinSetMorphism::inclusion(&FinSet::new([2, 3]).unwrap(), &c).unwrap();
    let cat = FinSetCategory::default();
    let span = Cospan::new(&cat, a, b).unwrap();
    (cat, span)
}

/// A line and a complementary plane in `F_2^3`.
pub fn line_and_plane() -> (FinVectCategory, Subspace, Subspace) {
    let cat = FinVectCategory::new(2, 0..=3);
    let c = cat.space(3);
    let a = Subspace::new(c, &[vec![1, 0, 0]]).unwrap();
    let b = Subspace::new(c, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    (cat, a, b)
}

pub fn cospan_of(cat: &FinVectCategory, a: &Subspace, b: &Subspace) -> Cospan<<FinVectCategory as FiniteCategory>::Morphism> {
    Cospan::new(cat, a.inclusion(), b.inclusion()).unwrap()
}

/// Two random unital operations on `M_2`.
pub fn operation_pair(seed: u64) -> (CpMap, CpMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (CpMap::random_unital(2, 3, &mut rng), CpMap::random_unital(2, 3, &mut rng))
}

/// Tensor factors of `M_4` conjugated by a random unitary.
pub fn conjugated_factors(seed: u64) -> (StarMono, StarMono) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ca, cb) = canonical_injections(2, 2).unwrap();
    let u = random_unitary(4, &mut rng);
    (
        StarMono::new(2, 2, &u * ca.unitary()).unwrap(),
        StarMono::new(2, 2, &u * cb.unitary()).unwrap(),
    )
}
