//! Boolean algebras and orthomodular lattices with injective homomorphisms.

pub mod boolean;
pub mod oml;

pub use boolean::{
    adjudicate_atom_split, boole_independent, decide_subalgebras, enumerate_injective_endos,
    internal_sum, internal_sum_coproduct, AtomSplitReport, BoolCategory, BoolError, BoolHom,
    Subalgebra,
};
pub use oml::{
    decide_sub_omls, delta, internal_direct_sum_oml, logical_independent, validate_oml,
    InternalDirectSum, Oml, OmlCategory, OmlError, OmlHom, OmlViolation,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Budget;

    /// Boolean subalgebras seen as sub-OMLs of the Boolean OML (element =
    /// atom mask) give the same verdicts through both representations.
    #[test]
    fn boolean_and_oml_routes_agree() {
        for n in 1..=3 {
            let c = Oml::boolean(n);
            let subs = Subalgebra::all(n);
            let as_mask =
                |s: &Subalgebra| s.elements().iter().fold(0u32, |acc, &e| acc | 1 << e);
            for a in &subs {
                for b in &subs {
                    let (ma, mb) = (as_mask(a), as_mask(b));
                    assert_eq!(
                        boole_independent(a, b).unwrap().is_none(),
                        logical_independent(&c, ma, mb).is_none()
                    );
                    let via_bool = decide_subalgebras(a, b, &Budget::default()).unwrap();
                    let via_oml = decide_sub_omls(&c, ma, mb, &Budget::default()).unwrap();
                    assert_eq!(via_bool.independent(), via_oml.independent(), "{a:?} {b:?}");
                }
            }
        }
    }
}
