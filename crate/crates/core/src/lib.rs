//! Subobject independence as morphism co-possibility, decided on finite
//! structures.
//!
//! Two subobjects `A -> X <- B` are independent when every pair of
//! endomorphisms of `A` and `B` extends jointly to one endomorphism of `X`.
//! [`kernel`] decides this by exhaustive search in any [`kernel::FiniteCategory`];
//! the remaining modules supply concrete categories and the independent
//! oracles they are checked against.

pub mod finset;
pub mod finvect;
pub mod fp;
pub mod pregeom;
pub mod qft;
pub mod tensor;
pub mod kernel;
pub mod latalg;
pub mod opalg;
pub mod suite;

pub use kernel::{
    compose, decide_mor_independence, decide_subobject_independence, is_monomorphism,
    subobject_equal, Budget, Cospan, Decision, FiniteCategory, IndependenceVerdict, KernelError,
    MonoPair, SubobjectClass,
};
