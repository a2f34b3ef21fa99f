//! Arithmetic over Z_d (d an odd prime), polynomials over Z_d, permutation
//! polynomials and the degree-3 Dickson classifier.

mod modulus;
mod parse;
mod perm;
mod poly;

pub use modulus::{inv, Modulus};
pub use perm::{
    dickson_classify, is_permutation_polynomial, DicksonClassification, DicksonNormalForm,
    DicksonShape,
};
pub(crate) use perm::advance;
pub use poly::{Exponents, ZdPoly};
