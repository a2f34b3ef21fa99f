//! Phase space Z_d^{2n}, Weyl operators and measurement contexts.

mod context;
mod point;

pub use context::{
    enumerate_contexts, rref, table1_contexts, Context, ContextElement, ContextRecord, Table1Kind,
};
pub use point::{commutes, compose, symplectic_product, PhasePoint, WeylOperator};
pub(crate) use point::symplectic_unchecked;
