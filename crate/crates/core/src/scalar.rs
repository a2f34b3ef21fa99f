//! Floating-point scalars used by the numeric side of the crate.
//!
//! Everything that decides possibility or impossibility is integer-exact;
//! floats only appear in the dense oracles, advisory probabilities and the
//! contextual-fraction LP. Those pieces are generic over [`Real`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for comparing matrix entries and probabilities.
    fn oracle_tol() -> Self;
    /// Feasibility / optimality tolerance for the simplex solver.
    fn lp_tol() -> Self;

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).unwrap_or_else(Self::nan)
    }
}

impl Real for f64 {
    fn oracle_tol() -> Self {
        1e-9
    }
    fn lp_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn oracle_tol() -> Self {
        1e-4
    }
    fn lp_tol() -> Self {
        1e-5
    }
}
