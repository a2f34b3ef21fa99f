//! Exact decision of strong contextuality for two-qudit phase-function
//! states under stabilizer measurements.
//!
//! Everything that decides possibility is integer arithmetic over Z_d for an
//! odd prime d. Floating-point code (the dense oracle, Born probabilities,
//! the contextual-fraction LP) is generic over [`Real`] and only ever used
//! for cross-checks and advisory numbers.

pub mod born;
pub mod dense;
pub mod error;
pub mod hidden_vars;
pub mod lp;
pub mod phase_space;
pub mod scalar;
pub mod states;
pub mod zmod;

pub use born::{
    build_empirical_model, family_polynomial, impossibility_by_psi, master_polynomial, outcome_possibility,
    EmpiricalModel, FamilyParams, JointOutcome, OutcomePossibility, PsiKernel, RootMultiset,
};
pub use error::{Error, Result};
pub use hidden_vars::{
    additive_assignment_dimension, check_linearity_forcing, contextual_fraction, decide_strong_contextuality,
    enumerate_linear_hv, linearity_identities, prescribed_outcome, Certificate, ContextualFraction, DecideOptions,
    HiddenVariable, Strategy, Verdict,
};
pub use phase_space::{
    commutes, compose, enumerate_contexts, symplectic_product, table1_contexts, Context, PhasePoint, Table1Kind,
    WeylOperator,
};
pub use scalar::Real;
pub use states::{
    diagonal_gate_level, oracle_level, strip_quadratic, strongness, swap_qudits, verify_level_by_conjugation,
    PhaseFunctionState, StrongnessReport,
};
pub use zmod::{
    dickson_classify, inv, is_permutation_polynomial, DicksonClassification, DicksonNormalForm, DicksonShape, Modulus,
    ZdPoly,
};

pub type EmpiricalModelF64 = EmpiricalModel<f64>;
pub type EmpiricalModelF32 = EmpiricalModel<f32>;
pub type ContextualFractionF64 = ContextualFraction<f64>;
pub type ContextualFractionF32 = ContextualFraction<f32>;
pub type DenseMatrixF64 = dense::DenseMatrix<f64>;
pub type RootTableF64 = dense::RootTable<f64>;
