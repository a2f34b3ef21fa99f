//! Born-rule probabilities and exact (im)possibility of joint outcomes.

mod model;
mod outcome;
mod psi;
mod roots;

pub use model::{build_empirical_model, EmpiricalModel, ModelRow};
pub use outcome::{outcome_possibility, JointOutcome, OutcomePossibility};
pub use psi::{family_polynomial, impossibility_by_psi, master_polynomial, FamilyParams, PsiKernel};
pub use roots::RootMultiset;

