//! Linear hidden variables, the strong-contextuality decision procedure and
//! the contextual fraction.

mod cf;
mod decide;
mod linearity;

use serde::{Deserialize, Serialize};

use crate::born::JointOutcome;
use crate::error::{Error, Result};
use crate::phase_space::{Context, PhasePoint};
use crate::zmod::{advance, Modulus};

pub use cf::{contextual_fraction, ContextualFraction};
pub use decide::{
    decide_strong_contextuality, Certificate, DecideOptions, Refutation, RefutationStage, ScanStats,
    Strategy, Verdict, Witness, WitnessRow,
};
pub use linearity::{additive_assignment_dimension, check_linearity_forcing, linearity_identities, Identity};

/// A linear global assignment: `W(p, q)` gets outcome `lam . (p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HiddenVariable {
    pub modulus: Modulus,
    pub n: usize,
    pub lam: Vec<u32>,
}

impl HiddenVariable {
    pub fn new(modulus: Modulus, lam: Vec<u32>) -> Result<Self> {
        if !lam.len().is_multiple_of(2) || lam.is_empty() {
            return Err(Error::DimensionMismatch(format!("lambda of length {}", lam.len())));
        }
        let lam = lam.into_iter().map(|l| modulus.reduce(i64::from(l))).collect::<Vec<_>>();
        Ok(HiddenVariable { modulus, n: lam.len() / 2, lam })
    }

    pub fn outcome_of(&self, v: &PhasePoint) -> Result<u32> {
        if v.modulus() != self.modulus || v.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{v} vs lambda over Z_{}^{}", self.modulus, 2 * self.n)));
        }
        Ok(v.dot(&self.lam))
    }

    /// Two-qudit labels with the per-qudit `(q, p)` ordering used by the
    /// closed-form family polynomials; see [`crate::born::FamilyParams`].
    pub fn display_labels(&self) -> [u32; 4] {
        assert_eq!(self.n, 2, "display labels are defined for two qudits");
        [self.lam[1], self.lam[0], self.lam[3], self.lam[2]]
    }
}

/// All `d^{2n}` linear hidden variables, lexicographic in `lam` (zero first).
pub fn enumerate_linear_hv(m: Modulus, n: usize) -> Vec<HiddenVariable> {
    let mut out = Vec::with_capacity(m.usize().pow(2 * n as u32));
    let mut lam = vec![0u32; 2 * n];
    loop {
        out.push(HiddenVariable { modulus: m, n, lam: lam.clone() });
        if !advance(&mut lam, m) {
            break;
        }
    }
    out
}

/// The joint outcome `hv` predicts on `ctx`, as values on the context basis.
pub fn prescribed_outcome(hv: &HiddenVariable, ctx: &Context) -> Result<JointOutcome> {
    if ctx.modulus() != hv.modulus || ctx.n() != hv.n {
        return Err(Error::DimensionMismatch(format!(
            "lambda over (d={}, n={}) vs context over (d={}, n={})",
            hv.modulus,
            hv.n,
            ctx.modulus(),
            ctx.n()
        )));
    }
    Ok(JointOutcome::new(ctx.basis().iter().map(|b| b.dot(&hv.lam)).collect()))
}
