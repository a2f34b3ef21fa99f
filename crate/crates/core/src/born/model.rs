use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{apply_projector, norm_sqr, phase_state_vector, RootTable};
use crate::error::{Error, Result};
use crate::phase_space::{Context, PhasePoint};
use crate::scalar::Real;
use crate::states::PhaseFunctionState;

use super::outcome::{outcome_possibility, JointOutcome};
use super::RootMultiset;

#[derive(Debug, Clone)]
pub struct ModelRow<F> {
    /// Index into [`EmpiricalModel::contexts`].
    pub context: usize,
    pub outcome: JointOutcome,
    pub possible: bool,
    /// Advisory: never consulted to decide possibility.
    pub probability: F,
    pub witness: Vec<RootMultiset>,
}

/// Joint-outcome distributions of a state over a list of contexts.
///
/// Rows are grouped by context in input order; within a context, outcomes
/// follow [`JointOutcome::all`].
#[derive(Debug, Clone)]
pub struct EmpiricalModel<F = f64> {
    state: PhaseFunctionState,
    contexts: Vec<Context>,
    rows: Vec<ModelRow<F>>,
}

pub fn build_empirical_model<F: Real>(state: &PhaseFunctionState, contexts: &[Context]) -> Result<EmpiricalModel<F>> {
    if state.n() > 2 {
        return Err(Error::Unsupported(format!("empirical models need n <= 2, got n = {}", state.n())));
    }
    let roots = RootTable::<F>::new(state.modulus());
    let psi = phase_state_vector::<F>(state.phi());
    let per_context: Vec<Result<Vec<ModelRow<F>>>> = contexts
        .par_iter()
        .enumerate()
        .map(|(ci, ctx)| {
            JointOutcome::all(ctx)
                .into_iter()
                .map(|outcome| {
                    let exact = outcome_possibility(state, ctx, &outcome)?;
                    let probability = norm_sqr(&apply_projector(ctx, &outcome.values, &psi, &roots));
                    Ok(ModelRow {
                        context: ci,
                        outcome,
                        possible: exact.possible,
                        probability,
                        witness: exact.per_ket,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_context {
        rows.extend(r?);
    }
    Ok(EmpiricalModel { state: state.clone(), contexts: contexts.to_vec(), rows })
}

#[derive(Serialize)]
struct JsonRow<'a> {
    context: &'a str,
    outcome: &'a [u32],
    possible: bool,
    probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<&'a [u64]>>,
}

#[derive(Serialize)]
struct JsonModel<'a> {
    schema: &'static str,
    modulus: u32,
    n: usize,
    phi: String,
    contexts: usize,
    rows: Vec<JsonRow<'a>>,
}

impl<F: Real> EmpiricalModel<F> {
    pub fn state(&self) -> &PhaseFunctionState {
        &self.state
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn rows(&self) -> &[ModelRow<F>] {
        &self.rows
    }

    pub fn rows_of(&self, context: usize) -> impl Iterator<Item = &ModelRow<F>> + '_ {
        self.rows.iter().filter(move |r| r.context == context)
    }

    pub fn context_totals(&self) -> Vec<F> {
        let mut t = vec![F::zero(); self.contexts.len()];
        for r in &self.rows {
            t[r.context] += r.probability;
        }
        t
    }

    pub fn impossible_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.possible).count()
    }

    /// Largest disagreement between marginal distributions of the same
    /// measurement seen from different contexts.
    pub fn max_signalling_discrepancy(&self) -> F {
        let d = self.state.modulus().usize();
        let m = self.state.modulus();
        let mut marginals: HashMap<(usize, PhasePoint), Vec<F>> = HashMap::new();
        for r in &self.rows {
            for e in self.contexts[r.context].elements() {
                if e.point.is_zero() {
                    continue;
                }
                let slot = marginals.entry((r.context, e.point.clone())).or_insert_with(|| vec![F::zero(); d]);
                let o = r.outcome.value_at(&e.coeffs, m) as usize;
                slot[o] += r.probability;
            }
        }
        let mut first: HashMap<&PhasePoint, &Vec<F>> = HashMap::new();
        let mut worst = F::zero();
        let mut keys: Vec<_> = marginals.keys().collect();
        keys.sort();
        for key in keys {
            let dist = &marginals[key];
            match first.get(&key.1) {
                None => {
                    first.insert(&key.1, dist);
                }
                Some(prev) => {
                    for (a, b) in prev.iter().zip(dist) {
                        worst = worst.max((*a - *b).abs());
                    }
                }
            }
        }
        worst
    }

    /// Checks the advisory probabilities against the exact verdicts and the
    /// per-context normalization, at the given tolerance.
    pub fn check_consistency(&self, tol: F) -> Result<()> {
        for (ci, total) in self.context_totals().into_iter().enumerate() {
            if (total - F::one()).abs() > tol {
                return Err(Error::InfeasibleModel(format!(
                    "context {} sums to {total}",
                    self.contexts[ci].label()
                )));
            }
        }
        for r in &self.rows {
            if r.possible == (r.probability < tol) {
                return Err(Error::InfeasibleModel(format!(
                    "context {} outcome {}: exact possible={} but probability {}",
                    self.contexts[r.context].label(),
                    r.outcome.describe(),
                    r.possible,
                    r.probability
                )));
            }
        }
        Ok(())
    }

    /// Columns: `context,outcome,possible,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("context,outcome,possible,probability\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "\"{}\",\"{}\",{},{:.12}",
                self.contexts[r.context].label(),
                r.outcome.describe(),
                r.possible,
                r.probability.to_f64().unwrap_or(f64::NAN)
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = self
            .rows
            .iter()
            .map(|r| JsonRow {
                context: self.contexts[r.context].label(),
                outcome: &r.outcome.values,
                possible: r.possible,
                probability: r.probability.to_f64().unwrap_or(f64::NAN),
                witness: (!r.possible).then(|| r.witness.iter().map(RootMultiset::counts).collect()),
            })
            .collect();
        let doc = JsonModel {
            schema: "1",
            modulus: self.state.modulus().get(),
            n: self.state.n(),
            phi: self.state.describe(),
            contexts: self.contexts.len(),
            rows,
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Unsupported(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{enumerate_contexts, table1_contexts};
    use crate::zmod::Modulus;

    #[test]
    fn plus_state_model_is_normalized_and_nonsignalling() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("0", m, 2).unwrap();
        let model = build_empirical_model::<f64>(&state, &enumerate_contexts(m, 2).unwrap()).unwrap();
        assert_eq!(model.rows().len(), 40 * 9);
        model.check_consistency(1e-9).unwrap();
        assert!(model.max_signalling_discrepancy() < 1e-9);
    }

    #[test]
    fn strong_state_has_impossible_outcomes_on_family_contexts() {
        let m = Modulus::new(5).unwrap();
        let state = PhaseFunctionState::cubic(m, 1, 3);
        let contexts: Vec<Context> = table1_contexts(m).into_iter().map(|(_, c)| c).collect();
        let model = build_empirical_model::<f64>(&state, &contexts).unwrap();
        model.check_consistency(1e-9).unwrap();
        assert!(model.impossible_count() > 0);
        assert!(model.max_signalling_discrepancy() < 1e-9);
    }

    #[test]
    fn single_precision_model() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("j*k^2", m, 2).unwrap();
        let model = build_empirical_model::<f32>(&state, &enumerate_contexts(m, 2).unwrap()).unwrap();
        model.check_consistency(1e-4).unwrap();
    }

    #[test]
    fn exports() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("j*k^2", m, 2).unwrap();
        let contexts: Vec<Context> = table1_contexts(m).into_iter().map(|(_, c)| c).take(2).collect();
        let model = build_empirical_model::<f64>(&state, &contexts).unwrap();
        let csv = model.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("context,outcome,possible,probability"));
        assert_eq!(lines.count(), 18);
        assert!(csv.contains("\"I:alpha=0\",\"(0,0)\","));
        let json: serde_json::Value = serde_json::from_str(&model.to_json().unwrap()).unwrap();
        assert_eq!(json["schema"], "1");
        for row in json["rows"].as_array().unwrap() {
            assert_eq!(row.get("witness").is_some(), row["possible"] == false);
        }
    }

    #[test]
    fn three_qudits_refused() {
        let m = Modulus::new(3).unwrap();
        let phi = crate::zmod::ZdPoly::parse("a*b*c", m, &["a", "b", "c"]).unwrap();
        let state = PhaseFunctionState::new(phi);
        assert!(build_empirical_model::<f64>(&state, &[]).is_err());
    }
}
