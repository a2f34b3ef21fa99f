use serde::Serialize;

use crate::dense::{ket_digits, ket_index, RootTable};
use crate::error::{Error, Result};
use crate::phase_space::Context;
use crate::scalar::Real;
use crate::states::PhaseFunctionState;
use crate::zmod::{advance, Modulus};

use super::RootMultiset;

/// A joint outcome on a context: the eigenvalue labels `o_i` (eigenvalue
/// `omega^{o_i}`) of the context's basis operators.
///
/// Outcomes of the other elements follow by additivity: `v = sum c_i b_i`
/// gets `sum c_i o_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JointOutcome {
    pub values: Vec<u32>,
}

impl JointOutcome {
    pub fn new(values: Vec<u32>) -> Self {
        JointOutcome { values }
    }

    /// Outcome of the element with basis coefficients `coeffs`.
    pub fn value_at(&self, coeffs: &[u32], m: Modulus) -> u32 {
        coeffs.iter().zip(&self.values).fold(0, |acc, (&c, &o)| m.add(acc, m.mul(c, o)))
    }

    /// All `d^n` joint outcomes of a context in odometer order.
    pub fn all(ctx: &Context) -> Vec<JointOutcome> {
        let m = ctx.modulus();
        let mut out = Vec::new();
        let mut v = vec![0u32; ctx.n()];
        loop {
            out.push(JointOutcome::new(v.clone()));
            if !advance(&mut v, m) {
                break;
            }
        }
        out
    }

    /// Position in [`JointOutcome::all`].
    pub fn index(&self, m: Modulus) -> usize {
        ket_index(m, &self.values)
    }

    /// The same functional expressed on the context's reduced-echelon rows.
    pub fn on_canonical(&self, ctx: &Context) -> Vec<u32> {
        let m = ctx.modulus();
        ctx.canonical_rows()
            .iter()
            .map(|row| {
                let e = ctx
                    .elements()
                    .iter()
                    .find(|e| e.point.coords() == row.as_slice())
                    .expect("canonical rows lie in the span");
                self.value_at(&e.coeffs, m)
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomePossibility {
    pub possible: bool,
    /// One multiset per computational-basis ket of `Pi |phi>`.
    pub per_ket: Vec<RootMultiset>,
}

impl OutcomePossibility {
    /// Born probability recovered from the per-ket sums: each ket amplitude
    /// is `d^{-3n/2}` times its root sum. Advisory only.
    pub fn probability<F: Real>(&self, roots: &RootTable<F>) -> F {
        // d^{3n} = (number of kets)^3
        let kets = F::from_usize_lossy(self.per_ket.len());
        let total: F = self.per_ket.iter().map(|rm| rm.value(roots).norm_sqr()).sum();
        total / (kets * kets * kets)
    }
}

pub(crate) fn check_compatible(state: &PhaseFunctionState, ctx: &Context, outcome: &JointOutcome) -> Result<()> {
    if state.modulus() != ctx.modulus() || state.n() != ctx.n() {
        return Err(Error::IncompatibleContext(format!(
            "state lives in (d={}, n={}), context in (d={}, n={})",
            state.modulus(),
            state.n(),
            ctx.modulus(),
            ctx.n()
        )));
    }
    if outcome.values.len() != ctx.n() || outcome.values.iter().any(|&o| o >= ctx.modulus().get()) {
        return Err(Error::IncompatibleContext(format!("outcome {} does not fit the context", outcome.describe())));
    }
    Ok(())
}

/// Exact possibility of a joint outcome through the projector expansion.
///
/// `Pi = d^{-n} sum_{v in C} omega^{-s(v)} W(v)` applied to `|phi>` puts on
/// ket `j` the sum over `v = (p, q)` of
/// `omega^{-s(v) - p.q/2 + p.j + phi(j - q)}`; each such sum is recorded as a
/// [`RootMultiset`]. The outcome is impossible iff every one of them is a
/// zero sum.
pub fn outcome_possibility(
    state: &PhaseFunctionState,
    ctx: &Context,
    outcome: &JointOutcome,
) -> Result<OutcomePossibility> {
    check_compatible(state, ctx, outcome)?;
    let m = state.modulus();
    let n = state.n();
    let h = m.half();
    let table = state.phase_table();
    let terms: Vec<(u32, Vec<u32>, Vec<u32>)> = ctx
        .elements()
        .iter()
        .map(|e| {
            let base = m.sub(m.neg(outcome.value_at(&e.coeffs, m)), m.mul(h, e.point.p_dot_q()));
            let p = (0..n).map(|i| e.point.p(i)).collect();
            let q = (0..n).map(|i| e.point.q(i)).collect();
            (base, p, q)
        })
        .collect();
    let mut per_ket = Vec::with_capacity(table.len());
    let mut shifted = vec![0u32; n];
    for idx in 0..table.len() {
        let j = ket_digits(m, n, idx);
        let mut rm = RootMultiset::new(m);
        for (base, p, q) in &terms {
            let mut t = *base;
            for i in 0..n {
                t = m.add(t, m.mul(p[i], j[i]));
                shifted[i] = m.sub(j[i], q[i]);
            }
            t = m.add(t, table[ket_index(m, &shifted)]);
            rm.push(t);
        }
        per_ket.push(rm);
    }
    let possible = !per_ket.iter().all(RootMultiset::is_zero_sum);
    Ok(OutcomePossibility { possible, per_ket })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{apply_projector, norm_sqr, phase_state_vector};
    use crate::phase_space::{enumerate_contexts, PhasePoint};
    use proptest::prelude::*;

    fn zi_iz(m: Modulus) -> Context {
        let z1 = PhasePoint::new(m, &[1, 0, 0, 0]).unwrap();
        let z2 = PhasePoint::new(m, &[0, 0, 1, 0]).unwrap();
        Context::new(vec![z1, z2], "ZI,IZ").unwrap()
    }

    #[test]
    fn plus_state_computational_outcome() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("0", m, 2).unwrap();
        let r = outcome_possibility(&state, &zi_iz(m), &JointOutcome::new(vec![0, 0])).unwrap();
        assert!(r.possible);
        let p = r.probability(&RootTable::<f64>::new(m));
        assert!((p - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn outcomes_resolve_the_identity() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("j*k^2 + 2*j^2", m, 2).unwrap();
        for ctx in enumerate_contexts(m, 2).unwrap().iter().step_by(7) {
            let mut per_ket: Vec<RootMultiset> = vec![RootMultiset::new(m); 9];
            for o in JointOutcome::all(ctx) {
                let r = outcome_possibility(&state, ctx, &o).unwrap();
                for (acc, rm) in per_ket.iter_mut().zip(&r.per_ket) {
                    acc.merge(rm);
                }
            }
            // only the identity survives the sum over outcomes: each ket
            // collects d^n copies of its own phase plus full orbits
            for acc in &per_ket {
                assert_eq!(acc.total(), 81);
                assert!(!acc.is_zero_sum());
            }
        }
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let m = Modulus::new(3).unwrap();
        let state = PhaseFunctionState::parse("0", m, 2).unwrap();
        let ctx = zi_iz(m);
        assert!(outcome_possibility(&state, &ctx, &JointOutcome::new(vec![0])).is_err());
        assert!(outcome_possibility(&state, &ctx, &JointOutcome::new(vec![0, 3])).is_err());
        let other = PhaseFunctionState::parse("0", Modulus::new(5).unwrap(), 2).unwrap();
        assert!(matches!(
            outcome_possibility(&other, &ctx, &JointOutcome::new(vec![0, 0])),
            Err(Error::IncompatibleContext(_))
        ));
    }

    #[test]
    fn canonical_labels() {
        let m = Modulus::new(5).unwrap();
        let a = PhasePoint::new(m, &[1, 0, 2, 0]).unwrap();
        let b = PhasePoint::new(m, &[0, 0, 1, 0]).unwrap();
        let ctx = Context::new(vec![a, b], "t").unwrap();
        // canonical rows are (1,0,0,0) = a - 2b and (0,0,1,0) = b
        assert_eq!(JointOutcome::new(vec![3, 1]).on_canonical(&ctx), vec![1, 1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn zero_sum_matches_numeric_value(
            d in prop::sample::select(vec![3u64, 5]),
            coeffs in prop::collection::vec(0i64..5, 8),
            ci in 0usize..156,
            a in 0u32..5,
            b in 0u32..5,
        ) {
            let m = Modulus::new(d).unwrap();
            let terms = [[3, 0], [2, 1], [1, 2], [0, 3], [2, 0], [1, 1], [0, 2], [1, 0]];
            let phi = crate::zmod::ZdPoly::from_terms(m, 2, terms.iter().zip(&coeffs).map(|(e, &c)| (e.to_vec(), c))).unwrap();
            let state = PhaseFunctionState::new(phi);
            let contexts = enumerate_contexts(m, 2).unwrap();
            let ctx = &contexts[ci % contexts.len()];
            let o = JointOutcome::new(vec![a % m.get(), b % m.get()]);
            let exact = outcome_possibility(&state, ctx, &o).unwrap();
            let roots = RootTable::<f64>::new(m);
            for rm in &exact.per_ket {
                prop_assert_eq!(rm.is_zero_sum(), rm.value(&roots).norm() < 1e-9);
            }
            let psi = phase_state_vector::<f64>(state.phi());
            let dense = norm_sqr(&apply_projector(ctx, &o.values, &psi, &roots));
            prop_assert!((dense - exact.probability(&roots)).abs() < 1e-9);
            prop_assert_eq!(exact.possible, dense > 1e-9);
        }
    }
}
