use std::collections::BTreeMap;

use crate::born::EmpiricalModel;
use crate::error::{Error, Result};
use crate::lp;
use crate::scalar::Real;

use super::{enumerate_linear_hv, prescribed_outcome};

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualFraction<F> {
    pub cf: F,
    /// Noncontextual weight per hidden variable `lam`; zero weights omitted.
    pub weights: BTreeMap<Vec<u32>, F>,
    /// Hidden variables left after dropping those with an impossible prediction.
    pub lp_variables: usize,
    pub lp_constraints: usize,
}

/// Largest weight of a noncontextual part, over linear hidden variables:
/// `maximize sum w` with `sum_{lam -> (C, o)} w_lam <= P_C(o)`. Returns
/// `cf = 1 - sum w`.
///
/// A hidden variable predicting an (exactly) impossible outcome somewhere
/// is forced to weight zero and removed before the solve.
pub fn contextual_fraction<F: Real>(model: &EmpiricalModel<F>) -> Result<ContextualFraction<F>> {
    let m = model.state().modulus();
    let n = model.state().n();
    let contexts = model.contexts();
    let per_ctx = m.usize().pow(n as u32);
    let feas = F::from_f64(1e-6).expect("representable");
    let tol = F::lp_tol();

    let mut prob = vec![F::zero(); contexts.len() * per_ctx];
    let mut possible = vec![false; contexts.len() * per_ctx];
    let mut seen = vec![0usize; contexts.len()];
    for row in model.rows() {
        let p = row.probability;
        if !p.is_finite() || p < -feas || p > F::one() + feas {
            return Err(Error::InfeasibleModel(format!("probability {p} out of range")));
        }
        let at = row.context * per_ctx + row.outcome.index(m);
        prob[at] = p.max(F::zero());
        possible[at] = row.possible;
        seen[row.context] += 1;
    }
    for (ci, ctx) in contexts.iter().enumerate() {
        if seen[ci] != per_ctx {
            return Err(Error::InfeasibleModel(format!("context {} has {} of {per_ctx} outcomes", ctx.label(), seen[ci])));
        }
        let total: F = prob[ci * per_ctx..(ci + 1) * per_ctx].iter().copied().sum();
        if (total - F::one()).abs() > feas {
            return Err(Error::InfeasibleModel(format!("context {} sums to {total}", ctx.label())));
        }
    }

    // surviving hidden variables and the cell each one hits in every context
    let mut vars = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for hv in enumerate_linear_hv(m, n) {
        let hit = contexts
            .iter()
            .enumerate()
            .map(|(ci, ctx)| Ok(ci * per_ctx + prescribed_outcome(&hv, ctx)?.index(m)))
            .collect::<Result<Vec<_>>>()?;
        if hit.iter().all(|&c| possible[c]) {
            vars.push(hv.lam);
            cells.push(hit);
        }
    }
    let mut used: BTreeMap<usize, usize> = BTreeMap::new();
    for hit in &cells {
        for &c in hit {
            let next = used.len();
            used.entry(c).or_insert(next);
        }
    }
    let mut a = vec![vec![F::zero(); vars.len()]; used.len()];
    let mut b = vec![F::zero(); used.len()];
    for (&cell, &r) in &used {
        b[r] = prob[cell];
    }
    for (v, hit) in cells.iter().enumerate() {
        for c in hit {
            a[used[c]][v] = F::one();
        }
    }
    let c = vec![F::one(); vars.len()];
    let sol = lp::maximize(&c, &a, &b, tol)?;
    let weights = vars
        .into_iter()
        .zip(sol.x)
        .filter(|(_, w)| *w > tol)
        .collect::<BTreeMap<_, _>>();
    let cf = (F::one() - sol.objective).max(F::zero()).min(F::one());
    Ok(ContextualFraction { cf, weights, lp_variables: cells.len(), lp_constraints: used.len() })
}
