//! A small dense simplex for `maximize c.x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so the all-slack basis is feasible from the start.
//!
//! Dictionary form: each basic variable is `b_i - sum_j a_ij x_{N_j}` and the
//! objective is `z0 + sum_j c_j x_{N_j}`. Pricing is Dantzig's rule; after a
//! run of degenerate pivots it switches to Bland's rule, which cannot cycle.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<F> {
    pub objective: F,
    pub x: Vec<F>,
    pub pivots: usize,
}

const DEGENERATE_RUN: usize = 50;

/// `a` is row-major with `b.len()` rows of `c.len()` entries.
pub fn maximize<F: Real>(c: &[F], a: &[Vec<F>], b: &[F], tol: F) -> Result<LpSolution<F>> {
    let n = c.len();
    let m = b.len();
    if a.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("{m} x {n} LP with ragged constraint rows")));
    }
    if let Some(i) = b.iter().position(|&v| v < -tol) {
        return Err(Error::InfeasibleModel(format!("negative right-hand side in row {i}")));
    }
    // variable labels: 0..n structural, n..n+m slack
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut t: Vec<Vec<F>> = a.to_vec();
    let mut rhs: Vec<F> = b.iter().map(|&v| v.max(F::zero())).collect();
    let mut obj: Vec<F> = c.to_vec();
    let mut z = F::zero();
    let mut degenerate = 0;
    let cap = 50 * (n + m) + 1000;
    let mut pivots = 0;
    loop {
        let bland = degenerate >= DEGENERATE_RUN;
        let entering = if bland {
            (0..n).filter(|&j| obj[j] > tol).min_by_key(|&j| nonbasic[j])
        } else {
            (0..n).filter(|&j| obj[j] > tol).max_by(|&i, &j| obj[i].partial_cmp(&obj[j]).expect("finite"))
        };
        let Some(s) = entering else { break };
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            let coef = t[i][s];
            if coef > tol {
                let ratio = rhs[i] / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) if ratio < best - tol || (ratio <= best + tol && basic[i] < basic[r]) => {
                        Some((i, ratio))
                    }
                    keep => keep,
                };
            }
        }
        let Some((r, ratio)) = leave else {
            return Err(Error::InfeasibleModel("objective is unbounded".into()));
        };
        degenerate = if ratio <= tol { degenerate + 1 } else { 0 };
        pivots += 1;
        if pivots > cap {
            return Err(Error::InfeasibleModel(format!("simplex did not converge in {cap} pivots")));
        }

        let piv = t[r][s];
        let inv = F::one() / piv;
        for j in 0..n {
            if j != s {
                t[r][j] *= inv;
            }
        }
        t[r][s] = inv;
        rhs[r] *= inv;
        let pivot_row = t[r].clone();
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = t[i][s];
            if f == F::zero() {
                continue;
            }
            let row = &mut t[i];
            for j in 0..n {
                if j != s {
                    row[j] -= f * pivot_row[j];
                }
            }
            row[s] = -f * pivot_row[s];
            rhs[i] = (rhs[i] - f * rhs[r]).max(F::zero());
        }
        let f = obj[s];
        z += f * rhs[r];
        for j in 0..n {
            if j != s {
                obj[j] -= f * pivot_row[j];
            }
        }
        obj[s] = -f * pivot_row[s];
        std::mem::swap(&mut nonbasic[s], &mut basic[r]);
    }
    let mut x = vec![F::zero(); n];
    for (i, &v) in basic.iter().enumerate() {
        if v < n {
            x[v] = rhs[i];
        }
    }
    Ok(LpSolution { objective: z, x, pivots })
}
