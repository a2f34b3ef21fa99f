//! The master polynomial route: a joint outcome of two commuting Weyl
//! measurements is impossible iff, for every ket `(j, k)`, the exponent
//! polynomial `Psi(x, y)` of the projector expansion is a permutation
//! polynomial in `(x, y)`.

use crate::error::{Error, Result};
use crate::phase_space::{symplectic_product, Context, PhasePoint, Table1Kind};
use crate::states::PhaseFunctionState;
use crate::zmod::{is_permutation_polynomial, Modulus, ZdPoly};

use super::outcome::{check_compatible, JointOutcome};

fn two_qudit(state: &PhaseFunctionState) -> Result<()> {
    if state.n() != 2 {
        return Err(Error::Unsupported(format!("master polynomial needs n = 2, got {}", state.n())));
    }
    Ok(())
}

/// `Psi(x, y) = -xA - yB - (P1 Q1 + P2 Q2)/2 + j P1 + k P2 + phi(j - Q1, k - Q2)`
/// with `(P, Q) = x u + y v`, as a polynomial in `(x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn master_polynomial(
    state: &PhaseFunctionState,
    u: &PhasePoint,
    v: &PhasePoint,
    a: u32,
    b: u32,
    j: u32,
    k: u32,
) -> Result<ZdPoly> {
    two_qudit(state)?;
    let m = state.modulus();
    if u.n() != 2 || u.modulus() != m {
        return Err(Error::DimensionMismatch(format!("generator {u} vs two-qudit state over Z_{m}")));
    }
    let sp = symplectic_product(u, v)?;
    if sp != 0 {
        return Err(Error::NonCommuting(sp));
    }
    let x = ZdPoly::var(m, 2, 0);
    let y = ZdPoly::var(m, 2, 1);
    let c = |t: u32| ZdPoly::constant(m, 2, i64::from(t));
    let lin = |s: u32, t: u32| &x.scale(i64::from(s)) + &y.scale(i64::from(t));
    let (p1, q1) = (lin(u.p(0), v.p(0)), lin(u.q(0), v.q(0)));
    let (p2, q2) = (lin(u.p(1), v.p(1)), lin(u.q(1), v.q(1)));
    let mut psi = -&(&x.scale(i64::from(a)) + &y.scale(i64::from(b)));
    psi = &psi - &(&(&p1 * &q1) + &(&p2 * &q2)).scale(i64::from(m.half()));
    psi = &psi + &(&p1.scale(i64::from(j)) + &p2.scale(i64::from(k)));
    let shifted = state.phi().substitute(&[&c(j) - &q1, &c(k) - &q2])?;
    Ok(&psi + &shifted)
}

/// Impossibility of `outcome` (values on the two context generators) via
/// [`master_polynomial`] and exhaustive permutation testing.
pub fn impossibility_by_psi(state: &PhaseFunctionState, ctx: &Context, outcome: &JointOutcome) -> Result<bool> {
    two_qudit(state)?;
    check_compatible(state, ctx, outcome)?;
    let [u, v] = [&ctx.basis()[0], &ctx.basis()[1]];
    let (a, b) = (outcome.values[0], outcome.values[1]);
    for j in state.modulus().elements() {
        for k in state.modulus().elements() {
            if !is_permutation_polynomial(&master_polynomial(state, u, v, a, b, j, k)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Parameters of the closed-form family polynomials. `lam` uses the
/// per-qudit `(q, p)` labelling of those formulas: `lam[0]` multiplies `q1`,
/// `lam[1]` multiplies `p1`, `lam[2]` multiplies `q2`, `lam[3]` multiplies `p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub lam: [u32; 4],
    pub phi1: u32,
    pub phi2: u32,
    pub j: u32,
    pub k: u32,
}

/// Closed-form `Psi` for a context family, constant terms dropped, for the
/// state `phi1 j^2 k + phi2 j k^2` and the outcome prescribed by `lam`.
pub fn family_polynomial(m: Modulus, kind: Table1Kind, params: &FamilyParams) -> Result<ZdPoly> {
    let FamilyParams { lam, phi1, phi2, j, k } = *params;
    let [l1, l2, l3, l4] = lam.map(i64::from);
    let (f1, f2, j, k) = (i64::from(phi1), i64::from(phi2), i64::from(j), i64::from(k));
    let h = i64::from(m.half());
    let terms: Vec<(Vec<u32>, i64)> = match kind {
        Table1Kind::I { alpha } => {
            let a = i64::from(alpha);
            vec![
                (vec![1, 0], j - l2),
                (vec![0, 2], j * f2 - h * a),
                (vec![0, 1], a * (k - l4) - l3 - j * j * f1 - 2 * j * k * f2),
            ]
        }
        Table1Kind::II { alpha } => {
            let a = i64::from(alpha);
            vec![
                (vec![1, 0], k - l4),
                (vec![0, 2], k * f1 - h * a),
                (vec![0, 1], a * (j - l2) - l1 - k * k * f2 - 2 * j * k * f1),
            ]
        }
        Table1Kind::III { alpha, beta } => {
            let (a, b) = (i64::from(alpha), i64::from(beta));
            let bi = i64::from(m.inv(beta)?);
            let r = |v: i64| i64::from(m.reduce(v));
            vec![
                (vec![1, 0], j - l2 + b * (k - l4)),
                (vec![0, 3], r(bi * r(f1 - bi * f2))),
                (vec![0, 2], r(bi * r(h * a - 2 * j * f1 - 2 * k * f2 + r(bi * j) * f2)) + k * f1),
                (
                    vec![0, 1],
                    r(a * (k - l4)) + r(bi * r(l3 + r(j * j) * f1 + r(2 * j * k) * f2)) - l1 - r(2 * j * k) * f1 - r(k * k) * f2,
                ),
            ]
        }
    };
    ZdPoly::from_terms(m, 2, terms.into_iter().map(|(e, c)| (e, i64::from(m.reduce(c)))))
}

/// Fast evaluation of the master exponent for one two-generator context.
///
/// Equivalent to testing [`master_polynomial`] for permutation-ness at every
/// ket, but with the `(x, y)` grid data and the phase table precomputed.
#[derive(Debug, Clone)]
pub struct PsiKernel {
    d: u32,
    /// `-(P1 Q1 + P2 Q2)/2` per grid point `(x, y)`, index `x * d + y`.
    quad: Vec<u32>,
    p1: Vec<u32>,
    p2: Vec<u32>,
    q1: Vec<u32>,
    q2: Vec<u32>,
    /// phase table, index `j * d + k`
    phi: Vec<u32>,
}

impl PsiKernel {
    pub fn new(state: &PhaseFunctionState, u: &PhasePoint, v: &PhasePoint) -> Result<Self> {
        two_qudit(state)?;
        let sp = symplectic_product(u, v)?;
        if sp != 0 {
            return Err(Error::NonCommuting(sp));
        }
        let m = state.modulus();
        let d = m.get();
        let size = (d * d) as usize;
        let mut k = PsiKernel {
            d,
            quad: Vec::with_capacity(size),
            p1: Vec::with_capacity(size),
            p2: Vec::with_capacity(size),
            q1: Vec::with_capacity(size),
            q2: Vec::with_capacity(size),
            phi: state.phase_table(),
        };
        for x in 0..d {
            for y in 0..d {
                let comb = |a: u32, b: u32| m.add(m.mul(x, a), m.mul(y, b));
                let (p1, q1) = (comb(u.p(0), v.p(0)), comb(u.q(0), v.q(0)));
                let (p2, q2) = (comb(u.p(1), v.p(1)), comb(u.q(1), v.q(1)));
                k.quad.push(m.neg(m.mul(m.half(), m.add(m.mul(p1, q1), m.mul(p2, q2)))));
                k.p1.push(p1);
                k.p2.push(p2);
                k.q1.push(q1);
                k.q2.push(q2);
            }
        }
        Ok(k)
    }

    pub fn for_context(state: &PhaseFunctionState, ctx: &Context) -> Result<Self> {
        if ctx.n() != 2 {
            return Err(Error::IncompatibleContext("kernel needs a two-generator context".into()));
        }
        Self::new(state, &ctx.basis()[0], &ctx.basis()[1])
    }

    /// Whether `Psi` is a permutation polynomial at ket `(j, k)`.
    #[inline]
    fn is_perm_at(&self, offset: &[u32], j: u32, k: u32, hist: &mut [u32]) -> bool {
        let d = self.d;
        let d64 = u64::from(d);
        hist.fill(0);
        for i in 0..offset.len() {
            let r = (j + d - self.q1[i]) % d;
            let c = (k + d - self.q2[i]) % d;
            let e = (u64::from(offset[i])
                + u64::from(j) * u64::from(self.p1[i])
                + u64::from(k) * u64::from(self.p2[i])
                + u64::from(self.phi[(r as usize) * (d as usize) + c as usize]))
                % d64;
            let slot = &mut hist[e as usize];
            *slot += 1;
            if *slot > d {
                return false;
            }
        }
        true
    }

    fn offsets(&self, a: u32, b: u32) -> Vec<u32> {
        let d = self.d;
        let mut out = Vec::with_capacity(self.quad.len());
        for x in 0..d {
            for y in 0..d {
                let lin = ((u64::from(x) * u64::from(a) + u64::from(y) * u64::from(b)) % u64::from(d)) as u32;
                out.push(self.quad[(x as usize) * (d as usize) + y as usize] + d - lin);
            }
        }
        out
    }

    /// Number of kets at which `Psi` is a permutation polynomial, scanning
    /// kets in order and stopping at the first failure.
    pub fn permutation_kets(&self, a: u32, b: u32) -> u32 {
        let offset = self.offsets(a % self.d, b % self.d);
        let mut hist = vec![0u32; self.d as usize];
        let mut confirmed = 0;
        for j in 0..self.d {
            for k in 0..self.d {
                if !self.is_perm_at(&offset, j, k, &mut hist) {
                    return confirmed;
                }
                confirmed += 1;
            }
        }
        confirmed
    }

    /// Exact impossibility of the outcome `(a, b)` on the generators.
    pub fn is_impossible(&self, a: u32, b: u32) -> bool {
        self.permutation_kets(a, b) == self.d * self.d
    }
}
