use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmod::Modulus;

/// A point `(p1, q1, ..., pn, qn)` of the phase space Z_d^{2n}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    modulus: Modulus,
    coords: Vec<u32>,
}

impl PhasePoint {
    pub fn new(modulus: Modulus, coords: &[i64]) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::ArityMismatch { expected: 2 * (coords.len() / 2 + 1), found: coords.len() });
        }
        Ok(PhasePoint { modulus, coords: coords.iter().map(|&c| modulus.reduce(c)).collect() })
    }

    pub(crate) fn from_residues(modulus: Modulus, coords: Vec<u32>) -> Self {
        debug_assert!(coords.len().is_multiple_of(2) && coords.iter().all(|&c| c < modulus.get()));
        PhasePoint { modulus, coords }
    }

    pub fn zero(modulus: Modulus, n: usize) -> Self {
        PhasePoint { modulus, coords: vec![0; 2 * n] }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Number of particles.
    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn p(&self, i: usize) -> u32 {
        self.coords[2 * i]
    }

    pub fn q(&self, i: usize) -> u32 {
        self.coords[2 * i + 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub(crate) fn check_same_space(&self, other: &PhasePoint) -> Result<()> {
        if self.modulus != other.modulus || self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "Z_{}^{} vs Z_{}^{}",
                self.modulus,
                self.coords.len(),
                other.modulus,
                other.coords.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PhasePoint) -> Result<PhasePoint> {
        self.check_same_space(other)?;
        let m = self.modulus;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| m.add(a, b)).collect();
        Ok(PhasePoint { modulus: m, coords })
    }

    pub fn scale(&self, c: u32) -> PhasePoint {
        let m = self.modulus;
        PhasePoint { modulus: m, coords: self.coords.iter().map(|&a| m.mul(a, c)).collect() }
    }

    pub fn neg(&self) -> PhasePoint {
        self.scale(self.modulus.get() - 1)
    }

    /// Plain dot product with a coefficient vector of the same length.
    pub fn dot(&self, lam: &[u32]) -> u32 {
        let m = self.modulus;
        self.coords.iter().zip(lam).fold(0, |acc, (&a, &b)| m.add(acc, m.mul(a, b)))
    }

    /// `p . q = sum_i p_i q_i`.
    pub fn p_dot_q(&self) -> u32 {
        let m = self.modulus;
        (0..self.n()).fold(0, |acc, i| m.add(acc, m.mul(self.p(i), self.q(i))))
    }

    /// All points of Z_d^{2n} in lexicographic order.
    pub fn all(modulus: Modulus, n: usize) -> impl Iterator<Item = PhasePoint> {
        let total = modulus.usize().pow(2 * n as u32);
        let d = modulus.get();
        (0..total).map(move |mut idx| {
            let mut coords = vec![0; 2 * n];
            for slot in coords.iter_mut().rev() {
                *slot = (idx % d as usize) as u32;
                idx /= d as usize;
            }
            PhasePoint { modulus, coords }
        })
    }
}

impl fmt::Debug for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `[v, w] = sum_i p_i q'_i - p'_i q_i`.
pub fn symplectic_product(v: &PhasePoint, w: &PhasePoint) -> Result<u32> {
    v.check_same_space(w)?;
    Ok(symplectic_unchecked(v.modulus, &v.coords, &w.coords))
}

pub(crate) fn symplectic_unchecked(m: Modulus, v: &[u32], w: &[u32]) -> u32 {
    let mut acc = 0;
    for i in (0..v.len()).step_by(2) {
        acc = m.add(acc, m.mul(v[i], w[i + 1]));
        acc = m.sub(acc, m.mul(w[i], v[i + 1]));
    }
    acc
}

/// The phase-carrying Weyl operator `omega^t W(v)`.
///
/// The Pauli group phases `omega^{m/2}`, `m` in Z_{2d}, are all d-th roots of
/// unity for odd d, so a single exponent `t` in Z_d covers them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylOperator {
    pub point: PhasePoint,
    pub phase_exp: u32,
}

impl WeylOperator {
    pub fn new(point: PhasePoint, phase_exp: i64) -> Self {
        let phase_exp = point.modulus().reduce(phase_exp);
        WeylOperator { point, phase_exp }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        WeylOperator { point: PhasePoint::zero(modulus, n), phase_exp: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.phase_exp == 0 && self.point.is_zero()
    }
}

/// `omega^s W(u) . omega^t W(v) = omega^{s + t + [u,v]/2} W(u + v)`.
pub fn compose(u: &WeylOperator, v: &WeylOperator) -> Result<WeylOperator> {
    let m = u.point.modulus();
    let sp = symplectic_product(&u.point, &v.point)?;
    let point = u.point.add(&v.point)?;
    let phase_exp = m.add(m.add(u.phase_exp, v.phase_exp), m.mul(m.half(), sp));
    Ok(WeylOperator { point, phase_exp })
}

pub fn commutes(u: &WeylOperator, v: &WeylOperator) -> Result<bool> {
    Ok(symplectic_product(&u.point, &v.point)? == 0)
}
