//! Dense complex state vectors and matrices.
//!
//! This is the floating-point oracle side: it never decides anything on its
//! own, it only cross-checks the exact routines and produces advisory
//! probabilities. Kets of n qudits are indexed with qudit 1 most significant.

use num_complex::Complex;

use crate::phase_space::{Context, PhasePoint};
use crate::scalar::Real;
use crate::zmod::{Modulus, ZdPoly};

/// Powers of `omega = exp(2 pi i / d)`.
#[derive(Debug, Clone)]
pub struct RootTable<F> {
    roots: Vec<Complex<F>>,
}

impl<F: Real> RootTable<F> {
    pub fn new(m: Modulus) -> Self {
        let d = F::from_usize_lossy(m.usize());
        let roots = (0..m.usize())
            .map(|t| Complex::from_polar(F::one(), F::TAU() * F::from_usize_lossy(t) / d))
            .collect();
        RootTable { roots }
    }

    #[inline]
    pub fn pow(&self, t: u32) -> Complex<F> {
        self.roots[t as usize]
    }

    /// `sum_t counts[t] omega^t`.
    pub fn weighted_sum(&self, counts: &[u64]) -> Complex<F> {
        counts
            .iter()
            .zip(&self.roots)
            .fold(Complex::new(F::zero(), F::zero()), |acc, (&c, &w)| acc + w * F::from_u64(c).unwrap_or_else(F::nan))
    }
}

pub(crate) fn ket_digits(m: Modulus, n: usize, mut idx: usize) -> Vec<u32> {
    let d = m.usize();
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % d) as u32;
        idx /= d;
    }
    out
}

pub(crate) fn ket_index(m: Modulus, digits: &[u32]) -> usize {
    digits.iter().fold(0, |acc, &x| acc * m.usize() + x as usize)
}

/// Normalized amplitudes of `d^{-n/2} sum_j omega^{phi(j)} |j>`.
pub fn phase_state_vector<F: Real>(phi: &ZdPoly) -> Vec<Complex<F>> {
    let m = phi.modulus();
    let n = phi.num_vars();
    let dim = m.usize().pow(n as u32);
    let roots = RootTable::<F>::new(m);
    let norm = F::one() / F::from_usize_lossy(dim).sqrt();
    (0..dim)
        .map(|i| roots.pow(phi.eval_unchecked(&ket_digits(m, n, i))) * norm)
        .collect()
}

/// `omega^t W(v) |psi>` without materializing the matrix.
pub fn apply_weyl<F: Real>(
    v: &PhasePoint,
    phase_exp: u32,
    psi: &[Complex<F>],
    roots: &RootTable<F>,
) -> Vec<Complex<F>> {
    let m = v.modulus();
    let n = v.n();
    let h = m.half();
    let mut out = vec![Complex::new(F::zero(), F::zero()); psi.len()];
    for (i, amp) in psi.iter().enumerate() {
        let j = ket_digits(m, n, i);
        let mut t = phase_exp;
        let mut target = vec![0u32; n];
        for k in 0..n {
            let (p, q) = (v.p(k), v.q(k));
            let shifted = m.add(j[k], q);
            target[k] = shifted;
            t = m.add(t, m.sub(m.mul(p, shifted), m.mul(h, m.mul(p, q))));
        }
        out[ket_index(m, &target)] += *amp * roots.pow(t);
    }
    out
}

/// `Pi |psi>` for the joint outcome whose values on the context basis are
/// `outcome`: `Pi = d^{-n} sum_{v in context} omega^{-s(v)} W(v)`.
pub fn apply_projector<F: Real>(
    ctx: &Context,
    outcome: &[u32],
    psi: &[Complex<F>],
    roots: &RootTable<F>,
) -> Vec<Complex<F>> {
    let m = ctx.modulus();
    let scale = F::one() / F::from_usize_lossy(ctx.elements().len());
    let mut out = vec![Complex::new(F::zero(), F::zero()); psi.len()];
    for e in ctx.elements() {
        let s = e.coeffs.iter().zip(outcome).fold(0, |acc, (&c, &o)| m.add(acc, m.mul(c, o)));
        let w = apply_weyl(&e.point, m.neg(s), psi, roots);
        for (o, x) in out.iter_mut().zip(w) {
            *o += x * scale;
        }
    }
    out
}

pub fn norm_sqr<F: Real>(v: &[Complex<F>]) -> F {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F> {
    dim: usize,
    data: Vec<Complex<F>>,
}

impl<F: Real> DenseMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex::new(F::zero(), F::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = Complex::new(F::one(), F::zero());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<F> {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<F>) {
        self.data[r * self.dim + c] = v;
    }

    /// Matrix of `omega^t W(v)`.
    pub fn weyl(v: &PhasePoint, phase_exp: u32, roots: &RootTable<F>) -> Self {
        let m = v.modulus();
        let dim = m.usize().pow(v.n() as u32);
        let mut out = Self::zeros(dim);
        for c in 0..dim {
            let mut basis = vec![Complex::new(F::zero(), F::zero()); dim];
            basis[c] = Complex::new(F::one(), F::zero());
            for (r, x) in apply_weyl(v, phase_exp, &basis, roots).into_iter().enumerate() {
                out.set(r, c, x);
            }
        }
        out
    }

    /// `U_phi = sum_j omega^{phi(j)} |j><j|`.
    pub fn diagonal_phase(phi: &ZdPoly, roots: &RootTable<F>) -> Self {
        let m = phi.modulus();
        let n = phi.num_vars();
        let dim = m.usize().pow(n as u32);
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.set(i, i, roots.pow(phi.eval_unchecked(&ket_digits(m, n, i))));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == F::zero() && a.im == F::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<F>]) -> Vec<Complex<F>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.data[i * self.dim + j] * v[j]).fold(Complex::new(F::zero(), F::zero()), |a, b| a + b))
            .collect()
    }

    /// `self == c * other` for some unit-modulus `c`, entrywise within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: F) -> bool {
        assert_eq!(self.dim, other.dim);
        let Some(idx) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
        else {
            return true;
        };
        let pivot = other.data[idx];
        if pivot.norm() <= tol {
            return self.data.iter().all(|x| x.norm() <= tol);
        }
        let phase = self.data[idx] / pivot;
        if (phase.norm() - F::one()).abs() > tol {
            return false;
        }
        self.data.iter().zip(&other.data).all(|(a, b)| (*a - *b * phase).norm() <= tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| (*a - *b).norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{compose, symplectic_product, WeylOperator};

    fn pt(m: Modulus, c: &[i64]) -> PhasePoint {
        PhasePoint::new(m, c).unwrap()
    }

    #[test]
    fn weyl_matrix_power_is_identity() {
        let m = Modulus::new(3).unwrap();
        let roots = RootTable::<f64>::new(m);
        for v in PhasePoint::all(m, 1) {
            let w = DenseMatrix::weyl(&v, 0, &roots);
            let mut acc = DenseMatrix::identity(3);
            for _ in 0..3 {
                acc = acc.mul(&w);
            }
            assert!(acc.approx_eq(&DenseMatrix::identity(3), 1e-9), "W{v}^3 != I");
        }
    }

    #[test]
    fn composition_law_matches_matrices() {
        let m = Modulus::new(3).unwrap();
        let roots = RootTable::<f64>::new(m);
        let pts: Vec<PhasePoint> = PhasePoint::all(m, 2).step_by(5).collect();
        for u in &pts {
            for v in &pts {
                let (wu, wv) = (WeylOperator::new(u.clone(), 1), WeylOperator::new(v.clone(), 0));
                let c = compose(&wu, &wv).unwrap();
                let lhs = DenseMatrix::weyl(u, 1, &roots).mul(&DenseMatrix::weyl(v, 0, &roots));
                let rhs = DenseMatrix::weyl(&c.point, c.phase_exp, &roots);
                assert!(lhs.approx_eq(&rhs, 1e-9), "{u} {v}");
                let commute = lhs.approx_eq(&DenseMatrix::weyl(v, 0, &roots).mul(&DenseMatrix::weyl(u, 1, &roots)), 1e-9);
                assert_eq!(commute, symplectic_product(u, v).unwrap() == 0);
            }
        }
    }

    #[test]
    fn single_qudit_paulis() {
        // W(0,1) = X: |j> -> |j+1>,  W(1,0) = Z: |j> -> omega^j |j>
        let m = Modulus::new(5).unwrap();
        let roots = RootTable::<f64>::new(m);
        let x = DenseMatrix::weyl(&pt(m, &[0, 1]), 0, &roots);
        let z = DenseMatrix::weyl(&pt(m, &[1, 0]), 0, &roots);
        for j in 0..5usize {
            assert!((x.get((j + 1) % 5, j) - Complex::new(1.0, 0.0)).norm() < 1e-12);
            assert!((z.get(j, j) - roots.pow(j as u32)).norm() < 1e-12);
        }
    }

    #[test]
    fn projectors_are_idempotent_and_orthogonal() {
        let m = Modulus::new(3).unwrap();
        let roots = RootTable::<f64>::new(m);
        let ctx = crate::phase_space::Table1Kind::III { alpha: 2, beta: 1 }.context(m).unwrap();
        let proj = |o: &[u32]| {
            let mut mat = DenseMatrix::zeros(9);
            for c in 0..9 {
                let mut e = vec![Complex::new(0.0, 0.0); 9];
                e[c] = Complex::new(1.0, 0.0);
                for (r, x) in apply_projector(&ctx, o, &e, &roots).into_iter().enumerate() {
                    mat.set(r, c, x);
                }
            }
            mat
        };
        let outcomes: Vec<[u32; 2]> = (0..3).flat_map(|a| (0..3).map(move |b| [a, b])).collect();
        let mut total = DenseMatrix::<f64>::zeros(9);
        for a in &outcomes {
            let pa = proj(a);
            assert!(pa.mul(&pa).approx_eq(&pa, 1e-9));
            assert!(pa.adjoint().approx_eq(&pa, 1e-9));
            for b in &outcomes {
                if a != b {
                    assert!(pa.mul(&proj(b)).approx_eq(&DenseMatrix::zeros(9), 1e-9));
                }
            }
            for i in 0..81 {
                total.data[i] += pa.data[i];
            }
        }
        assert!(total.approx_eq(&DenseMatrix::identity(9), 1e-9));
    }

    #[test]
    fn f32_state_is_normalized() {
        let m = Modulus::new(5).unwrap();
        let phi = ZdPoly::parse("j^2*k", m, &["j", "k"]).unwrap();
        let v = phase_state_vector::<f32>(&phi);
        assert!((norm_sqr(&v) - 1.0).abs() < f32::oracle_tol());
    }
}
