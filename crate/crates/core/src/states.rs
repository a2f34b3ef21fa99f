//! Phase-function states `|phi> = d^{-n/2} sum_j omega^{phi(j)} |j>`, the
//! diagonal gates `U_phi` that prepare them, and the normal-form reductions
//! used before deciding strong contextuality.

use serde::Serialize;

use crate::dense::{DenseMatrix, RootTable};
use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;
use crate::scalar::Real;
use crate::zmod::{Modulus, ZdPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseFunctionState {
    phi: ZdPoly,
}

impl PhaseFunctionState {
    pub fn new(phi: ZdPoly) -> Self {
        PhaseFunctionState { phi }
    }

    /// Parses the exponent polynomial (`j,k` or `x,y` for two qudits).
    pub fn parse(text: &str, modulus: Modulus, n: usize) -> Result<Self> {
        Ok(Self::new(ZdPoly::parse_auto(text, modulus, n)?))
    }

    /// `phi1 j^2 k + phi2 j k^2`.
    pub fn cubic(modulus: Modulus, phi1: u32, phi2: u32) -> Self {
        let phi = ZdPoly::from_terms(
            modulus,
            2,
            [(vec![2, 1], i64::from(phi1)), (vec![1, 2], i64::from(phi2))],
        )
        .expect("two-variable exponents");
        Self::new(phi)
    }

    pub fn modulus(&self) -> Modulus {
        self.phi.modulus()
    }

    pub fn n(&self) -> usize {
        self.phi.num_vars()
    }

    pub fn phi(&self) -> &ZdPoly {
        &self.phi
    }

    /// Values of `phi` on every ket, ket index with qudit 1 most significant.
    pub fn phase_table(&self) -> Vec<u32> {
        let m = self.modulus();
        let n = self.n();
        let dim = m.usize().pow(n as u32);
        (0..dim).map(|i| self.phi.eval_unchecked(&crate::dense::ket_digits(m, n, i))).collect()
    }

    pub fn describe(&self) -> String {
        self.phi.to_string()
    }
}

/// Decomposition `phi = phi1 j^2 k + phi2 j k^2 + (local cubics) + q(j,k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongnessReport {
    pub is_strong: bool,
    pub phi1: u32,
    pub phi2: u32,
    #[serde(serialize_with = "poly_text")]
    pub quadratic_part: ZdPoly,
    #[serde(serialize_with = "poly_text")]
    pub local_cubic_terms: ZdPoly,
}

fn poly_text<S: serde::Serializer>(p: &ZdPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn require_two_qudits(state: &PhaseFunctionState) -> Result<()> {
    if state.n() != 2 {
        return Err(Error::Unsupported(format!("expected a two-qudit state, got n = {}", state.n())));
    }
    Ok(())
}

/// Strongness predicate: no local cubic terms and `(phi1, phi2) != (0, 0)`.
///
/// Works on the function `phi` represents (exponents folded by `x^d = x`).
pub fn strongness(state: &PhaseFunctionState) -> Result<StrongnessReport> {
    require_two_qudits(state)?;
    let phi = state.phi.reduce_fermat();
    if phi.degree() > 3 {
        return Err(Error::Unsupported(format!("degree {} > 3", phi.degree())));
    }
    let quadratic_part = phi.filter_degree(|deg| deg <= 2);
    let local = ZdPoly::from_terms(
        phi.modulus(),
        2,
        [(vec![3, 0], i64::from(phi.coeff(&[3, 0]))), (vec![0, 3], i64::from(phi.coeff(&[0, 3])))],
    )?;
    let (phi1, phi2) = (phi.coeff(&[2, 1]), phi.coeff(&[1, 2]));
    Ok(StrongnessReport {
        is_strong: local.is_zero() && (phi1 != 0 || phi2 != 0),
        phi1,
        phi2,
        quadratic_part,
        local_cubic_terms: local,
    })
}

/// Removes the degree <= 2 part `q`, i.e. applies the diagonal Clifford `U_q^dagger`.
pub fn strip_quadratic(state: &PhaseFunctionState) -> PhaseFunctionState {
    PhaseFunctionState::new(state.phi.reduce_fermat().filter_degree(|deg| deg > 2))
}

/// `phi(j, k) -> phi(k, j)`.
pub fn swap_qudits(state: &PhaseFunctionState) -> Result<PhaseFunctionState> {
    require_two_qudits(state)?;
    Ok(PhaseFunctionState::new(state.phi.permute_vars(&[1, 0])))
}

/// Clifford-hierarchy level of the diagonal gate `U_phi`, read off the degree.
///
/// Cubic exponents at `d = 3` fall outside the degree characterization (it
/// needs `d > 3`) and are rejected; use [`verify_level_by_conjugation`].
pub fn diagonal_gate_level(phi: &ZdPoly) -> Result<u32> {
    let deg = phi.reduce_fermat().degree();
    match deg {
        0 | 1 => Ok(1),
        2 => Ok(2),
        3 if phi.modulus().get() > 3 => Ok(3),
        3 => Err(Error::OutsideCharacterization("cubic phase at d = 3".into())),
        _ => Err(Error::OutsideCharacterization(format!("degree {deg} > 3"))),
    }
}

/// Decides `U_phi in C_k` with dense matrices: conjugate every Weyl operator
/// and recurse until level 1, where membership means "Weyl operator up to a
/// global phase".
pub fn verify_level_by_conjugation<F: Real>(phi: &ZdPoly, claimed_level: u32) -> Result<bool> {
    let m = phi.modulus();
    let n = phi.num_vars();
    if !matches!(m.get(), 3 | 5) || n > 2 {
        return Err(Error::OracleScaleExceeded { d: m.get(), n });
    }
    let oracle = LevelOracle::<F>::new(m, n);
    let u = DenseMatrix::diagonal_phase(phi, &oracle.roots);
    Ok(oracle.in_level(&u, claimed_level))
}

/// Smallest `k <= 3` with `U_phi in C_k`, if any.
pub fn oracle_level<F: Real>(phi: &ZdPoly) -> Result<Option<u32>> {
    for k in 1..=3 {
        if verify_level_by_conjugation::<F>(phi, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

struct LevelOracle<F> {
    roots: RootTable<F>,
    weyl: Vec<(PhasePoint, DenseMatrix<F>)>,
    generators: Vec<DenseMatrix<F>>,
    tol: F,
}

impl<F: Real> LevelOracle<F> {
    fn new(m: Modulus, n: usize) -> Self {
        let roots = RootTable::new(m);
        let weyl: Vec<_> = PhasePoint::all(m, n)
            .map(|v| {
                let mat = DenseMatrix::weyl(&v, 0, &roots);
                (v, mat)
            })
            .collect();
        let mut generators = Vec::new();
        for i in 0..2 * n {
            let mut c = vec![0i64; 2 * n];
            c[i] = 1;
            let v = PhasePoint::new(m, &c).expect("unit vector");
            generators.push(DenseMatrix::weyl(&v, 0, &roots));
        }
        LevelOracle { roots, weyl, generators, tol: F::oracle_tol() }
    }

    fn is_pauli(&self, u: &DenseMatrix<F>) -> bool {
        self.weyl.iter().any(|(_, w)| u.approx_eq_up_to_phase(w, self.tol))
    }

    fn in_level(&self, u: &DenseMatrix<F>, k: u32) -> bool {
        match k {
            0 => false,
            1 => self.is_pauli(u),
            _ => {
                let ud = u.adjoint();
                let conj = |w: &DenseMatrix<F>| self.in_level(&u.mul(w).mul(&ud), k - 1);
                if k == 2 {
                    // C_1 is a group up to phase: generators suffice
                    self.generators.iter().all(conj)
                } else {
                    self.weyl.iter().all(|(_, w)| conj(w))
                }
            }
        }
    }
}
