use num_complex::Complex;
use serde::Serialize;

use crate::dense::RootTable;
use crate::scalar::Real;
use crate::zmod::Modulus;

/// A sum of d-th roots of unity, stored as multiplicities: `counts[t]` is the
/// number of copies of `omega^t`.
///
/// For prime d the only integer relation among `1, omega, ..., omega^{d-1}`
/// is that all of them sum to zero, so a nonnegative combination vanishes
/// exactly when every multiplicity is the same.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootMultiset {
    #[serde(skip)]
    modulus: Modulus,
    counts: Vec<u64>,
}

impl RootMultiset {
    pub fn new(modulus: Modulus) -> Self {
        RootMultiset { modulus, counts: vec![0; modulus.usize()] }
    }

    #[inline]
    pub fn push(&mut self, exponent: u32) {
        self.counts[exponent as usize] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_zero_sum(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    pub fn merge(&mut self, other: &RootMultiset) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Numeric value of the sum; advisory only.
    pub fn value<F: Real>(&self, roots: &RootTable<F>) -> Complex<F> {
        roots.weighted_sum(&self.counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_counts_vanish() {
        let m = Modulus::new(5).unwrap();
        let roots = RootTable::<f64>::new(m);
        let mut r = RootMultiset::new(m);
        assert!(r.is_zero_sum());
        for t in 0..5 {
            r.push(t);
            r.push(t);
        }
        assert!(r.is_zero_sum());
        assert!(r.value(&roots).norm() < 1e-12);
        r.push(3);
        assert!(!r.is_zero_sum());
        assert!((r.value(&roots) - roots.pow(3)).norm() < 1e-12);
        assert_eq!(r.total(), 11);
    }
}
