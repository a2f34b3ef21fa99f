use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::zmod::Modulus;

/// Exponent tuple of a monomial, one entry per variable.
pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial over Z_d.
///
/// Zero coefficients are never stored. Exponents are kept exactly as built;
/// call [`ZdPoly::reduce_fermat`] to fold `x^d = x` when the polynomial is
/// only needed as a function on Z_d^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZdPoly {
    modulus: Modulus,
    num_vars: usize,
    terms: BTreeMap<Exponents, u32>,
}

impl ZdPoly {
    pub fn zero(modulus: Modulus, num_vars: usize) -> Self {
        assert!(num_vars >= 1, "polynomials need at least one variable");
        ZdPoly { modulus, num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(modulus: Modulus, num_vars: usize, c: i64) -> Self {
        let mut p = Self::zero(modulus, num_vars);
        p.add_term(vec![0; num_vars], modulus.reduce(c));
        p
    }

    /// The polynomial `x_i`.
    pub fn var(modulus: Modulus, num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars);
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(modulus, e, 1)
    }

    pub fn monomial(modulus: Modulus, exps: Exponents, coeff: i64) -> Self {
        let mut p = Self::zero(modulus, exps.len());
        p.add_term(exps, modulus.reduce(coeff));
        p
    }

    pub fn from_terms<I>(modulus: Modulus, num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, i64)>,
    {
        let mut p = Self::zero(modulus, num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::ArityMismatch { expected: num_vars, found: e.len() });
            }
            p.add_term(e, modulus.reduce(c));
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, c: u32) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = m.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u32)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Keeps only the terms whose total degree satisfies `keep`.
    pub fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| keep(e.iter().sum()))
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        ZdPoly { modulus: self.modulus, num_vars: self.num_vars, terms }
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&vec![0; self.num_vars])
    }

    pub fn without_constant(&self) -> Self {
        self.filter_degree(|deg| deg > 0)
    }

    /// Folds every exponent `e >= d` via `x^d = x`, giving the canonical
    /// representative of the polynomial function on Z_d^n.
    pub fn reduce_fermat(&self) -> Self {
        let d = self.modulus.get();
        let mut out = Self::zero(self.modulus, self.num_vars);
        for (e, &c) in &self.terms {
            let folded = e
                .iter()
                .map(|&x| if x >= d { (x - 1) % (d - 1) + 1 } else { x })
                .collect();
            out.add_term(folded, c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.modulus.reduce(c);
        let mut out = Self::zero(self.modulus, self.num_vars);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), self.modulus.mul(v, c));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(self.modulus, self.num_vars, 1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a point of Z_d^num_vars.
    pub fn eval(&self, point: &[u32]) -> Result<u32> {
        if point.len() != self.num_vars {
            return Err(Error::ArityMismatch { expected: self.num_vars, found: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[u32]) -> u32 {
        let m = self.modulus;
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = m.mul(t, m.pow(x, u64::from(k)));
                }
            }
            acc = m.add(acc, t);
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share a
    /// modulus and variable count, which becomes that of the result.
    pub fn substitute(&self, subs: &[ZdPoly]) -> Result<Self> {
        if subs.len() != self.num_vars {
            return Err(Error::ArityMismatch { expected: self.num_vars, found: subs.len() });
        }
        let nv = subs[0].num_vars;
        if subs.iter().any(|s| s.num_vars != nv || s.modulus != self.modulus) {
            return Err(Error::DimensionMismatch("substitutes disagree on variables or modulus".into()));
        }
        let mut out = Self::zero(self.modulus, nv);
        for (e, &c) in &self.terms {
            let mut t = Self::constant(self.modulus, nv, i64::from(c));
            for (s, &k) in subs.iter().zip(e) {
                if k > 0 {
                    t = &t * &s.pow(k);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.num_vars);
        let mut out = Self::zero(self.modulus, self.num_vars);
        for (e, &c) in &self.terms {
            let mut ne = vec![0; self.num_vars];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] = k;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Canonical text form using the given variable names.
    ///
    /// Terms are ordered by descending total degree, then by descending
    /// exponent tuple, so `2*j^2*k + 4*j*k^2 + 1` prints back unchanged.
    pub fn to_text(&self, names: &[&str]) -> String {
        assert!(names.len() >= self.num_vars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Exponents, u32)> = self.terms().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut parts = Vec::with_capacity(ordered.len());
        for (e, c) in ordered {
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if c != 1 || is_const {
                factors.push(c.to_string());
            }
            for (name, &k) in names.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    pub fn default_names(num_vars: usize) -> Vec<String> {
        match num_vars {
            1 => vec!["x".into()],
            2 => vec!["j".into(), "k".into()],
            _ => (1..=num_vars).map(|i| format!("j{i}")).collect(),
        }
    }

    fn binary(&self, other: &Self, what: &str) {
        assert!(
            self.modulus == other.modulus && self.num_vars == other.num_vars,
            "{what} of polynomials over different rings"
        );
    }
}

impl fmt::Display for ZdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Self::default_names(self.num_vars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_text(&refs))
    }
}

impl fmt::Debug for ZdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZdPoly[d={}]({})", self.modulus, self)
    }
}

impl Add for &ZdPoly {
    type Output = ZdPoly;
    fn add(self, rhs: &ZdPoly) -> ZdPoly {
        self.binary(rhs, "sum");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &ZdPoly {
    type Output = ZdPoly;
    fn sub(self, rhs: &ZdPoly) -> ZdPoly {
        self + &(-rhs)
    }
}

impl Neg for &ZdPoly {
    type Output = ZdPoly;
    fn neg(self) -> ZdPoly {
        self.scale(-1)
    }
}

impl Mul for &ZdPoly {
    type Output = ZdPoly;
    fn mul(self, rhs: &ZdPoly) -> ZdPoly {
        self.binary(rhs, "product");
        let m = self.modulus;
        let mut out = ZdPoly::zero(m, self.num_vars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, m.mul(ca, cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ZdPoly {
            type Output = ZdPoly;
            fn $f(self, rhs: ZdPoly) -> ZdPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = ZdPoly::monomial(m(3), vec![2, 1], 1);
        assert_eq!(p.eval(&[2, 2]), Ok(2));
        assert_eq!(ZdPoly::zero(m(3), 2).eval(&[1, 2]), Ok(0));
        let cube = ZdPoly::monomial(m(5), vec![3], 1);
        assert_eq!(cube.eval(&[2]), Ok(3));
        assert_eq!(
            cube.eval(&[1, 2]),
            Err(Error::ArityMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let d = m(5);
        let x = ZdPoly::var(d, 1, 0);
        let p = &x.scale(3) + &x.scale(2);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn fermat_reduction_preserves_values() {
        let d = m(3);
        let p = ZdPoly::from_terms(d, 2, [(vec![5, 3], 1), (vec![3, 0], 2), (vec![1, 0], 1)]).unwrap();
        let r = p.reduce_fermat();
        assert_eq!(r.to_text(&["j", "k"]), "j*k");
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(p.eval(&[a, b]), r.eval(&[a, b]));
            }
        }
    }

    #[test]
    fn substitution_matches_pointwise_eval() {
        let d = m(7);
        let phi = ZdPoly::from_terms(d, 2, [(vec![2, 1], 3), (vec![1, 2], 5), (vec![0, 0], 1)]).unwrap();
        let x = ZdPoly::var(d, 2, 0);
        let y = ZdPoly::var(d, 2, 1);
        let a = &x + &y.scale(2);
        let b = &ZdPoly::constant(d, 2, 4) - &x;
        let s = phi.substitute(&[a, b]).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                let pa = (u + 2 * v) % 7;
                let pb = (4 + 7 - u) % 7;
                assert_eq!(s.eval(&[u, v]).unwrap(), phi.eval(&[pa, pb]).unwrap());
            }
        }
    }

    #[test]
    fn canonical_text() {
        let d = m(5);
        let p = ZdPoly::from_terms(d, 2, [(vec![0, 0], 1), (vec![1, 2], 4), (vec![2, 1], 2)]).unwrap();
        assert_eq!(p.to_string(), "2*j^2*k + 4*j*k^2 + 1");
        assert_eq!(ZdPoly::zero(d, 2).to_string(), "0");
        assert_eq!(p.to_text(&["x", "y"]), "2*x^2*y + 4*x*y^2 + 1");
    }
}
