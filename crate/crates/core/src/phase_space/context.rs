use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::point::symplectic_unchecked;
use crate::phase_space::PhasePoint;
use crate::zmod::{advance, Modulus};

/// One element `sum_i c_i b_i` of a context, with its coefficients on the
/// context basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextElement {
    pub coeffs: Vec<u32>,
    pub point: PhasePoint,
}

/// A maximal isotropic subspace of Z_d^{2n}: one set of compatible
/// stabilizer measurements.
///
/// Identity (equality and hashing) is the subspace itself, via its reduced
/// row-echelon basis. `basis` is whatever generating set the context was
/// built from; joint outcomes are expressed on it.
#[derive(Clone)]
pub struct Context {
    modulus: Modulus,
    label: String,
    basis: Vec<PhasePoint>,
    canonical: Vec<Vec<u32>>,
    elements: Vec<ContextElement>,
}

impl Context {
    pub fn new(basis: Vec<PhasePoint>, label: impl Into<String>) -> Result<Context> {
        let first = basis.first().ok_or_else(|| Error::Unsupported("empty context basis".into()))?;
        let m = first.modulus();
        let n = first.n();
        for b in &basis {
            first.check_same_space(b)?;
        }
        if basis.len() != n {
            return Err(Error::Unsupported(format!(
                "a maximal isotropic subspace of Z_{m}^{} needs {n} generators, got {}",
                2 * n,
                basis.len()
            )));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                let sp = symplectic_unchecked(m, a.coords(), b.coords());
                if sp != 0 {
                    return Err(Error::NonCommuting(sp));
                }
            }
        }
        let rows: Vec<Vec<u32>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        let canonical = rref(&rows, m);
        if canonical.len() != n {
            return Err(Error::Unsupported("context generators are linearly dependent".into()));
        }
        let elements = span_elements(&basis, m);
        Ok(Context { modulus: m, label: label.into(), basis, canonical, elements })
    }

    /// Builds a context from its generators with the default `span:` label.
    pub fn from_basis(basis: Vec<PhasePoint>) -> Result<Context> {
        let mut ctx = Context::new(basis, String::new())?;
        ctx.label = span_label(&ctx.canonical);
        Ok(ctx)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis(&self) -> &[PhasePoint] {
        &self.basis
    }

    pub fn canonical_rows(&self) -> &[Vec<u32>] {
        &self.canonical
    }

    /// All `d^n` elements, coefficient tuples in odometer order.
    pub fn elements(&self) -> &[ContextElement] {
        &self.elements
    }

    pub fn contains(&self, v: &PhasePoint) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` on the context basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &PhasePoint) -> Option<&[u32]> {
        self.elements.iter().find(|e| &e.point == v).map(|e| e.coeffs.as_slice())
    }

    pub fn record(&self) -> ContextRecord {
        ContextRecord {
            modulus: self.modulus.get(),
            label: self.label.clone(),
            basis: self.basis.iter().map(|b| b.coords().to_vec()).collect(),
            canonical: self.canonical.clone(),
        }
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.canonical == other.canonical
    }
}

impl Eq for Context {}

impl Hash for Context {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.canonical.hash(state);
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context[{}]{:?}", self.label, self.basis)
    }
}

/// Serialized form of a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub modulus: u32,
    pub label: String,
    pub basis: Vec<Vec<u32>>,
    pub canonical: Vec<Vec<u32>>,
}

impl ContextRecord {
    pub fn to_context(&self) -> Result<Context> {
        let m = Modulus::new(u64::from(self.modulus))?;
        let basis = self
            .basis
            .iter()
            .map(|row| PhasePoint::new(m, &row.iter().map(|&c| i64::from(c)).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let ctx = Context::new(basis, self.label.clone())?;
        if ctx.canonical != self.canonical {
            return Err(Error::Unsupported("canonical rows do not match basis".into()));
        }
        Ok(ctx)
    }
}

fn span_label(rows: &[Vec<u32>]) -> String {
    let parts: Vec<String> = rows
        .iter()
        .map(|r| format!("({})", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("span:{}", parts.join(","))
}

fn span_elements(basis: &[PhasePoint], m: Modulus) -> Vec<ContextElement> {
    let n = basis.len();
    let dim = basis[0].coords().len();
    let mut out = Vec::with_capacity(m.usize().pow(n as u32));
    let mut coeffs = vec![0u32; n];
    loop {
        let mut acc = vec![0u32; dim];
        for (c, b) in coeffs.iter().zip(basis) {
            for (a, &x) in acc.iter_mut().zip(b.coords()) {
                *a = m.add(*a, m.mul(*c, x));
            }
        }
        out.push(ContextElement { coeffs: coeffs.clone(), point: PhasePoint::from_residues(m, acc) });
        if !advance(&mut coeffs, m) {
            break;
        }
    }
    out
}

/// Reduced row-echelon form over Z_d; zero rows are dropped.
pub fn rref(rows: &[Vec<u32>], m: Modulus) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = m.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = m.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..cols {
                    let t = m.mul(f, a[r][k]);
                    a[i][k] = m.sub(a[i][k], t);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Every maximal isotropic subspace of Z_d^{2n}, each exactly once, in
/// ascending order of reduced basis. Only `n` in {1, 2} is supported.
pub fn enumerate_contexts(m: Modulus, n: usize) -> Result<Vec<Context>> {
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("context enumeration for n = {n}")));
    }
    let dim = 2 * n;
    let mut out = Vec::new();
    for pivots in combinations(dim, n) {
        // free slots: (row, col) right of the row's pivot and not a pivot column
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| ((pivots[r] + 1)..dim).map(move |c| (r, c)))
            .filter(|(_, c)| !pivots.contains(c))
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; dim]; n];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r][c] = v;
            }
            let isotropic = (0..n).all(|i| (i + 1..n).all(|j| symplectic_unchecked(m, &rows[i], &rows[j]) == 0));
            if isotropic {
                let basis = rows.into_iter().map(|r| PhasePoint::from_residues(m, r)).collect();
                out.push(Context::from_basis(basis)?);
            }
            if free.is_empty() || !advance(&mut vals, m) {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The three two-qudit context families used in the strong-contextuality
/// argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Table1Kind {
    /// `Z x I` and `I x Z^alpha X`
    I { alpha: u32 },
    /// `I x Z` and `Z^alpha X x I`
    II { alpha: u32 },
    /// `Z x Z^beta` and `X x Z^alpha X^{-1/beta}`, `beta != 0`
    III { alpha: u32, beta: u32 },
}

impl Table1Kind {
    /// The two generating phase points, phases taken as zero.
    pub fn generators(&self, m: Modulus) -> Result<[PhasePoint; 2]> {
        let (a, b) = match *self {
            Table1Kind::I { alpha } => ([1, 0, 0, 0], [0, 0, i64::from(alpha), 1]),
            Table1Kind::II { alpha } => ([0, 0, 1, 0], [i64::from(alpha), 1, 0, 0]),
            Table1Kind::III { alpha, beta } => {
                let binv = m.inv(beta)?;
                ([1, 0, i64::from(beta), 0], [0, 1, i64::from(alpha), -i64::from(binv)])
            }
        };
        Ok([PhasePoint::new(m, &a)?, PhasePoint::new(m, &b)?])
    }

    pub fn context(&self, m: Modulus) -> Result<Context> {
        Context::new(self.generators(m)?.to_vec(), self.to_string())
    }
}

impl fmt::Display for Table1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1Kind::I { alpha } => write!(f, "I:alpha={alpha}"),
            Table1Kind::II { alpha } => write!(f, "II:alpha={alpha}"),
            Table1Kind::III { alpha, beta } => write!(f, "III:alpha={alpha},beta={beta}"),
        }
    }
}

/// The `d(d+1)` contexts of families I, II and III, in the fixed order
/// I (alpha ascending), II (alpha ascending), III (alpha, then beta ascending).
pub fn table1_contexts(m: Modulus) -> Vec<(Table1Kind, Context)> {
    let d = m.get();
    let kinds = (0..d)
        .map(|alpha| Table1Kind::I { alpha })
        .chain((0..d).map(|alpha| Table1Kind::II { alpha }))
        .chain((0..d).flat_map(|alpha| (1..d).map(move |beta| Table1Kind::III { alpha, beta })));
    kinds
        .map(|k| {
            let ctx = k.context(m).expect("family generators are isotropic and independent");
            (k, ctx)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashSet};

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    /// Brute force: all pairwise-orthogonal independent pairs, spanned as
    /// explicit point sets.
    fn brute_force_count(m: Modulus, n: usize) -> usize {
        let pts: Vec<PhasePoint> = PhasePoint::all(m, n).filter(|p| !p.is_zero()).collect();
        let mut seen: HashSet<BTreeSet<Vec<u32>>> = HashSet::new();
        let span = |gens: &[&PhasePoint]| -> BTreeSet<Vec<u32>> {
            let mut set = BTreeSet::new();
            let mut c = vec![0u32; gens.len()];
            loop {
                let mut acc = PhasePoint::zero(m, n);
                for (ci, g) in c.iter().zip(gens) {
                    acc = acc.add(&g.scale(*ci)).unwrap();
                }
                set.insert(acc.coords().to_vec());
                if !advance(&mut c, m) {
                    break;
                }
            }
            set
        };
        let size = m.usize().pow(n as u32);
        if n == 1 {
            for p in &pts {
                seen.insert(span(&[p]));
            }
        } else {
            for a in &pts {
                for b in &pts {
                    if symplectic_unchecked(m, a.coords(), b.coords()) == 0 {
                        let s = span(&[a, b]);
                        if s.len() == size {
                            seen.insert(s);
                        }
                    }
                }
            }
        }
        seen.len()
    }

    #[test]
    fn counts_match_brute_force() {
        assert_eq!(brute_force_count(m(3), 1), 4);
        assert_eq!(enumerate_contexts(m(3), 1).unwrap().len(), 4);
        assert_eq!(brute_force_count(m(3), 2), 40);
        assert_eq!(enumerate_contexts(m(3), 2).unwrap().len(), 40);
        assert_eq!(brute_force_count(m(5), 2), 156);
        assert_eq!(enumerate_contexts(m(5), 2).unwrap().len(), 156);
        assert_eq!(enumerate_contexts(m(7), 2).unwrap().len(), 50 * 8);
    }

    #[test]
    fn enumerated_contexts_are_isotropic_and_distinct() {
        let ctxs = enumerate_contexts(m(5), 2).unwrap();
        let unique: HashSet<&Context> = ctxs.iter().collect();
        assert_eq!(unique.len(), ctxs.len());
        for c in &ctxs {
            for a in c.elements() {
                for b in c.elements() {
                    assert_eq!(symplectic_unchecked(m(5), a.point.coords(), b.point.coords()), 0);
                }
            }
        }
        // distinct maximal subspaces meet in a proper subspace
        for (i, a) in ctxs.iter().enumerate().step_by(7) {
            for b in &ctxs[i + 1..] {
                let shared = a.elements().iter().filter(|e| b.contains(&e.point)).count();
                assert!(shared < 25);
            }
        }
    }

    #[test]
    fn enumerate_rejects_large_n() {
        assert!(matches!(enumerate_contexts(m(3), 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn table1_families() {
        let t = table1_contexts(m(5));
        assert_eq!(t.len(), 30);
        let all: HashSet<Context> = enumerate_contexts(m(5), 2).unwrap().into_iter().collect();
        for (kind, ctx) in &t {
            let [a, b] = kind.generators(m(5)).unwrap();
            assert_eq!(crate::phase_space::symplectic_product(&a, &b), Ok(0));
            assert!(all.contains(ctx), "{kind} missing from the enumeration");
        }
        let distinct: HashSet<&Context> = t.iter().map(|(_, c)| c).collect();
        assert_eq!(distinct.len(), 30);
        assert_eq!(t[0].0.to_string(), "I:alpha=0");
        assert_eq!(t[29].0.to_string(), "III:alpha=4,beta=4");
        let all3: HashSet<Context> = enumerate_contexts(m(3), 2).unwrap().into_iter().collect();
        assert!(table1_contexts(m(3)).iter().all(|(_, c)| all3.contains(c)));
    }

    #[test]
    fn context_rejects_bad_generators() {
        let p = |c: &[i64]| PhasePoint::new(m(5), c).unwrap();
        assert!(matches!(
            Context::new(vec![p(&[0, 1, 0, 0]), p(&[1, 0, 0, 0])], "x"),
            Err(Error::NonCommuting(_))
        ));
        assert!(Context::new(vec![p(&[1, 0, 0, 0]), p(&[2, 0, 0, 0])], "x").is_err());
        assert!(Context::new(vec![p(&[1, 0, 0, 0])], "x").is_err());
    }

    #[test]
    fn record_roundtrip() {
        let ctx = Table1Kind::III { alpha: 1, beta: 3 }.context(m(5)).unwrap();
        let rec = ctx.record();
        assert_eq!(rec.label, "III:alpha=1,beta=3");
        let json = serde_json::to_string(&rec).unwrap();
        let back: ContextRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_context().unwrap(), ctx);
    }
}
