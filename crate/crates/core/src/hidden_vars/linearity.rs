//! The additivity identities that force a hidden variable for two qudits to
//! be linear, and an exhaustive check that nothing else survives them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::phase_space::{symplectic_unchecked, PhasePoint};
use crate::zmod::Modulus;

/// `sum lambda(lhs) = sum lambda(rhs)`, each side a multiset of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub step: &'static str,
    pub lhs: Vec<PhasePoint>,
    pub rhs: Vec<PhasePoint>,
}

impl Identity {
    fn new(step: &'static str, lhs: Vec<PhasePoint>, rhs: Vec<PhasePoint>) -> Self {
        Identity { step, lhs, rhs }
    }

    fn side(m: Modulus, pts: &[PhasePoint], value: &HashMap<PhasePoint, u32>) -> Result<u32> {
        pts.iter().try_fold(0, |acc, p| {
            let v = value.get(p).ok_or_else(|| Error::IncompleteProbe(p.coords().to_vec()))?;
            Ok(m.add(acc, m.reduce(i64::from(*v))))
        })
    }

    pub fn holds(&self, m: Modulus, value: &HashMap<PhasePoint, u32>) -> Result<bool> {
        Ok(Self::side(m, &self.lhs, value)? == Self::side(m, &self.rhs, value)?)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |pts: &[PhasePoint]| pts.iter().map(|p| format!("l{p}")).collect::<Vec<_>>().join(" + ");
        write!(f, "[{}] {} = {}", self.step, join(&self.lhs), join(&self.rhs))
    }
}

fn pt(m: Modulus, c: [i64; 4]) -> PhasePoint {
    PhasePoint::new(m, &c).expect("four coordinates")
}

fn ints(v: &PhasePoint) -> [i64; 4] {
    let c = v.coords();
    [c[0], c[1], c[2], c[3]].map(i64::from)
}

/// Swaps the roles of the two qudits.
fn swap(v: &PhasePoint) -> PhasePoint {
    let c = ints(v);
    pt(v.modulus(), [c[2], c[3], c[0], c[1]])
}

/// Every identity used to show that a two-qudit hidden variable respecting
/// the commuting-product relations is linear:
///
/// * `zero`: `l(0) + l(0) = l(0)`;
/// * `multiples`: `l(a v) + l(b v) = l((a + b) v)`;
/// * `qudit-split`: `l(p1,q1,p2,q2) = l(p1,q1,0,0) + l(0,0,p2,q2)`;
/// * `isotropic-split`: `l(p1,q1,p2,q2) = l(p1,0,p2,0) + l(0,q1,0,q2)` when
///   `p1 q1 = -p2 q2`;
/// * `ancilla-*`: the chain through `(1, k/2, 1, -k/2)` giving
///   `l(1,k,0,0) = l(1,0,0,0) + l(0,k,0,0)`, and its mirror on qudit 2.
pub fn linearity_identities(m: Modulus) -> Vec<Identity> {
    let zero = PhasePoint::zero(m, 2);
    let mut out = vec![Identity::new("zero", vec![zero.clone(), zero.clone()], vec![zero])];
    let all: Vec<PhasePoint> = PhasePoint::all(m, 2).collect();
    for v in &all {
        if v.is_zero() {
            continue;
        }
        for a in m.elements() {
            for b in a..m.get() {
                out.push(Identity::new("multiples", vec![v.scale(a), v.scale(b)], vec![v.scale(m.add(a, b))]));
            }
        }
    }
    for v in &all {
        let c = ints(v);
        out.push(Identity::new(
            "qudit-split",
            vec![v.clone()],
            vec![pt(m, [c[0], c[1], 0, 0]), pt(m, [0, 0, c[2], c[3]])],
        ));
        if m.add(m.mul(v.p(0), v.q(0)), m.mul(v.p(1), v.q(1))) == 0 {
            out.push(Identity::new(
                "isotropic-split",
                vec![v.clone()],
                vec![pt(m, [c[0], 0, c[2], 0]), pt(m, [0, c[1], 0, c[3]])],
            ));
        }
    }
    let h = i64::from(m.half());
    for k in m.elements().map(i64::from) {
        let hk = h * k;
        let chain = [
            Identity::new("ancilla-shift", vec![pt(m, [1, k, 0, 0])], vec![pt(m, [1, k, 0, -hk]), pt(m, [0, 0, 0, hk])]),
            Identity::new(
                "ancilla-borrow",
                vec![pt(m, [1, k, 0, -hk])],
                vec![pt(m, [1, hk, 1, -hk]), pt(m, [0, hk, -1, 0])],
            ),
            Identity::new(
                "ancilla-expand",
                vec![pt(m, [1, hk, 1, -hk])],
                vec![pt(m, [1, 0, 0, 0]), pt(m, [0, hk, 0, 0]), pt(m, [0, 0, 1, 0]), pt(m, [0, 0, 0, -hk])],
            ),
            Identity::new("ancilla-return", vec![pt(m, [0, hk, -1, 0])], vec![pt(m, [0, hk, 0, 0]), pt(m, [0, 0, -1, 0])]),
            Identity::new("ancilla-conclusion", vec![pt(m, [1, k, 0, 0])], vec![pt(m, [1, 0, 0, 0]), pt(m, [0, k, 0, 0])]),
        ];
        for id in &chain {
            let mirror = Identity::new(id.step, id.lhs.iter().map(swap).collect(), id.rhs.iter().map(swap).collect());
            out.push(id.clone());
            out.push(mirror);
        }
    }
    out
}

/// True iff `candidate` satisfies every identity of [`linearity_identities`].
pub fn check_linearity_forcing(m: Modulus, candidate: &HashMap<PhasePoint, u32>) -> Result<bool> {
    for id in linearity_identities(m) {
        if !id.holds(m, candidate)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension over Z_d of the space of maps `l: Z_d^{2n} -> Z_d` with
/// `l(v + w) = l(v) + l(w)` for every commuting pair `v, w`.
///
/// Dense elimination over `d^{2n}` unknowns; meant for small cases.
pub fn additive_assignment_dimension(m: Modulus, n: usize) -> usize {
    let pts: Vec<PhasePoint> = PhasePoint::all(m, n).collect();
    let index: HashMap<&PhasePoint, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let size = pts.len();
    // pivot column -> row normalized to 1 at the pivot
    let mut pivots: Vec<Option<Vec<u32>>> = vec![None; size];
    let mut rank = 0;
    for (i, v) in pts.iter().enumerate() {
        for w in &pts[i..] {
            if symplectic_unchecked(m, v.coords(), w.coords()) != 0 {
                continue;
            }
            let sum = v.add(w).expect("same space");
            let mut row = vec![0u32; size];
            row[i] = m.add(row[i], 1);
            let wi = index[w];
            row[wi] = m.add(row[wi], 1);
            let si = index[&sum];
            row[si] = m.sub(row[si], 1);
            for col in 0..size {
                if row[col] == 0 {
                    continue;
                }
                match &pivots[col] {
                    Some(p) => {
                        let f = row[col];
                        for (r, &x) in row.iter_mut().zip(p).skip(col) {
                            *r = m.sub(*r, m.mul(f, x));
                        }
                    }
                    None => {
                        let inv = m.inv(row[col]).expect("nonzero");
                        for r in row.iter_mut().skip(col) {
                            *r = m.mul(*r, inv);
                        }
                        pivots[col] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
    }
    size - rank
}
