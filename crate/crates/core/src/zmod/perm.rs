use serde::Serialize;

use crate::error::{Error, Result};
use crate::zmod::{Modulus, ZdPoly};

/// Exhaustive test: every value of Z_d is hit exactly `d^(n-1)` times on Z_d^n.
pub fn is_permutation_polynomial(p: &ZdPoly) -> bool {
    let m = p.modulus();
    let d = m.usize();
    let n = p.num_vars();
    let target = d.pow(n as u32 - 1);
    let mut hist = vec![0usize; d];
    let mut point = vec![0u32; n];
    loop {
        let v = p.eval_unchecked(&point) as usize;
        hist[v] += 1;
        if hist[v] > target {
            return false;
        }
        if !advance(&mut point, m) {
            break;
        }
    }
    true
}

/// Odometer increment over Z_d^n; returns false after the last point.
pub(crate) fn advance(point: &mut [u32], m: Modulus) -> bool {
    for slot in point.iter_mut().rev() {
        *slot += 1;
        if *slot < m.get() {
            return true;
        }
        *slot = 0;
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DicksonShape {
    /// g(x) = x
    Linear,
    /// g(x) = x^3
    Cubic,
}

/// `a * g(x + b) + c` with `a != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DicksonNormalForm {
    pub a: u32,
    pub g: DicksonShape,
    pub b: u32,
    pub c: u32,
}

impl DicksonNormalForm {
    pub fn eval(&self, x: u32, m: Modulus) -> u32 {
        let t = m.add(x, self.b);
        let g = match self.g {
            DicksonShape::Linear => t,
            DicksonShape::Cubic => m.pow(t, 3),
        };
        m.add(m.mul(self.a, g), self.c)
    }

    pub fn to_poly(&self, m: Modulus) -> ZdPoly {
        let x = ZdPoly::var(m, 1, 0);
        let shifted = &x + &ZdPoly::constant(m, 1, i64::from(self.b));
        let g = match self.g {
            DicksonShape::Linear => shifted,
            DicksonShape::Cubic => shifted.pow(3),
        };
        &g.scale(i64::from(self.a)) + &ZdPoly::constant(m, 1, i64::from(self.c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DicksonClassification {
    pub is_permutation: bool,
    pub normal_form: Option<DicksonNormalForm>,
}

/// Classifies a one-variable polynomial of degree at most 3 using Dickson's
/// normal form, valid when `d != 1 (mod 3)`.
///
/// The polynomial is first folded with `x^d = x`, so at `d = 3` a cubic
/// collapses to its degree-2 representative and is classified as such.
pub fn dickson_classify(p: &ZdPoly) -> Result<DicksonClassification> {
    let m = p.modulus();
    let d = m.get();
    if d % 3 == 1 {
        return Err(Error::UnsupportedModulus(d));
    }
    if p.num_vars() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: p.num_vars() });
    }
    let f = p.reduce_fermat();
    if f.degree() > 3 {
        return Err(Error::Unsupported(format!("degree {} > 3", f.degree())));
    }
    let [c0, c1, c2, c3] = [0u32, 1, 2, 3].map(|k| f.coeff(&[k]));
    let not_perm = DicksonClassification { is_permutation: false, normal_form: None };
    let perm = |nf| DicksonClassification { is_permutation: true, normal_form: Some(nf) };
    Ok(match f.degree() {
        0 => not_perm,
        1 => perm(DicksonNormalForm { a: c1, g: DicksonShape::Linear, b: 0, c: c0 }),
        // a * g(x + b) + c never has degree exactly 2
        2 => not_perm,
        _ => {
            // d > 3 here: a(x+b)^3 + c = a x^3 + 3ab x^2 + 3ab^2 x + ab^3 + c
            let three_a = m.mul(3, c3);
            let b = m.mul(c2, m.inv(three_a)?);
            if m.mul(three_a, m.mul(b, b)) != c1 {
                not_perm
            } else {
                let c = m.sub(c0, m.mul(c3, m.pow(b, 3)));
                perm(DicksonNormalForm { a: c3, g: DicksonShape::Cubic, b, c })
            }
        }
    })
}
