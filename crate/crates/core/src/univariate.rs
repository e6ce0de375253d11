//! Dense univariate polynomials over the coefficient field.

use crate::field::FieldElem;
use crate::poly::{Monomial, Poly};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> UPoly {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Dehomogenizes a binary form in `(s, t)` at `s = 1`.
    pub fn from_binary_form(f: &Poly) -> UPoly {
        assert_eq!(f.nvars(), 2);
        let deg = f.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![FieldElem::zero(); deg + 1];
        for (m, c) in f.terms() {
            coeffs[m.exp(1) as usize] += c;
        }
        UPoly::new(coeffs)
    }

    /// Homogenizes back to a binary form in `(s, t)`.
    pub fn to_binary_form(&self, field: crate::field::Field) -> Poly {
        let d = self.degree().unwrap_or(0);
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::from_exps(&[(d - k) as u32, k as u32]).expect("small exponents"), c.clone()));
        Poly::from_terms(2, field, terms).expect("binary form")
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::zero(), |acc, c| &(&acc * t) + c)
    }

    /// Removes the largest power of `t` dividing the polynomial; returns it.
    pub fn strip_t_power(&self) -> (usize, UPoly) {
        let m = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (m, UPoly::new(self.coeffs[m.min(self.coeffs.len())..].to_vec()))
    }

    pub fn monic(&self) -> UPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                UPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] * &lc_inv;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = &r[idx] - &(&q * c);
                }
            }
            r.pop();
            while r.last().is_some_and(FieldElem::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Rational roots when the degree is at most 2, or `None` when the
    /// roots are not in the field of the coefficients.
    pub fn small_degree_roots(&self) -> Option<Vec<FieldElem>> {
        match self.degree()? {
            0 => Some(Vec::new()),
            1 => Some(vec![-(&self.coeffs[0] / &self.coeffs[1])]),
            2 => {
                let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
                let disc = &(b * b) - &(&FieldElem::from_int(4) * &(a * c));
                let s = disc.rational_sqrt()?;
                let two_a = &FieldElem::from_int(2) * a;
                let nb = -b;
                Some(vec![&(&nb + &s) / &two_a, &(&nb - &s) / &two_a])
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| FieldElem::from_int(x)).collect())
    }

    #[test]
    fn gcd_of_products() {
        // (t - 1)(t + 2) and (t - 1)(t - 3)
        let a = up(&[-2, 1, 1]);
        let b = up(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        assert_eq!(up(&[1, 1]).gcd(&up(&[2, 1])), up(&[1]));
    }

    #[test]
    fn roots() {
        let r = up(&[-6, 1, 1]).small_degree_roots().unwrap();
        assert!(r.contains(&FieldElem::from_int(2)) && r.contains(&FieldElem::from_int(-3)));
        assert!(up(&[-2, 0, 1]).small_degree_roots().is_none());
        let (m, q) = up(&[0, 0, 5, 1]).strip_t_power();
        assert_eq!((m, q), (2, up(&[5, 1])));
    }
}
