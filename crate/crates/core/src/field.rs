//! Exact coefficients: the rationals and the cyclotomic extension `Q(w)`,
//! `w^2 + w + 1 = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    /// The rational numbers.
    #[serde(rename = "Q")]
    Q,
    /// `Q(w)` with `w` a primitive cube root of unity.
    #[serde(rename = "Qw")]
    QOmega,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Q => "Q",
            Field::QOmega => "Qw",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "Q" | "q" => Some(Field::Q),
            "Qw" | "qw" | "QW" | "Qomega" | "QOmega" => Some(Field::QOmega),
            _ => None,
        }
    }

    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }

    pub fn contains(self, c: &FieldElem) -> bool {
        self == Field::QOmega || c.is_rational()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `re + om * w` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    re: BigRational,
    om: BigRational,
}

impl Default for FieldElem {
    fn default() -> Self {
        FieldElem::zero()
    }
}

impl FieldElem {
    pub fn new(re: BigRational, om: BigRational) -> Self {
        FieldElem { re, om }
    }

    pub fn zero() -> Self {
        FieldElem { re: BigRational::zero(), om: BigRational::zero() }
    }

    pub fn one() -> Self {
        FieldElem::from_int(1)
    }

    pub fn omega() -> Self {
        FieldElem { re: BigRational::zero(), om: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        FieldElem::rational(BigRational::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        FieldElem::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(re: BigRational) -> Self {
        FieldElem { re, om: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn om(&self) -> &BigRational {
        &self.om
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.om.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.om.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.om.is_zero()
    }

    /// Rational value, if the `w` part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.re)
    }

    /// Small integer value, if any.
    pub fn as_i64(&self) -> Option<i64> {
        if self.is_rational() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Field norm `a^2 - ab + b^2` of `a + bw`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.om + &self.om * &self.om
    }

    /// Galois conjugate `a + b w^2 = (a - b) - b w`.
    pub fn conj(&self) -> FieldElem {
        FieldElem { re: &self.re - &self.om, om: -&self.om }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        if self.om.is_zero() {
            return Some(FieldElem::rational(self.re.recip()));
        }
        let n = self.norm();
        let c = self.conj();
        Some(FieldElem { re: c.re / &n, om: c.om / n })
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = FieldElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest bit length among the numerators and denominators.
    pub fn bits(&self) -> u64 {
        [self.re.numer(), self.re.denom(), self.om.numer(), self.om.denom()]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }

    /// Exact rational square root, when it exists.
    pub fn rational_sqrt(&self) -> Option<FieldElem> {
        let q = self.as_rational()?;
        if q.is_negative() {
            return None;
        }
        let n = q.numer().sqrt();
        let d = q.denom().sqrt();
        if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
            Some(FieldElem::rational(BigRational::new(n, d)))
        } else {
            None
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    /// Grammar-compatible rendering: `3`, `-1/2`, `2*w`, `(1-w)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.om.is_zero() {
            return write_rational(f, &self.re);
        }
        let write_w = |f: &mut fmt::Formatter<'_>, q: &BigRational, leading: bool| -> fmt::Result {
            if q.is_one() {
                f.write_str(if leading { "w" } else { "+w" })
            } else if (-q).is_one() {
                f.write_str("-w")
            } else {
                if !leading && q.is_positive() {
                    f.write_str("+")?;
                }
                write_rational(f, q)?;
                f.write_str("*w")
            }
        };
        if self.re.is_zero() {
            return write_w(f, &self.om, true);
        }
        f.write_str("(")?;
        write_rational(f, &self.re)?;
        write_w(f, &self.om, false)?;
        f.write_str(")")
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<BigRational> for FieldElem {
    fn from(q: BigRational) -> Self {
        FieldElem::rational(q)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { re: &self.re + &rhs.re, om: &self.om + &rhs.om }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { re: &self.re - &rhs.re, om: &self.om - &rhs.om }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        if self.om.is_zero() && rhs.om.is_zero() {
            return FieldElem::rational(&self.re * &rhs.re);
        }
        // (a + bw)(c + dw) = ac - bd + (ad + bc - bd) w
        let bd = &self.om * &rhs.om;
        FieldElem {
            re: &self.re * &rhs.re - &bd,
            om: &self.re * &rhs.om + &self.om * &rhs.re - bd,
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv().expect("division by zero in field")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { re: -&self.re, om: -&self.om }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { re: -self.re, om: -self.om }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        self.re += &rhs.re;
        self.om += &rhs.om;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        self.re -= &rhs.re;
        self.om -= &rhs.om;
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, rhs: &FieldElem) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_primitive_cube_root() {
        let w = FieldElem::omega();
        let w2 = &w * &w;
        let s = &(&w2 + &w) + &FieldElem::one();
        assert!(s.is_zero());
        assert_eq!(w.pow(3), FieldElem::one());
        assert!(!w.is_one());
    }

    #[test]
    fn inverse_in_extension() {
        let a = FieldElem::new(BigRational::from_integer(3.into()), BigRational::new(BigInt::from(-2), BigInt::from(5)));
        let prod = &a * &a.inv().unwrap();
        assert!(prod.is_one());
        assert!(FieldElem::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(FieldElem::frac(-1, 2).to_string(), "-1/2");
        assert_eq!(FieldElem::omega().to_string(), "w");
        assert_eq!((-FieldElem::omega()).to_string(), "-w");
        let a = &FieldElem::one() - &(&FieldElem::from_int(3) * &FieldElem::omega());
        assert_eq!(a.to_string(), "(1-3*w)");
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(FieldElem::frac(9, 4).rational_sqrt(), Some(FieldElem::frac(3, 2)));
        assert_eq!(FieldElem::from_int(2).rational_sqrt(), None);
        assert_eq!(FieldElem::from_int(-4).rational_sqrt(), None);
    }
}
