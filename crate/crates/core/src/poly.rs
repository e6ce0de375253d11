//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept sorted in descending graded-lexicographic order with
//! `x0 > x1 > ... `, and zero coefficients are never stored, so structural
//! equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{Field, FieldElem};

/// Hard bound on the number of variables of any polynomial.
pub const MAX_VARS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("exponent exceeds 255")]
    ExponentOverflow,
    #[error("coefficient {0} does not lie in Q")]
    CoefficientNotInField(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is zero")]
    Zero,
}

/// Exponent vector. Ordering is graded lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: [u8; MAX_VARS],
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { deg: 0, exps: [0; MAX_VARS] }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).map_err(|_| PolyError::ExponentOverflow)?;
            m.deg += e;
        }
        Ok(m)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, nvars: usize) -> &[u8] {
        &self.exps[..nvars]
    }

    /// Index of the last variable with a nonzero exponent, plus one.
    pub fn support_len(&self) -> usize {
        self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].checked_add(other.exps[i]).expect("exponent overflow");
        }
        out.deg += other.deg;
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = *other;
        for i in 0..MAX_VARS {
            out.exps[i] -= self.exps[i];
        }
        out.deg -= self.deg;
        out
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut out = *self;
        out.deg = out.deg - out.exps[i] as u32 + e;
        out.exps[i] = e as u8;
        out
    }

    /// Weighted degree `sum w_i e_i`.
    pub fn weight(&self, w: &[i64]) -> i64 {
        w.iter().zip(self.exps.iter()).map(|(wi, &e)| wi * e as i64).sum()
    }
}

/// All monomials of total degree `deg` in `nvars` variables, descending.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u32], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial::from_exps(cur).expect("exponent fits"));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, nvars, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    rec(0, nvars, deg, &mut cur, &mut out);
    out
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn monomial_count(nvars: usize, deg: u32) -> u128 {
    // C(nvars - 1 + deg, deg)
    if nvars == 0 {
        return u128::from(deg == 0);
    }
    let n = (nvars - 1) as u128;
    let mut acc: u128 = 1;
    for k in 1..=deg as u128 {
        acc = acc * (n + k) / k;
    }
    acc
}

/// Sparse polynomial in `nvars` variables over `field`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    field: Field,
    terms: Vec<(Monomial, FieldElem)>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}; {}]({})", self.nvars, self.field, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr_io::print_poly(self))
    }
}

fn check_nvars(nvars: usize) -> Result<(), PolyError> {
    if nvars > MAX_VARS {
        Err(PolyError::TooManyVariables(nvars))
    } else {
        Ok(())
    }
}

impl Poly {
    pub fn zero(nvars: usize, field: Field) -> Poly {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly { nvars, field, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, field: Field, c: FieldElem) -> Poly {
        let mut p = Poly::zero(nvars, field);
        if !c.is_zero() {
            p.terms.push((Monomial::one(), c));
        }
        p
    }

    pub fn one(nvars: usize, field: Field) -> Poly {
        Poly::constant(nvars, field, FieldElem::one())
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Poly {
        assert!(i < nvars, "variable x{i} out of range");
        Poly { nvars, field, terms: vec![(Monomial::var(i), FieldElem::one())] }
    }

    pub fn monomial(nvars: usize, field: Field, m: Monomial, c: FieldElem) -> Poly {
        let mut p = Poly::zero(nvars, field);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, field: Field, terms: I) -> Result<Poly, PolyError>
    where
        I: IntoIterator<Item = (Monomial, FieldElem)>,
    {
        check_nvars(nvars)?;
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::new();
        for (m, c) in terms {
            if m.support_len() > nvars {
                return Err(PolyError::VariableOutOfRange { index: m.support_len() - 1, nvars });
            }
            if !field.contains(&c) {
                return Err(PolyError::CoefficientNotInField(c.to_string()));
            }
            *acc.entry(m).or_default() += &c;
        }
        Ok(Poly::from_map(nvars, field, acc))
    }

    fn from_map(nvars: usize, field: Field, acc: HashMap<Monomial, FieldElem>) -> Poly {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars, field, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Same polynomial viewed over a larger field.
    pub fn with_field(mut self, field: Field) -> Poly {
        assert!(field >= self.field || self.terms.iter().all(|(_, c)| c.is_rational()));
        self.field = field;
        self
    }

    /// Same polynomial with extra trailing variables.
    pub fn with_nvars(mut self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        self.nvars = nvars;
        self
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.deg == 0)
    }

    pub fn leading_term(&self) -> Option<&(Monomial, FieldElem)> {
        self.terms.first()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.deg)
    }

    /// Common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.terms.iter().all(|(m, _)| m.deg == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Homogeneous of weight `w`: every term has the same weighted degree.
    pub fn weighted_degree(&self, w: &[i64]) -> Option<i64> {
        let first = self.terms.first()?.0.weight(w);
        self.terms.iter().all(|(m, _)| m.weight(w) == first).then_some(first)
    }

    fn compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch { left: self.field, right: other.field });
        }
        Ok(())
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    terms.push((*m, if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { a - b } else { a + b };
                    if !c.is_zero() {
                        terms.push((*m, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.nvars, self.field));
        }
        if other.terms.len() == 1 {
            return Ok(self.mul_term(&other.terms[0].0, &other.terms[0].1));
        }
        if self.terms.len() == 1 {
            return Ok(other.mul_term(&self.terms[0].0, &self.terms[0].1));
        }
        let mut acc: HashMap<Monomial, FieldElem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += &prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Ok(Poly::from_map(self.nvars, self.field, acc))
    }

    /// Multiplies by a single term; order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        assert!(self.field.contains(c), "scalar outside the coefficient field");
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Poly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars, self.field);
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

    /// Partial derivative with respect to `x_i`.
    pub fn diff(&self, i: usize) -> Poly {
        assert!(i < self.nvars, "variable x{i} out of range");
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[i] > 0)
            .map(|(m, c)| {
                let e = m.exps[i] as u32;
                (m.with_exp(i, e - 1), c * &FieldElem::from_int(e as i64))
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.diff(i)).collect()
    }

    /// Exact value at a point.
    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let powers = power_table(point, self.max_exponents());
        let mut acc = FieldElem::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps[..self.nvars].iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.nvars];
        for (m, _) in &self.terms {
            for (o, &e) in out.iter_mut().zip(m.exps.iter()) {
                *o = (*o).max(e as u32);
            }
        }
        out
    }

    /// Substitutes `x_i -> subs[i]`; all substitutes share variable count and field.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars, "substitution arity mismatch");
        let (nv, field) = subs
            .first()
            .map(|s| (s.nvars, s.field.join(self.field)))
            .unwrap_or((0, self.field));
        let maxe = self.max_exponents();
        let mut cache: Vec<Vec<Poly>> = subs
            .iter()
            .map(|s| vec![Poly::one(nv, field), s.clone().with_field(field)])
            .collect();
        for (i, &e) in maxe.iter().enumerate() {
            while cache[i].len() <= e as usize {
                let next = &cache[i][cache[i].len() - 1] * &cache[i][1];
                cache[i].push(next);
            }
        }
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nv, field, c.clone());
            for i in 0..self.nvars {
                let e = m.exps[i] as usize;
                if e > 0 {
                    t = &t * &cache[i][e];
                }
            }
            for (tm, tc) in t.terms {
                *acc.entry(tm).or_default() += &tc;
            }
        }
        Poly::from_map(nv, field, acc)
    }

    /// `f(s p + t q)` as a binary form in `(s, t)`.
    pub fn restrict_to_line(&self, p: &[FieldElem], q: &[FieldElem]) -> Poly {
        assert_eq!(p.len(), self.nvars, "point dimension mismatch");
        assert_eq!(q.len(), self.nvars, "point dimension mismatch");
        let field = p.iter().chain(q.iter()).fold(self.field, |f, c| {
            f.join(if c.is_rational() { Field::Q } else { Field::QOmega })
        });
        let subs: Vec<Poly> = p
            .iter()
            .zip(q.iter())
            .map(|(a, b)| {
                Poly::from_terms(
                    2,
                    field,
                    [(Monomial::var(0), a.clone()), (Monomial::var(1), b.clone())],
                )
                .expect("binary linear form")
            })
            .collect();
        self.clone().with_field(field).compose(&subs)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(self.compatible(d).is_ok(), "incompatible polynomials");
        let (lm, lc) = d.terms.first()?.clone();
        let lc_inv = lc.inv()?;
        let mut rem: BTreeMap<Monomial, FieldElem> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (dm, dc) in &d.terms[1..] {
                let key = dm.mul(&qm);
                let delta = &qc * dc;
                let entry = rem.entry(key).or_default();
                *entry -= &delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { nvars: self.nvars, field: self.field, terms: quot })
    }

    /// Requires a nonzero homogeneous polynomial and returns its degree.
    pub fn require_homogeneous(&self) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero);
        }
        self.homogeneous_degree().ok_or(PolyError::NotHomogeneous)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<F: Fn(&FieldElem) -> FieldElem>(&self, f: F) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).collect::<Vec<_>>();
        Poly::from_terms(self.nvars, self.field, terms).expect("coefficient map stays in field")
    }
}

pub(crate) fn power_table(point: &[FieldElem], maxe: Vec<u32>) -> Vec<Vec<FieldElem>> {
    point
        .iter()
        .zip(maxe)
        .map(|(x, e)| {
            let mut v = Vec::with_capacity(e as usize + 1);
            v.push(FieldElem::one());
            for k in 1..=e as usize {
                let next = &v[k - 1] * x;
                v.push(next);
            }
            v
        })
        .collect()
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("incompatible polynomials")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("incompatible polynomials")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("incompatible polynomials")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Shorthand for a point with small integer coordinates.
pub fn int_point(coords: &[i64]) -> Vec<FieldElem> {
    coords.iter().map(|&c| FieldElem::from_int(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x0+x1", 2);
        let b = p("x0-x1", 2);
        assert_eq!(&a * &b, p("x0^2-x1^2", 2));
        assert!((&a * &Poly::zero(2, Field::Q)).is_zero());
    }

    #[test]
    fn hesse_by_subtraction() {
        let s = p("x0^3+x1^3+x2^3", 3);
        let t = p("x0*x1*x2", 3).scale(&FieldElem::from_int(3));
        assert_eq!(&s - &t, p("x0^3+x1^3+x2^3-3*x0*x1*x2", 3));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = p("x0", 2);
        let b = p("x0", 3);
        assert!(matches!(a.try_add(&b), Err(PolyError::VarCountMismatch { .. })));
        let c = Poly::var(2, Field::QOmega, 0);
        assert!(matches!(a.try_mul(&c), Err(PolyError::FieldMismatch { .. })));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x0*x1*x2", 3).diff(0), p("x1*x2", 3));
        assert_eq!(p("x0^3", 1).diff(0), p("3*x0^2", 1));
        assert_eq!(p("x0^2*x1", 2).diff(1), p("x0^2", 2));
        assert!(p("7", 2).diff(1).is_zero());
    }

    #[test]
    fn evaluation() {
        let f = p("x0*x1*x2", 3);
        assert_eq!(f.eval(&int_point(&[1, 1, 1])), FieldElem::one());
        assert!(f.eval(&int_point(&[0, 5, 7])).is_zero());
        let h = p("x0^3+x1^3+x2^3-3*x0*x1*x2", 3);
        assert!(h.eval(&int_point(&[1, 1, 1])).is_zero());
    }

    #[test]
    fn line_restrictions() {
        let f = p("x0*x1*x2", 3);
        assert!(f.restrict_to_line(&int_point(&[1, 0, 0]), &int_point(&[0, 1, 0])).is_zero());
        let c = p("x0^3", 1).with_nvars(2);
        assert_eq!(c.restrict_to_line(&int_point(&[1, 0]), &int_point(&[0, 1])), p("x0^3", 2));
    }

    #[test]
    fn exact_division() {
        let a = p("x0^2-x1^2", 2);
        assert_eq!(a.div_exact(&p("x0+x1", 2)), Some(p("x0-x1", 2)));
        assert_eq!(a.div_exact(&p("x0+2*x1", 2)), None);
        let z = Poly::zero(2, Field::Q);
        assert_eq!(z.div_exact(&p("x0", 2)), Some(z.clone()));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomial_count(27, 2), 378);
        assert_eq!(monomial_count(12, 8), 75582);
        let ms = monomials_of_degree(4, 3);
        assert_eq!(ms.len() as u128, monomial_count(4, 3));
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn compose_matches_eval() {
        let f = p("x0^2*x1-3*x1^3+1/2*x0", 2);
        let subs = vec![p("x0+x1", 2), p("x0*x1", 2)];
        let g = f.compose(&subs);
        let pt = int_point(&[3, -2]);
        let inner: Vec<_> = subs.iter().map(|s| s.eval(&pt)).collect();
        assert_eq!(g.eval(&pt), f.eval(&inner));
    }
}
