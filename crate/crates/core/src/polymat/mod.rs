//! Matrices of polynomials: Hessians, determinants, Pfaffians and the
//! scaled inverse `f^r M^{-1}`.

mod interp;

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, FieldElem};
use crate::linalg::Mat;
use crate::poly::{Poly, PolyError};

pub use interp::{check_nonsingular, interpolate_scaled_inverse, scaled_inverse, FitOutcome, InverseOutcome, MAX_INTERP_MONOMIALS};
pub(crate) use interp::{power_table_mod, ModForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyMatError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Hessian needs degree at least 2, got {0}")]
    DegreeTooLow(u32),
    #[error("Pfaffian of odd size {0}")]
    OddSize(usize),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("matrix entries are not homogeneous of a common degree")]
    NonUniformEntries,
    #[error("determinant vanished at {0} consecutive random points; matrix presumed singular")]
    Singular(usize),
    #[error("interpolation too large: {0}")]
    TooLarge(String),
    #[error("interpolation did not stabilize: {0}")]
    Unstable(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Row-major matrix of polynomials sharing variable count and field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    field: Field,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize, field: Field) -> PolyMatrix {
        PolyMatrix { rows, cols, nvars, field, entries: vec![Poly::zero(nvars, field); rows * cols] }
    }

    /// `p * Id`.
    pub fn scalar(n: usize, p: &Poly) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(n, n, p.nvars(), p.field());
        for i in 0..n {
            m.entries[i * n + i] = p.clone();
        }
        m
    }

    pub fn identity(n: usize, nvars: usize, field: Field) -> PolyMatrix {
        PolyMatrix::scalar(n, &Poly::one(nvars, field))
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<PolyMatrix, PolyMatError> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(PolyMatError::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let (nvars, field) = (entries[0].nvars(), entries[0].field());
        for e in &entries {
            if e.nvars() != nvars {
                return Err(PolyError::VarCountMismatch { left: nvars, right: e.nvars() }.into());
            }
            if e.field() != field {
                return Err(PolyError::FieldMismatch { left: field, right: e.field() }.into());
            }
        }
        Ok(PolyMatrix { rows, cols, nvars, field, entries })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(rows: usize, cols: usize, mut f: F) -> Result<PolyMatrix, PolyMatError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::from_entries(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!((p.nvars(), p.field()), (self.nvars, self.field));
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// First position violating skew-symmetry, if any.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        (0..self.rows).find_map(|i| {
            (0..=i).find_map(|j| {
                let ok = if i == j { self.get(i, i).is_zero() } else { *self.get(i, j) == -self.get(j, i) };
                (!ok).then_some((i, j))
            })
        })
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.cols, self.rows, self.nvars, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn map<F: Fn(&Poly) -> Poly + Sync + Send>(&self, f: F) -> PolyMatrix {
        PolyMatrix { entries: self.entries.par_iter().map(f).collect(), ..self.clone() }
    }

    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        self.map(|e| e * p)
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyMatError> {
        if self.cols != other.rows {
            return Err(PolyMatError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if (self.nvars, self.field) != (other.nvars, other.field) {
            return Err(PolyError::VarCountMismatch { left: self.nvars, right: other.nvars }.into());
        }
        let (n, m) = (self.rows, other.cols);
        let entries = (0..n * m)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / m, idx % m);
                let mut acc = Poly::zero(self.nvars, self.field);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect();
        Ok(PolyMatrix { rows: n, cols: m, nvars: self.nvars, field: self.field, entries })
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyMatError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(PolyMatError::ShapeMismatch("difference of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_sub(b)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix { entries, ..self.clone() })
    }

    /// Evaluates every entry at a point.
    pub fn eval(&self, p: &[FieldElem]) -> Mat {
        Mat::from_vec(self.rows, self.cols, self.entries.iter().map(|e| e.eval(p)).collect())
    }

    /// The common degree of the nonzero entries, all of which must be
    /// homogeneous; `None` when every entry is zero.
    pub fn uniform_degree(&self) -> Result<Option<u32>, PolyMatError> {
        let mut deg = None;
        for e in self.entries.iter().filter(|e| !e.is_zero()) {
            let d = e.homogeneous_degree().ok_or(PolyMatError::NonUniformEntries)?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(PolyMatError::NonUniformEntries),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn with_field(&self, field: Field) -> PolyMatrix {
        PolyMatrix {
            field,
            entries: self.entries.iter().map(|e| e.clone().with_field(field)).collect(),
            ..self.clone()
        }
    }
}

/// Matrix of second partial derivatives.
pub fn hessian(f: &Poly) -> Result<PolyMatrix, PolyMatError> {
    let d = f.total_degree().unwrap_or(0);
    if d < 2 {
        return Err(PolyMatError::DegreeTooLow(d));
    }
    let n = f.nvars();
    let grad = f.gradient();
    let mut h = PolyMatrix::zeros(n, n, n, f.field());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let vals: Vec<Poly> = pairs.par_iter().map(|&(i, j)| grad[i].diff(j)).collect();
    for ((i, j), v) in pairs.into_iter().zip(vals) {
        h.entries[j * n + i] = v.clone();
        h.entries[i * n + j] = v;
    }
    Ok(h)
}

fn require_square(m: &PolyMatrix) -> Result<usize, PolyMatError> {
    if m.is_square() {
        Ok(m.rows)
    } else {
        Err(PolyMatError::NotSquare { rows: m.rows, cols: m.cols })
    }
}

/// Exact determinant: fraction-free Bareiss elimination up to size 9,
/// memoized expansion by minors beyond.
pub fn det(m: &PolyMatrix) -> Result<Poly, PolyMatError> {
    let n = require_square(m)?;
    if n <= 9 {
        Ok(bareiss(m))
    } else if n <= 24 {
        Ok(minor_expansion(m))
    } else {
        Err(PolyMatError::TooLarge(format!("symbolic determinant of size {n}")))
    }
}

fn bareiss(m: &PolyMatrix) -> Poly {
    let n = m.rows;
    let mut a: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut prev = Poly::one(m.nvars, m.field);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Poly::zero(m.nvars, m.field),
            }
        }
        let pivot_row = a[k].clone();
        let rest: Vec<Vec<Poly>> = a[k + 1..]
            .par_iter()
            .map(|row| {
                let mut new_row = row.clone();
                for j in k + 1..n {
                    let num = &(&pivot_row[k] * &row[j]) - &(&row[k] * &pivot_row[j]);
                    new_row[j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                new_row
            })
            .collect();
        for (i, row) in rest.into_iter().enumerate() {
            a[k + 1 + i] = row;
        }
        prev = pivot_row[k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn minor_expansion(m: &PolyMatrix) -> Poly {
    fn rec(m: &PolyMatrix, mask: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if mask == 0 {
            return Poly::one(m.nvars, m.field);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let row = m.rows - mask.count_ones() as usize;
        let mut acc = Poly::zero(m.nvars, m.field);
        let mut pos = 0;
        for j in 0..m.cols {
            if mask & (1 << j) == 0 {
                continue;
            }
            let a = m.get(row, j);
            if !a.is_zero() {
                let minor = rec(m, mask & !(1 << j), memo);
                let term = a * &minor;
                acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let full = if m.rows == 32 { u32::MAX } else { (1u32 << m.rows) - 1 };
    rec(m, full, &mut HashMap::new())
}

/// Pfaffian of a skew-symmetric matrix by expansion along the first row,
/// memoized on the remaining index set.
pub fn pfaffian(m: &PolyMatrix) -> Result<Poly, PolyMatError> {
    let n = require_square(m)?;
    if n % 2 == 1 {
        return Err(PolyMatError::OddSize(n));
    }
    if let Some((i, j)) = m.skew_violation() {
        return Err(PolyMatError::NotSkew(i, j));
    }
    if n > 30 {
        return Err(PolyMatError::TooLarge(format!("Pfaffian of size {n}")));
    }
    fn rec(m: &PolyMatrix, mask: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if mask == 0 {
            return Poly::one(m.nvars, m.field);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let i0 = mask.trailing_zeros() as usize;
        let mut acc = Poly::zero(m.nvars, m.field);
        let mut pos = 0;
        for j in i0 + 1..m.rows {
            if mask & (1 << j) == 0 {
                continue;
            }
            let a = m.get(i0, j);
            if !a.is_zero() {
                let sub = rec(m, mask & !(1 << i0) & !(1 << j), memo);
                let term = a * &sub;
                acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    Ok(rec(m, (1u32 << n) - 1, &mut HashMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    fn pm(rows: usize, cols: usize, srcs: &[&str], n: usize) -> PolyMatrix {
        PolyMatrix::from_entries(rows, cols, srcs.iter().map(|s| p(s, n)).collect()).unwrap()
    }

    #[test]
    fn hessians() {
        let h = hessian(&p("x0*x1*x2", 3)).unwrap();
        assert_eq!(h, pm(3, 3, &["0", "x2", "x1", "x2", "0", "x0", "x1", "x0", "0"], 3));
        assert_eq!(hessian(&p("x0^3", 1)).unwrap(), pm(1, 1, &["6*x0"], 1));
        assert_eq!(hessian(&p("x0^2*x1", 2)).unwrap(), pm(2, 2, &["2*x1", "2*x0", "2*x0", "0"], 2));
        assert!(matches!(hessian(&p("x0+x1", 2)), Err(PolyMatError::DegreeTooLow(1))));
    }

    #[test]
    fn determinants() {
        let h = hessian(&p("x0*x1*x2", 3)).unwrap();
        assert_eq!(det(&h).unwrap(), p("2*x0*x1*x2", 3));
        assert_eq!(det(&PolyMatrix::identity(3, 2, Field::Q)).unwrap(), p("1", 2));
        assert_eq!(det(&hessian(&p("x0^2*x1", 2)).unwrap()).unwrap(), p("-4*x0^2", 2));
        assert!(det(&pm(1, 2, &["x0", "x1"], 2)).is_err());
    }

    #[test]
    fn bareiss_agrees_with_minors() {
        let srcs: Vec<String> = (0..16).map(|k| format!("x{}+{}*x{}", k % 3, k + 1, (k + 1) % 3)).collect();
        let refs: Vec<&str> = srcs.iter().map(String::as_str).collect();
        let m = pm(4, 4, &refs, 3);
        assert_eq!(bareiss(&m), minor_expansion(&m));
    }

    #[test]
    fn pfaffians() {
        let m2 = pm(2, 2, &["0", "x0", "-x0", "0"], 1);
        assert_eq!(pfaffian(&m2).unwrap(), p("x0", 1));
        // generic 4x4 in six variables m01 m02 m03 m12 m13 m23 -> x0..x5
        let m4 = pm(
            4,
            4,
            &["0", "x0", "x1", "x2", "-x0", "0", "x3", "x4", "-x1", "-x3", "0", "x5", "-x2", "-x4", "-x5", "0"],
            6,
        );
        let pf = pfaffian(&m4).unwrap();
        assert_eq!(pf, p("x0*x5-x1*x4+x2*x3", 6));
        assert_eq!(&pf * &pf, det(&m4).unwrap());
        assert!(matches!(pfaffian(&pm(1, 1, &["0"], 1)), Err(PolyMatError::OddSize(1))));
        assert!(matches!(pfaffian(&pm(2, 2, &["0", "x0", "x0", "0"], 1)), Err(PolyMatError::NotSkew(1, 0))));
    }
}
