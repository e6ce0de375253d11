use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::field::{Field, FieldElem};
use crate::poly::{Monomial, Poly, PolyError};
use crate::polymat::{PolyMatError, PolyMatrix};

/// One term; numerators and denominators are decimal strings so that
/// arbitrarily large values survive any JSON reader.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
    pub numw: String,
    pub denw: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub field: Field,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<PolyJson>,
}

pub fn poly_to_json(f: &Poly) -> PolyJson {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| TermJson {
            exps: m.exps(f.nvars()).iter().map(|&e| e as u32).collect(),
            num: c.re().numer().to_string(),
            den: c.re().denom().to_string(),
            numw: c.om().numer().to_string(),
            denw: c.om().denom().to_string(),
        })
        .collect();
    PolyJson { nvars: f.nvars(), field: f.field(), terms }
}

fn rational(num: &str, den: &str) -> Result<BigRational, PolyError> {
    let bad = || PolyError::CoefficientNotInField(format!("{num}/{den}"));
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn poly_from_json(j: &PolyJson) -> Result<Poly, PolyError> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exps.len() != j.nvars {
            return Err(PolyError::VarCountMismatch { left: t.exps.len(), right: j.nvars });
        }
        let m = Monomial::from_exps(&t.exps)?;
        let c = FieldElem::new(rational(&t.num, &t.den)?, rational(&t.numw, &t.denw)?);
        terms.push((m, c));
    }
    Poly::from_terms(j.nvars, j.field, terms)
}

pub fn matrix_to_json(m: &PolyMatrix) -> MatrixJson {
    MatrixJson { rows: m.rows(), cols: m.cols(), entries: m.entries().iter().map(poly_to_json).collect() }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<PolyMatrix, PolyMatError> {
    let entries = j.entries.iter().map(poly_from_json).collect::<Result<Vec<_>, _>>()?;
    PolyMatrix::from_entries(j.rows, j.cols, entries)
}

/// Points are lists of `[num, den, numw, denw]` string quadruples.
pub fn point_to_json(p: &[FieldElem]) -> Vec<[String; 4]> {
    p.iter()
        .map(|c| {
            [c.re().numer().to_string(), c.re().denom().to_string(), c.om().numer().to_string(), c.om().denom().to_string()]
        })
        .collect()
}

pub fn point_from_json(p: &[[String; 4]]) -> Result<Vec<FieldElem>, PolyError> {
    p.iter().map(|[a, b, c, d]| Ok(FieldElem::new(rational(a, b)?, rational(c, d)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;

    #[test]
    fn poly_round_trip() {
        let f = parse_poly("-3/7*x0^2*x2 + (2-w)*x1^3 + 12345678901234567890123*x2^3", 3, Field::QOmega).unwrap();
        let j = poly_to_json(&f);
        let s = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(poly_from_json(&back).unwrap(), f);
        assert!(s.contains("\"field\":\"Qw\""));
    }

    #[test]
    fn rejects_bad_terms() {
        let mut j = poly_to_json(&parse_poly("x0*x1", 2, Field::Q).unwrap());
        j.terms[0].den = "0".into();
        assert!(poly_from_json(&j).is_err());
        let mut j = poly_to_json(&parse_poly("x0*x1", 2, Field::Q).unwrap());
        j.terms[0].numw = "1".into();
        assert!(poly_from_json(&j).is_err());
    }
}
