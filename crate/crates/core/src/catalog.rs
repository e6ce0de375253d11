//! Builtin forms: the cubics with Hessian matrix factorizations, the Hankel
//! counterexample, a few higher-degree invariants, and parametrizations of
//! the singular loci used by the secant checks.
//!
//! Octonions use the basis `1, e1, ..., e7` with `e_a e_b = e_c` for the
//! cyclic triples `(1,2,4) (2,3,5) (3,4,6) (4,5,7) (5,6,1) (6,7,2) (7,1,3)`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::expr_io::{parse_poly, print_poly};
use crate::field::{Field, FieldElem};
use crate::poly::{int_point, Monomial, Poly};
use crate::polymat::{det, hessian, pfaffian, PolyMatrix};
use crate::sampling::{hypersurface_points, random_ints, stream};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("parametrization undefined: {0}")]
    Undefined(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Expected {
    Order(u32),
    #[serde(rename = "absent")]
    Absent,
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expected::Order(r) => write!(f, "{r}"),
            Expected::Absent => write!(f, "absent"),
        }
    }
}

/// Parametrization of `Sing V(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingParam {
    /// `p -> p p^T`, symmetric 3x3.
    Veronese,
    /// `(p, q) -> p q^T`, 3x3.
    Segre,
    /// `(p, q) -> p ^ q` in 6-space.
    Plucker,
    /// `(p, q) -> (1, p, q)(1, p, q)^*`, octonion Hermitian rank one.
    CayleyPlane,
    /// `t -> (1, t, t^2, t^3, t^4)`.
    RationalNormalQuartic,
}

impl SingParam {
    /// Number of scalar parameters.
    pub fn arity(self) -> usize {
        match self {
            SingParam::Veronese => 3,
            SingParam::Segre => 6,
            SingParam::Plucker => 12,
            SingParam::CayleyPlane => 16,
            SingParam::RationalNormalQuartic => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub f: Poly,
    pub expected: Expected,
    pub unit_candidate: Option<Vec<FieldElem>>,
    pub sing_param: Option<SingParam>,
    /// Symmetric or generic matrix of linear forms whose determinant is `f`.
    pub matrix: Option<PolyMatrix>,
}

impl CatalogEntry {
    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree().unwrap_or(0)
    }
}

pub const NAMES: [&str; 13] = [
    "cube1",
    "weighted2",
    "quadric_cone",
    "hesse",
    "monomial3",
    "detsym3",
    "det3",
    "pf6",
    "freudenthal",
    "hankel",
    "zdet3",
    "hyperdet222",
    "hyperdet322",
];

fn q(src: &str, n: usize) -> Poly {
    parse_poly(src, n, Field::Q).expect("builtin polynomial")
}

fn vars(n: usize) -> Vec<Poly> {
    (0..n).map(|i| Poly::var(n, Field::Q, i)).collect()
}

fn int_vec(v: &[i64]) -> Vec<FieldElem> {
    int_point(v)
}

fn matrix_of(n: usize, rows: usize, idx: impl Fn(usize, usize) -> usize) -> PolyMatrix {
    let x = vars(n);
    PolyMatrix::from_fn(rows, rows, |i, j| x[idx(i, j)].clone()).expect("square")
}

/// Symmetric 3x3 matrix `[[x0,x1,x2],[x1,x3,x4],[x2,x4,x5]]`.
fn sym3_index(i: usize, j: usize) -> usize {
    const IDX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    IDX[i][j]
}

/// Index of `m_ij` (`i < j`) among the 15 coordinates of a skew 6x6 matrix.
pub fn skew6_index(i: usize, j: usize) -> usize {
    assert!(i < j && j < 6);
    (0..i).map(|k| 5 - k).sum::<usize>() + (j - i - 1)
}

fn skew6(n: usize) -> PolyMatrix {
    let x = vars(n);
    PolyMatrix::from_fn(6, 6, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => x[skew6_index(i, j)].clone(),
        std::cmp::Ordering::Greater => x[skew6_index(j, i)].scale(&FieldElem::from_int(-1)),
        std::cmp::Ordering::Equal => Poly::zero(n, Field::Q),
    })
    .expect("square")
}

fn parse_lambda(params: &BTreeMap<String, String>) -> Result<FieldElem, CatalogError> {
    let Some(src) = params.get("lambda") else {
        return Ok(FieldElem::one());
    };
    let p = parse_poly(src, 0, Field::QOmega).map_err(|e| CatalogError::InvalidParam(format!("lambda: {e}")))?;
    Ok(p.coeff(&Monomial::one()))
}

fn parse_n(params: &BTreeMap<String, String>) -> Result<usize, CatalogError> {
    match params.get("n") {
        None => Ok(3),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if (1..=30).contains(&n) => Ok(n),
            _ => Err(CatalogError::InvalidParam(format!("n must be an integer in 1..=30, got `{s}`"))),
        },
    }
}

/// Builds a catalog entry. Parameters: `lambda` for `hesse` (default 1,
/// may involve `w`), `n` for `quadric_cone` (default 3).
pub fn builtin(name: &str, params: &BTreeMap<String, String>) -> Result<CatalogEntry, CatalogError> {
    let allowed: &[&str] = match name {
        "hesse" => &["lambda"],
        "quadric_cone" => &["n"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CatalogError::InvalidParam(format!("`{k}` is not a parameter of {name}")));
    }
    let mut e = CatalogEntry {
        name: name.to_string(),
        params: params.clone(),
        f: Poly::zero(1, Field::Q),
        expected: Expected::Order(1),
        unit_candidate: None,
        sing_param: None,
        matrix: None,
    };
    match name {
        "cube1" => {
            e.f = q("x0^3", 1);
            e.unit_candidate = Some(int_vec(&[1]));
        }
        "weighted2" => e.f = q("x0^2*x1", 2),
        "quadric_cone" => {
            let n = parse_n(params)?;
            let x = vars(n + 1);
            let mut s = Poly::zero(n + 1, Field::Q);
            for xi in &x[1..] {
                s = s.try_add(&xi.pow(2)).expect("same ring");
            }
            e.f = x[0].try_mul(&s).expect("same ring");
        }
        "hesse" => {
            let lambda = parse_lambda(params)?;
            let field = if lambda.is_rational() { Field::Q } else { Field::QOmega };
            let cubic = q("x0^3+x1^3+x2^3", 3).with_field(field);
            let mixed = q("x0*x1*x2", 3).with_field(field).scale(&(&FieldElem::from_int(-3) * &lambda));
            e.f = cubic.try_add(&mixed).expect("same ring");
            e.expected = if lambda.pow(3).is_one() { Expected::Order(1) } else { Expected::Absent };
        }
        "monomial3" => {
            e.f = q("x0*x1*x2", 3);
            e.unit_candidate = Some(int_vec(&[1, 1, 1]));
        }
        "detsym3" => {
            let m = matrix_of(6, 3, sym3_index);
            e.f = det(&m).expect("square");
            e.matrix = Some(m);
            e.unit_candidate = Some(int_vec(&[1, 0, 0, 1, 0, 1]));
            e.sing_param = Some(SingParam::Veronese);
        }
        "det3" => {
            let m = matrix_of(9, 3, |i, j| 3 * i + j);
            e.f = det(&m).expect("square");
            e.matrix = Some(m);
            e.unit_candidate = Some(int_vec(&[1, 0, 0, 0, 1, 0, 0, 0, 1]));
            e.sing_param = Some(SingParam::Segre);
        }
        "pf6" => {
            e.f = pfaffian(&skew6(15)).expect("skew");
            let mut u = vec![0i64; 15];
            for (i, j) in [(0, 1), (2, 3), (4, 5)] {
                u[skew6_index(i, j)] = 1;
            }
            e.unit_candidate = Some(int_vec(&u));
            e.sing_param = Some(SingParam::Plucker);
        }
        "freudenthal" => {
            e.f = freudenthal();
            let mut u = vec![0i64; 27];
            u[..3].copy_from_slice(&[1, 1, 1]);
            e.unit_candidate = Some(int_vec(&u));
            e.sing_param = Some(SingParam::CayleyPlane);
        }
        "hankel" => {
            let m = matrix_of(5, 3, |i, j| i + j);
            e.f = det(&m).expect("square");
            e.matrix = Some(m);
            e.expected = Expected::Absent;
            e.sing_param = Some(SingParam::RationalNormalQuartic);
        }
        "zdet3" => {
            let m = matrix_of(10, 3, |i, j| 3 * i + j);
            e.f = Poly::var(10, Field::Q, 9).try_mul(&det(&m).expect("square")).expect("same ring");
        }
        "hyperdet222" => {
            e.f = schlafli(2);
            e.expected = Expected::Order(2);
        }
        "hyperdet322" => {
            e.f = schlafli(3);
            e.expected = Expected::Order(2);
        }
        _ => return Err(CatalogError::Unknown(name.to_string())),
    }
    Ok(e)
}

pub fn builtin_default(name: &str) -> Result<CatalogEntry, CatalogError> {
    builtin(name, &BTreeMap::new())
}

/// Cayley table: `e_a e_b = sign * e_c`.
fn oct_table() -> [[(i8, usize); 8]; 8] {
    const TRIPLES: [(usize, usize, usize); 7] = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)];
    let mut t = [[(0i8, 0usize); 8]; 8];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = (1, i);
    }
    for (j, cell) in t[0].iter_mut().enumerate() {
        *cell = (1, j);
    }
    for i in 1..8 {
        t[i][i] = (-1, 0);
    }
    for &(a, b, c) in &TRIPLES {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            t[x][y] = (1, z);
            t[y][x] = (-1, z);
        }
    }
    t
}

/// Octonion with coefficients in the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctonionElem(pub [FieldElem; 8]);

impl OctonionElem {
    pub fn from_ints(v: [i64; 8]) -> OctonionElem {
        OctonionElem(v.map(FieldElem::from_int))
    }

    pub fn mul(&self, other: &OctonionElem) -> OctonionElem {
        let t = oct_table();
        let mut out: [FieldElem; 8] = Default::default();
        for i in 0..8 {
            if self.0[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                let (s, k) = t[i][j];
                let v = &self.0[i] * &other.0[j];
                if s > 0 {
                    out[k] += &v;
                } else {
                    out[k] -= &v;
                }
            }
        }
        OctonionElem(out)
    }

    pub fn conj(&self) -> OctonionElem {
        let mut out = self.0.clone();
        for c in &mut out[1..] {
            *c = -&*c;
        }
        OctonionElem(out)
    }

    /// Sum of squares of coefficients.
    pub fn norm(&self) -> FieldElem {
        self.0.iter().fold(FieldElem::zero(), |acc, c| &acc + &(c * c))
    }

    pub fn sub(&self, other: &OctonionElem) -> OctonionElem {
        OctonionElem(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElem::is_zero)
    }
}

fn oct_mul_poly(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let t = oct_table();
    let n = a[0].nvars();
    let mut out = vec![Poly::zero(n, Field::Q); 8];
    for i in 0..8 {
        for j in 0..8 {
            let (s, k) = t[i][j];
            let v = a[i].try_mul(&b[j]).expect("same ring");
            out[k] = if s > 0 { out[k].try_add(&v) } else { out[k].try_sub(&v) }.expect("same ring");
        }
    }
    out
}

/// Cubic norm of `[[a, z, y*], [z*, b, x], [y, x*, c]]` with coordinates
/// `a, b, c, x0..x7, y0..y7, z0..z7`:
/// `abc - a n(x) - b n(y) - c n(z) + 2 Re((x y) z)`.
fn freudenthal() -> Poly {
    let v = vars(27);
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let x = &v[3..11];
    let y = &v[11..19];
    let z = &v[19..27];
    let norm = |o: &[Poly]| o.iter().fold(Poly::zero(27, Field::Q), |acc, t| acc.try_add(&t.pow(2)).expect("same ring"));
    let xyz = oct_mul_poly(&oct_mul_poly(x, y), z);
    let mut f = a.try_mul(b).and_then(|ab| ab.try_mul(c)).expect("same ring");
    for (s, o) in [(a, x), (b, y), (c, z)] {
        f = f.try_sub(&s.try_mul(&norm(o)).expect("same ring")).expect("same ring");
    }
    f.try_add(&xyz[0].scale(&FieldElem::from_int(2))).expect("same ring")
}

/// Hyperdeterminant of a `k x 2 x 2` array (`k = 2, 3`), coordinate
/// `x_{ijl}` at index `4i + 2j + l`: the discriminant of the quadratic form
/// `u -> det(sum u_i A_i)` in `u`, normalized as `det(2G)` with `G` its
/// Gram matrix (`(-1)` times `det(2G)` when `k = 2`, giving Cayley's sign).
fn schlafli(k: usize) -> Poly {
    let n = 4 * k;
    let x = vars(n);
    let slice = |i: usize, j: usize, l: usize| &x[4 * i + 2 * j + l];
    // coefficient of u_i u_j in det(sum u_i A_i), doubled on the diagonal
    let coeff = |i: usize, j: usize| -> Poly {
        let cross = |p: usize, q: usize| {
            slice(p, 0, 0).try_mul(slice(q, 1, 1)).unwrap().try_sub(&slice(p, 0, 1).try_mul(slice(q, 1, 0)).unwrap()).unwrap()
        };
        cross(i, j).try_add(&cross(j, i)).unwrap()
    };
    let g2 = PolyMatrix::from_fn(k, k, coeff).expect("square");
    let d = det(&g2).expect("square");
    if k == 2 {
        d.scale(&FieldElem::from_int(-1))
    } else {
        d
    }
}

/// A point of `Sing V(f)` from exact parameters.
pub fn sing_point(entry: &CatalogEntry, params: &[FieldElem]) -> Result<Vec<FieldElem>, CatalogError> {
    let kind = entry.sing_param.ok_or_else(|| CatalogError::Undefined(format!("{} has no parametrization", entry.name)))?;
    if params.len() != kind.arity() {
        return Err(CatalogError::InvalidParam(format!("{:?} takes {} parameters, got {}", kind, kind.arity(), params.len())));
    }
    let pt = match kind {
        SingParam::Veronese => (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| &params[i] * &params[j])
            .collect::<Vec<_>>(),
        SingParam::Segre => (0..9).map(|k| &params[k / 3] * &params[3 + k % 3]).collect(),
        SingParam::Plucker => {
            let (p, q) = params.split_at(6);
            let mut out = vec![FieldElem::zero(); 15];
            for i in 0..6 {
                for j in i + 1..6 {
                    out[skew6_index(i, j)] = &(&p[i] * &q[j]) - &(&p[j] * &q[i]);
                }
            }
            out
        }
        SingParam::CayleyPlane => {
            let p = OctonionElem(std::array::from_fn(|i| params[i].clone()));
            let q = OctonionElem(std::array::from_fn(|i| params[8 + i].clone()));
            let x = p.mul(&q.conj());
            let z = p.conj();
            let mut out = vec![FieldElem::one(), p.norm(), q.norm()];
            out.extend(x.0.iter().cloned());
            out.extend(q.0.iter().cloned());
            out.extend(z.0.iter().cloned());
            out
        }
        SingParam::RationalNormalQuartic => (0..5).map(|k| params[0].pow(k)).collect(),
    };
    if pt.iter().all(FieldElem::is_zero) {
        return Err(CatalogError::Undefined("parameters map to the zero vector".into()));
    }
    Ok(pt)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecantReport {
    pub entry: String,
    pub trials: usize,
    /// `grad f(z) = 0` at parametrized points.
    pub singular: usize,
    /// `f` vanishes identically on secant lines.
    pub line_in_hypersurface: usize,
    /// Hessian rank below `n` at a point of each secant line.
    pub hessian_deficient: usize,
    pub failures: Vec<String>,
}

impl SecantReport {
    pub fn a_passed(&self) -> bool {
        self.singular == self.trials
    }

    pub fn b_passed(&self) -> bool {
        self.line_in_hypersurface == self.trials
    }

    pub fn c_passed(&self) -> bool {
        self.hessian_deficient == self.trials
    }
}

/// Random parametrized singular points and their secant lines.
pub fn secant_singularity_check(entry: &CatalogEntry, trials: usize, seed: u64) -> Result<SecantReport, CatalogError> {
    let kind = entry.sing_param.ok_or_else(|| CatalogError::Undefined(format!("{} has no parametrization", entry.name)))?;
    let f = &entry.f;
    let n = f.nvars();
    let grad = f.gradient();
    let h = hessian(f).map_err(|e| CatalogError::Undefined(e.to_string()))?;
    let mut rng = stream(seed, &format!("secant/{}", entry.name));
    let draw = |rng: &mut rand_chacha::ChaCha20Rng| loop {
        let v = int_point(&random_ints(rng, kind.arity(), 5));
        if let Ok(p) = sing_point(entry, &v) {
            return p;
        }
    };
    let cases: Vec<(Vec<FieldElem>, Vec<FieldElem>, FieldElem)> = (0..trials)
        .map(|_| {
            let z1 = draw(&mut rng);
            let mut z2 = draw(&mut rng);
            while z2 == z1 {
                z2 = draw(&mut rng);
            }
            let t = FieldElem::from_int(rng.gen_range(1..=9));
            (z1, z2, t)
        })
        .collect();
    let results: Vec<(bool, bool, bool)> = cases
        .par_iter()
        .map(|(z1, z2, t)| {
            let a = grad.iter().all(|g| g.eval(z1).is_zero());
            let b = f.restrict_to_line(z1, z2).is_zero();
            let p: Vec<FieldElem> = z1.iter().zip(z2).map(|(u, v)| u + &(t * v)).collect();
            let c = h.eval(&p).rank() < n;
            (a, b, c)
        })
        .collect();
    let mut rep = SecantReport {
        entry: entry.name.clone(),
        trials,
        singular: 0,
        line_in_hypersurface: 0,
        hessian_deficient: 0,
        failures: Vec::new(),
    };
    for (k, (a, b, c)) in results.into_iter().enumerate() {
        rep.singular += a as usize;
        rep.line_in_hypersurface += b as usize;
        rep.hessian_deficient += c as usize;
        for (ok, what) in [(a, "gradient nonzero at Z-point"), (b, "secant line leaves V(f)"), (c, "Hessian full rank on secant")] {
            if !ok {
                rep.failures.push(format!("trial {k}: {what}"));
            }
        }
    }
    Ok(rep)
}

/// For determinantal entries: points of `V(f)` have matrix rank at most 2,
/// hence lie on a secant of the rank-one locus.
pub fn converse_rank_check(entry: &CatalogEntry, points: usize, seed: u64) -> Option<(usize, usize)> {
    let m = entry.matrix.as_ref()?;
    let pts = hypersurface_points(&entry.f, points, &mut stream(seed, &format!("converse/{}", entry.name))).ok()?;
    let good = pts.iter().filter(|p| m.eval(p).rank() <= 2).count();
    Some((good, pts.len()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ListItem {
    pub name: String,
    pub nvars: usize,
    pub degree: u32,
    pub expected_mf_order: String,
    pub field: Field,
    pub unit_candidate: bool,
    pub sing_param: Option<SingParam>,
    pub f: String,
}

/// Every entry with default parameters.
pub fn list() -> Vec<ListItem> {
    NAMES
        .iter()
        .map(|name| {
            let e = builtin_default(name).expect("builtin");
            ListItem {
                name: e.name.clone(),
                nvars: e.nvars(),
                degree: e.degree(),
                expected_mf_order: e.expected.to_string(),
                field: e.f.field(),
                unit_candidate: e.unit_candidate.is_some(),
                sing_param: e.sing_param,
                f: if e.f.len() <= 40 { print_poly(&e.f) } else { format!("<{} terms>", e.f.len()) },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn hesse_and_detsym3() {
        let e = builtin("hesse", &params(&[("lambda", "1")])).unwrap();
        assert_eq!(e.f, q("x0^3+x1^3+x2^3-3*x0*x1*x2", 3));
        let e = builtin("hesse", &params(&[("lambda", "w")])).unwrap();
        assert_eq!(e.f.field(), Field::QOmega);
        assert_eq!(e.expected, Expected::Order(1));
        assert_eq!(builtin("hesse", &params(&[("lambda", "2")])).unwrap().expected, Expected::Absent);
        let e = builtin_default("detsym3").unwrap();
        assert_eq!((e.nvars(), e.degree()), (6, 3));
        assert!(e.f.eval(e.unit_candidate.as_ref().unwrap()).is_one());
    }

    #[test]
    fn errors() {
        assert!(matches!(builtin_default("cubic"), Err(CatalogError::Unknown(_))));
        assert!(matches!(builtin("quadric_cone", &params(&[("n", "0")])), Err(CatalogError::InvalidParam(_))));
        assert!(matches!(builtin("det3", &params(&[("n", "2")])), Err(CatalogError::InvalidParam(_))));
    }

    #[test]
    fn freudenthal_norm() {
        let e = builtin_default("freudenthal").unwrap();
        assert_eq!((e.nvars(), e.degree()), (27, 3));
        assert!(e.f.eval(e.unit_candidate.as_ref().unwrap()).is_one());
        // real symmetric slice: a=x0, z=x1, y=x2, b=x3, x=x4, c=x5
        let v = vars(6);
        let mut subs = vec![Poly::zero(6, Field::Q); 27];
        subs[0] = v[0].clone();
        subs[19] = v[1].clone();
        subs[11] = v[2].clone();
        subs[1] = v[3].clone();
        subs[3] = v[4].clone();
        subs[2] = v[5].clone();
        assert_eq!(e.f.compose(&subs), builtin_default("detsym3").unwrap().f);
    }

    #[test]
    fn octonion_laws() {
        let mut rng = stream(3, "octonions");
        let mut rand_oct = || OctonionElem(std::array::from_fn(|_| FieldElem::from_int(rng.gen_range(-9..=9))));
        for _ in 0..50 {
            let (x, y) = (rand_oct(), rand_oct());
            assert_eq!(x.mul(&x.mul(&y)), x.mul(&x).mul(&y));
            assert_eq!(y.mul(&x).mul(&x), y.mul(&x.mul(&x)));
            assert_eq!(x.mul(&y).norm(), &x.norm() * &y.norm());
        }
        let e = |i: usize| {
            let mut v = [0i64; 8];
            v[i] = 1;
            OctonionElem::from_ints(v)
        };
        let assoc = e(1).mul(&e(2)).mul(&e(3)).sub(&e(1).mul(&e(2).mul(&e(3))));
        assert!(!assoc.is_zero());
    }

    #[test]
    fn sing_points() {
        let e = builtin_default("detsym3").unwrap();
        assert_eq!(sing_point(&e, &int_point(&[1, 2, 3])).unwrap(), int_point(&[1, 2, 3, 4, 6, 9]));
        let e = builtin_default("hankel").unwrap();
        assert_eq!(sing_point(&e, &int_point(&[2])).unwrap(), int_point(&[1, 2, 4, 8, 16]));
        let e = builtin_default("det3").unwrap();
        assert_eq!(sing_point(&e, &int_point(&[1, 2, 0, 3, 1, 1])).unwrap(), int_point(&[3, 1, 1, 6, 2, 2, 0, 0, 0]));
        assert!(sing_point(&e, &int_point(&[0, 0, 0, 1, 1, 1])).is_err());
    }

    #[test]
    fn secant_checks() {
        for name in ["detsym3", "det3", "pf6", "freudenthal"] {
            let rep = secant_singularity_check(&builtin_default(name).unwrap(), 20, 1).unwrap();
            assert!(rep.a_passed() && rep.b_passed() && rep.c_passed(), "{rep:?}");
        }
        let rep = secant_singularity_check(&builtin_default("hankel").unwrap(), 20, 1).unwrap();
        assert!(rep.a_passed() && rep.b_passed(), "{rep:?}");
    }

    #[test]
    fn hyperdeterminants() {
        let h = builtin_default("hyperdet222").unwrap().f;
        assert_eq!(h.total_degree(), Some(4));
        // Cayley: a000^2 a111^2 term with coefficient 1
        let m = Monomial::from_exps(&[2, 0, 0, 0, 0, 0, 0, 2]).unwrap();
        assert!(h.coeff(&m).is_one());
        // decomposable tensor a = u (x) v (x) w
        let (u, v, w) = ([1, 2], [3, -1], [2, 5]);
        let pt: Vec<i64> = (0..8).map(|k| u[k >> 2] * v[(k >> 1) & 1] * w[k & 1]).collect();
        assert!(h.eval(&int_point(&pt)).is_zero());
        assert!(!h.eval(&int_point(&[1, 0, 0, 0, 0, 0, 0, 1])).is_zero());
        let h3 = builtin_default("hyperdet322").unwrap().f;
        assert_eq!((h3.nvars(), h3.total_degree()), (12, Some(6)));
        let (u, v, w) = ([1, 2, -1], [3, -1], [2, 5]);
        let pt: Vec<i64> = (0..12).map(|k| u[k >> 2] * v[(k >> 1) & 1] * w[k & 1]).collect();
        assert!(h3.eval(&int_point(&pt)).is_zero());
        assert!(!h3.is_zero());
    }

    #[test]
    fn list_covers_names() {
        let l = list();
        assert_eq!(l.len(), NAMES.len());
        assert!(l.iter().any(|i| i.name == "hankel" && i.expected_mf_order == "absent"));
    }
}
