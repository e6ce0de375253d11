//! The cubic Jordan algebra attached to a Hessian matrix factorization
//! `H Q = f Id`: `P(u) = u u^T / 2 - Q(u)`, `u * v = P(u, v) e / 2`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{Check, Status};
use crate::expr_io::{point_to_json, poly_to_json, PolyJson};
use crate::field::{Field, FieldElem};
use crate::poly::{Monomial, Poly};
use crate::polymat::PolyMatrix;
use crate::sampling::{random_point, small_vectors, stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JordanError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("e fails the unit axiom at basis vector {0}")]
    NotUnit(usize),
    #[error("algebra has rank below 3")]
    RankBelow3,
    #[error("u^3 is not in the span of u^2, u, e with form coefficients (rank above 3)")]
    RankAbove3,
}

/// Structure constants `(u * v)_k = sum c[i][j][k] u_i v_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanAlgebra {
    pub dim: usize,
    pub field: Field,
    /// Dense, index `(i * dim + j) * dim + k`.
    pub c: Vec<FieldElem>,
    pub e: Vec<FieldElem>,
    /// Factor applied to `P(u, v) e / 2` so that `e` acts as the identity.
    pub scale: FieldElem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalPolyForms {
    pub t: Poly,
    pub s: Poly,
    pub n: Poly,
}

/// `P(u, v) e / 2` on basis vectors, before rescaling, where
/// `P(u, v) = (u v^T + v u^T) / 2 - Q(u, v)`.
fn raw_constants(q: &PolyMatrix, e: &[FieldElem]) -> Vec<FieldElem> {
    let n = e.len();
    let half = FieldElem::frac(1, 2);
    let quarter = FieldElem::frac(1, 4);
    let mut c = vec![FieldElem::zero(); n * n * n];
    // bilinear coefficient of u_i v_j in Q_ab(u, v) = Q_ab(u+v) - Q_ab(u) - Q_ab(v)
    let bil = |a: usize, b: usize, i: usize, j: usize| -> FieldElem {
        let m = Monomial::var(i).mul(&Monomial::var(j));
        let coeff = q.get(a, b).coeff(&m);
        if i == j {
            &coeff * &FieldElem::from_int(2)
        } else {
            coeff
        }
    };
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                let mut v = FieldElem::zero();
                if a == i {
                    v += &e[j];
                }
                if a == j {
                    v += &e[i];
                }
                let mut w = FieldElem::zero();
                for (b, eb) in e.iter().enumerate() {
                    if !eb.is_zero() {
                        w += &(&bil(a, b, i, j) * eb);
                    }
                }
                c[(i * n + j) * n + a] = &(&v * &quarter) - &(&w * &half);
            }
        }
    }
    c
}

/// Builds the algebra, rescaling the product when `e * u = c u` for a
/// constant `c != 1`.
pub fn build_jordan(f: &Poly, q: &PolyMatrix, e: &[FieldElem]) -> Result<JordanAlgebra, JordanError> {
    let n = f.nvars();
    if q.rows() != n || q.cols() != n || e.len() != n || q.nvars() != n {
        return Err(JordanError::Shape(format!("{n} variables, Q is {}x{}, e has {} coordinates", q.rows(), q.cols(), e.len())));
    }
    let field = f.field().join(q.field());
    let raw = JordanAlgebra { dim: n, field, c: raw_constants(q, e), e: e.to_vec(), scale: FieldElem::one() };
    let ee = raw.mul(e, e);
    let k = e.iter().position(|x| !x.is_zero()).ok_or(JordanError::NotUnit(0))?;
    let lambda = &ee[k] / &e[k];
    if lambda.is_zero() {
        return Err(JordanError::NotUnit(k));
    }
    let scale = lambda.inv().expect("nonzero");
    let mut alg = raw;
    for x in &mut alg.c {
        *x = &*x * &scale;
    }
    alg.scale = scale;
    for j in 0..n {
        let ej = basis(n, j);
        if alg.mul(e, &ej) != ej {
            return Err(JordanError::NotUnit(j));
        }
    }
    Ok(alg)
}

fn basis(n: usize, j: usize) -> Vec<FieldElem> {
    let mut v = vec![FieldElem::zero(); n];
    v[j] = FieldElem::one();
    v
}

impl JordanAlgebra {
    fn at(&self, i: usize, j: usize, k: usize) -> &FieldElem {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn mul(&self, u: &[FieldElem], v: &[FieldElem]) -> Vec<FieldElem> {
        let n = self.dim;
        let mut out = vec![FieldElem::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.at(i, j, k);
                    if !c.is_zero() {
                        *o += &(c * &uv);
                    }
                }
            }
        }
        out
    }

    /// Product of vectors of polynomials.
    pub fn mul_poly(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        let n = self.dim;
        let nv = u[0].nvars();
        (0..n)
            .into_par_iter()
            .map(|k| {
                let mut acc = Poly::zero(nv, self.field);
                for i in 0..n {
                    for j in 0..n {
                        let c = self.at(i, j, k);
                        if c.is_zero() || u[i].is_zero() || v[j].is_zero() {
                            continue;
                        }
                        let t = u[i].try_mul(&v[j]).expect("same ring").scale(c);
                        acc = acc.try_add(&t.with_field(self.field)).expect("same ring");
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.at(i, j, k) == self.at(j, i, k))))
    }

    /// `e * u = u` on every basis vector.
    pub fn unit_axiom(&self) -> Option<usize> {
        (0..self.dim).find(|&j| {
            let ej = basis(self.dim, j);
            self.mul(&self.e, &ej) != ej
        })
    }

    fn coord_vars(&self) -> Vec<Poly> {
        (0..self.dim).map(|i| Poly::var(self.dim, self.field, i)).collect()
    }
}

fn scale_vec(v: &[FieldElem], c: &FieldElem) -> Vec<FieldElem> {
    v.iter().map(|x| x * c).collect()
}

fn add_vec(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `T, S, N` with `u^3 - T u^2 + S u - N e = 0`, by eliminating `N` with a
/// coordinate where `e` is nonzero and solving the remaining 2x2 systems by
/// exact division.
pub fn minimal_poly_forms(j: &JordanAlgebra) -> Result<MinimalPolyForms, JordanError> {
    let n = j.dim;
    let u = j.coord_vars();
    let u2 = j.mul_poly(&u, &u);
    let u3 = j.mul_poly(&u, &u2);
    let k0 = j.e.iter().position(|x| !x.is_zero()).ok_or(JordanError::RankBelow3)?;
    let sub = |p: &[Poly], k: usize| -> Poly {
        let eps = &j.e[k] / &j.e[k0];
        p[k].try_sub(&p[k0].scale(&eps)).expect("same ring")
    };
    let others: Vec<usize> = (0..n).filter(|&k| k != k0).collect();
    let a: Vec<Poly> = others.iter().map(|&k| sub(&u3, k)).collect();
    let b: Vec<Poly> = others.iter().map(|&k| sub(&u2, k)).collect();
    let c: Vec<Poly> = others.iter().map(|&k| sub(&u, k)).collect();
    let mul = |x: &Poly, y: &Poly| x.try_mul(y).expect("same ring");
    let mut found = None;
    'search: for p in 0..others.len() {
        if c[p].is_zero() {
            continue;
        }
        for r in 0..others.len() {
            if r == p {
                continue;
            }
            let den = mul(&b[r], &c[p]).try_sub(&mul(&b[p], &c[r])).expect("same ring");
            if den.is_zero() {
                continue;
            }
            let num = mul(&a[r], &c[p]).try_sub(&mul(&a[p], &c[r])).expect("same ring");
            found = Some((p, num.div_exact(&den).ok_or(JordanError::RankAbove3)?));
            break 'search;
        }
    }
    let (p, t) = found.ok_or(JordanError::RankBelow3)?;
    let s = mul(&t, &b[p]).try_sub(&a[p]).expect("same ring").div_exact(&c[p]).ok_or(JordanError::RankAbove3)?;
    let inv_e = j.e[k0].inv().expect("nonzero");
    let nf = u3[k0]
        .try_sub(&mul(&t, &u2[k0]))
        .and_then(|x| x.try_add(&mul(&s, &u[k0])))
        .expect("same ring")
        .scale(&inv_e);
    for k in 0..n {
        let res = u3[k]
            .try_sub(&mul(&t, &u2[k]))
            .and_then(|x| x.try_add(&mul(&s, &u[k])))
            .and_then(|x| x.try_sub(&nf.scale(&j.e[k])))
            .expect("same ring");
        if !res.is_zero() {
            return Err(JordanError::RankAbove3);
        }
    }
    Ok(MinimalPolyForms { t, s, n: nf })
}

/// `u# = u^2 - T(u) u + S(u) e`.
pub fn adjoint(j: &JordanAlgebra, forms: &MinimalPolyForms, u: &[FieldElem]) -> Vec<FieldElem> {
    let u2 = j.mul(u, u);
    let tu = forms.t.eval(u);
    let su = forms.s.eval(u);
    add_vec(&add_vec(&u2, &scale_vec(u, &-tu)), &scale_vec(&j.e, &su))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanReport {
    pub checks: Vec<Check>,
    /// `N / f` when constant over the sample.
    pub norm_ratio: Option<FieldElem>,
    /// Constant in `grad f = G u# / c`.
    pub gradient_ratio: Option<FieldElem>,
}

impl JordanReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const UNIT: &str = "unit axiom";
pub const COMMUTATIVE: &str = "commutativity";
pub const JORDAN_IDENTITY: &str = "Jordan identity";
pub const POWER_ASSOCIATIVE: &str = "power associativity";
pub const MIN_POLY: &str = "universal minimal polynomial";
pub const LAPLACE: &str = "Laplace formula";
pub const NORM: &str = "norm proportional to f";
pub const ADJOINT_GRADIENT: &str = "gradient proportional to trace form times adjoint";

/// A single constant `r` with `a = r b` for every sample, if any.
fn common_ratio(pairs: &[(Vec<FieldElem>, Vec<FieldElem>)]) -> Option<FieldElem> {
    let mut ratio: Option<FieldElem> = None;
    for (a, b) in pairs {
        for (x, y) in a.iter().zip(b) {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (false, true) | (true, false) => return None,
                (false, false) => {
                    let r = x / y;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(q) if *q == r => {}
                        Some(_) => return None,
                    }
                }
            }
        }
    }
    ratio
}

/// Unit, commutativity, Jordan identity, power associativity, minimal
/// polynomial, Laplace formula, norm ratio and the adjoint-gradient link,
/// at `samples` random points with coordinates in `[-10, 10]`.
pub fn verify_axioms(j: &JordanAlgebra, forms: &MinimalPolyForms, f: &Poly, samples: usize, seed: u64) -> JordanReport {
    let n = j.dim;
    let mut checks = Vec::new();
    checks.push(match j.unit_axiom() {
        None => Check::new(UNIT, true).with_detail("exact, all basis vectors"),
        Some(k) => Check::new(UNIT, false).with_detail(format!("fails at basis vector {k}")),
    });
    checks.push(Check::new(COMMUTATIVE, j.is_commutative()).with_detail("exact, structure constants"));

    let mut rng = stream(seed, "jordan");
    let pairs: Vec<(Vec<FieldElem>, Vec<FieldElem>)> =
        (0..samples).map(|_| (random_point(&mut rng, n, 10), random_point(&mut rng, n, 10))).collect();
    let count = |pred: &(dyn Fn(&Vec<FieldElem>, &Vec<FieldElem>) -> bool + Sync)| {
        pairs.par_iter().filter(|(u, v)| !pred(u, v)).count()
    };
    let report = |name: &str, bad: usize| {
        Check::new(name, bad == 0).with_detail(format!("{} samples, {bad} failures", pairs.len()))
    };
    let jordan = count(&|u, v| {
        let u2 = j.mul(u, u);
        j.mul(&u2, &j.mul(u, v)) == j.mul(u, &j.mul(&u2, v))
    });
    checks.push(report(JORDAN_IDENTITY, jordan));
    let power = count(&|u, _| {
        let u2 = j.mul(u, u);
        j.mul(u, &j.mul(u, &u2)) == j.mul(&u2, &u2)
    });
    checks.push(report(POWER_ASSOCIATIVE, power));
    let minpoly = count(&|u, _| {
        let u2 = j.mul(u, u);
        let u3 = j.mul(u, &u2);
        let lhs = add_vec(&add_vec(&u3, &scale_vec(&u2, &-forms.t.eval(u))), &scale_vec(u, &forms.s.eval(u)));
        lhs == scale_vec(&j.e, &forms.n.eval(u))
    });
    checks.push(report(MIN_POLY, minpoly));
    let laplace = count(&|u, _| {
        let ua = adjoint(j, forms, u);
        let ne = scale_vec(&j.e, &forms.n.eval(u));
        j.mul(u, &ua) == ne && j.mul(&ua, u) == ne
    });
    checks.push(report(LAPLACE, laplace));

    let pts: Vec<Vec<FieldElem>> = pairs.iter().map(|(u, _)| u.clone()).filter(|u| !f.eval(u).is_zero()).take(20).collect();
    let norm_pairs: Vec<(Vec<FieldElem>, Vec<FieldElem>)> =
        pts.iter().map(|u| (vec![forms.n.eval(u)], vec![f.eval(u)])).collect();
    let norm_ratio = common_ratio(&norm_pairs);
    checks.push(match &norm_ratio {
        Some(c) => Check::new(NORM, pts.len() >= 20.min(samples)).with_detail(format!("N = ({c}) f at {} points", pts.len())),
        None => Check::new(NORM, false).with_detail("N/f is not constant"),
    });

    // G_ab = T(e_a * e_b); grad N(u) = G u#.
    let g = crate::linalg::Mat::from_fn(n, n, |a, b| forms.t.eval(&j.mul(&basis(n, a), &basis(n, b))));
    let grad = f.gradient();
    let grad_pairs: Vec<(Vec<FieldElem>, Vec<FieldElem>)> = pts
        .iter()
        .map(|u| (g.mul_vec(&adjoint(j, forms, u)), grad.iter().map(|p| p.eval(u)).collect()))
        .collect();
    let gradient_ratio = common_ratio(&grad_pairs);
    checks.push(match &gradient_ratio {
        Some(c) => Check::new(ADJOINT_GRADIENT, true).with_detail(format!("G u# = ({c}) grad f at {} points", pts.len())),
        None => Check::new(ADJOINT_GRADIENT, false).with_detail("no common constant"),
    });
    let literal_pairs: Vec<(Vec<FieldElem>, Vec<FieldElem>)> = pts
        .iter()
        .map(|u| (adjoint(j, forms, u), grad.iter().map(|p| p.eval(u)).collect()))
        .collect();
    checks.push(Check {
        name: "adjoint proportional to gradient in these coordinates".into(),
        status: Status::Info,
        detail: Some(match common_ratio(&literal_pairs) {
            Some(c) => format!("yes, u# = ({c}) grad f"),
            None => "no; the trace form is not a multiple of the identity here".into(),
        }),
    });
    JordanReport { checks, norm_ratio, gradient_ratio }
}

/// Candidate units: the supplied one first, then small vectors off `V(f)`.
pub fn find_unit(f: &Poly, q: &PolyMatrix, candidate: Option<&[FieldElem]>) -> Option<Vec<FieldElem>> {
    let n = f.nvars();
    if let Some(c) = candidate {
        if build_jordan(f, q, c).is_ok() {
            return Some(c.to_vec());
        }
    }
    small_vectors(n, 3usize.saturating_pow(n.min(12) as u32))
        .into_iter()
        .map(|v| crate::poly::int_point(&v))
        .filter(|v| !f.eval(v).is_zero())
        .find(|v| build_jordan(f, q, v).is_ok())
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanJson {
    pub dim: usize,
    pub e: Vec<[String; 4]>,
    pub scale: [String; 4],
    /// Nonzero constants as `(i, j, k, value)`.
    pub structure_constants: Vec<(usize, usize, usize, [String; 4])>,
    #[serde(rename = "T")]
    pub t: Option<PolyJson>,
    #[serde(rename = "S")]
    pub s: Option<PolyJson>,
    #[serde(rename = "N")]
    pub n: Option<PolyJson>,
}

pub fn jordan_json(j: &JordanAlgebra, forms: Option<&MinimalPolyForms>) -> JordanJson {
    let one = |c: &FieldElem| point_to_json(std::slice::from_ref(c)).remove(0);
    let n = j.dim;
    let mut sc = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let c = j.at(a, b, k);
                if !c.is_zero() {
                    sc.push((a, b, k, one(c)));
                }
            }
        }
    }
    JordanJson {
        dim: n,
        e: point_to_json(&j.e),
        scale: one(&j.scale),
        structure_constants: sc,
        t: forms.map(|f| poly_to_json(&f.t)),
        s: forms.map(|f| poly_to_json(&f.s)),
        n: forms.map(|f| poly_to_json(&f.n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{mf_order, Mode};
    use crate::expr_io::parse_poly;
    use crate::poly::int_point;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    fn q_of(f: &Poly) -> PolyMatrix {
        mf_order(f, 1, &Mode::exact(1)).unwrap().certificate().unwrap().q.clone()
    }

    #[test]
    fn componentwise_algebra() {
        let f = p("x0*x1*x2", 3);
        let q = q_of(&f);
        let e = int_point(&[1, 1, 1]);
        assert_eq!(find_unit(&f, &q, None), Some(e.clone()));
        let j = build_jordan(&f, &q, &e).unwrap();
        let (u, v) = (int_point(&[2, -3, 5]), int_point(&[7, 1, -1]));
        assert_eq!(j.mul(&u, &v), int_point(&[14, -3, -5]));
        let forms = minimal_poly_forms(&j).unwrap();
        assert_eq!(forms.t, p("x0+x1+x2", 3));
        assert_eq!(forms.s, p("x0*x1+x0*x2+x1*x2", 3));
        assert_eq!(forms.n, f);
        assert_eq!(adjoint(&j, &forms, &int_point(&[1, 2, 3])), int_point(&[6, 3, 2]));
        assert_eq!(adjoint(&j, &forms, &e), e);
        let rep = verify_axioms(&j, &forms, &f, 50, 1);
        assert!(rep.all_passed(), "{:?}", rep.checks);
        assert_eq!(rep.norm_ratio, Some(FieldElem::one()));
    }

    #[test]
    fn symmetric_matrices() {
        let f = p("x0*x3*x5 - x0*x4^2 - x1^2*x5 + 2*x1*x2*x4 - x2^2*x3", 6);
        let q = q_of(&f);
        let e = int_point(&[1, 0, 0, 1, 0, 1]);
        let j = build_jordan(&f, &q, &e).unwrap();
        // symmetrized product of [[1,2,0],[2,0,1],[0,1,3]] and [[0,1,1],[1,2,0],[1,0,-1]]
        let a = int_point(&[1, 2, 0, 0, 1, 3]);
        let b = int_point(&[0, 1, 1, 2, 0, -1]);
        let prod = |x: &[FieldElem]| {
            let m = |r: usize, c: usize| x[[[0, 1, 2], [1, 3, 4], [2, 4, 5]][r][c]].clone();
            (0..3).map(move |r| (0..3).map(|c| m(r, c)).collect::<Vec<_>>()).collect::<Vec<_>>()
        };
        let (ma, mb) = (prod(&a), prod(&b));
        let mm = |x: &Vec<Vec<FieldElem>>, y: &Vec<Vec<FieldElem>>, r: usize, c: usize| {
            (0..3).fold(FieldElem::zero(), |acc, k| &acc + &(&x[r][k] * &y[k][c]))
        };
        let half = FieldElem::frac(1, 2);
        let expected: Vec<FieldElem> = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
            .iter()
            .map(|&(r, c)| &(&mm(&ma, &mb, r, c) + &mm(&mb, &ma, r, c)) * &half)
            .collect();
        assert_eq!(j.mul(&a, &b), expected);
        let forms = minimal_poly_forms(&j).unwrap();
        assert_eq!(forms.n, f);
        assert_eq!(forms.t, p("x0+x3+x5", 6));
        // rank-2 symmetric matrix
        let u = int_point(&[1, 1, 0, 1, 0, 0]);
        assert!(forms.n.eval(&u).is_zero());
        let ua = adjoint(&j, &forms, &u);
        assert!(j.mul(&u, &ua).iter().all(FieldElem::is_zero));
        let rep = verify_axioms(&j, &forms, &f, 50, 2);
        assert!(rep.all_passed(), "{:?}", rep.checks);
    }

    #[test]
    fn one_dimensional() {
        let f = p("x0^3", 1);
        let q = q_of(&f);
        let j = build_jordan(&f, &q, &int_point(&[1])).unwrap();
        assert_eq!(j.mul(&int_point(&[3]), &int_point(&[5])), int_point(&[15]));
        assert_eq!(minimal_poly_forms(&j), Err(JordanError::RankBelow3));
    }

    #[test]
    fn corrupted_constant_breaks_jordan_identity() {
        let f = p("x0*x1*x2", 3);
        let q = q_of(&f);
        let mut j = build_jordan(&f, &q, &int_point(&[1, 1, 1])).unwrap();
        let forms = minimal_poly_forms(&j).unwrap();
        // c[1][2][0] and c[2][1][0]
        j.c[(3 + 2) * 3] = FieldElem::one();
        j.c[(2 * 3 + 1) * 3] = FieldElem::one();
        let rep = verify_axioms(&j, &forms, &f, 50, 1);
        assert_eq!(rep.check(JORDAN_IDENTITY).unwrap().status, Status::Fail);
    }

    #[test]
    fn bad_unit_is_reported() {
        let f = p("x0*x1*x2", 3);
        let q = q_of(&f);
        assert!(matches!(build_jordan(&f, &q, &int_point(&[1, 2, 1])), Err(JordanError::NotUnit(_))));
    }
}
