//! Gradient maps, multiplicative Legendre transforms of cubics and the
//! Cremona identities relating them.

use rayon::prelude::*;
use thiserror::Error;

use crate::certify::{CertifyError, Check, Mode, ModeKind, MIN_TRIALS};
use crate::field::{Field, FieldElem};
use crate::grading::form_gradings;
use crate::linalg::Mat;
use crate::modp::{self, CrtAccumulator};
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::polymat::{check_nonsingular, hessian, power_table_mod, ModForm, PolyMatError, PolyMatrix};
use crate::sampling::{points_digest, random_ints, random_point, stream};
use crate::univariate::UPoly;

const MAX_BASIS: usize = 200_000;
const MAX_PRIMES: usize = 48;
const EXTRA_POINTS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LegendreError {
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("Legendre transforms are fitted for cubics only, got degree {0}")]
    NotCubic(u32),
    #[error("fit basis has {0} monomials")]
    TooLarge(usize),
    #[error("{0}")]
    Unstable(String),
}

impl From<PolyMatError> for LegendreError {
    fn from(e: PolyMatError) -> Self {
        LegendreError::Certify(match e {
            PolyMatError::Singular(k) => CertifyError::SingularHessian(k),
            other => CertifyError::Matrix(other),
        })
    }
}

impl From<crate::poly::PolyError> for LegendreError {
    fn from(e: crate::poly::PolyError) -> Self {
        LegendreError::Certify(e.into())
    }
}

/// `y_i = df/dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientMap {
    pub components: Vec<Poly>,
}

impl GradientMap {
    pub fn eval(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

pub fn gradient_map(f: &Poly) -> GradientMap {
    GradientMap { components: f.gradient() }
}

/// `g` with `g(grad f(x)) = f(x)^(d-1)`, together with how that identity was
/// checked.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreResult {
    pub g: Poly,
    pub g_text: String,
    pub mode: ModeKind,
    pub verified: bool,
    pub points: usize,
    pub failure_bound: Option<f64>,
    pub points_digest: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LegendreOutcome {
    Present(LegendreResult),
    Absent(String),
}

impl LegendreOutcome {
    pub fn result(&self) -> Option<&LegendreResult> {
        match self {
            LegendreOutcome::Present(r) => Some(r),
            LegendreOutcome::Absent(_) => None,
        }
    }

    pub fn is_present(&self) -> bool {
        self.result().is_some()
    }
}

/// Outcome of checking a family of polynomial identities `lhs_k = rhs_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub ok: bool,
    pub mode: ModeKind,
    pub points: usize,
    pub failure_bound: Option<f64>,
    pub points_digest: Option<String>,
}

/// Checks `lhs(x) = rhs(x)` componentwise. `exact` supplies both sides as
/// polynomials; `eval` evaluates both at a point. `deg` bounds the degree of
/// the difference.
fn check_identity<E, V>(n: usize, deg: u32, mode: &Mode, label: &str, exact: E, eval: V) -> IdentityCheck
where
    E: FnOnce() -> bool,
    V: Fn(&[FieldElem]) -> bool + Sync,
{
    match mode.kind {
        ModeKind::Exact => IdentityCheck { ok: exact(), mode: ModeKind::Exact, points: 0, failure_bound: None, points_digest: None },
        ModeKind::Probabilistic => {
            let deg = deg.max(1) as i64;
            let bound = 2 * deg;
            let trials = mode.trials.max(MIN_TRIALS);
            let mut rng = stream(mode.seed, label);
            let pts: Vec<Vec<FieldElem>> = (0..trials).map(|_| random_point(&mut rng, n, bound)).collect();
            let ok = pts.par_iter().all(|p| eval(p));
            let ratio = deg as f64 / (2 * bound + 1) as f64;
            IdentityCheck {
                ok,
                mode: ModeKind::Probabilistic,
                points: trials,
                failure_bound: Some(ratio.powi(trials as i32)),
                points_digest: Some(points_digest(&pts)),
            }
        }
    }
}

/// Multiplicative Legendre transform of a cubic, by a modular fit over the
/// cubic monomials in `y` of the right torus weight, then verification.
pub fn legendre_transform(f: &Poly, mode: &Mode) -> Result<LegendreOutcome, LegendreError> {
    let d = f.require_homogeneous()?;
    if d != 3 {
        return Err(LegendreError::NotCubic(d));
    }
    let n = f.nvars();
    check_nonsingular(&hessian(f)?, mode.seed)?;
    let grad = gradient_map(f);

    let (w, fw) = form_gradings(f);
    let y_weights: Vec<Vec<i64>> = w.iter().zip(&fw).map(|(wk, &fk)| wk.iter().map(|&wi| fk - wi).collect()).collect();
    let target: Vec<i64> = fw.iter().map(|&fk| (d as i64 - 1) * fk).collect();
    let basis: Vec<Monomial> = monomials_of_degree(n, d)
        .into_iter()
        .filter(|m| y_weights.iter().zip(&target).all(|(yw, &t)| m.weight(yw) == t))
        .collect();
    if basis.len() > MAX_BASIS {
        return Err(LegendreError::TooLarge(basis.len()));
    }
    if basis.is_empty() {
        return Ok(LegendreOutcome::Absent("no monomial of the required weight".into()));
    }

    let mut fitted = None;
    for attempt in 0..3 {
        let npts = (2 * basis.len() + EXTRA_POINTS) << attempt;
        let mut rng = stream(mode.seed, &format!("legendre/{attempt}"));
        let points: Vec<Vec<i64>> = (0..npts).map(|_| random_ints(&mut rng, n, 64)).collect();
        match lift(f, &grad, &basis, &points)? {
            Lift::Solved(g) => {
                fitted = Some(g);
                break;
            }
            Lift::Inconsistent => return Ok(LegendreOutcome::Absent("inconsistent fit".into())),
            Lift::Degenerate => continue,
        }
    }
    let g = fitted.ok_or_else(|| LegendreError::Unstable("fit stayed rank deficient after 3 draws".into()))?;

    let fd = f.pow(d - 1);
    let check = check_identity(
        n,
        d * (d - 1),
        mode,
        "legendre/verify",
        || g.compose(&grad.components) == fd,
        |p| g.eval(&grad.eval(p)) == f.eval(p).pow(d - 1),
    );
    if !check.ok {
        return Ok(LegendreOutcome::Absent("fitted g failed verification".into()));
    }
    Ok(LegendreOutcome::Present(LegendreResult {
        g_text: crate::expr_io::print_poly(&g),
        g,
        mode: check.mode,
        verified: true,
        points: check.points,
        failure_bound: check.failure_bound,
        points_digest: check.points_digest,
    }))
}

enum Lift {
    Solved(Poly),
    Inconsistent,
    Degenerate,
}

enum PrimeFit {
    Solved(Vec<u64>),
    Inconsistent,
    Degenerate,
    BadPrime,
}

fn fit_mod(f: &Poly, grad: &GradientMap, basis: &[Monomial], points: &[Vec<i64>], p: u64, omega: u64) -> PrimeFit {
    let d = f.total_degree().unwrap_or(0);
    let Some(f_mod) = ModForm::new(f, p, omega) else {
        return PrimeFit::BadPrime;
    };
    let Some(g_mod) = grad.components.iter().map(|c| ModForm::new(c, p, omega)).collect::<Option<Vec<_>>>() else {
        return PrimeFit::BadPrime;
    };
    let maxe = d as usize;
    let rows: Vec<(Vec<u64>, u64)> = points
        .par_iter()
        .map(|pt| {
            let pows = power_table_mod(pt, maxe, p);
            let y: Vec<u64> = g_mod.iter().map(|c| c.eval(&pows, p)).collect();
            let ypows: Vec<Vec<u64>> = y
                .iter()
                .map(|&v| {
                    let mut t = vec![1u64; maxe + 1];
                    for k in 1..=maxe {
                        t[k] = modp::mulmod(t[k - 1], v, p);
                    }
                    t
                })
                .collect();
            let row = basis
                .iter()
                .map(|m| {
                    let mut t = 1;
                    for (i, yp) in ypows.iter().enumerate() {
                        let e = m.exp(i) as usize;
                        if e > 0 {
                            t = modp::mulmod(t, yp[e], p);
                        }
                    }
                    t
                })
                .collect();
            (row, modp::powmod(f_mod.eval(&pows, p), d as u64 - 1, p))
        })
        .collect();
    let cols = basis.len();
    let nrows = rows.len();
    let mut a = Vec::with_capacity(nrows * cols);
    let mut b = Vec::with_capacity(nrows);
    for (r, v) in rows {
        a.extend(r);
        b.push(v);
    }
    let sol = modp::solve_mod(a, nrows, cols, b, 1, p);
    match sol.solutions.into_iter().next().flatten() {
        None => PrimeFit::Inconsistent,
        Some(_) if sol.rank < cols => PrimeFit::Degenerate,
        Some(x) => PrimeFit::Solved(x),
    }
}

fn lift(f: &Poly, grad: &GradientMap, basis: &[Monomial], points: &[Vec<i64>]) -> Result<Lift, LegendreError> {
    let field = f.field();
    let mut accs: Vec<(CrtAccumulator, CrtAccumulator)> = vec![Default::default(); basis.len()];
    let mut strikes = 0;
    for p in modp::primes().take(MAX_PRIMES) {
        let w1 = modp::cube_root_of_unity(p);
        let w2 = modp::mulmod(w1, w1, p);
        let omegas: &[u64] = if field == Field::QOmega { &[w1, w2] } else { &[w1] };
        let mut solved = Vec::new();
        let mut skip = false;
        for &om in omegas {
            match fit_mod(f, grad, basis, points, p, om) {
                PrimeFit::Solved(x) => solved.push(x),
                PrimeFit::BadPrime => skip = true,
                PrimeFit::Degenerate => return Ok(Lift::Degenerate),
                PrimeFit::Inconsistent => {
                    strikes += 1;
                    if strikes >= 2 {
                        return Ok(Lift::Inconsistent);
                    }
                    skip = true;
                }
            }
        }
        if skip {
            continue;
        }
        let mut stable = true;
        for (k, (re, om)) in accs.iter_mut().enumerate() {
            if field == Field::QOmega {
                let inv = modp::invmod(modp::submod(w1, w2, p), p).expect("distinct cube roots");
                let b = modp::mulmod(modp::submod(solved[0][k], solved[1][k], p), inv, p);
                let a = modp::submod(solved[0][k], modp::mulmod(b, w1, p), p);
                stable &= re.push(a, p);
                stable &= om.push(b, p);
            } else {
                stable &= re.push(solved[0][k], p);
            }
        }
        if stable {
            let terms = basis.iter().zip(&accs).map(|(m, (re, om))| {
                let a = re.value().cloned().unwrap_or_default();
                let b = if field == Field::QOmega { om.value().cloned().unwrap_or_default() } else { Default::default() };
                (*m, FieldElem::new(a, b))
            });
            return Ok(Lift::Solved(Poly::from_terms(f.nvars(), field, terms)?));
        }
    }
    Err(LegendreError::Unstable(format!("rational reconstruction did not stabilize within {MAX_PRIMES} primes")))
}

/// Checks `grad g(grad f(x)) = f(x)^(d-2) x`.
pub fn check_cremona_composition(f: &Poly, g: &Poly, mode: &Mode) -> Result<bool, LegendreError> {
    let d = f.require_homogeneous()?;
    let dg = g.require_homogeneous()?;
    if d != dg || f.nvars() != g.nvars() {
        return Ok(false);
    }
    if d < 2 {
        return Err(CertifyError::DegreeTooLow(d).into());
    }
    let n = f.nvars();
    let grad_f = gradient_map(f);
    let grad_g = g.gradient();
    let fk = f.pow(d - 2);
    let check = check_identity(
        n,
        (d - 1) * (d - 1),
        mode,
        "cremona/verify",
        || {
            grad_g.par_iter().enumerate().all(|(i, gi)| {
                let rhs = fk.try_mul(&Poly::var(n, f.field(), i)).expect("same ring");
                gi.compose(&grad_f.components) == rhs.with_field(f.field().join(g.field()))
            })
        },
        |p| {
            let y = grad_f.eval(p);
            let fv = f.eval(p).pow(d - 2);
            grad_g.iter().zip(p).all(|(gi, xi)| gi.eval(&y) == &fv * xi)
        },
    );
    Ok(check.ok)
}

/// `Q_ij = (d^2 g / dy_i dy_j)(grad f) - x_i x_j / 2` for a cubic `f`.
pub fn q_from_g(f: &Poly, g: &Poly) -> Result<PolyMatrix, LegendreError> {
    let d = f.require_homogeneous()?;
    if d != 3 {
        return Err(LegendreError::NotCubic(d));
    }
    let n = f.nvars();
    let field = f.field().join(g.field());
    let grad = gradient_map(f);
    let half = FieldElem::frac(1, 2);
    let hg = hessian(g)?;
    let out = PolyMatrix::from_fn(n, n, |i, j| {
        let xx = Poly::monomial(n, field, Monomial::var(i).mul(&Monomial::var(j)), half.clone());
        hg.get(i, j).compose(&grad.components).with_field(field).try_sub(&xx).expect("same ring")
    })?;
    Ok(out)
}

/// Compares [`q_from_g`] with a certificate's `Q` at `points` random points.
pub fn q_from_g_check(f: &Poly, g: &Poly, q: &PolyMatrix, points: usize, seed: u64) -> Result<Check, LegendreError> {
    let rebuilt = q_from_g(f, g)?;
    let mut rng = stream(seed, "q-from-g");
    let pts: Vec<Vec<FieldElem>> = (0..points).map(|_| random_point(&mut rng, f.nvars(), 20)).collect();
    let ok = pts.par_iter().all(|p| rebuilt.eval(p) == q.eval(p));
    Ok(Check::new("Q rebuilt from g", ok).with_detail(format!("{points} points, digest {}", points_digest(&pts))))
}

/// Detects a common factor of the components by restricting them to random
/// lines: a single line with coprime restrictions answers `false`.
pub fn common_factor_probe(grad: &GradientMap, trials: usize, seed: u64) -> bool {
    let n = grad.components.first().map(Poly::nvars).unwrap_or(0);
    let mut rng = stream(seed, "common-factor");
    for _ in 0..trials.max(1) {
        let p = random_point(&mut rng, n, 50);
        let q = random_point(&mut rng, n, 50);
        let mut acc: Option<UPoly> = None;
        for c in &grad.components {
            let u = UPoly::from_binary_form(&c.restrict_to_line(&p, &q));
            if u.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => u,
                Some(a) => a.gcd(&u),
            });
        }
        match acc {
            Some(a) if a.degree().unwrap_or(0) > 0 => {}
            _ => return false,
        }
    }
    true
}

/// Invertibility of `f H - grad f grad f^T` (that is `f^2` times the Hessian
/// of `log f`) at a random point off `V(f)`.
pub fn log_hessian_check(f: &Poly, seed: u64) -> Result<Check, LegendreError> {
    let h = hessian(f)?;
    let grad = f.gradient();
    let n = f.nvars();
    let mut rng = stream(seed, "log-hessian");
    for _ in 0..16 {
        let p = random_point(&mut rng, n, 32);
        let fv = f.eval(&p);
        if fv.is_zero() {
            continue;
        }
        let y: Vec<FieldElem> = grad.iter().map(|g| g.eval(&p)).collect();
        let outer = Mat::from_fn(n, n, |i, j| &y[i] * &y[j]);
        let m = h.eval(&p).scale(&fv).sub(&outer);
        let ok = !m.det().is_zero();
        return Ok(Check::new("Hessian of log f nondegenerate at a random point", ok));
    }
    Ok(Check::skipped("Hessian of log f nondegenerate at a random point", "no sample point off V(f)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    #[test]
    fn gradient_maps() {
        assert_eq!(gradient_map(&p("x0*x1*x2", 3)).components, vec![p("x1*x2", 3), p("x0*x2", 3), p("x0*x1", 3)]);
        assert_eq!(gradient_map(&p("x0^3", 1)).components, vec![p("3*x0^2", 1)]);
        assert_eq!(gradient_map(&p("x0^2*x1", 2)).components, vec![p("2*x0*x1", 2), p("x0^2", 2)]);
    }

    #[test]
    fn monomial_cubics() {
        let f = p("x0*x1*x2", 3);
        let out = legendre_transform(&f, &Mode::exact(3)).unwrap();
        assert_eq!(out.result().unwrap().g, p("x0*x1*x2", 3));
        let f = p("x0^2*x1", 2);
        let out = legendre_transform(&f, &Mode::exact(3)).unwrap();
        assert_eq!(out.result().unwrap().g, p("1/4*x0^2*x1", 2));
    }

    #[test]
    fn hankel_has_no_transform() {
        let f = p("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5);
        assert!(!legendre_transform(&f, &Mode::exact(3)).unwrap().is_present());
    }

    #[test]
    fn cremona_composition() {
        let f = p("x0*x1*x2", 3);
        let g = p("x0*x1*x2", 3);
        assert!(check_cremona_composition(&f, &g, &Mode::exact(1)).unwrap());
        assert!(check_cremona_composition(&f, &g, &Mode::probabilistic(20, 1)).unwrap());
        assert!(!check_cremona_composition(&f, &p("x0^3", 3), &Mode::exact(1)).unwrap());
    }

    #[test]
    fn q_rebuilt() {
        let f = p("x0*x1*x2", 3);
        let q = q_from_g(&f, &f).unwrap();
        let half = FieldElem::frac(1, 2);
        assert_eq!(*q.get(0, 0), p("-x0^2", 3).scale(&half));
        assert_eq!(*q.get(0, 1), p("x0*x1", 3).scale(&half));
    }

    #[test]
    fn common_factors() {
        assert!(common_factor_probe(&gradient_map(&p("x0^2*x1", 2)), 8, 1));
        assert!(!common_factor_probe(&gradient_map(&p("x0*x1*x2", 3)), 8, 1));
        assert!(common_factor_probe(&GradientMap { components: vec![p("x0^2", 2), p("x0*x1", 2)] }, 8, 1));
    }

    #[test]
    fn rejects_non_cubics() {
        assert_eq!(legendre_transform(&p("x0^2+x1^2", 2), &Mode::exact(1)), Err(LegendreError::NotCubic(2)));
    }
}
