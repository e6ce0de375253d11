//! Matrix factorization certificates for Hessians: verification of
//! `A B = B A = f^r Id`, search for the minimal `r`, JSON certificates and
//! their re-verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr_io::{
    matrix_from_json, matrix_to_json, point_from_json, point_to_json, poly_from_json, poly_to_json, print_poly,
    MatrixJson, PolyJson,
};
use crate::field::{Field, FieldElem};
use crate::linalg::Mat;
use crate::poly::{int_point, Poly, PolyError};
use crate::polymat::{det, hessian, scaled_inverse, InverseOutcome, PolyMatError, PolyMatrix};
use crate::sampling::{hypersurface_points, points_digest, random_point, stream, SamplingError};

/// Fewest evaluation points used by probabilistic verification.
pub const MIN_TRIALS: usize = 20;
/// Above this many variables verification defaults to probabilistic.
pub const EXACT_VAR_LIMIT: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exact,
    #[serde(rename = "prob")]
    Probabilistic,
}

/// How identities are checked, and the seed of every random choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mode {
    pub kind: ModeKind,
    pub trials: usize,
    pub seed: u64,
}

impl Mode {
    pub fn exact(seed: u64) -> Mode {
        Mode { kind: ModeKind::Exact, trials: MIN_TRIALS, seed }
    }

    pub fn probabilistic(trials: usize, seed: u64) -> Mode {
        Mode { kind: ModeKind::Probabilistic, trials: trials.max(MIN_TRIALS), seed }
    }

    /// Exact up to [`EXACT_VAR_LIMIT`] variables, probabilistic above.
    pub fn default_for(nvars: usize, seed: u64) -> Mode {
        if nvars <= EXACT_VAR_LIMIT {
            Mode::exact(seed)
        } else {
            Mode::probabilistic(MIN_TRIALS, seed)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Info, detail: Some(detail.into()) }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Skipped, detail: Some(detail.into()) }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] PolyMatError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("Hessian determinant vanishes identically (at {0} random points); polynomials with vanishing Hessian determinants are outside the theory")]
    SingularHessian(usize),
    #[error("degree {0} is below 2")]
    DegreeTooLow(u32),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// One entry of `A B - f^r Id` or `B A - f^r Id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub product: String,
    pub row: usize,
    pub col: usize,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub mode: ModeKind,
    pub r: u32,
    /// Number of evaluation points (0 in exact mode).
    pub points: usize,
    /// Upper bound on the chance that a false identity passed.
    pub failure_bound: Option<f64>,
    pub points_digest: Option<String>,
    pub residuals: Vec<ResidualEntry>,
}

impl VerifyReport {
    pub fn failing(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.residuals.iter().filter(|e| !e.zero)
    }
}

fn residual_entries(label: &str, zero: impl Fn(usize, usize) -> bool, n: usize) -> Vec<ResidualEntry> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(ResidualEntry { product: label.into(), row: i, col: j, zero: zero(i, j) });
        }
    }
    out
}

/// Checks `A B = B A = f^r Id` under `mode`.
pub fn verify_mf(a: &PolyMatrix, b: &PolyMatrix, f: &Poly, r: u32, mode: &Mode) -> Result<VerifyReport, CertifyError> {
    verify_mf_scaled(a, b, f, r, 0, mode)
}

/// Checks `A (f^k B) = (f^k B) A = f^(r+k) Id`. In exact mode the common
/// factor `f^k` is cancelled (the polynomial ring is a domain), so the check
/// reduces to `A B = B A = f^r Id`; in probabilistic mode `f^k B` is
/// evaluated directly.
pub fn verify_mf_scaled(
    a: &PolyMatrix,
    b: &PolyMatrix,
    f: &Poly,
    r: u32,
    k: u32,
    mode: &Mode,
) -> Result<VerifyReport, CertifyError> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(CertifyError::SizeMismatch(format!(
            "{}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if (a.nvars(), a.field()) != (f.nvars(), f.field()) || (b.nvars(), b.field()) != (f.nvars(), f.field()) {
        return Err(CertifyError::SizeMismatch("matrices and form live in different rings".into()));
    }
    let n = a.rows();
    let total = r + k;
    match mode.kind {
        ModeKind::Exact => {
            let fr = f.pow(r);
            let target = |i: usize, j: usize| if i == j { fr.clone() } else { Poly::zero(f.nvars(), f.field()) };
            let ab = a.try_mul(b)?;
            let ba = b.try_mul(a)?;
            let mut residuals = residual_entries("AB", |i, j| *ab.get(i, j) == target(i, j), n);
            residuals.extend(residual_entries("BA", |i, j| *ba.get(i, j) == target(i, j), n));
            Ok(VerifyReport {
                ok: residuals.iter().all(|e| e.zero),
                mode: ModeKind::Exact,
                r: total,
                points: 0,
                failure_bound: None,
                points_digest: None,
                residuals,
            })
        }
        ModeKind::Probabilistic => {
            let d = f.total_degree().unwrap_or(0) as i64;
            let deg = (total as i64 * d).max(1);
            let bound = 2 * deg;
            let mut rng = stream(mode.seed, &format!("verify/{total}"));
            let trials = mode.trials.max(MIN_TRIALS);
            let points: Vec<Vec<FieldElem>> = (0..trials).map(|_| random_point(&mut rng, f.nvars(), bound)).collect();
            let per_point: Vec<(Vec<bool>, Vec<bool>)> = points
                .par_iter()
                .map(|p| {
                    let am = a.eval(p);
                    let fv = f.eval(p);
                    let bm = b.eval(p).scale(&fv.pow(k));
                    let target = Mat::identity(n).scale(&fv.pow(total));
                    let ab = am.mul(&bm).sub(&target);
                    let ba = bm.mul(&am).sub(&target);
                    (ab.data().iter().map(FieldElem::is_zero).collect(), ba.data().iter().map(FieldElem::is_zero).collect())
                })
                .collect();
            let zero_ab = |i: usize, j: usize| per_point.iter().all(|(ab, _)| ab[i * n + j]);
            let zero_ba = |i: usize, j: usize| per_point.iter().all(|(_, ba)| ba[i * n + j]);
            let mut residuals = residual_entries("AB", zero_ab, n);
            residuals.extend(residual_entries("BA", zero_ba, n));
            let ratio = deg as f64 / (2 * bound + 1) as f64;
            Ok(VerifyReport {
                ok: residuals.iter().all(|e| e.zero),
                mode: ModeKind::Probabilistic,
                r: total,
                points: trials,
                failure_bound: Some(ratio.powi(trials as i32)),
                points_digest: Some(points_digest(&points)),
                residuals,
            })
        }
    }
}

/// A verified Hessian matrix factorization of `f^r`.
#[derive(Clone, Debug)]
pub struct MFCertificate {
    pub f: Poly,
    pub r: u32,
    pub h: PolyMatrix,
    pub q: PolyMatrix,
    pub mode: Mode,
    pub checks: Vec<Check>,
    pub report: VerifyReport,
}

/// A point obstructing `H Q = f^r Id`: either `f(p) = 0` with `H(p)`
/// invertible, or `f(p) != 0` with `H(p)` singular.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: Vec<FieldElem>,
    pub f_value: FieldElem,
    pub det_h: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub r: u32,
    pub outcome: String,
}

#[derive(Clone, Debug)]
pub enum MfOrder {
    Found { certificate: Box<MFCertificate>, attempts: Vec<Attempt> },
    Absent { attempts: Vec<Attempt>, witness: Option<Witness> },
}

impl MfOrder {
    pub fn r(&self) -> Option<u32> {
        match self {
            MfOrder::Found { certificate, .. } => Some(certificate.r),
            MfOrder::Absent { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&MFCertificate> {
        match self {
            MfOrder::Found { certificate, .. } => Some(certificate),
            MfOrder::Absent { .. } => None,
        }
    }
}

fn entry_degree_check(q: &PolyMatrix, expected: i64) -> Check {
    let ok = match q.uniform_degree() {
        Ok(Some(e)) => e as i64 == expected,
        Ok(None) => false,
        Err(_) => false,
    };
    Check::new("Q entries homogeneous of degree r*d-(d-2)", ok).with_detail(format!("expected degree {expected}"))
}

fn certificate_checks(f: &Poly, h: &PolyMatrix, q: &PolyMatrix, r: u32, report: &VerifyReport) -> Vec<Check> {
    let d = f.total_degree().unwrap_or(0) as i64;
    let hf = hessian(f).map(|x| x == *h).unwrap_or(false);
    let ab_ok = report.residuals.iter().filter(|e| e.product == "AB").all(|e| e.zero);
    let ba_ok = report.residuals.iter().filter(|e| e.product == "BA").all(|e| e.zero);
    vec![
        Check::new("H = hessian(f)", hf),
        Check::new("H*Q = f^r*Id", ab_ok),
        Check::new("Q*H = f^r*Id", ba_ok),
        entry_degree_check(q, r as i64 * d - (d - 2)),
    ]
}

/// Searches for a [`Witness`]: first on `V(f)`, then off it.
pub fn find_witness(f: &Poly, h: &PolyMatrix, seed: u64) -> Option<Witness> {
    if let Ok(pts) = hypersurface_points(f, 20, &mut stream(seed, "witness")) {
        let found = pts.into_iter().find_map(|p| {
            let dv = h.eval(&p).det();
            (!dv.is_zero()).then_some(Witness { point: p, f_value: FieldElem::zero(), det_h: dv })
        });
        if found.is_some() {
            return found;
        }
    }
    // Off the hypersurface: det H vanishing where f does not.
    witness_box(f.nvars()).into_iter().find_map(|v| {
        let p = int_point(&v);
        let fv = f.eval(&p);
        if fv.is_zero() || !h.eval(&p).det().is_zero() {
            return None;
        }
        Some(Witness { point: p, f_value: fv, det_h: FieldElem::zero() })
    })
}

fn witness_box(n: usize) -> Vec<Vec<i64>> {
    if n > 6 {
        return crate::sampling::small_vectors(n, 4000);
    }
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-2..=2).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().filter(|&&c| c != 0).count(), v.iter().map(|c| c.abs()).sum::<i64>()));
    out
}

/// Smallest `r <= rmax` for which the Hessian is a matrix factorization of
/// `f^r`, with its certificate.
pub fn mf_order(f: &Poly, rmax: u32, mode: &Mode) -> Result<MfOrder, CertifyError> {
    let d = f.require_homogeneous()?;
    if d < 2 {
        return Err(CertifyError::DegreeTooLow(d));
    }
    let h = hessian(f)?;
    crate::polymat::check_nonsingular(&h, mode.seed).map_err(|e| match e {
        PolyMatError::Singular(k) => CertifyError::SingularHessian(k),
        other => other.into(),
    })?;
    let mut attempts = Vec::new();
    for r in 1..=rmax {
        let outcome = scaled_inverse(&h, f, r, mode)?;
        attempts.push(Attempt { r, outcome: outcome.describe() });
        if let InverseOutcome::Present { q, report } = outcome {
            let checks = certificate_checks(f, &h, &q, r, &report);
            let certificate = MFCertificate { f: f.clone(), r, h, q, mode: *mode, checks, report };
            return Ok(MfOrder::Found { certificate: Box::new(certificate), attempts });
        }
    }
    let witness = find_witness(f, &h, mode.seed);
    Ok(MfOrder::Absent { attempts, witness })
}

/// Exact Euler identities `H x = (d-1) grad f` and `<grad f, x> = d f`.
pub fn euler_identities(f: &Poly) -> Result<Vec<Check>, CertifyError> {
    let d = f.require_homogeneous()?;
    let n = f.nvars();
    let grad = f.gradient();
    let h = hessian(f)?;
    let x = PolyMatrix::from_fn(n, 1, |i, _| Poly::var(n, f.field(), i))?;
    let hx = h.try_mul(&x)?;
    let dm1 = FieldElem::from_int(d as i64 - 1);
    let first = (0..n).all(|i| *hx.get(i, 0) == grad[i].scale(&dm1));
    let mut euler = Poly::zero(n, f.field());
    for (i, g) in grad.iter().enumerate() {
        euler = &euler + &(g * &Poly::var(n, f.field(), i));
    }
    let second = euler == f.scale(&FieldElem::from_int(d as i64));
    Ok(vec![
        Check::new(format!("H*x = {}*grad f", d - 1), first),
        Check::new(format!("<grad f, x> = {d}*f"), second),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityReport {
    pub divisible: bool,
    pub method: String,
    pub points: usize,
    /// A point with `f = 0` and `det H != 0`, when one was seen.
    pub witness: Option<Vec<FieldElem>>,
}

/// Whether `f` divides `det H(f)`: symbolic division in exact mode with at
/// most 9 variables, otherwise vanishing of `det H` at 20 points of `V(f)`.
pub fn hessian_divisibility_check(f: &Poly, mode: &Mode) -> Result<DivisibilityReport, CertifyError> {
    f.require_homogeneous()?;
    let h = hessian(f)?;
    let n = f.nvars();
    if mode.kind == ModeKind::Exact && n <= 9 {
        let dh = det(&h)?;
        let divisible = dh.is_zero() || dh.div_exact(f).is_some();
        let witness = if divisible { None } else { find_witness(f, &h, mode.seed).map(|w| w.point) };
        return Ok(DivisibilityReport { divisible, method: "exact division".into(), points: 0, witness });
    }
    let pts = hypersurface_points(f, 20, &mut stream(mode.seed, "divisibility"))?;
    let witness = pts.iter().find(|p| h.eval(p).rank() == n).cloned();
    Ok(DivisibilityReport {
        divisible: witness.is_none(),
        method: "vanishing on sampled points of V(f)".into(),
        points: pts.len(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub point: Vec<[String; 4]>,
    pub f_value: [String; 4],
    pub det_h: [String; 4],
}

/// Serialized certificate. Contains nothing time- or host-dependent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub f: PolyJson,
    pub f_text: String,
    pub nvars: usize,
    pub field: Field,
    pub degree: u32,
    pub r: Option<u32>,
    pub mode: ModeKind,
    pub seed: u64,
    pub trials: usize,
    #[serde(rename = "H")]
    pub h: MatrixJson,
    #[serde(rename = "Q")]
    pub q: Option<MatrixJson>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_digest: Option<String>,
    #[serde(default)]
    pub attempts: Vec<Attempt>,
}

fn witness_label(on_hypersurface: bool) -> &'static str {
    if on_hypersurface {
        "witness: f(p) = 0 and det H(p) != 0"
    } else {
        "witness: f(p) != 0 and det H(p) = 0"
    }
}

fn witness_json(w: &Witness) -> WitnessJson {
    let one = |c: &FieldElem| point_to_json(std::slice::from_ref(c)).remove(0);
    WitnessJson { point: point_to_json(&w.point), f_value: one(&w.f_value), det_h: one(&w.det_h) }
}

/// Certificate document for an `mf_order` outcome.
pub fn certificate_json(f: &Poly, mode: &Mode, outcome: &MfOrder) -> Result<CertificateJson, CertifyError> {
    let degree = f.require_homogeneous()?;
    let base = |h: &PolyMatrix| CertificateJson {
        f: poly_to_json(f),
        f_text: print_poly(f),
        nvars: f.nvars(),
        field: f.field(),
        degree,
        r: None,
        mode: mode.kind,
        seed: mode.seed,
        trials: if mode.kind == ModeKind::Exact { 0 } else { mode.trials },
        h: matrix_to_json(h),
        q: None,
        checks: Vec::new(),
        witness: None,
        failure_bound: None,
        points_digest: None,
        attempts: Vec::new(),
    };
    Ok(match outcome {
        MfOrder::Found { certificate, attempts } => CertificateJson {
            r: Some(certificate.r),
            q: Some(matrix_to_json(&certificate.q)),
            checks: certificate.checks.clone(),
            failure_bound: certificate.report.failure_bound,
            points_digest: certificate.report.points_digest.clone(),
            attempts: attempts.clone(),
            ..base(&certificate.h)
        },
        MfOrder::Absent { attempts, witness } => {
            let h = hessian(f)?;
            let mut checks = vec![Check::new("H = hessian(f)", true)];
            checks.extend(attempts.iter().map(|a| Check::info(format!("r = {}", a.r), a.outcome.clone())));
            if let Some(w) = witness {
                checks.push(Check::new(witness_label(w.f_value.is_zero()), true));
            }
            CertificateJson {
                checks,
                witness: witness.as_ref().map(witness_json),
                attempts: attempts.clone(),
                ..base(&h)
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReverifyReport {
    pub ok: bool,
    pub checks: Vec<Check>,
}

/// Re-checks a certificate from its recorded data alone: exact
/// re-expansion, or replay of the recorded random points.
pub fn reverify(cert: &CertificateJson) -> Result<ReverifyReport, CertifyError> {
    let malformed = |e: &dyn std::fmt::Display| CertifyError::Malformed(e.to_string());
    let f = poly_from_json(&cert.f).map_err(|e| malformed(&e))?;
    if f.nvars() != cert.nvars || f.field() != cert.field {
        return Err(CertifyError::Malformed("header does not match f".into()));
    }
    let h = matrix_from_json(&cert.h).map_err(|e| malformed(&e))?;
    let mut checks = Vec::new();
    let d = f.require_homogeneous()?;
    checks.push(Check::new("degree matches", d == cert.degree));
    checks.push(Check::new("H = hessian(f)", hessian(&f).map(|x| x == h).unwrap_or(false)));
    let mode = Mode { kind: cert.mode, trials: cert.trials, seed: cert.seed };
    match (cert.r, &cert.q) {
        (Some(r), Some(qj)) => {
            let q = matrix_from_json(qj).map_err(|e| malformed(&e))?;
            if q.rows() != h.rows() || !q.is_square() {
                return Err(CertifyError::Malformed("Q has the wrong shape".into()));
            }
            let report = verify_mf(&h, &q, &f, r, &mode)?;
            checks.push(Check::new("H*Q = f^r*Id", report.residuals.iter().filter(|e| e.product == "AB").all(|e| e.zero)));
            checks.push(Check::new("Q*H = f^r*Id", report.residuals.iter().filter(|e| e.product == "BA").all(|e| e.zero)));
            checks.push(entry_degree_check(&q, r as i64 * d as i64 - (d as i64 - 2)));
            if cert.mode == ModeKind::Probabilistic {
                checks.push(Check::new("replayed points match recorded digest", report.points_digest == cert.points_digest));
            }
        }
        (None, None) => {
            if let Some(w) = &cert.witness {
                let p = point_from_json(&w.point).map_err(|e| malformed(&e))?;
                if p.len() != f.nvars() {
                    return Err(CertifyError::Malformed("witness has the wrong dimension".into()));
                }
                let values = point_from_json(&[w.f_value.clone(), w.det_h.clone()]).map_err(|e| malformed(&e))?;
                let (fv, dv) = (f.eval(&p), h.eval(&p).det());
                let kind_ok = if values[0].is_zero() { !dv.is_zero() } else { dv.is_zero() };
                checks.push(Check::new(
                    witness_label(values[0].is_zero()),
                    kind_ok && fv == values[0] && dv == values[1],
                ));
            }
        }
        _ => return Err(CertifyError::Malformed("r and Q must be both present or both absent".into())),
    }
    Ok(ReverifyReport { ok: checks.iter().all(Check::passed), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    fn triangle_q() -> PolyMatrix {
        let half = FieldElem::frac(1, 2);
        PolyMatrix::from_entries(
            3,
            3,
            ["-x0^2", "x0*x1", "x0*x2", "x0*x1", "-x1^2", "x1*x2", "x0*x2", "x1*x2", "-x2^2"]
                .iter()
                .map(|s| p(s, 3).scale(&half))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn verify_known_factorization() {
        let f = p("x0*x1*x2", 3);
        let h = hessian(&f).unwrap();
        let q = triangle_q();
        assert!(verify_mf(&h, &q, &f, 1, &Mode::exact(1)).unwrap().ok);
        assert!(verify_mf(&h, &q, &f, 1, &Mode::probabilistic(20, 1)).unwrap().ok);
        let mut bad = q.clone();
        bad.set(0, 0, q.get(0, 0) + &p("x0^2", 3));
        let rep = verify_mf(&h, &bad, &f, 1, &Mode::probabilistic(20, 1)).unwrap();
        assert!(!rep.ok);
        assert!(rep.failing().count() > 0);
        assert!(!verify_mf(&h, &bad, &f, 1, &Mode::exact(1)).unwrap().ok);
    }

    #[test]
    fn trivial_factorization() {
        let one = Poly::one(1, Field::Q);
        let id = PolyMatrix::identity(1, 1, Field::Q);
        assert!(verify_mf(&id, &id, &one, 1, &Mode::exact(0)).unwrap().ok);
    }

    #[test]
    fn size_mismatch() {
        let f = p("x0*x1*x2", 3);
        let h = hessian(&f).unwrap();
        let id = PolyMatrix::identity(2, 3, Field::Q);
        assert!(matches!(verify_mf(&h, &id, &f, 1, &Mode::exact(0)), Err(CertifyError::SizeMismatch(_))));
    }

    #[test]
    fn order_of_monomial_cubic() {
        let f = p("x0*x1*x2", 3);
        let out = mf_order(&f, 3, &Mode::exact(3)).unwrap();
        assert_eq!(out.r(), Some(1));
        assert_eq!(out.certificate().unwrap().q, triangle_q());
    }

    #[test]
    fn singular_hessian_is_reported() {
        let f = p("x0^3+x1^3", 3);
        assert!(matches!(mf_order(&f, 2, &Mode::exact(3)), Err(CertifyError::SingularHessian(16))));
    }

    #[test]
    fn euler() {
        for c in euler_identities(&p("x0^3+x1^3+x2^3-3*x0*x1*x2", 3)).unwrap() {
            assert_eq!(c.status, Status::Pass, "{}", c.name);
        }
    }

    #[test]
    fn divisibility() {
        let f = p("x0*x1*x2", 3);
        assert!(hessian_divisibility_check(&f, &Mode::exact(1)).unwrap().divisible);
        assert!(hessian_divisibility_check(&f, &Mode::probabilistic(20, 1)).unwrap().divisible);
        // det H = 8 (x0 x4 - 4 x1 x3 + 3 x2^2) f for the Hankel cubic.
        let hankel = p("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5);
        assert!(hessian_divisibility_check(&hankel, &Mode::exact(1)).unwrap().divisible);
        assert!(hessian_divisibility_check(&hankel, &Mode::probabilistic(20, 1)).unwrap().divisible);
        let g = p("x0*x3 - x1*x2", 4);
        let rep = hessian_divisibility_check(&g, &Mode::probabilistic(20, 1)).unwrap();
        assert!(!rep.divisible);
        assert!(g.eval(&rep.witness.unwrap()).is_zero());
        let c = p("x0^2*x1 + x1^2*x2", 3);
        let rep = hessian_divisibility_check(&c, &Mode::exact(1)).unwrap();
        assert!(!rep.divisible);
        assert!(c.eval(&rep.witness.unwrap()).is_zero());
    }

    #[test]
    fn certificate_round_trip_and_tamper() {
        let f = p("x0*x1*x2", 3);
        let mode = Mode::exact(9);
        let out = mf_order(&f, 3, &mode).unwrap();
        let cert = certificate_json(&f, &mode, &out).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert!(reverify(&back).unwrap().ok);
        let mut tampered = back.clone();
        tampered.q.as_mut().unwrap().entries[0].terms[0].num = "7".into();
        assert!(!reverify(&tampered).unwrap().ok);
    }
}
