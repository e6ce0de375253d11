//! Black-box interpolation of `f^r M^{-1}`.
//!
//! Every entry of `f^r M^{-1}` is a rational function that is homogeneous
//! for each torus grading of `(f, M)`. When it is a polynomial it lies in
//! the span of the degree-`delta` monomials of its weight, so each weight
//! class is fitted separately from values at random integer points. The
//! fits run modulo word-size primes and are lifted by Chinese remaindering
//! and rational reconstruction; the identity check afterwards is what makes
//! the result trustworthy.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::certify::{verify_mf, Mode, VerifyReport};
use crate::field::{Field, FieldElem};
use crate::grading::matrix_gradings;
use crate::modp::{self, CrtAccumulator};
use crate::poly::{monomial_count, monomials_of_degree, Monomial, Poly};
use crate::sampling::{random_ints, stream};

use super::{PolyMatError, PolyMatrix};

/// Refuse to enumerate more monomials than this.
pub const MAX_INTERP_MONOMIALS: u128 = 5_000_000;
const EXTRA_POINTS: usize = 16;
const MAX_PRIMES: usize = 48;
const SINGULAR_TRIALS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    /// Candidate for `f^r M^{-1}`; not yet verified.
    Fitted(PolyMatrix),
    /// Entry whose values are not matched by any form of the right degree
    /// and weight, at two different primes.
    Inconsistent { row: usize, col: usize },
    /// `r * deg f` is smaller than the degree of the entries of `M`.
    NegativeDegree,
}

#[derive(Clone, Debug)]
pub enum InverseOutcome {
    Present { q: PolyMatrix, report: VerifyReport },
    InconsistentFit { row: usize, col: usize },
    NegativeDegree,
    VerificationFailed { q: PolyMatrix, report: VerifyReport },
}

impl InverseOutcome {
    pub fn is_present(&self) -> bool {
        matches!(self, InverseOutcome::Present { .. })
    }

    pub fn matrix(&self) -> Option<&PolyMatrix> {
        match self {
            InverseOutcome::Present { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            InverseOutcome::Present { .. } => "present".into(),
            InverseOutcome::InconsistentFit { row, col } => {
                format!("absent: interpolation of entry ({row},{col}) is inconsistent")
            }
            InverseOutcome::NegativeDegree => "absent: negative entry degree".into(),
            InverseOutcome::VerificationFailed { .. } => "absent: fitted matrix failed verification".into(),
        }
    }
}

/// Computes `Q` with `M Q = Q M = f^r Id` when `f^r M^{-1}` is polynomial,
/// verifying the identity under `mode`.
pub fn scaled_inverse(m: &PolyMatrix, f: &Poly, r: u32, mode: &Mode) -> Result<InverseOutcome, PolyMatError> {
    match interpolate_scaled_inverse(m, f, r, mode.seed)? {
        FitOutcome::NegativeDegree => Ok(InverseOutcome::NegativeDegree),
        FitOutcome::Inconsistent { row, col } => Ok(InverseOutcome::InconsistentFit { row, col }),
        FitOutcome::Fitted(q) => {
            let report = verify_mf(m, &q, f, r, mode).map_err(|e| PolyMatError::ShapeMismatch(e.to_string()))?;
            if report.ok {
                Ok(InverseOutcome::Present { q, report })
            } else {
                Ok(InverseOutcome::VerificationFailed { q, report })
            }
        }
    }
}

/// Fails with [`PolyMatError::Singular`] when `det M` vanishes at
/// `SINGULAR_TRIALS` consecutive random integer points.
pub fn check_nonsingular(m: &PolyMatrix, seed: u64) -> Result<(), PolyMatError> {
    let mut rng = stream(seed, "nonsingular");
    let bound = 16 * (m.rows() as i64 + 1);
    for _ in 0..SINGULAR_TRIALS {
        let p: Vec<FieldElem> = random_ints(&mut rng, m.nvars(), bound).into_iter().map(FieldElem::from_int).collect();
        if !m.eval(&p).det().is_zero() {
            return Ok(());
        }
    }
    Err(PolyMatError::Singular(SINGULAR_TRIALS))
}

/// A polynomial reduced modulo a prime under one embedding of `w`.
pub(crate) struct ModForm {
    terms: Vec<(Vec<(usize, usize)>, u64)>,
}

impl ModForm {
    pub(crate) fn new(f: &Poly, p: u64, omega: u64) -> Option<ModForm> {
        let n = f.nvars();
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let c = modp::elem_mod(c, p, omega)?;
            let vars = m.exps(n).iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as usize)).collect();
            terms.push((vars, c));
        }
        Some(ModForm { terms })
    }

    pub(crate) fn eval(&self, pows: &[Vec<u64>], p: u64) -> u64 {
        let mut acc = 0;
        for (vars, c) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                t = modp::mulmod(t, pows[i][e], p);
            }
            acc = modp::addmod(acc, t, p);
        }
        acc
    }
}

pub(crate) fn power_table_mod(point: &[i64], maxe: usize, p: u64) -> Vec<Vec<u64>> {
    point
        .iter()
        .map(|&x| {
            let x = modp::i64_mod(x, p);
            let mut v = Vec::with_capacity(maxe + 1);
            v.push(1);
            for k in 1..=maxe {
                v.push(modp::mulmod(v[k - 1], x, p));
            }
            v
        })
        .collect()
}

struct Class {
    monomials: Vec<Monomial>,
    entries: Vec<(usize, usize)>,
}

enum PrimeFit {
    /// Coefficients per class, per entry, per monomial.
    Solved(Vec<Vec<Vec<u64>>>),
    Inconsistent(Vec<(usize, usize)>),
    Degenerate,
    BadPrime,
}

struct Problem<'a> {
    m: &'a PolyMatrix,
    f: &'a Poly,
    r: u32,
    classes: Vec<Class>,
    maxe: usize,
}

impl Problem<'_> {
    fn fit(&self, points: &[Vec<i64>], p: u64, omega: u64) -> PrimeFit {
        let s = self.m.rows();
        let Some(f_mod) = ModForm::new(self.f, p, omega) else {
            return PrimeFit::BadPrime;
        };
        let Some(m_mod) = self.m.entries().iter().map(|e| ModForm::new(e, p, omega)).collect::<Option<Vec<_>>>() else {
            return PrimeFit::BadPrime;
        };
        let samples: Vec<(Vec<Vec<u64>>, Vec<u64>)> = points
            .par_iter()
            .filter_map(|pt| {
                let pows = power_table_mod(pt, self.maxe, p);
                let mv: Vec<u64> = m_mod.iter().map(|e| e.eval(&pows, p)).collect();
                let inv = modp::inverse_mod(&mv, s, p)?;
                let fr = modp::powmod(f_mod.eval(&pows, p), self.r as u64, p);
                Some((pows, inv.into_iter().map(|x| modp::mulmod(x, fr, p)).collect()))
            })
            .collect();
        let needed = self.classes.iter().map(|c| c.monomials.len()).max().unwrap_or(0);
        if samples.len() < needed + EXTRA_POINTS / 2 {
            return PrimeFit::Degenerate;
        }
        let results: Vec<Result<Vec<Vec<u64>>, Vec<(usize, usize)>>> = self
            .classes
            .par_iter()
            .map(|class| {
                let rows = samples.len();
                let cols = class.monomials.len();
                let nrhs = class.entries.len();
                let mut a = Vec::with_capacity(rows * cols);
                let mut b = Vec::with_capacity(rows * nrhs);
                for (pows, vals) in &samples {
                    for mono in &class.monomials {
                        let mut t = 1;
                        for (i, pw) in pows.iter().enumerate() {
                            let e = mono.exp(i) as usize;
                            if e > 0 {
                                t = modp::mulmod(t, pw[e], p);
                            }
                        }
                        a.push(t);
                    }
                    for &(i, j) in &class.entries {
                        b.push(vals[i * s + j]);
                    }
                }
                let sol = modp::solve_mod(a, rows, cols, b, nrhs, p);
                let bad: Vec<(usize, usize)> = class
                    .entries
                    .iter()
                    .zip(&sol.solutions)
                    .filter(|(_, x)| x.is_none())
                    .map(|(e, _)| *e)
                    .collect();
                if !bad.is_empty() {
                    return Err(bad);
                }
                if sol.rank < cols {
                    return Err(Vec::new());
                }
                Ok(sol.solutions.into_iter().map(|x| x.expect("consistent")).collect())
            })
            .collect();
        let mut solved = Vec::with_capacity(results.len());
        let mut inconsistent = Vec::new();
        let mut degenerate = false;
        for r in results {
            match r {
                Ok(v) => solved.push(v),
                Err(bad) if bad.is_empty() => degenerate = true,
                Err(bad) => inconsistent.extend(bad),
            }
        }
        if !inconsistent.is_empty() {
            inconsistent.sort();
            PrimeFit::Inconsistent(inconsistent)
        } else if degenerate {
            PrimeFit::Degenerate
        } else {
            PrimeFit::Solved(solved)
        }
    }
}

/// Fits a candidate for `f^r M^{-1}` without verifying it.
pub fn interpolate_scaled_inverse(m: &PolyMatrix, f: &Poly, r: u32, seed: u64) -> Result<FitOutcome, PolyMatError> {
    let s = super::require_square(m)?;
    if (m.nvars(), m.field()) != (f.nvars(), f.field()) {
        return Err(PolyMatError::ShapeMismatch("matrix and form live in different rings".into()));
    }
    let d = f.require_homogeneous()?;
    let e = m.uniform_degree()?.ok_or(PolyMatError::Singular(0))?;
    let delta = r as i64 * d as i64 - e as i64;
    if delta < 0 {
        return Ok(FitOutcome::NegativeDegree);
    }
    let delta = delta as u32;
    check_nonsingular(m, seed)?;
    let n = f.nvars();
    let count = monomial_count(n, delta);
    if count > MAX_INTERP_MONOMIALS {
        return Err(PolyMatError::TooLarge(format!("{count} monomials of degree {delta} in {n} variables")));
    }

    let grading = matrix_gradings(f, m);
    let mut by_target: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..s {
        for j in 0..s {
            by_target.entry(grading.inverse_target(i, j, r)).or_default().push((i, j));
        }
    }
    let mut members: HashMap<Vec<i64>, Vec<Monomial>> = by_target.keys().map(|k| (k.clone(), Vec::new())).collect();
    for mono in monomials_of_degree(n, delta) {
        if let Some(v) = members.get_mut(&grading.monomial_key(&mono)) {
            v.push(mono);
        }
    }
    let classes: Vec<Class> = by_target
        .into_iter()
        .map(|(k, entries)| Class { monomials: members.remove(&k).unwrap_or_default(), entries })
        .collect();
    let largest = classes.iter().map(|c| c.monomials.len()).max().unwrap_or(0);
    let maxe = m
        .entries()
        .iter()
        .chain(std::iter::once(f))
        .flat_map(|e| e.max_exponents())
        .max()
        .unwrap_or(0)
        .max(delta) as usize;
    let problem = Problem { m, f, r, classes, maxe };
    let bound = (2 * delta as i64 * s as i64 * 16).max(16);

    for attempt in 0..3 {
        let npts = (largest + EXTRA_POINTS) << attempt;
        let mut rng = stream(seed, &format!("interpolate/{attempt}"));
        let points: Vec<Vec<i64>> = (0..npts).map(|_| random_ints(&mut rng, n, bound)).collect();
        match lift(&problem, &points, f.field().join(m.field()))? {
            Some(out) => return Ok(out),
            None => continue,
        }
    }
    Err(PolyMatError::Unstable("interpolation points stayed degenerate after 3 draws".into()))
}

/// Runs the fit over successive primes. `None` asks for fresh points.
fn lift(problem: &Problem<'_>, points: &[Vec<i64>], field: Field) -> Result<Option<FitOutcome>, PolyMatError> {
    let shape: Vec<(usize, usize)> = problem.classes.iter().map(|c| (c.entries.len(), c.monomials.len())).collect();
    let fresh = || -> Vec<Vec<Vec<(CrtAccumulator, CrtAccumulator)>>> {
        shape.iter().map(|&(ne, nm)| vec![vec![Default::default(); nm]; ne]).collect()
    };
    let mut accs = fresh();
    let mut strikes: HashMap<(usize, usize), usize> = HashMap::new();
    for p in modp::primes().take(MAX_PRIMES) {
        let w1 = modp::cube_root_of_unity(p);
        let fits = match field {
            Field::Q => vec![problem.fit(points, p, w1)],
            Field::QOmega => vec![problem.fit(points, p, w1), problem.fit(points, p, modp::mulmod(w1, w1, p))],
        };
        let mut solved = Vec::new();
        let mut retry_prime = false;
        for fit in fits {
            match fit {
                PrimeFit::Solved(v) => solved.push(v),
                PrimeFit::BadPrime => retry_prime = true,
                PrimeFit::Degenerate => return Ok(None),
                PrimeFit::Inconsistent(bad) => {
                    for e in bad {
                        let k = strikes.entry(e).or_default();
                        *k += 1;
                        if *k >= 2 {
                            return Ok(Some(FitOutcome::Inconsistent { row: e.0, col: e.1 }));
                        }
                    }
                    retry_prime = true;
                }
            }
        }
        if retry_prime {
            continue;
        }
        let mut stable = true;
        let inv_diff = (field == Field::QOmega).then(|| {
            let w2 = modp::mulmod(w1, w1, p);
            modp::invmod(modp::submod(w1, w2, p), p).expect("distinct cube roots")
        });
        for (ci, class_acc) in accs.iter_mut().enumerate() {
            for (ei, entry_acc) in class_acc.iter_mut().enumerate() {
                for (mi, (acc_re, acc_om)) in entry_acc.iter_mut().enumerate() {
                    let v1 = solved[0][ci][ei][mi];
                    match inv_diff {
                        None => stable &= acc_re.push(v1, p),
                        Some(inv) => {
                            let v2 = solved[1][ci][ei][mi];
                            let b = modp::mulmod(modp::submod(v1, v2, p), inv, p);
                            let a = modp::submod(v1, modp::mulmod(b, w1, p), p);
                            stable &= acc_re.push(a, p);
                            stable &= acc_om.push(b, p);
                        }
                    }
                }
            }
        }
        if stable {
            return Ok(Some(FitOutcome::Fitted(assemble(problem, &accs, field)?)));
        }
    }
    Err(PolyMatError::Unstable(format!("rational reconstruction did not stabilize within {MAX_PRIMES} primes")))
}

fn assemble(
    problem: &Problem<'_>,
    accs: &[Vec<Vec<(CrtAccumulator, CrtAccumulator)>>],
    field: Field,
) -> Result<PolyMatrix, PolyMatError> {
    let s = problem.m.rows();
    let n = problem.f.nvars();
    let mut q = PolyMatrix::zeros(s, s, n, field);
    for (class, class_acc) in problem.classes.iter().zip(accs) {
        for (&(i, j), entry_acc) in class.entries.iter().zip(class_acc) {
            let terms = class.monomials.iter().zip(entry_acc).map(|(mono, (re, om))| {
                let a = re.value().cloned().unwrap_or_default();
                let b = if field == Field::QOmega { om.value().cloned().unwrap_or_default() } else { Default::default() };
                (*mono, FieldElem::new(a, b))
            });
            q.set(i, j, Poly::from_terms(n, field, terms)?);
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;
    use crate::polymat::hessian;

    fn p(src: &str, n: usize) -> Poly {
        parse_poly(src, n, Field::Q).unwrap()
    }

    #[test]
    fn monomial_cubic() {
        let f = p("x0*x1*x2", 3);
        let h = hessian(&f).unwrap();
        let FitOutcome::Fitted(q) = interpolate_scaled_inverse(&h, &f, 1, 5).unwrap() else {
            panic!("expected a fit");
        };
        let expected = PolyMatrix::from_entries(
            3,
            3,
            ["-x0^2", "x0*x1", "x0*x2", "x0*x1", "-x1^2", "x1*x2", "x0*x2", "x1*x2", "-x2^2"]
                .iter()
                .map(|s| p(s, 3).scale(&FieldElem::frac(1, 2)))
                .collect(),
        )
        .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn weighted_binary_cubic() {
        let f = p("x0^2*x1", 2);
        let h = hessian(&f).unwrap();
        let FitOutcome::Fitted(q) = interpolate_scaled_inverse(&h, &f, 1, 5).unwrap() else {
            panic!("expected a fit");
        };
        let half = FieldElem::frac(1, 2);
        let expected =
            PolyMatrix::from_entries(2, 2, ["0", "x0*x1", "x0*x1", "-x1^2"].iter().map(|s| p(s, 2).scale(&half)).collect())
                .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn hankel_is_inconsistent() {
        let f = p("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5);
        let h = hessian(&f).unwrap();
        assert!(matches!(interpolate_scaled_inverse(&h, &f, 1, 5).unwrap(), FitOutcome::Inconsistent { .. }));
    }

    #[test]
    fn singular_matrix_reported() {
        let f = p("x0^3", 2);
        let h = hessian(&f).unwrap();
        assert!(matches!(interpolate_scaled_inverse(&h, &f, 1, 5), Err(PolyMatError::Singular(16))));
    }
}
