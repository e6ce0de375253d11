//! End-to-end run on one form: certify, Legendre transform, Cremona
//! identities, fake-Cremona probe, Jordan algebra, secant checks.

use serde::Serialize;

use crate::catalog::{converse_rank_check, secant_singularity_check, CatalogEntry, SecantReport};
use crate::certify::{certificate_json, mf_order, CertificateJson, Check, Mode, MfOrder, Status};
use crate::expr_io::{poly_to_json, print_poly, PolyJson};
use crate::field::{Field, FieldElem};
use crate::jordan::{build_jordan, find_unit, jordan_json, minimal_poly_forms, verify_axioms, JordanJson};
use crate::legendre::{
    check_cremona_composition, common_factor_probe, gradient_map, legendre_transform, log_hessian_check, q_from_g_check,
    LegendreOutcome,
};
use crate::poly::Poly;

pub const JORDAN_SAMPLES: usize = 50;
pub const SECANT_TRIALS: usize = 100;
pub const PROBE_LINES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl Stage {
    fn new(name: &str, status: Status, detail: impl Into<String>) -> Stage {
        Stage { name: name.into(), status, detail: Some(detail.into()), checks: Vec::new() }
    }

    fn from_checks(name: &str, checks: Vec<Check>) -> Stage {
        let status = if checks.iter().all(Check::passed) { Status::Pass } else { Status::Fail };
        Stage { name: name.into(), status, detail: None, checks }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LegendreJson {
    pub g: PolyJson,
    pub g_text: String,
    pub mode: crate::certify::ModeKind,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_digest: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub f_text: String,
    pub nvars: usize,
    pub field: Field,
    pub degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    pub mf_order: Option<u32>,
    pub certificate: CertificateJson,
    pub stages: Vec<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legendre: Option<LegendreJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<JordanJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secant: Option<SecantReport>,
}

impl PipelineReport {
    pub fn failed(&self) -> bool {
        self.stages.iter().any(|s| s.status == Status::Fail)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

/// Runs every stage that applies to `f`; later stages record why they were
/// skipped. `entry` supplies a unit candidate and a singular-locus
/// parametrization when available.
pub fn run_pipeline(
    f: &Poly,
    entry: Option<&CatalogEntry>,
    rmax: u32,
    mode: &Mode,
) -> Result<PipelineReport, crate::certify::CertifyError> {
    let degree = f.require_homogeneous()?;
    let outcome = mf_order(f, rmax, mode)?;
    let certificate = certificate_json(f, mode, &outcome)?;
    let mut stages = Vec::new();
    let r = outcome.r();
    stages.push(match &outcome {
        MfOrder::Found { certificate, .. } => {
            let mut s = Stage::from_checks("certify", certificate.checks.clone());
            s.detail = Some(format!("Hessian is a matrix factorization of f^{}", certificate.r));
            s
        }
        MfOrder::Absent { .. } => Stage::new("certify", Status::Info, format!("no r <= {rmax}: definitive negative")),
    });

    let mut report = PipelineReport {
        f_text: print_poly(f),
        nvars: f.nvars(),
        field: f.field(),
        degree,
        catalog: entry.map(|e| e.name.clone()),
        mf_order: r,
        certificate,
        stages: Vec::new(),
        legendre: None,
        jordan: None,
        secant: None,
    };

    if degree != 3 {
        for name in ["legendre", "cremona", "fake-cremona probe", "jordan"] {
            stages.push(Stage::new(name, Status::Skipped, "defined for cubics only"));
        }
    } else {
        let log_h = log_hessian_check(f, mode.seed).map_err(legendre_err)?;
        stages.push(Stage::from_checks("log-hessian", vec![log_h]));
        let lt = legendre_transform(f, mode).map_err(legendre_err)?;
        let present = lt.is_present();
        let mut checks = vec![Check::new("transform present iff mf_order = 1", present == (r == Some(1)))];
        match &lt {
            LegendreOutcome::Present(res) => {
                checks.push(Check::new("g(grad f) = f^2", res.verified));
                report.legendre = Some(LegendreJson {
                    g: poly_to_json(&res.g),
                    g_text: res.g_text.clone(),
                    mode: res.mode,
                    points: res.points,
                    failure_bound: res.failure_bound,
                    points_digest: res.points_digest.clone(),
                });
            }
            LegendreOutcome::Absent(why) => checks.push(Check::info("transform", format!("absent: {why}"))),
        }
        stages.push(Stage::from_checks("legendre", checks));

        match (lt.result(), outcome.certificate()) {
            (Some(res), cert) => {
                let mut checks =
                    vec![Check::new("grad g(grad f) = f x", check_cremona_composition(f, &res.g, mode).map_err(legendre_err)?)];
                if let Some(c) = cert.filter(|c| c.r == 1) {
                    checks.push(q_from_g_check(f, &res.g, &c.q, 10, mode.seed).map_err(legendre_err)?);
                }
                stages.push(Stage::from_checks("cremona", checks));
            }
            (None, _) => stages.push(Stage::new("cremona", Status::Skipped, "no Legendre transform")),
        }

        let fake = common_factor_probe(&gradient_map(f), PROBE_LINES, mode.seed);
        stages.push(Stage::new(
            "fake-cremona probe",
            Status::Info,
            if fake { "partial derivatives share a common factor" } else { "no common factor on random lines" },
        ));

        stages.push(jordan_stage(f, entry, &outcome, fake, mode, &mut report));
    }

    match entry.filter(|e| e.sing_param.is_some()) {
        Some(e) => {
            let rep = secant_singularity_check(e, SECANT_TRIALS, mode.seed).map_err(|err| {
                crate::certify::CertifyError::Malformed(err.to_string())
            })?;
            let mut checks = vec![
                Check::new("Z-points are singular", rep.a_passed()),
                Check::new("secant lines lie in V(f)", rep.b_passed()),
                Check::new("Hessian rank-deficient on secants", rep.c_passed()),
            ];
            if let Some((good, total)) = converse_rank_check(e, 20, mode.seed) {
                checks.push(Check::new("points of V(f) have matrix rank <= 2", good == total).with_detail(format!("{good}/{total}")));
            }
            let mut s = Stage::from_checks("secant", checks);
            s.detail = Some(format!("{} trials", rep.trials));
            stages.push(s);
            report.secant = Some(rep);
        }
        None => stages.push(Stage::new("secant", Status::Skipped, "no parametrization of the singular locus")),
    }
    report.stages = stages;
    Ok(report)
}

fn legendre_err(e: crate::legendre::LegendreError) -> crate::certify::CertifyError {
    match e {
        crate::legendre::LegendreError::Certify(c) => c,
        other => crate::certify::CertifyError::Malformed(other.to_string()),
    }
}

fn jordan_stage(
    f: &Poly,
    entry: Option<&CatalogEntry>,
    outcome: &MfOrder,
    fake: bool,
    mode: &Mode,
    report: &mut PipelineReport,
) -> Stage {
    let Some(cert) = outcome.certificate().filter(|c| c.r == 1) else {
        return Stage::new("jordan", Status::Skipped, "needs mf_order = 1");
    };
    if fake {
        return Stage::new("jordan", Status::Skipped, "fake quadro-quadric gradient map");
    }
    let candidate: Option<&[FieldElem]> = entry.and_then(|e| e.unit_candidate.as_deref());
    let Some(e) = find_unit(f, &cert.q, candidate) else {
        return Stage::new("jordan", Status::Skipped, "no unit found by the small-vector search");
    };
    let alg = match build_jordan(f, &cert.q, &e) {
        Ok(a) => a,
        Err(err) => return Stage::new("jordan", Status::Fail, err.to_string()),
    };
    let forms = match minimal_poly_forms(&alg) {
        Ok(forms) => forms,
        Err(err) => {
            report.jordan = Some(jordan_json(&alg, None));
            return Stage::new("jordan", Status::Info, err.to_string());
        }
    };
    let rep = verify_axioms(&alg, &forms, f, JORDAN_SAMPLES, mode.seed);
    report.jordan = Some(jordan_json(&alg, Some(&forms)));
    let mut s = Stage::from_checks("jordan", rep.checks);
    s.detail = rep.norm_ratio.map(|c| format!("N = ({c}) f"));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_default;

    fn run(name: &str) -> PipelineReport {
        let e = builtin_default(name).unwrap();
        run_pipeline(&e.f, Some(&e), 2, &Mode::default_for(e.nvars(), 1)).unwrap()
    }

    #[test]
    fn detsym3_passes_everything() {
        let rep = run("detsym3");
        assert!(!rep.failed(), "{:#?}", rep.stages);
        for s in ["certify", "legendre", "cremona", "jordan", "secant"] {
            assert_eq!(rep.stage(s).unwrap().status, Status::Pass, "{s}");
        }
    }

    #[test]
    fn weighted2_is_fake() {
        let rep = run("weighted2");
        assert_eq!(rep.mf_order, Some(1));
        assert_eq!(rep.stage("fake-cremona probe").unwrap().detail.as_deref(), Some("partial derivatives share a common factor"));
        assert_eq!(rep.stage("jordan").unwrap().status, Status::Skipped);
    }

    #[test]
    fn hankel_is_negative() {
        let rep = run("hankel");
        assert_eq!(rep.mf_order, None);
        assert!(!rep.failed(), "{:#?}", rep.stages);
        assert!(rep.legendre.is_none());
    }
}
