use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hessmf::catalog::{builtin, list, CatalogEntry};
use hessmf::certify::{certificate_json, mf_order, reverify, CertificateJson, Mode, MfOrder, MIN_TRIALS};
use hessmf::expr_io::{parse_poly, poly_from_json, PolyJson};
use hessmf::pipeline::run_pipeline;
use hessmf::{Field, Poly};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "hessmf", version, about = "Hessian matrix factorizations of homogeneous forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the least r with H Q = f^r Id and write a certificate.
    Certify(RunArgs),
    /// Certify, then run the Legendre, Cremona, Jordan and secant stages.
    Pipeline(RunArgs),
    /// Re-check a certificate file without redoing the interpolation.
    Reverify { path: PathBuf },
    /// Built-in forms.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    Qw,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Prob,
}

#[derive(Args)]
struct RunArgs {
    /// Polynomial text, e.g. "x0*x1*x2".
    #[arg(long, group = "source")]
    poly: Option<String>,
    /// File holding polynomial text or its JSON form.
    #[arg(long, group = "source")]
    file: Option<PathBuf>,
    /// Name of a built-in form (see `catalog list`).
    #[arg(long, group = "source")]
    catalog: Option<String>,
    /// Catalog parameter, `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, String)>,
    /// Number of variables; defaults to one past the largest index used.
    #[arg(long)]
    nvars: Option<usize>,
    #[arg(long, value_enum, default_value = "q")]
    field: FieldArg,
    #[arg(long, default_value_t = 4)]
    rmax: u32,
    /// Defaults to exact up to 15 variables, probabilistic above.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = MIN_TRIALS)]
    trials: usize,
    /// Seed for every random choice; drawn at random and recorded if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write the certificate (certify) or report (pipeline).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got `{s}`"))
}

struct Input {
    f: Poly,
    entry: Option<CatalogEntry>,
    mode: Mode,
}

/// One past the largest `xN` index in `src`.
fn infer_nvars(src: &str) -> usize {
    let b = src.as_bytes();
    let mut n = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'x' && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
            let digits: String = src[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                n = n.max(k + 1);
            }
        }
        i += 1;
    }
    n.max(1)
}

fn load_input(a: &RunArgs) -> Result<Input, String> {
    let field = match a.field {
        FieldArg::Q => Field::Q,
        FieldArg::Qw => Field::QOmega,
    };
    let parse_text = |src: &str| {
        let n = a.nvars.unwrap_or_else(|| infer_nvars(src));
        parse_poly(src, n, field).map_err(|e| e.to_string())
    };
    let (f, entry) = if let Some(src) = &a.poly {
        (parse_text(src)?, None)
    } else if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        if text.trim_start().starts_with('{') {
            let j: PolyJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            (poly_from_json(&j).map_err(|e| e.to_string())?, None)
        } else {
            (parse_text(text.trim())?, None)
        }
    } else if let Some(name) = &a.catalog {
        let params: BTreeMap<String, String> = a.params.iter().cloned().collect();
        let e = builtin(name, &params).map_err(|e| e.to_string())?;
        (e.f.clone(), Some(e))
    } else {
        return Err("one of --poly, --file or --catalog is required".into());
    };
    let seed = a.seed.unwrap_or_else(rand::random);
    let mode = match a.mode {
        Some(ModeArg::Exact) => Mode::exact(seed),
        Some(ModeArg::Prob) => Mode::probabilistic(a.trials, seed),
        None if f.nvars() > hessmf::certify::EXACT_VAR_LIMIT => Mode::probabilistic(a.trials, seed),
        None => Mode::exact(seed),
    };
    Ok(Input { f, entry, mode })
}

fn write_text(path: &Path, mut s: String) -> Result<(), String> {
    s.push('\n');
    std::fs::write(path, s).map_err(|e| format!("{}: {e}", path.display()))
}

fn envelope(mut body: Value, start: Instant) -> Value {
    let obj = body.as_object_mut().expect("report is an object");
    obj.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("command_line".into(), json!(std::env::args().collect::<Vec<_>>()));
    obj.insert("wall_time_ms".into(), json!(start.elapsed().as_millis() as u64));
    body
}

fn cmd_certify(a: &RunArgs) -> Result<u8, String> {
    let start = Instant::now();
    let inp = load_input(a)?;
    let outcome = mf_order(&inp.f, a.rmax, &inp.mode).map_err(|e| e.to_string())?;
    let cert = certificate_json(&inp.f, &inp.mode, &outcome).map_err(|e| e.to_string())?;
    if let Some(path) = &a.out {
        write_text(path, serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())?)?;
    }
    let code = match &outcome {
        MfOrder::Found { .. } if cert.checks.iter().all(|c| c.passed()) => EXIT_OK,
        MfOrder::Found { .. } => EXIT_VERIFY,
        MfOrder::Absent { .. } => EXIT_NEGATIVE,
    };
    let body = serde_json::to_value(&cert).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&envelope(body, start)).unwrap());
    match cert.r {
        Some(r) => eprintln!("mf_order = {r}"),
        None => eprintln!("no matrix factorization with r <= {}", a.rmax),
    }
    Ok(code)
}

fn cmd_pipeline(a: &RunArgs) -> Result<u8, String> {
    let start = Instant::now();
    let inp = load_input(a)?;
    let report = run_pipeline(&inp.f, inp.entry.as_ref(), a.rmax, &inp.mode).map_err(|e| e.to_string())?;
    let code = if report.failed() {
        EXIT_VERIFY
    } else if report.mf_order.is_none() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    let body = envelope(serde_json::to_value(&report).map_err(|e| e.to_string())?, start);
    if let Some(path) = &a.out {
        write_text(path, serde_json::to_string_pretty(&body).unwrap())?;
    }
    println!("{}", serde_json::to_string_pretty(&body).unwrap());
    for s in &report.stages {
        let status = serde_json::to_value(s.status).unwrap();
        eprintln!("{:<20} {:<8} {}", s.name, status.as_str().unwrap_or(""), s.detail.as_deref().unwrap_or(""));
    }
    Ok(code)
}

fn cmd_reverify(path: &Path) -> Result<u8, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cert: CertificateJson = serde_json::from_str(&text).map_err(|e| format!("malformed certificate: {e}"))?;
    let (ok, checks) = match reverify(&cert) {
        Ok(rep) => (rep.ok, rep.checks),
        Err(e) => {
            eprintln!("{e}");
            return Ok(EXIT_VERIFY);
        }
    };
    println!("{}", serde_json::to_string_pretty(&json!({ "ok": ok, "checks": checks })).unwrap());
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Reverify { path } => cmd_reverify(path),
        Command::Catalog { action: CatalogAction::List } => {
            println!("{}", serde_json::to_string_pretty(&list()).unwrap());
            Ok(EXIT_OK)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nvars_inference() {
        assert_eq!(infer_nvars("x0*x1*x2"), 3);
        assert_eq!(infer_nvars("x10^2 + 3*x2"), 11);
        assert_eq!(infer_nvars("1"), 1);
    }

    #[test]
    fn params() {
        assert_eq!(parse_param("lambda=2").unwrap(), ("lambda".into(), "2".into()));
        assert!(parse_param("lambda").is_err());
    }
}
