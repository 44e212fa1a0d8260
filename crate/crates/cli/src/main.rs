//! Command-line front end: point evaluation of the function family,
//! identity-suite runs with residual reports, and catalog listing.
//!
//! Exit codes: 0 on success (eval: Terminated/Converged; verify: zero
//! failures), 1 on usage errors, 2 on DivergenceDetected / non-converged
//! evaluations and on verify runs with failures.

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use discrete_appell::identities::{
    catalog_ids, default_grid, run_suite_with, IdentityFamily, IdentityId, Tolerances, VariantTag,
};
use discrete_appell::{
    eval_discrete_f2, eval_f2, eval_humbert, DiscreteParams, EvalError, EvalPoint, HumbertKind,
    ParameterSet, SeriesValue, Status, SummationConfig,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SUITE_VERSION: &str = "1";
const MAX_DIAGONAL_ENV: &str = "DISCRETE_APPELL_MAX_DIAGONAL";

#[derive(Parser, Debug)]
#[command(
    name = "discrete-appell",
    version,
    about = "Evaluate discrete Appell functions and verify their identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Evaluate one function of the family at a point.
    Eval(EvalArgs),
    /// Run the identity verification suite and emit a report.
    Verify(VerifyArgs),
    /// List the identity catalog with per-family counts.
    ListIdentities(ListArgs),
}

#[derive(Args, Debug, Default)]
struct EvalArgs {
    /// Evaluate the classical function instead of a discrete analogue.
    #[arg(long)]
    f2: bool,
    /// Discrete variant: v1, v2, or v3.
    #[arg(long)]
    variant: Option<String>,
    /// Evaluate a Humbert function (psi1 or psi2) of the chosen variant.
    #[arg(long)]
    humbert: Option<String>,
    /// Complex parameters, written as "re" or "re+imi" (no spaces).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b1: Option<String>,
    #[arg(long)]
    b2: Option<String>,
    #[arg(long)]
    c1: Option<String>,
    #[arg(long)]
    c2: Option<String>,
    /// Discrete variables (v1/v3: t1 and t2; v2: t).
    #[arg(long)]
    t1: Option<String>,
    #[arg(long)]
    t2: Option<String>,
    #[arg(long)]
    t: Option<String>,
    /// Step indices (v1: k1 and k2; v2/v3: k).
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Argument pair.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Engine tolerance override.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Engine diagonal budget override (flag wins over the environment).
    #[arg(long)]
    max_diagonal: Option<usize>,
    /// Output format: text, json, or csv.
    #[arg(long)]
    format: Option<String>,
    /// JSON file providing the same keys; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct VerifyArgs {
    /// Restrict to one or more identity families (repeatable).
    #[arg(long = "family")]
    families: Vec<String>,
    /// Restrict to one variant (v1 or v2).
    #[arg(long)]
    variant: Option<String>,
    /// Restrict to ids containing this substring.
    #[arg(long)]
    id_contains: Option<String>,
    /// Grid jitter seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature order for the integral-representation family.
    #[arg(long)]
    order: Option<usize>,
    /// Tolerance override for terminating families.
    #[arg(long)]
    tol_terminating: Option<f64>,
    /// Tolerance override for truncated families.
    #[arg(long)]
    tol_truncated: Option<f64>,
    /// Engine tolerance override.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Engine diagonal budget override.
    #[arg(long)]
    max_diagonal: Option<usize>,
    /// Output format: json, csv, or text.
    #[arg(long)]
    format: Option<String>,
    /// JSON file providing the same keys; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ListArgs {
    /// Grid jitter seed (affects evaluation points, not the catalog ids).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

/// The same keys as the CLI flags, readable from a JSON document.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    f2: Option<bool>,
    variant: Option<String>,
    humbert: Option<String>,
    a: Option<String>,
    b1: Option<String>,
    b2: Option<String>,
    c1: Option<String>,
    c2: Option<String>,
    t1: Option<String>,
    t2: Option<String>,
    t: Option<String>,
    k1: Option<usize>,
    k2: Option<usize>,
    k: Option<usize>,
    x: Option<String>,
    y: Option<String>,
    rel_tol: Option<f64>,
    max_diagonal: Option<usize>,
    format: Option<String>,
    families: Option<Vec<String>>,
    id_contains: Option<String>,
    seed: Option<u64>,
    order: Option<usize>,
    tol_terminating: Option<f64>,
    tol_truncated: Option<f64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("cannot parse config {}", p.display()))
        }
    }
}

/// Parses a complex literal: "re" or "re+imi" / "re-imi" with optional
/// leading sign and no spaces; "bi" alone is pure imaginary.
fn parse_complex(input: &str) -> Result<Complex64> {
    let s = input.trim();
    if s.is_empty() {
        bail!("empty complex literal");
    }
    let parse_real = |t: &str| -> Result<f64> {
        t.parse::<f64>()
            .map_err(|_| anyhow!("invalid real literal {t:?} in {input:?}"))
    };
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign splitting re from im (not leading, not after e/E).
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let ch = bytes[idx];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re = parse_real(&body[..idx])?;
                let im_str = &body[idx..];
                let im = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(im_str)?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(body)?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(parse_real(s)?, 0.0))
    }
}

fn required_complex(flag: &str, cli: &Option<String>, file: &Option<String>) -> Result<Complex64> {
    let src = cli
        .as_ref()
        .or(file.as_ref())
        .ok_or_else(|| anyhow!("missing required parameter --{flag}"))?;
    parse_complex(src).with_context(|| format!("--{flag}"))
}

fn optional_complex(
    cli: &Option<String>,
    file: &Option<String>,
    default: Complex64,
) -> Result<Complex64> {
    match cli.as_ref().or(file.as_ref()) {
        Some(src) => parse_complex(src),
        None => Ok(default),
    }
}

fn engine_config(rel_tol: Option<f64>, max_diagonal: Option<usize>) -> Result<SummationConfig> {
    let mut cfg = SummationConfig::default();
    if let Ok(text) = std::env::var(MAX_DIAGONAL_ENV) {
        cfg.max_diagonal = text
            .parse()
            .with_context(|| format!("{MAX_DIAGONAL_ENV}={text}"))?;
    }
    if let Some(v) = rel_tol {
        cfg.rel_tolerance = v;
    }
    if let Some(v) = max_diagonal {
        cfg.max_diagonal = v;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct EvalReport {
    #[serde(serialize_with = "discrete_appell::serde_util::complex")]
    value: Complex64,
    status: Status,
    terms_used: usize,
    #[serde(serialize_with = "discrete_appell::serde_util::finite_f64")]
    tail_estimate: f64,
}

impl From<SeriesValue> for EvalReport {
    fn from(v: SeriesValue) -> Self {
        EvalReport {
            value: v.value,
            status: v.status,
            terms_used: v.terms_used,
            tail_estimate: v.tail_estimate,
        }
    }
}

fn render_eval(report: &EvalReport, format: &str) -> Result<String> {
    match format {
        "json" => Ok(format!("{}\n", serde_json::to_string_pretty(report)?)),
        "csv" => Ok(format!(
            "value_re,value_im,status,terms_used,tail_estimate\n{},{},{:?},{},{}\n",
            report.value.re, report.value.im, report.status, report.terms_used, report.tail_estimate
        )),
        "text" => Ok(format!(
            "value = {}\nstatus = {:?}\nterms_used = {}\ntail_estimate = {:e}\n",
            report.value, report.status, report.terms_used, report.tail_estimate
        )),
        other => bail!("unknown format {other:?} (expected text, json, or csv)"),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<u8> {
    let file = load_config(&args.config)?;
    let format = args
        .format
        .clone()
        .or(file.format.clone())
        .unwrap_or_else(|| "text".into());
    let cfg = engine_config(args.rel_tol.or(file.rel_tol), args.max_diagonal.or(file.max_diagonal))?;

    let f2 = args.f2 || file.f2.unwrap_or(false);
    let variant = args.variant.clone().or(file.variant.clone());
    let humbert = args.humbert.clone().or(file.humbert.clone());
    if f2 && variant.is_some() {
        bail!("--f2 and --variant are mutually exclusive");
    }

    // The Humbert functions do not carry all b parameters; everything a
    // selected function actually uses must be given explicitly.
    let needs_b1 = humbert.as_deref() != Some("psi2");
    let needs_b2 = humbert.is_none();
    let one = Complex64::new(1.0, 0.0);
    let params = ParameterSet {
        a: required_complex("a", &args.a, &file.a)?,
        b1: if needs_b1 {
            required_complex("b1", &args.b1, &file.b1)?
        } else {
            optional_complex(&args.b1, &file.b1, one)?
        },
        b2: if needs_b2 {
            required_complex("b2", &args.b2, &file.b2)?
        } else {
            optional_complex(&args.b2, &file.b2, one)?
        },
        c1: required_complex("c1", &args.c1, &file.c1)?,
        c2: required_complex("c2", &args.c2, &file.c2)?,
    };
    let point = EvalPoint {
        x: required_complex("x", &args.x, &file.x)?,
        y: required_complex("y", &args.y, &file.y)?,
    };

    // Explicit flags must be consistent with the selected function; config
    // files may carry extra keys (they can be shared across invocations).
    let reject = |flag: &str, given: bool| -> Result<()> {
        if given {
            bail!("--{flag} does not apply to the selected function");
        }
        Ok(())
    };
    match (f2, variant.as_deref()) {
        (true, _) => {
            for (flag, given) in [
                ("t1", args.t1.is_some()),
                ("t2", args.t2.is_some()),
                ("t", args.t.is_some()),
                ("k1", args.k1.is_some()),
                ("k2", args.k2.is_some()),
                ("k", args.k.is_some()),
            ] {
                reject(flag, given)?;
            }
        }
        (false, Some("v1")) => {
            reject("t", args.t.is_some())?;
            reject("k", args.k.is_some())?;
        }
        (false, Some("v2")) => {
            for (flag, given) in [
                ("t1", args.t1.is_some()),
                ("t2", args.t2.is_some()),
                ("k1", args.k1.is_some()),
                ("k2", args.k2.is_some()),
            ] {
                reject(flag, given)?;
            }
        }
        (false, Some("v3")) => {
            reject("t", args.t.is_some())?;
            reject("k1", args.k1.is_some())?;
            reject("k2", args.k2.is_some())?;
        }
        _ => {}
    }

    let zero = Complex64::new(0.0, 0.0);
    let discrete = if f2 {
        None
    } else {
        let variant = variant
            .as_deref()
            .ok_or_else(|| anyhow!("choose --f2 or --variant v1|v2|v3"))?;
        Some(match variant {
            "v1" => DiscreteParams::V1 {
                t1: optional_complex(&args.t1, &file.t1, zero)?,
                t2: optional_complex(&args.t2, &file.t2, zero)?,
                k1: args.k1.or(file.k1).unwrap_or(0),
                k2: args.k2.or(file.k2).unwrap_or(0),
            },
            "v2" => DiscreteParams::V2 {
                t: optional_complex(&args.t, &file.t, zero)?,
                k: args.k.or(file.k).unwrap_or(0),
            },
            "v3" => DiscreteParams::V3 {
                t1: optional_complex(&args.t1, &file.t1, zero)?,
                t2: optional_complex(&args.t2, &file.t2, zero)?,
                k: args.k.or(file.k).unwrap_or(0),
            },
            other => bail!("unknown variant {other:?} (expected v1, v2, or v3)"),
        })
    };

    let humbert_kind = match humbert.as_deref() {
        None => None,
        Some("psi1") => Some(HumbertKind::Psi1),
        Some("psi2") => Some(HumbertKind::Psi2),
        Some(other) => bail!("unknown Humbert selector {other:?} (expected psi1 or psi2)"),
    };

    let outcome = match (&discrete, humbert_kind) {
        (None, None) => eval_f2(&params, point, &cfg),
        (None, Some(_)) => bail!("--humbert needs --variant v1 or v2"),
        (Some(d), None) => eval_discrete_f2(&params, d, point, &cfg),
        (Some(d), Some(kind)) => eval_humbert(kind, &params, d, point, &cfg),
    };

    match outcome {
        Ok(series) => {
            let report = EvalReport::from(series);
            print!("{}", render_eval(&report, &format)?);
            Ok(match series.status {
                Status::Terminated | Status::Converged => 0,
                Status::MaxTermsReached | Status::DivergenceDetected => 2,
            })
        }
        Err(EvalError::Divergence { partial }) => {
            let report = EvalReport::from(partial);
            print!("{}", render_eval(&report, &format)?);
            eprintln!("divergence detected after {} terms", partial.terms_used);
            Ok(2)
        }
        Err(err) => Err(err.into()),
    }
}

#[derive(Serialize)]
struct GridDescription {
    seed: u64,
    points: usize,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite_version: &'a str,
    grid: GridDescription,
    results: &'a [discrete_appell::IdentityCheckResult],
    summary: discrete_appell::SuiteSummary,
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_verify(report: &VerifyReport<'_>, format: &str) -> Result<String> {
    match format {
        "json" => Ok(format!("{}\n", serde_json::to_string_pretty(report)?)),
        "csv" => {
            let mut out = String::from(
                "id,passed,abs_residual,rel_residual,lhs_re,lhs_im,rhs_re,rhs_im,notes\n",
            );
            for r in report.results {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.id,
                    r.passed,
                    r.abs_residual,
                    r.rel_residual,
                    r.lhs.re,
                    r.lhs.im,
                    r.rhs.re,
                    r.rhs.im,
                    csv_escape(&r.notes)
                ));
            }
            out.push_str(&format!(
                "# summary: pass={} fail={} skip={}\n",
                report.summary.pass, report.summary.fail, report.summary.skip
            ));
            Ok(out)
        }
        "text" => {
            let mut out = String::new();
            for r in report.results {
                let mark = if r.notes.starts_with("skipped:") {
                    "SKIP"
                } else if r.passed {
                    "PASS"
                } else {
                    "FAIL"
                };
                out.push_str(&format!(
                    "{mark} {} rel_residual={:.3e} {}\n",
                    r.id, r.rel_residual, r.notes
                ));
            }
            out.push_str(&format!(
                "summary: pass={} fail={} skip={}\n",
                report.summary.pass, report.summary.fail, report.summary.skip
            ));
            Ok(out)
        }
        other => bail!("unknown format {other:?} (expected json, csv, or text)"),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let file = load_config(&args.config)?;
    let format = args
        .format
        .clone()
        .or(file.format.clone())
        .unwrap_or_else(|| "json".into());
    let cfg = engine_config(args.rel_tol.or(file.rel_tol), args.max_diagonal.or(file.max_diagonal))?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let tols = Tolerances {
        terminating: args
            .tol_terminating
            .or(file.tol_terminating)
            .unwrap_or(Tolerances::default().terminating),
        truncated: args
            .tol_truncated
            .or(file.tol_truncated)
            .unwrap_or(Tolerances::default().truncated),
    };
    let order = args.order.or(file.order).unwrap_or(64);
    if order < 4 {
        bail!("--order must be at least 4");
    }
    let integral_orders = vec![order / 2, order * 3 / 4, order];

    let mut families = Vec::new();
    let family_names = if !args.families.is_empty() {
        args.families.clone()
    } else {
        file.families.clone().unwrap_or_default()
    };
    for name in &family_names {
        families.push(
            IdentityFamily::parse(name)
                .ok_or_else(|| anyhow!("unknown identity family {name:?}"))?,
        );
    }
    let variant = match args.variant.clone().or(file.variant.clone()) {
        None => None,
        Some(v) => Some(VariantTag::parse(&v).ok_or_else(|| anyhow!("unknown variant {v:?}"))?),
    };
    let id_fragment = args.id_contains.clone().or(file.id_contains.clone());

    let filter = |id: &IdentityId| -> bool {
        (families.is_empty() || families.contains(&id.family))
            && variant.is_none_or(|v| id.variant == v)
            && id_fragment
                .as_ref()
                .is_none_or(|frag| id.to_string().contains(frag.as_str()))
    };

    let grid = default_grid(seed);
    let report = run_suite_with(&filter, &grid, &tols, &cfg, &integral_orders);
    let rendered = render_verify(
        &VerifyReport {
            suite_version: SUITE_VERSION,
            grid: GridDescription {
                seed,
                points: grid.len(),
            },
            results: &report.results,
            summary: report.summary,
        },
        &format,
    )?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(rendered.as_bytes())?;
    stdout.flush()?;
    Ok(if report.summary.fail == 0 { 0 } else { 2 })
}

fn cmd_list(args: &ListArgs) -> Result<u8> {
    let grid = default_grid(args.seed);
    let all = catalog_ids(&grid);
    // Distinct identities in catalog order, with per-family/variant counts.
    let mut seen = std::collections::BTreeSet::new();
    let mut distinct = Vec::new();
    for id in all {
        if seen.insert(id.to_string()) {
            distinct.push(id);
        }
    }
    distinct.sort();
    let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
    for id in &distinct {
        *counts.entry(format!("{}/{}", id.family, id.variant)).or_default() += 1;
    }
    match args.format.as_str() {
        "json" => {
            #[derive(Serialize)]
            struct Listing {
                identities: Vec<String>,
                counts: std::collections::BTreeMap<String, usize>,
                total: usize,
            }
            let listing = Listing {
                identities: distinct.iter().map(|id| id.to_string()).collect(),
                total: distinct.len(),
                counts,
            };
            println!("{}", serde_json::to_string_pretty(&listing)?);
        }
        "text" => {
            for id in &distinct {
                println!("{id}");
            }
            println!();
            for (key, n) in &counts {
                println!("{key}: {n}");
            }
            println!("total: {}", distinct.len());
        }
        other => bail!("unknown format {other:?} (expected text or json)"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ListIdentities(args) => cmd_list(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
