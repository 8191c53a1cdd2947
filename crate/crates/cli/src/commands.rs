//! The five subcommands. Each returns its output text and whether every
//! checked quantity stayed within tolerance.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::json;

use gqsvt_core::bounds::{bernstein_outcome, verify_beta_bound};
use gqsvt_core::linalg::{max_abs, spectral_norm, CMat, MatrixJson};
use gqsvt_core::phases::{completion_residual, reconstruct_P, reconstruct_Q, solve_phases};
use gqsvt_core::polynomials::{approx_inverse_with, ApproxMethod, ApproxSpec, Parity, PolyCoeffs};
use gqsvt_core::random::{random_complex_coeffs, seeded};
use gqsvt_core::transforms::{
    degree_tolerance, eigen_oracle, extract_svt, gqet_with, gqsvt_hermitianization_with,
    gqsvt_multiplication_with, svt_oracle, svt_oracle_left_even, SvtBlock, TransformOptions,
};
use rand::Rng;

use crate::config::{
    ApproxChoice, BoundsConfig, GqetConfig, GqsvtConfig, ParityChoice, PhasesConfig, RouteChoice,
    ScalingTableConfig,
};

pub struct Outcome {
    pub output: String,
    pub passed: bool,
    /// Short human-readable summary for stderr.
    pub summary: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum View {
    /// Every value at 17 significant digits.
    Full,
    /// Rounded to two digits for comparison with two-digit tables.
    Rounded,
}

#[derive(Debug, Clone)]
struct ScalingResult {
    kappa: f64,
    eps: f64,
    row: std::result::Result<(usize, f64, f64, f64), String>,
}

fn scaling_row(kappa: f64, eps: f64, method: ApproxMethod, max_degree: usize) -> ScalingResult {
    let row = (|| {
        let approx = approx_inverse_with(&ApproxSpec::inverse(kappa, eps)?, method, max_degree)?;
        let p = approx.coeffs.max_abs_interval();
        let big_p = approx.coeffs.max_abs_circle();
        Ok::<_, gqsvt_core::Error>((approx.degree, p, big_p, big_p / p))
    })()
    .map_err(|e| e.to_string());
    ScalingResult { kappa, eps, row }
}

pub fn scaling_table(cfg: &ScalingTableConfig, view: View) -> Result<Outcome> {
    cfg.validate()?;
    let method = match cfg.method {
        ApproxChoice::Remez => ApproxMethod::Remez,
        ApproxChoice::SmoothedProjection => ApproxMethod::SmoothedProjection,
    };
    let results: Vec<ScalingResult> = if cfg.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = cfg
                .rows
                .iter()
                .map(|r| s.spawn(move || scaling_row(r.kappa, r.eps, method, cfg.max_degree)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("row worker panicked")).collect()
        })
    } else {
        cfg.rows.iter().map(|r| scaling_row(r.kappa, r.eps, method, cfg.max_degree)).collect()
    };

    let mut out = String::from("degree,kappa,eps,max_abs_p,max_abs_P,beta,beta_flag,error\n");
    let (mut flagged, mut failed) = (0, 0);
    for r in &results {
        match &r.row {
            Ok((d, p, big_p, beta)) => {
                let flag = *beta > cfg.beta_limit;
                flagged += flag as usize;
                match view {
                    View::Full => writeln!(
                        out,
                        "{d},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{flag},",
                        r.kappa, r.eps, p, big_p, beta
                    ),
                    View::Rounded => writeln!(
                        out,
                        "{d},{},{},{:.2},{:.2},{:.2},{flag},",
                        r.kappa, r.eps, p, big_p, beta
                    ),
                }?;
            }
            Err(e) => {
                failed += 1;
                writeln!(out, ",{},{},,,,,{}", r.kappa, r.eps, e.replace(',', ";"))?;
            }
        }
    }
    Ok(Outcome {
        output: out,
        passed: flagged == 0 && failed == 0,
        summary: format!(
            "scaling-table: {} rows, {flagged} with beta > {}, {failed} failed",
            results.len(),
            cfg.beta_limit
        ),
    })
}

#[derive(Serialize)]
struct TransformReport {
    command: &'static str,
    residual: f64,
    tolerance: f64,
    passed: bool,
    metadata: serde_json::Value,
    #[serde(flatten)]
    extra: serde_json::Map<String, serde_json::Value>,
    extracted: MatrixJson,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn gqet(cfg: &GqetConfig, base: Option<&Path>, seed: u64, tol: Option<f64>) -> Result<Outcome> {
    let mut rng = seeded(cfg.seed.unwrap_or(seed));
    let (a, e) = cfg.encoding().hermitian(base, &mut rng)?;
    let poly = cfg.polynomial.build(base, &mut rng)?;
    let cp = gqet_with(&e, &poly.coeffs, &TransformOptions { margin: cfg.margin })?;
    let scale = cp.metadata.scale_applied;
    let block = cp.block();
    let oracle = eigen_oracle(&a, e.alpha(), &poly.coeffs).scale(scale);
    let residual = spectral_norm(&(&block - oracle));
    let tolerance = tol.unwrap_or_else(|| degree_tolerance(cp.metadata.degree));
    let passed = residual <= tolerance;
    let report = TransformReport {
        command: "gqet",
        residual,
        tolerance,
        passed,
        metadata: serde_json::to_value(&cp.metadata)?,
        extra: Default::default(),
        extracted: MatrixJson::from_matrix(&block),
    };
    Ok(Outcome {
        output: to_json(&report)?,
        passed,
        summary: format!(
            "gqet: residual {residual:.3e} (tol {tolerance:.1e}), scale {scale}, queries U={} U†={}",
            cp.metadata.queries_u, cp.metadata.queries_u_dagger
        ),
    })
}

fn infer_parity(c: &PolyCoeffs, requested: Option<ParityChoice>) -> Option<Parity> {
    if let Some(p) = requested {
        return Some(p.into());
    }
    let class = c.classify_parity(1e-12);
    if class.is_odd() {
        Some(Parity::Odd)
    } else if class.is_even() {
        Some(Parity::Even)
    } else {
        None
    }
}

fn full_svt_oracle(a: &CMat, alpha: f64, c: &PolyCoeffs) -> Result<CMat> {
    let (even, odd) = c.parity_split();
    let (nl, nr) = a.shape();
    let mut out = CMat::zeros(nl + nr, nl + nr);
    out.view_mut((0, 0), (nl, nl)).copy_from(&svt_oracle_left_even(a, alpha, &even)?);
    out.view_mut((0, nl), (nl, nr)).copy_from(&svt_oracle(a, alpha, &odd, Parity::Odd)?);
    out.view_mut((nl, 0), (nr, nl)).copy_from(&svt_oracle(&a.adjoint(), alpha, &odd, Parity::Odd)?);
    out.view_mut((nl, nl), (nr, nr)).copy_from(&svt_oracle(a, alpha, &even, Parity::Even)?);
    Ok(out)
}

/// `max_i |B_ii − α/(4κ A_ii)|` for a diagonal `A`, or `None` if `A` is not diagonal.
fn inverse_error(a: &CMat, alpha: f64, kappa: f64, block: &CMat) -> Option<f64> {
    let n = a.nrows();
    if a.ncols() != n || (0..n).any(|i| (0..n).any(|j| i != j && a[(i, j)].norm() > 0.0)) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (block[(i, i)] - alpha / (4.0 * kappa * a[(i, i)].re)).norm())
            .fold(0.0, f64::max),
    )
}

pub fn gqsvt(cfg: &GqsvtConfig, base: Option<&Path>, seed: u64, tol: Option<f64>) -> Result<Outcome> {
    let mut rng = seeded(cfg.seed.unwrap_or(seed));
    let enc = cfg.encoding().general(base, &mut rng)?;
    let poly = cfg.polynomial.build(base, &mut rng)?;
    let c = &poly.coeffs;
    let d = c.degree();
    let opts = TransformOptions { margin: cfg.margin };
    let parity = infer_parity(c, cfg.parity);
    if parity.is_none() && cfg.route != RouteChoice::Hermitianization {
        bail!("the multiplication route needs a polynomial of definite parity");
    }
    let tolerance = tol.unwrap_or_else(|| degree_tolerance(d));
    let mut extra = serde_json::Map::new();
    let mut passed = true;
    let mut summary = Vec::new();

    // (normalized block for the requested parity, its oracle)
    let mut herm_block = None;
    let mut mult_block = None;
    let mut shown = None;
    let mut metadata = serde_json::Value::Null;

    if cfg.route != RouteChoice::Multiplication {
        let cp = gqsvt_hermitianization_with(&enc.encoding, c, &opts)?;
        let s = cp.metadata.scale_applied;
        let full = extract_svt(&cp, SvtBlock::Full)?;
        let oracle = full_svt_oracle(&enc.a, enc.alpha, c)?.scale(s);
        let residual = spectral_norm(&(&full - oracle));
        passed &= residual <= tolerance;
        extra.insert("hermitianization_residual".into(), json!(residual));
        extra.insert("hermitianization_metadata".into(), serde_json::to_value(&cp.metadata)?);
        summary.push(format!(
            "hermitianization residual {residual:.3e}, queries U={} U†={}",
            cp.metadata.queries_u, cp.metadata.queries_u_dagger
        ));
        if let Some(p) = parity {
            let which = if p == Parity::Odd { SvtBlock::Odd } else { SvtBlock::Even };
            herm_block = Some(extract_svt(&cp, which)?.scale(1.0 / s));
        }
        metadata = serde_json::to_value(&cp.metadata)?;
        shown = Some(full);
    }
    if cfg.route != RouteChoice::Hermitianization {
        let p = parity.expect("checked above");
        let r = gqsvt_multiplication_with(&enc.encoding, c, p, &opts, cfg.schedule)?;
        let s = r.circuit.metadata.scale_applied;
        let oracle = svt_oracle(&enc.a, enc.alpha, c, p)?.scale(s);
        let residual = spectral_norm(&(&r.extracted - oracle));
        passed &= residual <= tolerance;
        extra.insert("multiplication_residual".into(), json!(residual));
        extra.insert("multiplication_metadata".into(), serde_json::to_value(&r.circuit.metadata)?);
        extra.insert("multiplication_beta".into(), json!(r.route_beta));
        extra.insert("success_prob".into(), json!(r.outcome.success_prob));
        extra.insert("stage_probs".into(), json!(r.outcome.stage_probs));
        summary.push(format!(
            "multiplication residual {residual:.3e}, queries U={} U†={}, success probability {:.6}",
            r.circuit.metadata.queries_u, r.circuit.metadata.queries_u_dagger, r.outcome.success_prob
        ));
        mult_block = Some(r.extracted.scale(1.0 / s));
        if shown.is_none() {
            metadata = serde_json::to_value(&r.circuit.metadata)?;
            shown = Some(r.extracted.clone());
        }
    }
    if let (Some(h), Some(m)) = (&herm_block, &mult_block) {
        let agreement = max_abs(&(h - m));
        let limit = 1e-7 * d.max(1) as f64;
        passed &= agreement <= limit;
        extra.insert("route_agreement".into(), json!(agreement));
        summary.push(format!("routes agree to {agreement:.3e}"));
    }
    if let Some((kappa, eps)) = poly.inverse {
        let block = herm_block.as_ref().or(mult_block.as_ref()).expect("inverse polynomials are odd");
        if let Some(err) = inverse_error(&enc.a, enc.alpha, kappa, block) {
            passed &= err <= eps * (1.0 + 1e-6);
            extra.insert("inverse_error".into(), json!(err));
            summary.push(format!("inverse error {err:.3e} (eps {eps})"));
        }
    }
    let residual = ["hermitianization_residual", "multiplication_residual"]
        .iter()
        .filter_map(|k| extra.get(*k).and_then(|v| v.as_f64()))
        .fold(0.0, f64::max);
    let report = TransformReport {
        command: "gqsvt",
        residual,
        tolerance,
        passed,
        metadata,
        extra,
        extracted: MatrixJson::from_matrix(&shown.expect("at least one route ran")),
    };
    Ok(Outcome {
        output: to_json(&report)?,
        passed,
        summary: format!("gqsvt: {}", summary.join("; ")),
    })
}

pub fn bounds(cfg: &BoundsConfig, seed: u64) -> Result<Outcome> {
    if cfg.trials == 0 {
        bail!("trials must be positive");
    }
    let mut rng = seeded(cfg.seed.unwrap_or(seed));
    let report = verify_beta_bound(cfg.sampler, cfg.trials, &mut rng)?;
    let mut bernstein_failures = 0;
    for _ in 0..cfg.bernstein_trials {
        let d = rng.random_range(1..=32);
        if !bernstein_outcome(&random_complex_coeffs(d, &mut rng), 1024).holds {
            bernstein_failures += 1;
        }
    }
    let passed = report.passed() && bernstein_failures == 0;
    Ok(Outcome {
        output: report.to_csv(),
        passed,
        summary: format!(
            "bounds ({}): {} trials, {} violations, {} beta>2, max ratio {:.4}, max beta {:.4}, {} Bernstein failures in {} trials",
            cfg.sampler.name(),
            cfg.trials,
            report.violations,
            report.beta_two_violations,
            report.max_ratio,
            report.max_beta,
            bernstein_failures,
            cfg.bernstein_trials
        ),
    })
}

pub fn phases(cfg: &PhasesConfig, base: Option<&Path>, seed: u64, tol: Option<f64>) -> Result<Outcome> {
    let mut rng = seeded(cfg.seed.unwrap_or(seed));
    let poly = cfg.polynomial.build(base, &mut rng)?;
    let c = &poly.coeffs;
    let phases = solve_phases(c, cfg.margin)?;
    let round_trip = reconstruct_P(&phases).max_coeff_diff(c);
    let completion = completion_residual(c, &reconstruct_Q(&phases));
    let d = c.degree();
    let tolerance = tol.unwrap_or(1e-8 * (d + 1) as f64);
    let passed = round_trip <= tolerance && completion <= 1e-9;
    let report = json!({
        "command": "phases",
        "degree": d,
        "round_trip_error": round_trip,
        "completion_residual": completion,
        "tolerance": tolerance,
        "passed": passed,
        "phases": phases,
    });
    Ok(Outcome {
        output: to_json(&report)?,
        passed,
        summary: format!("phases: degree {d}, round trip {round_trip:.3e}, completion {completion:.3e}"),
    })
}
