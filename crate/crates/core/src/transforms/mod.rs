//! Transformation circuits assembled as dense matrices, their extraction
//! isometries, and the eigen/SVD reference oracles they are checked against.

mod equivalence;
mod gqsvt;
mod postselect;

pub use equivalence::{qsvt_equivalence_check, EquivalenceReport};
pub use gqsvt::{
    extract_svt, gqsvt_hermitianization, gqsvt_hermitianization_with, gqsvt_multiplication,
    gqsvt_multiplication_with, MultiplicationResult, SvtBlock,
};
pub use postselect::{
    multiplication_circuit, simulate_postselect, PostselectInput, PostselectOutcome, Schedule,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::encodings::{
    anti_controlled, walk_operator, HermitianEncoding, ProjectedUnitaryEncoding,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_map, identity, ket, kron, pauli_z, qubit_projector, real, thin_svd, CMat};
use crate::phases::{
    gqsp_matrix_unchecked, rotation_matrix, solve_phases, PhaseFactors, RotationGate,
    DEFAULT_MARGIN,
};
use crate::polynomials::{Parity, PolyCoeffs};
use std::f64::consts::PI;

/// Base tolerance per unit degree for circuit-vs-oracle comparisons.
pub const BASE_TOL: f64 = 1e-8;

/// `BASE_TOL · max(d, 1)`.
pub fn degree_tolerance(d: usize) -> f64 {
    BASE_TOL * d.max(1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Gqet,
    Hermitianization,
    Multiplication,
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitMetadata {
    pub scale_applied: f64,
    #[serde(rename = "queries_U")]
    pub queries_u: usize,
    #[serde(rename = "queries_U_dagger")]
    pub queries_u_dagger: usize,
    pub degree: usize,
    pub route: Route,
}

/// Output and input isometries; the extracted block is `left† M right`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub left: CMat,
    pub right: CMat,
}

impl Extraction {
    pub fn symmetric(pi: CMat) -> Self {
        Self {
            left: pi.clone(),
            right: pi,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CircuitProduct {
    pub matrix: CMat,
    pub metadata: CircuitMetadata,
    /// Named extraction isometries; `"block"` is the default.
    pub extractions: BTreeMap<String, Extraction>,
    /// Time-ordered stages between mid-circuit flag measurements.
    pub stages: Vec<ProjectedUnitaryEncoding>,
    /// Polynomial realized by the phases (after any rescaling).
    pub applied: Option<PolyCoeffs>,
    pub phases: Option<PhaseFactors>,
}

impl CircuitProduct {
    pub fn extraction(&self, name: &str) -> Result<&Extraction> {
        self.extractions
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("circuit has no extraction {name:?}")))
    }

    pub fn extract(&self, name: &str) -> Result<CMat> {
        let x = self.extraction(name)?;
        Ok(x.left.adjoint() * &self.matrix * &x.right)
    }

    /// The default `"block"` extraction.
    pub fn block(&self) -> CMat {
        self.extract("block").expect("every circuit carries a block extraction")
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string(&self.metadata).expect("metadata serialization cannot fail")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TransformOptions {
    /// Required headroom `1 - max|P|` for the phase solver.
    pub margin: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            margin: DEFAULT_MARGIN,
        }
    }
}

/// Largest scale `s ≤ 1` with `s · max|P| ≤ 1 - margin`.
pub fn safe_scale(c: &PolyCoeffs, margin: f64) -> f64 {
    let m = c.max_abs_circle();
    if m > 1.0 - margin {
        (1.0 - margin) / m
    } else {
        1.0
    }
}

/// Rescales when needed and solves for phases.
pub(crate) fn prepare(c: &PolyCoeffs, margin: f64) -> Result<(PolyCoeffs, f64, PhaseFactors)> {
    let scale = safe_scale(c, margin);
    let applied = if scale < 1.0 { c.scaled(scale) } else { c.clone() };
    // the rescaled maximum sits exactly at the limit; leave room for roundoff
    let phases = solve_phases(&applied, margin * 0.5)?;
    Ok((applied, scale, phases))
}

/// `GQSP[R_Π U]` with extraction `|0⟩ ⊗ Π`; the block is `p(A/α)`.
pub fn gqet(e: &HermitianEncoding, c: &PolyCoeffs) -> Result<CircuitProduct> {
    gqet_with(e, c, &TransformOptions::default())
}

pub fn gqet_with(e: &HermitianEncoding, c: &PolyCoeffs, opts: &TransformOptions) -> Result<CircuitProduct> {
    let (applied, scale, phases) = prepare(c, opts.margin)?;
    Ok(gqet_from_phases(e, applied, scale, phases))
}

pub(crate) fn gqet_from_phases(
    e: &HermitianEncoding,
    applied: PolyCoeffs,
    scale: f64,
    phases: PhaseFactors,
) -> CircuitProduct {
    let matrix = gqsp_matrix_unchecked(&phases, &walk_operator(e));
    let iso = kron(&ket(2, 0), e.pi());
    let mut extractions = BTreeMap::new();
    extractions.insert("block".to_string(), Extraction::symmetric(iso));
    let degree = phases.degree();
    CircuitProduct {
        matrix,
        metadata: CircuitMetadata {
            scale_applied: scale,
            queries_u: degree,
            queries_u_dagger: 0,
            degree,
            route: Route::Gqet,
        },
        extractions,
        stages: Vec::new(),
        applied: Some(applied),
        phases: Some(phases),
    }
}

/// The GQET circuit with each `-Z` absorbed into the preceding rotation:
/// `R(θᵢ, φᵢ+π, λᵢ)` for `i < d`, then anti-controlled `U` and the projector
/// phase `I - 2|0⟩⟨0| ⊗ ΠΠ†`, with the last rotation unchanged.
pub fn gqet_absorbed_circuit(e: &HermitianEncoding, phases: &PhaseFactors) -> CMat {
    let m = e.dim();
    let id = identity(m);
    let d = phases.degree();
    let shifted = |i: usize| {
        let g = phases.gate(i);
        if i < d {
            RotationGate::new(g.theta, g.phi + PI, g.lambda)
        } else {
            g
        }
    };
    let proj = e.pi() * e.pi().adjoint();
    let projector_phase = identity(2 * m) - kron(&qubit_projector(0), &proj).scale(2.0);
    let signal = projector_phase * anti_controlled(e.u());
    let mut out = kron(&rotation_matrix(shifted(0)), &id);
    for i in 1..=d {
        out = kron(&rotation_matrix(shifted(i)), &id) * (&signal * out);
    }
    out
}

/// Flag `-Z` gate on `2M` dimensions, exposed for circuit comparisons.
pub fn flag_neg_z(m: usize) -> CMat {
    kron(&(-pauli_z()), &identity(m))
}

/// `V diag(p(λᵢ/α)) V†` from a dense Hermitian eigensolver.
pub fn eigen_oracle(a: &CMat, alpha: f64, c: &PolyCoeffs) -> CMat {
    hermitian_map(&a.scale(1.0 / alpha), |x| {
        c.eval_cheb_complex(real(x.clamp(-1.0, 1.0)))
    })
}

/// Singular value transformation of `A/α` from a dense SVD `A = W D V†`.
///
/// Odd: `Σ p(sᵢ/α) wᵢ vᵢ†`. Even: `p(0) I + Σ (p(sᵢ/α) - p(0)) vᵢ vᵢ†` on the
/// right (input) space.
pub fn svt_oracle(a: &CMat, alpha: f64, c: &PolyCoeffs, parity: Parity) -> Result<CMat> {
    c.check_parity(parity)?;
    let svd = thin_svd(a)?;
    let pval = |s: f64| c.eval_cheb_complex(real((s / alpha).min(1.0)));
    match parity {
        Parity::Odd => {
            let mut out = CMat::zeros(a.nrows(), a.ncols());
            for (i, &s) in svd.s.iter().enumerate() {
                out += svd.w.column(i) * svd.v.column(i).adjoint() * pval(s);
            }
            Ok(out)
        }
        Parity::Even => Ok(even_side(&svd.v, &svd.s, &pval)),
    }
}

/// Even transformation on the left (output) space, `p(0) I + Σ (p(sᵢ/α) - p(0)) wᵢ wᵢ†`.
pub fn svt_oracle_left_even(a: &CMat, alpha: f64, c: &PolyCoeffs) -> Result<CMat> {
    c.check_parity(Parity::Even)?;
    let svd = thin_svd(a)?;
    let pval = |s: f64| c.eval_cheb_complex(real((s / alpha).min(1.0)));
    Ok(even_side(&svd.w, &svd.s, &pval))
}

fn even_side(vectors: &CMat, s: &[f64], pval: &dyn Fn(f64) -> num_complex::Complex64) -> CMat {
    let n = vectors.nrows();
    let p0 = pval(0.0);
    let mut out = identity(n) * p0;
    for (i, &si) in s.iter().enumerate() {
        out += vectors.column(i) * vectors.column(i).adjoint() * (pval(si) - p0);
    }
    out
}
