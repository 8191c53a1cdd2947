//! GQSP phase factors.
//!
//! The circuit applies `R(θ₀,φ₀,λ)`, then alternately the anti-controlled
//! signal operator `A = |0⟩⟨0|⊗U + |1⟩⟨1|⊗I` and `R(θᵢ,φᵢ,0)`. Its matrix is
//! `R_d·A·…·A·R_0` and the first column of its symbolic form is `(P, Q)`.
//!
//! Phases are found by completing `P` with a `Q` satisfying
//! `|P|² + |Q|² = 1` on the unit circle and peeling one rotation per degree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c64, eigenvalues, ensure_unitary, identity, kron, qubit_projector, real, CMat};
use crate::polynomials::PolyCoeffs;

pub const DEFAULT_MARGIN: f64 = 1e-4;

/// Sample count for the completion identity check.
pub const COMPLETION_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PhaseJson", try_from = "PhaseJson")]
pub struct PhaseFactors {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGate {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl RotationGate {
    pub fn new(theta: f64, phi: f64, lambda: f64) -> Self {
        Self { theta, phi, lambda }
    }
}

/// `[[e^{i(λ+φ)}cosθ, e^{iφ}sinθ], [e^{iλ}sinθ, -cosθ]]`.
pub fn rotation_matrix(g: RotationGate) -> CMat {
    let (s, c) = g.theta.sin_cos();
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(c, g.lambda + g.phi),
            Complex64::from_polar(s, g.phi),
            Complex64::from_polar(s, g.lambda),
            real(-c),
        ],
    )
}

/// Maps an angle into `(-π, π]`.
pub fn canonical_angle(a: f64) -> f64 {
    let x = (a + PI).rem_euclid(2.0 * PI) - PI;
    if x <= -PI {
        x + 2.0 * PI
    } else {
        x
    }
}

impl PhaseFactors {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>, lambda: f64) -> Result<Self> {
        if thetas.is_empty() || thetas.len() != phis.len() {
            return Err(Error::InvalidParameter(format!(
                "need equal, nonzero numbers of thetas and phis (got {} and {})",
                thetas.len(),
                phis.len()
            )));
        }
        if thetas.iter().chain(phis.iter()).any(|a| !a.is_finite()) || !lambda.is_finite() {
            return Err(Error::InvalidParameter("phase angles must be finite".into()));
        }
        Ok(Self {
            thetas: thetas.into_iter().map(canonical_angle).collect(),
            phis: phis.into_iter().map(canonical_angle).collect(),
            lambda: canonical_angle(lambda),
        })
    }

    pub fn degree(&self) -> usize {
        self.thetas.len() - 1
    }

    /// The rotation applied at step `i`; `λ` only enters the first one.
    pub fn gate(&self, i: usize) -> RotationGate {
        let lambda = if i == 0 { self.lambda } else { 0.0 };
        RotationGate::new(self.thetas[i], self.phis[i], lambda)
    }
}

/// Polynomial pair `(P, Q)` from the symbolic first column of the circuit.
fn reconstruct_pair(ph: &PhaseFactors) -> (Vec<Complex64>, Vec<Complex64>) {
    let r0 = rotation_matrix(ph.gate(0));
    let mut p = vec![r0[(0, 0)]];
    let mut q = vec![r0[(1, 0)]];
    for i in 1..=ph.degree() {
        let r = rotation_matrix(ph.gate(i));
        // diag(z, 1) shifts P up one power
        let mut zp = vec![real(0.0)];
        zp.extend_from_slice(&p);
        q.push(real(0.0));
        p = zp
            .iter()
            .zip(q.iter())
            .map(|(a, b)| r[(0, 0)] * a + r[(0, 1)] * b)
            .collect();
        q = zp
            .iter()
            .zip(q.iter())
            .map(|(a, b)| r[(1, 0)] * a + r[(1, 1)] * b)
            .collect();
    }
    (p, q)
}

/// `P(z)`, the `|0⟩⟨0|` entry of the symbolic circuit matrix.
#[allow(non_snake_case)]
pub fn reconstruct_P(ph: &PhaseFactors) -> PolyCoeffs {
    PolyCoeffs::new(reconstruct_pair(ph).0).expect("phase list is non-empty")
}

/// `Q(z)`, the `|1⟩⟨0|` entry of the symbolic circuit matrix.
#[allow(non_snake_case)]
pub fn reconstruct_Q(ph: &PhaseFactors) -> PolyCoeffs {
    PolyCoeffs::new(reconstruct_pair(ph).1).expect("phase list is non-empty")
}

/// Complementary polynomial together with the worst deviation of
/// `|P|² + |Q|²` from one on the sampled circle.
#[derive(Debug, Clone)]
pub struct Completion {
    pub q: PolyCoeffs,
    pub residual: f64,
    /// Smallest `||r| - 1|` over the selected roots.
    pub min_root_gap: f64,
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(real(0.0), |acc, a| acc * z + a)
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = real(0.0);
    let mut dv = real(0.0);
    for a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Roots of `Σ c_k z^k` with `c_0` and the leading coefficient nonzero.
///
/// Polynomials in `z^s` are solved in `w = z^s` first; the rotational
/// symmetry of their roots otherwise stalls the shifted QR iteration.
fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = (1..=n).filter(|&k| c[k] != real(0.0)).fold(0, gcd).max(1);
    let reduced: Vec<Complex64> = c.iter().step_by(s).copied().collect();
    let w_roots = match companion_roots(&reduced) {
        Ok(r) => r,
        Err(_) => aberth_roots(&reduced)?,
    };
    let mut roots = Vec::with_capacity(n);
    for w in w_roots {
        let base = w.powf(1.0 / s as f64);
        for j in 0..s {
            roots.push(base * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / s as f64));
        }
    }
    polish_roots(c, &mut roots);
    Ok(roots)
}

fn companion_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let mut comp = CMat::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -c[n - 1 - j] / lead;
    }
    for i in 1..n {
        comp[(i, i - 1)] = real(1.0);
    }
    eigenvalues(&comp)
}

/// Simultaneous Aberth-Ehrlich iteration.
fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let radius = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for k in 0..n {
            let (v, dv) = horner_with_derivative(c, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (real(1.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence("Aberth iteration for completion roots".into()))
}

fn polish_roots(c: &[Complex64], roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        let mut value = horner(c, *r).norm();
        for _ in 0..8 {
            let (v, dv) = horner_with_derivative(c, *r);
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            let candidate = *r - step;
            let cand_value = horner(c, candidate).norm();
            // only accept steps that reduce the residual
            if cand_value >= value {
                break;
            }
            *r = candidate;
            value = cand_value;
        }
    }
}

/// `|P|² + |Q|²` deviation from one on `COMPLETION_SAMPLES` circle points.
pub fn completion_residual(p: &PolyCoeffs, q: &PolyCoeffs) -> f64 {
    (0..COMPLETION_SAMPLES)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / COMPLETION_SAMPLES as f64;
            (p.eval_circle(t).norm_sqr() + q.eval_circle(t).norm_sqr() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Finds `Q` of the same degree with `|P|² + |Q|² = 1` on the unit circle.
pub fn complementary_polynomial(p: &PolyCoeffs) -> Result<Completion> {
    let a = p.coeffs();
    let d = p.degree();
    // G(z) = z^d (1 - P(z) conj(P)(1/z)), degree 2d
    let mut g = vec![real(0.0); 2 * d + 1];
    g[d] = real(1.0);
    for (j, aj) in a.iter().enumerate() {
        for (l, al) in a.iter().enumerate() {
            g[j + d - l] -= aj * al.conj();
        }
    }
    let scale = g.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale < 1e-14 {
        let q = PolyCoeffs::new(vec![real(0.0); d + 1])?;
        let residual = completion_residual(p, &q);
        return Ok(Completion {
            q,
            residual,
            min_root_gap: f64::INFINITY,
        });
    }
    let tiny = 1e-15 * scale;
    let low = g.iter().position(|z| z.norm() > tiny).unwrap_or(0);
    let high = g.iter().rposition(|z| z.norm() > tiny).unwrap_or(0);
    let mut roots = vec![real(0.0); low];
    roots.extend(polynomial_roots(&g[low..=high])?);
    roots.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    roots.truncate(d);
    let min_root_gap = roots
        .iter()
        .map(|r| (r.norm() - 1.0).abs())
        .fold(f64::INFINITY, f64::min);
    if min_root_gap < 1e-6 {
        log::warn!("completion roots within {min_root_gap:.1e} of the unit circle; phases may be ill-conditioned");
    }

    // Q(z) = c ∏(z - r_i) sampled at roots of unity; expanding the product
    // in the monomial basis is unstable for clustered roots
    let n = (d + 1).next_power_of_two().max(64);
    let mut values: Vec<Complex64> = (0..n)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            roots.iter().map(|r| z - r).product()
        })
        .collect();
    let mut acc = 0.0;
    for (k, v) in values.iter().enumerate() {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += (1.0 - horner(a, z).norm_sqr()) / v.norm_sqr();
    }
    let c = (acc / n as f64).sqrt();
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    let q = PolyCoeffs::new(values[..=d].iter().map(|x| x * (c / n as f64)).collect())?;
    let residual = completion_residual(p, &q);
    Ok(Completion {
        q,
        residual,
        min_root_gap,
    })
}

/// Phases realizing `P` as the `|0⟩⟨0|` block of the GQSP circuit.
pub fn solve_phases(c: &PolyCoeffs, margin: f64) -> Result<PhaseFactors> {
    let max_circle = c.max_abs_circle();
    let limit = 1.0 - margin;
    if max_circle > limit {
        return Err(Error::NormViolation { max_circle, limit });
    }
    let completion = complementary_polynomial(c)?;
    if completion.residual > 1e-6 {
        return Err(Error::NonConvergence(format!(
            "complementary polynomial violates |P|²+|Q|²=1 by {:.2e}",
            completion.residual
        )));
    }
    let d = c.degree();
    let mut p: Vec<Complex64> = c.coeffs().to_vec();
    let mut q: Vec<Complex64> = completion.q.into_coeffs();
    let mut thetas = vec![0.0; d + 1];
    let mut phis = vec![0.0; d + 1];
    for i in (1..=p.len() - 1).rev() {
        let (top_p, top_q) = (p[i], q[i]);
        let (low_p, low_q) = (p[0], q[0]);
        let (theta, phi) = if top_p.norm_sqr() + top_q.norm_sqr() >= low_p.norm_sqr() + low_q.norm_sqr() {
            // kill the z^i term of the second component
            (top_q.norm().atan2(top_p.norm()), top_p.arg() - top_q.arg())
        } else if low_p.norm_sqr() + low_q.norm_sqr() > 0.0 {
            // kill the constant term of the first component
            (low_p.norm().atan2(low_q.norm()), low_p.arg() - (-low_q).arg())
        } else {
            (0.0, 0.0)
        };
        thetas[i] = theta;
        phis[i] = phi;
        let (s, co) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, -phi);
        let first: Vec<Complex64> = p.iter().zip(q.iter()).map(|(a, b)| e * co * a + b * s).collect();
        let second: Vec<Complex64> = p.iter().zip(q.iter()).map(|(a, b)| e * s * a - b * co).collect();
        p = first[1..].to_vec();
        q = second[..i].to_vec();
    }
    let (a, b) = (p[0], q[0]);
    thetas[0] = b.norm().atan2(a.norm());
    let lambda = if b.norm() > 1e-300 { b.arg() } else { 0.0 };
    phis[0] = if a.norm() > 1e-300 { a.arg() - lambda } else { 0.0 };
    PhaseFactors::new(thetas, phis, lambda)
}

/// `|0⟩⟨0|⊗U + |1⟩⟨1|⊗I`.
pub fn anti_controlled(u: &CMat) -> CMat {
    let m = u.nrows();
    kron(&qubit_projector(0), u) + kron(&qubit_projector(1), &identity(m))
}

/// Explicit `2M × 2M` matrix of the GQSP circuit for `U`, flag qubit first.
pub fn gqsp_matrix(ph: &PhaseFactors, u: &CMat) -> Result<CMat> {
    ensure_unitary(u, 1e-10)?;
    Ok(gqsp_matrix_unchecked(ph, u))
}

pub(crate) fn gqsp_matrix_unchecked(ph: &PhaseFactors, u: &CMat) -> CMat {
    let m = u.nrows();
    let id = identity(m);
    let a = anti_controlled(u);
    let mut out = kron(&rotation_matrix(ph.gate(0)), &id);
    for i in 1..=ph.degree() {
        out = kron(&rotation_matrix(ph.gate(i)), &id) * (&a * out);
    }
    out
}

/// `P(U)` for a normal `U` via its Schur form (diagonal for normal matrices).
pub fn apply_to_normal(c: &PolyCoeffs, u: &CMat) -> Result<CMat> {
    let schur = u
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let n = u.nrows();
    let diag = CMat::from_fn(n, n, |i, j| {
        if i == j {
            c.eval_monomial(t[(i, i)])
        } else {
            c64(0.0, 0.0)
        }
    });
    Ok(&q * diag * q.adjoint())
}

#[derive(Serialize, Deserialize)]
struct PhaseJson {
    thetas: Vec<f64>,
    phis: Vec<f64>,
    lambda: f64,
    degree: usize,
}

impl From<PhaseFactors> for PhaseJson {
    fn from(p: PhaseFactors) -> Self {
        let degree = p.degree();
        Self {
            thetas: p.thetas,
            phis: p.phis,
            lambda: p.lambda,
            degree,
        }
    }
}

impl TryFrom<PhaseJson> for PhaseFactors {
    type Error = Error;

    fn try_from(j: PhaseJson) -> Result<Self> {
        let p = PhaseFactors::new(j.thetas, j.phis, j.lambda)?;
        if p.degree() != j.degree {
            return Err(Error::Serialization(format!(
                "degree {} disagrees with {} angles",
                j.degree,
                p.thetas.len()
            )));
        }
        Ok(p)
    }
}
