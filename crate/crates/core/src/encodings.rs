//! Projected unitary encodings as explicit dense matrices.
//!
//! An encoding `(U, Π_L, Π_R, α)` carries `A/α = Π_L† U Π_R`. Constructors
//! validate unitarity and isometry at `VALIDATION_TOL`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{
    direct_sum, ensure_hermitian, hermitian_eigen, hermiticity_defect, identity, isometry_defect,
    kron, max_abs, orthonormal_complement, pauli_x, pauli_z, qubit_projector, real, spectral_norm, thin_svd,
    unitarity_defect, CMat, CVec, MatrixJson,
};

pub const VALIDATION_TOL: f64 = 1e-10;

/// Below this `sin γ` the qubitized pair collapses to a single eigenvector.
pub const DEGENERATE_SIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedUnitaryEncoding {
    pub u: CMat,
    pub pi_l: CMat,
    pub pi_r: CMat,
    pub alpha: f64,
}

impl ProjectedUnitaryEncoding {
    pub fn new(u: CMat, pi_l: CMat, pi_r: CMat, alpha: f64) -> Result<Self> {
        let e = Self { u, pi_l, pi_r, alpha };
        e.validate(VALIDATION_TOL)?;
        Ok(e)
    }

    /// Lists every violated invariant.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut problems = Vec::new();
        let m = self.u.nrows();
        if !self.u.is_square() {
            problems.push(format!("U is {}x{}, not square", self.u.nrows(), self.u.ncols()));
        } else {
            let d = unitarity_defect(&self.u);
            if d > tol {
                problems.push(format!("U is not unitary (defect {d:.2e})"));
            }
        }
        for (name, pi) in [("Pi_L", &self.pi_l), ("Pi_R", &self.pi_r)] {
            if pi.nrows() != m {
                problems.push(format!("{name} has {} rows, U has dimension {m}", pi.nrows()));
            } else if pi.ncols() > m {
                problems.push(format!("{name} has more columns than rows"));
            } else {
                let d = isometry_defect(pi);
                if d > tol {
                    problems.push(format!("{name} is not an isometry (defect {d:.2e})"));
                }
            }
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            problems.push(format!("alpha must be positive, got {}", self.alpha));
        }
        if problems.is_empty() {
            let norm = spectral_norm(&self.encoded_matrix());
            if norm > 1.0 + 1e-9 {
                problems.push(format!("encoded block has norm {norm} > 1"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidEncoding(problems))
        }
    }

    /// `Π_L† U Π_R = A/α`.
    pub fn encoded_matrix(&self) -> CMat {
        self.pi_l.adjoint() * &self.u * &self.pi_r
    }

    /// The unnormalized `A`.
    pub fn encoded_a(&self) -> CMat {
        self.encoded_matrix().scale(self.alpha)
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn n_left(&self) -> usize {
        self.pi_l.ncols()
    }

    pub fn n_right(&self) -> usize {
        self.pi_r.ncols()
    }

    /// `(U†, Π_R, Π_L, α)`, an encoding of `A†/α`.
    pub fn adjoint(&self) -> Self {
        Self {
            u: self.u.adjoint(),
            pi_l: self.pi_r.clone(),
            pi_r: self.pi_l.clone(),
            alpha: self.alpha,
        }
    }

    pub fn is_hermitian_encoding(&self, tol: f64) -> bool {
        self.pi_l.shape() == self.pi_r.shape()
            && max_abs(&(&self.pi_l - &self.pi_r)) <= tol
            && hermiticity_defect(&self.u) <= tol
    }
}

/// Encoding with `U = U†` and `Π_L = Π_R = Π`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEncoding {
    inner: ProjectedUnitaryEncoding,
}

impl HermitianEncoding {
    pub fn new(u: CMat, pi: CMat, alpha: f64) -> Result<Self> {
        Self::try_from_encoding(ProjectedUnitaryEncoding::new(u, pi.clone(), pi, alpha)?)
    }

    pub fn try_from_encoding(e: ProjectedUnitaryEncoding) -> Result<Self> {
        e.validate(VALIDATION_TOL)?;
        let mut problems = Vec::new();
        if e.pi_l.shape() != e.pi_r.shape() || max_abs(&(&e.pi_l - &e.pi_r)) > VALIDATION_TOL {
            problems.push("Pi_L and Pi_R differ".to_string());
        }
        let h = hermiticity_defect(&e.u);
        if h > VALIDATION_TOL {
            problems.push(format!("U is not Hermitian (defect {h:.2e})"));
        }
        if problems.is_empty() {
            Ok(Self { inner: e })
        } else {
            Err(Error::InvalidEncoding(problems))
        }
    }

    pub fn u(&self) -> &CMat {
        &self.inner.u
    }

    pub fn pi(&self) -> &CMat {
        &self.inner.pi_l
    }

    pub fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn encoded_matrix(&self) -> CMat {
        self.inner.encoded_matrix()
    }

    pub fn as_encoding(&self) -> &ProjectedUnitaryEncoding {
        &self.inner
    }

    pub fn into_encoding(self) -> ProjectedUnitaryEncoding {
        self.inner
    }
}

/// `Π_L† U Π_R` after validation.
pub fn encoded_matrix(e: &ProjectedUnitaryEncoding) -> Result<CMat> {
    e.validate(VALIDATION_TOL)?;
    Ok(e.encoded_matrix())
}

fn check_alpha(a: &CMat, alpha: f64) -> Result<f64> {
    let norm = spectral_norm(a);
    if !(alpha > 0.0) || alpha < norm - 1e-12 {
        return Err(Error::Subnormalization { alpha, norm });
    }
    Ok(norm)
}

/// `U = [[B, (I-BB†)^½], [(I-B†B)^½, -B†]]` with `B = W C V†` from the SVD,
/// so that `C` and `S = (I-C²)^½` share one set of singular values.
fn cosine_sine_dilation(b: &CMat) -> Result<CMat> {
    let (nl, nr) = b.shape();
    let svd = thin_svd(b)?;
    let k = svd.s.len();
    let c: Vec<f64> = svd.s.iter().map(|s| s.clamp(0.0, 1.0)).collect();
    let sm1 = CMat::from_fn(k, k, |i, j| {
        if i == j {
            real((1.0 - c[i] * c[i]).sqrt() - 1.0)
        } else {
            real(0.0)
        }
    });
    let cm = CMat::from_fn(k, k, |i, j| if i == j { real(c[i]) } else { real(0.0) });
    let b_clean = &svd.w * &cm * svd.v.adjoint();
    let top_right = identity(nl) + &svd.w * &sm1 * svd.w.adjoint();
    let bottom_left = identity(nr) + &svd.v * &sm1 * svd.v.adjoint();
    let mut u = CMat::zeros(nl + nr, nl + nr);
    u.view_mut((0, 0), (nl, nr)).copy_from(&b_clean);
    u.view_mut((0, nr), (nl, nl)).copy_from(&top_right);
    u.view_mut((nl, 0), (nr, nr)).copy_from(&bottom_left);
    u.view_mut((nl, nr), (nr, nl)).copy_from(&(-b_clean.adjoint()));
    Ok(u)
}

fn selector(m: usize, n: usize) -> CMat {
    crate::linalg::top_selector(m, n)
}

/// Hermitian unitary dilation `[[A/α, S], [S, -A/α]]`, `S = (I - (A/α)²)^½`,
/// with both blocks built from one eigendecomposition.
pub fn dilate_hermitian(a: &CMat, alpha: f64) -> Result<HermitianEncoding> {
    ensure_hermitian(a, VALIDATION_TOL)?;
    check_alpha(a, alpha)?;
    let n = a.nrows();
    let (values, vectors) = hermitian_eigen(&a.scale(1.0 / alpha));
    let lam: Vec<f64> = values.iter().map(|l| l.clamp(-1.0, 1.0)).collect();
    let diag = |f: &dyn Fn(f64) -> f64| {
        let d = CMat::from_fn(n, n, |i, j| if i == j { real(f(lam[i])) } else { real(0.0) });
        &vectors * d * vectors.adjoint()
    };
    let b = diag(&|l| l);
    let s = diag(&|l| (1.0 - l * l).sqrt());
    let mut u = CMat::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(&b);
    u.view_mut((0, n), (n, n)).copy_from(&s);
    u.view_mut((n, 0), (n, n)).copy_from(&s);
    u.view_mut((n, n), (n, n)).copy_from(&(-&b));
    // exact Hermitian symmetry for downstream checks
    let u = (&u + u.adjoint()).scale(0.5);
    HermitianEncoding::new(u, selector(2 * n, n), alpha)
}

/// Unitary completion of an arbitrary `A/α` of dimension `N_L + N_R`.
pub fn dilate_general(a: &CMat, alpha: f64) -> Result<ProjectedUnitaryEncoding> {
    check_alpha(a, alpha)?;
    let (nl, nr) = a.shape();
    let u = cosine_sine_dilation(&a.scale(1.0 / alpha))?;
    ProjectedUnitaryEncoding::new(u, selector(nl + nr, nl), selector(nl + nr, nr), alpha)
}

/// `R_Π = -(I - 2ΠΠ†)`.
pub fn reflection(pi: &CMat) -> CMat {
    (pi * pi.adjoint()).scale(2.0) - identity(pi.nrows())
}

/// Qubitized walk `R_Π U`.
pub fn walk_operator(e: &HermitianEncoding) -> CMat {
    reflection(e.pi()) * e.u()
}

/// One eigenvalue `λ` of `A/α` and the eigenvectors of the walk it generates.
#[derive(Debug, Clone)]
pub struct QubitizedPair {
    /// Eigenvalue of `A/α`.
    pub lambda: f64,
    /// `arccos(λ)`.
    pub gamma: f64,
    /// `e^{+iγ}, e^{-iγ}`, or the single value `e^{iγ}` when degenerate.
    pub eigvals: Vec<Complex64>,
    pub eigvecs: Vec<CVec>,
    /// `Π λ⃗`.
    pub coding_vector: CVec,
    /// Largest `‖R_Π U v - Λ v‖`.
    pub residual: f64,
}

impl QubitizedPair {
    pub fn is_degenerate(&self) -> bool {
        self.eigvecs.len() == 1
    }
}

/// Eigenvectors `(e^{±iγ} I - U) Π λ⃗ / (√2 sin γ)` of the walk operator.
pub fn qubitized_eigenpairs(e: &HermitianEncoding) -> Result<Vec<QubitizedPair>> {
    let h = e.encoded_matrix();
    let (values, vectors) = hermitian_eigen(&h);
    let w = walk_operator(e);
    let mut pairs = Vec::with_capacity(values.len());
    for (i, &lambda) in values.iter().enumerate() {
        let lam = lambda.clamp(-1.0, 1.0);
        let gamma = lam.acos();
        let sin = gamma.sin();
        let coding: CVec = e.pi() * vectors.column(i);
        let (eigvals, eigvecs) = if sin < DEGENERATE_SIN {
            if sin > 0.0 {
                log::warn!("near-degenerate qubitized pair (sin γ = {sin:.1e}); using the single-vector branch");
            }
            (vec![Complex64::from_polar(1.0, gamma)], vec![coding.clone()])
        } else {
            let uc: CVec = e.u() * &coding;
            let make = |sign: f64| -> (Complex64, CVec) {
                let val = Complex64::from_polar(1.0, sign * gamma);
                let v = (coding.scale(1.0) * val - &uc) / real(SQRT_2 * sin);
                (val, v)
            };
            let (vp, p) = make(1.0);
            let (vm, m) = make(-1.0);
            (vec![vp, vm], vec![p, m])
        };
        let residual = eigvals
            .iter()
            .zip(eigvecs.iter())
            .map(|(val, v)| (&w * v - v * *val).norm())
            .fold(0.0, f64::max);
        if residual > 1e-9 {
            return Err(Error::EigenpairResidual { residual, tol: 1e-9 });
        }
        pairs.push(QubitizedPair {
            lambda,
            gamma,
            eigvals,
            eigvecs,
            coding_vector: coding,
            residual,
        });
    }
    Ok(pairs)
}

/// `Π λ⃗ = (Λ⃗⁺ - Λ⃗⁻) / (√2 i)`.
pub fn coding_subspace_decomposition(pair: &QubitizedPair) -> Result<CVec> {
    if pair.is_degenerate() {
        return Err(Error::DegeneratePair(pair.gamma));
    }
    Ok((&pair.eigvecs[0] - &pair.eigvecs[1]) / Complex64::new(0.0, SQRT_2))
}

/// `|0⟩⟨0| ⊗ U + |1⟩⟨1| ⊗ I`.
pub fn anti_controlled(u: &CMat) -> CMat {
    crate::phases::anti_controlled(u)
}

/// `-Z` on the flag qubit, controlled on the system lying in `range(Π)`.
pub fn projector_controlled_neg_z(pi: &CMat) -> CMat {
    let m = pi.nrows();
    let proj = pi * pi.adjoint();
    kron(&(-pauli_z()), &proj) + kron(&identity(2), &(identity(m) - proj))
}

/// `|0⟩⟨0| ⊗ R_Π U + |1⟩⟨1| ⊗ I`.
pub fn controlled_walk(e: &HermitianEncoding) -> CMat {
    anti_controlled(&walk_operator(e))
}

/// The same operator as `(-Z ⊗ I) · (Π-controlled -Z) · (anti-controlled U)`.
pub fn controlled_walk_decomposed(e: &HermitianEncoding) -> CMat {
    let m = e.dim();
    kron(&(-pauli_z()), &identity(m)) * projector_controlled_neg_z(e.pi()) * anti_controlled(e.u())
}

/// `Ū = [[0, U], [U†, 0]]`, `Π̄ = diag(Π_L, Π_R)`, encoding `[[0, A], [A†, 0]]/α`.
pub fn hermitianize(e: &ProjectedUnitaryEncoding) -> Result<HermitianEncoding> {
    e.validate(VALIDATION_TOL)?;
    let m = e.dim();
    let mut u = CMat::zeros(2 * m, 2 * m);
    u.view_mut((0, m), (m, m)).copy_from(&e.u);
    u.view_mut((m, 0), (m, m)).copy_from(&e.u.adjoint());
    let pi = direct_sum(&e.pi_l, &e.pi_r);
    let out = HermitianEncoding::new(u, pi, e.alpha)?;

    let b = e.encoded_matrix();
    let (nl, nr) = b.shape();
    let mut direct = CMat::zeros(nl + nr, nl + nr);
    direct.view_mut((0, nl), (nl, nr)).copy_from(&b);
    direct.view_mut((nl, 0), (nr, nl)).copy_from(&b.adjoint());
    let dev = max_abs(&(out.encoded_matrix() - direct));
    if dev > VALIDATION_TOL {
        return Err(Error::InvalidEncoding(vec![format!(
            "Hermitianized block deviates from direct assembly by {dev:.2e}"
        )]));
    }
    Ok(out)
}

/// Embeds an encoding into dimension `m`, as `I_k ⊗ U` when `M` divides `m`
/// and as `U ⊕ I` otherwise. The isometries keep their leading rows.
pub fn pad_encoding(e: &ProjectedUnitaryEncoding, m: usize) -> Result<ProjectedUnitaryEncoding> {
    let cur = e.dim();
    if m < cur {
        return Err(Error::DimensionMismatch(format!(
            "cannot pad dimension {cur} down to {m}"
        )));
    }
    if m == cur {
        return Ok(e.clone());
    }
    let u = if m.is_multiple_of(cur) {
        kron(&identity(m / cur), &e.u)
    } else {
        direct_sum(&e.u, &identity(m - cur))
    };
    let pad = |pi: &CMat| {
        let mut out = CMat::zeros(m, pi.ncols());
        out.view_mut((0, 0), pi.shape()).copy_from(pi);
        out
    };
    Ok(ProjectedUnitaryEncoding {
        u,
        pi_l: pad(&e.pi_l),
        pi_r: pad(&e.pi_r),
        alpha: e.alpha,
    })
}

/// Pads the unitary dimension up to the next power of two.
pub fn pad_to_power_of_two(e: &ProjectedUnitaryEncoding) -> Result<ProjectedUnitaryEncoding> {
    pad_encoding(e, e.dim().next_power_of_two())
}

/// Unitary `V` with `V Π_from = Π_to`, identity when the ranges coincide.
fn range_transfer(pi_from: &CMat, pi_to: &CMat) -> CMat {
    if pi_from.shape() == pi_to.shape() && max_abs(&(pi_from - pi_to)) <= VALIDATION_TOL {
        return identity(pi_from.nrows());
    }
    let q_from = orthonormal_complement(pi_from);
    let q_to = orthonormal_complement(pi_to);
    pi_to * pi_from.adjoint() + q_to * q_from.adjoint()
}

/// `Ū = (I₂⊗U₁)(I₂⊗V)(I₂⊗P + X⊗(I-P))(I₂⊗U₂)` with `P = Π_{2,L}Π_{2,L}†`.
///
/// The flag qubit is the most significant factor; `Π̄_L = |0⟩⊗Π_{1,L}`,
/// `Π̄_R = |0⟩⊗Π_{2,R}`, and the encoded block is `A₁A₂/(α₁α₂)`.
pub fn multiply(
    e1: &ProjectedUnitaryEncoding,
    e2: &ProjectedUnitaryEncoding,
) -> Result<ProjectedUnitaryEncoding> {
    if e1.n_right() != e2.n_left() {
        return Err(Error::DimensionMismatch(format!(
            "A1 has {} columns but A2 has {} rows",
            e1.n_right(),
            e2.n_left()
        )));
    }
    let m = e1.dim().max(e2.dim());
    let e1 = pad_encoding(e1, m)?;
    let e2 = pad_encoding(e2, m)?;
    let proj = &e2.pi_l * e2.pi_l.adjoint();
    let flip = kron(&qubit_projector(0), &proj)
        + kron(&qubit_projector(1), &proj)
        + kron(&pauli_x(), &(identity(m) - &proj));
    let v = range_transfer(&e2.pi_l, &e1.pi_r);
    let i2 = identity(2);
    let u = kron(&i2, &(&e1.u * v)) * flip * kron(&i2, &e2.u);
    let ket0 = crate::linalg::ket(2, 0);
    ProjectedUnitaryEncoding::new(
        u,
        kron(&ket0, &e1.pi_l),
        kron(&ket0, &e2.pi_r),
        e1.alpha * e2.alpha,
    )
}

/// JSON bundle `{"U", "Pi_L", "Pi_R", "alpha"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EncodingJson {
    #[serde(rename = "U")]
    pub u: MatrixJson,
    #[serde(rename = "Pi_L")]
    pub pi_l: MatrixJson,
    #[serde(rename = "Pi_R")]
    pub pi_r: MatrixJson,
    pub alpha: f64,
}

impl EncodingJson {
    pub fn from_encoding(e: &ProjectedUnitaryEncoding) -> Self {
        Self {
            u: MatrixJson::from_matrix(&e.u),
            pi_l: MatrixJson::from_matrix(&e.pi_l),
            pi_r: MatrixJson::from_matrix(&e.pi_r),
            alpha: e.alpha,
        }
    }

    pub fn to_encoding(&self) -> Result<ProjectedUnitaryEncoding> {
        ProjectedUnitaryEncoding::new(
            self.u.to_matrix()?,
            self.pi_l.to_matrix()?,
            self.pi_r.to_matrix()?,
            self.alpha,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, eigenvalues, top_selector};
    use crate::random::{gaussian_matrix, haar_unitary, random_hermitian, seeded};

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        a.shape() == b.shape() && max_abs(&(a - b)) <= tol
    }

    fn scalar(x: f64) -> CMat {
        CMat::from_element(1, 1, real(x))
    }

    #[test]
    fn trivial_encoding() {
        let e = ProjectedUnitaryEncoding::new(identity(3), identity(3), identity(3), 1.0).unwrap();
        assert!(close(&encoded_matrix(&e).unwrap(), &identity(3), 0.0));
    }

    #[test]
    fn validation_lists_every_problem() {
        let e = ProjectedUnitaryEncoding {
            u: identity(2).scale(2.0),
            pi_l: identity(2).scale(3.0),
            pi_r: identity(3),
            alpha: -1.0,
        };
        match e.validate(VALIDATION_TOL) {
            Err(Error::InvalidEncoding(p)) => assert_eq!(p.len(), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scalar_hermitian_dilation() {
        let e = dilate_hermitian(&scalar(0.5), 1.0).unwrap();
        let s = 0.75_f64.sqrt();
        let expect = CMat::from_row_slice(2, 2, &[real(0.5), real(s), real(s), real(-0.5)]);
        assert!(close(e.u(), &expect, 1e-15));
        assert!(close(&e.encoded_matrix(), &scalar(0.5), 1e-15));
    }

    #[test]
    fn zero_dilation_is_swap() {
        let e = dilate_hermitian(&CMat::zeros(2, 2), 1.0).unwrap();
        let expect = kron(&pauli_x(), &identity(2));
        assert!(close(e.u(), &expect, 1e-15));
    }

    #[test]
    fn random_hermitian_dilation() {
        let mut rng = seeded(20);
        let a = random_hermitian(4, &mut rng);
        let alpha = 1.5 * spectral_norm(&a);
        let e = dilate_hermitian(&a, alpha).unwrap();
        assert!(close(&(e.u() * e.u()), &identity(8), 1e-10));
        assert!(close(&e.encoded_matrix(), &a.scale(1.0 / alpha), 1e-10));
    }

    #[test]
    fn dilation_rejects_small_alpha() {
        let err = dilate_hermitian(&scalar(2.0), 1.0).unwrap_err();
        assert!(matches!(err, Error::Subnormalization { .. }));
        assert!(matches!(dilate_general(&scalar(2.0), 1.0), Err(Error::Subnormalization { .. })));
        assert!(matches!(dilate_hermitian(&gaussian_matrix(2, 2, &mut seeded(1)), 9.0), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn general_dilation_examples() {
        let x = pauli_x();
        let e = dilate_general(&x, 1.0).unwrap();
        assert!(close(&e.encoded_matrix(), &x, 1e-14));
        let d = CMat::from_row_slice(2, 2, &[real(0.3), real(0.0), real(0.0), real(0.7)]);
        let e = dilate_general(&d, 1.0).unwrap();
        assert!(close(&e.encoded_matrix(), &d, 1e-12));
        let a = gaussian_matrix(3, 5, &mut seeded(21));
        let alpha = 1.1 * spectral_norm(&a);
        let e = dilate_general(&a, alpha).unwrap();
        assert!(unitarity_defect(&e.u) < 1e-10);
        assert!(close(&e.encoded_matrix(), &a.scale(1.0 / alpha), 1e-10));
    }

    #[test]
    fn reflection_examples() {
        assert!(close(&reflection(&identity(3)), &identity(3), 0.0));
        assert!(close(&reflection(&top_selector(2, 1)), &pauli_z(), 0.0));
        let pi = crate::random::random_isometry(5, 2, &mut seeded(22));
        let r = reflection(&pi);
        assert!(close(&(&r * &r), &identity(5), 1e-10));
        assert!(hermiticity_defect(&r) < 1e-10);
    }

    fn sorted_phases(mut v: Vec<Complex64>) -> Vec<f64> {
        let mut a: Vec<f64> = v.drain(..).map(|z| z.arg()).collect();
        a.sort_by(f64::total_cmp);
        a
    }

    #[test]
    fn walk_of_scalar_half() {
        let e = dilate_hermitian(&scalar(0.5), 1.0).unwrap();
        let ev = sorted_phases(eigenvalues(&walk_operator(&e)).unwrap());
        let t = std::f64::consts::FRAC_PI_3;
        assert!((ev[0] + t).abs() < 1e-12 && (ev[1] - t).abs() < 1e-12);
    }

    #[test]
    fn walk_fixes_coding_space_for_identity() {
        let e = dilate_hermitian(&identity(2), 1.0).unwrap();
        let w = walk_operator(&e);
        let pi = e.pi();
        assert!(close(&(&w * pi), pi, 1e-12));
    }

    #[test]
    fn walk_spectrum_matches_arccos() {
        let mut rng = seeded(23);
        let a = random_hermitian(4, &mut rng);
        let e = dilate_hermitian(&a, 1.3 * spectral_norm(&a)).unwrap();
        let (vals, _) = hermitian_eigen(&e.encoded_matrix());
        let mut expect: Vec<f64> = vals.iter().flat_map(|l| [l.acos(), -l.acos()]).collect();
        expect.sort_by(f64::total_cmp);
        let got = sorted_phases(eigenvalues(&walk_operator(&e)).unwrap());
        for (g, x) in got.iter().zip(expect.iter()) {
            assert!((g - x).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenpairs_scalar_examples() {
        let e = dilate_hermitian(&scalar(0.5), 1.0).unwrap();
        let pairs = qubitized_eigenpairs(&e).unwrap();
        assert!((pairs[0].gamma - std::f64::consts::FRAC_PI_3).abs() < 1e-14);
        assert!((pairs[0].eigvals[0] - Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3)).norm() < 1e-14);

        let e = dilate_hermitian(&scalar(1.0), 1.0).unwrap();
        let pairs = qubitized_eigenpairs(&e).unwrap();
        assert!(pairs[0].is_degenerate());
        assert!((pairs[0].eigvals[0] - real(1.0)).norm() < 1e-14);
        assert!(matches!(coding_subspace_decomposition(&pairs[0]), Err(Error::DegeneratePair(_))));
    }

    #[test]
    fn eigenpairs_random_residuals_and_reconstruction() {
        let mut rng = seeded(24);
        let a = random_hermitian(4, &mut rng);
        let e = dilate_hermitian(&a, 1.2 * spectral_norm(&a)).unwrap();
        for pair in qubitized_eigenpairs(&e).unwrap() {
            assert!(pair.residual <= 1e-9);
            for v in &pair.eigvecs {
                assert!((v.norm() - 1.0).abs() < 1e-10);
            }
            let back = coding_subspace_decomposition(&pair).unwrap();
            assert!((back - &pair.coding_vector).norm() < 1e-9);
        }
    }

    #[test]
    fn coding_decomposition_examples() {
        let e = dilate_hermitian(&scalar(0.5), 1.0).unwrap();
        let pair = &qubitized_eigenpairs(&e).unwrap()[0];
        let back = coding_subspace_decomposition(pair).unwrap();
        assert!((back[0].norm() - 1.0).abs() < 1e-9 && back[1].norm() < 1e-9);
        let e = dilate_hermitian(&scalar(0.0), 1.0).unwrap();
        let pair = &qubitized_eigenpairs(&e).unwrap()[0];
        let back = coding_subspace_decomposition(pair).unwrap();
        assert!((back - &pair.coding_vector).norm() < 1e-12);
    }

    #[test]
    fn controlled_walk_forms_agree() {
        let mut rng = seeded(25);
        let a = random_hermitian(3, &mut rng);
        let e = dilate_hermitian(&a, 1.1 * spectral_norm(&a)).unwrap();
        let direct = controlled_walk(&e);
        let m = e.dim();
        assert!(close(&direct.view((m, m), (m, m)).into_owned(), &identity(m), 0.0));
        assert!(close(&direct.view((0, 0), (m, m)).into_owned(), &walk_operator(&e), 0.0));
        assert!(close(&controlled_walk_decomposed(&e), &direct, 1e-12));
    }

    #[test]
    fn hermitianize_examples() {
        let e = dilate_general(&scalar(1.0), 1.0).unwrap();
        let h = hermitianize(&e).unwrap();
        assert!(close(&h.encoded_matrix(), &pauli_x(), 1e-14));

        let a = CMat::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(0.0)]);
        let h = hermitianize(&dilate_general(&a, 1.0).unwrap()).unwrap();
        let (vals, _) = hermitian_eigen(&h.encoded_matrix());
        let expect = [-1.0, 0.0, 0.0, 1.0];
        for (v, x) in vals.iter().zip(expect) {
            assert!((v - x).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitianize_spectrum_is_plus_minus_singular_values() {
        let a = gaussian_matrix(3, 5, &mut seeded(26));
        let alpha = 1.2 * spectral_norm(&a);
        let h = hermitianize(&dilate_general(&a, alpha).unwrap()).unwrap();
        let (vals, _) = hermitian_eigen(&h.encoded_matrix());
        let sv = a.scale(1.0 / alpha).singular_values();
        let mut expect: Vec<f64> = sv.iter().flat_map(|s| [*s, -*s]).collect();
        expect.extend(std::iter::repeat_n(0.0, 8 - expect.len()));
        expect.sort_by(f64::total_cmp);
        for (v, x) in vals.iter().zip(expect) {
            assert!((v - x).abs() < 1e-10);
        }
    }

    #[test]
    fn multiply_examples() {
        let x = ProjectedUnitaryEncoding::new(pauli_x(), identity(2), identity(2), 1.0).unwrap();
        let p = multiply(&x, &x).unwrap();
        assert!(close(&p.encoded_matrix(), &identity(2), 1e-14));

        let h = dilate_general(&scalar(0.5), 1.0).unwrap();
        let p = multiply(&h, &h).unwrap();
        assert!(close(&p.encoded_matrix(), &scalar(0.25), 1e-14));
        assert_eq!(p.dim(), 4);
    }

    #[test]
    fn multiply_random_rectangular() {
        let mut rng = seeded(27);
        let a1 = gaussian_matrix(2, 3, &mut rng);
        let a2 = gaussian_matrix(3, 4, &mut rng);
        let (s1, s2) = (spectral_norm(&a1), spectral_norm(&a2) * 1.3);
        let e1 = dilate_general(&a1, s1).unwrap();
        let e2 = dilate_general(&a2, s2).unwrap();
        let p = multiply(&e1, &e2).unwrap();
        assert_eq!(p.dim(), 2 * e1.dim().max(e2.dim()));
        assert!(close(&p.encoded_matrix(), &(&a1 * &a2).scale(1.0 / (s1 * s2)), 1e-10));
        assert!(matches!(multiply(&e2, &e1), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn multiply_with_unequal_dimensions_and_non_selector_isometries() {
        let mut rng = seeded(28);
        // encoding whose isometries are not coordinate selectors
        let u = haar_unitary(6, &mut rng);
        let pl = crate::random::random_isometry(6, 2, &mut rng);
        let pr = crate::random::random_isometry(6, 2, &mut rng);
        let e1 = ProjectedUnitaryEncoding::new(u, pl, pr, 2.0).unwrap();
        let a2 = gaussian_matrix(2, 2, &mut rng);
        let e2 = dilate_general(&a2, spectral_norm(&a2)).unwrap();
        let p = multiply(&e1, &e2).unwrap();
        assert_eq!(p.dim(), 12);
        let expect = e1.encoded_matrix() * e2.encoded_matrix();
        assert!(close(&p.encoded_matrix(), &expect, 1e-10));
        assert!((p.alpha - 2.0 * spectral_norm(&a2)).abs() < 1e-12);
    }

    #[test]
    fn adjoint_encodes_adjoint() {
        let a = gaussian_matrix(2, 3, &mut seeded(29));
        let e = dilate_general(&a, 2.0 * spectral_norm(&a)).unwrap();
        assert!(close(&e.adjoint().encoded_matrix(), &e.encoded_matrix().adjoint(), 1e-14));
    }

    #[test]
    fn padding_modes() {
        let e = dilate_general(&scalar(0.4), 1.0).unwrap();
        let k = pad_encoding(&e, 4).unwrap();
        let d = pad_encoding(&e, 3).unwrap();
        assert!(close(&k.encoded_matrix(), &scalar(0.4), 1e-15));
        assert!(close(&d.encoded_matrix(), &scalar(0.4), 1e-15));
        assert!(k.validate(VALIDATION_TOL).is_ok() && d.validate(VALIDATION_TOL).is_ok());
        assert_eq!(pad_to_power_of_two(&d).unwrap().dim(), 4);
        assert!(pad_encoding(&k, 2).is_err());
    }

    #[test]
    fn encoding_json_round_trip() {
        let e = dilate_general(&CMat::from_element(1, 2, c64(0.1, 0.2)), 1.0).unwrap();
        let s = serde_json::to_string(&EncodingJson::from_encoding(&e)).unwrap();
        assert!(s.contains("\"Pi_L\""));
        let back: EncodingJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_encoding().unwrap(), e);
    }
}
