//! The eigenvalue transformation of a Hermitianized encoding, reduced over
//! its extra qubit, against the alternating `U`/`U†` singular value circuit.

use num_complex::Complex64;

use crate::encodings::ProjectedUnitaryEncoding;
use crate::linalg::{hadamard, identity, ket, kron, pauli_x, qubit_projector, spectral_norm, CMat};

pub const EQUIVALENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub passed: bool,
    /// Largest of the reduced-circuit mismatch and the leakage into the
    /// unexpected state of the extra qubit, in spectral norm.
    pub residual: f64,
}

fn rz(phi: f64) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex64::from_polar(1.0, -phi / 2.0);
    m[(1, 1)] = Complex64::from_polar(1.0, phi / 2.0);
    m
}

/// NOT on the leading qubit controlled by the range of `proj`.
fn projector_cnot(proj: &CMat) -> CMat {
    let n = proj.nrows();
    kron(&pauli_x(), proj) + kron(&identity(2), &(identity(n) - proj))
}

/// `Rz(φ)` on the flag conjugated by projector-controlled NOTs, written in
/// closed form as `Σ_b |b⟩⟨b| ⊗ (e^{isφ/2} P + e^{-isφ/2} (I-P))`, `s = (-1)^b`.
fn projector_phase(proj: &CMat, phi: f64) -> CMat {
    let n = proj.nrows();
    let comp = identity(n) - proj;
    let side = |s: f64| {
        proj * Complex64::from_polar(1.0, s * phi / 2.0) + &comp * Complex64::from_polar(1.0, -s * phi / 2.0)
    };
    kron(&qubit_projector(0), &side(1.0)) + kron(&qubit_projector(1), &side(-1.0))
}

/// Builds both circuits for the phases `phis` and compares them.
pub fn qsvt_equivalence_check(e: &ProjectedUnitaryEncoding, phis: &[f64]) -> EquivalenceReport {
    let m = e.dim();
    let d = phis.len();
    let pl = &e.pi_l * e.pi_l.adjoint();
    let pr = &e.pi_r * e.pi_r.adjoint();

    // flag ⊗ new ⊗ block
    let bar_proj = kron(&qubit_projector(0), &pl) + kron(&qubit_projector(1), &pr);
    let cnot = projector_cnot(&bar_proj);
    let select = kron(&qubit_projector(0), &e.u) + kron(&qubit_projector(1), &e.u.adjoint());
    let u_bar = select * kron(&pauli_x(), &identity(m));
    let i2 = identity(2);
    let step_u = kron(&i2, &u_bar);
    let h = kron(&hadamard(), &identity(2 * m));
    let mut full = h.clone();
    for &phi in phis {
        let rot = kron(&rz(phi), &identity(2 * m));
        full = &step_u * &cnot * rot * &cnot * full;
    }
    full = &h * full;

    // flag ⊗ block, alternating U and U†
    let hb = kron(&hadamard(), &identity(m));
    let mut qsvt = hb.clone();
    for (k, &phi) in phis.iter().enumerate() {
        let (proj, gate) = if k % 2 == 0 { (&pr, e.u.clone()) } else { (&pl, e.u.adjoint()) };
        qsvt = kron(&i2, &gate) * projector_phase(proj, phi) * qsvt;
    }
    qsvt = &hb * qsvt;

    let expected = if d % 2 == 1 { 0 } else { 1 };
    let reduce = |out: usize| {
        let sel_out = kron(&i2, &kron(&ket(2, out), &identity(m)));
        let sel_in = kron(&i2, &kron(&ket(2, 1), &identity(m)));
        sel_out.adjoint() * &full * sel_in
    };
    let mismatch = spectral_norm(&(reduce(expected) - &qsvt));
    let leakage = spectral_norm(&reduce(1 - expected));
    let residual = mismatch.max(leakage);
    EquivalenceReport {
        passed: residual <= EQUIVALENCE_TOL,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::dilate_general;
    use crate::random::{gaussian, gaussian_matrix, haar_unitary, random_isometry, seeded};

    #[test]
    fn degree_one_random_phase() {
        let mut rng = seeded(70);
        let a = gaussian_matrix(2, 3, &mut rng);
        let e = dilate_general(&a, 1.4 * spectral_norm(&a)).unwrap();
        let r = qsvt_equivalence_check(&e, &[gaussian(&mut rng)]);
        assert!(r.passed, "{}", r.residual);
    }

    #[test]
    fn zero_phases_degree_four() {
        let mut rng = seeded(71);
        let u = haar_unitary(4, &mut rng);
        let pl = random_isometry(4, 2, &mut rng);
        let pr = random_isometry(4, 3, &mut rng);
        let e = ProjectedUnitaryEncoding { u, pi_l: pl, pi_r: pr, alpha: 1.0 };
        let r = qsvt_equivalence_check(&e, &[0.0; 4]);
        assert!(r.residual <= 1e-12, "{}", r.residual);
    }

    #[test]
    fn random_trials_pass() {
        let mut rng = seeded(72);
        for d in 1..=8 {
            let u = haar_unitary(4, &mut rng);
            let pl = random_isometry(4, 1 + d % 3, &mut rng);
            let pr = random_isometry(4, 2, &mut rng);
            let e = ProjectedUnitaryEncoding { u, pi_l: pl, pi_r: pr, alpha: 1.0 };
            let phis: Vec<f64> = (0..d).map(|_| 3.0 * gaussian(&mut rng)).collect();
            let r = qsvt_equivalence_check(&e, &phis);
            assert!(r.passed, "d={d}: {}", r.residual);
        }
    }

    #[test]
    fn closed_form_phase_matches_conjugated_rotation() {
        let mut rng = seeded(73);
        let pi = random_isometry(3, 2, &mut rng);
        let proj = &pi * pi.adjoint();
        let cnot = projector_cnot(&proj);
        let phi = 0.83;
        let direct = &cnot * kron(&rz(phi), &identity(3)) * &cnot;
        assert!(crate::linalg::max_abs(&(direct - projector_phase(&proj, phi))) < 1e-14);
    }
}
