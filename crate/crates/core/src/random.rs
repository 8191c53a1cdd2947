//! Seeded random test objects: Haar unitaries, Hermitian matrices, isometries
//! and coefficient vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, CMat};
use crate::polynomials::PolyCoeffs;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c64(s * gaussian(rng), s * gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the diagonal
/// phases of `R` divided out.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random isometry `m x n` (first `n` columns of a Haar unitary).
pub fn random_isometry<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> CMat {
    haar_unitary(m, rng).columns(0, n).into_owned()
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

pub fn random_complex_coeffs<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> PolyCoeffs {
    PolyCoeffs::new((0..=degree).map(|_| complex_gaussian(rng)).collect())
        .expect("non-empty coefficient vector")
}

pub fn random_real_coeffs<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> PolyCoeffs {
    PolyCoeffs::from_real(&(0..=degree).map(|_| gaussian(rng)).collect::<Vec<_>>())
        .expect("non-empty coefficient vector")
}

/// Random coefficients supported only on indices `n ≡ residue (mod modulus)`.
pub fn random_real_coeffs_on_residue<R: Rng + ?Sized>(
    degree: usize,
    modulus: usize,
    residue: usize,
    rng: &mut R,
) -> PolyCoeffs {
    let coeffs: Vec<f64> = (0..=degree)
        .map(|n| if n % modulus == residue { gaussian(rng) } else { 0.0 })
        .collect();
    PolyCoeffs::from_real(&coeffs).expect("non-empty coefficient vector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{isometry_defect, unitarity_defect};

    #[test]
    fn haar_is_unitary() {
        let mut rng = seeded(3);
        let u = haar_unitary(7, &mut rng);
        assert!(unitarity_defect(&u) < 1e-13);
        let p = random_isometry(6, 2, &mut rng);
        assert!(isometry_defect(&p) < 1e-13);
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_hermitian(3, &mut seeded(11));
        let b = random_hermitian(3, &mut seeded(11));
        assert_eq!(a, b);
    }
}
