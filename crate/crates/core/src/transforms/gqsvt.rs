//! Singular value transformations of arbitrary encodings, by Hermitianization
//! and by multiplication with the encoding of `A†A/α²`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use super::postselect::{simulate_postselect, PostselectInput, PostselectOutcome, Schedule};
use super::{gqet_from_phases, prepare, CircuitProduct, Extraction, Route, TransformOptions};
use crate::encodings::{hermitianize, multiply, HermitianEncoding, ProjectedUnitaryEncoding};
use crate::error::{Error, Result};
use crate::linalg::{identity, ket, kron, CMat};
use crate::polynomials::{Parity, PolyCoeffs};

/// Which block of the Hermitianized transformation to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvtBlock {
    /// `|00⟩Π_L` out, `|01⟩Π_R` in: the odd transformation of `A/α`.
    Odd,
    /// `|01⟩Π_R` on both sides: the even transformation on the input space.
    Even,
    /// `|00⟩Π_L` on both sides: the even transformation on the output space.
    EvenLeft,
    /// `(|00⟩Π_L + |01⟩Π_R)/√2` on both sides: `p(A/α)` for Hermitian `A`.
    HermitianFull,
    /// `|0⟩ ⊗ diag(Π_L, Π_R)`: the whole transformed Hermitianized matrix.
    Full,
}

impl SvtBlock {
    pub fn name(self) -> &'static str {
        match self {
            SvtBlock::Odd => "odd",
            SvtBlock::Even => "even",
            SvtBlock::EvenLeft => "even_left",
            SvtBlock::HermitianFull => "hermitian_full",
            SvtBlock::Full => "full",
        }
    }
}

/// GQET of the Hermitianized encoding. Each walk step uses `Ū` once, i.e.
/// one controlled `U` and one controlled `U†`.
pub fn gqsvt_hermitianization(e: &ProjectedUnitaryEncoding, c: &PolyCoeffs) -> Result<CircuitProduct> {
    gqsvt_hermitianization_with(e, c, &TransformOptions::default())
}

pub fn gqsvt_hermitianization_with(
    e: &ProjectedUnitaryEncoding,
    c: &PolyCoeffs,
    opts: &TransformOptions,
) -> Result<CircuitProduct> {
    let h = hermitianize(e)?;
    let (applied, scale, phases) = prepare(c, opts.margin)?;
    let mut cp = gqet_from_phases(&h, applied, scale, phases);
    let d = cp.metadata.degree;
    cp.metadata.route = Route::Hermitianization;
    cp.metadata.queries_u = d;
    cp.metadata.queries_u_dagger = d;

    let m = e.dim();
    let flag0 = ket(2, 0);
    let left = kron(&flag0, &kron(&ket(2, 0), &e.pi_l));
    let right = kron(&flag0, &kron(&ket(2, 1), &e.pi_r));
    let full = cp.extraction("block")?.clone();
    let mut ex = BTreeMap::new();
    ex.insert(SvtBlock::Odd.name().into(), Extraction { left: left.clone(), right: right.clone() });
    ex.insert(SvtBlock::Even.name().into(), Extraction::symmetric(right.clone()));
    ex.insert(SvtBlock::EvenLeft.name().into(), Extraction::symmetric(left.clone()));
    if e.n_left() == e.n_right() {
        let sym = (&left + &right).scale(FRAC_1_SQRT_2);
        ex.insert(SvtBlock::HermitianFull.name().into(), Extraction::symmetric(sym));
    }
    ex.insert(SvtBlock::Full.name().into(), full.clone());
    ex.insert("block".into(), full);
    debug_assert_eq!(left.nrows(), 4 * m);
    cp.extractions = ex;
    Ok(cp)
}

/// Applies the named extraction of a Hermitianization-route circuit.
pub fn extract_svt(cp: &CircuitProduct, which: SvtBlock) -> Result<CMat> {
    if cp.metadata.route != Route::Hermitianization {
        return Err(Error::InvalidParameter(format!(
            "extract_svt needs a Hermitianization circuit, got {:?}",
            cp.metadata.route
        )));
    }
    if which == SvtBlock::HermitianFull && !cp.extractions.contains_key(which.name()) {
        let odd = cp.extraction(SvtBlock::Odd.name())?;
        return Err(Error::DimensionMismatch(format!(
            "hermitian_full needs a square encoded matrix, got {}x{}",
            odd.left.ncols(),
            odd.right.ncols()
        )));
    }
    cp.extract(which.name())
}

#[derive(Debug, Clone)]
pub struct MultiplicationResult {
    pub circuit: CircuitProduct,
    /// Postselected action on every input basis vector (measure-early for odd).
    pub outcome: PostselectOutcome,
    /// Unnormalized transformed block, `p_svt(A/α)` times the applied scale.
    pub extracted: CMat,
    /// `q` with `q(y²) = p(y)` (even) or `y q(y²) = p(y)` (odd), before rescaling.
    pub q: PolyCoeffs,
    /// Scaling factor `max|Q| / max|q|` of the substituted polynomial.
    pub route_beta: f64,
}

/// Encoding of `A†A/α²` from one extra qubit; Hermitian by construction.
pub fn gram_encoding(e: &ProjectedUnitaryEncoding) -> Result<HermitianEncoding> {
    HermitianEncoding::try_from_encoding(multiply(&e.adjoint(), e)?)
}

/// GQSVT through GQET of `A†A/α²` with the substituted polynomial `q`.
pub fn gqsvt_multiplication(
    e: &ProjectedUnitaryEncoding,
    c: &PolyCoeffs,
    parity: Parity,
) -> Result<MultiplicationResult> {
    gqsvt_multiplication_with(e, c, parity, &TransformOptions::default(), Schedule::MeasureEarly)
}

pub fn gqsvt_multiplication_with(
    e: &ProjectedUnitaryEncoding,
    c: &PolyCoeffs,
    parity: Parity,
    opts: &TransformOptions,
    odd_schedule: Schedule,
) -> Result<MultiplicationResult> {
    let q = match parity {
        Parity::Even => c.sqrt_substitute_even()?,
        Parity::Odd => c.sqrt_substitute_odd()?,
    };
    let route_beta = {
        let denom = q.max_abs_interval();
        if denom > 0.0 {
            q.max_abs_circle() / denom
        } else {
            1.0
        }
    };
    let gram = gram_encoding(e)?;
    let (applied, scale, phases) = prepare(&q, opts.margin)?;
    let k = phases.degree();
    let mut cp = gqet_from_phases(&gram, applied, scale, phases);
    cp.metadata.route = Route::Multiplication;
    cp.metadata.queries_u = k;
    cp.metadata.queries_u_dagger = k;
    cp.metadata.degree = c.degree();

    let input = PostselectInput::Isometry(identity(e.n_right()));
    match parity {
        Parity::Even => {
            let stage = ProjectedUnitaryEncoding {
                u: cp.matrix.clone(),
                pi_l: cp.extraction("block")?.left.clone(),
                pi_r: cp.extraction("block")?.right.clone(),
                alpha: 1.0,
            };
            cp.stages = vec![stage];
            let outcome = simulate_postselect(&cp, &input, Schedule::EndOnly)?;
            let extracted = cp.block();
            Ok(MultiplicationResult {
                circuit: cp,
                outcome,
                extracted,
                q,
                route_beta,
            })
        }
        Parity::Odd => {
            let iso = cp.extraction("block")?;
            let gqet_stage = ProjectedUnitaryEncoding {
                u: cp.matrix.clone(),
                pi_l: iso.left.clone(),
                pi_r: iso.right.clone(),
                alpha: 1.0,
            };
            let product = multiply(e, &gqet_stage)?;
            let mut ex = BTreeMap::new();
            ex.insert(
                "block".to_string(),
                Extraction {
                    left: product.pi_l.clone(),
                    right: product.pi_r.clone(),
                },
            );
            let full = CircuitProduct {
                matrix: product.u,
                metadata: super::CircuitMetadata {
                    queries_u: k + 1,
                    queries_u_dagger: k,
                    ..cp.metadata.clone()
                },
                extractions: ex,
                stages: vec![gqet_stage, e.clone()],
                applied: cp.applied.clone(),
                phases: cp.phases.clone(),
            };
            let outcome = simulate_postselect(&full, &input, odd_schedule)?;
            let extracted = outcome.unnormalized();
            Ok(MultiplicationResult {
                circuit: full,
                outcome,
                extracted,
                q,
                route_beta,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::dilate_general;
    use crate::linalg::{max_abs, real, spectral_norm, unitarity_defect};
    use crate::random::{gaussian_matrix, random_complex_coeffs, random_hermitian, seeded};
    use crate::transforms::{eigen_oracle, svt_oracle, svt_oracle_left_even};

    fn scalar(x: f64) -> CMat {
        CMat::from_element(1, 1, real(x))
    }

    fn poly(c: &[f64]) -> PolyCoeffs {
        PolyCoeffs::from_real(c).unwrap()
    }

    #[test]
    fn hermitianization_of_t1_scalar() {
        let e = dilate_general(&scalar(0.5), 1.0).unwrap();
        let cp = gqsvt_hermitianization(&e, &poly(&[0.0, 0.8])).unwrap();
        let full = extract_svt(&cp, SvtBlock::Full).unwrap();
        assert!((full[(0, 1)] - real(0.4)).norm() < 1e-12);
        assert!((full[(1, 0)] - real(0.4)).norm() < 1e-12);
        assert!(full[(0, 0)].norm() < 1e-12 && full[(1, 1)].norm() < 1e-12);
        assert!((extract_svt(&cp, SvtBlock::Odd).unwrap()[(0, 0)] - real(0.4)).norm() < 1e-12);
        assert_eq!((cp.metadata.queries_u, cp.metadata.queries_u_dagger), (1, 1));
    }

    #[test]
    fn hermitianization_even_block_matches_oracle() {
        let mut rng = seeded(50);
        let a = gaussian_matrix(2, 3, &mut rng);
        let alpha = 1.2 * spectral_norm(&a);
        let c = poly(&[0.0, 0.0, 0.9]);
        let cp = gqsvt_hermitianization(&dilate_general(&a, alpha).unwrap(), &c).unwrap();
        let oracle = svt_oracle(&a, alpha, &c, Parity::Even).unwrap();
        assert!(spectral_norm(&(extract_svt(&cp, SvtBlock::Even).unwrap() - oracle)) < 1e-9);
        assert!(unitarity_defect(&cp.matrix) < 1e-9);
    }

    #[test]
    fn hermitianization_all_blocks_mixed_polynomial() {
        let mut rng = seeded(51);
        let a = gaussian_matrix(3, 3, &mut rng);
        let alpha = 1.1 * spectral_norm(&a);
        let raw = random_complex_coeffs(7, &mut rng);
        let c = raw.scaled(0.7 / raw.max_abs_circle());
        let cp = gqsvt_hermitianization(&dilate_general(&a, alpha).unwrap(), &c).unwrap();
        let (even, odd) = c.parity_split();
        let odd_blk = svt_oracle(&a, alpha, &odd, Parity::Odd).unwrap();
        let odd_adj = svt_oracle(&a.adjoint(), alpha, &odd, Parity::Odd).unwrap();
        let even_r = svt_oracle(&a, alpha, &even, Parity::Even).unwrap();
        let even_l = svt_oracle_left_even(&a, alpha, &even).unwrap();
        let full = extract_svt(&cp, SvtBlock::Full).unwrap();
        let tol = 1e-8;
        assert!(max_abs(&(full.view((0, 0), (3, 3)) - even_l)) < tol);
        assert!(max_abs(&(full.view((0, 3), (3, 3)) - odd_blk)) < tol);
        assert!(max_abs(&(full.view((3, 0), (3, 3)) - odd_adj)) < tol);
        assert!(max_abs(&(full.view((3, 3), (3, 3)) - even_r)) < tol);
    }

    #[test]
    fn hermitian_full_with_non_hermitian_encoding() {
        let mut rng = seeded(52);
        let a = random_hermitian(3, &mut rng);
        let alpha = 1.2 * spectral_norm(&a);
        let mut e = dilate_general(&a, alpha).unwrap();
        // a unitary on the complement of Π_R leaves the block unchanged
        let mix = crate::linalg::direct_sum(&identity(3), &crate::random::haar_unitary(3, &mut rng));
        e.u = &e.u * mix;
        assert!(!e.is_hermitian_encoding(1e-10));
        let raw = random_complex_coeffs(6, &mut rng);
        let c = raw.scaled(0.8 / raw.max_abs_circle());
        let cp = gqsvt_hermitianization(&e, &c).unwrap();
        let got = extract_svt(&cp, SvtBlock::HermitianFull).unwrap();
        assert!(spectral_norm(&(got - eigen_oracle(&a, alpha, &c))) < 1e-8);
    }

    #[test]
    fn hermitian_full_needs_square() {
        let a = gaussian_matrix(2, 3, &mut seeded(53));
        let e = dilate_general(&a, 2.0 * spectral_norm(&a)).unwrap();
        let cp = gqsvt_hermitianization(&e, &poly(&[0.0, 0.5])).unwrap();
        assert!(matches!(extract_svt(&cp, SvtBlock::HermitianFull), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn multiplication_even_scalar() {
        let e = dilate_general(&scalar(0.6), 1.0).unwrap();
        let r = gqsvt_multiplication(&e, &poly(&[0.0, 0.0, 1.0]), Parity::Even).unwrap();
        let s = r.circuit.metadata.scale_applied;
        assert!((r.extracted[(0, 0)] - real(-0.28 * s)).norm() < 1e-12);
        assert_eq!((r.circuit.metadata.queries_u, r.circuit.metadata.queries_u_dagger), (1, 1));
    }

    #[test]
    fn multiplication_odd_t1_random() {
        let mut rng = seeded(54);
        let a = gaussian_matrix(2, 3, &mut rng);
        let alpha = 1.3 * spectral_norm(&a);
        let e = dilate_general(&a, alpha).unwrap();
        let r = gqsvt_multiplication(&e, &poly(&[0.0, 1.0]), Parity::Odd).unwrap();
        let s = r.circuit.metadata.scale_applied;
        let got = r.extracted.scale(1.0 / s);
        assert!(spectral_norm(&(got - a.scale(1.0 / alpha))) < 1e-9);
        assert_eq!((r.circuit.metadata.queries_u, r.circuit.metadata.queries_u_dagger), (1, 0));
        assert!(unitarity_defect(&r.circuit.matrix) < 1e-9);
    }

    #[test]
    fn multiplication_parity_error() {
        let e = dilate_general(&scalar(0.6), 1.0).unwrap();
        assert!(matches!(
            gqsvt_multiplication(&e, &poly(&[0.1, 0.5]), Parity::Odd),
            Err(Error::Parity { .. })
        ));
    }

    #[test]
    fn gram_encoding_is_hermitian() {
        let a = gaussian_matrix(3, 2, &mut seeded(55));
        let alpha = 1.5 * spectral_norm(&a);
        let g = gram_encoding(&dilate_general(&a, alpha).unwrap()).unwrap();
        let b = a.scale(1.0 / alpha);
        assert!(max_abs(&(g.encoded_matrix() - b.adjoint() * b)) < 1e-12);
    }

    #[test]
    fn routes_agree_on_odd_polynomial() {
        let mut rng = seeded(56);
        let a = gaussian_matrix(3, 2, &mut rng);
        let alpha = 1.2 * spectral_norm(&a);
        let e = dilate_general(&a, alpha).unwrap();
        let c = poly(&[0.0, 0.3, 0.0, -0.2, 0.0, 0.1]);
        let herm = gqsvt_hermitianization(&e, &c).unwrap();
        let mult = gqsvt_multiplication(&e, &c, Parity::Odd).unwrap();
        // the q coefficients are larger, so only the multiplication route rescales
        assert_eq!(herm.metadata.scale_applied, 1.0);
        let s = mult.circuit.metadata.scale_applied;
        assert!(s < 1.0);
        let h = extract_svt(&herm, SvtBlock::Odd).unwrap();
        assert!(max_abs(&(&h - mult.extracted.scale(1.0 / s))) < 1e-7 * 5.0);
        let oracle = svt_oracle(&a, alpha, &c, Parity::Odd).unwrap();
        assert!(max_abs(&(h - oracle)) < 1e-8 * 5.0);
        assert_eq!((mult.circuit.metadata.queries_u, mult.circuit.metadata.queries_u_dagger), (3, 2));
    }

    #[test]
    fn odd_multiplication_schedules_agree() {
        let mut rng = seeded(57);
        let a = gaussian_matrix(2, 3, &mut rng);
        let alpha = 1.2 * spectral_norm(&a);
        let e = dilate_general(&a, alpha).unwrap();
        let c = poly(&[0.0, 0.5, 0.0, 0.3]);
        let opts = TransformOptions::default();
        let early = gqsvt_multiplication_with(&e, &c, Parity::Odd, &opts, Schedule::MeasureEarly).unwrap();
        let end = gqsvt_multiplication_with(&e, &c, Parity::Odd, &opts, Schedule::EndOnly).unwrap();
        assert_eq!(early.outcome.stage_probs.len(), 2);
        assert!(max_abs(&(&early.outcome.conditioned - &end.outcome.conditioned)) < 1e-12);
        assert!((early.outcome.success_prob - end.outcome.success_prob).abs() < 1e-12);
        let prod: f64 = early.outcome.stage_probs.iter().product();
        assert!((prod - early.outcome.success_prob).abs() < 1e-12);
    }

    #[test]
    fn multiplication_applies_inverse_approximation() {
        use crate::polynomials::{approx_inverse, ApproxSpec};
        // small κ keeps the substituted q within reach of double precision
        let (kappa, eps) = (2.0, 1e-2);
        let approx = approx_inverse(&ApproxSpec::inverse(kappa, eps).unwrap()).unwrap();
        let entries = [0.5, 0.7, 1.0];
        let a = CMat::from_fn(3, 3, |i, j| if i == j { real(entries[i]) } else { real(0.0) });
        let e = dilate_general(&a, 1.0).unwrap();
        let r = gqsvt_multiplication(&e, &approx.coeffs, Parity::Odd).unwrap();
        let s = r.circuit.metadata.scale_applied;
        for (i, x) in entries.iter().enumerate() {
            let got = r.extracted[(i, i)] / s;
            assert!((got - real(1.0 / (4.0 * kappa * x))).norm() <= eps * (1.0 + 1e-6));
        }
    }
}
