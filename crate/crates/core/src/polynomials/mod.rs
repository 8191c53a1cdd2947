//! Chebyshev/monomial polynomial algebra.
//!
//! A single complex coefficient vector `a_0..a_d` is read two ways: as the
//! Chebyshev expansion `p(x) = Σ a_n T_n(x)` on `[-1, 1]` and as the monomial
//! polynomial `P(z) = Σ a_n z^n` on the unit circle. The ratio of their maxima
//! is the scaling factor `β`.

mod approx;
mod maxima;

pub use approx::{
    approx_inverse, approx_inverse_with, approx_target_sqrt, chebyshev_interpolant, remez_inverse,
    smoothed_inverse_target, ApproxMethod, ApproxSpec, ApproxTarget, InverseApproximation,
    RemezOutcome, DEFAULT_MAX_DEGREE,
};
pub use maxima::{max_abs_circle_with, max_abs_interval_with, MaxSearch};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::real;

/// Relative threshold below which a coefficient counts as zero.
pub const COEFF_ZERO_TOL: f64 = 1e-12;

/// Degree above which the exact √x basis map gives way to sampled interpolation.
pub const SQRT_EXACT_MAX_DEGREE: usize = 128;

/// Degree above which monomial conversions are numerically unreliable.
pub const MONOMIAL_DEGREE_CAP: usize = 64;

const DOMAIN_SLACK: f64 = 1e-12;

/// Coefficients shared by the Chebyshev series `p(x)` and the monomial
/// polynomial `P(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolyJson", try_from = "PolyJson")]
pub struct PolyCoeffs {
    coeffs: Vec<Complex64>,
}

/// Which coefficient indices carry nonzero weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
    #[serde(rename = "mod4_1")]
    Mod4One,
    #[serde(rename = "mod4_3")]
    Mod4Three,
}

impl ParityClass {
    pub fn is_even(self) -> bool {
        self == ParityClass::Even
    }

    /// True for `Odd` and both mod-4 refinements of it.
    pub fn is_odd(self) -> bool {
        matches!(
            self,
            ParityClass::Odd | ParityClass::Mod4One | ParityClass::Mod4Three
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParityClass::Even => "even",
            ParityClass::Odd => "odd",
            ParityClass::Mixed => "mixed",
            ParityClass::Mod4One => "mod4_1",
            ParityClass::Mod4Three => "mod4_3",
        }
    }
}

/// Definite parity of a polynomial used by singular value transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl PolyCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| real(a)).collect())
    }

    /// The single Chebyshev polynomial `T_n` (equivalently `z^n`).
    pub fn chebyshev_monomial(n: usize) -> Self {
        let mut coeffs = vec![real(0.0); n + 1];
        coeffs[n] = real(1.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Nominal degree: number of coefficients minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the last coefficient that is exactly nonzero.
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|z| *z != real(0.0))
            .unwrap_or(0)
    }

    /// Drops exact-zero trailing coefficients (keeping at least one).
    pub fn trimmed(&self) -> Self {
        Self {
            coeffs: self.coeffs[..=self.effective_degree()].to_vec(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    /// Zero-extends to the requested nominal degree.
    pub fn padded_to(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < degree + 1 {
            coeffs.resize(degree + 1, real(0.0));
        }
        Self { coeffs }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|z| real(z.re)).collect(),
        }
    }

    pub fn imag_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|z| real(z.im)).collect(),
        }
    }

    /// Coefficient-wise maximum deviation, treating missing entries as zero.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = real(0.0);
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `p(x) = Σ a_n T_n(x)` by the Clenshaw recurrence.
    pub fn eval_cheb(&self, x: f64) -> Result<Complex64> {
        if !(x.abs() <= 1.0 + DOMAIN_SLACK) {
            return Err(Error::Domain {
                value: x,
                domain: "[-1, 1]",
            });
        }
        Ok(self.eval_cheb_complex(real(x)))
    }

    /// Clenshaw evaluation at an arbitrary complex argument, no domain check.
    pub fn eval_cheb_complex(&self, x: Complex64) -> Complex64 {
        let mut b1 = real(0.0);
        let mut b2 = real(0.0);
        for a in self.coeffs[1..].iter().rev() {
            let b0 = a + x * b1 * 2.0 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + x * b1 - b2
    }

    /// Horner evaluation of `P(z) = Σ a_n z^n`.
    pub fn eval_monomial(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(real(0.0), |acc, a| acc * z + a)
    }

    /// `P(e^{iθ})`.
    pub fn eval_circle(&self, theta: f64) -> Complex64 {
        self.eval_monomial(Complex64::from_polar(1.0, theta))
    }

    /// `max_{x∈[-1,1]} |p(x)|`.
    pub fn max_abs_interval(&self) -> f64 {
        max_abs_interval_with(self, &MaxSearch::default())
    }

    /// `max_{|z|=1} |P(z)|`.
    pub fn max_abs_circle(&self) -> f64 {
        max_abs_circle_with(self, &MaxSearch::default())
    }

    /// `β = max|P| / max|p|`.
    pub fn scaling_factor(&self) -> Result<f64> {
        let denom = self.max_abs_interval();
        if denom < 1e-14 {
            return Err(Error::DegeneratePolynomial(denom));
        }
        Ok(self.max_abs_circle() / denom)
    }

    /// Coefficients of `d/dθ P(e^{iθ})`, i.e. `i n a_n`.
    pub fn circle_derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a * Complex64::new(0.0, n as f64))
                .collect(),
        }
    }

    fn support(&self, tol: f64) -> Vec<usize> {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return Vec::new();
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol * scale)
            .map(|(n, _)| n)
            .collect()
    }

    /// Classifies which indices carry coefficients above `tol · max|a_n|`.
    ///
    /// Odd polynomials supported on a single residue class mod 4 report the
    /// refined class; the zero polynomial counts as even.
    pub fn classify_parity(&self, tol: f64) -> ParityClass {
        let support = self.support(tol);
        if support.iter().all(|n| n % 2 == 0) {
            ParityClass::Even
        } else if support.iter().all(|n| n % 4 == 1) {
            ParityClass::Mod4One
        } else if support.iter().all(|n| n % 4 == 3) {
            ParityClass::Mod4Three
        } else if support.iter().all(|n| n % 2 == 1) {
            ParityClass::Odd
        } else {
            ParityClass::Mixed
        }
    }

    /// Splits into even and odd parts of the same nominal degree.
    pub fn parity_split(&self) -> (Self, Self) {
        let zero = real(0.0);
        let even = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| if n % 2 == 0 { a } else { zero })
            .collect();
        let odd = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| if n % 2 == 1 { a } else { zero })
            .collect();
        (Self { coeffs: even }, Self { coeffs: odd })
    }

    /// Part of the given parity.
    pub fn parity_part(&self, parity: Parity) -> Self {
        let (even, odd) = self.parity_split();
        match parity {
            Parity::Even => even,
            Parity::Odd => odd,
        }
    }

    pub fn check_parity(&self, parity: Parity) -> Result<()> {
        let scale = self.max_coeff();
        let wrong = match parity {
            Parity::Even => 1,
            Parity::Odd => 0,
        };
        for (n, a) in self.coeffs.iter().enumerate() {
            if n % 2 == wrong && a.norm() > COEFF_ZERO_TOL * scale {
                return Err(Error::Parity {
                    expected: parity.as_str(),
                    index: n,
                    magnitude: a.norm(),
                });
            }
        }
        Ok(())
    }

    /// `q` with `q(y²) = p(y)` for an even `p`; degree `⌊d/2⌋`.
    pub fn sqrt_substitute_even(&self) -> Result<Self> {
        self.check_parity(Parity::Even)?;
        let half = self.degree() / 2;
        let weights: Vec<Complex64> = (0..=half).map(|k| self.coeffs[2 * k]).collect();
        if self.degree() <= SQRT_EXACT_MAX_DEGREE {
            Ok(combine_shifted(&weights, &[real(1.0)], &[real(-1.0), real(2.0)]))
        } else {
            Ok(sampled_sqrt(self, half, false))
        }
    }

    /// `q` with `y · q(y²) = p(y)` for an odd `p`; degree `(d-1)/2`.
    pub fn sqrt_substitute_odd(&self) -> Result<Self> {
        self.check_parity(Parity::Odd)?;
        if self.degree() == 0 {
            return Ok(Self { coeffs: vec![real(0.0)] });
        }
        let half = (self.degree() - 1) / 2;
        let weights: Vec<Complex64> = (0..=half).map(|k| self.coeffs[2 * k + 1]).collect();
        if self.degree() <= SQRT_EXACT_MAX_DEGREE {
            Ok(combine_shifted(&weights, &[real(1.0)], &[real(-3.0), real(4.0)]))
        } else {
            Ok(sampled_sqrt(self, half, true))
        }
    }
}

/// Multiplies a Chebyshev coefficient vector by `2x - 1`.
fn mul_shifted_x(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![real(0.0); v.len() + 1];
    for (j, &a) in v.iter().enumerate() {
        // 2x T_j = T_{j+1} + T_{|j-1|}, with 2x T_0 = 2 T_1
        if j == 0 {
            out[1] += a * 2.0;
        } else {
            out[j + 1] += a;
            out[j - 1] += a;
        }
        out[j] -= a;
    }
    out
}

/// `Σ_k w_k B_k(x)` where `B_{k+1} = 2(2x-1) B_k - B_{k-1}` from the given
/// `B_0`, `B_1` (Chebyshev coefficient vectors).
fn combine_shifted(weights: &[Complex64], b0: &[Complex64], b1: &[Complex64]) -> PolyCoeffs {
    let n = weights.len();
    let mut out = vec![real(0.0); n];
    let mut prev: Vec<Complex64> = b0.to_vec();
    let mut cur: Vec<Complex64> = b1.to_vec();
    for (k, &w) in weights.iter().enumerate() {
        let basis = if k == 0 { &prev } else { &cur };
        for (o, b) in out.iter_mut().zip(basis.iter()) {
            *o += w * b;
        }
        if k >= 1 && k + 1 < n {
            let mut next = mul_shifted_x(&cur);
            for v in next.iter_mut() {
                *v *= 2.0;
            }
            for (nv, pv) in next.iter_mut().zip(prev.iter()) {
                *nv -= pv;
            }
            prev = std::mem::replace(&mut cur, next);
        }
    }
    PolyCoeffs { coeffs: out }
}

/// Chebyshev interpolation of `q(x) = p(√x)` (or `p(√x)/√x`) at `half + 1`
/// nodes, continuing `√x` to `i√|x|` for negative `x`. Exact for polynomial `q`.
fn sampled_sqrt(p: &PolyCoeffs, half: usize, odd: bool) -> PolyCoeffs {
    approx::chebyshev_interpolant(
        |x: f64| -> Complex64 {
            let y = if x >= 0.0 {
                real(x.sqrt())
            } else {
                Complex64::new(0.0, (-x).sqrt())
            };
            if odd {
                if y.norm() < 1e-300 {
                    // limit p(y)/y at 0 is the derivative p'(0) = Σ a_n T_n'(0)
                    odd_derivative_at_zero(p)
                } else {
                    p.eval_cheb_complex(y) / y
                }
            } else {
                p.eval_cheb_complex(y)
            }
        },
        half,
    )
}

fn odd_derivative_at_zero(p: &PolyCoeffs) -> Complex64 {
    // T_n'(0) = n sin(nπ/2) for odd n
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(n, _)| n % 2 == 1)
        .map(|(n, a)| {
            let sign = if n % 4 == 1 { 1.0 } else { -1.0 };
            a * (sign * n as f64)
        })
        .sum()
}

/// Chebyshev coefficients to monomial coefficients.
pub fn cheb_to_monomial(c: &PolyCoeffs) -> Vec<Complex64> {
    let d = c.degree();
    if d > MONOMIAL_DEGREE_CAP {
        log::warn!("monomial conversion at degree {d} exceeds the stability cap {MONOMIAL_DEGREE_CAP}");
    }
    let mut out = vec![real(0.0); d + 1];
    // monomial coefficients of T_{n-1}, T_n
    let mut t_prev: Vec<f64> = vec![1.0];
    let mut t_cur: Vec<f64> = vec![0.0, 1.0];
    for (n, a) in c.coeffs().iter().enumerate() {
        let t = match n {
            0 => &t_prev,
            _ => &t_cur,
        };
        for (o, &b) in out.iter_mut().zip(t.iter()) {
            *o += a * b;
        }
        if n >= 1 && n < d {
            let mut next = vec![0.0; t_cur.len() + 1];
            for (i, &b) in t_cur.iter().enumerate() {
                next[i + 1] += 2.0 * b;
            }
            for (i, &b) in t_prev.iter().enumerate() {
                next[i] -= b;
            }
            t_prev = std::mem::replace(&mut t_cur, next);
        }
    }
    out
}

/// Monomial coefficients to Chebyshev coefficients.
pub fn monomial_to_cheb(m: &[Complex64]) -> Result<PolyCoeffs> {
    if m.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let d = m.len() - 1;
    if d > MONOMIAL_DEGREE_CAP {
        log::warn!("Chebyshev conversion at degree {d} exceeds the stability cap {MONOMIAL_DEGREE_CAP}");
    }
    let mut out = vec![real(0.0); d + 1];
    // Chebyshev coefficients of x^n, starting from x^0 = T_0
    let mut power: Vec<f64> = vec![1.0];
    for (n, a) in m.iter().enumerate() {
        for (o, &b) in out.iter_mut().zip(power.iter()) {
            *o += a * b;
        }
        if n < d {
            let mut next = vec![0.0; power.len() + 1];
            for (j, &b) in power.iter().enumerate() {
                if j == 0 {
                    next[1] += b;
                } else {
                    next[j + 1] += 0.5 * b;
                    next[j - 1] += 0.5 * b;
                }
            }
            power = next;
        }
    }
    PolyCoeffs::new(out)
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<[f64; 2]>,
    basis: String,
}

const BASIS_TAG: &str = "chebyshev-monomial-dual";

impl From<PolyCoeffs> for PolyJson {
    fn from(p: PolyCoeffs) -> Self {
        Self {
            coeffs: p.coeffs.iter().map(|z| [z.re, z.im]).collect(),
            basis: BASIS_TAG.to_string(),
        }
    }
}

impl TryFrom<PolyJson> for PolyCoeffs {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        if j.basis != BASIS_TAG {
            return Err(Error::Serialization(format!(
                "unknown polynomial basis {:?}",
                j.basis
            )));
        }
        PolyCoeffs::new(j.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::random::{random_complex_coeffs, seeded};
    use std::f64::consts::PI;

    fn p(re: &[f64]) -> PolyCoeffs {
        PolyCoeffs::from_real(re).unwrap()
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(PolyCoeffs::new(vec![]), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn eval_cheb_examples() {
        assert!((p(&[0.0, 1.0]).eval_cheb(0.5).unwrap() - real(0.5)).norm() < 1e-15);
        assert!((p(&[0.0, 0.0, 0.0, 1.0]).eval_cheb(1.0).unwrap() - real(1.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_cheb_domain_error() {
        let err = p(&[1.0]).eval_cheb(1.1).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        assert!(p(&[1.0]).eval_cheb(1.0 + 1e-13).is_ok());
    }

    #[test]
    fn eval_cheb_matches_cosine_sum() {
        let c = random_complex_coeffs(10, &mut seeded(1));
        let gamma: f64 = 0.7;
        let direct: Complex64 = c
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| a * (n as f64 * gamma).cos())
            .sum();
        assert!((c.eval_cheb(gamma.cos()).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn eval_circle_examples() {
        assert!((p(&[0.0, 1.0]).eval_circle(PI / 2.0) - c64(0.0, 1.0)).norm() < 1e-15);
        assert!((p(&[1.0]).eval_circle(1.234) - real(1.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_circle_matches_direct_sum() {
        let c = random_complex_coeffs(12, &mut seeded(2));
        let theta = 2.1;
        let direct: Complex64 = c
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| a * Complex64::from_polar(1.0, n as f64 * theta))
            .sum();
        assert!((c.eval_circle(theta) - direct).norm() < 1e-13);
    }

    #[test]
    fn maxima_examples() {
        assert!((p(&[0.0, 0.0, 0.0, 1.0]).max_abs_interval() - 1.0).abs() < 1e-12);
        assert!((p(&[0.5, 0.5]).max_abs_interval() - 1.0).abs() < 1e-12);
        assert!((p(&[0.0, 0.0, 1.0]).max_abs_circle() - 1.0).abs() < 1e-12);
        assert!((p(&[0.5, 0.5]).max_abs_circle() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_factor_of_chebyshev_monomial_is_one() {
        let b = PolyCoeffs::chebyshev_monomial(3).scaling_factor().unwrap();
        assert!((b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_factor_degenerate() {
        let err = p(&[0.0, 0.0]).scaling_factor().unwrap_err();
        assert!(matches!(err, Error::DegeneratePolynomial(_)));
    }

    #[test]
    fn parity_classification_examples() {
        let c = p(&[0.0, 1.0, 0.0, 0.0]).classify_parity(COEFF_ZERO_TOL);
        assert_eq!(c, ParityClass::Mod4One);
        assert!(c.is_odd());
        assert_eq!(p(&[1.0, 0.0, 1.0]).classify_parity(COEFF_ZERO_TOL), ParityClass::Even);
        assert_eq!(p(&[1.0, 1.0]).classify_parity(COEFF_ZERO_TOL), ParityClass::Mixed);
        assert_eq!(p(&[0.0, 1.0, 0.0, 1.0]).classify_parity(COEFF_ZERO_TOL), ParityClass::Odd);
        assert_eq!(p(&[0.0, 0.0, 0.0, 1.0]).classify_parity(COEFF_ZERO_TOL), ParityClass::Mod4Three);
        // roundoff-level entries are ignored
        assert_eq!(p(&[1e-15, 1.0]).classify_parity(COEFF_ZERO_TOL), ParityClass::Mod4One);
    }

    #[test]
    fn parity_split_examples() {
        let (e, o) = p(&[1.0, 2.0, 3.0]).parity_split();
        assert_eq!(e, p(&[1.0, 0.0, 3.0]));
        assert_eq!(o, p(&[0.0, 2.0, 0.0]));
        let (e, o) = p(&[0.0, 1.0]).parity_split();
        assert_eq!(e, p(&[0.0, 0.0]));
        assert_eq!(o, p(&[0.0, 1.0]));
    }

    #[test]
    fn sqrt_substitution_examples() {
        assert_eq!(p(&[0.0, 0.0, 1.0]).sqrt_substitute_even().unwrap(), p(&[-1.0, 2.0]));
        assert_eq!(p(&[1.0]).sqrt_substitute_even().unwrap(), p(&[1.0]));
        assert_eq!(p(&[0.0, 1.0]).sqrt_substitute_odd().unwrap(), p(&[1.0]));
        assert_eq!(p(&[0.0, 0.0, 0.0, 1.0]).sqrt_substitute_odd().unwrap(), p(&[-3.0, 4.0]));
    }

    #[test]
    fn sqrt_substitution_parity_errors() {
        assert!(matches!(
            p(&[1.0, 0.5]).sqrt_substitute_even(),
            Err(Error::Parity { index: 1, .. })
        ));
        assert!(matches!(
            p(&[1.0, 0.5]).sqrt_substitute_odd(),
            Err(Error::Parity { index: 0, .. })
        ));
    }

    #[test]
    fn basis_change_examples() {
        let m = cheb_to_monomial(&p(&[0.0, 0.0, 1.0]));
        assert_eq!(m, vec![real(-1.0), real(0.0), real(2.0)]);
        let c = monomial_to_cheb(&[real(0.0), real(0.0), real(0.0), real(1.0)]).unwrap();
        assert!(c.max_coeff_diff(&p(&[0.0, 0.75, 0.0, 0.25])) < 1e-15);
    }

    #[test]
    fn json_layout() {
        let s = serde_json::to_string(&p(&[1.0, -0.5])).unwrap();
        assert_eq!(
            s,
            r#"{"coeffs":[[1.0,0.0],[-0.5,0.0]],"basis":"chebyshev-monomial-dual"}"#
        );
        let back: PolyCoeffs = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p(&[1.0, -0.5]));
        assert!(serde_json::from_str::<PolyCoeffs>(r#"{"coeffs":[],"basis":"chebyshev-monomial-dual"}"#).is_err());
        assert!(serde_json::from_str::<PolyCoeffs>(r#"{"coeffs":[[1,0]],"basis":"legendre"}"#).is_err());
    }

    #[test]
    fn circle_derivative_of_power() {
        let d = PolyCoeffs::chebyshev_monomial(3).circle_derivative();
        assert_eq!(d.coeffs()[3], c64(0.0, 3.0));
    }
}
