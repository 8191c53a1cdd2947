//! Upper bounds on `max|P|` over the unit circle in terms of `max|Re P|`, via
//! the periodic Hilbert transform, and sweeps that test them empirically.
//!
//! Torus norms use the normalized measure `dθ/2π`, so that by Parseval
//! `‖f‖₂ = (Σ|a_n|²)^{1/2}` for `f(θ) = Σ a_n e^{inθ}`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, SQRT_2};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polynomials::{max_abs_circle_with, MaxSearch, PolyCoeffs};
use crate::random::{random_complex_coeffs, random_real_coeffs, random_real_coeffs_on_residue};

/// Relative slack when comparing a computed maximum against a bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// `g(x) = log(sin(x/2)) / log(x/2)` on `(0, 1]`.
pub fn g(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain {
            value: x,
            domain: "(0, 1]",
        });
    }
    Ok((x / 2.0).sin().ln() / (x / 2.0).ln())
}

/// `g₁ = g(1) = log(sin(1/2)) / log(1/2)`, the supremum of `g` on `(0, 1]`.
pub fn g1_constant() -> f64 {
    0.5f64.sin().ln() / 0.5f64.ln()
}

/// Right-hand side of the Hilbert-transform estimate
/// `‖Hf‖∞ ≤ g₁(4/π)|log(δ/2)|‖f‖∞ + g₁(√(2δ)/π)√(2 − 2log(δ/2) + log²(δ/2))‖f′‖₂`.
pub fn hilbert_theorem_bound(delta: f64, norm_inf_f: f64, norm_2_fprime: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain {
            value: delta,
            domain: "(0, 1]",
        });
    }
    if norm_inf_f < 0.0 || norm_2_fprime < 0.0 {
        return Err(Error::InvalidParameter("norms must be non-negative".into()));
    }
    let g1 = g1_constant();
    let l = (delta / 2.0).ln();
    let first = g1 * (4.0 / PI) * l.abs() * norm_inf_f;
    let second = g1 * (2.0 * delta).sqrt() / PI * (2.0 - 2.0 * l + l * l).sqrt() * norm_2_fprime;
    Ok(first + second)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Degree `N ≥ 1`.
    pub n: usize,
    /// Bound on `|Re p|` over the unit circle.
    pub m: f64,
    /// `|Im p(0)|`, for the complex forms only.
    pub im_p0: Option<f64>,
}

impl BoundParams {
    pub fn real(n: usize, m: f64) -> Self {
        Self { n, m, im_p0: None }
    }

    pub fn complex(n: usize, m: f64, im_p0: f64) -> Self {
        Self {
            n,
            m,
            im_p0: Some(im_p0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Domain {
                value: self.n as f64,
                domain: "N >= 1",
            });
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::Domain {
                value: self.m,
                domain: "M > 0",
            });
        }
        if let Some(v) = self.im_p0 {
            if !(v >= 0.0) {
                return Err(Error::Domain {
                    value: v,
                    domain: "|Im p(0)| >= 0",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    Real,
    Complex,
    /// Real form with the square root replaced by its tangent line at `log 2`.
    Simplified,
    SimplifiedComplex,
}

fn h(x: f64) -> f64 {
    (4.0 + 4.0 * x + 2.0 * x * x).sqrt()
}

/// `(g₁/π)(4L + h(L))` with `L = log(2N²)`: the Hilbert-transform part of the
/// corollary per unit `M`.
pub fn corollary_constant(n: usize) -> f64 {
    let l = (2.0 * (n as f64).powi(2)).ln();
    g1_constant() / PI * (4.0 * l + h(l))
}

/// Linearized version of [`corollary_constant`], never smaller.
pub fn simplified_constant(n: usize) -> f64 {
    let l = (2.0 * (n as f64).powi(2)).ln();
    g1_constant() / PI * (h(LN_2) - SQRT_2 * LN_2 + (4.0 + SQRT_2) * l)
}

/// Upper bound on `max_{|z|=1}|p(z)|`.
///
/// The complex forms add `|Im p(0)|` outside the factor `M`, as the proof
/// gives: `|Im p| ≤ |H Re p| + |Im p(0)|`.
pub fn corollary_bound(params: &BoundParams, form: BoundForm) -> Result<f64> {
    params.validate()?;
    let complex = matches!(form, BoundForm::Complex | BoundForm::SimplifiedComplex);
    let im = match (complex, params.im_p0) {
        (true, Some(v)) => v,
        (false, None) => 0.0,
        (true, None) => {
            return Err(Error::InvalidParameter("complex form needs |Im p(0)|".into()));
        }
        (false, Some(_)) => {
            return Err(Error::InvalidParameter("|Im p(0)| is only used by the complex forms".into()));
        }
    };
    let k = match form {
        BoundForm::Real | BoundForm::Complex => corollary_constant(params.n),
        BoundForm::Simplified | BoundForm::SimplifiedComplex => simplified_constant(params.n),
    };
    Ok(params.m * (1.0 + k) + im)
}

/// The complex form with `|Im p(0)|` inside the factor, `M(1 + |Im p(0)| + K)`.
/// Not a valid bound when `M` is small and `Im p(0)` is not.
pub fn corollary_bound_inner_im(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let im = params
        .im_p0
        .ok_or_else(|| Error::InvalidParameter("complex form needs |Im p(0)|".into()))?;
    Ok(params.m * (1.0 + im + corollary_constant(params.n)))
}

/// `‖f‖₂` on the torus for `f(θ) = P(e^{iθ})`.
pub fn torus_l2_norm(c: &PolyCoeffs) -> f64 {
    c.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖f′‖₂` on the torus, `(Σ n²|a_n|²)^{1/2}`.
pub fn torus_l2_derivative_norm(c: &PolyCoeffs) -> f64 {
    torus_l2_norm(&c.circle_derivative())
}

/// `‖Re f‖₂` for `f(θ) = P(e^{iθ})`. `Re f` has coefficients `a_n/2` at
/// `±n` (and `Re a_0` at 0).
pub fn torus_l2_norm_real_part(c: &PolyCoeffs) -> f64 {
    let a = c.coeffs();
    let mut s = a[0].re * a[0].re;
    for x in &a[1..] {
        s += 2.0 * x.norm_sqr() / 4.0;
    }
    s.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinOutcome {
    pub degree: usize,
    pub max_f: f64,
    pub max_fprime: f64,
    pub holds: bool,
}

/// `‖f′‖∞ ≤ N‖f‖∞` for `f(θ) = P(e^{iθ})`, maxima from `samples` grid
/// points plus refinement.
pub fn bernstein_outcome(c: &PolyCoeffs, samples: usize) -> BernsteinOutcome {
    let search = MaxSearch {
        min_samples: samples.max(16),
        ..MaxSearch::default()
    };
    let n = c.effective_degree();
    let max_f = max_abs_circle_with(c, &search);
    let max_fprime = max_abs_circle_with(&c.circle_derivative(), &search);
    let limit = n as f64 * max_f;
    BernsteinOutcome {
        degree: n,
        max_f,
        max_fprime,
        holds: max_fprime <= limit * (1.0 + 1e-9) + 1e-14,
    }
}

pub fn bernstein_check(c: &PolyCoeffs, samples: usize) -> bool {
    bernstein_outcome(c, samples).holds
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampler {
    /// Gaussian real coefficients, degree uniform in `1..=max_degree`.
    RandomReal { max_degree: usize },
    /// Gaussian real coefficients on `n ≡ residue (mod 4)`.
    Mod4 { residue: usize, max_degree: usize },
    /// `T_n` for `n = 1, 2, …`, cycling through `1..=max_degree`.
    Chebyshev { max_degree: usize },
    /// Gaussian complex coefficients, bounded through the real/imaginary split.
    ComplexSplit { max_degree: usize },
}

impl Sampler {
    pub fn name(&self) -> &'static str {
        match self {
            Sampler::RandomReal { .. } => "random_real",
            Sampler::Mod4 { .. } => "mod4",
            Sampler::Chebyshev { .. } => "chebyshev",
            Sampler::ComplexSplit { .. } => "complex_split",
        }
    }

    fn max_degree(&self) -> usize {
        match *self {
            Sampler::RandomReal { max_degree }
            | Sampler::Mod4 { max_degree, .. }
            | Sampler::Chebyshev { max_degree }
            | Sampler::ComplexSplit { max_degree } => max_degree,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, trial: usize, rng: &mut R) -> PolyCoeffs {
        match *self {
            Sampler::RandomReal { max_degree } => {
                let d = rng.random_range(1..=max_degree);
                random_real_coeffs(d, rng)
            }
            Sampler::Mod4 { residue, max_degree } => {
                let d = rng.random_range(residue..=max_degree);
                random_real_coeffs_on_residue(d, 4, residue, rng)
            }
            Sampler::Chebyshev { max_degree } => PolyCoeffs::chebyshev_monomial(1 + trial % max_degree),
            Sampler::ComplexSplit { max_degree } => {
                let d = rng.random_range(1..=max_degree);
                random_complex_coeffs(d, rng)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub degree: usize,
    pub max_interval: f64,
    pub max_circle: f64,
    pub beta: f64,
    pub bound: f64,
    /// `max_circle / bound`; a value above 1 is a violation.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub sampler: Sampler,
    pub rows: Vec<BoundRow>,
    /// Rows with `max_circle > bound`.
    pub violations: usize,
    /// Mod-4 rows with `β > 2`.
    pub beta_two_violations: usize,
    pub max_ratio: f64,
    pub max_beta: f64,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.beta_two_violations == 0
    }

    pub const CSV_HEADER: &'static str = "degree,max_interval,max_circle,beta,bound,ratio";

    /// Full-precision CSV (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.degree, r.max_interval, r.max_circle, r.beta, r.bound, r.ratio
            );
        }
        out
    }
}

fn real_bound(p: &PolyCoeffs) -> f64 {
    // for real coefficients Re P(e^{iθ}) = p(cos θ), so max|Re P| = max|p|
    let m = p.max_abs_interval();
    if m == 0.0 {
        return 0.0;
    }
    let n = p.effective_degree().max(1);
    m * (1.0 + corollary_constant(n))
}

/// Bound row for one polynomial; complex coefficients are split as
/// `p = p₁ + i p₂` and bounded by the sum of the two real bounds.
pub fn bound_row(p: &PolyCoeffs) -> Result<BoundRow> {
    let max_interval = p.max_abs_interval();
    let max_circle = p.max_abs_circle();
    let beta = p.scaling_factor()?;
    let bound = if p.is_real() {
        real_bound(p)
    } else {
        real_bound(&p.real_part()) + real_bound(&p.imag_part())
    };
    Ok(BoundRow {
        degree: p.degree(),
        max_interval,
        max_circle,
        beta,
        bound,
        ratio: max_circle / bound,
    })
}

pub fn verify_beta_bound<R: Rng + ?Sized>(sampler: Sampler, trials: usize, rng: &mut R) -> Result<BoundReport> {
    if trials == 0 || sampler.max_degree() == 0 {
        return Err(Error::InvalidParameter("trials and max_degree must be positive".into()));
    }
    if let Sampler::Mod4 { residue, .. } = sampler {
        if residue != 1 && residue != 3 {
            return Err(Error::InvalidParameter(format!("mod-4 residue must be 1 or 3, got {residue}")));
        }
    }
    let mut rows = Vec::with_capacity(trials);
    let (mut violations, mut beta_two) = (0, 0);
    for t in 0..trials {
        let p = sampler.sample(t, rng);
        let row = bound_row(&p)?;
        if row.max_circle > row.bound * (1.0 + BOUND_SLACK) {
            violations += 1;
        }
        if matches!(sampler, Sampler::Mod4 { .. }) && row.beta > 2.0 + 1e-9 {
            beta_two += 1;
        }
        rows.push(row);
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let max_beta = rows.iter().map(|r| r.beta).fold(0.0, f64::max);
    Ok(BoundReport {
        sampler,
        rows,
        violations,
        beta_two_violations: beta_two,
        max_ratio,
        max_beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;
    use num_complex::Complex64;

    #[test]
    fn g1_two_digits() {
        assert_eq!(format!("{:.2}", g1_constant()), "1.06");
        assert_eq!(g(1.0).unwrap(), g1_constant());
    }

    #[test]
    fn g_is_increasing_with_limit_one() {
        let mut prev = g(1e-8).unwrap();
        assert!((prev - 1.0).abs() < 1e-6);
        for i in 1..=10_000 {
            let x = i as f64 / 10_000.0;
            let v = g(x).unwrap();
            assert!(v > prev, "g not increasing at {x}");
            prev = v;
        }
        assert!(g(0.0).is_err() && g(1.5).is_err());
    }

    #[test]
    fn theorem_bound_examples() {
        assert_eq!(hilbert_theorem_bound(0.5, 0.0, 0.0).unwrap(), 0.0);
        let v = hilbert_theorem_bound(1.0, 1.0, 0.0).unwrap();
        assert!((v - g1_constant() * 4.0 / PI * LN_2).abs() < 1e-15);
        assert!(hilbert_theorem_bound(0.0, 1.0, 1.0).is_err());
        assert!(hilbert_theorem_bound(1.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn theorem_bound_against_rearranged_oracle() {
        // log²(δ/2) − 2log(δ/2) + 2 = (1 − log(δ/2))² + 1, and |log(δ/2)| = log 2 − log δ
        let g1 = (0.5f64.sin().ln()) / -LN_2;
        let mut rng = seeded(80);
        for _ in 0..200 {
            let delta: f64 = rng.random_range(1e-6..=1.0);
            let a: f64 = rng.random_range(0.0..10.0);
            let b: f64 = rng.random_range(0.0..10.0);
            let u = 1.0 - (delta.ln() - LN_2);
            let oracle = g1 * 4.0 * (LN_2 - delta.ln()) * a / PI
                + g1 * (2.0 * delta).sqrt() * (u * u + 1.0).sqrt() * b / PI;
            let got = hilbert_theorem_bound(delta, a, b).unwrap();
            assert!((got - oracle).abs() <= 1e-12 * oracle.max(1.0));
        }
    }

    #[test]
    fn corollary_real_n1() {
        let g1 = g1_constant();
        let expected = 1.0 + g1 / PI * (4.0 * LN_2 + (4.0 + 4.0 * LN_2 + 2.0 * LN_2 * LN_2).sqrt());
        let got = corollary_bound(&BoundParams::real(1, 1.0), BoundForm::Real).unwrap();
        assert!((got - expected).abs() < 1e-15);
        let c = corollary_bound(&BoundParams::complex(1, 1.0, 0.0), BoundForm::Complex).unwrap();
        assert_eq!(c, got);
    }

    #[test]
    fn simplified_dominates_exact() {
        for n in 1..=10_000 {
            let exact = corollary_constant(n);
            let simp = simplified_constant(n);
            assert!(simp >= exact - 1e-12, "N={n}");
        }
    }

    #[test]
    fn corollary_monotone_and_linear() {
        let mut prev = 0.0;
        for n in 1..=1000 {
            let b = corollary_bound(&BoundParams::real(n, 1.0), BoundForm::Real).unwrap();
            assert!(b >= prev);
            let b3 = corollary_bound(&BoundParams::real(n, 3.0), BoundForm::Real).unwrap();
            assert!((b3 - 3.0 * b).abs() < 1e-12 * b3);
            prev = b;
        }
    }

    #[test]
    fn corollary_param_errors() {
        assert!(corollary_bound(&BoundParams::real(0, 1.0), BoundForm::Real).is_err());
        assert!(corollary_bound(&BoundParams::real(2, 0.0), BoundForm::Real).is_err());
        assert!(corollary_bound(&BoundParams::real(2, 1.0), BoundForm::Complex).is_err());
        assert!(corollary_bound(&BoundParams::complex(2, 1.0, 0.1), BoundForm::Real).is_err());
    }

    #[test]
    fn inner_im_form_fails_on_small_real_part() {
        // p(z) = 0.5i + 0.01z: |Re p| ≤ 0.01 on the circle but |p| ≈ 0.5
        let p = PolyCoeffs::new(vec![Complex64::new(0.0, 0.5), Complex64::new(0.01, 0.0)]).unwrap();
        let params = BoundParams::complex(1, 0.01, 0.5);
        let inner = corollary_bound_inner_im(&params).unwrap();
        let fixed = corollary_bound(&params, BoundForm::Complex).unwrap();
        let max = p.max_abs_circle();
        assert!(max > inner);
        assert!(max <= fixed);
    }

    #[test]
    fn complex_form_holds_on_random_polynomials() {
        let mut rng = seeded(81);
        for _ in 0..200 {
            let d = rng.random_range(1..=32);
            let p = random_complex_coeffs(d, &mut rng);
            // max |Re P| on a dense grid, padded to cover the gaps between samples
            let m = (0..4096)
                .map(|k| p.eval_circle(2.0 * PI * k as f64 / 4096.0).re.abs())
                .fold(0.0, f64::max)
                * (1.0 + 1e-3);
            let params = BoundParams::complex(d, m, p.coeffs()[0].im.abs());
            let b = corollary_bound(&params, BoundForm::Complex).unwrap();
            assert!(p.max_abs_circle() <= b);
        }
    }

    #[test]
    fn parseval_norms_match_quadrature() {
        let mut rng = seeded(82);
        let p = random_complex_coeffs(7, &mut rng);
        let n = 256;
        let (mut s0, mut s1, mut sr) = (0.0, 0.0, 0.0);
        let dp = p.circle_derivative();
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            s0 += p.eval_circle(t).norm_sqr();
            s1 += dp.eval_circle(t).norm_sqr();
            sr += p.eval_circle(t).re.powi(2);
        }
        let nf = n as f64;
        assert!(((s0 / nf).sqrt() - torus_l2_norm(&p)).abs() < 1e-12);
        assert!(((s1 / nf).sqrt() - torus_l2_derivative_norm(&p)).abs() < 1e-11);
        assert!(((sr / nf).sqrt() - torus_l2_norm_real_part(&p)).abs() < 1e-12);
    }

    #[test]
    fn theorem_holds_for_real_parts() {
        // H Re P = −Im P for P with real coefficients and a₀ = 0 handled by H's kernel
        let mut rng = seeded(83);
        for _ in 0..50 {
            let d = rng.random_range(1..=24);
            let p = random_real_coeffs(d, &mut rng);
            let f_inf = p.max_abs_interval();
            let fp2 = torus_l2_norm_real_part(&p.circle_derivative());
            let h_inf = (0..8192)
                .map(|k| p.eval_circle(2.0 * PI * k as f64 / 8192.0).im.abs())
                .fold(0.0, f64::max);
            for delta in [1.0, 0.3, 1.0 / (d * d) as f64] {
                assert!(h_inf <= hilbert_theorem_bound(delta, f_inf, fp2).unwrap());
            }
        }
    }

    #[test]
    fn bernstein_examples() {
        for n in [1, 5, 17] {
            let o = bernstein_outcome(&PolyCoeffs::chebyshev_monomial(n), 1024);
            assert!(o.holds);
            assert!((o.max_fprime - n as f64).abs() < 1e-9);
        }
        assert!(bernstein_check(&PolyCoeffs::from_real(&[0.7]).unwrap(), 1024));
        let mut rng = seeded(84);
        for _ in 0..100 {
            let d = rng.random_range(1..=32);
            assert!(bernstein_check(&random_complex_coeffs(d, &mut rng), 1024));
        }
    }

    #[test]
    fn chebyshev_sampler_has_unit_beta() {
        let r = verify_beta_bound(Sampler::Chebyshev { max_degree: 64 }, 64, &mut seeded(85)).unwrap();
        assert!(r.passed());
        for row in &r.rows {
            assert!((row.beta - 1.0).abs() < 1e-9);
            assert!(row.ratio < 0.5);
        }
    }

    #[test]
    fn random_and_mod4_sweeps() {
        let mut rng = seeded(86);
        let r = verify_beta_bound(Sampler::RandomReal { max_degree: 64 }, 200, &mut rng).unwrap();
        assert_eq!(r.violations, 0);
        for residue in [1, 3] {
            let r = verify_beta_bound(Sampler::Mod4 { residue, max_degree: 64 }, 100, &mut rng).unwrap();
            assert!(r.passed(), "residue {residue}: max β {}", r.max_beta);
            assert!(r.max_beta <= 2.0 + 1e-9);
        }
        let r = verify_beta_bound(Sampler::ComplexSplit { max_degree: 32 }, 100, &mut rng).unwrap();
        assert_eq!(r.violations, 0);
        assert!(verify_beta_bound(Sampler::Mod4 { residue: 2, max_degree: 8 }, 1, &mut rng).is_err());
    }

    #[test]
    fn csv_layout() {
        let r = verify_beta_bound(Sampler::Chebyshev { max_degree: 2 }, 2, &mut seeded(87)).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BoundReport::CSV_HEADER);
        let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], 1.0);
        assert!((fields[3] - 1.0).abs() < 1e-12);
        assert!(lines[1].split(',').nth(1).unwrap().contains("e"));
        assert_eq!(lines.len(), 3);
    }
}
