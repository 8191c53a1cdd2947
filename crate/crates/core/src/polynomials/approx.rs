//! Target-function approximation: Chebyshev interpolation and minimax
//! approximation of `1/(4κx)` on `[1/κ, 1]` by odd polynomials.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use super::PolyCoeffs;
use crate::error::{Error, Result};
use crate::linalg::real;

/// Sample oracle for a custom approximation target on `[-1, 1]`.
pub type TargetFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ApproxTarget {
    /// `1/(4κx)` on `[1/κ, 1]`, odd continuation on `[-1, -1/κ]`.
    InverseX,
    /// Approximated on `[1/κ, 1]` by Chebyshev interpolation on `[-1, 1]`.
    Custom(TargetFn),
}

impl std::fmt::Debug for ApproxTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApproxTarget::InverseX => write!(f, "InverseX"),
            ApproxTarget::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxSpec {
    pub kappa: f64,
    pub eps: f64,
    pub target: ApproxTarget,
}

impl ApproxSpec {
    pub fn inverse(kappa: f64, eps: f64) -> Result<Self> {
        let spec = Self {
            kappa,
            eps,
            target: ApproxTarget::InverseX,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 1.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must exceed 1, got {}",
                self.kappa
            )));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must lie in (0, 1), got {}",
                self.eps
            )));
        }
        Ok(())
    }

    fn target_value(&self, x: f64) -> f64 {
        match &self.target {
            ApproxTarget::InverseX => 1.0 / (4.0 * self.kappa * x),
            ApproxTarget::Custom(f) => f(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxMethod {
    /// Remez exchange for the minimax odd polynomial.
    Remez,
    /// Chebyshev interpolation of the smoothed target `(1-(1-x²)^b)/(4κx)`.
    SmoothedProjection,
}

#[derive(Debug, Clone)]
pub struct InverseApproximation {
    pub coeffs: PolyCoeffs,
    pub degree: usize,
    /// Max error against the target over `[1/κ, 1]`.
    pub achieved_error: f64,
    pub method: ApproxMethod,
}

/// Default degree cap for the degree search.
pub const DEFAULT_MAX_DEGREE: usize = 4001;

/// Minimal-degree approximation by the Remez method (custom targets use
/// Chebyshev interpolation).
pub fn approx_inverse(spec: &ApproxSpec) -> Result<InverseApproximation> {
    approx_inverse_with(spec, ApproxMethod::Remez, DEFAULT_MAX_DEGREE)
}

pub fn approx_inverse_with(
    spec: &ApproxSpec,
    method: ApproxMethod,
    max_degree: usize,
) -> Result<InverseApproximation> {
    spec.validate()?;
    match (&spec.target, method) {
        (ApproxTarget::Custom(_), _) => custom_interpolation(spec, max_degree),
        (ApproxTarget::InverseX, ApproxMethod::Remez) => remez_search(spec, max_degree),
        (ApproxTarget::InverseX, ApproxMethod::SmoothedProjection) => {
            projection_search(spec, max_degree)
        }
    }
}

/// Result of one Remez solve at fixed degree.
#[derive(Debug, Clone)]
pub struct RemezOutcome {
    pub coeffs: PolyCoeffs,
    /// Levelled error `|E|` of the final reference.
    pub levelled_error: f64,
    /// Refined maximum error over `[1/κ, 1]`.
    pub max_error: f64,
    pub iterations: usize,
}

/// Real-coefficient Clenshaw.
fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &a in c[1..].iter().rev() {
        let b0 = a + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + x * b1 - b2
}

/// Nodes `x = √u` with `u` Chebyshev-distributed over `[a², 1]`, ascending.
fn sqrt_cheb_points(a: f64, count: usize) -> Vec<f64> {
    let lo = a * a;
    (0..count)
        .map(|i| {
            let t = -(PI * i as f64 / (count - 1) as f64).cos();
            ((1.0 + lo) / 2.0 + (1.0 - lo) / 2.0 * t).sqrt()
        })
        .collect()
}

/// Minimax odd polynomial of degree `2k+1` for `1/(4κx)` on `[1/κ, 1]`.
pub fn remez_inverse(kappa: f64, degree: usize) -> Result<RemezOutcome> {
    if degree.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "inverse approximants are odd, got degree {degree}"
        )));
    }
    if !(kappa > 1.0) {
        return Err(Error::InvalidParameter(format!("kappa must exceed 1, got {kappa}")));
    }
    let k = (degree - 1) / 2;
    let n = k + 2;
    let a = 1.0 / kappa;
    let target = |x: f64| 1.0 / (4.0 * kappa * x);
    let mut refs = sqrt_cheb_points(a, n);
    let grid = sqrt_cheb_points(a, (40 * n).max(2000) + 1);

    let mut coeffs = vec![0.0; degree + 1];
    let mut levelled = 0.0;
    let mut max_err = f64::INFINITY;
    let mut iterations = 0;
    for it in 0..100 {
        iterations = it + 1;
        let mut mat = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for (i, &x) in refs.iter().enumerate() {
            let mut t_prev = 1.0;
            let mut t_cur = x;
            for j in 0..=degree {
                if j % 2 == 1 {
                    mat[(i, j / 2)] = t_cur;
                }
                if j >= 1 {
                    let next = 2.0 * x * t_cur - t_prev;
                    t_prev = t_cur;
                    t_cur = next;
                }
            }
            mat[(i, n - 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
            rhs[i] = target(x);
        }
        let sol = mat
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::NonConvergence("singular Remez system".into()))?;
        coeffs = vec![0.0; degree + 1];
        for j in 0..=k {
            coeffs[2 * j + 1] = sol[j];
        }
        levelled = sol[n - 1].abs();

        let err = |x: f64| clenshaw(&coeffs, x) - target(x);
        let e: Vec<f64> = grid.iter().map(|&x| err(x)).collect();
        let g = grid.len();
        let mut cand: Vec<usize> = vec![0];
        for i in 1..g - 1 {
            if (e[i] - e[i - 1]) * (e[i + 1] - e[i]) <= 0.0 {
                cand.push(i);
            }
        }
        cand.push(g - 1);
        // alternating extrema: merge equal-sign runs keeping the largest
        let mut sel: Vec<usize> = Vec::new();
        for &i in &cand {
            match sel.last() {
                Some(&j) if e[i].signum() == e[j].signum() => {
                    if e[i].abs() > e[j].abs() {
                        *sel.last_mut().unwrap() = i;
                    }
                }
                _ => sel.push(i),
            }
        }
        while sel.len() > n {
            if e[sel[0]].abs() < e[sel[sel.len() - 1]].abs() {
                sel.remove(0);
            } else {
                sel.pop();
            }
        }
        // refine interior extrema between grid neighbours
        let mut new_refs = Vec::with_capacity(sel.len());
        let mut peak = 0.0_f64;
        for &i in &sel {
            if i == 0 || i == g - 1 {
                new_refs.push(grid[i]);
                peak = peak.max(e[i].abs());
                continue;
            }
            let s = e[i].signum();
            let f = |x: f64| s * err(x);
            let (lo, hi) = (grid[i - 1], grid[i + 1]);
            let best = golden_argmax(&f, lo, hi, 1e-14);
            new_refs.push(best.0);
            peak = peak.max(best.1);
        }
        let grid_max = e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        max_err = peak.max(grid_max);
        if sel.len() < n {
            break;
        }
        refs = new_refs;
        if levelled > 0.0 && (max_err - levelled) / levelled < 1e-9 {
            break;
        }
    }
    Ok(RemezOutcome {
        coeffs: PolyCoeffs::from_real(&coeffs)?,
        levelled_error: levelled,
        max_error: max_err,
        iterations,
    })
}

fn golden_argmax<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Heuristic starting half-degree `k` for the minimal-degree search.
fn initial_half_degree(kappa: f64, eps: f64) -> usize {
    let k = kappa / 2.0 * (1.0 / (4.0 * eps)).ln();
    if k.is_finite() && k > 0.0 {
        k.floor() as usize
    } else {
        0
    }
}

/// Smallest odd degree whose error passes `eps`, stepping from a start value.
fn minimal_odd_degree<F>(start_k: usize, max_degree: usize, eps: f64, mut solve: F) -> Result<(usize, (PolyCoeffs, f64))>
where
    F: FnMut(usize) -> Result<(PolyCoeffs, f64)>,
{
    let max_k = (max_degree.max(1) - 1) / 2;
    let mut k = start_k.min(max_k);
    let mut cur = solve(2 * k + 1)?;
    if cur.1 <= eps {
        while k > 0 {
            let lower = solve(2 * k - 1)?;
            if lower.1 > eps {
                break;
            }
            k -= 1;
            cur = lower;
        }
        Ok((2 * k + 1, cur))
    } else {
        while cur.1 > eps {
            if k >= max_k {
                return Err(Error::NonConvergence(format!(
                    "error {:.3e} above target {:.3e} at degree cap {}",
                    cur.1,
                    eps,
                    2 * k + 1
                )));
            }
            k += 1;
            cur = solve(2 * k + 1)?;
        }
        Ok((2 * k + 1, cur))
    }
}

fn remez_search(spec: &ApproxSpec, max_degree: usize) -> Result<InverseApproximation> {
    let start = initial_half_degree(spec.kappa, spec.eps);
    let (degree, (coeffs, err)) = minimal_odd_degree(start, max_degree, spec.eps, |d| {
        let r = remez_inverse(spec.kappa, d)?;
        Ok((r.coeffs, r.max_error))
    })?;
    Ok(InverseApproximation {
        coeffs,
        degree,
        achieved_error: err,
        method: ApproxMethod::Remez,
    })
}

/// `(1 - (1-x²)^b) / (4κx)`, an odd entire function within `ε/(4κ)` of the
/// inverse on `[1/κ, 1]` for `b = ⌈κ² ln(κ/ε)⌉`.
pub fn smoothed_inverse_target(kappa: f64, eps: f64) -> impl Fn(f64) -> f64 {
    let b = (kappa * kappa * (kappa / eps).ln()).ceil();
    move |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let one_minus = -(b * (-x * x).ln_1p()).exp_m1();
        one_minus / (4.0 * kappa * x)
    }
}

/// Max deviation from the target on a Chebyshev-distributed grid over `[1/κ, 1]`.
fn grid_error(spec: &ApproxSpec, c: &PolyCoeffs, points: usize) -> f64 {
    let re: Vec<f64> = c.coeffs().iter().map(|z| z.re).collect();
    sqrt_cheb_points(1.0 / spec.kappa, points)
        .into_iter()
        .map(|x| (clenshaw(&re, x) - spec.target_value(x)).abs())
        .fold(0.0, f64::max)
}

fn projection_search(spec: &ApproxSpec, max_degree: usize) -> Result<InverseApproximation> {
    let smooth = smoothed_inverse_target(spec.kappa, spec.eps);
    let solve = |d: usize| -> Result<(PolyCoeffs, f64)> {
        let (_, odd) = chebyshev_interpolant(&smooth, d).parity_split();
        let odd = odd.real_part();
        let err = grid_error(spec, &odd, 20 * d + 2000);
        Ok((odd, err))
    };
    // coarse doubling, then bisection on the odd half-degree
    let cap_k = (max_degree.max(1) - 1) / 2;
    let mut hi = initial_half_degree(spec.kappa, spec.eps).max(1).min(cap_k);
    while solve(2 * hi + 1)?.1 > spec.eps {
        if hi >= cap_k {
            return Err(Error::NonConvergence(format!(
                "projection baseline did not reach {:.3e} by degree {}",
                spec.eps,
                2 * cap_k + 1
            )));
        }
        hi = (2 * hi).min(cap_k);
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if solve(2 * mid + 1)?.1 <= spec.eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let degree = 2 * hi + 1;
    let (coeffs, err) = solve(degree)?;
    Ok(InverseApproximation {
        coeffs,
        degree,
        achieved_error: err,
        method: ApproxMethod::SmoothedProjection,
    })
}

fn custom_interpolation(spec: &ApproxSpec, max_degree: usize) -> Result<InverseApproximation> {
    let ApproxTarget::Custom(f) = &spec.target else {
        unreachable!("custom_interpolation called for a built-in target");
    };
    let mut degree = 1;
    loop {
        let c = chebyshev_interpolant(|x| f(x), degree).real_part();
        let err = grid_error(spec, &c, 20 * degree + 2000);
        if err <= spec.eps {
            return Ok(InverseApproximation {
                coeffs: c,
                degree,
                achieved_error: err,
                method: ApproxMethod::SmoothedProjection,
            });
        }
        if degree >= max_degree {
            return Err(Error::NonConvergence(format!(
                "interpolation error {err:.3e} above {:.3e} at degree {degree}",
                spec.eps
            )));
        }
        degree = (2 * degree).min(max_degree);
    }
}

/// Chebyshev interpolant of degree `degree` through the first-kind nodes.
pub fn chebyshev_interpolant<F, T>(f: F, degree: usize) -> PolyCoeffs
where
    F: Fn(f64) -> T,
    T: Into<Complex64>,
{
    let n = degree + 1;
    let angles: Vec<f64> = (0..n).map(|j| PI * (j as f64 + 0.5) / n as f64).collect();
    let values: Vec<Complex64> = angles.iter().map(|t| f(t.cos()).into()).collect();
    let coeffs = (0..n)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .zip(angles.iter())
                .map(|(v, t)| v * (k as f64 * t).cos())
                .sum();
            let w = if k == 0 { 1.0 } else { 2.0 };
            s * (w / n as f64)
        })
        .collect::<Vec<_>>();
    PolyCoeffs::new(coeffs).unwrap_or_else(|_| PolyCoeffs::new(vec![real(0.0)]).unwrap())
}

/// Chebyshev approximation of a target given by samples, used for the
/// substituted polynomial `q(x)`.
pub fn approx_target_sqrt<F, T>(f: F, degree: usize) -> PolyCoeffs
where
    F: Fn(f64) -> T,
    T: Into<Complex64>,
{
    chebyshev_interpolant(f, degree)
}
