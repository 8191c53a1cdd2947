//! Global maxima of `|p|` on `[-1, 1]` and `|P|` on the unit circle.
//!
//! Both are trigonometric polynomials in `θ`: `P(e^{iθ})` directly and
//! `p(cos θ) = (P(e^{iθ}) + P(e^{-iθ})) / 2`. One inverse FFT gives a dense
//! uniform sample, and golden-section search refines the best local maxima.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::PolyCoeffs;
use crate::linalg::real;

#[derive(Debug, Clone)]
pub struct MaxSearch {
    /// Samples per unit of `degree + 1`.
    pub oversample: usize,
    pub min_samples: usize,
    /// Number of grid maxima refined.
    pub refine: usize,
    /// Golden-section stopping width in `θ`.
    pub theta_tol: f64,
}

impl Default for MaxSearch {
    fn default() -> Self {
        Self {
            oversample: 64,
            min_samples: 1024,
            refine: 8,
            theta_tol: 1e-9,
        }
    }
}

impl MaxSearch {
    fn samples(&self, degree: usize) -> usize {
        (self.oversample.max(16) * (degree + 1))
            .max(self.min_samples)
            .next_power_of_two()
    }
}

/// `P(e^{2πik/N})` for `k = 0..N`.
fn circle_samples(p: &PolyCoeffs, n: usize) -> Vec<Complex64> {
    let mut buf = vec![real(0.0); n];
    // aliasing folds coefficients beyond N back; N always exceeds the degree here
    for (k, a) in p.coeffs().iter().enumerate() {
        buf[k % n] += a;
    }
    let fft = FftPlanner::new().plan_fft_inverse(n);
    fft.process(&mut buf);
    buf
}

fn refine_max<F: Fn(f64) -> f64>(f: &F, grid: &[f64], step: f64, opts: &MaxSearch) -> f64 {
    let n = grid.len();
    let mut peaks: Vec<(usize, f64)> = (0..n)
        .filter(|&k| {
            let prev = grid[(k + n - 1) % n];
            let next = grid[(k + 1) % n];
            grid[k] >= prev && grid[k] >= next
        })
        .map(|k| (k, grid[k]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut best = grid.iter().copied().fold(0.0, f64::max);
    for &(k, _) in peaks.iter().take(opts.refine) {
        let centre = k as f64 * step;
        best = best.max(golden_max(f, centre - step, centre + step, opts.theta_tol));
    }
    best
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
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
    fc.max(fd).max(f(0.5 * (a + b)))
}

pub fn max_abs_circle_with(p: &PolyCoeffs, opts: &MaxSearch) -> f64 {
    let n = opts.samples(p.degree());
    let values = circle_samples(p, n);
    let grid: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    let f = |t: f64| p.eval_circle(t).norm();
    refine_max(&f, &grid, 2.0 * PI / n as f64, opts)
}

pub fn max_abs_interval_with(p: &PolyCoeffs, opts: &MaxSearch) -> f64 {
    let n = opts.samples(p.degree());
    let values = circle_samples(p, n);
    let grid: Vec<f64> = (0..n)
        .map(|k| ((values[k] + values[(n - k) % n]) * 0.5).norm())
        .collect();
    let f = |t: f64| p.eval_cheb_complex(real(t.cos())).norm();
    refine_max(&f, &grid, 2.0 * PI / n as f64, opts)
}
