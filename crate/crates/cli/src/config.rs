//! JSON run configurations and the matrix/polynomial sources they name.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use gqsvt_core::bounds::Sampler;
use gqsvt_core::encodings::{dilate_general, dilate_hermitian, EncodingJson, HermitianEncoding, ProjectedUnitaryEncoding};
use gqsvt_core::linalg::{hermiticity_defect, matrix_from_json, real, spectral_norm, CMat};
use gqsvt_core::phases::DEFAULT_MARGIN;
use gqsvt_core::polynomials::{approx_inverse, ApproxSpec, Parity, PolyCoeffs};
use gqsvt_core::random::{gaussian_matrix, random_complex_coeffs, random_hermitian, random_real_coeffs};
use gqsvt_core::transforms::Schedule;
use rand_chacha::ChaCha8Rng;

/// Reads a JSON document, resolving relative paths inside it against its directory.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn resolve(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSource {
    /// `{"rows", "cols", "data": [[re, im], ...]}`, row-major.
    File(PathBuf),
    RandomHermitian { n: usize },
    Random { rows: usize, cols: usize },
    Diagonal(Vec<f64>),
    /// Inline row-major real entries.
    Real(Vec<Vec<f64>>),
}

impl MatrixSource {
    pub fn build(&self, base: Option<&Path>, rng: &mut ChaCha8Rng) -> Result<CMat> {
        let m = match self {
            MatrixSource::File(p) => {
                let path = resolve(base, p);
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                matrix_from_json(&text)?
            }
            MatrixSource::RandomHermitian { n } => {
                ensure!(*n >= 1, "random_hermitian needs n >= 1");
                random_hermitian(*n, rng)
            }
            MatrixSource::Random { rows, cols } => {
                ensure!(*rows >= 1 && *cols >= 1, "random matrix needs positive dimensions");
                gaussian_matrix(*rows, *cols, rng)
            }
            MatrixSource::Diagonal(d) => {
                ensure!(!d.is_empty(), "diagonal needs at least one entry");
                CMat::from_fn(d.len(), d.len(), |i, j| real(if i == j { d[i] } else { 0.0 }))
            }
            MatrixSource::Real(rows) => {
                ensure!(!rows.is_empty() && !rows[0].is_empty(), "matrix rows must be non-empty");
                let c = rows[0].len();
                ensure!(rows.iter().all(|r| r.len() == c), "matrix rows have different lengths");
                CMat::from_fn(rows.len(), c, |i, j| real(rows[i][j]))
            }
        };
        Ok(m)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolySource {
    /// `{"coeffs": [[re, im], ...], "basis": "chebyshev-monomial-dual"}`.
    File(PathBuf),
    Coeffs(Vec<[f64; 2]>),
    RealCoeffs(Vec<f64>),
    Chebyshev(usize),
    /// Gaussian coefficients rescaled so that `max|P| = max_circle`.
    RandomComplex { degree: usize, max_circle: f64 },
    RandomReal { degree: usize, max_circle: f64 },
    /// Minimal-degree odd approximation of `1/(4κx)` on `[1/κ, 1]`.
    Inverse { kappa: f64, eps: f64 },
}

#[derive(Debug, Clone)]
pub struct Polynomial {
    pub coeffs: PolyCoeffs,
    /// Set for inverse approximations: `(κ, ε)`.
    pub inverse: Option<(f64, f64)>,
}

impl PolySource {
    pub fn build(&self, base: Option<&Path>, rng: &mut ChaCha8Rng) -> Result<Polynomial> {
        let rescaled = |p: PolyCoeffs, m: f64| -> Result<PolyCoeffs> {
            ensure!(m > 0.0 && m <= 1.0, "max_circle must lie in (0, 1]");
            let cur = p.max_abs_circle();
            ensure!(cur > 0.0, "sampled polynomial vanishes");
            Ok(p.scaled(m / cur))
        };
        let mut inverse = None;
        let coeffs = match self {
            PolySource::File(p) => load::<PolyCoeffs>(&resolve(base, p))?,
            PolySource::Coeffs(c) => {
                PolyCoeffs::new(c.iter().map(|&[re, im]| num_complex::Complex64::new(re, im)).collect())?
            }
            PolySource::RealCoeffs(c) => PolyCoeffs::from_real(c)?,
            PolySource::Chebyshev(n) => PolyCoeffs::chebyshev_monomial(*n),
            PolySource::RandomComplex { degree, max_circle } => rescaled(random_complex_coeffs(*degree, rng), *max_circle)?,
            PolySource::RandomReal { degree, max_circle } => rescaled(random_real_coeffs(*degree, rng), *max_circle)?,
            PolySource::Inverse { kappa, eps } => {
                inverse = Some((*kappa, *eps));
                approx_inverse(&ApproxSpec::inverse(*kappa, *eps)?)?.coeffs
            }
        };
        Ok(Polynomial { coeffs, inverse })
    }
}

/// A matrix with its subnormalization, or a ready-made encoding.
#[derive(Debug, Clone, Deserialize)]
pub struct EncodingSource {
    pub matrix: Option<MatrixSource>,
    /// Explicit `α`; otherwise `alpha_factor · ‖A‖₂`.
    pub alpha: Option<f64>,
    #[serde(default = "one")]
    pub alpha_factor: f64,
    /// `{"U", "Pi_L", "Pi_R", "alpha"}` bundle, used instead of `matrix`.
    pub encoding_file: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

pub struct Encoded {
    pub a: CMat,
    pub alpha: f64,
    pub encoding: ProjectedUnitaryEncoding,
}

impl EncodingSource {
    fn alpha_for(&self, a: &CMat) -> Result<f64> {
        let alpha = match self.alpha {
            Some(v) => v,
            None => {
                ensure!(self.alpha_factor >= 1.0, "alpha_factor must be >= 1");
                self.alpha_factor * spectral_norm(a)
            }
        };
        ensure!(alpha > 0.0, "alpha must be positive (is the matrix zero?)");
        Ok(alpha)
    }

    fn matrix(&self, base: Option<&Path>, rng: &mut ChaCha8Rng) -> Result<Option<CMat>> {
        match (&self.matrix, &self.encoding_file) {
            (Some(m), None) => Ok(Some(m.build(base, rng)?)),
            (None, Some(_)) => Ok(None),
            _ => bail!("give exactly one of `matrix` and `encoding_file`"),
        }
    }

    fn load_file(&self, base: Option<&Path>) -> Result<ProjectedUnitaryEncoding> {
        let path = resolve(base, self.encoding_file.as_ref().expect("checked by matrix()"));
        Ok(load::<EncodingJson>(&path)?.to_encoding()?)
    }

    pub fn general(&self, base: Option<&Path>, rng: &mut ChaCha8Rng) -> Result<Encoded> {
        match self.matrix(base, rng)? {
            Some(a) => {
                let alpha = self.alpha_for(&a)?;
                let encoding = dilate_general(&a, alpha)?;
                Ok(Encoded { a, alpha, encoding })
            }
            None => {
                let encoding = self.load_file(base)?;
                Ok(Encoded {
                    a: encoding.encoded_a(),
                    alpha: encoding.alpha,
                    encoding,
                })
            }
        }
    }

    pub fn hermitian(&self, base: Option<&Path>, rng: &mut ChaCha8Rng) -> Result<(CMat, HermitianEncoding)> {
        match self.matrix(base, rng)? {
            Some(a) => {
                let defect = hermiticity_defect(&a);
                ensure!(defect <= 1e-10, "GQET needs a Hermitian matrix (defect {defect:.2e})");
                let alpha = self.alpha_for(&a)?;
                Ok((a.clone(), dilate_hermitian(&a, alpha)?))
            }
            None => {
                let e = HermitianEncoding::try_from_encoding(self.load_file(base)?)?;
                Ok((e.as_encoding().encoded_a(), e))
            }
        }
    }
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingRow {
    pub kappa: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ApproxChoice {
    #[default]
    Remez,
    SmoothedProjection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingTableConfig {
    #[serde(default = "desk_rows")]
    pub rows: Vec<ScalingRow>,
    #[serde(default)]
    pub method: ApproxChoice,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    /// β above this is flagged.
    #[serde(default = "beta_limit")]
    pub beta_limit: f64,
    #[serde(default)]
    pub parallel: bool,
}

fn desk_rows() -> Vec<ScalingRow> {
    [(10.0, 1e-3), (10.0, 1e-4), (40.0, 1e-3), (40.0, 1e-4)]
        .into_iter()
        .map(|(kappa, eps)| ScalingRow { kappa, eps })
        .collect()
}

fn default_max_degree() -> usize {
    gqsvt_core::polynomials::DEFAULT_MAX_DEGREE
}

fn beta_limit() -> f64 {
    1.75
}

impl Default for ScalingTableConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ScalingTableConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.rows.is_empty(), "scaling-table needs at least one row");
        for r in &self.rows {
            ensure!(r.kappa > 1.0, "kappa must exceed 1, got {}", r.kappa);
            ensure!(r.eps > 0.0 && r.eps < 1.0, "eps must lie in (0, 1), got {}", r.eps);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GqetConfig {
    pub matrix: Option<MatrixSource>,
    pub alpha: Option<f64>,
    #[serde(default = "one")]
    pub alpha_factor: f64,
    pub encoding_file: Option<PathBuf>,
    pub polynomial: PolySource,
    #[serde(default = "default_margin")]
    pub margin: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteChoice {
    #[default]
    Hermitianization,
    Multiplication,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityChoice {
    Even,
    Odd,
}

impl From<ParityChoice> for Parity {
    fn from(p: ParityChoice) -> Self {
        match p {
            ParityChoice::Even => Parity::Even,
            ParityChoice::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GqsvtConfig {
    pub matrix: Option<MatrixSource>,
    pub alpha: Option<f64>,
    #[serde(default = "one")]
    pub alpha_factor: f64,
    pub encoding_file: Option<PathBuf>,
    pub polynomial: PolySource,
    #[serde(default)]
    pub route: RouteChoice,
    /// Inferred from the coefficients when absent.
    pub parity: Option<ParityChoice>,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "measure_early")]
    pub schedule: Schedule,
    pub seed: Option<u64>,
}

fn measure_early() -> Schedule {
    Schedule::MeasureEarly
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "default_sampler")]
    pub sampler: Sampler,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub bernstein_trials: usize,
    pub seed: Option<u64>,
}

fn default_sampler() -> Sampler {
    Sampler::RandomReal { max_degree: 64 }
}

fn default_trials() -> usize {
    1000
}

impl Default for BoundsConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasesConfig {
    pub polynomial: PolySource,
    #[serde(default = "default_margin")]
    pub margin: f64,
    pub seed: Option<u64>,
}

macro_rules! encoding_accessor {
    ($t:ty) => {
        impl $t {
            pub fn encoding(&self) -> EncodingSource {
                EncodingSource {
                    matrix: self.matrix.clone(),
                    alpha: self.alpha,
                    alpha_factor: self.alpha_factor,
                    encoding_file: self.encoding_file.clone(),
                }
            }
        }
    };
}

encoding_accessor!(GqetConfig);
encoding_accessor!(GqsvtConfig);
