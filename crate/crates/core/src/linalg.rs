//! Dense complex linear algebra shared by every module.
//!
//! Everything is assembled as explicit `DMatrix<Complex64>` values; the
//! dimensions involved (at most a few hundred) make dense products cheap and
//! keep extracted blocks exact sub-matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `|index><index|`-free column basis vector of length `dim`.
pub fn ket(dim: usize, index: usize) -> CMat {
    let mut k = CMat::zeros(dim, 1);
    k[(index, 0)] = real(1.0);
    k
}

/// The `m x n` isometry selecting the first `n` coordinates (the block-encoding
/// projector `[I; 0]`).
pub fn top_selector(m: usize, n: usize) -> CMat {
    assert!(n <= m, "selector wider than ambient space");
    CMat::from_fn(m, n, |i, j| if i == j { real(1.0) } else { real(0.0) })
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(-1.0)])
}

pub fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)])
}

/// Single-qubit projector `|b><b|`.
pub fn qubit_projector(b: usize) -> CMat {
    let k = ket(2, b);
    &k * k.adjoint()
}

/// Block-diagonal direct sum `a ⊕ b`.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

/// Vertical stack `[a; b]`.
pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols(), "vstack column mismatch");
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

/// Max-entry deviation of `U†U` from the identity.
pub fn unitarity_defect(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - identity(n)))
}

/// Max-entry deviation of `Π†Π` from the identity.
pub fn isometry_defect(pi: &CMat) -> f64 {
    max_abs(&(pi.adjoint() * pi - identity(pi.ncols())))
}

pub fn hermiticity_defect(a: &CMat) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(a - a.adjoint()))
}

pub fn ensure_unitary(u: &CMat, tol: f64) -> Result<()> {
    let d = unitarity_defect(u);
    if d > tol {
        Err(Error::NonUnitary(d))
    } else {
        Ok(())
    }
}

pub fn ensure_hermitian(a: &CMat, tol: f64) -> Result<()> {
    let d = hermiticity_defect(a);
    if d > tol {
        Err(Error::NonHermitian(d))
    } else {
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(a.nrows(), n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `V f(Λ) V†` for Hermitian `a`.
pub fn hermitian_map<F>(a: &CMat, f: F) -> CMat
where
    F: Fn(f64) -> Complex64,
{
    let (values, vectors) = hermitian_eigen(a);
    let diag = DVector::from_iterator(values.len(), values.iter().map(|&x| f(x)));
    &vectors * CMat::from_diagonal(&diag) * vectors.adjoint()
}

/// Thin singular value decomposition `A = W diag(s) V†`.
///
/// `W` is `rows x k`, `V` is `cols x k`, `k = min(rows, cols)`.
pub struct ThinSvd {
    pub w: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn thin_svd(a: &CMat) -> Result<ThinSvd> {
    let svd = a.clone().svd(true, true);
    let w = svd
        .u
        .ok_or_else(|| Error::Eigensolver("SVD did not return left vectors".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Eigensolver("SVD did not return right vectors".into()))?;
    Ok(ThinSvd {
        w,
        s: svd.singular_values.iter().copied().collect(),
        v: v_t.adjoint(),
    })
}

/// Eigenvalues of a general complex matrix from its complex Schur form.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = balance(a)
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigensolver("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Parlett-Reinsch balancing: a diagonal similarity by powers of two that
/// equalizes row and column norms.
pub fn balance(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut m = a.clone();
    let radix = 2.0_f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
    m
}

/// Orthonormal basis of the orthogonal complement of the range of an isometry.
pub fn orthonormal_complement(pi: &CMat) -> CMat {
    let m = pi.nrows();
    let proj = identity(m) - pi * pi.adjoint();
    let (values, vectors) = hermitian_eigen(&proj);
    let cols: Vec<usize> = (0..m).filter(|&i| values[i] > 0.5).collect();
    let mut out = CMat::zeros(m, cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
    }
    out
}

/// JSON layout `{"rows": R, "cols": C, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Serialization(format!(
                "matrix declares {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        Ok(CMat::from_row_iterator(
            self.rows,
            self.cols,
            self.data.iter().map(|&[re, im]| c64(re, im)),
        ))
    }
}

pub fn matrix_to_json(m: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(s: &str) -> Result<CMat> {
    let parsed: MatrixJson =
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
    parsed.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_is_isometry() {
        let p = top_selector(5, 3);
        assert!(isometry_defect(&p) < 1e-15);
    }

    #[test]
    fn complement_spans_the_rest() {
        let p = top_selector(4, 1);
        let q = orthonormal_complement(&p);
        assert_eq!(q.ncols(), 3);
        assert!(max_abs(&(p.adjoint() * &q)) < 1e-14);
        assert!(isometry_defect(&q) < 1e-14);
    }

    #[test]
    fn matrix_json_layout() {
        let m = CMat::from_row_slice(1, 2, &[c64(1.0, 2.0), c64(3.0, -4.0)]);
        let s = matrix_to_json(&m);
        assert_eq!(s, r#"{"rows":1,"cols":2,"data":[[1.0,2.0],[3.0,-4.0]]}"#);
        assert_eq!(matrix_from_json(&s).unwrap(), m);
    }

    #[test]
    fn matrix_json_rejects_short_data() {
        let err = matrix_from_json(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Serialization(_)));
    }

    #[test]
    fn kron_dimensions() {
        let a = pauli_x();
        let b = identity(3);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (6, 6));
        assert_eq!(k[(0, 3)], real(1.0));
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let d = CMat::from_diagonal(&CVec::from_vec(vec![c64(0.0, 1.0), real(2.0)]));
        let mut ev = eigenvalues(&d).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c64(0.0, 1.0)).norm() < 1e-14);
        assert!((ev[1] - real(2.0)).norm() < 1e-14);
    }
}
