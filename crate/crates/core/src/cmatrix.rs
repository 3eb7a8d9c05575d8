//! Small dense complex matrices.
//!
//! Only what the two-qubit analysis needs: products, adjoints, a cyclic
//! Jacobi diagonalizer for Hermitian input, the PSD square root, and the
//! partial transpose on the second qubit of a 4x4 matrix.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Maximum entrywise |m - m^dagger| accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-10;

const OFF_DIAGONAL_TARGET: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a 4x4 matrix, got {rows}x{cols}")]
    NotTwoQubit { rows: usize, cols: usize },
    #[error("matrix has eigenvalue {eigenvalue:e} below -{PSD_CLAMP:e}")]
    NotPsd { eigenvalue: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("entry count {len} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Row-major construction.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self, MatrixError> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise |m - m^dagger|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    fn check_hermitian(&self) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(MatrixError::NotHermitian { deviation });
        }
        Ok(())
    }
}

pub fn multiply(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    if a.cols != b.rows {
        return Err(MatrixError::DimensionMismatch {
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for t in 0..a.cols {
            let x = a[(r, t)];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..b.cols {
                out[(r, c)] += x * b[(t, c)];
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m.cols, m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            out[(c, r)] = m[(r, c)].conj();
        }
    }
    out
}

/// Entrywise complex conjugate.
pub fn conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(|z| z.conj()).collect(),
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        *self.0.last().expect("spectrum of a non-empty matrix")
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Eigenvalues and unitary eigenvector matrix (columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic-sweep complex Jacobi diagonalization.
///
/// Each rotation first removes the phase of `a[p][q]` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, MatrixError> {
    m.check_hermitian()?;
    let n = m.rows;
    // Symmetrize so that roundoff in the input does not bias the sweep.
    let mut a = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        a[(r, r)] = Complex64::new(m[(r, r)].re, 0.0);
        for c in r + 1..n {
            let z = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[(r, c)] = z;
            a[(c, r)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TARGET * scale.max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(MatrixError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    Ok(HermitianEigen {
        eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
        eigenvectors: v,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }
    let phase = g / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows;
    // A <- A G
    for r in 0..n {
        let x = a[(r, p)];
        let y = a[(r, q)];
        a[(r, p)] = x * g_pp + y * g_qp;
        a[(r, q)] = x * g_pq + y * g_qq;
    }
    // A <- G^dagger A
    for col in 0..n {
        let x = a[(p, col)];
        let y = a[(q, col)];
        a[(p, col)] = g_pp.conj() * x + g_qp.conj() * y;
        a[(q, col)] = g_pq.conj() * x + g_qq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V G
    for r in 0..n {
        let x = v[(r, p)];
        let y = v[(r, q)];
        v[(r, p)] = x * g_pp + y * g_qp;
        v[(r, q)] = x * g_pq + y * g_qq;
    }
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum, MatrixError> {
    Ok(Spectrum::from_unsorted(hermitian_eigen(m)?.eigenvalues))
}

/// PSD square root via the spectral decomposition. Eigenvalues in
/// `[-PSD_CLAMP, 0)` are clamped to zero.
pub fn hermitian_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    hermitian_sqrt_truncated(m, 0.0)
}

/// As [`hermitian_sqrt`], but eigenvalues at or below `cutoff` are also
/// dropped. Roundoff-level eigenvalues of a rank-deficient input otherwise
/// become `sqrt(1e-17) ~ 3e-9` spurious components of the root.
pub fn hermitian_sqrt_truncated(
    m: &ComplexMatrix,
    cutoff: f64,
) -> Result<ComplexMatrix, MatrixError> {
    let eig = hermitian_eigen(m)?;
    let n = m.rows;
    let mut roots = Vec::with_capacity(n);
    for &l in &eig.eigenvalues {
        if l < -PSD_CLAMP {
            return Err(MatrixError::NotPsd { eigenvalue: l });
        }
        roots.push(if l <= cutoff { 0.0 } else { l.sqrt() });
    }
    let v = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut z = Complex64::new(0.0, 0.0);
            for (t, &s) in roots.iter().enumerate() {
                if s != 0.0 {
                    z += v[(r, t)] * v[(c, t)].conj() * s;
                }
            }
            out[(r, c)] = z;
        }
    }
    Ok(out)
}

/// Transpose on the second qubit: `out[ab, a'b'] = m[ab', a'b]`.
pub fn partial_transpose_second(m: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    if m.rows != 4 || m.cols != 4 {
        return Err(MatrixError::NotTwoQubit {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[(2 * a + b, 2 * a2 + b2)] = m[(2 * a + b2, 2 * a2 + b)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_spectrum(m: &ComplexMatrix, expected: &[f64]) {
        let s = hermitian_eigenvalues(m).unwrap();
        assert_eq!(s.len(), expected.len());
        for (x, y) in s.values().iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{:?} vs {expected:?}", s.values());
        }
    }

    #[test]
    fn trivial_spectra() {
        assert_spectrum(&ComplexMatrix::identity(4), &[1.0; 4]);
        assert_spectrum(&ComplexMatrix::diagonal(&[0.0, 0.5, 0.0, 0.5]), &[0.5, 0.5, 0.0, 0.0]);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_spectrum(&x, &[1.0, -1.0]);
        let y = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
            .unwrap();
        assert_spectrum(&y, &[1.0, -1.0]);
    }

    #[test]
    fn eigen_errors() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&rect),
            Err(MatrixError::NotSquare { rows: 2, cols: 3 })
        ));
        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&skew),
            Err(MatrixError::NotHermitian { .. })
        ));
        let tiny = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0 + 1e-12, 0.0]).unwrap();
        assert!(hermitian_eigenvalues(&tiny).is_ok());
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let m = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, 0.3),
                c(-0.1, 0.7),
                c(0.5, -0.3),
                c(1.0, 0.0),
                c(0.2, 0.0),
                c(-0.1, -0.7),
                c(0.2, 0.0),
                c(-1.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        let v = &e.eigenvectors;
        let d = multiply(&multiply(&adjoint(v), &m).unwrap(), v).unwrap();
        for r in 0..3 {
            for col in 0..3 {
                let want = if r == col { e.eigenvalues[r] } else { 0.0 };
                assert!((d[(r, col)] - c(want, 0.0)).norm() < 1e-13);
            }
        }
        let vv = multiply(&adjoint(v), v).unwrap();
        assert!(vv.sub(&ComplexMatrix::identity(3)).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn sqrt_examples() {
        assert!(hermitian_sqrt(&ComplexMatrix::identity(4))
            .unwrap()
            .sub(&ComplexMatrix::identity(4))
            .unwrap()
            .max_abs()
            < 1e-14);
        let s = hermitian_sqrt(&ComplexMatrix::diagonal(&[4.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(s.sub(&ComplexMatrix::diagonal(&[2.0, 1.0, 0.0, 0.0])).unwrap().max_abs() < 1e-14);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::outer(&[c(0., 0.), c(h, 0.), c(h, 0.), c(0., 0.)]);
        let s = hermitian_sqrt(&bell).unwrap();
        assert!(s.sub(&bell).unwrap().max_abs() < 1e-12);

        let neg = ComplexMatrix::diagonal(&[1.0, -1e-6]);
        assert!(matches!(hermitian_sqrt(&neg), Err(MatrixError::NotPsd { .. })));
        let clamp = ComplexMatrix::diagonal(&[1.0, -1e-11]);
        let s = hermitian_sqrt(&clamp).unwrap();
        assert_eq!(s[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn products_and_adjoints() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1., 2.), c(3., -1.), c(0., 1.), c(-2., 0.)])
            .unwrap();
        assert_eq!(multiply(&ComplexMatrix::identity(2), &m).unwrap(), m);
        assert_eq!(adjoint(&adjoint(&m)), m);
        let r = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(conjugate(&r), r);
        assert!(matches!(
            multiply(&ComplexMatrix::zeros(2, 3), &ComplexMatrix::zeros(2, 3)),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![c(0., 0.); 3]),
            Err(MatrixError::BadShape { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_real(1, 1, &[f64::NAN]),
            Err(MatrixError::NonFinite)
        ));
    }

    #[test]
    fn partial_transpose_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::outer(&[c(0., 0.), c(h, 0.), c(h, 0.), c(0., 0.)]);
        let pt = partial_transpose_second(&bell).unwrap();
        assert!((pt[(0, 3)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((pt[(3, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(pt[(1, 2)], c(0.0, 0.0));
        assert_eq!(partial_transpose_second(&pt).unwrap(), bell);

        let d = ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose_second(&d).unwrap(), d);
        assert!(matches!(
            partial_transpose_second(&ComplexMatrix::identity(2)),
            Err(MatrixError::NotTwoQubit { .. })
        ));
    }
}
