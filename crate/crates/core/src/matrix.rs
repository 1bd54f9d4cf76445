//! Dense square complex matrices.
//!
//! A [`Matrix`] is the finite-dimensional stand-in for a bounded operator.
//! Every constructor rejects non-finite entries, so downstream kernels can
//! assume finite data.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Largest accepted dimension.
pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        if data.len() != n * n {
            return Err(Error::WrongLength {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data)
    }

    /// Builds a matrix from nested rows; every row must have `rows.len()` entries.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::WrongLength {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![Complex64::new(0.0, 0.0); n * n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The 2x2 Jordan block `[[0, 1], [0, 0]]`.
    pub fn jordan2() -> Self {
        Self::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).expect("static 2x2")
    }

    /// Internal constructor for results of arithmetic on finite inputs that
    /// are known not to overflow in practice. Still rejects non-finite data.
    pub(crate) fn from_parts(n: usize, data: Vec<Complex64>) -> Result<Self> {
        debug_assert_eq!(data.len(), n * n);
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(Self { n, data })
    }

    /// Skips the finiteness scan. Only for combinations of already validated
    /// matrices with bounded coefficients (the radius objectives).
    pub(crate) fn from_parts_unchecked(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    fn check_same_dim(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self::from_parts(self.n, data)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self::from_parts(self.n, data)
    }

    pub fn scale(&self, c: Complex64) -> Result<Matrix> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        Self::from_parts(self.n, self.data.iter().map(|a| a * c).collect())
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Matrix, b: Complex64) -> Result<Matrix> {
        self.check_same_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::from_parts(self.n, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dim(other)?;
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self::from_parts(n, data)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Matrix { n, data }
    }

    /// `(Re T, Im T)` with `Re T = (T + T*)/2` and `Im T = (T - T*)/(2i)`.
    pub fn cartesian_parts(&self) -> (Matrix, Matrix) {
        let n = self.n;
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                let b = self.data[j * n + i].conj();
                re.push((a + b) * 0.5);
                // (a - b) / (2i) = -i (a - b) / 2
                let d = (a - b) * 0.5;
                im.push(Complex64::new(d.im, -d.re));
            }
        }
        (Matrix { n, data: re }, Matrix { n, data: im })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        Ok(acc)
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - self*`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_defect() <= rel_tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&MatrixFile::from(self)).expect("matrix serialization is infallible")
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| file_error(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json_string();
        text.push('\n');
        let path = path.as_ref();
        std::fs::write(path, text).map_err(|e| file_error(path, e))
    }
}

fn file_error(path: &Path, source: std::io::Error) -> Error {
    Error::File { path: path.display().to_string(), source }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self.get(i, j);
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(deserializer)?;
        Matrix::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// On-disk matrix format: `{"n": 2, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&Matrix> for MatrixFile {
    fn from(m: &Matrix) -> Self {
        MatrixFile {
            n: m.n,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixFile> for Matrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        if file.n == 0 || file.n > MAX_DIM {
            return Err(Error::InvalidDimension(file.n));
        }
        let data = file.data.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        Matrix::new(file.n, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_of_jordan_block() {
        let j = Matrix::jordan2();
        let expected = Matrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(j.adjoint(), expected);
        assert_eq!(j.adjoint().adjoint(), j);
    }

    #[test]
    fn jordan_plus_adjoint_is_swap() {
        let j = Matrix::jordan2();
        let s = j.add(&j.adjoint()).unwrap();
        assert_eq!(s, Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap());
    }

    #[test]
    fn jordan_block_is_nilpotent() {
        let j = Matrix::jordan2();
        assert_eq!(j.mul(&j).unwrap(), Matrix::zeros(2).unwrap());
    }

    #[test]
    fn cartesian_parts_of_jordan_block() {
        let (re, im) = Matrix::jordan2().cartesian_parts();
        assert_eq!(re, Matrix::from_real_rows(&[[0.0, 0.5], [0.5, 0.0]]).unwrap());
        let expected_im =
            Matrix::from_rows(&[[c(0.0, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(0.0, 0.0)]]).unwrap();
        assert_eq!(im, expected_im);
    }

    #[test]
    fn cartesian_parts_of_hermitian_and_skew() {
        let h = Matrix::from_rows(&[[c(2.0, 0.0), c(1.0, -1.0)], [c(1.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        let (re, im) = h.cartesian_parts();
        assert_eq!(re, h);
        assert_eq!(im, Matrix::zeros(2).unwrap());

        let ih = h.scale(c(0.0, 1.0)).unwrap();
        let (re, im) = ih.cartesian_parts();
        assert!(re.frobenius_norm() < 1e-15);
        assert!(im.sub(&h).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn trace_and_frobenius() {
        let j = Matrix::jordan2();
        assert_eq!(j.mul(&j.adjoint()).unwrap().trace(), c(1.0, 0.0));
        assert!((Matrix::identity(2).unwrap().frobenius_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(j.trace_of_product(&j.adjoint()).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Matrix::zeros(0), Err(Error::InvalidDimension(0))));
        assert!(matches!(Matrix::zeros(65), Err(Error::InvalidDimension(65))));
        assert!(matches!(
            Matrix::new(2, vec![c(0.0, 0.0); 3]),
            Err(Error::WrongLength { expected: 4, found: 3 })
        ));
        assert!(matches!(
            Matrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
        let a = Matrix::zeros(2).unwrap();
        let b = Matrix::zeros(3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { left: 2, right: 3 })));
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            Matrix::from_real_rows(&[[f64::MAX, 0.0], [0.0, 0.0]]).unwrap().scale(c(4.0, 0.0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn json_format() {
        let m = Matrix::from_rows(&[[c(1.0, -0.5), c(0.0, 2.0)], [c(3.25, 0.0), c(-1.0, 1.0)]]).unwrap();
        let text = m.to_json_string();
        assert_eq!(text, r#"{"n":2,"data":[[1.0,-0.5],[0.0,2.0],[3.25,0.0],[-1.0,1.0]]}"#);
        assert_eq!(Matrix::from_json_str(&text).unwrap(), m);

        assert!(Matrix::from_json_str(r#"{"n":2,"data":[[1,0]]}"#).is_err());
        assert!(matches!(
            Matrix::from_json_str(r#"{"n":65,"data":[]}"#),
            Err(Error::InvalidDimension(65))
        ));
        assert!(Matrix::from_json_str("not json").is_err());
    }
}
