//! Hermitian eigenvalues by cyclic complex Jacobi rotations, and singular
//! values built on top of them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Relative asymmetry accepted by [`hermitian_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius mass, relative to the Frobenius norm, at which a
/// Jacobi run is considered converged.
pub const JACOBI_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix,
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut buf = symmetrized(h)?;
    jacobi(&mut buf, n, None)?;
    Ok(sorted_diagonal(&buf, n))
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &Matrix) -> Result<HermitianEigen> {
    let n = h.dim();
    let mut buf = symmetrized(h)?;
    let mut vecs = identity_buffer(n);
    jacobi(&mut buf, n, Some(&mut vecs))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| buf[a * n + a].re.total_cmp(&buf[b * n + b].re));
    let values = order.iter().map(|&k| buf[k * n + k].re).collect();
    let vectors = Matrix::from_fn(n, |i, j| vecs[i * n + order[j]])?;
    Ok(HermitianEigen { values, vectors })
}

/// Singular values, ascending.
///
/// Computed as the nonnegative half of the spectrum of the Hermitian
/// dilation `[[0, A], [A*, 0]]`, whose eigenvalues are `±σ`. This keeps small
/// singular values accurate to `eps * ||A||` instead of `sqrt(eps) * ||A||`
/// as happens when going through `A*A`.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let m = 2 * n;
    let zero = Complex64::new(0.0, 0.0);
    let mut buf = vec![zero; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a.get(i, j);
            buf[i * m + (n + j)] = z;
            buf[(n + j) * m + i] = z.conj();
        }
    }
    jacobi(&mut buf, m, None)?;
    let all = sorted_diagonal(&buf, m);
    Ok(all[n..].iter().map(|&s| s.max(0.0)).collect())
}

fn symmetrized(h: &Matrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let scale = h.frobenius_norm();
    let defect = h.hermitian_defect();
    let allowed = HERMITIAN_TOL * scale;
    if defect > allowed {
        return Err(Error::NotHermitian {
            asymmetry: defect,
            allowed,
        });
    }
    let mut buf = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            buf.push((h.get(i, j) + h.get(j, i).conj()) * 0.5);
        }
    }
    Ok(buf)
}

fn identity_buffer(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    v
}

fn sorted_diagonal(buf: &[Complex64], n: usize) -> Vec<f64> {
    let mut values: Vec<f64> = (0..n).map(|i| buf[i * n + i].re).collect();
    values.sort_by(f64::total_cmp);
    values
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues of an exactly Hermitian row-major buffer, unsorted. The buffer
/// is overwritten. Used by the radius objectives, which build their Hermitian
/// arguments by construction.
pub(crate) fn hermitian_eigenvalues_unsorted(buf: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![buf[0].re]);
    }
    if n == 2 {
        // Closed form; exact for the 2x2 case and much cheaper than a rotation.
        let a = buf[0].re;
        let d = buf[3].re;
        let b = buf[1].norm();
        let mean = 0.5 * (a + d);
        let r = (0.5 * (a - d)).hypot(b);
        return Ok(vec![mean - r, mean + r]);
    }
    jacobi(buf, n, None)?;
    Ok((0..n).map(|i| buf[i * n + i].re).collect())
}

/// Eigen-decomposition of an exactly Hermitian row-major buffer. The
/// eigenvalues are left on the diagonal of `buf` (unsorted); the returned
/// row-major unitary holds the matching eigenvectors as columns.
pub(crate) fn hermitian_eigen_buffer(buf: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let mut vecs = identity_buffer(n);
    jacobi(buf, n, Some(&mut vecs))?;
    Ok(vecs)
}

/// Cyclic Jacobi on a Hermitian buffer. On return the buffer is diagonal up
/// to `JACOBI_TOL` and, when given, `vecs` has been right-multiplied by the
/// accumulated rotations.
fn jacobi(a: &mut [Complex64], n: usize, mut vecs: Option<&mut [Complex64]>) -> Result<()> {
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(());
    }
    let tol = JACOBI_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(a, n) <= tol {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let phase = apq / mag;
                let phase_conj = phase.conj();

                // A <- A G with G = diag(1, conj(phase)) * rotation.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * phase_conj * s;
                    a[k * n + q] = akp * s + akq * phase_conj * c;
                }
                // A <- G* A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * phase_conj * s;
                        v[k * n + q] = vkp * s + vkq * phase_conj * c;
                    }
                }
            }
        }
    }
    let residual = off_diagonal_mass(a, n);
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn swap_matrix() {
        let h = Matrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_close(&hermitian_eigenvalues(&h).unwrap(), &[-1.0, 1.0], 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let h = Matrix::diagonal(&[c(3.0, 0.0), c(-2.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert_close(&hermitian_eigenvalues(&h).unwrap(), &[-2.0, 3.0, 5.0], 0.0);
    }

    #[test]
    fn complex_two_by_two() {
        let h = Matrix::from_rows(&[[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(2.0, 0.0)]]).unwrap();
        assert_close(&hermitian_eigenvalues(&h).unwrap(), &[1.0, 3.0], 1e-14);
    }

    #[test]
    fn complex_three_by_three_known_spectrum() {
        // [[2, i, 0], [-i, 2, 0], [0, 0, 7]] has spectrum {1, 3, 7}.
        let h = Matrix::from_rows(&[
            [c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            [c(0.0, -1.0), c(2.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(7.0, 0.0)],
        ])
        .unwrap();
        assert_close(&hermitian_eigenvalues(&h).unwrap(), &[1.0, 3.0, 7.0], 1e-13);
        let mut buf = h.as_slice().to_vec();
        let mut raw = hermitian_eigenvalues_unsorted(&mut buf, 3).unwrap();
        raw.sort_by(f64::total_cmp);
        assert_close(&raw, &[1.0, 3.0, 7.0], 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let z = Matrix::zeros(4).unwrap();
        assert_eq!(hermitian_eigenvalues(&z).unwrap(), vec![0.0; 4]);
        assert_eq!(singular_values(&z).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = hermitian_eigenvalues(&Matrix::jordan2()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let h = Matrix::from_rows(&[[c(1.0, 0.0), c(1.0, 1e-15)], [c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert_close(&hermitian_eigenvalues(&h).unwrap(), &[0.0, 2.0], 1e-14);
    }

    #[test]
    fn singular_values_of_jordan_block() {
        assert_close(&singular_values(&Matrix::jordan2()).unwrap(), &[0.0, 1.0], 1e-15);
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let h = Matrix::from_rows(&[
            [c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.5)],
            [c(2.0, 1.0), c(-1.0, 0.0), c(0.0, 3.0)],
            [c(0.5, -0.5), c(0.0, -3.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        let v = &eig.vectors;
        let d = Matrix::diagonal(&eig.values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()).unwrap();
        let rebuilt = v.mul(&d).unwrap().mul(&v.adjoint()).unwrap();
        assert!(rebuilt.sub(&h).unwrap().frobenius_norm() < 1e-12 * h.frobenius_norm());
        let vv = v.adjoint().mul(v).unwrap();
        assert!(vv.sub(&Matrix::identity(3).unwrap()).unwrap().frobenius_norm() < 1e-13);
    }
}
