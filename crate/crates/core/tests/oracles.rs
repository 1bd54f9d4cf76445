//! Comparisons against independent computations built on nalgebra.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use opradius::radius::{w2e_reduced, w_n, w_ne};
use opradius::sampling::{sample_pair, Family, SamplerSpec};
use opradius::{Matrix, NormDescriptor, RadiusOptions};

fn to_na(m: &Matrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

fn pairs() -> impl Iterator<Item = (Matrix, Matrix)> {
    let families = [Family::Ginibre, Family::Hermitian, Family::NilpotentSqZero, Family::Normal, Family::NilpotentPairs];
    (0..40u64).map(move |k| {
        let family = families[(k % 5) as usize];
        let n = 2 + (k % 4) as usize;
        sample_pair(&SamplerSpec::new(family, n, 900 + k).unwrap()).unwrap()
    })
}

fn hermitian_parts(m: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let adj = m.adjoint();
    let re = (m + &adj) * Complex64::new(0.5, 0.0);
    let im = (m - &adj) * Complex64::new(0.0, -0.5);
    (re, im)
}

/// `w_(2,e)(B, C)` is the square root of the top eigenvalue of the Gram
/// matrix `G_kl = tr(H_k H_l)` of the Hermitian parts of `B` and `C`.
fn hs_pair_radius(b: &Matrix, c: &Matrix) -> f64 {
    let (rb, ib) = hermitian_parts(&to_na(b));
    let (rc, ic) = hermitian_parts(&to_na(c));
    let h = [rb, ib, rc, ic];
    let g = DMatrix::from_fn(4, 4, |k, l| (&h[k] * &h[l]).trace().re);
    let top = SymmetricEigen::new(g).eigenvalues.max();
    top.max(0.0).sqrt()
}

fn numerical_radius(t: &Matrix) -> f64 {
    let a = to_na(t);
    (0..20_000)
        .map(|k| {
            let z = Complex64::from_polar(1.0, PI * k as f64 / 20_000.0);
            let (h, _) = hermitian_parts(&(&a * z));
            let eig = h.symmetric_eigenvalues();
            eig.max().abs().max(eig.min().abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn hs_pair_radius_matches_gram_eigenvalue() {
    let opts = RadiusOptions::default();
    for (b, c) in pairs() {
        let want = hs_pair_radius(&b, &c);
        let got = w_ne(&b, &c, &NormDescriptor::HS, &opts).unwrap().value;
        let reduced = w2e_reduced(&b, &c, &opts).unwrap().value;
        assert!((got - want).abs() <= 1e-9 * want.max(1.0), "{got} vs {want}");
        assert!((reduced - want).abs() <= 1e-9 * want.max(1.0), "{reduced} vs {want}");
    }
}

#[test]
fn norms_match_singular_values() {
    for (b, _) in pairs() {
        let sv = to_na(&b).singular_values();
        let op = sv.max();
        let trace = sv.sum();
        let s3 = sv.iter().map(|s| s.powi(3)).sum::<f64>().cbrt();
        let cases = [
            (NormDescriptor::OP, op),
            (NormDescriptor::TRACE, trace),
            (NormDescriptor::schatten(3.0).unwrap(), s3),
            (NormDescriptor::HS, to_na(&b).norm()),
        ];
        for (norm, want) in cases {
            let got = norm.evaluate(&b).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.max(1.0), "{}: {got} vs {want}", norm.id());
        }
    }
}

#[test]
fn operator_numerical_radius_matches_dense_scan() {
    let opts = RadiusOptions::default();
    for (b, _) in pairs().take(20) {
        let want = numerical_radius(&b);
        let got = w_n(&b, &NormDescriptor::OP, &opts).unwrap().value;
        assert!(got >= want - 1e-12 * want.max(1.0), "{got} below scan {want}");
        assert!(got - want <= 1e-6 * want.max(1.0), "{got} vs {want}");
        let wnum = NormDescriptor::WNUM.evaluate(&b).unwrap();
        assert!((wnum - got).abs() <= 1e-9 * got.max(1.0), "{wnum} vs {got}");
    }
}
