//! Seeded random matrix families.
//!
//! Every sample is a pure function of `(family, n, seed)`; see [`crate::rng`]
//! for the exact stream definition.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MAX_DIM};
use crate::rng::SplitMix64;

const MAX_ATTEMPTS: usize = 16;
/// A Gram-Schmidt step breaks down when projection removes all but this
/// fraction of a vector's norm.
const BREAKDOWN_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Ginibre,
    Hermitian,
    NilpotentSqZero,
    Normal,
    Unitary,
    NilpotentPairs,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Ginibre,
        Family::Hermitian,
        Family::NilpotentSqZero,
        Family::Normal,
        Family::Unitary,
        Family::NilpotentPairs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ginibre => "ginibre",
            Family::Hermitian => "hermitian",
            Family::NilpotentSqZero => "nilpotent-sq-zero",
            Family::Normal => "normal",
            Family::Unitary => "unitary",
            Family::NilpotentPairs => "nilpotent-pairs",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Family::Ginibre => 1,
            Family::Hermitian => 2,
            Family::NilpotentSqZero => 3,
            Family::Normal => 4,
            Family::Unitary => 5,
            Family::NilpotentPairs => 6,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ginibre" => Ok(Family::Ginibre),
            "hermitian" => Ok(Family::Hermitian),
            "nilpotent-sq-zero" | "nilpotent" => Ok(Family::NilpotentSqZero),
            "normal" => Ok(Family::Normal),
            "unitary" => Ok(Family::Unitary),
            "nilpotent-pairs" => Ok(Family::NilpotentPairs),
            _ => Err(Error::InvalidSampler(s.to_string())),
        }
    }
}

/// `<family>:<n>:<seed>`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self { family, n, seed })
    }
}

impl fmt::Display for SamplerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.family, self.n, self.seed)
    }
}

impl FromStr for SamplerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSampler(s.to_string());
        let mut parts = s.split(':');
        let family = parts.next().ok_or_else(bad)?.parse::<Family>().map_err(|_| bad())?;
        let n = parts.next().ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?;
        let seed = parts.next().ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        SamplerSpec::new(family, n, seed)
    }
}

/// Dimension used when a family selector does not name one.
pub const DEFAULT_DIM: usize = 3;

impl SamplerSpec {
    /// Spec from a family selector `name[:n]` and a separate seed.
    pub fn from_selector(selector: &str, seed: u64) -> Result<Self> {
        let bad = || Error::InvalidSampler(selector.to_string());
        let mut parts = selector.splitn(2, ':');
        let family = parts.next().unwrap_or("").parse::<Family>().map_err(|_| bad())?;
        let n = match parts.next() {
            Some(n) => n.parse::<usize>().map_err(|_| bad())?,
            None => DEFAULT_DIM,
        };
        SamplerSpec::new(family, n, seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Single(Matrix),
    Pair(Matrix, Matrix),
}

impl Sample {
    pub fn into_pair(self) -> (Matrix, Matrix) {
        match self {
            Sample::Single(m) => {
                let z = Matrix::zeros(m.dim()).expect("dimension already validated");
                (m, z)
            }
            Sample::Pair(b, c) => (b, c),
        }
    }
}

/// Draws one sample. `nilpotent-pairs` yields `(T, T*)`, every other family a
/// single matrix.
pub fn sample(spec: &SamplerSpec) -> Result<Sample> {
    let mut rng = SplitMix64::from_key(&[spec.seed, spec.family.tag(), spec.n as u64]);
    draw(spec.family, spec.n, &mut rng)
}

/// Draws a single matrix; for `nilpotent-pairs` this is the `T` of `(T, T*)`.
pub fn sample_matrix(spec: &SamplerSpec) -> Result<Matrix> {
    Ok(match sample(spec)? {
        Sample::Single(m) => m,
        Sample::Pair(t, _) => t,
    })
}

/// A pair from a family: `(T, T*)` for `nilpotent-pairs`, otherwise two
/// independent draws from the same stream.
pub fn sample_pair(spec: &SamplerSpec) -> Result<(Matrix, Matrix)> {
    let mut rng = SplitMix64::from_key(&[spec.seed, spec.family.tag(), spec.n as u64, 2]);
    match draw(spec.family, spec.n, &mut rng)? {
        Sample::Pair(b, c) => Ok((b, c)),
        Sample::Single(b) => match draw(spec.family, spec.n, &mut rng)? {
            Sample::Single(c) => Ok((b, c)),
            Sample::Pair(..) => unreachable!("single-matrix family"),
        },
    }
}

pub(crate) fn draw(family: Family, n: usize, rng: &mut SplitMix64) -> Result<Sample> {
    Ok(match family {
        Family::Ginibre => Sample::Single(ginibre(n, rng)?),
        Family::Hermitian => {
            let g = ginibre(n, rng)?;
            Sample::Single(g.add(&g.adjoint())?.scale(Complex64::new(0.5, 0.0))?)
        }
        Family::NilpotentSqZero => Sample::Single(nilpotent_sq_zero(n, rng)?),
        Family::Normal => {
            let u = unitary(n, rng)?;
            let d: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
            let d = Matrix::diagonal(&d)?;
            Sample::Single(u.mul(&d)?.mul(&u.adjoint())?)
        }
        Family::Unitary => Sample::Single(unitary(n, rng)?),
        Family::NilpotentPairs => {
            let t = nilpotent_sq_zero(n, rng)?;
            let ts = t.adjoint();
            Sample::Pair(t, ts)
        }
    })
}

pub(crate) fn ginibre(n: usize, rng: &mut SplitMix64) -> Result<Matrix> {
    let data = (0..n * n).map(|_| rng.complex_normal()).collect();
    Matrix::new(n, data)
}

fn random_vector(n: usize, rng: &mut SplitMix64) -> Vec<Complex64> {
    (0..n).map(|_| rng.complex_normal()).collect()
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    // <y, x> = y* x
    x.iter().zip(y).map(|(a, b)| b.conj() * a).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Projects `v` off every vector in `basis` (assumed orthonormal), twice.
/// Returns `None` on breakdown, otherwise the normalized result.
fn orthonormalize_against(mut v: Vec<Complex64>, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let original = norm(&v);
    if original == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for q in basis {
            let proj = dot(&v, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
    }
    let remaining = norm(&v);
    if remaining <= BREAKDOWN_RATIO * original {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= remaining);
    Some(v)
}

/// Column-wise Gram-Schmidt of a Ginibre sample, with re-orthogonalization.
pub(crate) fn unitary(n: usize, rng: &mut SplitMix64) -> Result<Matrix> {
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for _ in 0..n {
            match orthonormalize_against(random_vector(n, rng), &cols) {
                Some(q) => cols.push(q),
                None => continue 'attempt,
            }
        }
        return Matrix::from_fn(n, |i, j| cols[j][i]);
    }
    Err(Error::SamplingFailed(format!(
        "unitary: Gram-Schmidt broke down {MAX_ATTEMPTS} times (n = {n})"
    )))
}

/// `x y*` with `y` orthogonalized against `x`, so `(x y*)^2 = x (y* x) y* = 0`.
fn nilpotent_sq_zero(n: usize, rng: &mut SplitMix64) -> Result<Matrix> {
    for _ in 0..MAX_ATTEMPTS {
        let x = random_vector(n, rng);
        let nx = norm(&x);
        if nx == 0.0 {
            continue;
        }
        let xhat: Vec<Complex64> = x.iter().map(|z| z / nx).collect();
        let y = random_vector(n, rng);
        let Some(y) = orthonormalize_against(y, std::slice::from_ref(&xhat)) else {
            continue;
        };
        // Keep the scale of the raw Gaussian draws for x; y has unit norm.
        return Matrix::from_fn(n, |i, j| x[i] * y[j].conj());
    }
    Err(Error::SamplingFailed(format!(
        "nilpotent-sq-zero: Gram-Schmidt broke down {MAX_ATTEMPTS} times (n = {n})"
    )))
}
