//! Norm evaluators `N(.)` with statically declared capability flags.
//!
//! The flags decide which inequality checks apply to a norm. They are fixed
//! per norm kind; [`check_flags`] audits them on random inputs but never
//! changes them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::radius::{self, RadiusOptions};
use crate::rng::SplitMix64;
use crate::sampling;
use crate::spectral;

pub const MAX_SCHATTEN_P: f64 = 64.0;
/// Slack allowed by the flag audit, relative to `max(1, scale)`.
pub const AUDIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// Operator (spectral) norm: largest singular value.
    Operator,
    /// Hilbert-Schmidt (Frobenius) norm.
    HilbertSchmidt,
    /// Trace norm: sum of singular values.
    Trace,
    /// Schatten p-norm, `1 <= p <= 64`.
    Schatten(f64),
    /// Numerical radius, i.e. `w_N` with `N` the operator norm.
    NumericalRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormFlags {
    /// `N(T*) = N(T)`
    pub self_adjoint: bool,
    /// `N(AB) <= N(A) N(B)`
    pub algebra: bool,
    /// `N(U* T U) = N(T)` for unitary `U`
    pub unitarily_invariant: bool,
}

impl NormFlags {
    /// True when every flag set in `required` is also set here.
    pub fn satisfies(&self, required: &NormFlags) -> bool {
        (!required.self_adjoint || self.self_adjoint)
            && (!required.algebra || self.algebra)
            && (!required.unitarily_invariant || self.unitarily_invariant)
    }

    pub const NONE: NormFlags = NormFlags {
        self_adjoint: false,
        algebra: false,
        unitarily_invariant: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDescriptor {
    kind: NormKind,
}

impl NormDescriptor {
    pub const OP: NormDescriptor = NormDescriptor { kind: NormKind::Operator };
    pub const HS: NormDescriptor = NormDescriptor {
        kind: NormKind::HilbertSchmidt,
    };
    pub const TRACE: NormDescriptor = NormDescriptor { kind: NormKind::Trace };
    pub const WNUM: NormDescriptor = NormDescriptor {
        kind: NormKind::NumericalRadius,
    };

    pub fn schatten(p: f64) -> Result<Self> {
        if !(p.is_finite() && (1.0..=MAX_SCHATTEN_P).contains(&p)) {
            return Err(Error::InvalidNorm(format!("schatten:{p}")));
        }
        Ok(Self {
            kind: NormKind::Schatten(p),
        })
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn id(&self) -> String {
        self.to_string()
    }

    pub fn flags(&self) -> NormFlags {
        match self.kind {
            NormKind::Operator | NormKind::HilbertSchmidt | NormKind::Trace | NormKind::Schatten(_) => {
                NormFlags {
                    self_adjoint: true,
                    algebra: true,
                    unitarily_invariant: true,
                }
            }
            NormKind::NumericalRadius => NormFlags {
                self_adjoint: true,
                algebra: false,
                unitarily_invariant: true,
            },
        }
    }

    /// `N(T)` for an arbitrary square matrix.
    pub fn evaluate(&self, t: &Matrix) -> Result<f64> {
        match self.kind {
            NormKind::HilbertSchmidt => Ok(t.frobenius_norm()),
            NormKind::Operator => Ok(spectral::singular_values(t)?.last().copied().unwrap_or(0.0)),
            NormKind::Trace => Ok(spectral::singular_values(t)?.iter().sum()),
            NormKind::Schatten(p) => Ok(schatten_of(&spectral::singular_values(t)?, p)),
            NormKind::NumericalRadius => {
                Ok(radius::w_n(t, &NormDescriptor::OP, &RadiusOptions::default())?.value)
            }
        }
    }

    /// `N(H)` for a row-major buffer holding an exactly Hermitian matrix. The
    /// buffer may be overwritten.
    pub(crate) fn evaluate_hermitian_buffer(&self, buf: &mut [Complex64], n: usize) -> Result<f64> {
        if let NormKind::HilbertSchmidt = self.kind {
            return Ok(buf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
        let eig = spectral::hermitian_eigenvalues_unsorted(buf, n)?;
        Ok(match self.kind {
            // The numerical radius of a Hermitian matrix is its operator norm.
            NormKind::Operator | NormKind::NumericalRadius => eig.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormKind::Trace => eig.iter().map(|x| x.abs()).sum(),
            NormKind::Schatten(p) => {
                let abs: Vec<f64> = eig.iter().map(|x| x.abs()).collect();
                schatten_of(&abs, p)
            }
            NormKind::HilbertSchmidt => unreachable!(),
        })
    }

    /// Weights `w_i` such that the gradient of `N` at a Hermitian matrix
    /// with spectral decomposition `Σ λ_i v_i v_i*` is `Σ w_i v_i v_i*`.
    /// Where `N` is not differentiable this picks one subgradient.
    pub(crate) fn hermitian_gradient_weights(&self, eig: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; eig.len()];
        let top = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if top == 0.0 {
            return w;
        }
        match self.kind {
            NormKind::Operator | NormKind::NumericalRadius => {
                let k = (0..eig.len()).fold(0, |k, i| if eig[i].abs() > eig[k].abs() { i } else { k });
                w[k] = eig[k].signum();
            }
            NormKind::HilbertSchmidt => {
                let fro = eig.iter().map(|x| x * x).sum::<f64>().sqrt();
                for (wi, x) in w.iter_mut().zip(eig) {
                    *wi = x / fro;
                }
            }
            NormKind::Trace => {
                for (wi, x) in w.iter_mut().zip(eig) {
                    *wi = if *x == 0.0 { 0.0 } else { x.signum() };
                }
            }
            NormKind::Schatten(p) => {
                let scaled: Vec<f64> = eig.iter().map(|x| (x.abs() / top).powf(p - 1.0)).collect();
                let norm_p = eig.iter().map(|x| (x.abs() / top).powf(p)).sum::<f64>().powf(1.0 / p);
                let denom = norm_p.powf(p - 1.0);
                for ((wi, x), s) in w.iter_mut().zip(eig).zip(scaled) {
                    *wi = x.signum() * s / denom;
                }
            }
        }
        w
    }
}

fn schatten_of(values: &[f64], p: f64) -> f64 {
    let top = values.iter().fold(0.0f64, |m, &x| m.max(x));
    if top == 0.0 {
        return 0.0;
    }
    top * values.iter().map(|&x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

impl fmt::Display for NormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NormKind::Operator => f.write_str("op"),
            NormKind::HilbertSchmidt => f.write_str("hs"),
            NormKind::Trace => f.write_str("trace"),
            NormKind::Schatten(p) => write!(f, "schatten:{p}"),
            NormKind::NumericalRadius => f.write_str("wnum"),
        }
    }
}

impl FromStr for NormDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" => Ok(Self::OP),
            "hs" => Ok(Self::HS),
            "trace" => Ok(Self::TRACE),
            "wnum" => Ok(Self::WNUM),
            _ => {
                let p = s
                    .strip_prefix("schatten:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidNorm(s.to_string()))?;
                Self::schatten(p).map_err(|_| Error::InvalidNorm(s.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    SelfAdjoint,
    Algebra,
    UnitarilyInvariant,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagFailure {
    pub flag: Flag,
    /// Seed that regenerates the counterexample (see [`audit_sample`]).
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagAudit {
    pub norm: String,
    pub samples: usize,
    pub checked: Vec<Flag>,
    pub failures: Vec<FlagFailure>,
}

impl FlagAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The inputs of one audit round: matrices `A`, `B` and a unitary `U`, with
/// dimension cycling through 2, 3, 4.
pub fn audit_sample(seed: u64) -> Result<(Matrix, Matrix, Matrix)> {
    let n = 2 + (seed % 3) as usize;
    let mut rng = SplitMix64::from_key(&[seed, 0xF1A6]);
    let a = sampling::ginibre(n, &mut rng)?;
    let b = sampling::ginibre(n, &mut rng)?;
    let u = sampling::unitary(n, &mut rng)?;
    Ok((a, b, u))
}

/// Audits every flag the norm declares on `samples` random inputs. Round `i`
/// uses [`audit_sample`]`(seed + i)`.
pub fn check_flags(norm: &NormDescriptor, samples: usize, seed: u64) -> Result<FlagAudit> {
    if samples == 0 {
        return Err(Error::InvalidOptions("flag audit needs at least one sample".into()));
    }
    let flags = norm.flags();
    let mut checked = Vec::new();
    if flags.self_adjoint {
        checked.push(Flag::SelfAdjoint);
    }
    if flags.algebra {
        checked.push(Flag::Algebra);
    }
    if flags.unitarily_invariant {
        checked.push(Flag::UnitarilyInvariant);
    }

    let mut failures = Vec::new();
    for i in 0..samples as u64 {
        let round_seed = seed.wrapping_add(i);
        let (a, b, u) = audit_sample(round_seed)?;
        let na = norm.evaluate(&a)?;
        for &flag in &checked {
            let (lhs, rhs, ok) = match flag {
                Flag::SelfAdjoint => {
                    let nas = norm.evaluate(&a.adjoint())?;
                    (nas, na, (nas - na).abs() <= AUDIT_TOL * na.max(1.0))
                }
                Flag::Algebra => {
                    let nab = norm.evaluate(&a.mul(&b)?)?;
                    let bound = na * norm.evaluate(&b)?;
                    (nab, bound, nab <= bound + AUDIT_TOL * bound.max(1.0))
                }
                Flag::UnitarilyInvariant => {
                    let conj = u.adjoint().mul(&a)?.mul(&u)?;
                    let nc = norm.evaluate(&conj)?;
                    (nc, na, (nc - na).abs() <= AUDIT_TOL * na.max(1.0))
                }
            };
            if !ok {
                failures.push(FlagFailure {
                    flag,
                    seed: round_seed,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(FlagAudit {
        norm: norm.id(),
        samples,
        checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_display() {
        for s in ["op", "hs", "trace", "wnum", "schatten:3", "schatten:1.5", "schatten:64"] {
            assert_eq!(s.parse::<NormDescriptor>().unwrap().to_string(), s);
        }
        for bad in ["", "frob", "schatten:", "schatten:0.5", "schatten:65", "schatten:nan", "schatten:x"] {
            assert!(matches!(bad.parse::<NormDescriptor>(), Err(Error::InvalidNorm(_))), "{bad}");
        }
    }

    #[test]
    fn declared_flags() {
        let all = NormFlags {
            self_adjoint: true,
            algebra: true,
            unitarily_invariant: true,
        };
        for s in ["op", "hs", "trace", "schatten:3"] {
            assert_eq!(s.parse::<NormDescriptor>().unwrap().flags(), all);
        }
        let w = NormDescriptor::WNUM.flags();
        assert!(w.self_adjoint && w.unitarily_invariant && !w.algebra);
        assert!(!w.satisfies(&all));
    }

    #[test]
    fn known_values() {
        let j = Matrix::jordan2();
        assert!((NormDescriptor::OP.evaluate(&j).unwrap() - 1.0).abs() < 1e-15);
        assert!((NormDescriptor::TRACE.evaluate(&j).unwrap() - 1.0).abs() < 1e-15);
        let i3 = Matrix::identity(3).unwrap();
        assert!((NormDescriptor::HS.evaluate(&i3).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((NormDescriptor::WNUM.evaluate(&j).unwrap() - 0.5).abs() < 1e-12);

        // diag(3, -4): schatten:2 is 5, trace 7, op 4.
        let d = Matrix::diagonal(&[c(3.0, 0.0), c(-4.0, 0.0)]).unwrap();
        let s2 = NormDescriptor::schatten(2.0).unwrap();
        assert!((s2.evaluate(&d).unwrap() - 5.0).abs() < 1e-14);
        assert!((NormDescriptor::TRACE.evaluate(&d).unwrap() - 7.0).abs() < 1e-14);
        assert!((NormDescriptor::OP.evaluate(&d).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_fast_path_matches_general() {
        let norms = ["op", "hs", "trace", "schatten:3", "wnum"];
        for seed in 0..50 {
            let (a, _, _) = audit_sample(seed).unwrap();
            let (h, _) = a.cartesian_parts();
            for s in norms {
                let norm: NormDescriptor = s.parse().unwrap();
                let general = norm.evaluate(&h).unwrap();
                let mut buf = h.as_slice().to_vec();
                let fast = norm.evaluate_hermitian_buffer(&mut buf, h.dim()).unwrap();
                assert!((general - fast).abs() <= 1e-12 * general.max(1.0), "{s}: {general} vs {fast}");
            }
        }
    }

    #[test]
    fn audits_pass_for_declared_flags() {
        for s in ["op", "hs", "trace", "schatten:3"] {
            let audit = check_flags(&s.parse().unwrap(), 100, 7).unwrap();
            assert_eq!(audit.checked.len(), 3);
            assert!(audit.passed(), "{s}: {:?}", audit.failures);
        }
        let audit = check_flags(&NormDescriptor::WNUM, 100, 7).unwrap();
        assert_eq!(audit.checked, vec![Flag::SelfAdjoint, Flag::UnitarilyInvariant]);
        assert!(audit.passed(), "{:?}", audit.failures);
    }

    #[test]
    fn numerical_radius_is_not_submultiplicative() {
        // w(J) = 1/2 but w(J J*) = w(diag(1, 0)) = 1 > w(J) w(J*) = 1/4.
        let j = Matrix::jordan2();
        let w = NormDescriptor::WNUM;
        let lhs = w.evaluate(&j.mul(&j.adjoint()).unwrap()).unwrap();
        let rhs = w.evaluate(&j).unwrap() * w.evaluate(&j.adjoint()).unwrap();
        assert!(lhs > rhs + 0.5);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(check_flags(&NormDescriptor::OP, 0, 1).is_err());
    }
}
