//! Executable registry of norm inequalities and identities for pairs of
//! matrices.
//!
//! A check compares two real quantities, `lhs <= rhs` for a bound and
//! `lhs = rhs` for an identity, both evaluated on a pair `(B, C)` under a
//! norm `N`. Checks stated for a single operator read `T = B` and ignore `C`.
//!
//! Radius values are lower estimates of a supremum, so an apparent violation
//! is re-evaluated with doubled grids (up to `escalation_rounds` times)
//! before it is reported.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::norms::{NormDescriptor, NormFlags, NormKind};
use crate::radius::{self, RadiusOptions};
use crate::rng::SplitMix64;
use crate::sampling;

mod registry;
mod search;

pub use registry::{lookup, registry};
pub use search::{search_sharpness, Sharpness};

/// Relative slack below which a bound is violated and outside of which an
/// identity fails.
pub const VIOL_TOL: f64 = 1e-6;
/// Relative slack within which a bound counts as attained.
pub const SHARP_TOL: f64 = 1e-3;
/// Relative tolerance of the structural input predicates.
pub const INPUT_TOL: f64 = 1e-12;
/// Seed of the unitary used by checks that conjugate the inputs.
pub const UNITARY_SEED: u64 = 0x0123_4567;

/// Which inputs a check is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputTag {
    Any,
    /// Both `B` and `C` Hermitian.
    HermitianPair,
    /// Stated for one operator `T`; evaluated on `T = B`.
    SingleOperator,
    /// `C = B*`.
    PairWithAdjoint,
}

impl InputTag {
    pub fn admits(self, b: &Matrix, c: &Matrix) -> bool {
        match self {
            InputTag::Any | InputTag::SingleOperator => true,
            InputTag::HermitianPair => b.is_hermitian(INPUT_TOL) && c.is_hermitian(INPUT_TOL),
            InputTag::PairWithAdjoint => match c.sub(&b.adjoint()) {
                Ok(d) => d.frobenius_norm() <= INPUT_TOL * b.frobenius_norm().max(1.0),
                Err(_) => false,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs`
    Bound,
    /// `lhs = rhs`
    Identity,
}

pub type Side = Box<dyn Fn(&mut Evaluator<'_>) -> Result<f64> + Send + Sync>;

pub struct InequalityCheck {
    pub id: &'static str,
    /// The relation in plain notation.
    pub description: &'static str,
    /// Where the statement comes from, in words.
    pub origin: &'static str,
    pub requires_flags: NormFlags,
    pub requires_inputs: InputTag,
    /// Restricts the check to one norm, e.g. statements about the operator
    /// norm only.
    pub requires_norm: Option<NormKind>,
    pub relation: Relation,
    lhs: Side,
    rhs: Side,
}

impl fmt::Debug for InequalityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InequalityCheck")
            .field("id", &self.id)
            .field("description", &self.description)
            .field("requires_flags", &self.requires_flags)
            .field("requires_inputs", &self.requires_inputs)
            .field("requires_norm", &self.requires_norm)
            .field("relation", &self.relation)
            .finish_non_exhaustive()
    }
}

impl InequalityCheck {
    /// Whether the norm flags, the norm restriction and the input predicate
    /// all hold.
    pub fn applies(&self, b: &Matrix, c: &Matrix, norm: &NormDescriptor) -> bool {
        let norm_ok = match self.requires_norm {
            Some(kind) => norm.kind() == kind,
            None => true,
        };
        norm_ok && norm.flags().satisfies(&self.requires_flags) && self.requires_inputs.admits(b, c)
    }

    /// `(lhs, rhs)` at the evaluator's current grid level.
    pub fn sides(&self, ev: &mut Evaluator<'_>) -> Result<(f64, f64)> {
        Ok(((self.lhs)(ev)?, (self.rhs)(ev)?))
    }

    /// Status of a finite `(lhs, rhs)` pair.
    pub fn classify(&self, lhs: f64, rhs: f64) -> Status {
        let slack = rhs - lhs;
        let scale = rhs.abs().max(1.0);
        match self.relation {
            Relation::Identity if slack.abs() <= VIOL_TOL * scale => Status::Sharp,
            Relation::Identity => Status::Violation,
            Relation::Bound if slack < -VIOL_TOL * scale => Status::Violation,
            Relation::Bound if slack.abs() <= SHARP_TOL * scale => Status::Sharp,
            Relation::Bound => Status::Pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    Sharp,
    Skipped,
    /// An evaluator failed; the message is in `detail`.
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::Sharp => "sharp",
            Status::Skipped => "skipped",
            Status::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    #[serde(rename = "check")]
    pub check_id: String,
    pub norm: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `rhs - lhs`
    pub slack: Option<f64>,
    pub status: Status,
    pub escalations_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    /// `slack / max(1, |rhs|)`.
    pub fn relative_slack(&self) -> Option<f64> {
        Some(self.slack? / self.rhs?.abs().max(1.0))
    }
}

/// Lazily computed, cached quantities for one `(B, C, N)`. Values are keyed
/// by a label and by the grid escalation level they were computed at.
pub struct Evaluator<'a> {
    b: &'a Matrix,
    c: &'a Matrix,
    norm: NormDescriptor,
    base: RadiusOptions,
    level: usize,
    unitary: Option<Matrix>,
    cache: HashMap<(usize, String), f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(b: &'a Matrix, c: &'a Matrix, norm: &NormDescriptor, opts: &RadiusOptions) -> Result<Self> {
        if b.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                left: b.dim(),
                right: c.dim(),
            });
        }
        opts.validate()?;
        Ok(Self {
            b,
            c,
            norm: *norm,
            base: *opts,
            level: 0,
            unitary: None,
            cache: HashMap::new(),
        })
    }

    /// Uses `u` instead of the seeded unitary in conjugation checks.
    pub fn with_unitary(mut self, u: Matrix) -> Result<Self> {
        if u.dim() != self.b.dim() {
            return Err(Error::DimensionMismatch {
                left: self.b.dim(),
                right: u.dim(),
            });
        }
        self.unitary = Some(u);
        Ok(self)
    }

    pub fn b(&self) -> &Matrix {
        self.b
    }

    pub fn c(&self) -> &Matrix {
        self.c
    }

    pub fn norm(&self) -> &NormDescriptor {
        &self.norm
    }

    /// Grid options at the current escalation level.
    pub fn opts(&self) -> RadiusOptions {
        self.base.escalated(self.level)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn set_level(&mut self, level: usize) {
        self.level = level;
    }

    pub fn unitary(&mut self) -> Result<Matrix> {
        if self.unitary.is_none() {
            let n = self.b.dim();
            let mut rng = SplitMix64::from_key(&[UNITARY_SEED, n as u64]);
            self.unitary = Some(sampling::unitary(n, &mut rng)?);
        }
        Ok(self.unitary.clone().expect("set above"))
    }

    fn cached(&mut self, key: &str, compute: impl FnOnce(&mut Self) -> Result<f64>) -> Result<f64> {
        let k = (self.level, key.to_string());
        if let Some(&v) = self.cache.get(&k) {
            return Ok(v);
        }
        let v = compute(self)?;
        self.cache.insert(k, v);
        Ok(v)
    }

    /// `N(X)` with `X` built from the inputs.
    pub fn n(&mut self, key: &str, build: impl FnOnce(&Self) -> Result<Matrix>) -> Result<f64> {
        self.cached(&format!("N:{key}"), |ev| {
            let x = build(ev)?;
            ev.norm.evaluate(&x)
        })
    }

    /// `w_N(X)`.
    pub fn w(&mut self, key: &str, build: impl FnOnce(&Self) -> Result<Matrix>) -> Result<f64> {
        self.cached(&format!("w:{key}"), |ev| {
            let x = build(ev)?;
            Ok(radius::w_n(&x, &ev.norm, &ev.opts())?.value)
        })
    }

    /// `w_(N,e)(X, Y)`.
    pub fn w_e(&mut self, key: &str, build: impl FnOnce(&mut Self) -> Result<(Matrix, Matrix)>) -> Result<f64> {
        self.cached(&format!("we:{key}"), |ev| {
            let (x, y) = build(ev)?;
            Ok(radius::w_ne(&x, &y, &ev.norm, &ev.opts())?.value)
        })
    }

    /// `w_(N,e)(B, C)` through the `(α, β)` evaluation path.
    pub fn w_e_alpha_beta(&mut self) -> Result<f64> {
        self.cached("we_ab:B,C", |ev| {
            Ok(radius::w_ne_alpha_beta(ev.b, ev.c, &ev.norm, &ev.opts())?.value)
        })
    }
}

/// Evaluates `check` on a prepared evaluator, escalating on apparent
/// violations.
pub fn evaluate_check(check: &InequalityCheck, ev: &mut Evaluator<'_>) -> Verdict {
    let mut verdict = Verdict {
        check_id: check.id.to_string(),
        norm: ev.norm.id(),
        lhs: None,
        rhs: None,
        slack: None,
        status: Status::Skipped,
        escalations_used: 0,
        detail: None,
    };
    if !check.applies(ev.b, ev.c, &ev.norm) {
        return verdict;
    }
    let rounds = ev.base.escalation_rounds;
    for level in 0..=rounds {
        ev.set_level(level);
        let outcome = check.sides(ev);
        verdict.escalations_used = level;
        match outcome {
            Err(e) => {
                verdict.status = Status::Error;
                verdict.detail = Some(e.to_string());
                break;
            }
            Ok((lhs, rhs)) => {
                verdict.lhs = Some(lhs);
                verdict.rhs = Some(rhs);
                verdict.slack = Some(rhs - lhs);
                verdict.status = if lhs.is_finite() && rhs.is_finite() {
                    check.classify(lhs, rhs)
                } else {
                    verdict.detail = Some("non-finite side".into());
                    Status::Error
                };
                if verdict.status != Status::Violation {
                    break;
                }
            }
        }
    }
    ev.set_level(0);
    verdict
}

/// One check on one input pair and norm.
pub fn run_check(
    check: &InequalityCheck,
    b: &Matrix,
    c: &Matrix,
    norm: &NormDescriptor,
    opts: &RadiusOptions,
) -> Result<Verdict> {
    let mut ev = Evaluator::new(b, c, norm, opts)?;
    Ok(evaluate_check(check, &mut ev))
}

/// Every registry check against every norm, in registry order and then norm
/// order. Inapplicable checks produce `skipped` verdicts.
pub fn run_suite(b: &Matrix, c: &Matrix, norms: &[NormDescriptor], opts: &RadiusOptions) -> Result<Vec<Verdict>> {
    let mut evaluators = norms
        .iter()
        .map(|norm| Evaluator::new(b, c, norm, opts))
        .collect::<Result<Vec<_>>>()?;
    let checks = registry();
    let mut out = Vec::with_capacity(checks.len() * norms.len());
    for check in checks {
        for ev in &mut evaluators {
            out.push(evaluate_check(check, ev));
        }
    }
    Ok(out)
}

/// True when any verdict is a violation.
pub fn has_violation(verdicts: &[Verdict]) -> bool {
    verdicts.iter().any(|v| v.status == Status::Violation)
}
