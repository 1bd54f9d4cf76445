use num_complex::Complex64;
use serde::Serialize;

use super::{evaluate_check, lookup, Evaluator, Relation, Status, Verdict};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::norms::NormDescriptor;
use crate::radius::RadiusOptions;
use crate::rng::SplitMix64;
use crate::sampling::{self, SamplerSpec};

/// Initial perturbation size, relative to the current pair's scale.
const INITIAL_STEP: f64 = 0.25;
const MIN_STEP: f64 = 1e-9;

/// The sharpest instance found by [`search_sharpness`].
#[derive(Debug, Clone, Serialize)]
pub struct Sharpness {
    pub check_id: String,
    pub norm: String,
    pub b: Matrix,
    pub c: Matrix,
    /// Relative slack of `verdict`; absolute value for identities.
    pub min_relative_slack: f64,
    pub verdict: Verdict,
    /// Number of inputs that were scored.
    pub evaluations: usize,
}

/// Searches for inputs on which `check_id` is as tight as possible.
///
/// `family` is a family name with an optional dimension, `name[:n]`. The
/// first quarter of the `iters` evaluations are random restarts drawn from
/// the family; the rest perturb the incumbent pair entrywise with Gaussian
/// noise, halving the step after each failure. Inputs on which the check is
/// skipped or errors are ignored. The result is the best instance seen, not
/// a claim about the true infimum.
pub fn search_sharpness(
    check_id: &str,
    norm: &NormDescriptor,
    family: &str,
    iters: usize,
    seed: u64,
    opts: &RadiusOptions,
) -> Result<Sharpness> {
    let check = lookup(check_id).ok_or_else(|| Error::UnknownCheck(check_id.to_string()))?;
    let SamplerSpec { family, n, .. } = SamplerSpec::from_selector(family, 0)?;
    if iters == 0 {
        return Err(Error::InvalidOptions("search needs at least one iteration".into()));
    }
    let mut rng = SplitMix64::from_key(&[seed, family.tag(), n as u64, 0x5EA2C4]);

    let score = |b: &Matrix, c: &Matrix| -> Result<Option<(f64, Verdict)>> {
        let mut ev = Evaluator::new(b, c, norm, opts)?;
        let verdict = evaluate_check(check, &mut ev);
        if matches!(verdict.status, Status::Skipped | Status::Error) {
            return Ok(None);
        }
        let rel = verdict.relative_slack().expect("evaluated verdict has sides");
        let rel = match check.relation {
            Relation::Identity => rel.abs(),
            Relation::Bound => rel,
        };
        Ok(Some((rel, verdict)))
    };

    let restarts = (iters / 4).max(1);
    let mut best: Option<(f64, Verdict, Matrix, Matrix)> = None;
    let mut evaluations = 0;
    for _ in 0..restarts {
        let spec = SamplerSpec::new(family, n, rng.next_u64())?;
        let (b, c) = sampling::sample_pair(&spec)?;
        evaluations += 1;
        if let Some((rel, verdict)) = score(&b, &c)? {
            if best.as_ref().is_none_or(|(r, ..)| rel < *r) {
                best = Some((rel, verdict, b, c));
            }
        }
    }
    let Some((mut best_rel, mut best_verdict, mut b, mut c)) = best else {
        return Err(Error::InvalidOptions(format!(
            "check {check_id} is never applicable to {} inputs under {norm}",
            family.name()
        )));
    };

    let mut step = INITIAL_STEP;
    for _ in restarts..iters {
        let scale = b.frobenius_norm().max(c.frobenius_norm()).max(1e-12) / n as f64;
        let mut jitter = |m: &Matrix| -> Result<Matrix> {
            let data: Vec<Complex64> = m
                .as_slice()
                .iter()
                .map(|z| z + rng.complex_normal() * (step * scale))
                .collect();
            Matrix::new(n, data)
        };
        let nb = jitter(&b)?;
        let nc = jitter(&c)?;
        evaluations += 1;
        match score(&nb, &nc)? {
            Some((rel, verdict)) if rel < best_rel => {
                best_rel = rel;
                best_verdict = verdict;
                b = nb;
                c = nc;
            }
            _ => {
                step *= 0.5;
                if step < MIN_STEP {
                    step = INITIAL_STEP;
                }
            }
        }
    }

    Ok(Sharpness {
        check_id: check_id.to_string(),
        norm: norm.id(),
        b,
        c,
        min_relative_slack: best_rel,
        verdict: best_verdict,
        evaluations,
    })
}
