//! Variational radii.
//!
//! * `w_N(T) = sup_θ N(Re(e^{iθ} T))`
//! * `w_(N,e)(B, C) = sup_{|λ1|²+|λ2|² ≤ 1} w_N(λ1 B + λ2 C)`
//!
//! The pair supremum is taken over the unit sphere (the objective is
//! homogeneous) with `λ1 = cos t` real and `λ2 = sin t · e^{iφ}`: a common
//! phase of `(λ1, λ2)` is absorbed by `θ`. Writing `P_X(ψ) = Re(e^{iψ} X)`,
//! the objective becomes `N(cos t · P_B(θ) + sin t · P_C(θ + φ))`, a norm of
//! a real-linear combination of the four Hermitian matrices
//! `Re B, Im B, Re C, Im C`.
//!
//! Every search evaluates a grid and then polishes the best grid-local maxima
//! with golden-section steps. Pair searches finish with a gradient ascent on
//! the coefficient sphere. All returned values are attained by some argument,
//! so they are lower estimates of the true supremum.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::norms::NormDescriptor;
use crate::rng::SplitMix64;
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadiusOptions {
    /// θ samples over `[0, π)`.
    pub theta_grid: usize,
    /// t samples over `[0, π/2]`, endpoints included.
    pub t_grid: usize,
    /// φ samples over `[0, 2π)`.
    pub phi_grid: usize,
    /// Minimum number of coordinate refinement rounds.
    pub refine_passes: usize,
    /// Golden-section stops once the bracket is narrower than this.
    pub refine_tol: f64,
    /// How many times a caller may double the grids before trusting a result.
    pub escalation_rounds: usize,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            theta_grid: 512,
            t_grid: 129,
            phi_grid: 256,
            refine_passes: 3,
            refine_tol: 1e-9,
            escalation_rounds: 2,
        }
    }
}

/// Upper limit on refinement rounds; rounds continue past `refine_passes`
/// while the point still moves by more than `refine_tol`.
const MAX_REFINE_ROUNDS: usize = 60;

/// Relative gain below which a refinement round counts as stalled.
const STALL_REL: f64 = 1e-15;

impl RadiusOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("theta_grid", self.theta_grid),
            ("t_grid", self.t_grid),
            ("phi_grid", self.phi_grid),
        ] {
            if value < 8 {
                return Err(Error::InvalidOptions(format!("{name} must be at least 8, got {value}")));
            }
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "refine_tol must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }

    /// All grids doubled. The t grid maps `m` points to `2m - 1` so the old
    /// points stay on the new grid.
    pub fn doubled(&self) -> Self {
        Self {
            theta_grid: self.theta_grid * 2,
            t_grid: self.t_grid * 2 - 1,
            phi_grid: self.phi_grid * 2,
            ..*self
        }
    }

    /// Grids doubled `rounds` times.
    pub fn escalated(&self, rounds: usize) -> Self {
        (0..rounds).fold(*self, |o, _| o.doubled())
    }

    // The pair search screens a coarse joint (t, φ, θ) grid whose spacing is
    // tied to the configured grids, then refines.
    fn screen_t(&self) -> usize {
        ((self.t_grid - 1) / 16).max(4) + 1
    }

    fn screen_phi(&self) -> usize {
        (self.phi_grid / 16).max(8)
    }

    fn screen_theta(&self) -> usize {
        (self.theta_grid / 32).max(8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Argmax {
    /// In `[0, π)`.
    pub theta: f64,
    /// In `[0, π/2]`.
    pub t: f64,
    /// In `[0, 2π)`.
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub value: f64,
    pub argmax: Argmax,
    #[serde(skip)]
    pub refined: bool,
    pub escalations_used: usize,
}

// ---------------------------------------------------------------------------
// Search machinery

#[derive(Clone, Copy)]
enum Axis {
    /// `count` points over one period `[0, period)`.
    Periodic { period: f64, count: usize },
    /// `count` points over `[lo, hi]`, endpoints included.
    Closed { lo: f64, hi: f64, count: usize },
}

impl Axis {
    fn count(&self) -> usize {
        match *self {
            Axis::Periodic { count, .. } | Axis::Closed { count, .. } => count,
        }
    }

    fn point(&self, k: usize) -> f64 {
        match *self {
            Axis::Periodic { period, count } => period * k as f64 / count as f64,
            Axis::Closed { lo, hi, count } => lo + (hi - lo) * k as f64 / (count - 1) as f64,
        }
    }

    fn spacing(&self) -> f64 {
        match *self {
            Axis::Periodic { period, count } => period / count as f64,
            Axis::Closed { lo, hi, count } => (hi - lo) / (count - 1) as f64,
        }
    }

    fn clamp(&self, x: f64) -> f64 {
        match *self {
            Axis::Periodic { .. } => x,
            Axis::Closed { lo, hi, .. } => x.clamp(lo, hi),
        }
    }

    fn neighbours(&self, k: usize) -> [Option<usize>; 2] {
        let m = self.count();
        match self {
            Axis::Periodic { .. } => [Some((k + m - 1) % m), Some((k + 1) % m)],
            Axis::Closed { .. } => [k.checked_sub(1), (k + 1 < m).then_some(k + 1)],
        }
    }
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization on `[lo, hi]`. `best` is the incumbent and is
/// returned unless a strictly better point is found.
fn golden_max<F>(f: &mut F, lo: f64, hi: f64, tol: f64, best: (f64, f64)) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut best = best;
    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2)?;
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

struct SearchOutcome {
    point: Vec<f64>,
    value: f64,
}

/// Grid over the product of `axes`, then coordinate-wise golden refinement
/// from the `starts` best grid-local maxima. Ties keep the first point in
/// lexicographic grid order.
fn maximize<F>(axes: &[Axis], starts: usize, opts: &RadiusOptions, f: F) -> Result<SearchOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let candidates = refined_candidates(axes, starts, opts, MAX_REFINE_ROUNDS, f)?;
    Ok(best_of(candidates))
}

fn best_of(candidates: Vec<SearchOutcome>) -> SearchOutcome {
    let mut it = candidates.into_iter();
    let first = it.next().expect("at least one candidate");
    it.fold(first, |best, c| if c.value > best.value { c } else { best })
}

/// The grid stage and golden refinement of [`maximize`], returning every
/// refined start, best grid point first. At most `max_rounds` rounds per start.
fn refined_candidates<F>(
    axes: &[Axis],
    starts: usize,
    opts: &RadiusOptions,
    max_rounds: usize,
    mut f: F,
) -> Result<Vec<SearchOutcome>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dims = axes.len();
    let counts: Vec<usize> = axes.iter().map(Axis::count).collect();
    let total: usize = counts.iter().product();

    let index_of = |idx: &[usize]| idx.iter().zip(&counts).fold(0, |acc, (&i, &m)| acc * m + i);
    let unravel = |mut flat: usize| {
        let mut idx = vec![0; dims];
        for d in (0..dims).rev() {
            idx[d] = flat % counts[d];
            flat /= counts[d];
        }
        idx
    };
    let coords = |idx: &[usize]| -> Vec<f64> { idx.iter().zip(axes).map(|(&i, a)| a.point(i)).collect() };

    let mut values = Vec::with_capacity(total);
    for flat in 0..total {
        values.push(f(&coords(&unravel(flat)))?);
    }

    let mut local_maxima: Vec<usize> = (0..total)
        .filter(|&flat| {
            let idx = unravel(flat);
            let v = values[flat];
            (0..dims).all(|d| {
                axes[d].neighbours(idx[d]).iter().flatten().all(|&nb| {
                    let mut other = idx.clone();
                    other[d] = nb;
                    values[index_of(&other)] <= v
                })
            })
        })
        .collect();
    // Stable sort keeps grid order among ties.
    local_maxima.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut chosen: Vec<usize> = Vec::new();
    for flat in local_maxima {
        if chosen.len() == starts {
            break;
        }
        if chosen.iter().any(|&c| values[c] == values[flat]) {
            continue;
        }
        chosen.push(flat);
    }
    if chosen.is_empty() {
        // A constant objective has every point as a local maximum.
        chosen.push(0);
    }

    if opts.refine_passes == 0 {
        let best = chosen[0];
        return Ok(vec![SearchOutcome {
            point: coords(&unravel(best)),
            value: values[best],
        }]);
    }

    let brackets: Vec<f64> = axes.iter().map(Axis::spacing).collect();
    let mut out = Vec::with_capacity(chosen.len());
    for start in chosen {
        let mut x = coords(&unravel(start));
        let mut v = values[start];
        for round in 0..max_rounds.max(opts.refine_passes) {
            let round_start = x.clone();
            let v_start = v;
            for d in 0..dims {
                let lo = axes[d].clamp(x[d] - brackets[d]);
                let hi = axes[d].clamp(x[d] + brackets[d]);
                let mut probe = x.clone();
                let mut line = |s: f64| {
                    probe[d] = s;
                    f(&probe)
                };
                let (xd, vd) = golden_max(&mut line, lo, hi, opts.refine_tol, (x[d], v))?;
                x[d] = xd;
                v = vd;
            }
            // Extrapolate along the net move of this round to follow ridges
            // that are not aligned with the coordinates.
            let dir: Vec<f64> = x.iter().zip(&round_start).map(|(a, b)| a - b).collect();
            let len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            if dims > 1 && len > opts.refine_tol {
                let mut probe = x.clone();
                let mut line = |s: f64| {
                    for d in 0..dims {
                        probe[d] = axes[d].clamp(round_start[d] + s * dir[d]);
                    }
                    f(&probe)
                };
                let (s, vs) = golden_max(&mut line, 0.0, 3.0, opts.refine_tol / len, (1.0, v))?;
                if vs > v {
                    for d in 0..dims {
                        x[d] = axes[d].clamp(round_start[d] + s * dir[d]);
                    }
                    v = vs;
                }
            }
            let stalled = len <= opts.refine_tol || v - v_start <= STALL_REL * v.abs().max(1.0);
            if round + 1 >= opts.refine_passes && stalled {
                break;
            }
        }
        out.push(SearchOutcome { point: x, value: v });
    }
    Ok(out)
}

fn canonical_theta(theta: f64) -> f64 {
    let th = theta.rem_euclid(PI);
    if th >= PI {
        0.0
    } else {
        th
    }
}

fn canonical_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

// ---------------------------------------------------------------------------
// Single operator

fn theta_axis(opts: &RadiusOptions) -> Axis {
    Axis::Periodic {
        period: PI,
        count: opts.theta_grid,
    }
}

/// Generalized numerical radius `w_N(T) = sup_θ N(Re(e^{iθ} T))`.
///
/// The θ search runs over `[0, π)` since `Re(e^{i(θ+π)} T) = -Re(e^{iθ} T)`.
pub fn w_n(t: &Matrix, norm: &NormDescriptor, opts: &RadiusOptions) -> Result<RadiusResult> {
    opts.validate()?;
    let n = t.dim();
    let (re, im) = t.cartesian_parts();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n * n];
    let objective = |x: &[f64]| {
        let (s, c) = x[0].sin_cos();
        for ((out, r), i) in scratch.iter_mut().zip(re.as_slice()).zip(im.as_slice()) {
            *out = r * c - i * s;
        }
        norm.evaluate_hermitian_buffer(&mut scratch, n)
    };
    let found = maximize(&[theta_axis(opts)], 3, opts, objective)?;
    Ok(RadiusResult {
        value: found.value,
        argmax: Argmax {
            theta: canonical_theta(found.point[0]),
            t: 0.0,
            phi: 0.0,
        },
        refined: opts.refine_passes > 0,
        escalations_used: 0,
    })
}

// ---------------------------------------------------------------------------
// Pairs

fn check_pair(b: &Matrix, c: &Matrix) -> Result<()> {
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            left: b.dim(),
            right: c.dim(),
        });
    }
    Ok(())
}

fn pair_axes(opts: &RadiusOptions) -> [Axis; 3] {
    [
        Axis::Closed {
            lo: 0.0,
            hi: FRAC_PI_2,
            count: opts.screen_t(),
        },
        Axis::Periodic {
            period: TAU,
            count: opts.screen_phi(),
        },
        Axis::Periodic {
            period: PI,
            count: opts.screen_theta(),
        },
    ]
}

fn pair_result(found: SearchOutcome, opts: &RadiusOptions) -> RadiusResult {
    let t = found.point[0].clamp(0.0, FRAC_PI_2);
    // The objective is invariant under θ -> θ + π, and φ is meaningless at t = 0.
    let theta = canonical_theta(found.point[2]);
    let phi = if t == 0.0 { 0.0 } else { canonical_phi(found.point[1]) };
    RadiusResult {
        value: found.value,
        argmax: Argmax { theta, t, phi },
        refined: opts.refine_passes > 0,
        escalations_used: 0,
    }
}

/// Coefficients `u` of `u0 Re B + u1 Im B + u2 Re C + u3 Im C` at `(t, φ, θ)`.
fn sphere_point(x: &[f64]) -> [f64; 4] {
    let (st, ct) = x[0].sin_cos();
    let (s1, c1) = x[2].sin_cos();
    let (s2, c2) = (x[2] + x[1]).sin_cos();
    [ct * c1, -ct * s1, st * c2, -st * s2]
}

/// Inverse of [`sphere_point`]: `cos t e^{iθ} = u0 - i u1` and
/// `sin t e^{i(θ+φ)} = u2 - i u3`.
fn sphere_angles(u: &[f64; 4]) -> Vec<f64> {
    let first = Complex64::new(u[0], -u[1]);
    let second = Complex64::new(u[2], -u[3]);
    let t = second.norm().atan2(first.norm());
    let theta = first.arg();
    vec![t, second.arg() - theta, theta]
}

/// Cap on ascent steps from one start.
const MAX_ASCENT_STEPS: usize = 2000;
const MAX_OVERRELAX: f64 = 1024.0;

/// The four Hermitian parts `Re B, Im B, Re C, Im C` and the norm, with
/// scratch space for sphere ascent.
struct PairParts<'a> {
    n: usize,
    parts: [Matrix; 4],
    norm: &'a NormDescriptor,
    buf: Vec<Complex64>,
}

impl<'a> PairParts<'a> {
    fn new(b: &Matrix, c: &Matrix, norm: &'a NormDescriptor) -> Self {
        let n = b.dim();
        let (rb, ib) = b.cartesian_parts();
        let (rc, ic) = c.cartesian_parts();
        Self {
            n,
            parts: [rb, ib, rc, ic],
            norm,
            buf: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    fn fill(&mut self, u: &[f64; 4]) {
        let [p0, p1, p2, p3] = &self.parts;
        for (k, out) in self.buf.iter_mut().enumerate() {
            *out = p0.as_slice()[k] * u[0]
                + p1.as_slice()[k] * u[1]
                + p2.as_slice()[k] * u[2]
                + p3.as_slice()[k] * u[3];
        }
    }

    fn value(&mut self, u: &[f64; 4]) -> Result<f64> {
        self.fill(u);
        self.norm.evaluate_hermitian_buffer(&mut self.buf, self.n)
    }

    /// `f(u)` and its gradient, `∂f/∂u_k = Re tr(G H_k)` with `G` the
    /// gradient of `N` at the current Hermitian matrix.
    fn value_and_gradient(&mut self, u: &[f64; 4]) -> Result<(f64, [f64; 4])> {
        let n = self.n;
        self.fill(u);
        let vecs = spectral::hermitian_eigen_buffer(&mut self.buf, n)?;
        let eig: Vec<f64> = (0..n).map(|i| self.buf[i * n + i].re).collect();
        let weights = self.norm.hermitian_gradient_weights(&eig);
        let mut grad = [0.0; 4];
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (r, z) in column.iter_mut().enumerate() {
                *z = vecs[r * n + i];
            }
            for (g, h) in grad.iter_mut().zip(&self.parts) {
                *g += w * quadratic_form(h, &column).re;
            }
        }
        let value = self.norm.evaluate_hermitian_buffer(&mut self.buf, n)?;
        Ok((value, grad))
    }

    /// Fixed-point ascent `u <- ∇f(u) / |∇f(u)|` on the unit sphere.
    /// `f` is a seminorm in `u`, so `f(u) = <∇f(u), u>` and by convexity
    /// `f(∇f/|∇f|) >= |∇f| >= f(u)`: no step decreases the value.
    fn ascend(&mut self, start: [f64; 4]) -> Result<([f64; 4], f64)> {
        let mut u = start;
        let mut v = self.value(&u)?;
        for _ in 0..MAX_ASCENT_STEPS {
            let (_, g) = self.value_and_gradient(&u)?;
            let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len == 0.0 || !len.is_finite() {
                break;
            }
            let mut next = g.map(|x| x / len);
            let mut vn = self.value(&next)?;
            if vn <= v {
                break;
            }
            // Over-relax along the step while that still gains; plain steps
            // crawl when the top of the objective is nearly flat.
            let step: [f64; 4] = std::array::from_fn(|k| next[k] - u[k]);
            let mut s = 2.0;
            while s <= MAX_OVERRELAX {
                let mut trial: [f64; 4] = std::array::from_fn(|k| u[k] + s * step[k]);
                let tl = trial.iter().map(|x| x * x).sum::<f64>().sqrt();
                trial.iter_mut().for_each(|x| *x /= tl);
                let vt = self.value(&trial)?;
                if vt <= vn {
                    break;
                }
                next = trial;
                vn = vt;
                s *= 2.0;
            }
            u = next;
            let gain = vn - v;
            v = vn;
            if gain <= ASCENT_TOL * v && len - v <= ASCENT_TOL * v {
                break;
            }
        }
        Ok((u, v))
    }
}

/// Relative gain below which sphere ascent stops.
const ASCENT_TOL: f64 = 1e-14;

/// Refines the pair candidates by sphere ascent and scores the polished
/// points with `objective`, the caller's own evaluation path.
fn polish_pair<F>(
    b: &Matrix,
    c: &Matrix,
    norm: &NormDescriptor,
    candidates: Vec<SearchOutcome>,
    mut objective: F,
) -> Result<SearchOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut parts = PairParts::new(b, c, norm);
    let mut polished = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let (u, _) = parts.ascend(sphere_point(&cand.point))?;
        let point = sphere_angles(&u);
        let value = objective(&point)?;
        polished.push(if value > cand.value {
            SearchOutcome { point, value }
        } else {
            cand
        });
    }
    Ok(best_of(polished))
}

/// Generalized Euclidean operator radius `w_(N,e)(B, C)`.
pub fn w_ne(b: &Matrix, c: &Matrix, norm: &NormDescriptor, opts: &RadiusOptions) -> Result<RadiusResult> {
    check_pair(b, c)?;
    opts.validate()?;
    let n = b.dim();
    let (rb, ib) = b.cartesian_parts();
    let (rc, ic) = c.cartesian_parts();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n * n];
    let mut objective = |x: &[f64]| {
        let [a1, a2, a3, a4] = sphere_point(x);
        for (k, out) in scratch.iter_mut().enumerate() {
            *out = rb.as_slice()[k] * a1
                + ib.as_slice()[k] * a2
                + rc.as_slice()[k] * a3
                + ic.as_slice()[k] * a4;
        }
        norm.evaluate_hermitian_buffer(&mut scratch, n)
    };
    let candidates = refined_candidates(&pair_axes(opts), 4, opts, opts.refine_passes, &mut objective)?;
    let found = polish_pair(b, c, norm, candidates, objective)?;
    Ok(pair_result(found, opts))
}

/// `w_(N,e)(B, C)` through the `(α, β)` form
/// `sup N(α Re(λ1 B + λ2 C) + β Im(λ1 B + λ2 C))`, `α² + β² = 1`,
/// with `α = cos θ`, `β = -sin θ`. Same value as [`w_ne`], reached through a
/// different evaluation path.
pub fn w_ne_alpha_beta(
    b: &Matrix,
    c: &Matrix,
    norm: &NormDescriptor,
    opts: &RadiusOptions,
) -> Result<RadiusResult> {
    check_pair(b, c)?;
    opts.validate()?;
    let n = b.dim();
    let mut x_buf = vec![Complex64::new(0.0, 0.0); n * n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n * n];
    let mut objective = |x: &[f64]| {
        let lambda1 = Complex64::new(x[0].cos(), 0.0);
        let lambda2 = Complex64::from_polar(x[0].sin(), x[1]);
        let alpha = x[2].cos();
        let beta = -x[2].sin();
        for (k, out) in x_buf.iter_mut().enumerate() {
            *out = lambda1 * b.as_slice()[k] + lambda2 * c.as_slice()[k];
        }
        for i in 0..n {
            for j in 0..n {
                let a = x_buf[i * n + j];
                let at = x_buf[j * n + i].conj();
                let re = (a + at) * 0.5;
                let d = (a - at) * 0.5;
                let im = Complex64::new(d.im, -d.re);
                scratch[i * n + j] = re * alpha + im * beta;
            }
        }
        norm.evaluate_hermitian_buffer(&mut scratch, n)
    };
    let candidates = refined_candidates(&pair_axes(opts), 4, opts, opts.refine_passes, &mut objective)?;
    let found = polish_pair(b, c, norm, candidates, objective)?;
    Ok(pair_result(found, opts))
}

/// Closed form of the Hilbert-Schmidt numerical radius,
/// `sqrt(||T||₂²/2 + |tr T²|/2)`.
pub fn w2_closed_form(t: &Matrix) -> f64 {
    let fro = t.frobenius_norm();
    let tr_sq = t.trace_of_product(t).expect("same matrix").norm();
    (0.5 * fro * fro + 0.5 * tr_sq).sqrt()
}

/// `w_(2,e)(B, C)` as the maximum of [`w2_closed_form`]`(λ1 B + λ2 C)` over
/// the `(t, φ)` sphere; θ is resolved analytically.
///
/// The `(t, φ)` chart is degenerate at `t = 0` and `t = π/2`, where
/// coordinate refinement cannot pick a direction. The search is repeated in
/// a second chart rotated by `(λ1, λ2) -> ((λ1 + λ2)/√2, (λ1 - λ2)/√2)`,
/// whose poles lie elsewhere, and the better result is kept.
pub fn w2e_reduced(b: &Matrix, c: &Matrix, opts: &RadiusOptions) -> Result<RadiusResult> {
    check_pair(b, c)?;
    opts.validate()?;
    let n = b.dim();
    let combine = |l1: Complex64, l2: Complex64| {
        let data = b
            .as_slice()
            .iter()
            .zip(c.as_slice())
            .map(|(p, q)| l1 * p + l2 * q)
            .collect();
        Matrix::from_parts_unchecked(n, data)
    };
    let chart = |x: &[f64], rotated: bool| {
        let l1 = Complex64::new(x[0].cos(), 0.0);
        let l2 = Complex64::from_polar(x[0].sin(), x[1]);
        if rotated {
            ((l1 + l2) * FRAC_1_SQRT_2, (l1 - l2) * FRAC_1_SQRT_2)
        } else {
            (l1, l2)
        }
    };
    let axes = [
        Axis::Closed {
            lo: 0.0,
            hi: FRAC_PI_2,
            count: opts.t_grid,
        },
        Axis::Periodic {
            period: TAU,
            count: opts.phi_grid,
        },
    ];
    let mut best: Option<(f64, Complex64, Complex64)> = None;
    for rotated in [false, true] {
        let found = maximize(&axes, 3, opts, |x| {
            let (l1, l2) = chart(x, rotated);
            Ok(w2_closed_form(&combine(l1, l2)))
        })?;
        if best.is_none_or(|(v, ..)| found.value > v) {
            let (l1, l2) = chart(&found.point, rotated);
            best = Some((found.value, l1, l2));
        }
    }
    let (value, l1, l2) = best.expect("two charts searched");
    // Remove the common phase so λ1 is real and nonnegative.
    let t = l2.norm().atan2(l1.norm()).clamp(0.0, FRAC_PI_2);
    let phi = if t == 0.0 || l2.norm() == 0.0 {
        0.0
    } else {
        canonical_phi(l2.arg() - if l1.norm() == 0.0 { 0.0 } else { l1.arg() })
    };
    let x = combine(Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), phi));
    // Re(e^{2iθ} tr X²) is largest when 2θ = -arg tr X².
    let tr_sq = x.trace_of_product(&x)?;
    let theta = canonical_theta(-0.5 * tr_sq.arg());
    Ok(RadiusResult {
        value,
        argmax: Argmax { theta, t, phi },
        refined: opts.refine_passes > 0,
        escalations_used: 0,
    })
}

// ---------------------------------------------------------------------------
// Unit-vector oracle

/// Number of best random candidates that get polished.
const ORACLE_RESTARTS: usize = 64;

fn quadratic_form(m: &Matrix, x: &[Complex64]) -> Complex64 {
    let n = m.dim();
    m.as_slice()
        .chunks_exact(n)
        .zip(x)
        .map(|(row, xi)| xi.conj() * row.iter().zip(x).map(|(a, xj)| a * xj).sum::<Complex64>())
        .sum()
}

fn normalize(x: &mut [Complex64]) {
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.iter_mut().for_each(|z| *z /= nrm);
}

/// Lower estimate of the Euclidean operator radius
/// `w_e(B, C) = sup_{||x|| = 1} sqrt(|<Bx, x>|² + |<Cx, x>|²)`
/// from random unit vectors followed by perturbation hill-climbing.
///
/// With `C = 0` this estimates the classical numerical radius of `B`.
pub fn w_e_vector_oracle(b: &Matrix, c: &Matrix, samples: usize, seed: u64, polish_iters: usize) -> Result<f64> {
    check_pair(b, c)?;
    if samples == 0 {
        return Err(Error::InvalidOptions("oracle needs at least one sample".into()));
    }
    let n = b.dim();
    let value = |x: &[Complex64]| quadratic_form(b, x).norm().hypot(quadratic_form(c, x).norm());
    let mut rng = SplitMix64::from_key(&[seed, 0x0AC1E]);

    let mut pool: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut x: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
        normalize(&mut x);
        pool.push((value(&x), x));
    }
    pool.sort_by(|a, b| b.0.total_cmp(&a.0));
    pool.truncate(ORACLE_RESTARTS);

    let mut best = pool[0].0;
    for (mut v, mut x) in pool {
        let mut sigma = 0.1;
        let mut trial = vec![Complex64::new(0.0, 0.0); n];
        for _ in 0..polish_iters {
            for (t, xi) in trial.iter_mut().zip(&x) {
                *t = xi + rng.complex_normal() * sigma;
            }
            normalize(&mut trial);
            let vt = value(&trial);
            if vt > v {
                v = vt;
                x.copy_from_slice(&trial);
                sigma = (sigma * 2.0).min(1.0);
            } else {
                sigma *= 0.5;
                if sigma < 1e-12 {
                    sigma = 1e-3;
                }
            }
        }
        best = best.max(v);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn opts() -> RadiusOptions {
        RadiusOptions::default()
    }

    #[test]
    fn options_validation_and_doubling() {
        assert!(opts().validate().is_ok());
        let bad = RadiusOptions {
            theta_grid: 4,
            ..opts()
        };
        assert!(bad.validate().is_err());
        let bad = RadiusOptions {
            refine_tol: 0.0,
            ..opts()
        };
        assert!(bad.validate().is_err());
        let d = opts().doubled();
        assert_eq!((d.theta_grid, d.t_grid, d.phi_grid), (1024, 257, 512));
        assert_eq!(opts().escalated(2), d.doubled());
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let mut f = |x: f64| Ok(-(x - 0.3) * (x - 0.3));
        let (x, v) = golden_max(&mut f, 0.0, 1.0, 1e-10, (0.0, -0.09)).unwrap();
        assert!((x - 0.3).abs() < 1e-9 && v <= 0.0);
    }

    #[test]
    fn w_n_jordan_block() {
        let j = Matrix::jordan2();
        let r = w_n(&j, &NormDescriptor::OP, &opts()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        let r = w_n(&j, &NormDescriptor::HS, &opts()).unwrap();
        assert!((r.value - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((0.0..PI).contains(&r.argmax.theta));
    }

    #[test]
    fn w_n_normal_matrix() {
        let d = Matrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let r = w_n(&d, &NormDescriptor::OP, &opts()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn w_ne_jordan_pairs() {
        let j = Matrix::jordan2();
        let js = j.adjoint();
        let r = w_ne(&j, &j, &NormDescriptor::OP, &opts()).unwrap();
        assert!((r.value - FRAC_1_SQRT_2).abs() < 1e-9, "{}", r.value);
        let r = w_ne(&j, &js, &NormDescriptor::HS, &opts()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
        assert!((0.0..=FRAC_PI_2).contains(&r.argmax.t));
        assert!((0.0..TAU).contains(&r.argmax.phi));
        assert!((0.0..PI).contains(&r.argmax.theta));
    }

    #[test]
    fn w_ne_with_zero_second_operator() {
        let b = Matrix::from_rows(&[[c(1.0, 0.5), c(-2.0, 0.0)], [c(0.3, 0.0), c(0.0, -1.0)]]).unwrap();
        let z = Matrix::zeros(2).unwrap();
        for norm in [NormDescriptor::OP, NormDescriptor::HS, NormDescriptor::TRACE] {
            let single = w_n(&b, &norm, &opts()).unwrap().value;
            let pair = w_ne(&b, &z, &norm, &opts()).unwrap().value;
            assert!((single - pair).abs() <= 1e-9 * single, "{norm}: {single} vs {pair}");
        }
    }

    #[test]
    fn alpha_beta_form_agrees() {
        let j = Matrix::jordan2();
        let js = j.adjoint();
        let a = w_ne(&j, &js, &NormDescriptor::OP, &opts()).unwrap().value;
        let b = w_ne_alpha_beta(&j, &js, &NormDescriptor::OP, &opts()).unwrap().value;
        assert!((a - b).abs() <= 1e-6 * a.max(1.0));

        let h = Matrix::from_rows(&[[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(-1.0, 0.0)]]).unwrap();
        let z = Matrix::zeros(2).unwrap();
        let op = NormDescriptor::OP.evaluate(&h).unwrap();
        let v = w_ne_alpha_beta(&h, &z, &NormDescriptor::OP, &opts()).unwrap().value;
        assert!((v - op).abs() < 1e-9);

        let v = w_ne_alpha_beta(&j, &j, &NormDescriptor::HS, &opts()).unwrap().value;
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn w2_closed_form_examples() {
        assert!((w2_closed_form(&Matrix::jordan2()) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((w2_closed_form(&Matrix::identity(2).unwrap()) - 2f64.sqrt()).abs() < 1e-15);
        let h = Matrix::from_rows(&[[c(2.0, 0.0), c(1.0, -1.0)], [c(1.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        assert!((w2_closed_form(&h) - h.frobenius_norm()).abs() < 1e-14);
    }

    #[test]
    fn w2e_reduced_examples() {
        let j = Matrix::jordan2();
        let r = w2e_reduced(&j, &j.adjoint(), &opts()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        let i2 = Matrix::identity(2).unwrap();
        let r = w2e_reduced(&i2, &Matrix::zeros(2).unwrap(), &opts()).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let j = Matrix::jordan2();
        let v = w_e_vector_oracle(&j, &j.adjoint(), 2000, 3, 200).unwrap();
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-6, "{v}");

        let h = Matrix::from_rows(&[[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(-1.0, 0.0)]]).unwrap();
        let z = Matrix::zeros(2).unwrap();
        let v = w_e_vector_oracle(&h, &z, 2000, 3, 200).unwrap();
        assert!((v - NormDescriptor::OP.evaluate(&h).unwrap()).abs() < 1e-6);

        let i2 = Matrix::identity(2).unwrap();
        let ii2 = i2.scale(c(0.0, 1.0)).unwrap();
        let v = w_e_vector_oracle(&i2, &ii2, 10, 3, 0).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pair_dimension_mismatch() {
        let a = Matrix::zeros(2).unwrap();
        let b = Matrix::zeros(3).unwrap();
        assert!(matches!(
            w_ne(&a, &b, &NormDescriptor::OP, &opts()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(w2e_reduced(&a, &b, &opts()).is_err());
        assert!(w_e_vector_oracle(&a, &b, 10, 0, 0).is_err());
        assert!(w_e_vector_oracle(&a, &a, 0, 0, 0).is_err());
    }
}
