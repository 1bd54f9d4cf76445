use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{Evaluator, InequalityCheck, InputTag, Relation, Side};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::norms::{NormFlags, NormKind};

const SELF_ADJOINT: NormFlags = NormFlags {
    self_adjoint: true,
    algebra: false,
    unitarily_invariant: false,
};
const UNITARILY_INVARIANT: NormFlags = NormFlags {
    self_adjoint: false,
    algebra: false,
    unitarily_invariant: true,
};
const ALGEBRA_SELF_ADJOINT: NormFlags = NormFlags {
    self_adjoint: true,
    algebra: true,
    unitarily_invariant: false,
};

/// All checks, in a fixed order.
pub fn registry() -> &'static [InequalityCheck] {
    static REGISTRY: OnceLock<Vec<InequalityCheck>> = OnceLock::new();
    REGISTRY.get_or_init(build)
}

pub fn lookup(id: &str) -> Option<&'static InequalityCheck> {
    registry().iter().find(|c| c.id == id)
}

fn check(
    id: &'static str,
    relation: Relation,
    inputs: InputTag,
    description: &'static str,
    origin: &'static str,
    lhs: Side,
    rhs: Side,
) -> InequalityCheck {
    InequalityCheck {
        id,
        description,
        origin,
        requires_flags: NormFlags::NONE,
        requires_inputs: inputs,
        requires_norm: None,
        relation,
        lhs,
        rhs,
    }
}

impl InequalityCheck {
    fn needs(mut self, flags: NormFlags) -> Self {
        self.requires_flags = flags;
        self
    }

    fn only(mut self, kind: NormKind) -> Self {
        self.requires_norm = Some(kind);
        self
    }
}

fn side(f: impl Fn(&mut Evaluator<'_>) -> Result<f64> + Send + Sync + 'static) -> Side {
    Box::new(f)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Cached building blocks. Single-operator quantities use T = B.

fn w_b(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("B", |e| Ok(e.b().clone()))
}

fn w_c(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("C", |e| Ok(e.c().clone()))
}

fn w_sum(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("B+C", |e| e.b().add(e.c()))
}

fn w_diff(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("B-C", |e| e.b().sub(e.c()))
}

fn we(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w_e("B,C", |e| Ok((e.b().clone(), e.c().clone())))
}

fn gram_sum(b: &Matrix, c: &Matrix) -> Result<Matrix> {
    b.adjoint().mul(b)?.add(&c.adjoint().mul(c)?)
}

fn co_gram_sum(b: &Matrix, c: &Matrix) -> Result<Matrix> {
    b.mul(&b.adjoint())?.add(&c.mul(&c.adjoint())?)
}

fn square_sum(b: &Matrix, c: &Matrix) -> Result<Matrix> {
    b.mul(b)?.add(&c.mul(c)?)
}

/// `N(B*B + C*C)`
fn n_gram(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("B*B+C*C", |e| gram_sum(e.b(), e.c()))
}

/// `N(T*T + TT*)`
fn n_self_gram(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("T*T+TT*", |e| gram_sum(e.b(), &e.b().adjoint()))
}

fn n_re(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("Re T", |e| Ok(e.b().cartesian_parts().0))
}

fn n_im(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("Im T", |e| Ok(e.b().cartesian_parts().1))
}

fn n_re_plus_im(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("Re T+Im T", |e| {
        let (re, im) = e.b().cartesian_parts();
        re.add(&im)
    })
}

fn n_re_minus_im(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.n("Re T-Im T", |e| {
        let (re, im) = e.b().cartesian_parts();
        re.sub(&im)
    })
}

fn w_t_plus_adj(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("T+T*", |e| e.b().add(&e.b().adjoint()))
}

fn w_t_minus_adj(ev: &mut Evaluator<'_>) -> Result<f64> {
    ev.w("T-T*", |e| e.b().sub(&e.b().adjoint()))
}

fn hs_sq(m: &Matrix) -> f64 {
    let f = m.frobenius_norm();
    f * f
}

/// `tr(XY)`
fn tr(x: &Matrix, y: &Matrix) -> Result<Complex64> {
    x.trace_of_product(y)
}

const THETAS: [(&str, &str, f64); 4] = [
    ("thm210.theta0", "eq214.theta0", 0.0),
    ("thm210.theta_pi4", "eq214.theta_pi4", FRAC_PI_4),
    ("thm210.theta_pi2", "eq214.theta_pi2", FRAC_PI_2),
    ("thm210.theta_pi", "eq214.theta_pi", PI),
];

fn build() -> Vec<InequalityCheck> {
    use InputTag::{Any, HermitianPair, SingleOperator};
    use NormKind::{HilbertSchmidt as Hs, Operator as Op};
    use Relation::{Bound, Identity};

    let classical = "classical numerical radius bounds";
    let euclidean = "Euclidean operator radius bounds";
    let prop = "basic properties of the pair radius";
    let pair = "pair radius bounds";
    let algebra = "pair radius bounds for algebra norms";
    let hilbert = "Hilbert-Schmidt pair radius bounds";

    let mut v = vec![
        check("eq11.lower", Bound, SingleOperator, "N(T)/2 <= w(T)", classical,
            side(|ev| Ok(0.5 * ev.n("B", |e| Ok(e.b().clone()))?)), side(w_b)).only(Op),
        check("eq11.upper", Bound, SingleOperator, "w(T) <= N(T)", classical,
            side(w_b), side(|ev| ev.n("B", |e| Ok(e.b().clone())))).only(Op),
        check("eq12.lower", Bound, SingleOperator, "N(T*T + TT*)/4 <= w(T)^2", classical,
            side(|ev| Ok(0.25 * n_self_gram(ev)?)), side(|ev| Ok(w_b(ev)?.powi(2)))).only(Op),
        check("eq12.upper", Bound, SingleOperator, "w(T)^2 <= N(T*T + TT*)/2", classical,
            side(|ev| Ok(w_b(ev)?.powi(2))), side(|ev| Ok(0.5 * n_self_gram(ev)?))).only(Op),
        check("eq13.lower", Bound, Any, "(sqrt2/4) N(B*B + C*C)^(1/2) <= w_e(B, C)", euclidean,
            side(|ev| Ok(SQRT_2 / 4.0 * n_gram(ev)?.sqrt())), side(we)).only(Op),
        check("eq13.upper", Bound, Any, "w_e(B, C) <= N(B*B + C*C)^(1/2)", euclidean,
            side(we), side(|ev| Ok(n_gram(ev)?.sqrt()))).only(Op),
        check("eq13.hermitian.lower", Bound, HermitianPair, "(sqrt2/4) N(B^2 + C^2)^(1/2) <= w_e(B, C)", euclidean,
            side(|ev| Ok(SQRT_2 / 4.0 * ev.n("B^2+C^2", |e| square_sum(e.b(), e.c()))?.sqrt())), side(we)).only(Op),
        check("eq13.hermitian.upper", Bound, HermitianPair, "w_e(B, C) <= N(B^2 + C^2)^(1/2)", euclidean,
            side(we), side(|ev| Ok(ev.n("B^2+C^2", |e| square_sum(e.b(), e.c()))?.sqrt()))).only(Op),
        check("eq15.lower", Bound, Any, "w(B^2 + C^2)/2 <= w_e(B, C)^2", euclidean,
            side(|ev| Ok(0.5 * ev.w("B^2+C^2", |e| square_sum(e.b(), e.c()))?)), side(|ev| Ok(we(ev)?.powi(2)))).only(Op),
        check("eq15.upper", Bound, Any, "w_e(B, C)^2 <= N(B*B + C*C)", euclidean,
            side(|ev| Ok(we(ev)?.powi(2))), side(n_gram)).only(Op),
        check("prop.a", Identity, Any, "w_(N,e)(B, C) = w_(N,e)(B + C, B - C)/sqrt2", prop,
            side(we),
            side(|ev| Ok(FRAC_1_SQRT_2 * ev.w_e("B+C,B-C", |e| Ok((e.b().add(e.c())?, e.b().sub(e.c())?)))?))),
        check("prop.b", Identity, SingleOperator, "w_(N,e)(Re T, Im T) = w_N(T)", prop,
            side(|ev| ev.w_e("Re T,Im T", |e| Ok(e.b().cartesian_parts()))), side(w_b)).needs(SELF_ADJOINT),
        check("prop.b.adj", Identity, SingleOperator, "w_(N,e)(T, T*)/sqrt2 = w_N(T)", prop,
            side(|ev| Ok(FRAC_1_SQRT_2 * ev.w_e("T,T*", |e| Ok((e.b().clone(), e.b().adjoint())))?)), side(w_b))
            .needs(SELF_ADJOINT),
        check("prop.c", Identity, SingleOperator, "w_(N,e)(T, T) = sqrt2 w_N(T)", prop,
            side(|ev| ev.w_e("T,T", |e| Ok((e.b().clone(), e.b().clone())))), side(|ev| Ok(SQRT_2 * w_b(ev)?))),
        check("prop.d", Identity, Any, "w_(N,e)(B*, C*) = w_(N,e)(B, C)", prop,
            side(|ev| ev.w_e("B*,C*", |e| Ok((e.b().adjoint(), e.c().adjoint())))), side(we)).needs(SELF_ADJOINT),
        check("prop.e", Identity, Any, "w_(N,e)(U*BU, U*CU) = w_(N,e)(B, C)", prop,
            side(|ev| ev.w_e("U*BU,U*CU", |e| {
                let u = e.unitary()?;
                let ua = u.adjoint();
                Ok((ua.mul(e.b())?.mul(&u)?, ua.mul(e.c())?.mul(&u)?))
            })),
            side(we)).needs(UNITARILY_INVARIANT),
        check("prop.f", Identity, Any, "sup N(a Re(l1 B + l2 C) + b Im(l1 B + l2 C)) = w_(N,e)(B, C)", prop,
            side(|ev| ev.w_e_alpha_beta()), side(we)),
        check("thm24.lower", Bound, Any, "max(w_N(B), w_N(C)) <= w_(N,e)(B, C)", pair,
            side(|ev| Ok(w_b(ev)?.max(w_c(ev)?))), side(we)),
        check("thm24.upper", Bound, Any, "w_(N,e)(B, C) <= sqrt(w_N(B)^2 + w_N(C)^2)", pair,
            side(we), side(|ev| Ok(w_b(ev)?.hypot(w_c(ev)?)))),
        check("thm26.lower", Bound, Any, "max(w_N(B + C), w_N(B - C))/sqrt2 <= w_(N,e)(B, C)", pair,
            side(|ev| Ok(FRAC_1_SQRT_2 * w_sum(ev)?.max(w_diff(ev)?))), side(we)),
        check("thm26.upper", Bound, Any, "w_(N,e)(B, C) <= sqrt(w_N(B + C)^2 + w_N(B - C)^2)/sqrt2", pair,
            side(we), side(|ev| Ok(FRAC_1_SQRT_2 * w_sum(ev)?.hypot(w_diff(ev)?)))),
        check("cor28.lower", Bound, SingleOperator, "max(w_N(T + T*), w_N(T - T*))/2 <= w_N(T)", pair,
            side(|ev| Ok(0.5 * w_t_plus_adj(ev)?.max(w_t_minus_adj(ev)?))), side(w_b)),
        check("cor28.upper", Bound, SingleOperator, "w_N(T) <= sqrt(w_N(T + T*)^2 + w_N(T - T*)^2)/2", pair,
            side(w_b), side(|ev| Ok(0.5 * w_t_plus_adj(ev)?.hypot(w_t_minus_adj(ev)?)))),
    ];

    for (id, _, theta) in THETAS {
        v.push(check(id, Bound, Any, "w_N(B + e^(i theta) C)/2 + |w_N(B) - w_N(C)|/2 <= w_(N,e)(B, C)", pair,
            side(move |ev| {
                let key = format!("B+e^(i{theta})C");
                let rotated = ev.w(&key, |e| e.b().combine(c(1.0, 0.0), e.c(), Complex64::from_polar(1.0, theta)))?;
                Ok(0.5 * rotated + 0.5 * (w_b(ev)? - w_c(ev)?).abs())
            }),
            side(we)));
    }
    for (_, id, theta) in THETAS {
        v.push(check(id, Bound, SingleOperator, "w_N(T + e^(i theta) T*)/(2 sqrt2) <= w_N(T)", pair,
            side(move |ev| {
                let key = format!("T+e^(i{theta})T*");
                let x = ev.w(&key, |e| e.b().combine(c(1.0, 0.0), &e.b().adjoint(), Complex64::from_polar(1.0, theta)))?;
                Ok(x / (2.0 * SQRT_2))
            }),
            side(w_b)));
    }

    let mixed_term = |ev: &mut Evaluator<'_>| -> Result<f64> {
        Ok(0.5 * w_b(ev)?.max(w_c(ev)?) * (w_sum(ev)? - w_diff(ev)?).abs())
    };
    v.extend([
        check("thm213", Bound, Any,
            "N(C*C + B*B)/8 + max(w_N(B), w_N(C)) |w_N(B + C) - w_N(B - C)|/2 <= w_(N,e)(B, C)^2", algebra,
            side(move |ev| Ok(0.125 * n_gram(ev)? + mixed_term(ev)?)), side(|ev| Ok(we(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("thm213.alt", Bound, Any,
            "N(BB* + CC*)/8 + max(w_N(B), w_N(C)) |w_N(B + C) - w_N(B - C)|/2 <= w_(N,e)(B, C)^2", algebra,
            side(move |ev| Ok(0.125 * ev.n("BB*+CC*", |e| co_gram_sum(e.b(), e.c()))? + mixed_term(ev)?)),
            side(|ev| Ok(we(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("cor214", Bound, HermitianPair,
            "N(C^2 + B^2)/8 + max(N(B), N(C)) |N(B + C) - N(B - C)|/2 <= w_(N,e)(B, C)^2", algebra,
            side(|ev| {
                let sq = ev.n("B^2+C^2", |e| square_sum(e.b(), e.c()))?;
                let nb = ev.n("B", |e| Ok(e.b().clone()))?;
                let nc = ev.n("C", |e| Ok(e.c().clone()))?;
                let ns = ev.n("B+C", |e| e.b().add(e.c()))?;
                let nd = ev.n("B-C", |e| e.b().sub(e.c()))?;
                Ok(0.125 * sq + 0.5 * nb.max(nc) * (ns - nd).abs())
            }),
            side(|ev| Ok(we(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("cor215", Bound, SingleOperator,
            "N(T*T + TT*)/16 + max(N(Re T), N(Im T)) |N(Re T + Im T) - N(Re T - Im T)|/2 <= w_N(T)^2", algebra,
            side(|ev| {
                Ok(n_self_gram(ev)? / 16.0
                    + 0.5 * n_re(ev)?.max(n_im(ev)?) * (n_re_plus_im(ev)? - n_re_minus_im(ev)?).abs())
            }),
            side(|ev| Ok(w_b(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("cor216", Bound, SingleOperator,
            "N(T*T + TT*)/16 + w_N(T) |N(Re T) - N(Im T)|/2 <= w_N(T)^2", algebra,
            side(|ev| Ok(n_self_gram(ev)? / 16.0 + 0.5 * w_b(ev)? * (n_re(ev)? - n_im(ev)?).abs())),
            side(|ev| Ok(w_b(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("cor217", Bound, Any,
            "N(C*C + B*B)/8 + max(w_N(B + C), w_N(B - C)) |w_N(B) - w_N(C)|/2 <= w_(N,e)(B, C)^2", algebra,
            side(|ev| Ok(0.125 * n_gram(ev)? + 0.5 * w_sum(ev)?.max(w_diff(ev)?) * (w_b(ev)? - w_c(ev)?).abs())),
            side(|ev| Ok(we(ev)?.powi(2))))
            .needs(ALGEBRA_SELF_ADJOINT),
        check("thm31", Bound, Any,
            "|tr B^2 + tr C^2 + 2 tr BC|/4 + (|B|_2^2 + |C|_2^2 + 2 Re tr BC*)/4 <= w_(2,e)(B, C)^2", hilbert,
            side(|ev| {
                let (b, c) = (ev.b(), ev.c());
                let traces = tr(b, b)? + tr(c, c)? + tr(b, c)? * 2.0;
                let cross = tr(b, &c.adjoint())?.re;
                Ok(0.25 * traces.norm() + 0.25 * (hs_sq(b) + hs_sq(c) + 2.0 * cross))
            }),
            side(|ev| Ok(we(ev)?.powi(2))))
            .only(Hs),
        check("cor32p", Bound, Any,
            "|tr S^2 + tr D^2 + 2 tr SD|/8 + (|S|_2^2 + |D|_2^2)/8 + Re tr SD*/4 <= w_(2,e)(B, C)^2, S = B + C, D = B - C",
            hilbert,
            side(|ev| {
                let s = ev.b().add(ev.c())?;
                let d = ev.b().sub(ev.c())?;
                let traces = tr(&s, &s)? + tr(&d, &d)? + tr(&s, &d)? * 2.0;
                let cross = tr(&s, &d.adjoint())?.re;
                Ok(0.125 * traces.norm() + 0.125 * (hs_sq(&s) + hs_sq(&d)) + 0.25 * cross)
            }),
            side(|ev| Ok(we(ev)?.powi(2))))
            .only(Hs),
        check("thm34", Bound, Any,
            "w_(2,e)(B, C)^2 <= (max(|tr B^2|, |tr C^2|) + |tr BC| + max(|B|_2^2, |C|_2^2) + |tr BC*|)/2",
            hilbert,
            side(|ev| Ok(we(ev)?.powi(2))),
            side(|ev| {
                let (b, c) = (ev.b(), ev.c());
                let squares = tr(b, b)?.norm().max(tr(c, c)?.norm());
                let mixed = tr(b, c)?.norm();
                let sizes = hs_sq(b).max(hs_sq(c));
                let cross = tr(b, &c.adjoint())?.norm();
                Ok(0.5 * (squares + mixed + sizes + cross))
            }))
            .only(Hs),
        check("id.w2", Identity, SingleOperator, "w_2(T)^2 = |T|_2^2/2 + |tr T^2|/2", hilbert,
            side(|ev| Ok(w_b(ev)?.powi(2))),
            side(|ev| {
                let t = ev.b();
                Ok(0.5 * hs_sq(t) + 0.5 * tr(t, t)?.norm())
            }))
            .only(Hs),
        check("remark24.lower", Bound, SingleOperator, "max(N(Re T), N(Im T)) <= w_N(T)", pair,
            side(|ev| Ok(n_re(ev)?.max(n_im(ev)?))), side(w_b))
            .needs(SELF_ADJOINT),
        check("remark24.upper", Bound, SingleOperator, "w_N(T) <= sqrt(N(Re T)^2 + N(Im T)^2)", pair,
            side(w_b), side(|ev| Ok(n_re(ev)?.hypot(n_im(ev)?))))
            .needs(SELF_ADJOINT),
        check("remark27.lower", Bound, SingleOperator, "max(N(Re T + Im T), N(Re T - Im T))/sqrt2 <= w_N(T)", pair,
            side(|ev| Ok(FRAC_1_SQRT_2 * n_re_plus_im(ev)?.max(n_re_minus_im(ev)?))), side(w_b))
            .needs(SELF_ADJOINT),
        check("remark27.upper", Bound, SingleOperator,
            "w_N(T) <= sqrt(N(Re T + Im T)^2 + N(Re T - Im T)^2)/sqrt2", pair,
            side(w_b), side(|ev| Ok(FRAC_1_SQRT_2 * n_re_plus_im(ev)?.hypot(n_re_minus_im(ev)?))))
            .needs(SELF_ADJOINT),
    ]);
    v
}
