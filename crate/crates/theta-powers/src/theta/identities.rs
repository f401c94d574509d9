//! Registry of theta identities, each checked as a list of residuals that must vanish.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pochhammer_eval, ramanujan_phi, ramanujan_psi, theta_eval, vartheta_eval};
use crate::arith::{geometric_tail, pow2_up, ErrValue, Mag, Precision, TauPoint};
use crate::coeff::{fourth_power_closed, gamma_eval, CoeffKey};
use crate::error::{Error, Result};

macro_rules! identities {
    ($($variant:ident => $name:literal : $what:literal,)*) => {
        /// A registered identity.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum IdentityId { $($variant,)* }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            /// Stable short name, as accepted by [`FromStr`].
            pub fn name(&self) -> &'static str {
                match self { $(IdentityId::$variant => $name,)* }
            }

            /// One-line statement of the identity.
            pub fn statement(&self) -> &'static str {
                match self { $(IdentityId::$variant => $what,)* }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s { $($name => Ok(IdentityId::$variant),)* _ => Err(Error::UnknownIdentity(s.to_string())) }
            }
        }
    };
}

identities! {
    E18_1 => "E18.1": "θ(x) = θ(q/x)",
    E18_2 => "E18.2": "θ_q(q) = 2θ_{q⁴}(q) = 2θ_{q⁴}(q³)",
    E18_3 => "E18.3": "θ(-1) = θ(-q) = 0",
    E18_4 => "E18.4": "θ(x) = q^{n(n-1)/2} xⁿ θ(qⁿx)",
    E19 => "E19": "θ_q(x) = (q;q)(-x;q)(-q/x;q)",
    E22_1 => "E22.1": "θ_{q²}(q) = (-q;q²)(q²;q²)/((q;q²)(-q²;q²))",
    E22_2 => "E22.2": "θ_{q⁴}(q) = (q²;q²)/(q;q²)",
    E22_3 => "E22.3": "θ_{q³}(-q) = (q;q)",
    E28 => "E28": "Π_{j<n} θ_{qⁿ}(qʲx) = (qⁿ;qⁿ)ⁿ/(q;q) θ_q(x)",
    E29_1 => "E29.1": "θ(x)θ(y) + θ(-x)θ(-y) = 2θ_{q²}(xy)θ_{q²}(qy/x)",
    E29_2 => "E29.2": "θ(x)θ(y) - θ(-x)θ(-y) = 2xθ_{q²}(qxy)θ_{q²}(y/x)",
    E30_1 => "E30.1": "θ_{q²}(x)θ_{q²}(qx) = θ(x)ψ(q)",
    E30_2 => "E30.2": "θ(x) + θ(-x) = 2θ_{q⁴}(qx²)",
    E30_3 => "E30.3": "θ(x) - θ(-x) = 2xθ_{q⁴}(q³x²)",
    E30_4 => "E30.4": "θ(x)θ(-x) = θ_{q²}(-x²)φ(-q)",
    E30_5 => "E30.5": "θ²(x) + θ²(-x) = 2θ_{q²}(x²)φ(q)",
    E30_6 => "E30.6": "θ²(x) - θ²(-x) = 4xθ_{q²}(qx²)ψ(q²)",
    SquareSplit => "EQ_PREM": "θ²(x) = θ_{q²}(q)θ_{q²}(x²) + xθ_{q²}(1)θ_{q²}(qx²)",
    FourthPower0 => "COR22_a40": "γ_{4,0} = θ_{q²}(q)²θ_{q⁴}(q²) + qθ_{q²}(1)²θ_{q⁴}(1)",
    FourthPower1 => "COR22_a41": "γ_{4,1} = 2θ_{q²}(1)θ_{q²}(q)θ_{q⁴}(q³) = θ_q(1)³/2",
    FourthPower2 => "COR22_a42": "γ_{4,2} = θ_{q²}(q)²θ_{q⁴}(1) + θ_{q²}(1)²θ_{q⁴}(q²)",
    FourthPower3 => "COR22_a43": "γ_{4,3} = 2θ_{q²}(1)θ_{q²}(q)θ_{q⁴}(q)",
    VarthetaSqrtSquare => "EQ_C22": "ϑ²(√q) = 2ϑ_{q²}(1)ϑ_{q²}(q)",
    VarthetaSqrtProduct => "EQ_C23": "ϑ(√q) = 2(q²;q²)²/(q;q)",
    VarthetaFunctional => "RQ1.1": "ϑ(1/x) = ϑ(x) and ϑ(qⁿx) = q^{-n²/2}x^{-n}ϑ(x)",
    VarthetaProduct => "RQ1.2": "ϑ(x) = (q, -√q x, -√q/x; q)",
    VarthetaZeros => "RQ1.3": "ϑ(-q^{j+1/2}) = 0",
    VarthetaSplit => "RQ1.4": "Π_{n<k} ϑ_{q^k}(xqⁿ) = (q^k;q^k)^k/(q;q) ϑ(xq^{(k-1)/2})",
    BorelVartheta => "RQ1.5": "B_{q^k} ϑ_{q^m} = ϑ_{q^{k+m}}",
    BorelMonomial => "RQ1.6": "B(xⁿf) = q^{n²/2}xⁿ σ_{qⁿ}Bf",
    BorelDilation => "RQ1.7": "σ_a B = B σ_a",
    BorelRamification => "RQ1.8": "B_q ρ_k = ρ_k B_{q^{k²}}",
    SplitAtOne => "EQ_SPLIT": "ϑ_{q²}(1)ϑ_{q²}(q) = (q²;q²)²/(q;q) ϑ(√q)",
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Free variables of an identity; `y` is only read by the two-variable ones.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub x: ErrValue,
    pub y: ErrValue,
}

/// A nome together with a sample point.
#[derive(Clone, Debug)]
pub struct SampleCase {
    pub tp: TauPoint,
    pub point: SamplePoint,
}

/// Residuals of one identity at one point; every component must contain zero.
#[derive(Clone, Debug)]
pub struct Residual {
    pub id: IdentityId,
    pub components: Vec<ErrValue>,
}

impl Residual {
    pub fn passes(&self) -> bool {
        self.components.iter().all(ErrValue::contains_zero)
    }

    /// The component closest to failing, measured by `log2|mid| - log2(radius)`.
    pub fn worst(&self) -> &ErrValue {
        self.components
            .iter()
            .max_by(|a, b| {
                let ka = a.mid_abs().log2() - a.radius().log2();
                let kb = b.mid_abs().log2() - b.radius().log2();
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("at least one component")
    }
}

/// Worst residual of `id` at the given nome and point.
pub fn identity_residual(id: IdentityId, tp: &TauPoint, point: &SamplePoint) -> Result<ErrValue> {
    Ok(identity_residuals(id, tp, point)?.worst().clone())
}

/// Deterministic sample cases with `|q|` in `[0.05, 0.6]` and `|x|, |y|` in `[0.3, 3]`.
pub fn sample_cases(seed: u64, count: usize, prec: Precision) -> Result<Vec<SampleCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let two_pi = std::f64::consts::TAU;
    let polar = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        let r: f64 = rng.gen_range(lo..=hi);
        let a: f64 = rng.gen_range(0.0..two_pi);
        ErrValue::complex(&ErrValue::from_f64(r * a.cos(), prec), &ErrValue::from_f64(r * a.sin(), prec))
    };
    for _ in 0..count {
        let qa: f64 = rng.gen_range(0.05..=0.6);
        let arg: f64 = rng.gen_range(0.0..1.0);
        let tau = ErrValue::complex(&ErrValue::from_f64(arg, prec), &ErrValue::from_f64(-qa.ln() / two_pi, prec));
        let tp = TauPoint::from_tau(tau)?;
        let x = polar(&mut rng, 0.3, 3.0);
        let y = polar(&mut rng, 0.3, 3.0);
        out.push(SampleCase { tp, point: SamplePoint { x, y } });
    }
    Ok(out)
}

fn th(q: &ErrValue, x: &ErrValue) -> Result<ErrValue> {
    theta_eval(q, x)
}

fn poch(a: &ErrValue, q: &ErrValue) -> Result<ErrValue> {
    pochhammer_eval(a, q)
}

/// Upper bound for `Σ_{|j|>J} 2^{a j² + b|j| + c}` with `a < 0`.
fn quadratic_tail(a: f64, b: f64, c: f64, j: i64) -> Result<Mag> {
    let jf = j as f64;
    let first = a * (jf + 1.0) * (jf + 1.0) + b * (jf + 1.0) + c + 1.0;
    let ratio = a * (2.0 * jf + 3.0) + b;
    if ratio >= 0.0 {
        return Ok(Mag::INFINITY);
    }
    geometric_tail(pow2_up(ratio), pow2_up(first)).map(|m| m.mul(Mag::from_f64(2.0)))
}

/// `Σ_j term(j)` over `|j| <= J`, with `J` chosen so the quadratic majorant tail is below target.
fn bilateral_sum(
    prec: Precision,
    (a, b, c): (f64, f64, f64),
    mut term: impl FnMut(i64) -> Result<ErrValue>,
) -> Result<ErrValue> {
    let target = prec.target();
    let mut j = 1;
    let tail = loop {
        let t = quadratic_tail(a, b, c, j)?;
        if t <= target {
            break t;
        }
        j += 1;
        if j > 100_000 {
            return Err(Error::Scale("bilateral sum does not converge fast enough".into()));
        }
    };
    let mut sum = ErrValue::zero(prec);
    for i in -j..=j {
        sum = sum.add(&term(i)?);
    }
    Ok(sum.inflate(tail))
}

fn log2_abs(v: &ErrValue) -> f64 {
    v.abs_upper().log2()
}

fn log2_spread(v: &ErrValue) -> Result<f64> {
    Ok(log2_abs(v).max(log2_abs(&v.recip()?)))
}

/// All residual components of `id`.
pub fn identity_residuals(id: IdentityId, tp: &TauPoint, point: &SamplePoint) -> Result<Residual> {
    use IdentityId::*;
    let q = tp.nome();
    let prec = tp.precision().max(point.x.precision());
    let x = &point.x;
    let y = &point.y;
    let one = ErrValue::one(prec);
    let two = ErrValue::from_i64(2, prec);
    let q2 = q.sqr();
    let q3 = q.powi(3)?;
    let q4 = q.powi(4)?;
    let xx = x.sqr();
    let half = Rational64::new(1, 2);

    let components = match id {
        E18_1 => vec![th(q, x)?.sub(&th(q, &q.div(x)?)?)],
        E18_2 => {
            let lhs = th(q, q)?;
            vec![lhs.sub(&th(&q4, q)?.mul(&two)), lhs.sub(&th(&q4, &q3)?.mul(&two))]
        }
        E18_3 => vec![th(q, &one.neg())?, th(q, &q.neg())?],
        E18_4 => {
            let lhs = th(q, x)?;
            let mut out = Vec::new();
            for n in [-3i64, -2, -1, 1, 2, 3] {
                let f = tp.qpow(Rational64::from_integer(n * (n - 1) / 2))?.mul(&x.powi(n)?);
                out.push(lhs.sub(&f.mul(&th(q, &q.powi(n)?.mul(x))?)));
            }
            out
        }
        E19 => {
            let rhs = poch(q, q)?.mul(&poch(&x.neg(), q)?).mul(&poch(&q.neg().div(x)?, q)?);
            vec![th(q, x)?.sub(&rhs)]
        }
        E22_1 => {
            let num = poch(&q.neg(), &q2)?.mul(&poch(&q2, &q2)?);
            let den = poch(q, &q2)?.mul(&poch(&q2.neg(), &q2)?);
            vec![ramanujan_phi(q)?.sub(&num.div(&den)?)]
        }
        E22_2 => vec![ramanujan_psi(q)?.sub(&poch(&q2, &q2)?.div(&poch(q, &q2)?)?)],
        E22_3 => vec![th(&q3, &q.neg())?.sub(&poch(q, q)?)],
        E28 => {
            let tq = th(q, x)?;
            let mut out = Vec::new();
            for n in 2..=4i64 {
                let qn = q.powi(n)?;
                let mut lhs = one.clone();
                for j in 0..n {
                    lhs = lhs.mul(&th(&qn, &q.powi(j)?.mul(x))?);
                }
                let factor = poch(&qn, &qn)?.powi(n)?.div(&poch(q, q)?)?;
                out.push(lhs.sub(&factor.mul(&tq)));
            }
            out
        }
        E29_1 | E29_2 => {
            let a = th(q, x)?.mul(&th(q, y)?);
            let b = th(q, &x.neg())?.mul(&th(q, &y.neg())?);
            if id == E29_1 {
                let rhs = th(&q2, &x.mul(y))?.mul(&th(&q2, &q.mul(y).div(x)?)?).mul(&two);
                vec![a.add(&b).sub(&rhs)]
            } else {
                let rhs = th(&q2, &q.mul(x).mul(y))?.mul(&th(&q2, &y.div(x)?)?).mul(&two).mul(x);
                vec![a.sub(&b).sub(&rhs)]
            }
        }
        E30_1 => vec![th(&q2, x)?.mul(&th(&q2, &q.mul(x))?).sub(&th(q, x)?.mul(&ramanujan_psi(q)?))],
        E30_2 => vec![th(q, x)?.add(&th(q, &x.neg())?).sub(&th(&q4, &q.mul(&xx))?.mul(&two))],
        E30_3 => vec![th(q, x)?.sub(&th(q, &x.neg())?).sub(&th(&q4, &q3.mul(&xx))?.mul(&two).mul(x))],
        E30_4 => vec![th(q, x)?.mul(&th(q, &x.neg())?).sub(&th(&q2, &xx.neg())?.mul(&ramanujan_phi(&q.neg())?))],
        E30_5 => {
            let s = th(q, x)?.sqr().add(&th(q, &x.neg())?.sqr());
            vec![s.sub(&th(&q2, &xx)?.mul(&ramanujan_phi(q)?).mul(&two))]
        }
        E30_6 => {
            let d = th(q, x)?.sqr().sub(&th(q, &x.neg())?.sqr());
            vec![d.sub(&th(&q2, &q.mul(&xx))?.mul(&ramanujan_psi(&q2)?).mul(x).mul_i64(4))]
        }
        SquareSplit => {
            let rhs = th(&q2, q)?.mul(&th(&q2, &xx)?).add(&x.mul(&th(&q2, &one)?).mul(&th(&q2, &q.mul(&xx))?));
            vec![th(q, x)?.sqr().sub(&rhs)]
        }
        FourthPower0 | FourthPower1 | FourthPower2 | FourthPower3 => {
            let i = match id {
                FourthPower0 => 0,
                FourthPower1 => 1,
                FourthPower2 => 2,
                _ => 3,
            };
            let closed = fourth_power_closed(i, q)?;
            let mut out = vec![closed.sub(&gamma_eval(CoeffKey::new(4, i)?, q, None)?)];
            if i % 2 == 1 {
                out.push(closed.sub(&th(q, &one)?.powi(3)?.div_i64(2)));
            }
            out
        }
        VarthetaSqrtSquare => {
            let r = tp.qpow(half)?;
            let tp2 = tp.rebase(2)?;
            let rhs = vartheta_eval(&tp2, &one)?.mul(&vartheta_eval(&tp2, q)?).mul(&two);
            vec![vartheta_eval(tp, &r)?.sqr().sub(&rhs)]
        }
        VarthetaSqrtProduct => {
            let r = tp.qpow(half)?;
            let rhs = poch(&q2, &q2)?.sqr().div(&poch(q, q)?)?.mul(&two);
            vec![vartheta_eval(tp, &r)?.sub(&rhs)]
        }
        VarthetaFunctional => {
            let v = vartheta_eval(tp, x)?;
            let mut out = vec![vartheta_eval(tp, &x.recip()?)?.sub(&v)];
            for n in [-2i64, -1, 1, 2, 3] {
                let lhs = vartheta_eval(tp, &q.powi(n)?.mul(x))?;
                let f = tp.qpow(Rational64::new(-n * n, 2))?.mul(&x.powi(-n)?);
                out.push(lhs.sub(&f.mul(&v)));
            }
            out
        }
        VarthetaProduct => {
            let r = tp.qpow(half)?;
            let rhs = poch(q, q)?.mul(&poch(&r.mul(x).neg(), q)?).mul(&poch(&r.div(x)?.neg(), q)?);
            vec![vartheta_eval(tp, x)?.sub(&rhs)]
        }
        VarthetaZeros => {
            let mut out = Vec::new();
            for j in -2i64..=1 {
                let z = tp.qpow(Rational64::new(2 * j + 1, 2))?.neg();
                out.push(vartheta_eval(tp, &z)?);
            }
            out
        }
        VarthetaSplit => {
            let mut out = Vec::new();
            let qq = poch(q, q)?;
            for k in 2..=4i64 {
                let tpk = tp.rebase(k)?;
                let qk = tpk.nome();
                let mut lhs = one.clone();
                for n in 0..k {
                    lhs = lhs.mul(&vartheta_eval(&tpk, &x.mul(&q.powi(n)?))?);
                }
                let shift = tp.qpow(Rational64::new(k - 1, 2))?;
                let rhs = poch(qk, qk)?.powi(k)?.div(&qq)?.mul(&vartheta_eval(tp, &x.mul(&shift))?);
                out.push(lhs.sub(&rhs));
            }
            out
        }
        BorelVartheta => {
            let mut out = Vec::new();
            for (k, m) in [(1i64, 1i64), (1, 2), (2, 1), (2, 3)] {
                let hk = tp.qpow(Rational64::new(k, 2))?;
                let hm = tp.qpow(Rational64::new(m, 2))?;
                let shape = (log2_abs(&hk) + log2_abs(&hm), log2_spread(x)?, 0.0);
                let lhs = bilateral_sum(prec, shape, |j| Ok(hm.powi(j * j)?.mul(&hk.powi(j * j)?).mul(&x.powi(j)?)))?;
                out.push(lhs.sub(&vartheta_eval(&tp.rebase(k + m)?, x)?));
            }
            out
        }
        BorelMonomial => {
            let h = tp.qpow(half)?;
            let mut out = Vec::new();
            for (m, s) in [(1i64, 1i64), (1, -2), (2, 3)] {
                let hm = tp.qpow(Rational64::new(m, 2))?;
                let a1 = log2_abs(&h);
                let sx = log2_spread(x)?;
                let shape = (log2_abs(&hm) + a1, 2.0 * s.abs() as f64 * a1.abs() + sx, s.abs() as f64 * sx + (s * s) as f64 * a1.abs());
                let lhs = bilateral_sum(prec, shape, |j| {
                    Ok(hm.powi(j * j)?.mul(&h.powi((j + s) * (j + s))?).mul(&x.powi(j + s)?))
                })?;
                let bf = vartheta_eval(&tp.rebase(m + 1)?, &q.powi(s)?.mul(x))?;
                let rhs = tp.qpow(Rational64::new(s * s, 2))?.mul(&x.powi(s)?).mul(&bf);
                out.push(lhs.sub(&rhs));
            }
            out
        }
        BorelDilation => {
            let h = tp.qpow(half)?;
            let mut out = Vec::new();
            for m in [1i64, 2] {
                let hm = tp.qpow(Rational64::new(m, 2))?;
                let a = y;
                let shape = (log2_abs(&hm) + log2_abs(&h), log2_spread(x)? + log2_spread(a)?, 0.0);
                let lhs = vartheta_eval(&tp.rebase(m + 1)?, &a.mul(x))?;
                let rhs = bilateral_sum(prec, shape, |j| Ok(hm.powi(j * j)?.mul(&a.powi(j)?).mul(&h.powi(j * j)?).mul(&x.powi(j)?)))?;
                out.push(lhs.sub(&rhs));
            }
            out
        }
        BorelRamification => {
            let h = tp.qpow(half)?;
            let mut out = Vec::new();
            for (m, k) in [(1i64, 2i64), (1, 3), (2, 2)] {
                let hm = tp.qpow(Rational64::new(m, 2))?;
                let shape = (log2_abs(&hm) + (k * k) as f64 * log2_abs(&h), k as f64 * log2_spread(x)?, 0.0);
                let lhs = bilateral_sum(prec, shape, |j| Ok(hm.powi(j * j)?.mul(&h.powi(k * k * j * j)?).mul(&x.powi(k * j)?)))?;
                let rhs = vartheta_eval(&tp.rebase(m + k * k)?, &x.powi(k)?)?;
                out.push(lhs.sub(&rhs));
            }
            out
        }
        SplitAtOne => {
            let tp2 = tp.rebase(2)?;
            let lhs = vartheta_eval(&tp2, &one)?.mul(&vartheta_eval(&tp2, q)?);
            let r = tp.qpow(half)?;
            let rhs = poch(&q2, &q2)?.sqr().div(&poch(q, q)?)?.mul(&vartheta_eval(tp, &r)?);
            vec![lhs.sub(&rhs)]
        }
    };
    Ok(Residual { id, components })
}

/// Gap in the candidate relation
/// `θ(x)θ(y)θ(nx)θ(ny) + θ(-x)θ(-y)θ(-nx)θ(-ny) = 2xθ(y/x)θ(nxy)θ(n)ψ(q)`.
///
/// The relation does not hold in general, so it is not registered; the gap stays
/// bounded away from zero as `q -> 0`.
pub fn product_sum_gap(q: &ErrValue, x: &ErrValue, y: &ErrValue, n: &ErrValue) -> Result<ErrValue> {
    let t = |v: &ErrValue| th(q, v);
    let nx = n.mul(x);
    let ny = n.mul(y);
    let plus = t(x)?.mul(&t(y)?).mul(&t(&nx)?).mul(&t(&ny)?);
    let minus = t(&x.neg())?.mul(&t(&y.neg())?).mul(&t(&nx.neg())?).mul(&t(&ny.neg())?);
    let rhs = x.mul(&t(&y.div(x)?)?).mul(&t(&nx.mul(y))?).mul(&t(n)?).mul(&ramanujan_psi(q)?).mul_i64(2);
    Ok(plus.add(&minus).sub(&rhs))
}
