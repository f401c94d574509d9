//! Theta functions, q-Pochhammer products and the identities relating them.
//!
//! Two normalizations coexist:
//!
//! * [`theta_eval`] computes `θ_q(x) = Σ_m q^{m(m-1)/2} x^m`, which only needs
//!   integer powers of `q` and therefore takes the nome directly.
//! * [`vartheta_eval`] computes `ϑ_q(x) = Σ_n q^{n²/2} x^n`, which needs `q^{1/2}`
//!   and therefore takes a [`TauPoint`] fixing the branch.
//!
//! Both truncate a bilateral sum and fold a geometric tail bound into the radius.

pub mod identities;

use num_rational::Rational64;

use crate::arith::{geometric_tail, pow2_up, ErrValue, Mag, TauPoint};
use crate::error::{Error, Result};

const MAX_TERMS: i64 = 2_000_000;

pub(crate) fn require_unit_disc(q: &ErrValue) -> Result<f64> {
    let a = q.abs_upper();
    if a >= Mag::from_f64(1.0) {
        return Err(Error::Divergence(format!("|q| = {q} is not certified below 1")));
    }
    if q.abs_lower().is_zero() {
        return Err(Error::Domain("nome must be certified nonzero".into()));
    }
    Ok(a.log2())
}

/// Smallest `M` such that both one-sided tails beyond `|m| = M` sum below `target`.
///
/// `ql` is `log2|q|`, `xl` and `xil` are `log2|x|` and `log2|1/x|` (upper bounds).
/// The term with index `m` has modulus `|q|^{m(m-1)/2} |x|^m`.
fn theta_cutoff(ql: f64, xl: f64, xil: f64, target: Mag) -> Result<(i64, Mag)> {
    let mut m: i64 = 1;
    loop {
        let mf = m as f64;
        let pos_ratio = ql * (mf + 1.0) + xl;
        let neg_ratio = ql * (mf + 2.0) + xil;
        if pos_ratio < -0.01 && neg_ratio < -0.01 {
            let pos_first = ql * (mf + 1.0) * mf / 2.0 + xl * (mf + 1.0);
            let neg_first = ql * (mf + 1.0) * (mf + 2.0) / 2.0 + xil * (mf + 1.0);
            let tail = geometric_tail(pow2_up(pos_ratio), pow2_up(pos_first))?
                .add(geometric_tail(pow2_up(neg_ratio), pow2_up(neg_first))?);
            if tail <= target {
                return Ok((m, tail));
            }
        }
        m += if m < 64 { 1 } else { m / 16 };
        if m > MAX_TERMS {
            return Err(Error::Scale(format!("theta series needs more than {MAX_TERMS} terms")));
        }
    }
}

/// `θ_q(x) = Σ_{m∈Z} q^{m(m-1)/2} x^m` for `0 < |q| < 1` and `x ≠ 0`.
pub fn theta_eval(q: &ErrValue, x: &ErrValue) -> Result<ErrValue> {
    let ql = require_unit_disc(q)?;
    let xinv = x.recip()?;
    let prec = q.precision().max(x.precision());
    let (m_max, tail) = theta_cutoff(ql, x.abs_upper().log2(), xinv.abs_upper().log2(), prec.target())?;

    // t_{m+1} = t_m q^m x and u_{j+1} = u_j q^{j+1} / x
    let mut sum = ErrValue::one(prec);
    let mut qp = ErrValue::one(prec);
    let mut t = ErrValue::one(prec);
    for _ in 1..=m_max {
        t = t.mul(&qp).mul(x);
        sum = sum.add(&t);
        qp = qp.mul(q);
    }
    let mut qp = q.clone();
    let mut u = ErrValue::one(prec);
    for _ in 1..=m_max {
        u = u.mul(&qp).mul(&xinv);
        sum = sum.add(&u);
        qp = qp.mul(q);
    }
    Ok(sum.inflate(tail))
}

/// `ϑ_q(x) = Σ_{n∈Z} q^{n²/2} x^n` with `q^{1/2}` taken from `tp`.
pub fn vartheta_eval(tp: &TauPoint, x: &ErrValue) -> Result<ErrValue> {
    require_unit_disc(tp.nome())?;
    let h = tp.qpow(Rational64::new(1, 2))?;
    let xinv = x.recip()?;
    let prec = tp.precision().max(x.precision());
    let hl = h.abs_upper().log2();
    let big = x.abs_upper().log2().max(xinv.abs_upper().log2());
    let target = prec.target();

    // pairs n, -n contribute at most 2 |h|^{n²} X^n with X = max(|x|, 1/|x|)
    let mut n_max: i64 = 1;
    let tail = loop {
        let nf = n_max as f64;
        let ratio = hl * (2.0 * nf + 3.0) + big;
        if ratio < -0.01 {
            let first = hl * (nf + 1.0) * (nf + 1.0) + big * (nf + 1.0) + 1.0;
            let tail = geometric_tail(pow2_up(ratio), pow2_up(first))?;
            if tail <= target {
                break tail;
            }
        }
        n_max += if n_max < 64 { 1 } else { n_max / 16 };
        if n_max > MAX_TERMS {
            return Err(Error::Scale(format!("vartheta series needs more than {MAX_TERMS} terms")));
        }
    };

    let h2 = h.sqr();
    let mut sum = ErrValue::one(prec);
    let mut hn2 = ErrValue::one(prec); // h^{n²}
    let mut step = h.clone(); // h^{2n+1}
    let mut xp = ErrValue::one(prec);
    let mut xm = ErrValue::one(prec);
    for _ in 1..=n_max {
        hn2 = hn2.mul(&step);
        step = step.mul(&h2);
        xp = xp.mul(x);
        xm = xm.mul(&xinv);
        sum = sum.add(&hn2.mul(&xp.add(&xm)));
    }
    Ok(sum.inflate(tail))
}

/// `(a; q)_∞ = Π_{n≥0} (1 - a q^n)`.
pub fn pochhammer_eval(a: &ErrValue, q: &ErrValue) -> Result<ErrValue> {
    require_unit_disc(q)?;
    let qa = q.abs_upper();
    let aa = a.abs_upper();
    let prec = q.precision().max(a.precision());
    let one = ErrValue::one(prec);
    let target = prec.target();
    let denom = Mag::from_f64(1.0).sub_down(qa);

    let mut prod = ErrValue::one(prec);
    let mut aq = a.clone();
    let mut aq_abs = aa;
    let mut n: i64 = 0;
    loop {
        // |Π_{m≥n}(1 - a q^m) - 1| <= exp(Σ_{m≥n} |a q^m|) - 1
        let s = aq_abs.div(denom);
        let delta = s.expm1();
        if delta <= target {
            let err = prod.abs_upper().mul(delta);
            return Ok(prod.inflate(err));
        }
        prod = prod.mul(&one.sub(&aq));
        aq = aq.mul(q);
        aq_abs = aq_abs.mul(qa);
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::Scale("q-Pochhammer product does not converge fast enough".into()));
        }
    }
}

/// `Π_i (a_i; q)_∞`.
pub fn pochhammer_multi(args: &[ErrValue], q: &ErrValue) -> Result<ErrValue> {
    let mut prod = ErrValue::one(q.precision());
    for a in args {
        prod = prod.mul(&pochhammer_eval(a, q)?);
    }
    Ok(prod)
}

/// Ramanujan's `φ(q) = θ_{q²}(q) = Σ q^{k²}`.
pub fn ramanujan_phi(q: &ErrValue) -> Result<ErrValue> {
    theta_eval(&q.sqr(), q)
}

/// Ramanujan's `ψ(q) = θ_{q⁴}(q) = Σ_{k≥0} q^{k(k+1)/2}`.
pub fn ramanujan_psi(q: &ErrValue) -> Result<ErrValue> {
    theta_eval(&q.powi(4)?, q)
}

/// Ramanujan's `f(-q) = θ_{q³}(-q)`.
pub fn ramanujan_f_neg(q: &ErrValue) -> Result<ErrValue> {
    theta_eval(&q.powi(3)?, &q.neg())
}

/// Ramanujan's `χ(q) = (-q; q²)_∞`.
pub fn ramanujan_chi(q: &ErrValue) -> Result<ErrValue> {
    pochhammer_eval(&q.neg(), &q.sqr())
}
