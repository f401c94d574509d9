//! Routes to `c_{k,n}` that avoid the coefficient series: a recurrence in `k`,
//! closed theta products for small `k`, and a root-of-unity filter.

use num_rational::Rational64;

use crate::arith::{ErrValue, TauPoint};
use crate::error::{Error, Result};
use crate::theta::{theta_eval, vartheta_eval};

use super::CoeffKey;

pub const RECURRENCE_MAX_K: u32 = 12;

fn half(tp: &TauPoint, num: i64) -> Result<ErrValue> {
    tp.qpow(Rational64::new(num, 2))
}

fn qint(tp: &TauPoint, e: i64) -> Result<ErrValue> {
    tp.nome().powi(e)
}

/// `ϑ_{q^m}(q^e)`.
fn vt(tp: &TauPoint, m: i64, e: i64) -> Result<ErrValue> {
    vartheta_eval(&tp.rebase(m)?, &qint(tp, e)?)
}

/// All `c_{k+1,n}` for `0 <= n <= k` from the `c_{k,n}`.
fn recurrence_step(tp: &TauPoint, k: i64, prev: &[ErrValue]) -> Result<Vec<ErrValue>> {
    let big = tp.rebase(k * k + k)?;
    let prec = tp.precision();
    let v = |e: i64| -> Result<ErrValue> { vartheta_eval(&big, &qint(tp, e)?) };
    let mut out = Vec::with_capacity(k as usize + 1);

    // n = 0: the terms n' and k - n' coincide, so only half of them are summed
    let kh = k / 2;
    let mut c0 = prev[0].mul(&v(0)?);
    let paired_up_to = if k % 2 == 1 { kh } else { kh - 1 };
    for n in 1..=paired_up_to {
        c0 = c0.add(&prev[n as usize].mul(&half(tp, n * n)?).mul(&v((k + 1) * n)?).mul_i64(2));
    }
    if k % 2 == 0 && k > 0 {
        c0 = c0.add(&prev[kh as usize].mul(&half(tp, kh * kh)?).mul(&v((k + 1) * kh)?));
    }
    out.push(c0);

    for n in 1..=k {
        let mut acc = ErrValue::zero(prec);
        for (np, c) in prev.iter().enumerate() {
            let np = np as i64;
            let d = n - np;
            acc = acc.add(&c.mul(&half(tp, d * d)?).mul(&v(-k * n + (k + 1) * np)?));
        }
        out.push(acc);
    }
    Ok(out)
}

/// `c_{k,n}` built up from `c_{1,0} = 1` by the recurrence in `k`.
pub fn c_recurrence_eval(k_target: u32, n: i64, tp: &TauPoint) -> Result<ErrValue> {
    if !(1..=RECURRENCE_MAX_K).contains(&k_target) {
        return Err(Error::Argument(format!("recurrence supports 1 <= k <= {RECURRENCE_MAX_K}, got {k_target}")));
    }
    CoeffKey::new(k_target, n)?.require_reduced()?;
    let mut row = vec![ErrValue::one(tp.precision())];
    for k in 1..k_target as i64 {
        row = recurrence_step(tp, k, &row)?;
    }
    Ok(row.swap_remove(n as usize))
}

/// `c_{k,n}` from closed theta products, for `k` in `{2, 3, 4}`.
pub fn c_closed_eval(key: CoeffKey, tp: &TauPoint) -> Result<ErrValue> {
    key.require_reduced()?;
    let n = key.n;
    match key.k {
        2 => Ok(vt(tp, 2, n)?.mul(&half(tp, n * n)?)),
        3 => c3_closed(n, tp),
        4 if n == 0 => {
            let q = tp.nome();
            let head = vt(tp, 2, 0)?.mul(&vt(tp, 6, 0)?).mul(&vt(tp, 12, 0)?);
            let a = vt(tp, 2, 1)?.mul(&vt(tp, 6, 3)?).mul(&vt(tp, 12, 0)?);
            let b = vt(tp, 2, 0)?.mul(&vt(tp, 6, 2)?).add(&vt(tp, 2, 1)?.mul(&vt(tp, 6, 1)?));
            let b = b.mul(&vt(tp, 12, 4)?).mul_i64(2);
            Ok(head.add(&q.mul(&a.add(&b))))
        }
        4 => {
            let c30 = c3_closed(0, tp)?;
            let c31 = c3_closed(1, tp)?;
            let first = c30.mul(&half(tp, n * n)?).mul(&vt(tp, 12, 3 * n)?);
            let side = half(tp, (n - 1) * (n - 1))?
                .mul(&vt(tp, 12, 4 - 3 * n)?)
                .add(&half(tp, (n + 1) * (n + 1))?.mul(&vt(tp, 12, 3 * n + 4)?));
            Ok(first.add(&c31.mul(&side)))
        }
        k => Err(Error::Argument(format!("closed forms exist only for k in {{2, 3, 4}}, got {k}"))),
    }
}

fn c3_closed(n: i64, tp: &TauPoint) -> Result<ErrValue> {
    let a = half(tp, n * n)?.mul(&vt(tp, 2, 0)?).mul(&vt(tp, 6, 2 * n)?);
    let b = half(tp, 1 + (n - 1) * (n - 1))?.mul(&vt(tp, 2, 1)?).mul(&vt(tp, 6, 2 * n - 3)?);
    Ok(a.add(&b))
}

/// `γ_{4,i}` as products of `θ_{q²}` and `θ_{q⁴}` values, from squaring the split of `θ²`.
pub fn fourth_power_closed(i: i64, q: &ErrValue) -> Result<ErrValue> {
    let one = ErrValue::one(q.precision());
    let q2 = q.sqr();
    let q4 = q2.sqr();
    let a = theta_eval(&q2, &one)?;
    let b = theta_eval(&q2, q)?;
    Ok(match i {
        0 => b.sqr().mul(&theta_eval(&q4, &q2)?).add(&q.mul(&a.sqr()).mul(&theta_eval(&q4, &one)?)),
        1 => a.mul(&b).mul(&theta_eval(&q4, &q.powi(3)?)?).mul_i64(2),
        2 => b.sqr().mul(&theta_eval(&q4, &one)?).add(&a.sqr().mul(&theta_eval(&q4, &q2)?)),
        3 => a.mul(&b).mul(&theta_eval(&q4, q)?).mul_i64(2),
        _ => return Err(Error::Argument(format!("fourth-power index must lie in 0..4, got {i}"))),
    })
}

/// `c_{k,n}` by filtering the residue class `n mod k` of `ϑ^k` with k-th roots of unity.
pub fn c_rootsum_eval(key: CoeffKey, tp: &TauPoint) -> Result<ErrValue> {
    let k = key.k as i64;
    if k < 2 {
        return Err(Error::Argument("root-of-unity filter needs k >= 2".into()));
    }
    let n = key.n;
    let prec = tp.precision();
    let norm = vartheta_eval(&tp.rebase(k)?, &ErrValue::one(prec))?;
    if !norm.certified_nonzero() {
        return Err(Error::UncertifiedNonzero(format!("ϑ_(q^{k})(1) = {norm}")));
    }
    let base = tp.qpow(Rational64::new(n, k))?;
    let mut acc = ErrValue::zero(prec);
    for j in 0..k {
        let root = ErrValue::exp_i_pi(Rational64::new(2 * j, k), prec);
        let twist = ErrValue::exp_i_pi(Rational64::new(2 * n * j, k), prec);
        acc = acc.add(&twist.mul(&vartheta_eval(tp, &base.mul(&root))?.powi(k)?));
    }
    let scale = tp.qpow(Rational64::new(n * n, k))?;
    scale.mul(&acc).div(&norm.mul_i64(k))
}

#[cfg(test)]
mod tests {
    use super::super::{c_eval, gamma_eval};
    use super::*;
    use crate::arith::{Mag, Precision};

    fn tp_real(q: f64) -> TauPoint {
        TauPoint::from_real(&ErrValue::from_f64(q, Precision::new(40))).unwrap()
    }

    fn assert_close(a: &ErrValue, b: &ErrValue, what: &str) {
        assert!(a.overlaps(b), "{what}: {a} vs {b}");
        assert!(a.radius() < Mag::pow2(-100) && b.radius() < Mag::pow2(-100), "{what}: radii too wide");
    }

    #[test]
    fn recurrence_matches_series() {
        for q in [0.2, -0.35] {
            let tp = tp_real(q);
            for k in 2..=5u32 {
                for n in 0..k as i64 {
                    let key = CoeffKey::new(k, n).unwrap();
                    assert_close(&c_recurrence_eval(k, n, &tp).unwrap(), &c_eval(key, &tp).unwrap(), &format!("{key} q={q}"));
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_series() {
        let tp = tp_real(-0.3);
        for k in 2..=4u32 {
            for n in 0..k as i64 {
                let key = CoeffKey::new(k, n).unwrap();
                assert_close(&c_closed_eval(key, &tp).unwrap(), &c_eval(key, &tp).unwrap(), &format!("{key}"));
            }
        }
        assert!(c_closed_eval(CoeffKey::new(5, 0).unwrap(), &tp).is_err());
    }

    #[test]
    fn fourth_power_products_match_series() {
        let q = ErrValue::from_f64(0.15, Precision::new(40));
        for i in 0..4 {
            let g = gamma_eval(CoeffKey::new(4, i).unwrap(), &q, None).unwrap();
            assert_close(&fourth_power_closed(i, &q).unwrap(), &g, &format!("i={i}"));
        }
    }

    #[test]
    fn root_filter_matches_series() {
        let tp = TauPoint::from_tau(ErrValue::complex(
            &ErrValue::from_f64(0.3, Precision::new(40)),
            &ErrValue::from_f64(0.25, Precision::new(40)),
        ))
        .unwrap();
        for k in 2..=5u32 {
            for n in 0..k as i64 {
                let key = CoeffKey::new(k, n).unwrap();
                assert_close(&c_rootsum_eval(key, &tp).unwrap(), &c_eval(key, &tp).unwrap(), &format!("{key}"));
            }
        }
    }
}
