//! The coefficients `γ_{k,n}` of `θ_q(x)^k` and their rescaled form `c_{k,n} = q^{n/2} γ_{k,n}`.
//!
//! Exact integer series come from [`series`]. Numerical values come from four
//! independent routes in [`routes`] that are expected to agree within radii.

pub mod routes;
pub mod series;

use num_rational::Rational64;

pub use routes::{c_closed_eval, c_recurrence_eval, c_rootsum_eval, fourth_power_closed};
pub use series::{
    convolution_identity_series, gamma_series, gamma_series_dp, gamma_series_oracle, support_radius, CoeffKey,
    IntSeries,
};

use crate::arith::{geometric_tail, pow2_up, ErrValue, Mag, Precision, TauPoint};
use crate::asymptotics::{gamma_via_modular, ModularPoint};
use crate::error::{Error, Result};
use crate::theta::require_unit_disc;

/// Automatic truncation orders above this switch evaluation to the bilateral convolution.
pub const SERIES_ORDER_LIMIT: usize = 400;

/// Continuous majorant `(2√(2m) + 5)^k` of the coefficient count bound `(2⌈√(2m)⌉ + 3)^k`, in log2.
fn count_bound_log2(k: u32, m: usize) -> f64 {
    k as f64 * (2.0 * (2.0 * m as f64).sqrt() + 5.0).log2()
}

/// Upper bound for `Σ_{m>order} |γ_{k,n,m}| |q|^m` given `log2|q|`.
pub fn series_tail_bound(k: u32, order: usize, ql: f64) -> Result<Mag> {
    let first = count_bound_log2(k, order + 1) + (order as f64 + 1.0) * ql;
    // the majorant's term ratio decreases in m, so its first value bounds all later ones
    let ratio = ql + count_bound_log2(k, order + 2) - count_bound_log2(k, order + 1);
    if ratio >= 0.0 {
        return Err(Error::NonConvergence(format!("coefficient series majorant does not decay at order {order}")));
    }
    geometric_tail(pow2_up(ratio), pow2_up(first))
}

/// Smallest order whose series tail meets the target, if one exists below `limit`.
pub fn auto_order(k: u32, ql: f64, target: Mag, limit: usize) -> Option<usize> {
    (0..=limit).find(|&n| series_tail_bound(k, n, ql).map(|t| t <= target).unwrap_or(false))
}

/// `γ_{k,n}(q)` with a rigorous truncation bound.
///
/// With an explicit `order` the exact series is used at that order. Otherwise the
/// series is used when a modest order suffices and the bilateral convolution of
/// `q^{m(m-1)/2}` otherwise.
pub fn gamma_eval(key: CoeffKey, q: &ErrValue, order: Option<usize>) -> Result<ErrValue> {
    let ql = require_unit_disc(q)?;
    let (i, shift) = key.reduce()?;
    let base = CoeffKey::new(key.k, i)?;
    let prec = q.precision();
    let value = match order.or_else(|| auto_order(key.k, ql, prec.target(), SERIES_ORDER_LIMIT)) {
        Some(n) => {
            let tail = series_tail_bound(key.k, n, ql)?;
            gamma_series_dp(base, n)?.eval(q).inflate(tail)
        }
        None => gamma_far_eval(base, q)?,
    };
    if shift == 0 {
        return Ok(value);
    }
    let shift = i64::try_from(shift).map_err(|_| Error::Scale("shift exponent overflows".into()))?;
    Ok(q.powi(shift)?.mul(&value))
}

/// Working-precision cap for the transformed route.
const FAR_DIGITS_LIMIT: u32 = 4000;

/// Evaluation where the series is too long: the transformed formula for negative real
/// nomes, where it needs only a few Gaussian terms, and the bilateral convolution otherwise.
fn gamma_far_eval(base: CoeffKey, q: &ErrValue) -> Result<ErrValue> {
    if q.is_real() && q.real_sign() == Some(std::cmp::Ordering::Less) {
        let target = q.precision().target();
        let mut digits = q.precision().digits();
        let mut prev = Mag::INFINITY;
        loop {
            let qw = q.with_precision(Precision::new(digits));
            let mp = ModularPoint::from_negative_nome(&qw)?;
            // γ is real on the real axis, so the imaginary enclosure can be dropped
            let v = gamma_via_modular(&mp, base.k, base.n)?.real_part();
            // cancellation inside S costs digits, so the working precision grows until the
            // target is met; it stops once the input radius of q dominates
            let stalled = v.radius() > prev.mul(Mag::pow2(-32));
            if v.radius() <= target || stalled || digits >= FAR_DIGITS_LIMIT {
                return Ok(v);
            }
            prev = v.radius();
            digits = (digits * 2).min(FAR_DIGITS_LIMIT);
        }
    }
    gamma_convolution_eval(base, q)
}

/// Repeated evaluation of one `γ_{k,n}` at many nomes, sharing a single exact series.
#[derive(Clone, Debug)]
pub struct GammaEvaluator {
    key: CoeffKey,
    base: CoeffKey,
    shift: i64,
    series: IntSeries,
}

impl GammaEvaluator {
    pub fn new(key: CoeffKey) -> Result<GammaEvaluator> {
        let (i, shift) = key.reduce()?;
        let base = CoeffKey::new(key.k, i)?;
        let shift = i64::try_from(shift).map_err(|_| Error::Scale("shift exponent overflows".into()))?;
        let series = gamma_series_dp(base, SERIES_ORDER_LIMIT)?;
        Ok(GammaEvaluator { key, base, shift, series })
    }

    pub fn key(&self) -> CoeffKey {
        self.key
    }

    /// Same value and enclosure rules as [`gamma_eval`] with automatic order.
    pub fn eval(&self, q: &ErrValue) -> Result<ErrValue> {
        let ql = require_unit_disc(q)?;
        let value = match auto_order(self.key.k, ql, q.precision().target(), SERIES_ORDER_LIMIT) {
            Some(n) => self.series.eval_prefix(q, n).inflate(series_tail_bound(self.key.k, n, ql)?),
            None => gamma_far_eval(self.base, q)?,
        };
        if self.shift == 0 {
            return Ok(value);
        }
        Ok(q.powi(self.shift)?.mul(&value))
    }
}

/// `γ_{k,n}(q) = Σ_{m_1+…+m_k=n} Π q^{m_i(m_i-1)/2}` summed over `|m_i| <= M`.
///
/// The omitted tuples have some `|m_i| > M`, so they sum to at most
/// `k T S^{k-1}` with `T` the single-factor tail and `S <= 2/(1-|q|)` the full
/// absolute single-factor sum.
pub fn gamma_convolution_eval(key: CoeffKey, q: &ErrValue) -> Result<ErrValue> {
    key.require_reduced()?;
    let ql = require_unit_disc(q)?;
    let prec = q.precision();
    let target = prec.target();
    let k = key.k as i64;
    let qa = q.abs_upper().to_f64();
    let s_log = (2.0 / (1.0 - qa)).log2();
    let mut big_m: i64 = 1;
    let tail = loop {
        let mf = big_m as f64;
        let single = 1.0 + mf * (mf + 1.0) / 2.0 * ql - (1.0 - qa.powf(mf + 1.0)).log2();
        let t = pow2_up(single + (k as f64).log2() + (k - 1) as f64 * s_log);
        if t <= target {
            break t;
        }
        big_m += 1;
        if big_m > 1_000_000 {
            return Err(Error::Scale("bilateral convolution needs too many terms".into()));
        }
    };

    // a[m + M] = q^{m(m-1)/2}
    let width = (2 * big_m + 1) as usize;
    let mut a = vec![ErrValue::zero(prec); width];
    a[big_m as usize] = ErrValue::one(prec);
    let mut qp = ErrValue::one(prec);
    for m in 0..big_m {
        // q^{(m+1)m/2} = q^{m(m-1)/2} q^m
        a[(big_m + m + 1) as usize] = a[(big_m + m) as usize].mul(&qp);
        qp = qp.mul(q);
        // q^{(m+1)(m+2)/2} = q^{m(m+1)/2} q^{m+1}
        a[(big_m - m - 1) as usize] = a[(big_m - m) as usize].mul(&qp);
    }

    let lo = k / 2;
    let hi = k - lo;
    let mut power = a.clone();
    let mut lo_power = (lo == 1).then(|| a.clone());
    for j in 2..=hi {
        power = convolve(&power, &a, prec);
        if j == lo {
            lo_power = Some(power.clone());
        }
    }
    // power has offset hi*M, lo_power has offset lo*M
    let n = key.n;
    let value = match lo_power {
        None => {
            let idx = n + big_m;
            if (0..width as i64).contains(&idx) {
                a[idx as usize].clone()
            } else {
                ErrValue::zero(prec)
            }
        }
        Some(lp) => {
            let mut acc = ErrValue::zero(prec);
            let lo_off = lo * big_m;
            let hi_off = hi * big_m;
            for (si, x) in lp.iter().enumerate() {
                let s = si as i64 - lo_off;
                let j = n - s + hi_off;
                if (0..power.len() as i64).contains(&j) {
                    acc = acc.add(&x.mul(&power[j as usize]));
                }
            }
            acc
        }
    };
    Ok(value.inflate(tail))
}

fn convolve(a: &[ErrValue], b: &[ErrValue], prec: crate::arith::Precision) -> Vec<ErrValue> {
    let mut out = vec![ErrValue::zero(prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `c_{k,n} = q^{n/2} γ_{k,n}` with `q^{1/2}` fixed by `tp`.
pub fn c_eval(key: CoeffKey, tp: &TauPoint) -> Result<ErrValue> {
    let g = gamma_eval(key, tp.nome(), None)?;
    if key.n == 0 {
        return Ok(g);
    }
    Ok(tp.qpow(Rational64::new(key.n, 2))?.mul(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Precision;

    fn real(x: f64, d: u32) -> ErrValue {
        ErrValue::from_f64(x, Precision::new(d))
    }

    #[test]
    fn sum_of_squares_at_one_half() {
        let v = gamma_eval(CoeffKey::new(2, 0).unwrap(), &real(0.5, 40), None).unwrap();
        let w: f64 = (-8i32..=8).map(|m| 0.5f64.powi(m * m)).sum();
        assert!((v.re_f64() - w).abs() < 1e-15);
        assert!(v.radius() < Mag::pow2(-130));
    }

    #[test]
    fn series_and_convolution_routes_agree() {
        for &(k, n, q) in &[(3u32, 0i64, -0.163034), (4, 1, 0.45), (5, 2, -0.3), (1, 0, 0.7), (2, 1, 0.2)] {
            let key = CoeffKey::new(k, n).unwrap();
            let q = real(q, 40);
            let a = gamma_eval(key, &q, None).unwrap();
            let b = gamma_convolution_eval(key, &q).unwrap();
            assert!(a.overlaps(&b), "{key}: {a} vs {b}");
            assert!(b.radius() < Mag::pow2(-120));
        }
    }

    #[test]
    fn transformed_route_matches_convolution() {
        for (k, n, q) in [(3u32, 0i64, -0.9), (4, 1, -0.85), (6, 2, -0.93), (1, 0, -0.95), (2, 1, -0.9)] {
            let key = CoeffKey::new(k, n).unwrap();
            let q = real(q, 30);
            let a = gamma_far_eval(key, &q).unwrap();
            let b = gamma_convolution_eval(key, &q).unwrap();
            assert!(a.overlaps(&b) && a.radius() < Mag::pow2(-90), "{key}: {a} vs {b}");
        }
    }

    #[test]
    fn large_nome_uses_convolution() {
        let q = real(0.95, 30);
        let v = gamma_eval(CoeffKey::new(3, 1).unwrap(), &q, None).unwrap();
        assert!(v.radius() < Mag::pow2(-90));
        assert!(v.re_f64() > 0.0);
    }

    #[test]
    fn reduction_is_applied() {
        let q = real(0.3, 30);
        let a = gamma_eval(CoeffKey::new(3, 4).unwrap(), &q, None).unwrap();
        let b = q.mul(&gamma_eval(CoeffKey::new(3, 1).unwrap(), &q, None).unwrap());
        assert!(a.overlaps(&b));
    }

    #[test]
    fn evaluator_matches_direct() {
        for (k, n, q) in [(3u32, 0i64, -0.163034), (4, 5, 0.6), (2, 1, -0.97)] {
            let key = CoeffKey::new(k, n).unwrap();
            let q = real(q, 40);
            let a = GammaEvaluator::new(key).unwrap().eval(&q).unwrap();
            let b = gamma_eval(key, &q, None).unwrap();
            assert!(a.overlaps(&b) && a.radius() < Mag::pow2(-120), "{key}: {a} vs {b}");
        }
    }

    #[test]
    fn explicit_order_tail_is_sound() {
        let q = real(0.4, 30);
        let key = CoeffKey::new(3, 0).unwrap();
        let coarse = gamma_eval(key, &q, Some(20)).unwrap();
        let fine = gamma_eval(key, &q, None).unwrap();
        assert!(coarse.overlaps(&fine));
        assert!(series_tail_bound(3, 10, 0.0).is_err());
    }
}
