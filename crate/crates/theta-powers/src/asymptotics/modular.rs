//! The coefficients near `q = -1` through the modular transform `τ -> τ/(2τ+1)`.
//!
//! With `q = e^{πi - 2πt}` the coefficient `γ_{k,n}(q)` is an elementary factor
//! times `S_{k,n} = Σ_{α∈Λ} s_α^k`, and each `s_α` is a Gaussian sum in the dual
//! nome `q' = e^{-πi - π/(2t)}` which is tiny for small `t`.

use num_rational::Rational64;

use crate::arith::{ErrValue, Mag, Precision, TauPoint};
use crate::error::{Error, Result};

use super::growth_sign;

/// `τ = 1/2 + it` together with its transform `τ' = -1/2 + i/(4t)`.
#[derive(Clone, Debug)]
pub struct ModularPoint {
    t: f64,
    // upper bound for every point of `t_ball`, used by the Gaussian tail bounds
    t_up: f64,
    t_ball: ErrValue,
    point: TauPoint,
    tau_dual: ErrValue,
    nome_dual: ErrValue,
}

impl ModularPoint {
    pub fn new(t: f64, prec: Precision) -> Result<ModularPoint> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t must be a positive real, got {t}")));
        }
        ModularPoint::from_height(ErrValue::from_f64(t, prec))
    }

    /// The point with `t` given as a ball, for example `t = -ln(-q)/(2π)` for a negative nome.
    pub fn from_height(t_ball: ErrValue) -> Result<ModularPoint> {
        let prec = t_ball.precision();
        if !t_ball.is_real() || t_ball.real_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!("t must be a certified positive real, got {t_ball}")));
        }
        let t = t_ball.re_f64();
        let t_up = t_ball.abs_upper().to_f64() * (1.0 + 1e-12);
        let half = ErrValue::from_rational(Rational64::new(1, 2), prec);
        let point = TauPoint::from_tau(ErrValue::complex(&half, &t_ball))?;
        let dual_height = t_ball.mul_i64(4).recip()?;
        let tau_dual = ErrValue::complex(&half.neg(), &dual_height);
        // q' = e^{2πiτ'} = -e^{-π/(2t)}
        let nome_dual = ErrValue::pi(prec).mul(&dual_height).mul_i64(-2).exp().neg();
        Ok(ModularPoint { t, t_up, t_ball, point, tau_dual, nome_dual })
    }

    /// The point whose nome `e^{πi-2πt}` equals the given negative real `q`.
    pub fn from_negative_nome(q: &ErrValue) -> Result<ModularPoint> {
        if !q.is_real() || q.real_sign() != Some(std::cmp::Ordering::Less) {
            return Err(Error::Domain(format!("nome must be a certified negative real, got {q}")));
        }
        let two_pi = ErrValue::pi(q.precision()).mul_i64(2);
        ModularPoint::from_height(q.neg().ln()?.neg().div(&two_pi)?)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn precision(&self) -> Precision {
        self.point.precision()
    }

    pub fn tau(&self) -> &ErrValue {
        self.point.tau()
    }

    /// `q = e^{2πiτ} = -e^{-2πt}` with its square root fixed by `τ`.
    pub fn point(&self) -> &TauPoint {
        &self.point
    }

    pub fn nome(&self) -> &ErrValue {
        self.point.nome()
    }

    pub fn tau_dual(&self) -> &ErrValue {
        &self.tau_dual
    }

    pub fn nome_dual(&self) -> &ErrValue {
        &self.nome_dual
    }
}

/// `Γ_{k,n}(t) = k^{-1/2} 2^{-k/2} e^{πn(k-n)t/k} t^{(1-k)/2}`, the growth scale of `γ_{k,n}(e^{πi-2πt})`.
pub fn gamma_profile(k: u32, n: i64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let kf = k as f64;
    let nf = n as f64;
    let expo = std::f64::consts::PI * nf * (kf - nf) * t / kf;
    Ok(kf.powf(-0.5) * 2f64.powf(-kf / 2.0) * expo.exp() * t.powf((1.0 - kf) / 2.0))
}

fn gamma_profile_ball(k: u32, n: i64, mp: &ModularPoint) -> Result<ErrValue> {
    let prec = mp.precision();
    let k64 = k as i64;
    let expo = ErrValue::pi(prec).mul(&mp.t_ball).mul(&ErrValue::from_rational(Rational64::new(n * (k64 - n), k64), prec));
    let kt = ErrValue::from_i64(k64, prec);
    // t^{(1-k)/2} 2^{-k/2} k^{-1/2} = (2t)^{-k/2} (t/k)^{1/2}
    let root = mp.t_ball.div(&kt)?.sqrt()?;
    let scale = mp.t_ball.mul_i64(2).sqrt()?.powi(-k64)?;
    Ok(expo.exp().mul(&root).mul(&scale))
}

/// `Λ_{k,n} = {(2j+n)/k mod 2}` represented in `(-1, 1]`, sorted.
pub fn lambda_system(k: u32, n: i64) -> Result<Vec<Rational64>> {
    if k == 0 {
        return Err(Error::Argument("Λ needs k >= 1".into()));
    }
    let k = k as i64;
    let mut out: Vec<Rational64> = (0..k)
        .map(|j| {
            // numerator reduced into (-k, k]
            let mut num = (2 * j + n).rem_euclid(2 * k);
            if num > k {
                num -= 2 * k;
            }
            Rational64::new(num, k)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `Σ_m e^{πi φ(m)} e^{-π(m+β)²/w}` for a positive ball `w <= w_up`.
///
/// Terms with `|m+β| > R` are dropped. On each side they are bounded by a
/// geometric series with first term `e^{-cR²}` and ratio `e^{-2cR}`, `c = π/w_up`.
fn gaussian_sum(w: &ErrValue, w_up: f64, beta: Rational64, phase: impl Fn(i64) -> Rational64) -> Result<ErrValue> {
    let prec = w.precision();
    let c = std::f64::consts::PI / w_up;
    let need = prec.bits() as f64 * std::f64::consts::LN_2 + 8.0;
    let radius = (need / c).sqrt() + 1.0;
    if radius > 1e5 {
        return Err(Error::NonConvergence(format!("Gaussian sum with width {w_up} needs too many terms")));
    }
    let b = *beta.numer() as f64 / *beta.denom() as f64;
    let lo = (-b - radius).ceil() as i64;
    let hi = (-b + radius).floor() as i64;
    let weight = ErrValue::pi(prec).div(w)?.neg();
    let mut acc = ErrValue::zero(prec);
    for m in lo..=hi {
        let u = beta + Rational64::from_integer(m);
        let gauss = weight.mul(&ErrValue::from_rational(u * u, prec)).exp();
        let ph = phase(m);
        acc = acc.add(&if *ph.numer() == 0 { gauss } else { ErrValue::exp_i_pi(ph, prec).mul(&gauss) });
    }
    let first = -c * radius * radius;
    let ratio = -2.0 * c * radius;
    let tail = Mag::exp_f64(first + 1e-9).mul(Mag::from_f64(2.0)).div(Mag::from_f64(1.0).sub_down(Mag::exp_f64(ratio)));
    Ok(acc.inflate(tail))
}

/// `s_α = Σ_m e^{-πi m(m/2 + n/k)} e^{-π(α+m)²/(4t)}`.
pub fn s_alpha_modular(mp: &ModularPoint, k: u32, n: i64, alpha: Rational64) -> Result<ErrValue> {
    if k == 0 {
        return Err(Error::Argument("s_α needs k >= 1".into()));
    }
    let k64 = k as i64;
    gaussian_sum(&mp.t_ball.mul_i64(4), 4.0 * mp.t_up, alpha, |m| -(Rational64::new(m * m, 2) + Rational64::new(m * n, k64)))
}

/// `ϑ_{q^k}(1)` at `q = e^{πi-2πt}` through the Jacobi transform, with full relative
/// accuracy even where it is exponentially small.
///
/// With `u = kt` the even and odd parts of `Σ e^{-πm²u}` are `(ϑ₃ ± ϑ₄)/2`, where
/// `ϑ₃(iu) = u^{-1/2} Σ e^{-πm²/u}` and `ϑ₄(iu) = u^{-1/2} Σ e^{-π(m+1/2)²/u}`, and
/// the odd part carries the phase `e^{πik/2}`.
pub fn theta_qk_one_modular(mp: &ModularPoint, k: u32) -> Result<ErrValue> {
    if k == 0 {
        return Err(Error::Argument("ϑ_(q^k)(1) needs k >= 1".into()));
    }
    let u = mp.t_ball.mul_i64(k as i64);
    let u_up = mp.t_up * k as f64;
    let scale = u.sqrt()?.recip()?;
    let t3 = gaussian_sum(&u, u_up, Rational64::from_integer(0), |_| Rational64::from_integer(0))?.mul(&scale);
    let t4 = gaussian_sum(&u, u_up, Rational64::new(1, 2), |_| Rational64::from_integer(0))?.mul(&scale);
    Ok(match k % 4 {
        0 => t3,
        2 => t4,
        r => {
            let even = t3.add(&t4).div_i64(2);
            let odd = t3.sub(&t4).div_i64(2);
            let phase = if r == 1 { odd.mul_i() } else { odd.mul_i().neg() };
            even.add(&phase)
        }
    })
}

/// `S_{k,n} = Σ_{α∈Λ_{k,n}} s_α^k`.
pub fn s_kn_eval(mp: &ModularPoint, k: u32, n: i64) -> Result<ErrValue> {
    let mut acc = ErrValue::zero(mp.precision());
    for alpha in lambda_system(k, n)? {
        acc = acc.add(&s_alpha_modular(mp, k, n, alpha)?.powi(k as i64)?);
    }
    Ok(acc)
}

/// `γ_{k,n}(q)` at `q = e^{πi-2πt}` from the transformed side:
/// `e^{πi(k-2n)/4} e^{πn(k-n)t/k} (2t)^{-k/2} S_{k,n} / (k ϑ_{q^k}(1))`.
pub fn gamma_via_modular(mp: &ModularPoint, k: u32, n: i64) -> Result<ErrValue> {
    if k < 1 || n < 0 || n >= k as i64 {
        return Err(Error::Argument(format!("modular form needs 0 <= n < k, got k={k}, n={n}")));
    }
    let prec = mp.precision();
    let k64 = k as i64;
    let norm = theta_qk_one_modular(mp, k)?.mul_i64(k64);
    let phase = ErrValue::exp_i_pi(Rational64::new(k64 - 2 * n, 4), prec);
    let expo = ErrValue::pi(prec).mul(&mp.t_ball).mul(&ErrValue::from_rational(Rational64::new(n * (k64 - n), k64), prec));
    let scale = mp.t_ball.mul_i64(2).sqrt()?.powi(-k64)?;
    phase.mul(&expo.exp()).mul(&scale).mul(&s_kn_eval(mp, k, n)?).div(&norm)
}

/// Leading behaviour of `ϑ_{q^k}(1)` as `t -> 0⁺`, by `k mod 4`.
pub fn theta_qk_one_asymptote(k: u32, t: f64, prec: Precision) -> Result<ErrValue> {
    if k == 0 || !(t > 0.0) {
        return Err(Error::Argument(format!("asymptote needs k >= 1 and t > 0, got k={k}, t={t}")));
    }
    let kt = ErrValue::from_f64(t, prec).mul_i64(k as i64);
    let inv_root = kt.sqrt()?.recip()?;
    let half = ErrValue::from_rational(Rational64::new(1, 2), prec).sqrt()?;
    Ok(match k % 4 {
        0 => inv_root,
        1 => ErrValue::exp_i_pi(Rational64::new(1, 4), prec).mul(&inv_root).mul(&half),
        2 => {
            let decay = ErrValue::pi(prec).div(&kt.mul_i64(4))?.neg().exp();
            inv_root.mul_i64(2).mul(&decay)
        }
        _ => ErrValue::exp_i_pi(Rational64::new(-1, 4), prec).mul(&inv_root).mul(&half),
    })
}

/// Decay rate `κ = π/(16k)` used to bound the vanishing class.
pub fn vanishing_rate(k: u32) -> f64 {
    std::f64::consts::PI / (16.0 * k as f64)
}

/// Predicted `γ_{k,n}(e^{πi-2πt})` for small `t`.
///
/// Diverging classes give `±2 Γ_{k,n}(t)` or `±√2 Γ_{k,n}(t)` as an exact midpoint.
/// The vanishing class gives a ball about zero of radius `Γ_{k,n}(t) e^{-κ/t}`.
pub fn gamma_asymptotic_estimate(k: u32, n: i64, t: f64, prec: Precision) -> Result<ErrValue> {
    if k < 3 || n < 0 || n >= k as i64 {
        return Err(Error::Argument(format!("estimate needs k >= 3 and 0 <= n < k, got k={k}, n={n}")));
    }
    if !(t > 0.0 && t <= 0.2) {
        return Err(Error::Domain(format!("estimate needs t in (0, 0.2], got {t}")));
    }
    let mp = ModularPoint::new(t, prec)?;
    let profile = gamma_profile_ball(k, n, &mp)?;
    Ok(match growth_sign(k as i64, n) {
        Some((sign, constant)) => {
            let c = if constant == 2.0 {
                ErrValue::from_i64(2, prec)
            } else {
                ErrValue::from_i64(2, prec).sqrt()?
            };
            profile.mul(&c).mul_i64(sign)
        }
        None => {
            let bound = profile.abs_upper().mul(Mag::exp_f64(-vanishing_rate(k) / t));
            ErrValue::zero(prec).inflate(bound)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{gamma_eval, CoeffKey};
    use crate::theta::vartheta_eval;

    fn mp(t: f64) -> ModularPoint {
        ModularPoint::new(t, Precision::new(30)).unwrap()
    }

    #[test]
    fn transform_relation() {
        let p = mp(0.13);
        let prec = p.precision();
        let two = ErrValue::from_i64(2, prec);
        let one = ErrValue::one(prec);
        let lhs = p.tau().mul(&two).sub(&one).mul(&p.tau_dual().mul(&two).add(&one));
        assert!(lhs.overlaps(&one.neg()));
        assert!(p.nome_dual().abs_upper().to_f64() < (-std::f64::consts::PI / 0.26).exp() * 1.000001);
        assert!(ModularPoint::new(0.0, prec).is_err());
    }

    #[test]
    fn profile_values() {
        assert!((gamma_profile(3, 0, 0.1).unwrap() - 2.0412415).abs() < 1e-6);
        let g = gamma_profile(4, 2, 0.05).unwrap();
        let expected = 0.5 * 0.25 * (std::f64::consts::PI * 0.05).exp() * 0.05f64.powf(-1.5);
        assert!((g / expected - 1.0).abs() < 1e-14);
        let ball = gamma_profile_ball(4, 2, &mp(0.05)).unwrap();
        assert!((ball.re_f64() / g - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_systems_by_parity() {
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(lambda_system(4, 0).unwrap(), vec![r(-1, 2), r(0, 1), r(1, 2), r(1, 1)]);
        assert_eq!(lambda_system(4, 1).unwrap(), vec![r(-3, 4), r(-1, 4), r(1, 4), r(3, 4)]);
        assert_eq!(lambda_system(3, 0).unwrap(), vec![r(-2, 3), r(0, 1), r(2, 3)]);
        assert_eq!(lambda_system(3, 1).unwrap(), vec![r(-1, 3), r(1, 3), r(1, 1)]);
    }

    #[test]
    fn antisymmetric_point_vanishes() {
        let s = s_alpha_modular(&mp(0.2), 4, 2, Rational64::new(-1, 2)).unwrap();
        assert!(s.contains_zero());
        assert!(s.radius() < Mag::pow2(-90));
    }

    #[test]
    fn kth_power_has_period_two() {
        let p = mp(0.15);
        for (k, n, a) in [(3u32, 1i64, Rational64::new(1, 7)), (5, 2, Rational64::new(-2, 5)), (4, 3, Rational64::new(3, 4))] {
            let s = s_alpha_modular(&p, k, n, a).unwrap().powi(k as i64).unwrap();
            let shifted = s_alpha_modular(&p, k, n, a + 2).unwrap().powi(k as i64).unwrap();
            assert!(s.overlaps(&shifted), "({k},{n},{a})");
        }
    }

    #[test]
    fn two_term_expansion_at_zero() {
        let p = mp(0.05);
        let s = s_alpha_modular(&p, 3, 0, Rational64::from_integer(0)).unwrap();
        let (re, im) = s.to_f64_pair();
        let e = (-std::f64::consts::PI / 0.2).exp();
        assert!((re - 1.0).abs() < 1e-9);
        assert!((im + 2.0 * e).abs() < 1e-9 * e);
    }

    #[test]
    fn modular_side_matches_coefficients() {
        let p = mp(0.1);
        for k in 3..=5u32 {
            for n in 0..k as i64 {
                let direct = gamma_eval(CoeffKey::new(k, n).unwrap(), p.nome(), None).unwrap();
                let modular = gamma_via_modular(&p, k, n).unwrap();
                assert!(direct.overlaps(&modular), "({k},{n}): {direct} vs {modular}");
                assert!(modular.radius() < Mag::pow2(-80));
            }
        }
    }

    #[test]
    fn s_limits_by_parity() {
        let t = 0.03;
        let p = mp(t);
        let pi = std::f64::consts::PI;
        let close = |(a, b): (f64, f64), (c, d): (f64, f64), tol: f64| ((a - c).hypot(b - d)) <= tol;
        for k in 3..=8u32 {
            let e = (-pi / (4.0 * k as f64 * t)).exp();
            let ik = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][(k % 4) as usize];
            for n in 0..k as i64 {
                let s = s_kn_eval(&p, k, n).unwrap().to_f64_pair();
                let expected = match (k % 2, n % 2) {
                    (0, 0) => {
                        let ang = (2 * n - k as i64) as f64 * pi / 4.0;
                        let c = 2.0 * ang.cos();
                        (c * ang.cos(), c * ang.sin())
                    }
                    (0, _) => (2.0 * (1.0 - ik.0) * e, -2.0 * ik.1 * e),
                    (_, 0) => (1.0 - 2.0 * ik.0 * e, -2.0 * ik.1 * e),
                    _ => (ik.0 + 2.0 * e, ik.1),
                };
                // leading correction is of order e² or e^{-π/(kt)} relative to the retained terms
                assert!(close(s, expected, 0.05 * e.max(1e-300) + e * e * 50.0), "({k},{n}): {s:?} vs {expected:?}");
            }
        }
    }

    #[test]
    fn transformed_theta_at_one() {
        let p = mp(0.07);
        for k in 1..=8u32 {
            let direct = vartheta_eval(&p.point().rebase(k as i64).unwrap(), &ErrValue::one(p.precision())).unwrap();
            let transformed = theta_qk_one_modular(&p, k).unwrap();
            assert!(direct.overlaps(&transformed), "k={k}: {direct} vs {transformed}");
        }
        // exponentially small case keeps its relative accuracy
        let p = mp(0.001);
        let v = theta_qk_one_modular(&p, 6).unwrap();
        assert!(v.abs_lower().to_f64() > 0.0 && v.radius() < v.abs_lower().mul(Mag::pow2(-80)));
    }

    #[test]
    fn negative_nome_round_trip() {
        let prec = Precision::new(30);
        let q = ErrValue::from_f64(-0.163034, prec);
        let p = ModularPoint::from_negative_nome(&q).unwrap();
        assert!(p.nome().overlaps(&q));
        assert!((p.t() - 0.2886746804837041).abs() < 1e-6);
        assert!(ModularPoint::from_negative_nome(&ErrValue::from_f64(0.2, prec)).is_err());
    }

    #[test]
    fn theta_at_one_asymptote() {
        for t in [0.05, 0.03] {
            let p = mp(t);
            for k in 1..=4u32 {
                let exact = vartheta_eval(&p.point().rebase(k as i64).unwrap(), &ErrValue::one(p.precision())).unwrap();
                let approx = theta_qk_one_asymptote(k, t, p.precision()).unwrap();
                let rel = exact.sub(&approx).abs_upper().to_f64() / exact.abs_lower().to_f64();
                // the first omitted term is of relative size 2e^{-π/(4kt)}
                let next = 2.0 * (-std::f64::consts::PI / (4.0 * k as f64 * t)).exp();
                assert!(rel < next * 1.05, "k={k} t={t}: {exact} vs {approx}");
                if k != 3 || t < 0.05 {
                    assert!(rel < 0.01, "k={k} t={t}: {rel}");
                }
            }
        }
    }

    #[test]
    fn estimates_track_coefficients() {
        for (k, n) in [(3u32, 0i64), (3, 1), (4, 0), (5, 1)] {
            let mut prev = f64::INFINITY;
            for t in [0.10, 0.07, 0.05] {
                let p = mp(t);
                let g = gamma_eval(CoeffKey::new(k, n).unwrap(), p.nome(), None).unwrap();
                let est = gamma_asymptotic_estimate(k, n, t, p.precision()).unwrap();
                let dev = (g.re_f64() / est.re_f64() - 1.0).abs();
                assert!(dev <= prev + 1e-12, "({k},{n}) t={t}: {dev} after {prev}");
                prev = dev;
            }
            assert!(prev <= 0.1, "({k},{n}): {prev}");
        }
    }

    #[test]
    fn vanishing_class_is_bounded() {
        for (k, n) in [(4u32, 1i64), (6, 0)] {
            let mut prev = f64::INFINITY;
            for t in [0.10, 0.07, 0.05] {
                let p = mp(t);
                let g = gamma_eval(CoeffKey::new(k, n).unwrap(), p.nome(), None).unwrap();
                let est = gamma_asymptotic_estimate(k, n, t, p.precision()).unwrap();
                assert!(est.contains_zero());
                assert!(g.abs_upper() <= est.radius(), "({k},{n}) t={t}");
                let rel = g.abs_upper().to_f64() / gamma_profile(k, n, t).unwrap();
                assert!(rel < prev);
                prev = rel;
            }
        }
    }
}
