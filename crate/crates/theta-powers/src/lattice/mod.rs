//! Lattice sums of quadratic forms: point counts in ellipsoids, generating series
//! grouped by level, the series `Σ n^α xⁿ`, and the Poisson summation check.

pub mod form;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub use form::{ellipsoid_volume, lattice_count, QuadLinForm, ENUMERATION_BUDGET};

use crate::arith::{geometric_tail, pow2_up, ErrValue, Mag, Precision};
use crate::coeff::{gamma_eval, CoeffKey};
use crate::error::{Error, Result};
use form::ratio;

fn require_inside_unit_disc(x: &ErrValue) -> Result<()> {
    if x.abs_upper() >= Mag::from_f64(1.0) {
        return Err(Error::Divergence(format!("|x| = {x} is not certified below 1")));
    }
    if !x.certified_nonzero() {
        return Err(Error::Domain("x must be certified nonzero".into()));
    }
    Ok(())
}

/// Level `M` such that the points with `E(y) > M` contribute at most `target`, and that bound.
///
/// Points with `E` in `(M + j, M + j + 1]` number at most the box bound `B(M + j + 1)`
/// and have `|x|^E <= |x|^{M+j}`. The ratio `B(M+1)/B(M)` decreases in `M`, so the
/// majorant is geometric from its first term on.
fn level_cut(form: &QuadLinForm, xl: f64, target: Mag) -> Result<(BigRational, Mag)> {
    let floor = form.real_minimum().floor().to_integer().to_i64().ok_or_else(|| Error::Scale("form minimum".into()))?;
    let mut m = floor + 1;
    loop {
        let mf = m as f64;
        let b1 = form.count_bound(mf + 1.0).log2();
        let b2 = form.count_bound(mf + 2.0).log2();
        let ratio_l = xl + b2 - b1;
        if ratio_l < -1e-6 {
            let tail = geometric_tail(pow2_up(ratio_l), pow2_up(b1 + mf * xl))?;
            if tail <= target {
                return Ok((BigRational::from_integer(BigInt::from(m)), tail));
            }
        }
        if form.count_bound(mf) > ENUMERATION_BUDGET as f64 {
            return Err(Error::NonConvergence("lattice sum needs more points than the enumeration budget".into()));
        }
        m += 1 + (m - floor) / 32;
    }
}

/// `Σ_y phase(y) x^{E(y)}` where `y_unit = x^{1/D}` with `D` the value denominator.
fn level_sum(
    form: &QuadLinForm,
    xl: f64,
    y_unit: &ErrValue,
    phase: Option<&dyn Fn(&[i64]) -> Result<Rational64>>,
) -> Result<ErrValue> {
    let prec = y_unit.precision();
    let (cut, tail) = level_cut(form, xl, prec.target())?;
    let mut groups: BTreeMap<(i128, Rational64), u64> = BTreeMap::new();
    let mut failure = None;
    form.for_each_point(&cut, |v, y| {
        let p = match phase {
            None => Rational64::zero(),
            Some(f) => match f(y) {
                Ok(p) => p,
                Err(e) => {
                    failure.get_or_insert(e);
                    Rational64::zero()
                }
            },
        };
        *groups.entry((v, p)).or_insert(0) += 1;
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let mut sum = ErrValue::zero(prec);
    let mut cache: Option<(i128, ErrValue)> = None;
    for ((v, p), count) in groups {
        let power = match &cache {
            Some((w, pw)) if *w == v => pw.clone(),
            Some((w, pw)) => pw.mul(&y_unit.powi(i64::try_from(v - w).map_err(|_| Error::Scale("level gap".into()))?)?),
            None => y_unit.powi(i64::try_from(v).map_err(|_| Error::Scale("level".into()))?)?,
        };
        cache = Some((v, power.clone()));
        let mut term = power.mul_i64(count as i64);
        if !p.is_zero() {
            term = term.mul(&ErrValue::exp_i_pi(p, prec));
        }
        sum = sum.add(&term);
    }
    Ok(sum.inflate(tail))
}

/// `Φ(x) = Σ_{y ∈ Z^k} x^{E(y)}`.
///
/// When the form takes non-integer values `x` must be a positive real, which fixes
/// the branch of the fractional powers.
pub fn phi_eval(form: &QuadLinForm, x: &ErrValue) -> Result<ErrValue> {
    require_inside_unit_disc(x)?;
    let d = form.value_denominator();
    let y_unit = if d.is_one() {
        x.clone()
    } else {
        if !x.is_real() || x.real_part().real_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain("fractional levels need a positive real x".into()));
        }
        let d = d.to_i64().ok_or_else(|| Error::Scale("value denominator".into()))?;
        x.real_part().ln()?.div_i64(d).exp()
    };
    level_sum(form, x.abs_upper().log2(), &y_unit, None)
}

/// `f_{k,n}(x) = Σ_{m ∈ Z^k} x^{Q(m) - nS(m)}`, through `γ_{k+1,n}(x) = x^{n(n-1)/2} f_{k,n}(x)`.
pub fn f_kn_eval(k: u32, n: i64, x: &ErrValue) -> Result<ErrValue> {
    require_inside_unit_disc(x)?;
    let g = gamma_eval(CoeffKey::new(k + 1, n)?, x, None)?;
    let e = n.checked_mul(n - 1).ok_or_else(|| Error::Scale("exponent overflow".into()))? / 2;
    if e == 0 {
        return Ok(g);
    }
    Ok(g.mul(&x.powi(-e)?))
}

/// `S_α(x) = Σ_{n>=1} n^α xⁿ` for real `0 < x < 1` and `α > 0`.
pub fn s_alpha_eval(alpha: f64, x: &ErrValue) -> Result<ErrValue> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Argument(format!("exponent α must be positive, got {alpha}")));
    }
    if !x.is_real() || x.real_part().real_sign() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain("x must be a certified positive real".into()));
    }
    require_inside_unit_disc(x)?;
    let prec = x.precision();
    let xl = x.abs_upper().log2();
    let target = prec.target();
    // beyond N the term ratio is at most (1 + 1/N)^α x
    let mut n_max: u64 = 1;
    let tail = loop {
        let nf = n_max as f64 + 1.0;
        let ratio_l = alpha * (1.0 + 1.0 / nf).log2() + xl;
        if ratio_l < -1e-9 {
            let t = geometric_tail(pow2_up(ratio_l), pow2_up(alpha * nf.log2() + nf * xl))?;
            if t <= target {
                break t;
            }
        }
        n_max += 1 + n_max / 64;
        if n_max > 100_000_000 {
            return Err(Error::NonConvergence("S_α needs too many terms".into()));
        }
    };
    let integral = alpha.fract() == 0.0 && alpha <= 64.0;
    let a = ErrValue::from_f64(alpha, prec);
    let mut sum = ErrValue::zero(prec);
    let mut xp = ErrValue::one(prec);
    for n in 1..=n_max {
        xp = xp.mul(x);
        let nv = ErrValue::from_i64(n as i64, prec);
        let pw = if integral { nv.powi(alpha as i64)? } else { nv.ln()?.mul(&a).exp() };
        sum = sum.add(&pw.mul(&xp));
    }
    Ok(sum.inflate(tail))
}

/// Predicted growth `Γ(α+1)/(1-x)^{α+1}` of `S_α(x)` as `x -> 1`.
pub fn s_alpha_main_term(alpha: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma(alpha + 1.0) / (1.0 - x).powf(alpha + 1.0)
}

/// Both sides of the Poisson summation identity for the Gaussian `e^{-E(y)}`:
/// `Σ e^{-E(m)} = π^{k/2} e^{bᵀA⁻¹b/4} / √det A · Σ e^{-π² mᵀA⁻¹m} e^{iπ bᵀA⁻¹m}`.
pub fn poisson_sides(form: &QuadLinForm, prec: Precision) -> Result<(ErrValue, ErrValue)> {
    let k = form.dim();
    let d = form.value_denominator().to_i64().ok_or_else(|| Error::Scale("value denominator".into()))?;
    let e_log2 = -std::f64::consts::LOG2_E;
    let lhs = level_sum(form, e_log2, &ErrValue::from_i64(-1, prec).div_i64(d).exp(), None)?;

    let zero = vec![BigRational::zero(); k];
    let dual = QuadLinForm::new(form.inverse().to_vec(), zero)?;
    let dd = dual.value_denominator().to_i64().ok_or_else(|| Error::Scale("dual denominator".into()))?;
    let pi = ErrValue::pi(prec);
    let pi2 = pi.sqr();
    let y_unit = pi2.neg().div_i64(dd).exp();
    let pi2_log2 = -(std::f64::consts::PI.powi(2) * std::f64::consts::LOG2_E) * (1.0 - 1e-12);
    // w = A⁻¹b, so the phase at m is wᵀm
    let w: Vec<BigRational> = (0..k)
        .map(|i| (0..k).fold(BigRational::zero(), |acc, j| acc + &form.inverse()[i][j] * &form.linear()[j]))
        .collect();
    let phase = |m: &[i64]| -> Result<Rational64> {
        let mut s = BigRational::zero();
        for (wi, &mi) in w.iter().zip(m) {
            s += wi * BigInt::from(mi);
        }
        let two = ratio(2, 1);
        let r = &s - (&s / &two).floor() * &two;
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
            _ => Err(Error::Scale("phase does not fit in 64-bit rationals".into())),
        }
    };
    let dual_sum = level_sum(&dual, pi2_log2, &y_unit, Some(&phase))?;

    let depth = form.depth();
    let depth = ErrValue::from_ratio(depth.numer(), depth.denom(), prec).exp();
    let det = form.det();
    let root_det = ErrValue::from_ratio(det.numer(), det.denom(), prec).sqrt()?;
    let prefactor = pi.sqrt()?.powi(k as i64)?.mul(&depth).div(&root_det)?;
    Ok((lhs, prefactor.mul(&dual_sum)))
}

/// Left side minus right side of [`poisson_sides`].
pub fn poisson_residual(form: &QuadLinForm, prec: Precision) -> Result<ErrValue> {
    let (l, r) = poisson_sides(form, prec)?;
    Ok(l.sub(&r))
}

/// A random positive definite form `((MᵀM + I)/2, b/2)` with small integer `M` and `b`.
pub fn random_form<R: Rng>(rng: &mut R, k: usize) -> Result<QuadLinForm> {
    let m: Vec<Vec<i64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let a = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let dot: i64 = (0..k).map(|r| m[r][i] * m[r][j]).sum::<i64>() + i64::from(i == j);
                    ratio(dot, 2)
                })
                .collect()
        })
        .collect();
    let b = (0..k).map(|_| ratio(rng.gen_range(-3..=3), 2)).collect();
    QuadLinForm::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(x: f64, d: u32) -> ErrValue {
        ErrValue::from_f64(x, Precision::new(d))
    }

    #[test]
    fn hexagonal_series_at_one_half() {
        let f = QuadLinForm::theta_power(2, 0).unwrap();
        let v = phi_eval(&f, &real(0.5, 30)).unwrap();
        let g = gamma_eval(CoeffKey::new(3, 0).unwrap(), &real(0.5, 30), None).unwrap();
        assert!(v.overlaps(&g), "{v} vs {g}");
        assert!(v.re_f64() > 5.1875);
    }

    #[test]
    fn lattice_series_matches_coefficient_route() {
        for (k, n) in [(2usize, 1i64), (3, 0), (3, 2), (1, 3)] {
            let x = real(0.3, 30);
            let direct = phi_eval(&QuadLinForm::theta_power(k, n).unwrap(), &x).unwrap();
            let via_gamma = f_kn_eval(k as u32, n, &x).unwrap();
            assert!(direct.overlaps(&via_gamma), "({k},{n}): {direct} vs {via_gamma}");
            assert!(direct.radius() < Mag::pow2(-90));
        }
    }

    #[test]
    fn even_part_identity() {
        let f = QuadLinForm::theta_power(2, 0).unwrap();
        let x = real(0.6, 30);
        let lhs = phi_eval(&f, &x.neg()).unwrap();
        let rhs = phi_eval(&f, &x.powi(4).unwrap()).unwrap().mul_i64(2).sub(&phi_eval(&f, &x).unwrap());
        assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn phi_growth_near_one() {
        let f = QuadLinForm::theta_power(2, 0).unwrap();
        let v = phi_eval(&f, &real(0.99, 15)).unwrap().re_f64();
        let normalized = v * 0.01 * (0.75f64).sqrt() / std::f64::consts::PI;
        assert!((0.8..1.2).contains(&normalized), "{normalized}");
    }

    #[test]
    fn fractional_levels_need_positive_x() {
        let f = QuadLinForm::new(vec![vec![ratio(1, 2)]], vec![ratio(1, 3)]).unwrap();
        assert!(phi_eval(&f, &real(0.4, 20)).is_ok());
        assert!(phi_eval(&f, &real(-0.4, 20)).is_err());
    }

    #[test]
    fn s_alpha_closed_forms() {
        let one = s_alpha_eval(1.0, &real(0.5, 30)).unwrap();
        assert!(one.overlaps(&real(2.0, 30)));
        let two = s_alpha_eval(2.0, &real(0.5, 30)).unwrap();
        assert!(two.overlaps(&real(6.0, 30)));
        let r = s_alpha_eval(1.5, &real(0.99, 15)).unwrap().re_f64() / s_alpha_main_term(1.5, 0.99);
        assert!((0.9..1.1).contains(&r), "{r}");
    }

    #[test]
    fn poisson_examples() {
        let p = Precision::new(30);
        let tiny = Mag::pow2(-90);
        let hex = QuadLinForm::theta_power(2, 0).unwrap();
        let r = poisson_residual(&hex, p).unwrap();
        assert!(r.contains_zero() && r.radius() < tiny, "{r}");
        let shifted = QuadLinForm::new(hex.matrix().to_vec(), vec![ratio(1, 1), ratio(1, 1)]).unwrap();
        assert!(poisson_residual(&shifted, p).unwrap().contains_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=3 {
            let f = random_form(&mut rng, k).unwrap();
            let r = poisson_residual(&f, p).unwrap();
            assert!(r.contains_zero() && r.radius() < tiny, "{f}: {r}");
        }
    }

    #[test]
    fn poisson_with_fractional_linear_part() {
        // with a linear part the dual sum is complex termwise; its imaginary parts must cancel
        let f = QuadLinForm::new(vec![vec![ratio(1, 2)]], vec![ratio(1, 3)]).unwrap();
        let (l, r) = poisson_sides(&f, Precision::new(30)).unwrap();
        assert!(l.overlaps(&r));
        assert!(r.imag_part().contains_zero());
    }
}
