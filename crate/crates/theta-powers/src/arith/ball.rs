//! Complex midpoint-radius balls over `astro-float`.
//!
//! Every operation returns a ball containing the exact result for every choice of
//! inputs inside the argument balls. Propagation is first order plus the exact
//! second-order cross terms, and each rounded midpoint operation folds a 2-ulp
//! slack into the radius.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::mag::Mag;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 24;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("allocate constant cache"));
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Target decimal precision of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn new(digits: u32) -> Precision {
        Precision { digits: digits.max(1) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Working bits: the decimal target plus guard bits.
    pub fn bits(&self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
    }

    /// Radius at or below which a result meets the decimal target.
    pub fn target(&self) -> Mag {
        Mag::pow2(-((self.digits as f64 * std::f64::consts::LOG2_10).ceil() as i64))
    }

    pub fn scaled(&self, factor: f64) -> Precision {
        Precision::new((self.digits as f64 * factor).ceil() as u32)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

fn bf_zero(bits: usize) -> BigFloat {
    BigFloat::new(bits)
}

/// Upper bound of `|x|`.
pub(crate) fn bf_mag(x: &BigFloat) -> Mag {
    if x.is_zero() {
        return Mag::ZERO;
    }
    match x.as_raw_parts() {
        Some((words, _, _, e, _)) => {
            let top = *words.last().expect("nonzero mantissa");
            Mag::from_parts(((top >> 11) + 1) as f64 / 9007199254740992.0, e as i64)
        }
        None => Mag::INFINITY,
    }
}

/// Lower bound of `|x|`.
pub(crate) fn bf_mag_down(x: &BigFloat) -> Mag {
    if x.is_zero() {
        return Mag::ZERO;
    }
    match x.as_raw_parts() {
        Some((words, _, _, e, _)) => {
            let top = *words.last().expect("nonzero mantissa");
            Mag::from_parts((top >> 11) as f64 / 9007199254740992.0, e as i64)
        }
        None => Mag::ZERO,
    }
}

fn bf_to_f64(x: &BigFloat) -> f64 {
    let m = match x.as_raw_parts() {
        Some((words, _, _, e, _)) if !x.is_zero() => {
            let top = *words.last().expect("nonzero mantissa");
            Mag::from_parts(top as f64 / 18446744073709551616.0, e as i64).to_f64()
        }
        _ => return 0.0,
    };
    if x.is_negative() {
        -m
    } else {
        m
    }
}

fn ulps(m: Mag, bits: usize, n: i64) -> Mag {
    m.mul(Mag::pow2(n - bits as i64))
}

fn check(x: BigFloat) -> BigFloat {
    debug_assert!(!x.is_nan(), "midpoint arithmetic produced NaN");
    x
}

/// A complex ball `{z : |z - mid| <= rad}`.
#[derive(Clone, Debug)]
pub struct ErrValue {
    re: BigFloat,
    im: BigFloat,
    rad: Mag,
    bits: usize,
}

impl ErrValue {
    fn raw(re: BigFloat, im: BigFloat, rad: Mag, bits: usize) -> ErrValue {
        ErrValue { re: check(re), im: check(im), rad, bits }
    }

    pub fn zero(prec: Precision) -> ErrValue {
        let b = prec.bits();
        ErrValue::raw(bf_zero(b), bf_zero(b), Mag::ZERO, b)
    }

    pub fn one(prec: Precision) -> ErrValue {
        ErrValue::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> ErrValue {
        let b = prec.bits();
        ErrValue::raw(BigFloat::from_i64(v, b), bf_zero(b), Mag::ZERO, b)
    }

    /// Exact conversion.
    pub fn from_f64(v: f64, prec: Precision) -> ErrValue {
        let b = prec.bits();
        ErrValue::raw(BigFloat::from_f64(v, b.max(64)), bf_zero(b), Mag::ZERO, b)
    }

    pub fn from_bigint(v: &BigInt, prec: Precision) -> ErrValue {
        let b = prec.bits();
        if let Some(x) = v.to_i128() {
            return ErrValue::raw(BigFloat::from_i128(x, b.max(128)), bf_zero(b), Mag::ZERO, b);
        }
        let re = with_consts(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, b, RM, cc));
        let rad = ulps(bf_mag(&re), b, 1);
        ErrValue::raw(re, bf_zero(b), rad, b)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Precision) -> ErrValue {
        ErrValue::from_bigint(num, prec).div(&ErrValue::from_bigint(den, prec)).expect("nonzero denominator")
    }

    pub fn from_rational(r: Rational64, prec: Precision) -> ErrValue {
        let v = ErrValue::from_i64(*r.numer(), prec);
        if *r.denom() == 1 {
            v
        } else {
            v.div_i64(*r.denom())
        }
    }

    /// Parses a decimal literal such as `-0.163034` or `1.5e-3`.
    pub fn parse_decimal(s: &str, prec: Precision) -> Result<ErrValue> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::Argument(format!("not a decimal number: {s:?}")));
        }
        let b = prec.bits();
        let re = with_consts(|cc| BigFloat::parse(t, Radix::Dec, b, RM, cc));
        if re.is_nan() || re.is_inf() {
            return Err(Error::Argument(format!("not a decimal number: {s:?}")));
        }
        let rad = ulps(bf_mag(&re), b, 1);
        Ok(ErrValue::raw(re, bf_zero(b), rad, b))
    }

    pub fn pi(prec: Precision) -> ErrValue {
        let b = prec.bits();
        let re = with_consts(|cc| cc.pi(b, RM));
        let rad = ulps(bf_mag(&re), b, 1);
        ErrValue::raw(re, bf_zero(b), rad, b)
    }

    /// The imaginary unit.
    pub fn i(prec: Precision) -> ErrValue {
        let b = prec.bits();
        ErrValue::raw(bf_zero(b), BigFloat::from_i64(1, b), Mag::ZERO, b)
    }

    /// Builds a ball from a real and an imaginary ball.
    pub fn complex(re: &ErrValue, im: &ErrValue) -> ErrValue {
        re.add(&im.mul_i())
    }

    /// Widens the radius by `extra`.
    pub fn inflate(mut self, extra: Mag) -> ErrValue {
        self.rad = self.rad.add(extra);
        self
    }

    pub fn radius(&self) -> Mag {
        self.rad
    }

    /// The same ball carried at another working precision; narrowing folds the rounding into the radius.
    pub fn with_precision(&self, prec: Precision) -> ErrValue {
        let b = prec.bits();
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.set_precision(b, RM).expect("midpoint precision change");
        im.set_precision(b, RM).expect("midpoint precision change");
        let rad = if b < self.bits { self.rad.add(ulps(self.mid_abs(), b, 1)) } else { self.rad };
        ErrValue::raw(re, im, rad, b)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn precision(&self) -> Precision {
        Precision::new((self.bits.saturating_sub(GUARD_BITS) as f64 / std::f64::consts::LOG2_10).floor() as u32)
    }

    /// Whether the midpoint lies on the real axis.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn real_part(&self) -> ErrValue {
        ErrValue::raw(self.re.clone(), bf_zero(self.bits), self.rad, self.bits)
    }

    pub fn imag_part(&self) -> ErrValue {
        ErrValue::raw(self.im.clone(), bf_zero(self.bits), self.rad, self.bits)
    }

    /// Upper bound of `|mid|`.
    pub fn mid_abs(&self) -> Mag {
        Mag::hypot(bf_mag(&self.re), bf_mag(&self.im))
    }

    /// Upper bound of `|z|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid_abs().add(self.rad)
    }

    /// Lower bound of `|z|` over the ball.
    pub fn abs_lower(&self) -> Mag {
        Mag::hypot_down(bf_mag_down(&self.re), bf_mag_down(&self.im)).sub_down(self.rad)
    }

    /// True when the ball provably excludes zero.
    pub fn certified_nonzero(&self) -> bool {
        !self.abs_lower().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.certified_nonzero()
    }

    /// Certified sign of the real part, if the ball does not straddle the imaginary axis.
    pub fn real_sign(&self) -> Option<Ordering> {
        if bf_mag_down(&self.re) > self.rad {
            Some(if self.re.is_negative() { Ordering::Less } else { Ordering::Greater })
        } else {
            None
        }
    }

    /// True when the two balls intersect.
    pub fn overlaps(&self, other: &ErrValue) -> bool {
        self.sub(other).contains_zero()
    }

    /// Approximate midpoint as `(re, im)` doubles.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    pub fn re_f64(&self) -> f64 {
        bf_to_f64(&self.re)
    }

    /// Copy with the radius replaced by zero; used where exactness is known.
    pub fn midpoint(&self) -> ErrValue {
        ErrValue::raw(self.re.clone(), self.im.clone(), Mag::ZERO, self.bits)
    }

    pub fn neg(&self) -> ErrValue {
        ErrValue::raw(self.re.neg(), self.im.neg(), self.rad, self.bits)
    }

    pub fn conj(&self) -> ErrValue {
        ErrValue::raw(self.re.clone(), self.im.neg(), self.rad, self.bits)
    }

    /// Multiplication by `i`, exact.
    pub fn mul_i(&self) -> ErrValue {
        ErrValue::raw(self.im.neg(), self.re.clone(), self.rad, self.bits)
    }

    pub fn add(&self, o: &ErrValue) -> ErrValue {
        let b = self.bits.max(o.bits);
        let re = self.re.add(&o.re, b, RM);
        let im = if self.im.is_zero() && o.im.is_zero() { bf_zero(b) } else { self.im.add(&o.im, b, RM) };
        let slack = ulps(Mag::hypot(bf_mag(&re), bf_mag(&im)), b, 2);
        ErrValue::raw(re, im, self.rad.add(o.rad).add(slack), b)
    }

    pub fn sub(&self, o: &ErrValue) -> ErrValue {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ErrValue) -> ErrValue {
        let b = self.bits.max(o.bits);
        let (re, im) = match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => (self.re.mul(&o.re, b, RM), bf_zero(b)),
            (true, false) => (self.re.mul(&o.re, b, RM), self.re.mul(&o.im, b, RM)),
            (false, true) => (self.re.mul(&o.re, b, RM), self.im.mul(&o.re, b, RM)),
            (false, false) => {
                let rr = self.re.mul(&o.re, b, RM);
                let ii = self.im.mul(&o.im, b, RM);
                let ri = self.re.mul(&o.im, b, RM);
                let ir = self.im.mul(&o.re, b, RM);
                (rr.sub(&ii, b, RM), ri.add(&ir, b, RM))
            }
        };
        let ma = self.mid_abs();
        let mb = o.mid_abs();
        let rad = ma
            .mul(o.rad)
            .add(mb.mul(self.rad))
            .add(self.rad.mul(o.rad))
            .add(ulps(ma.mul(mb), b, 2));
        ErrValue::raw(re, im, rad, b)
    }

    pub fn sqr(&self) -> ErrValue {
        self.mul(self)
    }

    /// Multiplication by an integer.
    pub fn mul_i64(&self, k: i64) -> ErrValue {
        let b = self.bits;
        let kk = BigFloat::from_i64(k, 64);
        let re = self.re.mul(&kk, b, RM);
        let im = if self.im.is_zero() { bf_zero(b) } else { self.im.mul(&kk, b, RM) };
        let km = Mag::from_f64(k.unsigned_abs() as f64);
        let slack = ulps(Mag::hypot(bf_mag(&re), bf_mag(&im)), b, 2);
        ErrValue::raw(re, im, self.rad.mul(km).add(slack), b)
    }

    /// Division by a nonzero integer.
    pub fn div_i64(&self, k: i64) -> ErrValue {
        assert!(k != 0, "division by zero");
        let b = self.bits;
        let kk = BigFloat::from_i64(k, 64);
        let re = self.re.div(&kk, b, RM);
        let im = if self.im.is_zero() { bf_zero(b) } else { self.im.div(&kk, b, RM) };
        let km = Mag::from_f64(k.unsigned_abs() as f64);
        let slack = ulps(Mag::hypot(bf_mag(&re), bf_mag(&im)), b, 2);
        ErrValue::raw(re, im, self.rad.div(km).add(slack), b)
    }

    /// Reciprocal; fails when the ball may contain zero.
    pub fn recip(&self) -> Result<ErrValue> {
        let lower = self.abs_lower();
        if lower.is_zero() {
            return Err(Error::Domain("reciprocal of a ball that may contain zero".into()));
        }
        let b = self.bits;
        let (re, im) = if self.im.is_zero() {
            (BigFloat::from_i64(1, b).div(&self.re, b, RM), bf_zero(b))
        } else {
            let d = self.re.mul(&self.re, b, RM).add(&self.im.mul(&self.im, b, RM), b, RM);
            (self.re.div(&d, b, RM), self.im.neg().div(&d, b, RM))
        };
        let mid_lower = Mag::hypot_down(bf_mag_down(&self.re), bf_mag_down(&self.im));
        // |1/z - 1/w| <= r / (|w| (|w| - r))
        let prop = self.rad.div(mid_lower.mul_down(lower));
        let slack = ulps(Mag::hypot(bf_mag(&re), bf_mag(&im)), b, 4);
        Ok(ErrValue::raw(re, im, prop.add(slack), b))
    }

    pub fn div(&self, o: &ErrValue) -> Result<ErrValue> {
        if o.im.is_zero() && o.rad.is_zero() && !o.re.is_zero() {
            // exact real divisor: divide componentwise
            let b = self.bits.max(o.bits);
            let re = self.re.div(&o.re, b, RM);
            let im = if self.im.is_zero() { bf_zero(b) } else { self.im.div(&o.re, b, RM) };
            let dm = bf_mag_down(&o.re);
            let slack = ulps(Mag::hypot(bf_mag(&re), bf_mag(&im)), b, 2);
            return Ok(ErrValue::raw(re, im, self.rad.div(dm).add(slack), b));
        }
        Ok(self.mul(&o.recip()?))
    }

    /// Integer power by repeated squaring; negative exponents need a nonzero ball.
    pub fn powi(&self, n: i64) -> Result<ErrValue> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let b = self.bits;
        let mut result = ErrValue::raw(BigFloat::from_i64(1, b), bf_zero(b), Mag::ZERO, b);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// `e^z`.
    pub fn exp(&self) -> ErrValue {
        let b = self.bits;
        let (er, c, s) = with_consts(|cc| {
            let er = self.re.exp(b, RM, cc);
            if self.im.is_zero() {
                (er, None, None)
            } else {
                (er, Some(self.im.cos(b, RM, cc)), Some(self.im.sin(b, RM, cc)))
            }
        });
        let (re, im) = match (c, s) {
            (Some(c), Some(s)) => (er.mul(&c, b, RM), er.mul(&s, b, RM)),
            _ => (er, bf_zero(b)),
        };
        let m = Mag::hypot(bf_mag(&re), bf_mag(&im)).mul(Mag::from_f64(1.0 + 1e-10));
        let rad = m.mul(self.rad.expm1()).add(ulps(m, b, 4));
        ErrValue::raw(re, im, rad, b)
    }

    /// `e^{i pi r}` for a rational `r`, exact at multiples of one half.
    pub fn exp_i_pi(r: Rational64, prec: Precision) -> ErrValue {
        let two = Rational64::from_integer(2);
        let mut red = r % two;
        if red < Rational64::zero() {
            red += two;
        }
        let b = prec.bits();
        let unit = |re: i64, im: i64| ErrValue::raw(BigFloat::from_i64(re, b), BigFloat::from_i64(im, b), Mag::ZERO, b);
        if *red.denom() <= 2 {
            return match (*red.numer(), *red.denom()) {
                (0, _) => unit(1, 0),
                (1, 2) => unit(0, 1),
                (1, 1) => unit(-1, 0),
                _ => unit(0, -1),
            };
        }
        let angle = ErrValue::pi(prec).mul(&ErrValue::from_rational(red, prec));
        angle.mul_i().exp()
    }

    /// Cosine of a real ball.
    pub fn cos(&self) -> Result<ErrValue> {
        self.require_real("cos")?;
        let b = self.bits;
        let re = with_consts(|cc| self.re.cos(b, RM, cc));
        let rad = self.rad.add(ulps(bf_mag(&re), b, 2)).add(Mag::pow2(-(b as i64)));
        Ok(ErrValue::raw(re, bf_zero(b), rad, b))
    }

    /// Sine of a real ball.
    pub fn sin(&self) -> Result<ErrValue> {
        self.require_real("sin")?;
        let b = self.bits;
        let re = with_consts(|cc| self.re.sin(b, RM, cc));
        let rad = self.rad.add(ulps(bf_mag(&re), b, 2)).add(Mag::pow2(-(b as i64)));
        Ok(ErrValue::raw(re, bf_zero(b), rad, b))
    }

    /// Natural logarithm of a certified positive real ball.
    pub fn ln(&self) -> Result<ErrValue> {
        let low = self.positive_lower("ln")?;
        let b = self.bits;
        let re = with_consts(|cc| self.re.ln(b, RM, cc));
        let rad = self.rad.div(low).add(ulps(bf_mag(&re), b, 2)).add(Mag::pow2(-(b as i64)));
        Ok(ErrValue::raw(re, bf_zero(b), rad, b))
    }

    /// Square root of a certified positive real ball.
    pub fn sqrt(&self) -> Result<ErrValue> {
        let low = self.positive_lower("sqrt")?;
        let b = self.bits;
        let re = self.re.sqrt(b, RM);
        let rad = self.rad.div(low.sqrt().mul_down(Mag::from_f64(0.999))).add(ulps(bf_mag(&re), b, 2));
        Ok(ErrValue::raw(re, bf_zero(b), rad, b))
    }

    fn require_real(&self, what: &str) -> Result<()> {
        if self.im.is_zero() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} expects a real argument")))
        }
    }

    fn positive_lower(&self, what: &str) -> Result<Mag> {
        self.require_real(what)?;
        if !self.re.is_positive() {
            return Err(Error::Domain(format!("{what} expects a positive argument")));
        }
        let low = bf_mag_down(&self.re).sub_down(self.rad);
        if low.is_zero() {
            return Err(Error::Domain(format!("{what} argument is not certified positive")));
        }
        Ok(low)
    }

    /// Decimal rendering of the midpoint and a radius that also covers display rounding.
    pub fn to_decimal(&self, digits: u32) -> DecimalValue {
        let digits = digits.max(1) as usize;
        let (re, re_err) = bf_to_decimal(&self.re, digits);
        let (im, im_err) = if self.im.is_zero() { (None, Mag::ZERO) } else {
            let (s, e) = bf_to_decimal(&self.im, digits);
            (Some(s), e)
        };
        DecimalValue { re, im, radius: self.rad.add(re_err).add(im_err).to_decimal_up() }
    }
}

/// A ball rendered as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalValue {
    pub re: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<String>,
    pub radius: String,
}

impl fmt::Display for DecimalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.im {
            None => write!(f, "{} +/- {}", self.re, self.radius),
            Some(im) if im.starts_with('-') => write!(f, "{} - {}i +/- {}", self.re, &im[1..], self.radius),
            Some(im) => write!(f, "{} + {}i +/- {}", self.re, im, self.radius),
        }
    }
}

impl fmt::Display for ErrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.precision().digits().min(40)))
    }
}

/// Rounds to `digits` significant decimal digits; also returns the rounding error bound.
fn bf_to_decimal(x: &BigFloat, digits: usize) -> (String, Mag) {
    if x.is_zero() {
        return ("0".to_string(), Mag::ZERO);
    }
    let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).expect("decimal formatting");
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().expect("decimal exponent")),
        None => (body, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let mut all: Vec<u8> = ip.bytes().chain(fp.bytes()).map(|c| c - b'0').collect();
    let mut exp10 = exp + ip.len() as i64 - 1;
    while all.first() == Some(&0) && all.len() > 1 {
        all.remove(0);
        exp10 -= 1;
    }
    if all.len() > digits {
        let round_up = all[digits] >= 5;
        all.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    all.insert(0, 1);
                    all.truncate(digits);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if all[i] == 9 {
                    all[i] = 0;
                } else {
                    all[i] += 1;
                    break;
                }
            }
        }
    }
    while all.len() > 1 && all.last() == Some(&0) {
        all.pop();
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + all[0]) as char);
    if all.len() > 1 {
        out.push('.');
        out.extend(all[1..].iter().map(|d| (b'0' + d) as char));
    }
    if exp10 != 0 {
        out.push_str(&format!("e{exp10}"));
    }
    // half a unit in the last kept place, plus the formatter's own rounding
    let err_log2 = (exp10 - digits as i64 + 1) as f64 * std::f64::consts::LOG2_10;
    let err = Mag::pow2(err_log2.ceil() as i64 - 1).add(ulps(bf_mag(x), x.precision().unwrap_or(64), 1));
    (out, err)
}

impl Add for &ErrValue {
    type Output = ErrValue;
    fn add(self, o: &ErrValue) -> ErrValue {
        ErrValue::add(self, o)
    }
}

impl Sub for &ErrValue {
    type Output = ErrValue;
    fn sub(self, o: &ErrValue) -> ErrValue {
        ErrValue::sub(self, o)
    }
}

impl Mul for &ErrValue {
    type Output = ErrValue;
    fn mul(self, o: &ErrValue) -> ErrValue {
        ErrValue::mul(self, o)
    }
}

impl std::ops::Neg for &ErrValue {
    type Output = ErrValue;
    fn neg(self) -> ErrValue {
        ErrValue::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(50)
    }

    #[test]
    fn magnitude_conversion_brackets_value() {
        for v in [1.0, 1.5, -0.163034, 12345.678, 1e-30] {
            let x = BigFloat::from_f64(v, 192);
            assert!(bf_mag(&x).to_f64() >= v.abs());
            assert!(bf_mag_down(&x).to_f64() <= v.abs());
            assert!((bf_mag(&x).to_f64() / v.abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn decimal_parse_and_render() {
        let x = ErrValue::parse_decimal("-0.163034", p()).unwrap();
        assert_eq!(x.to_decimal(10).re, "-1.63034e-1");
        let y = ErrValue::from_i64(7, p());
        assert_eq!(y.to_decimal(5).re, "7");
        assert!(ErrValue::parse_decimal("abc", p()).is_err());
    }

    #[test]
    fn rounding_carries() {
        let x = ErrValue::parse_decimal("9.9999996", p()).unwrap();
        assert_eq!(x.to_decimal(3).re, "1e1");
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = ErrValue::pi(p()).mul_i().exp();
        let d = z.add(&ErrValue::one(p()));
        assert!(d.contains_zero());
        assert!(d.radius() < Mag::pow2(-160));
    }

    #[test]
    fn exact_half_turns() {
        let z = ErrValue::exp_i_pi(Rational64::new(3, 2), p());
        assert_eq!(z.to_f64_pair(), (0.0, -1.0));
        assert!(z.radius().is_zero());
        let w = ErrValue::exp_i_pi(Rational64::new(-1, 3), p());
        let (re, im) = w.to_f64_pair();
        assert!((re - 0.5).abs() < 1e-15 && (im + 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_rejects_zero_balls() {
        let z = ErrValue::zero(p()).inflate(Mag::pow2(-10));
        assert!(z.recip().is_err());
        let w = ErrValue::from_i64(3, p()).inflate(Mag::pow2(-10));
        let r = w.recip().unwrap();
        assert!(r.radius().to_f64() >= 2f64.powi(-10) / 9.5);
    }

    #[test]
    fn ln_and_sqrt_domains() {
        assert!(ErrValue::from_i64(-1, p()).ln().is_err());
        let two = ErrValue::from_i64(2, p());
        let s = two.sqrt().unwrap();
        assert!(s.sqr().overlaps(&two));
        let l = two.ln().unwrap().exp();
        assert!(l.overlaps(&two));
    }

    #[test]
    fn complex_powers() {
        let z = ErrValue::complex(&ErrValue::from_f64(0.3, p()), &ErrValue::from_f64(-0.4, p()));
        let a = z.powi(7).unwrap();
        let mut b = ErrValue::one(p());
        for _ in 0..7 {
            b = b.mul(&z);
        }
        assert!(a.overlaps(&b));
        let inv = z.powi(-2).unwrap().mul(&z.sqr());
        assert!(inv.overlaps(&ErrValue::one(p())));
    }

    #[test]
    fn radius_tracks_cancellation() {
        let a = ErrValue::parse_decimal("0.1", p()).unwrap();
        let b = ErrValue::parse_decimal("0.3", p()).unwrap();
        let d = a.mul_i64(3).sub(&b);
        assert!(d.contains_zero());
        assert!(d.radius() < Mag::pow2(-150));
    }
}
