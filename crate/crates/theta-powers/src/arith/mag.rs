//! Nonnegative magnitudes with a wide exponent range and one-sided rounding.
//!
//! Error radii at a few hundred digits fall far below `f64::MIN_POSITIVE`, so a
//! radius is stored as an `f64` mantissa in `[0.5, 1)` and an `i64` binary exponent.

use std::cmp::Ordering;
use std::fmt;

const BUMP_UP: f64 = 1.0 + 4.0 * f64::EPSILON;
const BUMP_DOWN: f64 = 1.0 - 4.0 * f64::EPSILON;

/// A value `m * 2^e`, either zero, finite, or infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

fn split(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal input: scale into the normal range first
        let (m, e) = split(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, raw - 1022)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };
    pub const INFINITY: Mag = Mag { m: f64::INFINITY, e: 0 };

    fn norm(x: f64, e: i64) -> Mag {
        if x == 0.0 {
            Mag::ZERO
        } else if !x.is_finite() {
            Mag::INFINITY
        } else {
            let (m, de) = split(x);
            Mag { m, e: e + de }
        }
    }

    /// Exact for every finite nonnegative `f64`; negative input is clamped to zero.
    pub fn from_f64(x: f64) -> Mag {
        if x.is_nan() {
            Mag::INFINITY
        } else if x <= 0.0 {
            Mag::ZERO
        } else {
            Mag::norm(x, 0)
        }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { m: 0.5, e: e + 1 }
    }

    /// From mantissa bits in `[0.5, 1]` scaled by `2^e`.
    pub(crate) fn from_parts(m: f64, e: i64) -> Mag {
        Mag::norm(m, e)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite()
    }

    /// Binary exponent `e` with `2^(e-1) <= self < 2^e`; `i64::MIN` for zero.
    pub fn exponent(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else if !self.is_finite() {
            i64::MAX
        } else {
            self.e
        }
    }

    /// Nearest `f64`, saturating to `0.0` or `inf`.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if !self.is_finite() || self.e > 1100 {
            return f64::INFINITY;
        }
        if self.e < -1100 {
            return 0.0;
        }
        let half = (self.e / 2) as i32;
        self.m * 2f64.powi(half) * 2f64.powi(self.e as i32 - half)
    }

    /// `log2(self)`, `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else if !self.is_finite() {
            f64::INFINITY
        } else {
            self.m.log2() + self.e as f64
        }
    }

    pub fn add(self, o: Mag) -> Mag {
        self.add_dir(o, BUMP_UP)
    }

    /// Lower bound of `self + o`.
    pub fn add_down(self, o: Mag) -> Mag {
        self.add_dir(o, BUMP_DOWN)
    }

    fn add_dir(self, o: Mag, bump: f64) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INFINITY;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 60 {
            // below f64 resolution: absorb into one upward bump
            return if bump > 1.0 {
                Mag::norm(big.m * BUMP_UP * BUMP_UP, big.e)
            } else {
                big
            };
        }
        Mag::norm((big.m + small.m * 2f64.powi(-(d as i32))) * bump, big.e)
    }

    /// Lower bound of `max(self - o, 0)`.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if !self.is_finite() {
            return if o.is_finite() { Mag::INFINITY } else { Mag::ZERO };
        }
        if !o.is_finite() || self <= o {
            return Mag::ZERO;
        }
        let d = self.e - o.e;
        if d > 60 {
            return Mag::norm(self.m * BUMP_DOWN, self.e);
        }
        let x = self.m - o.m * 2f64.powi(-(d as i32)) * BUMP_UP;
        if x <= 0.0 {
            Mag::ZERO
        } else {
            Mag::norm(x * BUMP_DOWN, self.e)
        }
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if !self.is_finite() || !o.is_finite() {
            return Mag::INFINITY;
        }
        Mag::norm(self.m * o.m * BUMP_UP, self.e + o.e)
    }

    /// Lower bound of `self * o`.
    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * BUMP_DOWN, self.e + o.e)
    }

    pub fn mul_f64(self, x: f64) -> Mag {
        self.mul(Mag::from_f64(x))
    }

    /// Upper bound of `self / o`; infinite when `o` is zero.
    pub fn div(self, o: Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if o.is_zero() || !self.is_finite() {
            return Mag::INFINITY;
        }
        if !o.is_finite() {
            return Mag::ZERO;
        }
        Mag::norm(self.m / o.m * BUMP_UP, self.e - o.e)
    }

    /// Lower bound of `self / o`.
    pub fn div_down(self, o: Mag) -> Mag {
        if self.is_zero() || !o.is_finite() {
            return Mag::ZERO;
        }
        if o.is_zero() {
            return Mag::INFINITY;
        }
        Mag::norm(self.m / o.m * BUMP_DOWN, self.e - o.e)
    }

    /// Upper bound of `sqrt(self)`.
    pub fn sqrt(self) -> Mag {
        if self.is_zero() || !self.is_finite() {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 { (self.m, self.e) } else { (self.m * 2.0, self.e - 1) };
        Mag::norm(m.sqrt() * BUMP_UP, e / 2)
    }

    /// Upper bound of `sqrt(a^2 + b^2)`.
    pub fn hypot(a: Mag, b: Mag) -> Mag {
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if small.is_zero() || !big.is_finite() {
            return big;
        }
        let r = small.div(big).to_f64();
        Mag::norm(big.m * (1.0 + r * r).sqrt() * BUMP_UP * BUMP_UP, big.e)
    }

    /// Lower bound of `sqrt(a^2 + b^2)`.
    pub fn hypot_down(a: Mag, b: Mag) -> Mag {
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if small.is_zero() {
            return big;
        }
        let r = small.div_down(big).to_f64();
        Mag::norm(big.m * (1.0 + r * r).sqrt() * BUMP_DOWN * BUMP_DOWN, big.e)
    }

    /// Upper bound of `e^self - 1`.
    pub fn expm1(self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let x = self.to_f64();
        if x > 700.0 {
            return Mag::INFINITY;
        }
        if x < 1e-10 {
            // e^x - 1 <= x (1 + x)
            return self.mul(Mag::from_f64(1.0 + 2e-10));
        }
        Mag::from_f64(x.exp_m1() * BUMP_UP * BUMP_UP)
    }

    /// Upper bound of `e^x` for real `x`.
    pub fn exp_f64(x: f64) -> Mag {
        if x.is_nan() || x > 1e15 {
            return Mag::INFINITY;
        }
        if x < -1e15 {
            return Mag::ZERO;
        }
        // e^x = 2^(x log2 e), split into integer and fractional exponent
        let y = x * std::f64::consts::LOG2_E;
        let yi = y.floor();
        let frac = y - yi;
        Mag::norm(frac.exp2() * (1.0 + 1e-12), yi as i64)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// Short decimal rendering rounded up to two significant digits.
    pub fn to_decimal_up(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return "inf".to_string();
        }
        let l10 = self.log2() * std::f64::consts::LOG10_2;
        let mut exp10 = l10.floor();
        let mut mant = 10f64.powf(l10 - exp10);
        mant = (mant * 10.0 - 1e-9).ceil() / 10.0;
        if mant >= 10.0 {
            mant /= 10.0;
            exp10 += 1.0;
        }
        format!("{:.1}e{}", mant, exp10 as i64)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, o: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => match (self.is_finite(), o.is_finite()) {
                (false, false) => Ordering::Equal,
                (false, true) => Ordering::Greater,
                (true, false) => Ordering::Less,
                _ => self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m)?),
            },
        })
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_up())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_f64() {
        for x in [1.0, 0.75, 3.0e-300, 1.0e300, 5e-324] {
            assert_eq!(Mag::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_is_one_sided() {
        let a = Mag::from_f64(0.1);
        let b = Mag::from_f64(0.2);
        assert!(a.add(b).to_f64() >= 0.1 + 0.2);
        assert!(a.add_down(b).to_f64() <= 0.30000000000000004);
        assert!(a.mul(b).to_f64() >= 0.1 * 0.2);
        assert!(b.sub_down(a).to_f64() <= 0.1);
        assert_eq!(a.sub_down(b), Mag::ZERO);
    }

    #[test]
    fn survives_tiny_exponents() {
        let r = Mag::pow2(-4000).mul(Mag::pow2(-4000));
        assert_eq!(r.exponent(), -7999);
        assert!(r.add(Mag::pow2(-1)).to_f64() > 0.5);
        assert_eq!(r.to_decimal_up()[..3].len(), 3);
    }

    #[test]
    fn ordering() {
        assert!(Mag::ZERO < Mag::pow2(-5000));
        assert!(Mag::pow2(3) < Mag::INFINITY);
        assert!(Mag::from_f64(0.75) > Mag::from_f64(0.5));
    }

    #[test]
    fn decimal_rendering_rounds_up() {
        assert_eq!(Mag::from_f64(1.0).to_decimal_up(), "1.0e0");
        assert_eq!(Mag::from_f64(0.00123).to_decimal_up(), "1.3e-3");
    }
}
