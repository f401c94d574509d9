//! Certified real zeros of `γ_{k,n}` on `(-1, 0)`: sign scans on a rational grid
//! followed by bisection, both with automatic precision escalation.
//!
//! A sign counts only when the error radius excludes zero, so every bracket
//! returned has a zero of odd multiplicity inside.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{ErrValue, Precision};
use crate::asymptotics::{classify, ClassificationVerdict, Verdict};
use crate::coeff::{CoeffKey, GammaEvaluator};
use crate::error::{Error, Result};

/// Interval `[lo, hi] ⊂ (-1, 0)` whose endpoint signs of `γ_{k,n}` are certified and opposite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroBracket {
    pub k: u32,
    pub n: i64,
    pub lo: BigRational,
    pub hi: BigRational,
    pub sign_lo: i8,
    pub sign_hi: i8,
}

impl ZeroBracket {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Whether the bracket lies inside `[a, b]`.
    pub fn within(&self, a: &BigRational, b: &BigRational) -> bool {
        a <= &self.lo && &self.hi <= b
    }
}

/// Interval of the scan grid on which no sign could be certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignGap {
    pub lo: BigRational,
    pub hi: BigRational,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub brackets: Vec<ZeroBracket>,
    pub gaps: Vec<SignGap>,
}

#[derive(Clone, Debug)]
pub struct ZeroReport {
    pub verdict: Option<ClassificationVerdict>,
    pub brackets: Vec<ZeroBracket>,
    pub gaps: Vec<SignGap>,
}

/// Search parameters; the defaults match [`find_zeros`].
#[derive(Clone, Debug)]
pub struct ZeroSearch {
    pub lo: BigRational,
    pub hi: BigRational,
    pub grid: usize,
    pub width: BigRational,
    pub precision: Precision,
    /// Escalation stops once this many digits fail to certify a sign.
    pub ceiling: Precision,
}

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_CEILING_DIGITS: u32 = 1600;

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch {
            lo: ratio(-999, 1000),
            hi: ratio(-1, 1000),
            grid: DEFAULT_GRID,
            width: ratio(1, 100_000_000),
            precision: Precision::DEFAULT,
            ceiling: Precision::new(DEFAULT_CEILING_DIGITS),
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a/b`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Argument(format!("cannot read {s:?} as a rational number"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `floor` (or `ceil`) of `r` to `places` decimals, as text.
pub fn rational_to_decimal(r: &BigRational, places: u32, round_up: bool) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = r * BigRational::from_integer(scale);
    let v = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = v.is_negative();
    let mut digits = v.abs().to_string();
    if places > 0 {
        while digits.len() <= places as usize {
            digits.insert(0, '0');
        }
        digits.insert(digits.len() - places as usize, '.');
    }
    if neg {
        digits.insert(0, '-');
    }
    digits
}

/// Sign oracle for one coefficient with precision escalation.
struct SignOracle {
    eval: GammaEvaluator,
    start: Precision,
    ceiling: Precision,
}

impl SignOracle {
    fn new(k: u32, n: i64, start: Precision, ceiling: Precision) -> Result<SignOracle> {
        Ok(SignOracle { eval: GammaEvaluator::new(CoeffKey::new(k, n)?)?, start, ceiling })
    }

    /// Certified sign at `q`, doubling the digits until certification or the ceiling.
    fn sign(&self, q: &BigRational) -> Result<Option<i8>> {
        let mut digits = self.start.digits();
        loop {
            let prec = Precision::new(digits);
            let v = self.eval.eval(&ErrValue::from_ratio(q.numer(), q.denom(), prec))?;
            match v.real_sign() {
                Some(Ordering::Greater) => return Ok(Some(1)),
                Some(Ordering::Less) => return Ok(Some(-1)),
                _ if digits >= self.ceiling.digits() => return Ok(None),
                _ => digits = (digits * 2).min(self.ceiling.digits()),
            }
        }
    }
}

fn check_window(lo: &BigRational, hi: &BigRational) -> Result<()> {
    if !(&ratio(-1, 1) < lo && lo < hi && hi < &BigRational::zero()) {
        return Err(Error::Argument(format!("window must satisfy -1 < lo < hi < 0, got {lo}:{hi}")));
    }
    Ok(())
}

/// Coarse brackets from sign changes between certified grid points.
///
/// Uncertified grid points are skipped; a run of them whose certified neighbours
/// share a sign is reported as a gap.
pub fn scan_sign_changes(k: u32, n: i64, lo: &BigRational, hi: &BigRational, grid: usize, prec: Precision) -> Result<ScanReport> {
    let search = ZeroSearch { lo: lo.clone(), hi: hi.clone(), grid, precision: prec, ..ZeroSearch::default() };
    let oracle = SignOracle::new(k, n, prec, search.ceiling.max(prec))?;
    scan_with(&oracle, k, n, &search)
}

fn scan_with(oracle: &SignOracle, k: u32, n: i64, search: &ZeroSearch) -> Result<ScanReport> {
    check_window(&search.lo, &search.hi)?;
    if search.grid < 2 {
        return Err(Error::Argument(format!("scan grid needs at least 2 intervals, got {}", search.grid)));
    }
    let step = (&search.hi - &search.lo) / BigInt::from(search.grid);
    let points: Vec<BigRational> = (0..=search.grid).map(|i| &search.lo + &step * BigInt::from(i)).collect();
    let signs: Vec<Option<i8>> = points.par_iter().map(|p| oracle.sign(p)).collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    let mut gaps = Vec::new();
    let mut last: Option<usize> = None;
    let mut pending_gap_start: Option<usize> = None;
    for (i, s) in signs.iter().enumerate() {
        let Some(s) = *s else {
            pending_gap_start.get_or_insert(last.unwrap_or(i));
            continue;
        };
        if let Some(j) = last {
            let prev = signs[j].expect("last index is certified");
            if prev != s {
                brackets.push(ZeroBracket {
                    k,
                    n,
                    lo: points[j].clone(),
                    hi: points[i].clone(),
                    sign_lo: prev,
                    sign_hi: s,
                });
            } else if let Some(g) = pending_gap_start {
                gaps.push(SignGap { lo: points[g].clone(), hi: points[i].clone() });
            }
        } else if let Some(g) = pending_gap_start {
            gaps.push(SignGap { lo: points[g].clone(), hi: points[i].clone() });
        }
        pending_gap_start = None;
        last = Some(i);
    }
    if let Some(g) = pending_gap_start {
        gaps.push(SignGap { lo: points[g].clone(), hi: points[search.grid].clone() });
    }
    Ok(ScanReport { brackets, gaps })
}

/// Shrinks a bracket to width at most `target_width`, keeping certified opposite endpoint signs.
pub fn bisect_certified(bracket: &ZeroBracket, target_width: &BigRational, prec: Precision) -> Result<ZeroBracket> {
    let oracle = SignOracle::new(bracket.k, bracket.n, prec, Precision::new(DEFAULT_CEILING_DIGITS).max(prec))?;
    bisect_with(&oracle, bracket, target_width)
}

fn bisect_with(oracle: &SignOracle, bracket: &ZeroBracket, target_width: &BigRational) -> Result<ZeroBracket> {
    if bracket.sign_lo == bracket.sign_hi {
        return Err(Error::Argument("bracket endpoints must have opposite signs".into()));
    }
    if !target_width.is_positive() {
        return Err(Error::Argument("target width must be positive".into()));
    }
    let two = BigInt::from(2);
    let mut b = bracket.clone();
    while &b.width() > target_width {
        let mid = (&b.lo + &b.hi) / &two;
        let nudge = b.width() / BigInt::from(1000);
        let mut found = None;
        for cand in [mid.clone(), &mid + &nudge, &mid - &nudge] {
            if let Some(s) = oracle.sign(&cand)? {
                found = Some((cand, s));
                break;
            }
        }
        let Some((m, s)) = found else {
            return Err(Error::PrecisionCeiling {
                digits: oracle.ceiling.digits(),
                context: format!("certifying the sign of γ_(k={}, n={}) near {}", b.k, b.n, rational_to_decimal(&mid, 12, false)),
            });
        };
        if s == b.sign_lo {
            b.lo = m;
        } else {
            b.hi = m;
        }
    }
    Ok(b)
}

/// Scan and bisection with explicit parameters.
///
/// When the classification predicts a negative limit at `-1`, the coefficient
/// must change sign since `γ_{k,n}(0) = binom(k, n) > 0`; finding no bracket then
/// is reported as a contradiction.
pub fn find_zeros_with(k: u32, n: i64, search: &ZeroSearch) -> Result<ZeroReport> {
    if k < 1 || n < 0 || n >= k as i64 {
        return Err(Error::Argument(format!("zero search needs k >= 1 and 0 <= n < k, got k={k}, n={n}")));
    }
    let verdict = if k >= 3 { Some(classify(k, n)?) } else { None };
    let oracle = SignOracle::new(k, n, search.precision, search.ceiling.max(search.precision))?;
    let scan = scan_with(&oracle, k, n, search)?;
    let brackets: Vec<ZeroBracket> =
        scan.brackets.par_iter().map(|b| bisect_with(&oracle, b, &search.width)).collect::<Result<_>>()?;
    if brackets.is_empty() && verdict.as_ref().is_some_and(|v| v.verdict == Verdict::MinusInfinity) {
        return Err(Error::Contradiction(format!(
            "γ_(k={k}, n={n}) is predicted negative near -1 but no sign change was certified on {}:{} with grid {}",
            rational_to_decimal(&search.lo, 6, false),
            rational_to_decimal(&search.hi, 6, true),
            search.grid
        )));
    }
    Ok(ZeroReport { verdict, brackets, gaps: scan.gaps })
}

/// Certified zero brackets of width at most `1e-8` on `(-0.999, -0.001)`.
pub fn find_zeros(k: u32, n: i64, prec: Precision) -> Result<ZeroReport> {
    find_zeros_with(k, n, &ZeroSearch { precision: prec, ..ZeroSearch::default() })
}
