//! Exact integer series of the coefficients `γ_{k,n}`.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::ErrValue;
use crate::error::{Error, Result};

/// Coefficient index `(k, n)`: `γ_{k,n}` is the coefficient of `xⁿ` in `θ_q(x)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoeffKey {
    pub k: u32,
    pub n: i64,
}

impl CoeffKey {
    pub fn new(k: u32, n: i64) -> Result<CoeffKey> {
        if k == 0 {
            return Err(Error::Argument("power k must be at least 1".into()));
        }
        Ok(CoeffKey { k, n })
    }

    /// Writes `n = jk + i` with `0 <= i < k` and returns `(i, e)` with `γ_{k,n} = q^e γ_{k,i}`.
    ///
    /// `e = k j(j-1)/2 + ij` is never negative.
    pub fn reduce(&self) -> Result<(i64, u64)> {
        let k = self.k as i128;
        let n = self.n as i128;
        let j = n.div_euclid(k);
        let i = n.rem_euclid(k);
        let e = k * j * (j - 1) / 2 + i * j;
        let e = u64::try_from(e).map_err(|_| Error::Scale(format!("shift exponent of {self} is too large")))?;
        Ok((i as i64, e))
    }

    pub(crate) fn require_reduced(&self) -> Result<()> {
        if self.n < 0 || self.n >= self.k as i64 {
            return Err(Error::Argument(format!("{self}: n must lie in [0, k)")));
        }
        Ok(())
    }
}

impl fmt::Display for CoeffKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, n={})", self.k, self.n)
    }
}

/// Truncated power series `Σ_{m<=order} coeffs[m] q^m` with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    pub coeffs: Vec<BigInt>,
    pub order: usize,
}

impl IntSeries {
    pub fn zero(order: usize) -> IntSeries {
        IntSeries { coeffs: vec![BigInt::zero(); order + 1], order }
    }

    pub fn coeff(&self, m: usize) -> &BigInt {
        &self.coeffs[m]
    }

    /// Multiplies by `q^e`, keeping the order.
    pub fn shifted(&self, e: u64) -> IntSeries {
        let mut out = IntSeries::zero(self.order);
        if let Some(e) = e.to_usize().filter(|&e| e <= self.order) {
            for m in 0..=self.order - e {
                out.coeffs[m + e] = self.coeffs[m].clone();
            }
        }
        out
    }

    /// Truncates to a lower order.
    pub fn truncated(&self, order: usize) -> IntSeries {
        let order = order.min(self.order);
        IntSeries { coeffs: self.coeffs[..=order].to_vec(), order }
    }

    pub fn mul(&self, o: &IntSeries) -> IntSeries {
        let order = self.order.min(o.order);
        let mut out = IntSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add_assign(&mut self, o: &IntSeries) {
        let order = self.order.min(o.order);
        self.coeffs.truncate(order + 1);
        self.order = order;
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    /// Horner evaluation of the truncated polynomial; no tail term is added.
    pub fn eval(&self, q: &ErrValue) -> ErrValue {
        self.eval_prefix(q, self.order)
    }

    /// Evaluation of the terms up to `min(order, self.order)` only, without a tail bound.
    pub fn eval_prefix(&self, q: &ErrValue, order: usize) -> ErrValue {
        let prec = q.precision();
        let mut acc = ErrValue::zero(prec);
        for c in self.coeffs[..=order.min(self.order)].iter().rev() {
            acc = acc.mul(q).add(&ErrValue::from_bigint(c, prec));
        }
        acc
    }

    /// Precision-independent evaluation for quick checks.
    pub fn eval_f64(&self, q: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c.to_f64().unwrap_or(f64::INFINITY))
    }
}

/// Largest `|m|` that can occur in a tuple contributing to exponent `<= order`.
pub fn support_radius(order: usize) -> i64 {
    1 + (2.0 * order as f64).sqrt().ceil() as i64
}

fn tri(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// Single-factor support `(m, m(m-1)/2)` restricted to exponents `<= order`.
fn single_support(order: usize) -> Vec<(i64, usize)> {
    let r = support_radius(order);
    (-r..=r).filter(|&m| tri(m) as usize <= order).map(|m| (m, tri(m) as usize)).collect()
}

/// Exact series of `γ_{k,n}` for `0 <= n < k` by a k-fold convolution over
/// `(index sum, exponent)` states.
pub fn gamma_series_dp(key: CoeffKey, order: usize) -> Result<IntSeries> {
    key.require_reduced()?;
    let r = support_radius(order);
    // every coefficient is at most the number of k-tuples in the support box
    let fits = key.k as f64 * ((2 * r + 1) as f64).log2() < 126.0;
    let coeffs: Vec<BigInt> = if fits {
        dp_core::<u128>(key, order).into_iter().map(BigInt::from).collect()
    } else {
        dp_core::<BigUint>(key, order).into_iter().map(BigInt::from).collect()
    };
    Ok(IntSeries { coeffs, order })
}

fn dp_core<T>(key: CoeffKey, order: usize) -> Vec<T>
where
    T: Zero + One + Clone + for<'a> AddAssign<&'a T>,
{
    let k = key.k as i64;
    let n = key.n;
    let r = support_radius(order);
    let support = single_support(order);
    let span = k * r;
    let width = (2 * span + 1) as usize;
    let idx = |s: i64| (s + span) as usize;

    let mut layer: Vec<Option<Vec<T>>> = vec![None; width];
    let mut init = vec![T::zero(); order + 1];
    init[0] = T::one();
    layer[idx(0)] = Some(init);

    for step in 1..=k {
        // a state with index sum s can still reach n only if |n - s| <= (k - step) r
        let reach = (k - step) * r;
        let mut next: Vec<Option<Vec<T>>> = vec![None; width];
        for (si, row) in layer.iter().enumerate() {
            let Some(row) = row else { continue };
            let s = si as i64 - span;
            for &(m, t) in &support {
                let s2 = s + m;
                if (n - s2).abs() > reach {
                    continue;
                }
                let dst = next[idx(s2)].get_or_insert_with(|| vec![T::zero(); order + 1]);
                for e in 0..=order - t {
                    if !row[e].is_zero() {
                        dst[e + t] += &row[e];
                    }
                }
            }
        }
        layer = next;
    }
    layer[idx(n)].take().unwrap_or_else(|| vec![T::zero(); order + 1])
}

/// Exact series of `γ_{k,n}` by direct enumeration of all k-tuples; an independent check.
pub fn gamma_series_oracle(key: CoeffKey, order: usize) -> Result<IntSeries> {
    key.require_reduced()?;
    if key.k > 6 || order > 60 {
        return Err(Error::Scale("oracle is limited to k <= 6 and order <= 60".into()));
    }
    let k = key.k as usize;
    let r = support_radius(order);
    let mut coeffs = vec![0u64; order + 1];
    let mut free = vec![-r; k - 1];
    loop {
        let partial: i64 = free.iter().sum();
        let last = key.n - partial;
        if last.abs() <= r {
            let e: i64 = free.iter().map(|&m| tri(m)).sum::<i64>() + tri(last);
            if e as usize <= order {
                coeffs[e as usize] += 1;
            }
        }
        // odometer over the k-1 free coordinates
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return Ok(IntSeries { coeffs: coeffs.into_iter().map(BigInt::from).collect(), order });
            }
            if free[pos] < r {
                free[pos] += 1;
                break;
            }
            free[pos] = -r;
            pos += 1;
        }
    }
}

/// Series of `γ_{k,n}` for any integer `n`, through the reduction to `0 <= n < k`.
pub fn gamma_series(key: CoeffKey, order: usize) -> Result<IntSeries> {
    let (i, e) = key.reduce()?;
    if e as u128 > order as u128 {
        return Ok(IntSeries::zero(order));
    }
    let base = gamma_series_dp(CoeffKey::new(key.k, i)?, order - e as usize)?;
    let mut out = IntSeries::zero(order);
    for (m, c) in base.coeffs.into_iter().enumerate() {
        out.coeffs[m + e as usize] = c;
    }
    Ok(out)
}

/// Truncation of `Σ_m γ_{n,m} γ_{k-n,m}` over `|m| <= 2 + ⌈√(2N)⌉`.
pub fn convolution_identity_series(k: u32, n: u32, order: usize) -> Result<IntSeries> {
    if n == 0 || n >= k {
        return Err(Error::Argument(format!("need 1 <= n < k, got k={k}, n={n}")));
    }
    let r = 1 + support_radius(order);
    let mut acc = IntSeries::zero(order);
    for m in -r..=r {
        let a = gamma_series(CoeffKey::new(n, m)?, order)?;
        let b = gamma_series(CoeffKey::new(k - n, m)?, order)?;
        acc.add_assign(&a.mul(&b));
    }
    Ok(acc)
}
