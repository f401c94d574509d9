//! Positive definite quadratic forms with a linear part, over exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest number of box points a single enumeration may visit.
pub const ENUMERATION_BUDGET: u64 = 50_000_000;

/// `E(y) = yᵀAy + bᵀy` with `A` symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadLinForm {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    inv: Vec<Vec<BigRational>>,
    det: BigRational,
    // D·E(y) is an integer on Z^k; a_int holds D·A_ii on the diagonal and D·2A_ij off it
    scale: BigInt,
    a_int: Vec<Vec<i128>>,
    b_int: Vec<i128>,
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl QuadLinForm {
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Result<QuadLinForm> {
        let k = a.len();
        if k == 0 || b.len() != k || a.iter().any(|row| row.len() != k) {
            return Err(Error::Argument("form needs a square k×k matrix and a length-k vector".into()));
        }
        for i in 0..k {
            for j in 0..i {
                if a[i][j] != a[j][i] {
                    return Err(Error::Argument("quadratic part must be symmetric".into()));
                }
            }
        }
        let (det, inv) = invert_positive_definite(&a)?;
        // lattice values are integer combinations of A_ii, 2A_ij (i < j) and b_i
        let weights: Vec<Vec<BigRational>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { a[i][j].clone() } else { &a[i][j] * ratio(2, 1) }).collect())
            .collect();
        let mut scale = BigInt::one();
        for r in weights.iter().flatten().chain(&b) {
            scale = scale.lcm(r.denom());
        }
        let int = |r: &BigRational| -> Result<i128> {
            (r * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::Scale("form coefficients are too large".into()))
        };
        let a_int = weights.iter().map(|row| row.iter().map(int).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let b_int = b.iter().map(int).collect::<Result<Vec<_>>>()?;
        Ok(QuadLinForm { a, b, inv, det, scale, a_int, b_int })
    }

    /// Integer matrix and vector, for convenience.
    pub fn from_integers(a: &[Vec<i64>], b: &[i64]) -> Result<QuadLinForm> {
        QuadLinForm::new(
            a.iter().map(|row| row.iter().map(|&v| ratio(v, 1)).collect()).collect(),
            b.iter().map(|&v| ratio(v, 1)).collect(),
        )
    }

    /// The form `Σ_{i<=j} y_i y_j - n Σ y_i` whose lattice sum is `f_{k,n}`.
    pub fn theta_power(k: usize, n: i64) -> Result<QuadLinForm> {
        let a = (0..k).map(|i| (0..k).map(|j| if i == j { ratio(1, 1) } else { ratio(1, 2) }).collect()).collect();
        QuadLinForm::new(a, vec![ratio(-n, 1); k])
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.a
    }

    pub fn linear(&self) -> &[BigRational] {
        &self.b
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inv
    }

    pub fn det(&self) -> &BigRational {
        &self.det
    }

    /// Common denominator of all values on the lattice.
    pub fn value_denominator(&self) -> &BigInt {
        &self.scale
    }

    pub fn value(&self, y: &[i64]) -> BigRational {
        BigRational::new(BigInt::from(self.scaled_value(y)), self.scale.clone())
    }

    /// `D·E(y)` as an integer.
    pub fn scaled_value(&self, y: &[i64]) -> i128 {
        let mut acc = 0i128;
        for (i, &yi) in y.iter().enumerate() {
            let yi = yi as i128;
            acc += self.b_int[i] * yi;
            let row = &self.a_int[i];
            acc += row[i] * yi * yi;
            for (j, &yj) in y.iter().enumerate().skip(i + 1) {
                acc += row[j] * yi * yj as i128;
            }
        }
        acc
    }

    /// `bᵀA⁻¹b / 4`, so that `E(y) = (y - c)ᵀA(y - c) - bᵀA⁻¹b/4` with `c = -A⁻¹b/2`.
    pub fn depth(&self) -> BigRational {
        let k = self.dim();
        let mut s = BigRational::zero();
        for i in 0..k {
            for j in 0..k {
                s += &self.b[i] * &self.inv[i][j] * &self.b[j];
            }
        }
        s / ratio(4, 1)
    }

    /// Centre `-A⁻¹b/2` of the level sets.
    pub fn centre(&self) -> Vec<BigRational> {
        let k = self.dim();
        (0..k)
            .map(|i| {
                let mut s = BigRational::zero();
                for j in 0..k {
                    s += &self.inv[i][j] * &self.b[j];
                }
                -s / ratio(2, 1)
            })
            .collect()
    }

    /// Minimum of `E` over the reals.
    pub fn real_minimum(&self) -> BigRational {
        -self.depth()
    }

    /// Half-widths of the bounding box of `{E <= m}` in each coordinate, or `None` if empty.
    fn box_radii(&self, m: f64) -> Option<Vec<f64>> {
        let r = m + to_f64(&self.depth());
        if r < 0.0 {
            return None;
        }
        // max of y_i on {(y-c)ᵀA(y-c) <= r} is c_i + sqrt(r (A⁻¹)_ii)
        Some((0..self.dim()).map(|i| (r * to_f64(&self.inv[i][i])).sqrt()).collect())
    }

    /// Upper bound on `#{y ∈ Z^k : E(y) <= m}` from the bounding box.
    pub fn count_bound(&self, m: f64) -> f64 {
        match self.box_radii(m) {
            None => 0.0,
            Some(r) => r.iter().map(|ri| 2.0 * ri * (1.0 + 1e-9) + 1e-9 + 1.0).product(),
        }
    }

    /// Calls `visit(D·E(y), y)` for every lattice point with `E(y) <= m`.
    pub fn for_each_point(&self, m: &BigRational, mut visit: impl FnMut(i128, &[i64])) -> Result<()> {
        let mf = to_f64(m);
        let Some(radii) = self.box_radii(mf) else { return Ok(()) };
        let cut = (m * BigRational::from_integer(self.scale.clone()))
            .floor()
            .to_integer()
            .to_i128()
            .ok_or_else(|| Error::Scale("level is too large".into()))?;
        let centre: Vec<f64> = self.centre().iter().map(to_f64).collect();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut volume = 1.0f64;
        for (c, r) in centre.iter().zip(&radii) {
            let slack = r * 1e-9 + 1e-9;
            let l = (c - r - slack).ceil() as i64;
            let h = (c + r + slack).floor() as i64;
            volume *= (h - l + 1).max(0) as f64;
            lo.push(l);
            hi.push(h);
        }
        if volume > ENUMERATION_BUDGET as f64 {
            return Err(Error::Scale(format!("enumeration box holds {volume:.3e} points")));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(());
        }
        let mut y = lo.clone();
        loop {
            let v = self.scaled_value(&y);
            if v <= cut {
                visit(v, &y);
            }
            let mut pos = 0;
            loop {
                if pos == y.len() {
                    return Ok(());
                }
                if y[pos] < hi[pos] {
                    y[pos] += 1;
                    break;
                }
                y[pos] = lo[pos];
                pos += 1;
            }
        }
    }

    /// Number of lattice points on each level `D·E(y) = v` with `E(y) <= m`.
    pub fn shell_counts(&self, m: &BigRational) -> Result<BTreeMap<i128, u64>> {
        let mut out = BTreeMap::new();
        self.for_each_point(m, |v, _| *out.entry(v).or_insert(0) += 1)?;
        Ok(out)
    }
}

impl fmt::Display for QuadLinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[BigRational]| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
        let rows: Vec<String> = self.a.iter().map(|r| format!("[{}]", row(r))).collect();
        write!(f, "A = [{}], b = [{}]", rows.join(", "), row(&self.b))
    }
}

/// Exact determinant and inverse, failing unless every leading pivot is positive.
fn invert_positive_definite(a: &[Vec<BigRational>]) -> Result<(BigRational, Vec<Vec<BigRational>>)> {
    let k = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..k {
        // without row exchanges the pivots are ratios of leading minors
        let pivot = m[col][col].clone();
        if !pivot.is_positive() {
            return Err(Error::Domain("quadratic part is not positive definite".into()));
        }
        det *= &pivot;
        for v in m[col].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
    }
    Ok((det, m.into_iter().map(|row| row[k..].to_vec()).collect()))
}

/// `#{y ∈ Z^k : E(y) <= m}`.
pub fn lattice_count(form: &QuadLinForm, m: &BigRational) -> Result<u64> {
    let mut n = 0u64;
    form.for_each_point(m, |_, _| n += 1)?;
    Ok(n)
}

/// Volume of `{y ∈ R^k : E(y) <= m}`, namely `V_k (m + bᵀA⁻¹b/4)^{k/2} / √det A`.
pub fn ellipsoid_volume(form: &QuadLinForm, m: f64) -> Result<f64> {
    let r = m + to_f64(&form.depth());
    if r < 0.0 {
        return Err(Error::Domain(format!("level {m} lies below the minimum of the form")));
    }
    let k = form.dim() as f64;
    let unit_ball = std::f64::consts::PI.powf(k / 2.0) / statrs::function::gamma::gamma(k / 2.0 + 1.0);
    Ok(unit_ball * r.powf(k / 2.0) / to_f64(form.det()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(m: i64) -> BigRational {
        ratio(m, 1)
    }

    #[test]
    fn hexagonal_counts() {
        let q = QuadLinForm::theta_power(2, 0).unwrap();
        assert_eq!(q.det(), &ratio(3, 4));
        assert_eq!(lattice_count(&q, &level(0)).unwrap(), 1);
        assert_eq!(lattice_count(&q, &level(1)).unwrap(), 7);
        // brute force over a generous square
        let brute = |m: i64| (-30i64..=30).flat_map(|a| (-30i64..=30).map(move |b| a * a + a * b + b * b)).filter(|&v| v <= m).count() as u64;
        for m in [2, 7, 13, 50, 100] {
            assert_eq!(lattice_count(&q, &level(m)).unwrap(), brute(m));
        }
    }

    #[test]
    fn counts_are_monotone() {
        let f = QuadLinForm::new(
            vec![vec![ratio(3, 2), ratio(1, 3)], vec![ratio(1, 3), ratio(2, 1)]],
            vec![ratio(1, 2), ratio(-1, 1)],
        )
        .unwrap();
        let mut last = 0;
        for m in 0..60 {
            let c = lattice_count(&f, &ratio(m, 2)).unwrap();
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn linear_part_shifts_the_box() {
        // E(y) = y² - 10y has its minimum -25 at y = 5
        let f = QuadLinForm::from_integers(&[vec![1]], &[-10]).unwrap();
        assert_eq!(lattice_count(&f, &level(-25)).unwrap(), 1);
        assert_eq!(lattice_count(&f, &level(-24)).unwrap(), 3);
        assert_eq!(lattice_count(&f, &level(-26)).unwrap(), 0);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(QuadLinForm::from_integers(&[vec![1, 2], vec![2, 1]], &[0, 0]).is_err());
        assert!(QuadLinForm::from_integers(&[vec![1, 2], vec![1, 1]], &[0, 0]).is_err());
    }

    #[test]
    fn volumes() {
        let one = QuadLinForm::from_integers(&[vec![1]], &[0]).unwrap();
        assert!((ellipsoid_volume(&one, 1.0).unwrap() - 2.0).abs() < 1e-14);
        let disk = QuadLinForm::from_integers(&[vec![1, 0], vec![0, 1]], &[0, 0]).unwrap();
        assert!((ellipsoid_volume(&disk, 1.0).unwrap() - std::f64::consts::PI).abs() < 1e-14);
        let hex = QuadLinForm::theta_power(2, 0).unwrap();
        let v = ellipsoid_volume(&hex, 1.0).unwrap();
        assert!((v - 2.0 * std::f64::consts::PI / 3f64.sqrt()).abs() < 1e-13);
        assert!(ellipsoid_volume(&one, -1.0).is_err());
    }

    #[test]
    fn theta_power_determinant() {
        for k in 1..=6usize {
            let f = QuadLinForm::theta_power(k, 1).unwrap();
            assert_eq!(f.det(), &ratio(k as i64 + 1, 1 << k));
        }
    }
}
