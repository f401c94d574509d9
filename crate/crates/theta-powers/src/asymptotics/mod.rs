//! Behaviour of the coefficients as `q -> -1` along the real axis: which ones
//! vanish in the limit, which diverge and with what sign, and the growth laws.

pub mod modular;

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::Serialize;

pub use modular::{
    gamma_asymptotic_estimate, gamma_profile, gamma_via_modular, lambda_system, s_alpha_modular, s_kn_eval,
    theta_qk_one_asymptote, theta_qk_one_modular, ModularPoint,
};

use crate::error::{Error, Result};

/// `cos(jπ/4)`, exact up to the final rounding of `√2/2`.
pub fn cos_quarter_turns(j: i64) -> f64 {
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
    [1.0, H, 0.0, -H, -1.0, -H, 0.0, H][j.rem_euclid(8) as usize]
}

/// Limit behaviour of `γ_{k,n}(q)` as `q -> -1⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TendsToZero,
    PlusInfinity,
    MinusInfinity,
    Unclassified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TendsToZero => "tends_to_zero",
            Verdict::PlusInfinity => "plus_infinity",
            Verdict::MinusInfinity => "minus_infinity",
            Verdict::Unclassified => "unclassified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationVerdict {
    pub k: u32,
    pub n: i64,
    pub verdict: Verdict,
    /// `k - 2n mod 8 ∈ {3, 4, 5}`, which forces a sign change on `(-1, 0)`.
    pub corollary_flag: bool,
    /// `k ≡ 2, 4 (mod 8)` and `(k + 1) | n`.
    pub complementary_flag: bool,
    /// Signed multiplier `±2` or `±√2` of the growth profile; absent when the limit is zero.
    pub predicted_constant: Option<f64>,
}

/// Divergence class and sign of `γ_{k,n}` as `q -> -1⁺`, for `k >= 3` and `0 <= n < k`.
pub fn classify(k: u32, n: i64) -> Result<ClassificationVerdict> {
    if k < 3 || n < 0 || n >= k as i64 {
        return Err(Error::Argument(format!("classification needs k >= 3 and 0 <= n < k, got k={k}, n={n}")));
    }
    let ki = k as i64;
    let corollary_flag = matches!((ki - 2 * n).rem_euclid(8), 3..=5);
    let complementary_flag = matches!(ki % 8, 2 | 4) && n % (ki + 1) == 0;
    let (verdict, predicted_constant) = match growth_sign(ki, n) {
        None => (Verdict::TendsToZero, None),
        Some((sign, constant)) => {
            let v = if sign > 0 { Verdict::PlusInfinity } else { Verdict::MinusInfinity };
            (v, Some(sign as f64 * constant))
        }
    };
    Ok(ClassificationVerdict { k, n, verdict, corollary_flag, complementary_flag, predicted_constant })
}

/// `Some((±1, constant))` for diverging coefficients, `None` for the vanishing class.
pub(crate) fn growth_sign(k: i64, n: i64) -> Option<(i64, f64)> {
    if k % 2 == 0 && (k - 2 * n).rem_euclid(4) == 2 {
        return None;
    }
    // (k', n') from the four shapes k = 4k', 4k'+2, 4k'+1, 4k'-1
    let (kp, np, constant) = match k.rem_euclid(4) {
        0 => (k / 4, n / 2, 2.0),
        2 => ((k - 2) / 4, (n - 1) / 2, 2.0),
        1 => ((k - 1) / 4, n / 2, std::f64::consts::SQRT_2),
        _ => ((k + 1) / 4, (n + 1) / 2, std::f64::consts::SQRT_2),
    };
    let sign = if (kp - np).rem_euclid(2) == 0 { 1 } else { -1 };
    Some((sign, constant))
}

/// Integers `n` modulo `period`, written as `period·Z + {residues}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueSet {
    pub period: i64,
    pub residues: Vec<i64>,
}

impl ResidueSet {
    /// Canonical form with the smallest period dividing `modulus`.
    pub fn from_residues(modulus: i64, residues: &[i64]) -> ResidueSet {
        let mut set: Vec<i64> = residues.iter().map(|r| r.rem_euclid(modulus)).collect();
        set.sort_unstable();
        set.dedup();
        for d in 1..=modulus {
            if modulus % d != 0 {
                continue;
            }
            let shifted: Vec<i64> = {
                let mut s: Vec<i64> = set.iter().map(|r| (r + d) % modulus).collect();
                s.sort_unstable();
                s
            };
            if shifted == set {
                let mut small: Vec<i64> = set.iter().map(|r| r % d).collect();
                small.sort_unstable();
                small.dedup();
                return ResidueSet { period: d, residues: small };
            }
        }
        unreachable!("the full modulus is always a period")
    }

    pub fn contains(&self, n: i64) -> bool {
        self.residues.contains(&n.rem_euclid(self.period))
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .residues
            .iter()
            .map(|&r| if r == 0 { format!("{}Z", self.period) } else { format!("{}Z+{}", self.period, r) })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// `X_k = {0 <= n <= k : k - 2n mod 8 ∈ {3, 4, 5}}` and `Y_k = X_k + kZ`.
pub fn vanishing_sets(k: u32) -> Result<(Vec<i64>, ResidueSet)> {
    if k < 3 {
        return Err(Error::Argument(format!("vanishing sets need k >= 3, got {k}")));
    }
    let ki = k as i64;
    let x: Vec<i64> = (0..=ki).filter(|n| matches!((ki - 2 * n).rem_euclid(8), 3..=5)).collect();
    let y = ResidueSet::from_residues(ki, &x);
    Ok((x, y))
}

/// Constant `π^{k/2} √2 cos((k+ε)π/4) / √(k+1)` with `ε = (-1)ⁿ`.
pub fn f_main_constant(k: u32, n: i64) -> f64 {
    let eps = if n.rem_euclid(2) == 0 { 1 } else { -1 };
    let kf = k as f64;
    std::f64::consts::PI.powf(kf / 2.0) * std::f64::consts::SQRT_2 * cos_quarter_turns(k as i64 + eps) / (kf + 1.0).sqrt()
}

/// Amplitude `π^{k/2} √2 / √(k+1)` of the constant, used to normalize when the cosine vanishes.
pub fn f_main_amplitude(k: u32) -> f64 {
    let kf = k as f64;
    std::f64::consts::PI.powf(kf / 2.0) * std::f64::consts::SQRT_2 / (kf + 1.0).sqrt()
}

/// Predicted leading behaviour of `f_{k,n}(-x)` as `x -> 1⁻`.
pub fn f_main_term(k: u32, n: i64, x: f64) -> Result<f64> {
    if !(0.0 < x && x < 1.0) {
        return Err(Error::Domain(format!("x must lie in (0, 1), got {x}")));
    }
    Ok(f_main_constant(k, n) / (1.0 - x).powf(k as f64 / 2.0))
}

/// `s_j = Σ_{l ≡ j (mod 4)} binom(k, l)` for `j = 0..4`.
pub fn binomial_residue_sums(k: u32) -> [BigInt; 4] {
    let mut s: [BigInt; 4] = Default::default();
    for l in 0..=k {
        s[(l % 4) as usize] += binomial(BigInt::from(k), BigInt::from(l));
    }
    s
}

/// Closed form `(2^k + 2^{k/2+1} cos((k - 2j)π/4)) / 4` of the residue sums, valid for `k >= 1`.
pub fn binomial_residue_closed(k: u32, j: i64) -> f64 {
    let kf = k as f64;
    (2f64.powf(kf) + 2f64.powf(kf / 2.0 + 1.0) * cos_quarter_turns(k as i64 - 2 * j)) / 4.0
}
