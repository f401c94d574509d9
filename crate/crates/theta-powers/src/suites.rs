//! Named invariant suites: each check records what was compared, the size of the
//! disagreement and whether it stays inside the certified or tolerated band.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{ErrValue, Mag, Precision, TauPoint};
use crate::asymptotics::{
    f_main_amplitude, f_main_constant, gamma_asymptotic_estimate, gamma_profile, theta_qk_one_asymptote, ModularPoint,
};
use crate::coeff::{c_closed_eval, c_eval, c_recurrence_eval, c_rootsum_eval, gamma_eval, CoeffKey};
use crate::error::{Error, Result};
use crate::lattice::{ellipsoid_volume, f_kn_eval, lattice_count, poisson_residual, random_form, QuadLinForm};
use crate::theta::identities::{identity_residuals, sample_cases, IdentityId};
use crate::theta::vartheta_eval;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Routes,
    Asymptotics,
    Lattice,
    Poisson,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Identities, Suite::Routes, Suite::Asymptotics, Suite::Lattice, Suite::Poisson];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Routes => "routes",
            Suite::Asymptotics => "asymptotics",
            Suite::Lattice => "lattice",
            Suite::Poisson => "poisson",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown suite {s:?}; expected one of identities, routes, asymptotics, lattice, poisson")))
    }
}

/// One comparison. `residual` and `bound` are decimal upper bounds.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: String,
    pub bound: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64, prec: Precision) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Identities => identity_checks(seed, 20, prec)?,
        Suite::Routes => route_checks(seed, 20, prec)?,
        Suite::Asymptotics => asymptotic_checks(prec)?,
        Suite::Lattice => lattice_checks()?,
        Suite::Poisson => poisson_checks(seed, 10, Precision::new(prec.digits().min(30)))?,
    };
    Ok(SuiteReport { suite: suite.name().to_string(), checks })
}

fn mag(m: Mag) -> String {
    m.to_decimal_up()
}

fn float(x: f64) -> String {
    format!("{x:.6e}")
}

/// Every registered identity at `count` seeded points; one check per identity.
pub fn identity_checks(seed: u64, count: usize, prec: Precision) -> Result<Vec<Check>> {
    let cases = sample_cases(seed, count, prec)?;
    let mut out = Vec::new();
    for id in IdentityId::ALL {
        let mut worst_excess = Mag::ZERO;
        let mut worst_radius = Mag::ZERO;
        let mut failures = 0;
        for case in &cases {
            let r = identity_residuals(*id, &case.tp, &case.point)?;
            if !r.passes() {
                failures += 1;
            }
            let w = r.worst();
            worst_excess = worst_excess.max(w.mid_abs());
            worst_radius = worst_radius.max(w.radius());
        }
        out.push(Check {
            name: id.name().to_string(),
            passed: failures == 0,
            residual: mag(worst_excess),
            bound: mag(worst_radius),
            detail: format!("{} points, {failures} outside radius", cases.len()),
        });
    }
    Ok(out)
}

/// Seeded nomes `q = e^{2πiτ}` with `|q|` in `[0.05, 0.6]`.
pub fn sample_points(seed: u64, count: usize, prec: Precision) -> Result<Vec<TauPoint>> {
    Ok(sample_cases(seed, count, prec)?.into_iter().map(|c| c.tp).collect())
}

/// Series, recurrence, closed forms and root filter agree at seeded points, `k <= 4`.
pub fn route_checks(seed: u64, count: usize, prec: Precision) -> Result<Vec<Check>> {
    let points = sample_points(seed, count, prec)?;
    let mut out = Vec::new();
    for k in 1..=4u32 {
        for n in 0..k as i64 {
            let key = CoeffKey::new(k, n)?;
            let mut disagreements = 0;
            let mut spread = Mag::ZERO;
            let mut radius = Mag::ZERO;
            for tp in &points {
                let mut values = vec![c_eval(key, tp)?, c_recurrence_eval(k, n, tp)?];
                if k >= 2 {
                    values.push(c_closed_eval(key, tp)?);
                    values.push(c_rootsum_eval(key, tp)?);
                }
                for v in &values[1..] {
                    if !v.overlaps(&values[0]) {
                        disagreements += 1;
                    }
                    spread = spread.max(v.midpoint().sub(&values[0].midpoint()).abs_upper());
                    radius = radius.max(v.radius().add(values[0].radius()));
                }
            }
            out.push(Check {
                name: format!("routes {key}"),
                passed: disagreements == 0,
                residual: mag(spread),
                bound: mag(radius),
                detail: format!("{} points, {disagreements} disagreements", points.len()),
            });
        }
    }
    Ok(out)
}

/// A deviation measured at a sequence of points approaching the limit.
#[derive(Clone, Debug, Serialize)]
pub struct Trend {
    pub k: u32,
    pub n: i64,
    /// `(abscissa, observed, deviation)`
    pub rows: Vec<(f64, f64, f64)>,
    pub monotone: bool,
    pub final_deviation: f64,
    pub sign_ok: bool,
}

impl Trend {
    fn new(k: u32, n: i64, rows: Vec<(f64, f64, f64)>, sign_ok: bool) -> Trend {
        let monotone = rows.windows(2).all(|w| w[1].2 <= w[0].2);
        let final_deviation = rows.last().map(|r| r.2).unwrap_or(f64::INFINITY);
        Trend { k, n, rows, monotone, final_deviation, sign_ok }
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.monotone && self.sign_ok && self.final_deviation <= tolerance
    }
}

pub const MAIN_TERM_GRID: [f64; 3] = [0.9, 0.99, 0.999];
pub const MODULAR_GRID: [f64; 3] = [0.10, 0.07, 0.05];

/// `f_{k,n}(-x)(1-x)^{k/2}` against its limiting constant.
///
/// When the constant vanishes the deviation is taken relative to the amplitude
/// `π^{k/2}√2/√(k+1)` of the cosine factor.
pub fn main_term_trend(k: u32, n: i64, prec: Precision) -> Result<Trend> {
    let c = f_main_constant(k, n);
    let mut rows = Vec::new();
    for x in MAIN_TERM_GRID {
        let f = f_kn_eval(k, n, &ErrValue::from_f64(-x, prec))?.re_f64();
        let v = f * (1.0 - x).powf(k as f64 / 2.0);
        let dev = if c == 0.0 { v.abs() / f_main_amplitude(k) } else { (v / c - 1.0).abs() };
        rows.push((x, v, dev));
    }
    Ok(Trend::new(k, n, rows, true))
}

/// `γ_{k,n}(e^{πi-2πt})` against `±2Γ` or `±√2Γ`, or `|γ|/Γ` for the vanishing class.
pub fn modular_trend(k: u32, n: i64, prec: Precision) -> Result<Trend> {
    let mut rows = Vec::new();
    let mut sign_ok = true;
    for t in MODULAR_GRID {
        let mp = ModularPoint::new(t, prec)?;
        let g = gamma_eval(CoeffKey::new(k, n)?, mp.nome(), None)?.re_f64();
        let est = gamma_asymptotic_estimate(k, n, t, prec)?;
        let dev = if est.contains_zero() {
            g.abs() / gamma_profile(k, n, t)?
        } else {
            let e = est.re_f64();
            sign_ok &= g.signum() == e.signum();
            (g / e - 1.0).abs()
        };
        rows.push((t, g, dev));
    }
    Ok(Trend::new(k, n, rows, sign_ok))
}

fn trend_check(label: &str, trend: &Trend, tolerance: f64) -> Check {
    let table: Vec<String> = trend.rows.iter().map(|(a, v, d)| format!("{a}: {} ({})", float(*v), float(*d))).collect();
    Check {
        name: format!("{label} (k={}, n={})", trend.k, trend.n),
        passed: trend.passes(tolerance),
        residual: float(trend.final_deviation),
        bound: float(tolerance),
        detail: format!("monotone={} sign={} [{}]", trend.monotone, trend.sign_ok, table.join("; ")),
    }
}

pub fn asymptotic_checks(prec: Precision) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, n) in [(2u32, 0i64), (3, 0), (3, 1), (4, 1)] {
        out.push(trend_check("main term", &main_term_trend(k, n, prec)?, 0.15));
    }
    for (k, n) in [(3u32, 0i64), (3, 1), (4, 0), (5, 1)] {
        out.push(trend_check("modular estimate", &modular_trend(k, n, prec)?, 0.1));
    }
    for (k, n) in [(4u32, 1i64), (6, 0)] {
        out.push(trend_check("vanishing class", &modular_trend(k, n, prec)?, 0.05));
    }
    let t = MODULAR_GRID[2];
    let mp = ModularPoint::new(t, prec)?;
    for k in 1..=4u32 {
        let exact = vartheta_eval(&mp.point().rebase(k as i64)?, &ErrValue::one(prec))?;
        let approx = theta_qk_one_asymptote(k, t, prec)?;
        let rel = exact.sub(&approx).abs_upper().to_f64() / exact.abs_lower().to_f64();
        // the first omitted term has relative size 2e^{-π/(4kt)}
        let band = 2.05 * (-std::f64::consts::PI / (4.0 * k as f64 * t)).exp();
        out.push(Check {
            name: format!("theta at one asymptote (k={k})"),
            passed: rel <= band.max(0.01),
            residual: float(rel),
            bound: float(band.max(0.01)),
            detail: format!("t = {t}"),
        });
    }
    Ok(out)
}

pub const LATTICE_LEVELS: [i64; 5] = [25, 50, 100, 200, 400];

/// `(M, count, volume, |count - volume| / M^{(k-1)/2})` for the form of `θ^{k+1}` at `n = 0`.
pub fn lattice_table(k: usize) -> Result<Vec<(i64, u64, f64, f64)>> {
    let form = QuadLinForm::theta_power(k, 0)?;
    LATTICE_LEVELS
        .iter()
        .map(|&m| {
            let count = lattice_count(&form, &BigRational::from_integer(BigInt::from(m)))?;
            let vol = ellipsoid_volume(&form, m as f64)?;
            let dev = (count as f64 - vol).abs() / (m as f64).powf((k as f64 - 1.0) / 2.0);
            Ok((m, count, vol, dev))
        })
        .collect()
}

pub fn lattice_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in [2usize, 3] {
        let table = lattice_table(k)?;
        let mut devs: Vec<f64> = table.iter().map(|r| r.3).collect();
        let max = devs.iter().cloned().fold(0.0, f64::max);
        devs.sort_by(|a, b| a.total_cmp(b));
        let median = devs[devs.len() / 2];
        let rows: Vec<String> = table.iter().map(|(m, c, v, _)| format!("{m}: {c} vs {}", float(*v))).collect();
        out.push(Check {
            name: format!("count minus volume (k={k})"),
            passed: max <= 4.0 * median,
            residual: float(max),
            bound: float(4.0 * median),
            detail: rows.join("; "),
        });
        if k == 2 {
            let (m, c, _, _) = table[table.len() - 1];
            let ratio = c as f64 / m as f64;
            let target = 2.0 * std::f64::consts::PI / 3f64.sqrt();
            let rel = (ratio / target - 1.0).abs();
            out.push(Check {
                name: "ellipse area constant (k=2)".into(),
                passed: rel <= 0.05,
                residual: float(rel),
                bound: float(0.05),
                detail: format!("count/M = {} at M = {m}, 2π/√3 = {}", float(ratio), float(target)),
            });
        }
    }
    Ok(out)
}

/// Poisson summation at `count` seeded positive definite forms of dimension 1 to 3.
pub fn poisson_checks(seed: u64, count: usize, prec: Precision) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let k = 1 + i % 3;
        let form = random_form(&mut rng, k)?;
        let r = poisson_residual(&form, prec)?;
        out.push(Check {
            name: format!("poisson form {i} (k={k})"),
            passed: r.contains_zero(),
            residual: mag(r.mid_abs()),
            bound: mag(r.radius()),
            detail: format!("det = {}", form.det()),
        });
    }
    Ok(out)
}
