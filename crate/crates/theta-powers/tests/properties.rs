//! Property tests: ball arithmetic encloses a high-precision reference, and exact
//! series obey their structural identities.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use theta_powers::arith::{ErrValue, Precision};
use theta_powers::asymptotics::classify;
use theta_powers::cli::CacheEntry;
use theta_powers::coeff::{gamma_convolution_eval, gamma_eval, gamma_series, gamma_series_dp, gamma_series_oracle, CoeffKey};
use theta_powers::zeros::{parse_rational, rational_to_decimal};

const LOW: Precision = Precision::DEFAULT;

fn high() -> Precision {
    Precision::new(120)
}

/// Both balls must intersect: the low-precision one contains the true value and so does the reference.
fn encloses(low: &ErrValue, reference: &ErrValue) -> bool {
    low.overlaps(reference)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_encloses_reference(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let (xa, xb) = (ErrValue::from_f64(a, LOW), ErrValue::from_f64(b, LOW));
        let (ya, yb) = (ErrValue::from_f64(a, high()), ErrValue::from_f64(b, high()));
        prop_assert!(encloses(&xa.add(&xb), &ya.add(&yb)));
        prop_assert!(encloses(&xa.mul(&xb), &ya.mul(&yb)));
        prop_assert!(encloses(&xa.sub(&xb).sqr(), &ya.sub(&yb).sqr()));
        if b.abs() > 1e-3 {
            prop_assert!(encloses(&xa.div(&xb).unwrap(), &ya.div(&yb).unwrap()));
        }
    }

    #[test]
    fn elementary_functions_enclose_reference(a in -20.0f64..20.0) {
        let (x, y) = (ErrValue::from_f64(a, LOW), ErrValue::from_f64(a, high()));
        prop_assert!(encloses(&x.exp(), &y.exp()));
        prop_assert!(encloses(&x.sin().unwrap(), &y.sin().unwrap()));
        prop_assert!(encloses(&x.cos().unwrap(), &y.cos().unwrap()));
        let (p, r) = (x.mul(&x).add(&ErrValue::one(LOW)), y.mul(&y).add(&ErrValue::one(high())));
        prop_assert!(encloses(&p.sqrt().unwrap(), &r.sqrt().unwrap()));
        prop_assert!(encloses(&p.ln().unwrap(), &r.ln().unwrap()));
    }

    #[test]
    fn radius_is_small_at_working_precision(a in 0.1f64..10.0) {
        let v = ErrValue::from_f64(a, LOW).exp().sqrt().unwrap();
        prop_assert!(v.radius().to_f64() <= v.mid_abs().to_f64() * 1e-45);
    }

    #[test]
    fn complex_products_enclose_reference(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let z = ErrValue::complex(&ErrValue::from_f64(a, LOW), &ErrValue::from_f64(b, LOW));
        let w = ErrValue::complex(&ErrValue::from_f64(c, high()), &ErrValue::from_f64(a, high()));
        let zh = ErrValue::complex(&ErrValue::from_f64(a, high()), &ErrValue::from_f64(b, high()));
        let wl = ErrValue::complex(&ErrValue::from_f64(c, LOW), &ErrValue::from_f64(a, LOW));
        prop_assert!(encloses(&z.mul(&wl).exp(), &zh.mul(&w).exp()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_structure(k in 1u32..=5, n in -6i64..12, order in 0usize..=25) {
        let g = gamma_series(CoeffKey::new(k, n).unwrap(), order).unwrap();
        let mirror = gamma_series(CoeffKey::new(k, k as i64 - n).unwrap(), order).unwrap();
        prop_assert_eq!(&g, &mirror);
        if (0..=k as i64).contains(&n) {
            prop_assert!(g.coeffs.iter().all(|c| !c.is_negative()));
            prop_assert_eq!(&g.coeffs[0], &binomial(BigInt::from(k), BigInt::from(n)));
        }
        if n >= 0 {
            let next = gamma_series(CoeffKey::new(k, n + k as i64).unwrap(), order).unwrap();
            prop_assert_eq!(next, g.shifted(n as u64));
        }
    }

    #[test]
    fn dynamic_programme_matches_oracle(k in 1u32..=6, n in 0i64..6, order in 0usize..=30) {
        let n = n % k as i64;
        let key = CoeffKey::new(k, n).unwrap();
        prop_assert_eq!(gamma_series_dp(key, order).unwrap(), gamma_series_oracle(key, order).unwrap());
    }

    #[test]
    fn cache_entries_round_trip(k in 1u32..=5, n in 0i64..5, order in 0usize..=30) {
        let key = CoeffKey::new(k, n % k as i64).unwrap();
        let entry = CacheEntry::new(key, gamma_series_dp(key, order).unwrap());
        prop_assert_eq!(CacheEntry::decode(&entry.encode()), Some(entry));
    }

    #[test]
    fn routes_overlap(k in 1u32..=4, n in 0i64..4, q in -0.8f64..0.8) {
        let key = CoeffKey::new(k, n % k as i64).unwrap();
        let qv = ErrValue::from_f64(q, Precision::new(30));
        let a = gamma_eval(key, &qv, None).unwrap();
        let b = gamma_convolution_eval(key, &qv).unwrap();
        prop_assert!(a.overlaps(&b));
    }

    #[test]
    fn classification_is_symmetric(k in 3u32..=20, n in 1i64..20) {
        let n = n % k as i64;
        prop_assume!(n > 0);
        prop_assert_eq!(classify(k, n).unwrap().verdict, classify(k, k as i64 - n).unwrap().verdict);
    }

    #[test]
    fn printed_bounds_bracket_rationals(num in -1_000_000i64..1_000_000, den in 1i64..100_000, places in 0u32..12) {
        let r = parse_rational(&format!("{num}/{den}")).unwrap();
        let lo = parse_rational(&rational_to_decimal(&r, places, false)).unwrap();
        let hi = parse_rational(&rational_to_decimal(&r, places, true)).unwrap();
        prop_assert!(lo <= r && r <= hi);
        let gap = (&hi - &lo).to_f64().unwrap();
        prop_assert!(gap <= 10f64.powi(-(places as i32)) * 1.000001);
    }
}
