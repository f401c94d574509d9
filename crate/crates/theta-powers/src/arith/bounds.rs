use super::mag::Mag;
use crate::error::{Error, Result};

/// Upper bound of `2^l` for a base-2 logarithm `l` computed in floating point.
pub fn pow2_up(l: f64) -> Mag {
    if l == f64::NEG_INFINITY {
        return Mag::ZERO;
    }
    // relative slack absorbs rounding in `l`
    Mag::exp_f64((l + 1e-9 + l.abs() * 1e-12) * std::f64::consts::LN_2)
}

/// Upper bound of `first_term / (1 - ratio)`, the sum of a geometric majorant.
pub fn geometric_tail_bound(ratio: f64, first_term: f64) -> Result<f64> {
    Ok(geometric_tail(Mag::from_f64(ratio), Mag::from_f64(first_term))?.to_f64())
}

/// [`geometric_tail_bound`] on magnitudes.
pub fn geometric_tail(ratio: Mag, first_term: Mag) -> Result<Mag> {
    let one = Mag::from_f64(1.0);
    if ratio >= one {
        return Err(Error::Divergence(format!("geometric ratio {} is not below 1", ratio)));
    }
    if first_term.is_zero() {
        return Ok(Mag::ZERO);
    }
    Ok(first_term.div(one.sub_down(ratio)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((geometric_tail_bound(0.5, 1.0).unwrap() - 2.0).abs() < 1e-14);
        let c = geometric_tail_bound(0.0, 3.0).unwrap();
        assert!(c >= 3.0 && c < 3.0 + 1e-13);
        let b = geometric_tail_bound(0.9, 1e-10).unwrap();
        assert!(b >= 1e-9 && b < 1.0000001e-9);
        assert!(geometric_tail_bound(1.0, 1.0).is_err());
    }

    #[test]
    fn bounds_true_geometric_sums() {
        for &(r, a) in &[(0.3, 2.0), (0.99, 1e-5), (1e-8, 7.0)] {
            let exact: f64 = (0..20000).map(|i| a * f64::powi(r, i)).sum();
            assert!(geometric_tail_bound(r, a).unwrap() >= exact * (1.0 - 1e-12));
        }
    }
}
