use num_rational::Rational64;

use super::ball::{ErrValue, Precision};
use super::mag::Mag;
use crate::error::{Error, Result};

/// A point `tau` of the upper half plane and its nome `q = e^{2 pi i tau}`.
///
/// Fractional powers of `q` are always taken through `tau`, so every half-integer
/// or `1/k` power used anywhere in the crate agrees on the branch.
#[derive(Clone, Debug)]
pub struct TauPoint {
    tau: ErrValue,
    q: ErrValue,
}

impl TauPoint {
    /// Any `tau` with certified positive imaginary part.
    pub fn from_tau(tau: ErrValue) -> Result<TauPoint> {
        let im = tau.imag_part();
        if im.real_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain("Im(tau) is not certified positive".into()));
        }
        let prec = tau.precision();
        let two_pi_i = ErrValue::pi(prec).mul_i64(2).mul_i();
        let q = tau.mul(&two_pi_i).exp();
        Ok(TauPoint { tau, q })
    }

    /// `q` in `(-1, 0)`, with `tau = 1/2 + i t` and `t = -ln|q| / (2 pi)`.
    pub fn from_negative_real(q: &ErrValue) -> Result<TauPoint> {
        if !q.is_real() || q.real_sign() != Some(std::cmp::Ordering::Less) {
            return Err(Error::Domain("nome is not certified negative real".into()));
        }
        let t = Self::height(&q.neg())?;
        let prec = q.precision();
        let half = ErrValue::from_rational(Rational64::new(1, 2), prec);
        Ok(TauPoint { tau: ErrValue::complex(&half, &t), q: q.clone() })
    }

    /// `q` in `(0, 1)`, with `tau = i t`.
    pub fn from_positive_real(q: &ErrValue) -> Result<TauPoint> {
        if !q.is_real() || q.real_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain("nome is not certified positive real".into()));
        }
        let t = Self::height(q)?;
        Ok(TauPoint { tau: t.mul_i(), q: q.clone() })
    }

    /// Real `q` of either sign.
    pub fn from_real(q: &ErrValue) -> Result<TauPoint> {
        match q.real_sign() {
            Some(std::cmp::Ordering::Less) => Self::from_negative_real(q),
            _ => Self::from_positive_real(q),
        }
    }

    fn height(abs_q: &ErrValue) -> Result<ErrValue> {
        if abs_q.abs_upper() >= Mag::from_f64(1.0) {
            return Err(Error::Divergence(format!("|q| = {} is not certified below 1", abs_q)));
        }
        let prec = abs_q.precision();
        let two_pi = ErrValue::pi(prec).mul_i64(2);
        abs_q.ln()?.neg().div(&two_pi)
    }

    pub fn tau(&self) -> &ErrValue {
        &self.tau
    }

    pub fn nome(&self) -> &ErrValue {
        &self.q
    }

    pub fn precision(&self) -> Precision {
        self.q.precision()
    }

    /// Upper bound of `|q|`.
    pub fn nome_abs(&self) -> Mag {
        self.q.abs_upper()
    }

    /// Approximate `Im(tau)`.
    pub fn height_f64(&self) -> f64 {
        self.tau.to_f64_pair().1
    }

    /// The point `m tau`, whose nome is `q^m`.
    pub fn rebase(&self, m: i64) -> Result<TauPoint> {
        if m < 1 {
            return Err(Error::Argument(format!("rebase factor must be positive, got {m}")));
        }
        Ok(TauPoint { tau: self.tau.mul_i64(m), q: self.q.powi(m)? })
    }

    /// `q^alpha`; integer exponents use ordinary powers of the stored nome.
    pub fn qpow(&self, alpha: Rational64) -> Result<ErrValue> {
        if *alpha.denom() == 1 {
            return self.q.powi(*alpha.numer());
        }
        let prec = self.precision();
        let two_pi_i = ErrValue::pi(prec).mul_i64(2).mul_i();
        Ok(self.tau.mul(&ErrValue::from_rational(alpha, prec)).mul(&two_pi_i).exp())
    }
}

/// `q^alpha` on the branch fixed by `tp`.
pub fn qpow(tp: &TauPoint, alpha: Rational64) -> Result<ErrValue> {
    tp.qpow(alpha)
}
