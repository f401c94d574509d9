//! Certified evaluation of θ and of γ_{k,n} at a real nome, as a midpoint and error radius.

use theta_powers::arith::{ErrValue, Precision};
use theta_powers::coeff::{gamma_eval, CoeffKey};
use theta_powers::theta::theta_eval;

fn main() -> theta_powers::Result<()> {
    let prec = Precision::new(40);
    let q = ErrValue::parse_decimal("0.3", prec)?;
    let x = ErrValue::parse_decimal("0.7", prec)?;
    let t = theta_eval(&q, &x)?.to_decimal(40);
    println!("theta_q(x) at q=0.3, x=0.7: {} +/- {}", t.re, t.radius);

    for q in ["-0.5", "-0.95"] {
        let qv = ErrValue::parse_decimal(q, prec)?;
        let g = gamma_eval(CoeffKey::new(3, 0)?, &qv, None)?.to_decimal(40);
        println!("gamma_(3,0)({q}) = {} +/- {}", g.re, g.radius);
    }
    Ok(())
}
