//! γ_{k,n}(e^{πi-2πt}) against its leading behaviour as t -> 0.

use theta_powers::arith::Precision;
use theta_powers::suites::{main_term_trend, modular_trend};

fn main() -> theta_powers::Result<()> {
    let prec = Precision::new(30);
    for (k, n) in [(3, 0), (3, 1), (4, 1)] {
        let trend = modular_trend(k, n, prec)?;
        for (t, observed, deviation) in &trend.rows {
            println!("modular ({k},{n}) t={t}: observed {observed:.6} deviation {deviation:.2e}");
        }
    }
    let trend = main_term_trend(3, 0, prec)?;
    for (x, observed, deviation) in &trend.rows {
        println!("main term (3,0) x={x}: scaled value {observed:.6} deviation {deviation:.2e}");
    }
    Ok(())
}
