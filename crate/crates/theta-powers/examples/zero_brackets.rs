//! Certified sign-change brackets of γ_{k,n} on (-1, 0).

use theta_powers::arith::Precision;
use theta_powers::zeros::{find_zeros, rational_to_decimal};

fn main() -> theta_powers::Result<()> {
    for (k, n) in [(3, 0), (5, 1), (6, 1)] {
        let report = find_zeros(k, n, Precision::new(40))?;
        for b in &report.brackets {
            println!(
                "gamma_({k},{n}) changes sign in [{}, {}]",
                rational_to_decimal(&b.lo, 12, false),
                rational_to_decimal(&b.hi, 12, true)
            );
        }
        for g in &report.gaps {
            println!("gamma_({k},{n}) uncertified on [{}, {}]", rational_to_decimal(&g.lo, 6, false), rational_to_decimal(&g.hi, 6, true));
        }
    }
    Ok(())
}
