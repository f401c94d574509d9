//! Runs every invariant suite with a fixed seed and prints the failing checks.

use theta_powers::arith::Precision;
use theta_powers::suites::{run_suite, Suite};

fn main() -> theta_powers::Result<()> {
    for suite in Suite::ALL {
        let report = run_suite(suite, 0x5EED, Precision::new(30))?;
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        println!("{suite}: {} checks, failed {failed:?}", report.checks.len());
    }
    Ok(())
}
