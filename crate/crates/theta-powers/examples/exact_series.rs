//! Exact integer coefficients of γ_{k,n}, the sum of q^{m²} over m ≡ n mod k, read off θ^k.

use theta_powers::coeff::{gamma_series, CoeffKey};

fn main() -> theta_powers::Result<()> {
    for (k, n) in [(3, 0), (4, 1), (2, 5)] {
        let key = CoeffKey::new(k, n)?;
        let s = gamma_series(key, 16)?;
        let coeffs: Vec<String> = s.coeffs.iter().map(|c| c.to_string()).collect();
        println!("gamma_({k},{n}) = [{}]", coeffs.join(", "));
    }
    Ok(())
}
