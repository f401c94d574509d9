//! Limit of γ_{k,n}(q) as q -> -1 for every residue n, with the vanishing sets.

use theta_powers::asymptotics::{classify, vanishing_sets};

fn main() -> theta_powers::Result<()> {
    for k in 3..=8 {
        let row: Vec<String> = (0..k as i64)
            .map(|n| classify(k, n).map(|v| format!("{n}:{}", v.verdict)))
            .collect::<Result<_, _>>()?;
        let (x, y) = vanishing_sets(k)?;
        println!("k={k}  {}  X={x:?} Y={y}", row.join(" "));
    }
    Ok(())
}
