//! Lattice points of the form attached to θ^{k+1} against the ellipsoid volume.

use theta_powers::suites::lattice_table;

fn main() -> theta_powers::Result<()> {
    for k in [2, 3] {
        for (m, count, volume, deviation) in lattice_table(k)? {
            println!("k={k} M={m}: count {count}, volume {volume:.3}, scaled deviation {deviation:.4}");
        }
    }
    Ok(())
}
