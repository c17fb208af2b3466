//! Gapped, multicritical and MP phases of the blockaded density of states.
//!
//! `cargo run --release --example blockaded_phases`

use entspec::resolvent::{blockaded_gap_slope, unbalanced_gap_slope, Grid};
use entspec::{blockaded_density, classify_phase, Result};

fn main() -> Result<()> {
    println!("{:>5} {:>14} {:>10} {:>8} {:>9}  phase", "phi", "z_-", "z_+", "delta", "exponent");
    for phi in [0.25, 0.5, 0.75, 0.9, 1.0, 1.25, 1.618, 2.0, 3.0] {
        let r = classify_phase(phi)?;
        println!(
            "{phi:>5.3} {:>14.6e} {:>10.5} {:>8.5} {:>9.4}  {}",
            r.z_minus,
            r.z_plus,
            r.delta_mass,
            r.fitted_exponent,
            r.phase.label()
        );
    }

    let d = blockaded_density(1.0, &Grid::Chebyshev(64))?;
    println!("\nphi = 1 closed-form small-eps exponent: {:?}", d.small_eps_exponent());
    println!("gap z_- vs 1 - phi slope: {:.4}", blockaded_gap_slope(0.9, 0.99, 20)?);
    println!("unbalanced MP gap vs |lambda - 1| slope: {:.4}", unbalanced_gap_slope(1e-3, 1e-2, true, 20)?);
    Ok(())
}
