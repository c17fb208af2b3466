//! Relative fluctuations of trace moments shrink like 1/N.
//!
//! `cargo run --release --example self_averaging`

use entspec::{asymptotic_spec, self_averaging_scan, ModelKind, Result, GOLDEN};

fn main() -> Result<()> {
    let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN })?;
    for order in [2, 3] {
        let scan = self_averaging_scan(&spec, order, &[25, 50, 100, 200], 40, 5)?;
        println!("Tr rho^{order}");
        for row in &scan.rows {
            println!("  N = {:>4}: mean/N = {:.5}, rel std = {:.3e}", row.n_scale, row.mean, row.rel_std.unwrap_or(f64::NAN));
        }
        println!("  log-log slope {:.3}", scan.slope.unwrap_or(f64::NAN));
    }
    Ok(())
}
