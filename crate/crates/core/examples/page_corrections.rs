//! Average entanglement entropy below its infinite-temperature value.
//!
//! `cargo run --release --example page_corrections`

use entspec::entropy::{entropy_report, raw_edge_asymptote};
use entspec::resolvent::Grid;
use entspec::{asymptotic_spec, blockaded_density, page_asymptote, ModelKind, Result, GOLDEN};

fn main() -> Result<()> {
    let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN })?;
    let dos = blockaded_density(GOLDEN, &Grid::default())?;
    let n: Vec<f64> = vec![1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 400.0];
    let report = entropy_report(&spec, &dos, &n)?;

    println!("{:>5} {:>12} {:>12} {:>12}", "n", "S_avg-lnN", "S_inf-lnN", "Delta S");
    for i in 0..n.len() {
        println!(
            "{:>5} {:>12.8} {:>12.8} {:>12.8}",
            n[i], report.s_avg_minus_ln_n[i], report.s_inf_minus_ln_n[i], report.delta_s[i]
        );
    }
    println!("n -> inf limit: {:.8}", page_asymptote(&spec)?);
    println!("same expression with the raw edge: {:.6}", raw_edge_asymptote(GOLDEN));

    println!("\nDelta S_1 across phases");
    for phi in [0.3, 0.5, 1.0, GOLDEN, 2.0, 5.0] {
        let spec = asymptotic_spec(ModelKind::Blockaded { phi })?;
        let dos = blockaded_density(phi, &Grid::Chebyshev(400))?;
        println!("  phi = {phi:.4}: {:.6}", entspec::page_correction(&spec, &dos, 1.0)?);
    }
    Ok(())
}
