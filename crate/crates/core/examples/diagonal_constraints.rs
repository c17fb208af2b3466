//! Fixed magnetization: independent sectors with an MP-like Page correction.
//!
//! `cargo run --release --example diagonal_constraints`

use entspec::resolvent::Grid;
use entspec::{
    asymptotic_spec, catalan, diagonal_density, fit_small_eps_exponent, mp_density, page_correction, ModelKind,
    Result,
};

fn main() -> Result<()> {
    let spec = asymptotic_spec(ModelKind::DiagonalSz { sites: 8, up_spins: 8 })?;
    println!("sectors d = {:?}", spec.d());
    println!("partners = {:?}", spec.diagonal_partners());

    let dos = diagonal_density(&spec, &Grid::Chebyshev(800))?;
    for n in 2..=5 {
        let mp = (catalan(n) as f64).ln() / (n as f64 - 1.0);
        println!("Delta S_{n} = {:.10}   ln C_n/(n-1) = {mp:.10}", page_correction(&spec, &dos, n as f64)?);
    }
    let gap = dos.eps_grid.iter().map(|&e| (dos.pdf(e) - mp_density(e)).abs()).fold(0.0, f64::max);
    println!("sup |p - p_MP| = {gap:.4}");
    println!("small-eps exponent = {:.4}", fit_small_eps_exponent(&dos, (1e-6, 1e-3))?);

    let unbalanced = asymptotic_spec(ModelKind::DiagonalSz { sites: 8, up_spins: 6 })?;
    let dos = diagonal_density(&unbalanced, &Grid::Chebyshev(800))?;
    println!("\nM = 6: delta mass {:.4}, Delta S_1 = {:.6}", dos.delta_mass_at_zero, page_correction(&unbalanced, &dos, 1.0)?);
    Ok(())
}
