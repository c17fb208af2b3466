//! The unconstrained limit: Marchenko-Pastur from three independent routes.
//!
//! `cargo run --release --example mp_law`

use entspec::resolvent::{fixed_point_density, Grid};
use entspec::{
    density, empirical_cdf_distance, mp_density, sample_spectrum, ConstraintSpec, Method, Result, SampleConfig,
    SolverOptions,
};

fn main() -> Result<()> {
    let spec = ConstraintSpec::unconstrained();
    let opts = SolverOptions::default();
    let points = vec![0.05, 0.25, 0.5, 1.0, 2.0, 3.0, 3.9];
    let grid = Grid::Points(points.clone());
    let closed = density(&spec, &grid, Method::Closed, &opts)?;
    let numeric = fixed_point_density(&spec, &grid, &opts)?;

    println!("{:>6} {:>14} {:>14} {:>10}", "eps", "closed", "fixed-point", "diff");
    for (i, e) in points.iter().enumerate() {
        let (a, b) = (closed.p_total[i], numeric.p_total[i]);
        println!("{e:>6.2} {a:>14.10} {b:>14.10} {:>10.1e}", (a - b).abs());
        assert!((a - mp_density(*e)).abs() < 1e-12);
    }

    let full = density(&spec, &Grid::default(), Method::Closed, &opts)?;
    let emp = sample_spectrum(&SampleConfig::new(spec, 400, 1, 4))?;
    println!("\nN = 400, 4 samples: sup |F_emp - F_MP| = {:.4}", empirical_cdf_distance(&emp, &full));
    Ok(())
}
