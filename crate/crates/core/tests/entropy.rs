//! Renyi entropies and Page corrections.

use entspec::entropy::{blockaded_inf_temp_entropy, raw_edge_asymptote};
use entspec::resolvent::Grid;
use entspec::{
    asymptotic_spec, blockaded_density, catalan, inf_temp_entropy, moment_integral, normalized_moment,
    page_asymptote, page_correction, ConstraintSpec, ModelKind, SolverOptions, GOLDEN,
};

fn blockaded(phi: f64) -> ConstraintSpec {
    asymptotic_spec(ModelKind::Blockaded { phi }).unwrap()
}

fn delta_s(phi: f64, n: f64) -> f64 {
    let d = blockaded_density(phi, &Grid::Chebyshev(16)).unwrap();
    page_correction(&blockaded(phi), &d, n).unwrap()
}

/// Unconstrained: `Delta S_n = ln C_n / (n - 1)` and `Delta S_1 = 1/2`.
#[test]
fn unconstrained_corrections_are_catalan() {
    let spec = ConstraintSpec::unconstrained();
    let d = entspec::density(&spec, &Grid::Chebyshev(16), entspec::Method::Closed, &SolverOptions::default()).unwrap();
    assert!((page_correction(&spec, &d, 1.0).unwrap() - 0.5).abs() < 1e-8);
    for n in 2..=6 {
        let expected = (catalan(n) as f64).ln() / (n as f64 - 1.0);
        assert!((page_correction(&spec, &d, n as f64).unwrap() - expected).abs() < 1e-8, "n = {n}");
    }
    assert!((page_asymptote(&spec).unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn golden_corrections() {
    assert!((delta_s(GOLDEN, 1.0) - 0.5136).abs() < 1e-4);
    assert!((delta_s(GOLDEN, 2.0) - 2f64.ln()).abs() < 1e-6);
}

#[test]
fn golden_corrections_grow_with_index() {
    let values: Vec<f64> = (1..=20).map(|n| delta_s(GOLDEN, n as f64)).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn von_neumann_correction_exceeds_one_half() {
    for phi in [0.3, 0.5, 1.0, GOLDEN, 2.0, 3.0, 5.0] {
        assert!(delta_s(phi, 1.0) > 0.5, "phi {phi}");
    }
}

#[test]
fn density_moments_match_planar_diagrams() {
    for phi in [0.5, 1.0, GOLDEN, 2.0] {
        let spec = blockaded(phi);
        let d = blockaded_density(phi, &Grid::Chebyshev(16)).unwrap();
        for n in 2..=6 {
            let quad = moment_integral(&d, n as f64).unwrap();
            let diag = normalized_moment(&spec, n).unwrap();
            assert!((quad / diag - 1.0).abs() < 1e-5, "phi {phi}, n {n}: {quad} vs {diag}");
        }
    }
}

/// `S_1 = ln(phi + 2) - (phi + 1)/(phi + 2) ln((phi + 1)/phi)` at infinite
/// temperature.
#[test]
fn infinite_temperature_closed_form() {
    for phi in [0.5, 1.0, GOLDEN, 2.5] {
        let direct = (phi + 2.0).ln() - (phi + 1.0) / (phi + 2.0) * ((phi + 1.0) / phi).ln();
        let general = inf_temp_entropy(&blockaded(phi), 1.0).unwrap();
        assert!((general - direct).abs() < 1e-12);
        assert!((blockaded_inf_temp_entropy(phi, 1.0).unwrap() - direct).abs() < 1e-12);
        for n in [2.0, 3.5] {
            let a = inf_temp_entropy(&blockaded(phi), n).unwrap();
            assert!((a - blockaded_inf_temp_entropy(phi, n).unwrap()).abs() < 1e-12);
        }
    }
    assert!((blockaded_inf_temp_entropy(GOLDEN, 1.0).unwrap() - 0.937_722_633_5).abs() < 1e-9);
}

#[test]
fn large_index_limit() {
    let limit = page_asymptote(&blockaded(GOLDEN)).unwrap();
    assert!((limit - 1.284_713_65).abs() < 1e-7);
    assert!((raw_edge_asymptote(GOLDEN) - 2.089_433).abs() < 1e-6);
    let gap100 = (delta_s(GOLDEN, 100.0) - limit).abs();
    let gap400 = (delta_s(GOLDEN, 400.0) - limit).abs();
    assert!(gap400 < gap100 && gap100 < 0.07, "{gap100} {gap400}");
}
