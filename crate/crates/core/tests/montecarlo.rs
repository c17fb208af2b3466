//! Sampled spectra against exact moments and limiting densities.

use entspec::montecarlo::{moment_estimates, spectrum_moments};
use entspec::resolvent::Grid;
use entspec::{
    asymptotic_spec, blockaded_chain_space, blockaded_density, empirical_cdf_distance, finite_moment_exact,
    moment_estimate, sample_spectrum, self_averaging_scan, ConstraintSpec, EmpiricalSpectrum, ModelKind,
    SampleConfig, GOLDEN,
};

/// Two-sample Kolmogorov distance over the pooled values of both spectra.
fn two_sample_distance(a: &EmpiricalSpectrum, b: &EmpiricalSpectrum) -> f64 {
    a.eps_values.iter().chain(&b.eps_values).map(|&x| (a.cdf_at(x) - b.cdf_at(x)).abs()).fold(0.0, f64::max)
}

/// The `2 L` site chain cut in half has its sectors interleaved in bit order;
/// the block model groups them. Both give the same spectral law.
#[test]
fn concrete_chain_matches_block_model() {
    let space = blockaded_chain_space(12).unwrap();
    let concrete = sample_spectrum(&SampleConfig::finite(space.clone(), 7, 20)).unwrap();
    let block = sample_spectrum(&SampleConfig::block_model(&space, 8, 20).unwrap()).unwrap();
    assert_eq!(concrete.dim, block.dim);
    let dist = two_sample_distance(&concrete, &block);
    assert!(dist < 0.02, "distance {dist}");
}

#[test]
fn six_site_second_moment_within_four_stderr() {
    let space = blockaded_chain_space(6).unwrap();
    let exact = finite_moment_exact(&space.dims, &space.dims_prime, &space.allowed, space.n_ref, 2).unwrap() / 8.0;
    let (mean, stderr) = moment_estimate(&SampleConfig::finite(space, 1, 10_000), 2).unwrap();
    let stderr = stderr.unwrap();
    assert!((mean - exact).abs() < 4.0 * stderr, "{mean} +- {stderr} vs {exact}");
}

/// Square complex Wishart: `E Tr rho = N` and `E Tr rho^3 = 5 N + 1/N`.
#[test]
fn unconstrained_moments() {
    let n = 60;
    let est = moment_estimates(&SampleConfig::new(ConstraintSpec::unconstrained(), n, 3, 400), 3).unwrap();
    let first = est[0];
    assert!((first.mean - 1.0).abs() < 4.0 * first.stderr.unwrap());
    let third = est[2];
    let exact = 5.0 + 1.0 / (n * n) as f64;
    assert!((third.mean - exact).abs() < 4.0 * third.stderr.unwrap(), "{} vs {exact}", third.mean);
}

#[test]
fn golden_spectrum_follows_closed_form_density() {
    let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
    let emp = sample_spectrum(&SampleConfig::new(spec, 300, 5, 4)).unwrap();
    let d = blockaded_density(GOLDEN, &Grid::Chebyshev(200)).unwrap();
    assert!(empirical_cdf_distance(&emp, &d) < 0.02);
    assert_eq!(emp.zero_fraction, 0.0);
}

/// Rows of sector 1 only reach column sector 0, so `D_1 - D'_0` rows are
/// structurally dependent: `(200 - 100) / 300` at `phi = 1/2`.
#[test]
fn gapped_phase_zero_fraction_is_structural() {
    let spec = asymptotic_spec(ModelKind::Blockaded { phi: 0.5 }).unwrap();
    let emp = sample_spectrum(&SampleConfig::new(spec, 200, 2, 3)).unwrap();
    assert_eq!(emp.zero_fraction, 1.0 / 3.0);
    let d = blockaded_density(0.5, &Grid::Chebyshev(200)).unwrap();
    assert!(empirical_cdf_distance(&emp, &d) < 0.03);
}

#[test]
fn spectra_do_not_depend_on_thread_count() {
    let spec = asymptotic_spec(ModelKind::Blockaded { phi: 2.0 }).unwrap();
    let cfg = SampleConfig::new(spec, 40, 11, 6);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sample_spectrum(&cfg).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.eps_values, b.eps_values);
    assert_eq!(spectrum_moments(&a, 40, 4), spectrum_moments(&b, 40, 4));
}

#[test]
fn purity_fluctuations_shrink_like_inverse_n() {
    let scan = self_averaging_scan(&ConstraintSpec::unconstrained(), 2, &[16, 32, 64], 300, 9).unwrap();
    let slope = scan.slope.unwrap();
    assert!((slope + 1.0).abs() < 0.25, "slope {slope}");
}
