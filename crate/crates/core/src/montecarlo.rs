//! Gaussian random pure states in block-structured constrained spaces.
//!
//! The amplitude matrix `psi` has block `(l, r)` of size `D_l x D'_r` filled
//! with iid complex Gaussians of variance `1/N` (split evenly between real and
//! imaginary parts) where `C_lr = 1`, and exact zeros elsewhere. Eigenvalues of
//! the reduced density matrix `psi psi^dagger` are the squared singular values
//! of `psi`.
//!
//! Sample `k` draws from a ChaCha8 stream selected by `k` under the master
//! seed, so spectra do not depend on the thread count.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::linalg::matmul::triangular::{matmul, BlockStructure};
use faer::{Accum, Mat, Par};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::resolvent::loglog_slope;
use crate::resolvent::SpectralDensity;
use crate::space::{ConstraintSpec, FiniteConstrainedSpace};

pub const DEFAULT_DIM_CAP: usize = 4096;
pub const MAX_MOMENT_ORDER: usize = 6;
/// Eigenvalues with `eps < ZERO_THRESHOLD` are structural zeros. The
/// rounding floor of the Gram eigensolver is near `4 eps_max dim` machine
/// epsilons (below `4e-12` within the cap), while the smallest genuine
/// eigenvalue of a square block is of order `1 / dim^2` (above `5e-8`).
pub const ZERO_THRESHOLD: f64 = 1e-10;
/// Order statistics of the pooled data at which CDFs are compared.
const CDF_PROBES: usize = 4000;

/// Where the sector structure of `psi` comes from.
#[derive(Clone, Debug)]
pub enum SampleSource {
    /// Abstract block model with `D_l = round(N d_l)`, rows grouped by sector.
    Spec(ConstraintSpec),
    /// Rows and columns are the enumerated chain configurations in
    /// increasing bit order; sectors interleave.
    Finite(FiniteConstrainedSpace),
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub source: SampleSource,
    /// Reference scale `N`.
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    /// Upper bound on the total left and right dimensions.
    pub cap: usize,
}

impl SampleConfig {
    pub fn new(spec: ConstraintSpec, n: usize, seed: u64, samples: usize) -> Self {
        SampleConfig { source: SampleSource::Spec(spec), n, seed, samples, cap: DEFAULT_DIM_CAP }
    }

    /// Samples on the configurations of a finite chain, with `N = n_ref`.
    pub fn finite(space: FiniteConstrainedSpace, seed: u64, samples: usize) -> Self {
        let n = space.n_ref;
        SampleConfig { source: SampleSource::Finite(space), n, seed, samples, cap: DEFAULT_DIM_CAP }
    }

    /// The abstract block model with the same `(D, D', C)` as `space`.
    pub fn block_model(space: &FiniteConstrainedSpace, seed: u64, samples: usize) -> Result<Self> {
        Ok(SampleConfig::new(space.relative_spec()?, space.n_ref, seed, samples))
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Sector dimensions `(D, D')` after rounding.
    pub fn dims(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let layout = self.layout()?;
        Ok((layout.dims, layout.dims_prime))
    }

    fn layout(&self) -> Result<Layout> {
        if self.n == 0 {
            return Err(Error::validation("reference scale N must be positive"));
        }
        if self.samples == 0 {
            return Err(Error::validation("sample count must be positive"));
        }
        let layout = match &self.source {
            SampleSource::Spec(spec) => {
                let round = |x: &[f64]| -> Vec<usize> { x.iter().map(|v| (v * self.n as f64).round() as usize).collect() };
                let dims = round(spec.d());
                let dims_prime = round(spec.d_prime());
                if dims.iter().chain(&dims_prime).any(|&x| x == 0) {
                    return Err(Error::validation(format!(
                        "N = {} rounds a sector of {} to zero states",
                        self.n,
                        spec.name()
                    )));
                }
                let expand = |dims: &[usize]| -> Vec<usize> {
                    dims.iter().enumerate().flat_map(|(s, &k)| std::iter::repeat_n(s, k)).collect()
                };
                Layout {
                    row_sector: expand(&dims),
                    col_sector: expand(&dims_prime),
                    dims,
                    dims_prime,
                    c: spec.constraint_matrix().to_vec(),
                }
            }
            SampleSource::Finite(space) => Layout {
                row_sector: space.left_configs().into_iter().map(|(_, s)| s).collect(),
                col_sector: space.right_configs().into_iter().map(|(_, s)| s).collect(),
                dims: space.dims.clone(),
                dims_prime: space.dims_prime.clone(),
                c: space.allowed.clone(),
            },
        };
        let (rows, cols) = (layout.row_sector.len(), layout.col_sector.len());
        if rows > self.cap || cols > self.cap {
            return Err(Error::size(format!(
                "dimensions {rows} x {cols} exceed the cap of {}",
                self.cap
            )));
        }
        Ok(layout)
    }
}

struct Layout {
    dims: Vec<usize>,
    dims_prime: Vec<usize>,
    c: Vec<Vec<u8>>,
    row_sector: Vec<usize>,
    col_sector: Vec<usize>,
}

/// Pooled normalized eigenvalues `eps_i = dim * x_i / sum_j x_j`.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalSpectrum {
    /// All samples pooled, ascending. Structural zeros are stored as `0.0`.
    pub eps_values: Vec<f64>,
    pub zero_fraction: f64,
    /// `sum_i x_i` of each sample.
    pub traces: Vec<f64>,
    /// Eigenvalues per sample, `sum_l D_l`.
    pub dim: usize,
    #[serde(skip)]
    per_sample: Vec<Vec<f64>>,
}

impl EmpiricalSpectrum {
    /// Wraps already normalized values as a single sample of unit trace.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::validation("spectrum needs finite non-negative values"));
        }
        values.sort_by(f64::total_cmp);
        let dim = values.len();
        let zeros = values.iter().filter(|&&v| v == 0.0).count();
        Ok(EmpiricalSpectrum {
            eps_values: values.clone(),
            zero_fraction: zeros as f64 / dim as f64,
            traces: vec![1.0],
            dim,
            per_sample: vec![values],
        })
    }

    pub fn samples(&self) -> usize {
        self.per_sample.len()
    }

    /// Normalized eigenvalues of sample `k`, ascending.
    pub fn sample(&self, k: usize) -> &[f64] {
        &self.per_sample[k]
    }

    /// `Tr rho^n = sum_i x_i^n` of sample `k` in the raw convention.
    pub fn raw_trace_power(&self, k: usize, n: usize) -> f64 {
        let unit = self.traces[k] / self.dim as f64;
        unit.powi(n as i32) * self.per_sample[k].iter().map(|e| e.powi(n as i32)).sum::<f64>()
    }

    /// Empirical integrated density `#{eps_i <= eps} / count`.
    pub fn cdf_at(&self, eps: f64) -> f64 {
        self.eps_values.partition_point(|&v| v <= eps) as f64 / self.eps_values.len() as f64
    }

    fn cdf_below(&self, eps: f64) -> f64 {
        self.eps_values.partition_point(|&v| v < eps) as f64 / self.eps_values.len() as f64
    }
}

fn sample_psi(layout: &Layout, n: usize, seed: u64, index: u64) -> Mat<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let sigma = (0.5 / n as f64).sqrt();
    let (rows, cols) = (layout.row_sector.len(), layout.col_sector.len());
    let mut psi = Mat::<Complex64>::zeros(rows, cols);
    for j in 0..cols {
        let r = layout.col_sector[j];
        for i in 0..rows {
            if layout.c[layout.row_sector[i]][r] == 1 {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                psi[(i, j)] = Complex64::new(sigma * re, sigma * im);
            }
        }
    }
    psi
}

/// Squared singular values of `psi`, one per row, ascending.
fn squared_singular_values(psi: &Mat<Complex64>) -> Vec<f64> {
    let (rows, cols) = (psi.nrows(), psi.ncols());
    let k = rows.min(cols);
    let mut gram = Mat::<Complex64>::zeros(k, k);
    let one = Complex64::new(1.0, 0.0);
    if rows <= cols {
        matmul(
            gram.as_mut(),
            BlockStructure::TriangularLower,
            Accum::Replace,
            psi.as_ref(),
            BlockStructure::Rectangular,
            psi.adjoint(),
            BlockStructure::Rectangular,
            one,
            Par::Seq,
        );
    } else {
        matmul(
            gram.as_mut(),
            BlockStructure::TriangularLower,
            Accum::Replace,
            psi.adjoint(),
            BlockStructure::Rectangular,
            psi.as_ref(),
            BlockStructure::Rectangular,
            one,
            Par::Seq,
        );
    }
    let mut s = Mat::<Complex64>::zeros(k, 1);
    if k > 0 {
        let params = Default::default();
        let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<Complex64>(k, ComputeEigenvectors::No, Par::Seq, params));
        self_adjoint_evd(
            gram.as_ref(),
            s.as_mut().col_mut(0).as_diagonal_mut(),
            None,
            Par::Seq,
            MemStack::new(&mut buf),
            params,
        )
        .expect("Hermitian eigensolver failed on a finite matrix");
    }
    let mut x: Vec<f64> = vec![0.0; rows - k];
    x.extend((0..k).map(|i| s[(i, 0)].re.max(0.0)));
    x.sort_by(f64::total_cmp);
    x
}

/// Normalizes one sample's raw eigenvalues, zeroing structural zeros.
/// Returns `(eps, trace)` with `sum eps = dim` to rounding.
fn normalize(mut x: Vec<f64>) -> (Vec<f64>, f64) {
    let dim = x.len() as f64;
    let raw_trace: f64 = x.iter().sum();
    for v in &mut x {
        if dim * *v / raw_trace < ZERO_THRESHOLD {
            *v = 0.0;
        }
    }
    let trace: f64 = x.iter().sum();
    (x.into_iter().map(|v| dim * v / trace).collect(), trace)
}

/// Samples `cfg.samples` states and returns their pooled spectrum.
pub fn sample_spectrum(cfg: &SampleConfig) -> Result<EmpiricalSpectrum> {
    let layout = cfg.layout()?;
    let dim = layout.row_sector.len();
    let results: Vec<(Vec<f64>, f64)> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| normalize(squared_singular_values(&sample_psi(&layout, cfg.n, cfg.seed, k))))
        .collect();
    let (per_sample, traces): (Vec<Vec<f64>>, Vec<f64>) = results.into_iter().unzip();
    let mut eps_values: Vec<f64> = per_sample.iter().flatten().copied().collect();
    eps_values.sort_by(f64::total_cmp);
    let zeros = eps_values.iter().filter(|&&v| v == 0.0).count();
    Ok(EmpiricalSpectrum {
        zero_fraction: zeros as f64 / eps_values.len() as f64,
        eps_values,
        traces,
        dim,
        per_sample,
    })
}

/// Sup of `|F_emp - F|` over pooled order statistics, comparing both
/// one-sided limits. `F` includes the delta mass at zero.
pub fn empirical_cdf_distance(emp: &EmpiricalSpectrum, density: &SpectralDensity) -> f64 {
    let values = &emp.eps_values;
    let stride = (values.len() / CDF_PROBES).max(1);
    let mut probes: Vec<f64> = values.iter().step_by(stride).copied().collect();
    probes.push(values[values.len() - 1]);
    probes.extend([0.0, density.support.0, density.support.1]);
    probes.sort_by(f64::total_cmp);
    probes.dedup();
    probes
        .par_iter()
        .map(|&x| {
            let below = x - 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
            let right = (emp.cdf_at(x) - density.cdf_at(x)).abs();
            let left = (emp.cdf_below(x) - density.cdf_at(below)).abs();
            right.max(left)
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub n: usize,
    /// Sample mean of `Tr rho^n / N`.
    pub mean: f64,
    /// Standard error of the mean; `None` for a single sample.
    pub stderr: Option<f64>,
}

/// Mean and standard deviation with the `k - 1` normalization.
fn mean_std(values: &[f64]) -> (f64, Option<f64>) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, Some(var.sqrt()))
}

fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_MOMENT_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::size(format!("moment order must be in 1..={MAX_MOMENT_ORDER}, got {n}")))
    }
}

/// Estimates `E[Tr rho^n] / N` for every `n` in `1..=n_max` from one set of
/// samples.
pub fn moment_estimates(cfg: &SampleConfig, n_max: usize) -> Result<Vec<MomentEstimate>> {
    check_order(n_max)?;
    let spectrum = sample_spectrum(cfg)?;
    Ok(spectrum_moments(&spectrum, cfg.n, n_max))
}

/// Moment estimates of `Tr rho^n / N` from an already sampled spectrum.
pub fn spectrum_moments(spectrum: &EmpiricalSpectrum, n_ref: usize, n_max: usize) -> Vec<MomentEstimate> {
    (1..=n_max)
        .map(|n| {
            let values: Vec<f64> =
                (0..spectrum.samples()).map(|k| spectrum.raw_trace_power(k, n) / n_ref as f64).collect();
            let (mean, std) = mean_std(&values);
            MomentEstimate { n, mean, stderr: std.map(|s| s / (values.len() as f64).sqrt()) }
        })
        .collect()
}

/// `(mean, stderr)` of `Tr rho^n / N`.
pub fn moment_estimate(cfg: &SampleConfig, n: usize) -> Result<(f64, Option<f64>)> {
    check_order(n)?;
    let est = moment_estimates(cfg, n)?[n - 1];
    Ok((est.mean, est.stderr))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfAveragingRow {
    #[serde(rename = "N")]
    pub n_scale: usize,
    pub mean: f64,
    /// Relative standard deviation of `Tr rho^n` across samples.
    pub rel_std: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfAveragingScan {
    pub order: usize,
    pub rows: Vec<SelfAveragingRow>,
    /// Log-log slope of `rel_std` against `N`; missing with fewer than two
    /// defined rows.
    pub slope: Option<f64>,
}

/// Relative fluctuations of `Tr rho^n` against `N`.
pub fn self_averaging_scan(
    spec: &ConstraintSpec,
    n: usize,
    n_list: &[usize],
    samples: usize,
    seed: u64,
) -> Result<SelfAveragingScan> {
    check_order(n)?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("N list must be non-empty and strictly ascending"));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &big_n in n_list {
        let cfg = SampleConfig::new(spec.clone(), big_n, seed, samples);
        let spectrum = sample_spectrum(&cfg)?;
        let values: Vec<f64> = (0..spectrum.samples()).map(|k| spectrum.raw_trace_power(k, n)).collect();
        let (mean, std) = mean_std(&values);
        rows.push(SelfAveragingRow { n_scale: big_n, mean: mean / big_n as f64, rel_std: std.map(|s| s / mean) });
    }
    let defined: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.rel_std.filter(|s| *s > 0.0).map(|s| (r.n_scale as f64, s))).collect();
    let slope = (defined.len() >= 2).then(|| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = defined.into_iter().unzip();
        loglog_slope(&xs, &ys)
    });
    Ok(SelfAveragingScan { order: n, rows, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvent::{diagonal_density, Grid};
    use crate::space::{asymptotic_spec, blockaded_chain_space, ModelKind};

    fn blockaded(phi: f64) -> ConstraintSpec {
        asymptotic_spec(ModelKind::Blockaded { phi }).unwrap()
    }

    #[test]
    fn normalization_and_count() {
        let cfg = SampleConfig::new(blockaded(1.5), 20, 7, 3);
        let s = sample_spectrum(&cfg).unwrap();
        assert_eq!(s.dim, 50);
        assert_eq!(s.eps_values.len(), 150);
        for k in 0..3 {
            let mean = s.sample(k).iter().sum::<f64>() / s.dim as f64;
            assert!((mean - 1.0).abs() < 1e-12);
            assert!(s.sample(k).iter().all(|&e| e >= 0.0));
        }
    }

    #[test]
    fn deterministic_under_any_pool() {
        let cfg = SampleConfig::new(blockaded(0.7), 15, 42, 4);
        let a = sample_spectrum(&cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sample_spectrum(&cfg).unwrap());
        assert_eq!(a.eps_values, b.eps_values);
        assert_eq!(a.traces, b.traces);
        let c = sample_spectrum(&SampleConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.eps_values, c.eps_values);
    }

    #[test]
    fn disallowed_block_is_zero() {
        let cfg = SampleConfig::new(blockaded(1.0), 4, 1, 1);
        let layout = cfg.layout().unwrap();
        let psi = sample_psi(&layout, 4, 1, 0);
        for i in 4..8 {
            for j in 4..8 {
                assert_eq!(psi[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
        assert_ne!(psi[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn structural_zero_count() {
        // phi = 0.5: D = (5, 10), D' = (5, 10); rank <= 5 + 5 = 10 of 15 rows.
        let cfg = SampleConfig::new(blockaded(0.5), 10, 3, 2);
        let s = sample_spectrum(&cfg).unwrap();
        assert_eq!(cfg.dims().unwrap(), (vec![5, 10], vec![5, 10]));
        assert!((s.zero_fraction - 5.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn cap_and_zero_sector() {
        let big = SampleConfig::new(ConstraintSpec::unconstrained(), 5000, 0, 1);
        assert!(matches!(sample_spectrum(&big), Err(Error::Size(_))));
        let tiny = SampleConfig::new(blockaded(0.1), 2, 0, 1);
        assert!(matches!(sample_spectrum(&tiny), Err(Error::Validation(_))));
    }

    #[test]
    fn tall_matrix_pads_zeros() {
        let spec = asymptotic_spec(ModelKind::Unbalanced { lambda: 2.0 }).unwrap();
        let s = sample_spectrum(&SampleConfig::new(spec, 10, 5, 1)).unwrap();
        assert_eq!(s.dim, 20);
        assert!((s.zero_fraction - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_sample_has_no_stderr() {
        let cfg = SampleConfig::new(ConstraintSpec::unconstrained(), 10, 0, 1);
        let (mean, stderr) = moment_estimate(&cfg, 2).unwrap();
        assert!(mean > 0.0);
        assert_eq!(stderr, None);
        assert!(matches!(moment_estimate(&cfg, 7), Err(Error::Size(_))));
    }

    #[test]
    fn first_moment_is_mean_trace() {
        let cfg = SampleConfig::new(ConstraintSpec::unconstrained(), 30, 9, 200);
        let est = moment_estimates(&cfg, 2).unwrap();
        // E[Tr rho] / N = 1, E[Tr rho^2] / N = 2 + 0 / N^2 exactly.
        assert!((est[0].mean - 1.0).abs() < 4.0 * est[0].stderr.unwrap());
        assert!((est[1].mean - 2.0).abs() < 4.0 * est[1].stderr.unwrap());
    }

    #[test]
    fn finite_chain_matches_block_dims() {
        let space = blockaded_chain_space(4).unwrap();
        let a = SampleConfig::finite(space.clone(), 0, 1);
        let b = SampleConfig::block_model(&space, 0, 1).unwrap();
        assert_eq!(a.dims().unwrap(), b.dims().unwrap());
        assert_eq!(sample_spectrum(&a).unwrap().dim, 8);
    }

    #[test]
    fn self_comparison_is_zero() {
        let d = SpectralDensity::point_mass(1.0).unwrap();
        let emp = EmpiricalSpectrum::from_values(vec![1.0; 10]).unwrap();
        assert_eq!(empirical_cdf_distance(&emp, &d), 0.0);
    }

    #[test]
    fn mp_cdf_distance_small() {
        let spec = ConstraintSpec::unconstrained();
        let emp = sample_spectrum(&SampleConfig::new(spec.clone(), 200, 11, 4)).unwrap();
        let d = diagonal_density(&spec, &Grid::Chebyshev(64)).unwrap();
        assert!(empirical_cdf_distance(&emp, &d) < 0.03);
    }

    #[test]
    fn scan_validation_and_missing_stderr() {
        let spec = ConstraintSpec::unconstrained();
        assert!(self_averaging_scan(&spec, 2, &[20, 10], 2, 0).is_err());
        let scan = self_averaging_scan(&spec, 2, &[10, 20], 1, 0).unwrap();
        assert!(scan.rows.iter().all(|r| r.rel_std.is_none()));
        assert_eq!(scan.slope, None);
    }
}
