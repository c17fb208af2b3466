//! Average and infinite-temperature Renyi entropies and Page corrections.
//!
//! All entropies are reported with the extensive `ln N` removed, so every
//! quantity here is `N`-independent and the Page correction is a plain
//! difference.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::resolvent::blockaded::blockaded_edges;
use crate::resolvent::mp::unbalanced_edges;
use crate::resolvent::SpectralDensity;
use crate::space::{scaling_constants, ConstraintSpec};

fn check_index(n: f64) -> Result<()> {
    if n.is_finite() && n >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("Renyi index must be finite and non-negative, got {n}")))
    }
}

fn is_von_neumann(n: f64) -> bool {
    n == 1.0
}

/// `int p(eps) eps^n d eps`, plus the delta mass when `n = 0`.
pub fn moment_integral(density: &SpectralDensity, n: f64) -> Result<f64> {
    if !n.is_finite() {
        return Err(Error::validation(format!("moment order must be finite, got {n}")));
    }
    if n < 0.0 && density.delta_mass_at_zero > 0.0 {
        return Err(Error::Divergence(format!(
            "eps^{n} against a delta mass {} at zero",
            density.delta_mass_at_zero
        )));
    }
    if let Some(exponent) = density.small_eps_exponent() {
        if n + exponent <= -1.0 {
            return Err(Error::Divergence(format!("eps^{n} against p ~ eps^{exponent} near zero")));
        }
    }
    let continuous = if n.fract() == 0.0 && n.abs() < i32::MAX as f64 {
        let k = n as i32;
        density.integrate_continuous(|e| e.powi(k))
    } else {
        density.integrate_continuous(|e| e.powf(n))
    };
    Ok(continuous + if n == 0.0 { density.delta_mass_at_zero } else { 0.0 })
}

/// `int p(eps) eps ln eps d eps`; zero eigenvalues contribute nothing.
pub fn shannon_integral(density: &SpectralDensity) -> f64 {
    density.integrate_continuous(|e| if e > 0.0 { e * e.ln() } else { 0.0 })
}

/// Eigenvalue weights of the infinite-temperature reduced density matrix per
/// unit `N`: every state of sector `l` carries `w_l`, with multiplicity `d_l`.
pub fn inf_temp_weights(spec: &ConstraintSpec) -> Vec<f64> {
    let norm = scaling_constants(spec).norm_per_n;
    (0..spec.n_left())
        .map(|l| {
            (0..spec.n_right()).filter(|&r| spec.allowed(l, r)).map(|r| spec.d_prime()[r]).sum::<f64>() / norm
        })
        .collect()
}

/// `S_n(rho_inf) - ln N`.
pub fn inf_temp_entropy(spec: &ConstraintSpec, n: f64) -> Result<f64> {
    check_index(n)?;
    let w = inf_temp_weights(spec);
    let d = spec.d();
    if is_von_neumann(n) {
        Ok(-w.iter().zip(d).map(|(w, d)| d * w * w.ln()).sum::<f64>())
    } else {
        let trace: f64 = w.iter().zip(d).map(|(w, d)| d * w.powf(n)).sum();
        Ok(trace.ln() / (1.0 - n))
    }
}

/// Closed forms of `S_n(rho_inf) - ln N` for the blockaded chain.
pub fn blockaded_inf_temp_entropy(phi: f64, n: f64) -> Result<f64> {
    check_index(n)?;
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::validation(format!("phi must be positive and finite, got {phi}")));
    }
    if is_von_neumann(n) {
        Ok((phi + 2.0).ln() - (phi + 1.0) / (phi + 2.0) * ((phi + 1.0) / phi).ln())
    } else {
        let inner = (phi * (phi + 1.0).powf(n) + phi.powf(n)) / (phi * phi + 2.0 * phi).powf(n);
        Ok(-inner.ln() / (n - 1.0))
    }
}

fn check_model(spec: &ConstraintSpec, density: &SpectralDensity) -> Result<()> {
    if density.model.constraint_matrix() != spec.constraint_matrix()
        || density.model.d() != spec.d()
        || density.model.d_prime() != spec.d_prime()
    {
        return Err(Error::validation(format!(
            "density was built for {} but entropy requested for {}",
            density.model.name(),
            spec.name()
        )));
    }
    Ok(())
}

/// `S_n(rho) - ln N` averaged over random states, from the density.
pub fn avg_entropy(spec: &ConstraintSpec, density: &SpectralDensity, n: f64) -> Result<f64> {
    check_index(n)?;
    check_model(spec, density)?;
    let ln_sum_d = scaling_constants(spec).sum_d.ln();
    if is_von_neumann(n) {
        Ok(ln_sum_d - shannon_integral(density))
    } else {
        Ok(ln_sum_d + moment_integral(density, n)?.ln() / (1.0 - n))
    }
}

/// Page correction `Delta S_n = S_n(rho_inf) - mean S_n(rho)`.
pub fn page_correction(spec: &ConstraintSpec, density: &SpectralDensity, n: f64) -> Result<f64> {
    Ok(inf_temp_entropy(spec, n)? - avg_entropy(spec, density, n)?)
}

/// Largest normalized eigenvalue `eps_max` for models with a closed-form
/// support.
fn eps_max(spec: &ConstraintSpec) -> Result<f64> {
    let s = scaling_constants(spec).eps_scale;
    if let Some(phi) = spec.as_blockaded() {
        return Ok(blockaded_edges(phi).1 * s);
    }
    if let Some(partners) = spec.diagonal_partners() {
        let top = partners
            .iter()
            .enumerate()
            .map(|(l, &r)| unbalanced_edges(spec.d()[l], spec.d_prime()[r]).1)
            .fold(0.0, f64::max);
        return Ok(top * s);
    }
    Err(Error::validation(format!("no closed-form spectral edge for {}", spec.name())))
}

/// `lim_{n -> inf} Delta S_n = ln eps_max - ln(sum_l d_l * max_l w_l)`.
///
/// Both entropies are dominated by their largest eigenvalue at large `n`.
/// Unconstrained this is `ln 4`.
pub fn page_asymptote(spec: &ConstraintSpec) -> Result<f64> {
    let w_max = inf_temp_weights(spec).into_iter().fold(0.0, f64::max);
    let sum_d = scaling_constants(spec).sum_d;
    Ok(eps_max(spec)?.ln() - (sum_d * w_max).ln())
}

/// `ln z_+ - ln((phi + 1)^2 / (phi^2 + 2 phi))`: the large-`n` expression
/// evaluated with the raw edge `z_+` in place of `eps_max`. It exceeds
/// [`page_asymptote`] by `-ln eps_scale` and is kept for comparison.
pub fn raw_edge_asymptote(phi: f64) -> f64 {
    blockaded_edges(phi).1.ln() - ((phi + 1.0).powi(2) / (phi * phi + 2.0 * phi)).ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub spec: ConstraintSpec,
    pub n_values: Vec<f64>,
    pub mu_n: Vec<f64>,
    #[serde(rename = "S_avg_minus_lnN")]
    pub s_avg_minus_ln_n: Vec<f64>,
    #[serde(rename = "S_inf_minus_lnN")]
    pub s_inf_minus_ln_n: Vec<f64>,
    #[serde(rename = "delta_S")]
    pub delta_s: Vec<f64>,
    /// `None` when the model has no closed-form spectral edge.
    pub asymptote: Option<f64>,
}

/// Entropies for every requested index, evaluated in parallel.
pub fn entropy_report(spec: &ConstraintSpec, density: &SpectralDensity, n_values: &[f64]) -> Result<EntropyReport> {
    check_model(spec, density)?;
    let rows: Vec<(f64, f64, f64)> = n_values
        .par_iter()
        .map(|&n| {
            let mu = moment_integral(density, n)?;
            let s_avg = avg_entropy(spec, density, n)?;
            let s_inf = inf_temp_entropy(spec, n)?;
            Ok((mu, s_avg, s_inf))
        })
        .collect::<Result<_>>()?;
    Ok(EntropyReport {
        spec: spec.clone(),
        n_values: n_values.to_vec(),
        mu_n: rows.iter().map(|r| r.0).collect(),
        s_avg_minus_ln_n: rows.iter().map(|r| r.1).collect(),
        s_inf_minus_ln_n: rows.iter().map(|r| r.2).collect(),
        delta_s: rows.iter().map(|r| r.2 - r.1).collect(),
        asymptote: page_asymptote(spec).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvent::{blockaded_density, diagonal_density, Grid};
    use crate::space::{asymptotic_spec, ModelKind, GOLDEN};

    fn golden() -> (ConstraintSpec, SpectralDensity) {
        let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
        let density = blockaded_density(GOLDEN, &Grid::Chebyshev(64)).unwrap();
        (spec, density)
    }

    fn mp() -> (ConstraintSpec, SpectralDensity) {
        let spec = ConstraintSpec::unconstrained();
        let density = diagonal_density(&spec, &Grid::Chebyshev(64)).unwrap();
        (spec, density)
    }

    #[test]
    fn mp_moments_and_shannon() {
        let (_, d) = mp();
        assert!((moment_integral(&d, 2.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((moment_integral(&d, 1.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((shannon_integral(&d) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn golden_second_moment() {
        let (_, d) = golden();
        let symbolic = (12.0 * GOLDEN + 8.0) / (5.0 * (GOLDEN + 1.0));
        assert!((moment_integral(&d, 2.0).unwrap() - symbolic).abs() < 1e-8);
    }

    #[test]
    fn divergent_moments() {
        let (_, d) = mp();
        assert!(matches!(moment_integral(&d, -0.5), Err(Error::Divergence(_))));
        assert!(moment_integral(&d, -0.4).is_ok());
        let gapped = blockaded_density(0.5, &Grid::Chebyshev(16)).unwrap();
        assert!(matches!(moment_integral(&gapped, -0.1), Err(Error::Divergence(_))));
        let zeroth = moment_integral(&gapped, 0.0).unwrap();
        assert!((zeroth - 1.0).abs() < 1e-8);
    }

    #[test]
    fn point_mass_shannon() {
        let d = SpectralDensity::point_mass(1.0).unwrap();
        assert_eq!(shannon_integral(&d), 0.0);
    }

    #[test]
    fn inf_temp_values() {
        let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
        assert!((inf_temp_entropy(&spec, 1.0).unwrap() - 0.937_722_633_5).abs() < 1e-9);
        assert!((inf_temp_entropy(&spec, 2.0).unwrap() + (0.4f64).ln()).abs() < 1e-12);
        for n in [0.5, 1.0, 2.0, 7.0] {
            assert!(inf_temp_entropy(&ConstraintSpec::unconstrained(), n).unwrap().abs() < 1e-15);
        }
        assert!(inf_temp_entropy(&spec, -1.0).is_err());
    }

    #[test]
    fn closed_inf_temp_forms_agree() {
        for phi in [0.5, 1.0, GOLDEN, 3.0] {
            let spec = asymptotic_spec(ModelKind::Blockaded { phi }).unwrap();
            for n in [1.0, 2.0, 3.5, 6.0] {
                let general = inf_temp_entropy(&spec, n).unwrap();
                let closed = blockaded_inf_temp_entropy(phi, n).unwrap();
                assert!((general - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn average_entropies() {
        let (spec, d) = mp();
        assert!((avg_entropy(&spec, &d, 1.0).unwrap() + 0.5).abs() < 1e-9);
        assert!((avg_entropy(&spec, &d, 2.0).unwrap() + 2f64.ln()).abs() < 1e-9);
        let (spec, d) = golden();
        assert!((avg_entropy(&spec, &d, 2.0).unwrap() - 1.25f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn page_corrections() {
        let (spec, d) = golden();
        assert!((page_correction(&spec, &d, 1.0).unwrap() - 0.513_595).abs() < 2e-4);
        assert!((page_correction(&spec, &d, 2.0).unwrap() - 2f64.ln()).abs() < 1e-6);
        let (spec, d) = mp();
        assert!((page_correction(&spec, &d, 3.0).unwrap() - 0.5 * 5f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn mismatched_density_is_rejected() {
        let (spec, _) = golden();
        let (_, d) = mp();
        assert!(matches!(avg_entropy(&spec, &d, 2.0), Err(Error::Validation(_))));
    }

    #[test]
    fn asymptotes() {
        assert!((page_asymptote(&ConstraintSpec::unconstrained()).unwrap() - 4f64.ln()).abs() < 1e-14);
        let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
        let s = scaling_constants(&spec).eps_scale;
        let a = page_asymptote(&spec).unwrap();
        assert!((raw_edge_asymptote(GOLDEN) - 2.089_433).abs() < 1e-6);
        assert!((raw_edge_asymptote(GOLDEN) - a + s.ln()).abs() < 1e-12);
    }

    #[test]
    fn report_columns() {
        let (spec, d) = golden();
        let r = entropy_report(&spec, &d, &[1.0, 2.0]).unwrap();
        assert_eq!(r.delta_s.len(), 2);
        assert!((r.delta_s[1] - (r.s_inf_minus_ln_n[1] - r.s_avg_minus_ln_n[1])).abs() < 1e-15);
        assert!((r.mu_n[0] - 1.0).abs() < 1e-8);
    }
}
