//! Entanglement phases of the blockaded family and power-law fits.

use serde::Serialize;

use super::blockaded::{blockaded_delta_mass, blockaded_edges};
use super::density::{blockaded_density, Grid, SpectralDensity};
use super::mp::unbalanced_edges;
use crate::error::{Error, Result};
use crate::space::{asymptotic_spec, scaling_constants, ModelKind};

pub const DEFAULT_FIT_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const FIT_POINTS: usize = 50;
/// `|phi - 1|` below which the multicritical point is reported.
pub const MULTICRITICAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// `p ~ eps^{-1/2}`, `z_- < 0`.
    Mp,
    /// `p ~ eps^{-2/3}`, `z_- = 0`.
    Multicritical,
    /// Delta function at zero plus a gapped continuum, `z_- > 0`.
    Gapped,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Mp => "MP",
            Phase::Multicritical => "multicritical",
            Phase::Gapped => "gapped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseReport {
    pub phi: f64,
    pub phase: Phase,
    pub z_minus: f64,
    pub z_plus: f64,
    /// Continuous support in `epsilon`.
    pub support: (f64, f64),
    pub delta_mass: f64,
    /// Small-`epsilon` exponent for the MP and multicritical phases; the
    /// lower-edge onset exponent in the gapped phase.
    pub fitted_exponent: f64,
}

pub fn classify_phase(phi: f64) -> Result<PhaseReport> {
    let density = blockaded_density(phi, &Grid::Chebyshev(16))?;
    let (z_minus, z_plus) = blockaded_edges(phi);
    let phase = if (phi - 1.0).abs() <= MULTICRITICAL_TOL {
        Phase::Multicritical
    } else if phi > 1.0 {
        Phase::Mp
    } else {
        Phase::Gapped
    };
    let fitted_exponent = match phase {
        Phase::Gapped => fit_edge_exponent(&density)?,
        _ => fit_small_eps_exponent(&density, DEFAULT_FIT_WINDOW)?,
    };
    Ok(PhaseReport {
        phi,
        phase,
        z_minus,
        z_plus,
        support: density.support,
        delta_mass: blockaded_delta_mass(phi),
        fitted_exponent,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Slope of `ln p` against `ln eps` over `FIT_POINTS` log-spaced points of
/// `window`.
pub fn fit_small_eps_exponent(density: &SpectralDensity, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::validation(format!("fit window must satisfy 0 < lo < hi, got {window:?}")));
    }
    let (s_lo, s_hi) = density.support;
    if lo < s_lo || hi > s_hi {
        return Err(Error::validation(format!(
            "fit window {window:?} lies outside the continuous support ({s_lo}, {s_hi})"
        )));
    }
    let xs = log_spaced(lo, hi, FIT_POINTS);
    let ys: Vec<f64> = xs.iter().map(|&e| density.pdf(e)).collect();
    if ys.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::validation("density must be strictly positive on the fit window"));
    }
    Ok(loglog_slope(&xs, &ys))
}

/// Onset exponent at a gapped lower edge: slope of `ln p` against
/// `ln(eps - eps_min)` for offsets between `1e-7` and `1e-4` of the support
/// width.
pub fn fit_edge_exponent(density: &SpectralDensity) -> Result<f64> {
    let (lo, hi) = density.support;
    if !(lo > 0.0) {
        return Err(Error::validation("edge exponent needs a gapped lower edge"));
    }
    let width = hi - lo;
    let offsets = log_spaced(1e-7 * width, 1e-4 * width, FIT_POINTS);
    let ys: Vec<f64> = offsets.iter().map(|&d| density.pdf(lo + d)).collect();
    if ys.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::validation("density vanishes inside the edge window"));
    }
    Ok(loglog_slope(&offsets, &ys))
}

/// Slope of `ln z_-(phi)` against `ln(1 - phi)` for `phi` log-spaced in
/// `1 - phi` over `[phi_lo, phi_hi]` (both below 1).
pub fn blockaded_gap_slope(phi_lo: f64, phi_hi: f64, points: usize) -> Result<f64> {
    if !(0.0 < phi_lo && phi_lo < phi_hi && phi_hi < 1.0 && points >= 2) {
        return Err(Error::validation("need 0 < phi_lo < phi_hi < 1 and at least two points"));
    }
    let gaps = log_spaced(1.0 - phi_hi, 1.0 - phi_lo, points);
    let edges: Vec<f64> = gaps.iter().map(|g| blockaded_edges(1.0 - g).0).collect();
    Ok(loglog_slope(&gaps, &edges))
}

/// Slope of the unbalanced-MP gap `x_-(lambda)` (in `epsilon`) against
/// `|lambda - 1|`, for `|lambda - 1|` log-spaced over `[lo, hi]` on the given
/// side of 1.
pub fn unbalanced_gap_slope(lo: f64, hi: f64, above: bool, points: usize) -> Result<f64> {
    if !(0.0 < lo && lo < hi && points >= 2 && (above || hi < 1.0)) {
        return Err(Error::validation("need 0 < lo < hi (< 1 below lambda = 1) and at least two points"));
    }
    let offsets = log_spaced(lo, hi, points);
    let mut gaps = Vec::with_capacity(points);
    for &t in &offsets {
        let lambda = if above { 1.0 + t } else { 1.0 - t };
        let spec = asymptotic_spec(ModelKind::Unbalanced { lambda })?;
        let s = scaling_constants(&spec).eps_scale;
        gaps.push(unbalanced_edges(lambda, 1.0).0 * s);
    }
    Ok(loglog_slope(&offsets, &gaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GOLDEN;

    #[test]
    fn phases() {
        assert_eq!(classify_phase(GOLDEN).unwrap().phase, Phase::Mp);
        assert_eq!(classify_phase(1.0).unwrap().phase, Phase::Multicritical);
        let gapped = classify_phase(0.5).unwrap();
        assert_eq!(gapped.phase, Phase::Gapped);
        assert!((gapped.delta_mass - 1.0 / 3.0).abs() < 1e-15);
        assert!((gapped.fitted_exponent - 0.5).abs() < 0.02);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = log_spaced(1.0, 10.0, 5);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.7)).collect();
        assert!((loglog_slope(&xs, &ys) + 0.7).abs() < 1e-12);
    }

    #[test]
    fn window_outside_support() {
        let d = blockaded_density(0.5, &Grid::Chebyshev(16)).unwrap();
        assert!(matches!(fit_small_eps_exponent(&d, DEFAULT_FIT_WINDOW), Err(Error::Validation(_))));
    }

    #[test]
    fn gap_slopes() {
        assert!((blockaded_gap_slope(0.9, 0.99, 20).unwrap() - 3.0).abs() < 0.05);
        for above in [true, false] {
            assert!((unbalanced_gap_slope(1e-3, 1e-2, above, 20).unwrap() - 2.0).abs() < 0.02);
        }
    }
}
