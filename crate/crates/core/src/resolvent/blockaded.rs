//! Closed-form resolvent of the blockaded family `C = [[1,1],[1,0]]`,
//! `d = d' = (phi, 1)`.
//!
//! `G_0` solves the cubic
//! `G^3 - (2/phi) G^2 + (z + phi - 1)/(z phi^2) G - 1/(z phi^2) = 0`
//! and `1/G_1 = 1/G_0 + 1/(1 - phi G_0)`. All quantities here are in the raw
//! eigenvalue variable `x`; multiply by `ScalingConstants::eps_scale` for `epsilon`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;

/// Branch points `z_-, z_+` of the cubic's discriminant.
pub fn blockaded_edges(phi: f64) -> (f64, f64) {
    let base = -phi * phi + 20.0 * phi + 8.0;
    let root = (phi * (phi + 8.0).powi(3)).sqrt();
    ((base - root) / 8.0, (base + root) / 8.0)
}

/// Cardano invariants `(Delta_0, Delta_1)` of the monic cubic (shifted
/// normalization: roots are `2/(3 phi) - (C + Delta_0/C)/3`).
fn invariants(phi: f64, z: Complex64) -> (Complex64, Complex64) {
    let p2 = phi * phi;
    let d0 = 1.0 / p2 - 3.0 * (phi - 1.0) / (z * p2);
    let d1 = 2.0 / (p2 * phi) - 9.0 * (phi + 2.0) / (z * p2 * phi);
    (d0, d1)
}

/// Cube root argument `A` with the larger modulus of the two sign choices;
/// both give the same root set.
fn cardano_a(d0: Complex64, d1: Complex64) -> Complex64 {
    let s = (d1 * d1 - 4.0 * d0 * d0 * d0).sqrt();
    let minus = (d1 - s) / 2.0;
    let plus = (d1 + s) / 2.0;
    if minus.norm() >= plus.norm() {
        minus
    } else {
        plus
    }
}

/// `z phi^2 P(G)` and its derivative, `P` the monic cubic.
fn scaled_cubic(phi: f64, z: Complex64, g: Complex64) -> (Complex64, Complex64) {
    let a3 = z * phi * phi;
    let a2 = -2.0 * z * phi;
    let a1 = z + (phi - 1.0);
    let value = ((a3 * g + a2) * g + a1) * g - 1.0;
    let slope = (3.0 * a3 * g + 2.0 * a2) * g + a1;
    (value, slope)
}

/// `|P(G)|` relative to the largest of its four terms.
pub fn cubic_residual(phi: f64, z: Complex64, g: Complex64) -> f64 {
    let terms = [
        (z * phi * phi * g * g * g).norm(),
        (2.0 * z * phi * g * g).norm(),
        ((z + (phi - 1.0)) * g).norm(),
        1.0,
    ];
    let scale = terms.iter().cloned().fold(0.0, f64::max);
    scaled_cubic(phi, z, g).0.norm() / scale
}

fn polish(phi: f64, z: Complex64, mut g: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (v, s) = scaled_cubic(phi, z, g);
        if s == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = v / s;
        if !step.is_finite() {
            break;
        }
        g -= step;
        if step.norm() <= 1e-16 * g.norm() {
            break;
        }
    }
    g
}

/// The three Vieta roots `k = 0, 1, 2` on principal branches, Newton-polished.
pub fn cubic_roots(phi: f64, z: Complex64) -> [Complex64; 3] {
    let (d0, d1) = invariants(phi, z);
    let a = cardano_a(d0, d1);
    let shift = Complex64::new(2.0 / (3.0 * phi), 0.0);
    let c = a.powf(1.0 / 3.0);
    let xi = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut ck = c;
    for root in roots.iter_mut() {
        let raw = if ck.norm() == 0.0 { shift } else { shift - (ck + d0 / ck) / 3.0 };
        *root = polish(phi, z, raw);
        ck *= xi;
    }
    roots
}

/// `G_1` from `G_0` through `1/G_1 = 1/G_0 + 1/(1 - phi G_0)`.
pub fn g1_from_g0(phi: f64, g0: Complex64) -> Complex64 {
    1.0 / (1.0 / g0 + 1.0 / (1.0 - phi * g0))
}

fn check_phi(phi: f64) -> Result<()> {
    if phi.is_finite() && phi > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("phi must be positive and finite, got {phi}")))
    }
}

fn nearest(roots: &[Complex64; 3], target: Complex64) -> (Complex64, f64, f64) {
    let mut d: Vec<(f64, Complex64)> = roots.iter().map(|&r| ((r - target).norm(), r)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    (d[0].1, d[0].0, d[1].0)
}

/// Follows the physical root from far above the real axis down to
/// `Re z + i y_end`, always taking the root nearest the previous value and
/// shortening the step whenever that choice is ambiguous.
fn track(phi: f64, x: f64, y_end: f64) -> Complex64 {
    let y_start = 100.0 * phi.max(1.0).max(x.abs());
    let start = Complex64::new(x, y_start.max(y_end));
    let mut g = nearest(&cubic_roots(phi, start), 1.0 / start).0;
    let mut y = start.im;
    let mut ratio: f64 = 0.5;
    while y > y_end {
        let y_next = (y * ratio).max(y_end);
        let (candidate, d1, d2) = nearest(&cubic_roots(phi, Complex64::new(x, y_next)), g);
        if d1 <= 0.25 * d2 || ratio > 0.999 {
            g = candidate;
            y = y_next;
            ratio = (ratio * ratio).max(0.5);
        } else {
            ratio = ratio.sqrt();
        }
    }
    g
}

/// Physical `(G_0, G_1)` at `z` with `Im z >= 0`; real `z` means `x + i0`.
///
/// Inside the continuous support the root with `Im G_0 < 0` is returned;
/// elsewhere on the real axis the real root continuously connected to the
/// upper half plane.
pub fn blockaded_resolvent(phi: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_phi(phi)?;
    if !z.is_finite() || z.im < 0.0 {
        return Err(Error::validation(format!("z must be finite with Im z >= 0, got {z}")));
    }
    let g0 = if z.im > 0.0 {
        track(phi, z.re, z.im)
    } else {
        let x = z.re;
        let (zm, zp) = blockaded_edges(phi);
        let at = |edge: f64| (x - edge).abs() <= 4.0 * f64::EPSILON * edge.abs().max(1.0);
        if x == 0.0 || at(zm) || at(zp) {
            return Err(Error::Edge(x));
        }
        let roots = cubic_roots(phi, z);
        let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let lowest = *roots.iter().min_by(|a, b| a.im.total_cmp(&b.im)).unwrap();
        let (lo, hi) = blockaded_support(phi);
        if x > lo && x < hi && lowest.im < -1e-12 * scale {
            lowest
        } else {
            // Outside the support the physical branch is real even where the
            // cubic has a complex pair.
            let real = roots.iter().filter(|r| r.im.abs() <= 1e-8 * scale).copied().collect::<Vec<_>>();
            let tracked = track(phi, x, 1e-10 * x.abs().max(1.0));
            if !real.is_empty() {
                let g = *real.iter().min_by(|a, b| (*a - tracked).norm().total_cmp(&(*b - tracked).norm())).unwrap();
                return Ok((Complex64::new(g.re, 0.0), g1_from_g0(phi, Complex64::new(g.re, 0.0))));
            }
            let tracked = track(phi, x, 1e-10 * x.abs().max(1.0));
            let g = nearest(&roots, tracked).0;
            Complex64::new(g.re, 0.0)
        }
    };
    Ok((g0, g1_from_g0(phi, g0)))
}

/// Continuous support `(lower, upper)` in `x`.
pub fn blockaded_support(phi: f64) -> (f64, f64) {
    let (zm, zp) = blockaded_edges(phi);
    (zm.max(0.0), zp)
}

/// Weight of the zero-eigenvalue delta function in the total density.
pub fn blockaded_delta_mass(phi: f64) -> f64 {
    ((1.0 - phi) / (1.0 + phi)).max(0.0)
}

/// Explicit zero-sector density `sin(pi/3)/(3 pi) | |A|^{1/3} - Delta_0/|A|^{1/3} |`
/// on the support, zero outside.
pub fn p0_explicit(phi: f64, x: f64) -> f64 {
    let (lo, hi) = blockaded_support(phi);
    if x <= lo || x >= hi {
        return 0.0;
    }
    let (d0, d1) = invariants(phi, Complex64::new(x, 0.0));
    let a = cardano_a(d0, d1).re;
    let m = a.abs().cbrt();
    SQRT3_HALF / (3.0 * std::f64::consts::PI) * (m - d0.re / m).abs()
}

/// Sector densities `(p_0, p_1)` at raw `x`, from the complex root pair of
/// the cubic on the real axis.
pub fn sector_densities(phi: f64, x: f64) -> [f64; 2] {
    let (lo, hi) = blockaded_support(phi);
    if x <= lo || x >= hi {
        return [0.0, 0.0];
    }
    let z = Complex64::new(x, 0.0);
    let (d0, d1) = invariants(phi, z);
    let a = cardano_a(d0, d1).re;
    let c = a.cbrt();
    let re = 2.0 / (3.0 * phi) + (c + d0.re / c) / 6.0;
    let im = -SQRT3_HALF / 3.0 * (c - d0.re / c).abs();
    let g0 = polish(phi, z, Complex64::new(re, im));
    let g0 = if g0.im < 0.0 { g0 } else { Complex64::new(re, im) };
    let g1 = g1_from_g0(phi, g0);
    let pi = std::f64::consts::PI;
    [(-g0.im / pi).max(0.0), (-g1.im / pi).max(0.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GOLDEN;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn edges() {
        let (m, p) = blockaded_edges(1.0);
        assert!(m.abs() < 1e-15 && (p - 6.75).abs() < 1e-14);
        let (m, p) = blockaded_edges(GOLDEN);
        assert!((m + 0.024_952_5).abs() < 1e-6 && (p - 9.460_614_5).abs() < 1e-6);
        let (m, p) = blockaded_edges(0.5);
        assert!((m - 0.028_35).abs() < 1e-6 && (p - 4.409_15).abs() < 1e-6);
    }

    #[test]
    fn discriminant_vanishes_at_edges() {
        // Delta_1^2 - 4 Delta_0^3 = -27 Delta and Delta has zeros at z_pm.
        for phi in [0.5, 1.3, GOLDEN, 3.0] {
            let (zm, zp) = blockaded_edges(phi);
            for z in [zm, zp] {
                let (d0, d1) = invariants(phi, c(z, 0.0));
                let disc = d1 * d1 - 4.0 * d0 * d0 * d0;
                assert!(disc.norm() < 1e-9 * (d1 * d1).norm().max(1.0), "phi {phi} z {z}: {disc}");
            }
        }
    }

    #[test]
    fn roots_satisfy_cubic() {
        for phi in [0.5, 1.0, GOLDEN, 3.0] {
            for &mag in &[1e-6, 1e-3, 0.7, 5.0, 1e3] {
                for &arg in &[0.3, 1.5, 2.9] {
                    let z = Complex64::from_polar(mag, arg);
                    for r in cubic_roots(phi, z) {
                        assert!(cubic_residual(phi, z, r) < 1e-10, "phi {phi} z {z} root {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn golden_small_x_is_mp_singularity() {
        let phi = GOLDEN;
        let x = 1e-8;
        let (g0, _) = blockaded_resolvent(phi, c(x, 0.0)).unwrap();
        let scaled = g0 * x.sqrt() * phi / (phi - 1.0).sqrt();
        assert!((scaled + Complex64::i()).norm() < 1e-2, "{scaled}");
    }

    #[test]
    fn multicritical_small_x() {
        let x: f64 = 1e-9;
        let (g0, g1) = blockaded_resolvent(1.0, c(x, 0.0)).unwrap();
        assert!((g0.norm() * x.cbrt() - 1.0).abs() < 1e-2);
        assert!(((g0 * g0 * g0) * x - 1.0).norm() < 1e-2);
        assert!((g1.norm() * x.powf(2.0 / 3.0) - 1.0).abs() < 1e-2);
        assert!((g1 / (-(g0 * g0)) - 1.0).norm() < 1e-2);
    }

    #[test]
    fn gapped_origin_pole() {
        let phi = 0.5;
        let z = 1e-9;
        let (g0, g1) = blockaded_resolvent(phi, c(z, 0.0)).unwrap();
        assert!(g0.im == 0.0 && (g0.re + 2.0).abs() < 1e-6);
        assert!((g1.re * z - (1.0 - phi)).abs() < 1e-6);
    }

    #[test]
    fn branch_points_are_rejected() {
        let (zm, zp) = blockaded_edges(0.5);
        for x in [0.0, zm, zp] {
            assert!(matches!(blockaded_resolvent(0.5, c(x, 0.0)), Err(Error::Edge(_))));
        }
        assert!(blockaded_resolvent(-1.0, c(1.0, 1.0)).is_err());
    }

    #[test]
    fn large_z_decay() {
        for phi in [0.5, GOLDEN] {
            let z = c(0.0, 1e6);
            let (g0, g1) = blockaded_resolvent(phi, z).unwrap();
            assert!((g0 * z - 1.0).norm() < 1e-5);
            assert!((g1 * z - 1.0).norm() < 1e-5);
        }
    }

    #[test]
    fn herglotz_upper_half_plane() {
        for phi in [0.5, 1.0, GOLDEN, 3.0] {
            for x in [-2.0, 0.01, 0.5, 3.0, 8.0, 12.0] {
                let (g0, g1) = blockaded_resolvent(phi, c(x, 1e-3)).unwrap();
                assert!(g0.im < 0.0 && g1.im < 0.0, "phi {phi} x {x}: {g0} {g1}");
            }
        }
    }

    #[test]
    fn explicit_p0_matches_root() {
        for phi in [0.5, 1.0, GOLDEN, 3.0] {
            let (lo, hi) = blockaded_support(phi);
            for t in [0.01, 0.3, 0.6, 0.95] {
                let x = lo + t * (hi - lo);
                let p = sector_densities(phi, x);
                assert!((p[0] - p0_explicit(phi, x)).abs() < 1e-10 * p[0].max(1.0));
                let (g0, g1) = blockaded_resolvent(phi, c(x, 0.0)).unwrap();
                let pi = std::f64::consts::PI;
                assert!((p[0] + g0.im / pi).abs() < 1e-10 * p[0].max(1.0));
                assert!((p[1] + g1.im / pi).abs() < 1e-9 * p[1].max(1.0));
            }
        }
    }

    #[test]
    fn approach_from_above_matches_boundary_value() {
        for phi in [0.5, 1.0, GOLDEN, 3.0] {
            let (lo, hi) = blockaded_support(phi);
            let x = 0.5 * (lo + hi);
            let (above, _) = blockaded_resolvent(phi, c(x, 1e-9)).unwrap();
            let (edge, _) = blockaded_resolvent(phi, c(x, 0.0)).unwrap();
            assert!((above - edge).norm() < 1e-6);
            // gap and negative axis: real branch
            for x in [-1.0, hi + 1.0] {
                let (above, _) = blockaded_resolvent(phi, c(x, 1e-9)).unwrap();
                let (edge, _) = blockaded_resolvent(phi, c(x, 0.0)).unwrap();
                assert!((above - edge).norm() < 1e-6 && edge.im == 0.0, "phi {phi} x {x}: {above} vs {edge}");
            }
        }
    }

    #[test]
    fn g1_relation_holds() {
        let (g0, g1) = blockaded_resolvent(GOLDEN, c(2.0, 0.5)).unwrap();
        let lhs = 1.0 / g1;
        let rhs = 1.0 / g0 + 1.0 / (1.0 - GOLDEN * g0);
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
    }
}
