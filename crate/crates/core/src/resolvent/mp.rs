//! Marchenko-Pastur laws.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Balanced MP density `(1/2pi) sqrt((4 - eps)/eps)` on `(0, 4)`.
pub fn mp_density(eps: f64) -> f64 {
    if eps > 0.0 && eps < 4.0 {
        ((4.0 - eps) / eps).sqrt() / (2.0 * std::f64::consts::PI)
    } else {
        0.0
    }
}

/// `G_MP(z) = (1 - sqrt(1 - 4/z)) / 2` on the principal branch, which for
/// `Im z > 0` is the physical (Herglotz) sheet.
pub fn mp_resolvent(z: Complex64) -> Complex64 {
    (1.0 - (1.0 - 4.0 / z).sqrt()) / 2.0
}

/// One sector pair of dimensions `(d_left, d_right)`, eigenvalues of the
/// `d_left`-side Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnbalancedMp {
    pub density: f64,
    pub delta_mass: f64,
    pub edges: (f64, f64),
}

/// Unbalanced MP law for a `N d_left x N d_right` block with entry variance
/// `1/N`, evaluated at raw eigenvalue `x`.
///
/// The continuous part integrates to `min(1, 1/lam)` so that, together with
/// `delta_mass`, every left eigenvalue is accounted for.
pub fn mp_unbalanced(lam: f64, d_left: f64, d_right: f64, x: f64) -> Result<UnbalancedMp> {
    if !(lam.is_finite() && lam > 0.0) {
        return Err(Error::validation(format!("lambda must be positive, got {lam}")));
    }
    if !(d_left > 0.0 && d_right > 0.0 && d_left.is_finite() && d_right.is_finite()) {
        return Err(Error::validation("sector dimensions must be positive and finite"));
    }
    if (lam - d_left / d_right).abs() > 1e-12 * lam {
        return Err(Error::validation(format!(
            "lambda = {lam} does not equal d_left / d_right = {}",
            d_left / d_right
        )));
    }
    let (lo, hi) = unbalanced_edges(d_left, d_right);
    Ok(UnbalancedMp {
        density: unbalanced_density(d_left, d_right, x),
        delta_mass: (1.0 - 1.0 / lam).max(0.0),
        edges: (lo, hi),
    })
}

pub(crate) fn unbalanced_edges(d_left: f64, d_right: f64) -> (f64, f64) {
    let (a, b) = (d_left.sqrt(), d_right.sqrt());
    ((a - b).powi(2), (a + b).powi(2))
}

pub(crate) fn unbalanced_density(d_left: f64, d_right: f64, x: f64) -> f64 {
    let (lo, hi) = unbalanced_edges(d_left, d_right);
    if x <= lo || x >= hi || x <= 0.0 {
        return 0.0;
    }
    ((hi - x) * (x - lo)).sqrt() / (2.0 * std::f64::consts::PI * d_left * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Endpoint, QuadratureOptions};
    use std::f64::consts::PI;

    #[test]
    fn balanced_values() {
        assert!((mp_density(2.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(mp_density(4.0), 0.0);
        assert_eq!(mp_density(-1.0), 0.0);
    }

    #[test]
    fn balanced_normalization_and_mean() {
        let opts = QuadratureOptions::default();
        let mass = integrate(mp_density, 0.0, 4.0, Endpoint::InvSqrt, Endpoint::Regular, opts).value;
        let mean = integrate(|x| x * mp_density(x), 0.0, 4.0, Endpoint::InvSqrt, Endpoint::Regular, opts).value;
        assert!((mass - 1.0).abs() < 1e-9);
        assert!((mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unbalanced_reduces_to_balanced() {
        for x in [0.01, 0.5, 2.0, 3.9] {
            let u = mp_unbalanced(1.0, 1.0, 1.0, x).unwrap();
            assert!((u.density - mp_density(x)).abs() < 1e-14);
            assert_eq!(u.edges, (0.0, 4.0));
            assert_eq!(u.delta_mass, 0.0);
        }
    }

    #[test]
    fn unbalanced_eigenvalue_count() {
        let opts = QuadratureOptions::default();
        for (dl, dr) in [(2.0, 1.0), (0.5, 1.5), (3.0, 3.0)] {
            let (lo, hi) = unbalanced_edges(dl, dr);
            let left = if lo == 0.0 { Endpoint::InvSqrt } else { Endpoint::Regular };
            let mass = integrate(|x| unbalanced_density(dl, dr, x), lo, hi, left, Endpoint::Regular, opts).value;
            let delta = mp_unbalanced(dl / dr, dl, dr, 1.0).unwrap().delta_mass;
            assert!((mass + delta - 1.0).abs() < 1e-8, "({dl},{dr}): {mass} + {delta}");
            // mean raw eigenvalue equals the row variance sum d_right
            let mean = integrate(|x| x * unbalanced_density(dl, dr, x), lo, hi, left, Endpoint::Regular, opts).value;
            assert!((mean - dr).abs() < 1e-8);
        }
    }

    #[test]
    fn unbalanced_rejects_bad_lambda() {
        assert!(mp_unbalanced(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(mp_unbalanced(2.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn resolvent_branch() {
        let g = mp_resolvent(Complex64::new(2.0, 1e-12));
        assert!((-g.im / PI - mp_density(2.0)).abs() < 1e-9);
        let far = Complex64::new(0.0, 1e6);
        assert!(((mp_resolvent(far) * far) - 1.0).norm() < 1e-5);
    }
}
