//! Damped fixed-point solution of the planar self-energy equations
//!
//! `G_l = 1/(z - Sigma_l)`, `Sigma_l = sum_r C_lr d'_r H_r`,
//! `H_r = 1/(1 - Sigma'_r)`, `Sigma'_r = sum_l C_lr d_l G_l`
//!
//! for an arbitrary compatibility matrix.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::ConstraintSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Residual target, relative per equation.
    pub tol: f64,
    /// Iteration budget summed over the whole continuation path.
    pub max_iter: usize,
    /// Initial mixing weight `alpha` in `G <- (1 - alpha) G + alpha F(G)`.
    pub damping: f64,
    /// Imaginary offsets used to extrapolate real-axis values to `eta -> 0`.
    pub eta: [f64; 2],
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-12, max_iter: 100_000, damping: 0.5, eta: [1e-6, 2e-6] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolventValue {
    pub z: Complex64,
    pub g: Vec<Complex64>,
    pub h: Vec<Complex64>,
    pub sigma: Vec<Complex64>,
    pub sigma_prime: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Dense view of a spec used by the iteration.
struct System<'a> {
    c: &'a [Vec<u8>],
    d: &'a [f64],
    dp: &'a [f64],
}

struct Evaluation {
    g_new: Vec<Complex64>,
    h: Vec<Complex64>,
    sigma: Vec<Complex64>,
    sigma_prime: Vec<Complex64>,
}

impl System<'_> {
    fn apply(&self, z: Complex64, g: &[Complex64]) -> Evaluation {
        let sigma_prime: Vec<Complex64> = (0..self.dp.len())
            .map(|r| (0..self.d.len()).filter(|&l| self.c[l][r] == 1).map(|l| self.d[l] * g[l]).sum())
            .collect();
        let h: Vec<Complex64> = sigma_prime.iter().map(|s| 1.0 / (1.0 - s)).collect();
        let sigma: Vec<Complex64> = (0..self.d.len())
            .map(|l| (0..self.dp.len()).filter(|&r| self.c[l][r] == 1).map(|r| self.dp[r] * h[r]).sum())
            .collect();
        let g_new = sigma.iter().map(|s| 1.0 / (z - s)).collect();
        Evaluation { g_new, h, sigma, sigma_prime }
    }

    fn residual(g: &[Complex64], e: &Evaluation) -> f64 {
        g.iter()
            .zip(&e.g_new)
            .map(|(a, b)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// Newton step for `G - F(G) = 0`.
    fn newton(&self, g: &[Complex64], e: &Evaluation) -> Option<Vec<Complex64>> {
        let n = g.len();
        let jac = Mat::<Complex64>::from_fn(n, n, |l, m| {
            let mut dfdg = Complex64::new(0.0, 0.0);
            for r in 0..self.dp.len() {
                if self.c[l][r] == 1 && self.c[m][r] == 1 {
                    dfdg += self.dp[r] * e.h[r] * e.h[r] * self.d[m];
                }
            }
            let dfdg = e.g_new[l] * e.g_new[l] * dfdg;
            if l == m {
                1.0 - dfdg
            } else {
                -dfdg
            }
        });
        let mut rhs = Mat::<Complex64>::from_fn(n, 1, |l, _| e.g_new[l] - g[l]);
        jac.partial_piv_lu().solve_in_place(rhs.as_mut());
        let next: Vec<Complex64> = (0..n).map(|l| g[l] + rhs[(l, 0)]).collect();
        next.iter().all(|x| x.is_finite()).then_some(next)
    }
}

/// Runs damped iteration at fixed `z` from `g`, finishing with Newton steps
/// once the iterate is in the basin. Returns the residual reached.
fn converge(
    sys: &System,
    z: Complex64,
    g: &mut Vec<Complex64>,
    opts: &SolverOptions,
    budget: &mut usize,
) -> f64 {
    let mut alpha = opts.damping;
    let mut e = sys.apply(z, g);
    let mut res = System::residual(g, &e);
    let mut stalls = 0;
    while res > opts.tol && *budget > 0 {
        *budget -= 1;
        if res < 1e-4 || stalls > 50 {
            if let Some(next) = sys.newton(g, &e) {
                let ne = sys.apply(z, &next);
                let nres = System::residual(&next, &ne);
                if nres < res {
                    *g = next;
                    e = ne;
                    res = nres;
                    continue;
                }
            }
        }
        let trial: Vec<Complex64> = g.iter().zip(&e.g_new).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
        let te = sys.apply(z, &trial);
        let tres = System::residual(&trial, &te);
        if tres > res {
            alpha = (alpha * 0.5).max(1e-3);
            stalls += 1;
        } else {
            stalls = 0;
        }
        *g = trial;
        e = te;
        res = tres;
    }
    res
}

fn validate_z(z: Complex64) -> Result<()> {
    if z.is_finite() && z.im > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("fixed-point solver needs Im z > 0, got {z}")))
    }
}

/// Solves the self-energy equations at `z` (`Im z > 0`), selecting the
/// physical branch by continuation from `Re z + i max(10, |z|)`.
pub fn solve_fixed_point(spec: &ConstraintSpec, z: Complex64, opts: &SolverOptions) -> Result<ResolventValue> {
    validate_z(z)?;
    let sys = System { c: spec.constraint_matrix(), d: spec.d(), dp: spec.d_prime() };
    let y_start = 10f64.max(z.norm());
    let mut w = Complex64::new(z.re, y_start.max(z.im));
    let mut g = vec![1.0 / w; spec.n_left()];
    let mut budget = opts.max_iter;
    let steps = ((y_start / z.im).log2().ceil().max(0.0)) as usize;
    let factor = if steps > 0 { (z.im / y_start).powf(1.0 / steps as f64) } else { 1.0 };
    let mut res = converge(&sys, w, &mut g, opts, &mut budget);
    for k in 1..=steps {
        w = Complex64::new(z.re, if k == steps { z.im } else { y_start * factor.powi(k as i32) });
        res = converge(&sys, w, &mut g, opts, &mut budget);
        if budget == 0 {
            break;
        }
    }
    if !(res <= opts.tol) {
        return Err(Error::Convergence { z, eta: z.im, residual: res, iterations: opts.max_iter - budget });
    }
    let e = sys.apply(z, &g);
    Ok(ResolventValue {
        z,
        g,
        h: e.h,
        sigma: e.sigma,
        sigma_prime: e.sigma_prime,
        residual: res,
        iterations: opts.max_iter - budget,
    })
}

/// Real-axis sector resolvents `G_l(x + i0)` by linear Richardson
/// extrapolation of `G_l(x + i eta)` over the two configured offsets.
pub fn boundary_resolvent(spec: &ConstraintSpec, x: f64, opts: &SolverOptions) -> Result<Vec<Complex64>> {
    let [e1, e2] = opts.eta;
    let solve = |eta: f64| {
        solve_fixed_point(spec, Complex64::new(x, eta), opts).map_err(|err| match err {
            Error::Convergence { residual, iterations, .. } => {
                Error::Convergence { z: Complex64::new(x, eta), eta, residual, iterations }
            }
            other => other,
        })
    };
    let a = solve(e1)?;
    let b = solve(e2)?;
    let w = e2 / (e2 - e1);
    Ok(a.g.iter().zip(&b.g).map(|(ga, gb)| w * ga + (1.0 - w) * gb).collect())
}
