//! Sampled densities of states in the normalized variable `epsilon`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::blockaded::{blockaded_delta_mass, blockaded_support, sector_densities};
use super::fixed_point::{boundary_resolvent, solve_fixed_point, SolverOptions};
use super::mp::{unbalanced_density, unbalanced_edges};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Endpoint, QuadratureOptions};
use crate::space::{asymptotic_spec, scaling_constants, ConstraintSpec, ModelKind};

pub const DEFAULT_GRID_POINTS: usize = 2000;

/// How a density is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed forms: blockaded cubic, (unbalanced) MP sectors.
    Closed,
    /// Numerical self-energy solution with `eta -> 0` extrapolation.
    FixedPoint,
}

/// Sample points of a density.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    /// `n` Chebyshev nodes `lo + (hi - lo)(1 - cos theta_i)/2`,
    /// `theta_i = pi (i + 1/2)/n`, over the support (or, for the fixed-point
    /// method, over a rigorous enclosure of it).
    Chebyshev(usize),
    /// Explicit ascending `epsilon` values.
    Points(Vec<f64>),
}

impl Default for Grid {
    fn default() -> Self {
        Grid::Chebyshev(DEFAULT_GRID_POINTS)
    }
}

#[derive(Clone, Debug)]
enum Kernel {
    Blockaded { phi: f64 },
    /// Independent sector pairs `(d_l, d'_partner)`.
    Mp { sectors: Vec<(f64, f64)> },
    FixedPoint,
    PointMass { at: f64 },
}

/// Entanglement density of states on a grid, with its analytic kernel.
///
/// `p_total = sum_l d_l p_sector[l] / sum_l d_l`; each sector density carries
/// mass `1 - sector_delta[l]` and the total carries `1 - delta_mass_at_zero`.
/// `cdf` is the integrated density including the delta mass at zero.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralDensity {
    pub eps_grid: Vec<f64>,
    pub p_total: Vec<f64>,
    pub p_sector: Vec<Vec<f64>>,
    pub cdf: Vec<f64>,
    pub delta_mass_at_zero: f64,
    pub sector_delta: Vec<f64>,
    pub support: (f64, f64),
    pub model: ConstraintSpec,
    pub method: Method,
    #[serde(skip)]
    kernel: Kernel,
    #[serde(skip)]
    eps_scale: f64,
    #[serde(skip)]
    weights: Vec<f64>,
}

fn quad_opts() -> QuadratureOptions {
    QuadratureOptions::default()
}

impl SpectralDensity {
    fn sector_weights(&self) -> Vec<f64> {
        let sum: f64 = self.model.d().iter().sum();
        self.model.d().iter().map(|d| d / sum).collect()
    }

    /// Continuous part of sector `l` at `eps`.
    pub fn sector_pdf(&self, l: usize, eps: f64) -> f64 {
        let s = self.eps_scale;
        match &self.kernel {
            Kernel::Blockaded { phi } => sector_densities(*phi, eps / s)[l] / s,
            Kernel::Mp { sectors } => {
                let (dl, dr) = sectors[l];
                unbalanced_density(dl, dr, eps / s) / s
            }
            Kernel::FixedPoint => interpolate(&self.eps_grid, &self.p_sector[l], eps),
            Kernel::PointMass { .. } => 0.0,
        }
    }

    /// Continuous part of the total density at `eps`.
    pub fn pdf(&self, eps: f64) -> f64 {
        match &self.kernel {
            Kernel::Blockaded { phi } => {
                let s = self.eps_scale;
                let p = sector_densities(*phi, eps / s);
                (phi * p[0] + p[1]) / ((phi + 1.0) * s)
            }
            Kernel::FixedPoint => interpolate(&self.eps_grid, &self.p_total, eps),
            _ => self.sector_weights().iter().enumerate().map(|(l, w)| w * self.sector_pdf(l, eps)).sum(),
        }
    }

    /// Local singularity type at the lower end of sector `l`'s support.
    fn lower_endpoint(&self, l: usize) -> Endpoint {
        match &self.kernel {
            Kernel::Blockaded { phi } => blockaded_lower_endpoint(*phi),
            Kernel::Mp { sectors } => {
                let (lo, _) = unbalanced_edges(sectors[l].0, sectors[l].1);
                if lo == 0.0 {
                    Endpoint::InvSqrt
                } else {
                    Endpoint::Regular
                }
            }
            _ => Endpoint::Regular,
        }
    }

    /// Continuous support of sector `l` in `epsilon`.
    fn sector_support(&self, l: usize) -> (f64, f64) {
        let s = self.eps_scale;
        match &self.kernel {
            Kernel::Blockaded { phi } => {
                let (lo, hi) = blockaded_support(*phi);
                (lo * s, hi * s)
            }
            Kernel::Mp { sectors } => {
                let (lo, hi) = unbalanced_edges(sectors[l].0, sectors[l].1);
                (lo * s, hi * s)
            }
            _ => self.support,
        }
    }

    /// `int p_l(eps) f(eps) d eps` over the continuous part of sector `l`.
    pub fn integrate_sector(&self, l: usize, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        match &self.kernel {
            Kernel::FixedPoint => {
                self.weights.iter().zip(&self.eps_grid).zip(&self.p_sector[l]).map(|((w, &e), p)| w * p * f(e)).sum()
            }
            Kernel::PointMass { .. } => 0.0,
            _ => {
                let (lo, hi) = self.sector_support(l);
                let left = self.lower_endpoint(l);
                integrate(|e| self.sector_pdf(l, e) * f(e), lo, hi, left, Endpoint::Regular, quad_opts()).value
            }
        }
    }

    /// `int p(eps) f(eps) d eps` over the continuous part of the total density.
    pub fn integrate_continuous(&self, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        match &self.kernel {
            Kernel::Blockaded { phi } => {
                let (lo, hi) = self.support;
                let left = blockaded_lower_endpoint(*phi);
                integrate(|e| self.pdf(e) * f(e), lo, hi, left, Endpoint::Regular, quad_opts()).value
            }
            Kernel::Mp { .. } => self
                .sector_weights()
                .iter()
                .enumerate()
                .map(|(l, w)| w * self.integrate_sector(l, &f))
                .sum(),
            Kernel::FixedPoint => {
                self.weights.iter().zip(&self.eps_grid).zip(&self.p_total).map(|((w, &e), p)| w * p * f(e)).sum()
            }
            Kernel::PointMass { at } => f(*at),
        }
    }

    /// Integrated density `delta_mass + int_0^eps p`.
    pub fn cdf_at(&self, eps: f64) -> f64 {
        if eps < 0.0 {
            return 0.0;
        }
        let delta = self.delta_mass_at_zero;
        match &self.kernel {
            Kernel::Blockaded { phi } => {
                let (lo, hi) = self.support;
                if eps <= lo {
                    return delta;
                }
                let left = blockaded_lower_endpoint(*phi);
                let part = integrate(|e| self.pdf(e), lo, eps.min(hi), left, Endpoint::Regular, quad_opts()).value;
                (delta + part).min(1.0)
            }
            Kernel::Mp { sectors } => {
                let weights = self.sector_weights();
                let mut total = delta;
                for l in 0..sectors.len() {
                    let (lo, hi) = self.sector_support(l);
                    if eps > lo {
                        let left = self.lower_endpoint(l);
                        total += weights[l]
                            * integrate(|e| self.sector_pdf(l, e), lo, eps.min(hi), left, Endpoint::Regular, quad_opts())
                                .value;
                    }
                }
                total.min(1.0)
            }
            Kernel::FixedPoint => {
                if eps < self.eps_grid[0] {
                    delta
                } else {
                    interpolate(&self.eps_grid, &self.cdf, eps).max(delta)
                }
            }
            Kernel::PointMass { at } => {
                if eps >= *at {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Leading power of `p(eps)` as `eps -> 0+`, or `None` when the
    /// continuous spectrum is gapped away from zero.
    pub fn small_eps_exponent(&self) -> Option<f64> {
        match &self.kernel {
            Kernel::Blockaded { phi } => match blockaded_lower_endpoint(*phi) {
                Endpoint::InvSqrt => Some(-0.5),
                Endpoint::InvTwoThirds => Some(-2.0 / 3.0),
                Endpoint::Regular => None,
            },
            Kernel::Mp { sectors } => sectors.iter().any(|&(a, b)| a == b).then_some(-0.5),
            Kernel::FixedPoint => (self.support.0 <= self.eps_grid[0]).then_some(-2.0 / 3.0),
            Kernel::PointMass { .. } => None,
        }
    }

    /// Degenerate density concentrated at a single `epsilon` (test input).
    pub fn point_mass(at: f64) -> Result<Self> {
        if !(at.is_finite() && at > 0.0) {
            return Err(Error::validation("point mass location must be finite and positive"));
        }
        let model = ConstraintSpec::unconstrained();
        Ok(SpectralDensity {
            eps_grid: vec![at],
            p_total: vec![0.0],
            p_sector: vec![vec![0.0]],
            cdf: vec![1.0],
            delta_mass_at_zero: 0.0,
            sector_delta: vec![0.0],
            support: (at, at),
            model,
            method: Method::Closed,
            kernel: Kernel::PointMass { at },
            eps_scale: 1.0,
            weights: vec![0.0],
        })
    }

    /// Fills grid columns and the cumulative column for an analytic kernel.
    fn tabulate(mut self, grid: &Grid) -> Result<Self> {
        let (lo, hi) = self.support;
        let (points, weights) = grid_points(grid, lo, hi)?;
        let n_left = self.model.n_left();
        self.p_sector = (0..n_left).map(|l| points.iter().map(|&e| self.sector_pdf(l, e)).collect()).collect();
        self.p_total = points.iter().map(|&e| self.pdf(e)).collect();
        let mut cdf = Vec::with_capacity(points.len());
        let mut prev = f64::NEG_INFINITY;
        let mut acc = self.delta_mass_at_zero;
        for &e in &points {
            acc += self.cdf_increment(prev, e);
            cdf.push(acc.min(1.0));
            prev = e;
        }
        self.cdf = cdf;
        self.eps_grid = points;
        self.weights = weights;
        Ok(self)
    }

    fn cdf_increment(&self, from: f64, to: f64) -> f64 {
        let weights = self.sector_weights();
        let pieces: Vec<(f64, (f64, f64), Endpoint, Option<usize>)> = match &self.kernel {
            Kernel::Blockaded { phi } => vec![(1.0, self.support, blockaded_lower_endpoint(*phi), None)],
            Kernel::Mp { sectors } => (0..sectors.len())
                .map(|l| (weights[l], self.sector_support(l), self.lower_endpoint(l), Some(l)))
                .collect(),
            _ => Vec::new(),
        };
        let mut total = 0.0;
        for (w, (lo, hi), left_kind, sector) in pieces {
            let a = from.max(lo);
            let b = to.min(hi);
            if b <= a {
                continue;
            }
            let left = if a == lo { left_kind } else { Endpoint::Regular };
            let f = |e: f64| match sector {
                Some(l) => self.sector_pdf(l, e),
                None => self.pdf(e),
            };
            total += w * integrate(f, a, b, left, Endpoint::Regular, quad_opts()).value;
        }
        total
    }
}

fn blockaded_lower_endpoint(phi: f64) -> Endpoint {
    if (phi - 1.0).abs() <= 1e-9 {
        Endpoint::InvTwoThirds
    } else if phi > 1.0 {
        Endpoint::InvSqrt
    } else {
        Endpoint::Regular
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&v| v < x);
    if i == 0 {
        return ys[0];
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}

/// Grid points and matching quadrature weights (midpoint rule in the
/// Chebyshev angle, or trapezoid on explicit points).
fn grid_points(grid: &Grid, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    match grid {
        Grid::Chebyshev(n) => {
            if *n < 2 {
                return Err(Error::validation("a density grid needs at least 2 points"));
            }
            let n = *n;
            let half = 0.5 * (hi - lo);
            let pi = std::f64::consts::PI;
            let mut points = Vec::with_capacity(n);
            let mut weights = Vec::with_capacity(n);
            for i in 0..n {
                let theta = pi * (i as f64 + 0.5) / n as f64;
                points.push(lo + half * (1.0 - theta.cos()));
                weights.push(half * theta.sin() * pi / n as f64);
            }
            Ok((points, weights))
        }
        Grid::Points(points) => {
            if points.len() < 2 {
                return Err(Error::validation("a density grid needs at least 2 points"));
            }
            if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::validation("grid points must be finite and strictly ascending"));
            }
            let n = points.len();
            let weights = (0..n)
                .map(|i| {
                    let left = if i > 0 { points[i] - points[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { points[i + 1] - points[i] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect();
            Ok((points.clone(), weights))
        }
    }
}

/// Closed-form density of the blockaded model `d = d' = (phi, 1)`.
pub fn blockaded_density(phi: f64, grid: &Grid) -> Result<SpectralDensity> {
    let model = asymptotic_spec(ModelKind::Blockaded { phi })?;
    let s = scaling_constants(&model).eps_scale;
    let (lo, hi) = blockaded_support(phi);
    let delta = blockaded_delta_mass(phi);
    SpectralDensity {
        eps_grid: Vec::new(),
        p_total: Vec::new(),
        p_sector: Vec::new(),
        cdf: Vec::new(),
        delta_mass_at_zero: delta,
        sector_delta: vec![0.0, (1.0 - phi).max(0.0)],
        support: (lo * s, hi * s),
        model,
        method: Method::Closed,
        kernel: Kernel::Blockaded { phi },
        eps_scale: s,
        weights: Vec::new(),
    }
    .tabulate(grid)
}

/// Density of a diagonal constraint as a weighted sum of unbalanced MP
/// sectors, all in the global `epsilon` scale.
pub fn diagonal_density(spec: &ConstraintSpec, grid: &Grid) -> Result<SpectralDensity> {
    let partners = spec
        .diagonal_partners()
        .ok_or_else(|| Error::validation(format!("{} is not a diagonal constraint", spec.name())))?;
    let s = scaling_constants(spec).eps_scale;
    let sectors: Vec<(f64, f64)> = partners.iter().enumerate().map(|(l, &r)| (spec.d()[l], spec.d_prime()[r])).collect();
    let sector_delta: Vec<f64> = sectors.iter().map(|&(a, b)| (1.0 - b / a).max(0.0)).collect();
    let sum_d: f64 = spec.d().iter().sum();
    let delta = sectors.iter().zip(&sector_delta).map(|(&(a, _), dl)| a * dl).sum::<f64>() / sum_d;
    let lo = sectors.iter().map(|&(a, b)| unbalanced_edges(a, b).0).fold(f64::INFINITY, f64::min);
    let hi = sectors.iter().map(|&(a, b)| unbalanced_edges(a, b).1).fold(0.0, f64::max);
    SpectralDensity {
        eps_grid: Vec::new(),
        p_total: Vec::new(),
        p_sector: Vec::new(),
        cdf: Vec::new(),
        delta_mass_at_zero: delta,
        sector_delta,
        support: (lo * s, hi * s),
        model: spec.clone(),
        method: Method::Closed,
        kernel: Kernel::Mp { sectors },
        eps_scale: s,
        weights: Vec::new(),
    }
    .tabulate(grid)
}

/// Generic rank fraction of a block matrix with the zero pattern of `C`:
/// the maximum flow through sector capacities `d` and `d'`, over `sum d`.
pub fn generic_rank_fraction(spec: &ConstraintSpec) -> f64 {
    let (nl, nr) = (spec.n_left(), spec.n_right());
    // nodes: 0 source, 1..=nl left, nl+1..=nl+nr right, nl+nr+1 sink
    let n = nl + nr + 2;
    let sink = n - 1;
    let mut cap = vec![vec![0.0f64; n]; n];
    let total: f64 = spec.d().iter().sum();
    for l in 0..nl {
        cap[0][1 + l] = spec.d()[l];
        for r in 0..nr {
            if spec.allowed(l, r) {
                cap[1 + l][1 + nl + r] = f64::INFINITY;
            }
        }
    }
    for r in 0..nr {
        cap[1 + nl + r][sink] = spec.d_prime()[r];
    }
    let mut flow = 0.0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 1e-15 * total {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut push = f64::INFINITY;
        let mut v = sink;
        while v != 0 {
            push = push.min(cap[parent[v]][v]);
            v = parent[v];
        }
        let mut v = sink;
        while v != 0 {
            let u = parent[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        flow += push;
    }
    (flow / total).min(1.0)
}

/// Upper bound `(sqrt(max row variance) + sqrt(max column variance))^2` on
/// the raw spectrum.
fn spectral_bound(spec: &ConstraintSpec) -> f64 {
    let row = (0..spec.n_left())
        .map(|l| (0..spec.n_right()).filter(|&r| spec.allowed(l, r)).map(|r| spec.d_prime()[r]).sum::<f64>())
        .fold(0.0, f64::max);
    let col = (0..spec.n_right())
        .map(|r| (0..spec.n_left()).filter(|&l| spec.allowed(l, r)).map(|l| spec.d()[l]).sum::<f64>())
        .fold(0.0, f64::max);
    (row.sqrt() + col.sqrt()).powi(2)
}

/// Density from the numerical self-energy solution on the grid.
pub fn fixed_point_density(spec: &ConstraintSpec, grid: &Grid, opts: &SolverOptions) -> Result<SpectralDensity> {
    let s = scaling_constants(spec).eps_scale;
    let bound = spectral_bound(spec) * s;
    let (points, weights) = grid_points(grid, 0.0, bound)?;
    let pi = std::f64::consts::PI;
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&e| {
            if e <= 0.0 {
                return Ok(vec![0.0; spec.n_left()]);
            }
            let g = boundary_resolvent(spec, e / s, opts)?;
            Ok(g.iter().map(|g| (-g.im / pi).max(0.0) / s).collect())
        })
        .collect::<Result<_>>()?;
    let n_left = spec.n_left();
    let sum_d: f64 = spec.d().iter().sum();
    let p_sector: Vec<Vec<f64>> = (0..n_left).map(|l| rows.iter().map(|row| row[l]).collect()).collect();
    let p_total: Vec<f64> =
        rows.iter().map(|row| row.iter().zip(spec.d()).map(|(p, d)| p * d).sum::<f64>() / sum_d).collect();

    let delta = (1.0 - generic_rank_fraction(spec)).max(0.0);
    let sector_delta = if delta <= 1e-12 {
        vec![0.0; n_left]
    } else {
        let eta = 1e-10;
        let v = solve_fixed_point(spec, Complex64::new(0.0, eta), opts)?;
        let raw: Vec<f64> = v.g.iter().map(|g| (Complex64::i() * eta * g).re.clamp(0.0, 1.0)).collect();
        let implied: f64 = raw.iter().zip(spec.d()).map(|(r, d)| r * d).sum::<f64>() / sum_d;
        if implied > 0.0 {
            raw.iter().map(|r| (r * delta / implied).min(1.0)).collect()
        } else {
            raw
        }
    };

    let threshold = 1e-8 * p_total.iter().cloned().fold(0.0, f64::max);
    let first = p_total.iter().position(|&p| p > threshold).unwrap_or(0);
    let last = p_total.iter().rposition(|&p| p > threshold).unwrap_or(points.len() - 1);
    let support = (if first == 0 { 0.0 } else { points[first] }, points[last]);
    let mut acc = delta;
    let cdf = p_total
        .iter()
        .zip(&weights)
        .map(|(p, w)| {
            acc += p * w;
            acc.min(1.0)
        })
        .collect();
    Ok(SpectralDensity {
        eps_grid: points,
        p_total,
        p_sector,
        cdf,
        delta_mass_at_zero: delta,
        sector_delta,
        support,
        model: spec.clone(),
        method: Method::FixedPoint,
        kernel: Kernel::FixedPoint,
        eps_scale: s,
        weights,
    })
}

/// Density of any spec, by closed form (blockaded and diagonal families) or
/// by the numerical self-energy solution.
pub fn density(spec: &ConstraintSpec, grid: &Grid, method: Method, opts: &SolverOptions) -> Result<SpectralDensity> {
    match method {
        Method::Closed => {
            if let Some(phi) = spec.as_blockaded() {
                let mut out = blockaded_density(phi, grid)?;
                out.model = spec.clone();
                Ok(out)
            } else if spec.diagonal_partners().is_some() {
                diagonal_density(spec, grid)
            } else {
                Err(Error::validation(format!(
                    "no closed form for {}; use the fixed-point method",
                    spec.name()
                )))
            }
        }
        Method::FixedPoint => fixed_point_density(spec, grid, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolvent::mp::mp_density;
    use crate::space::GOLDEN;

    #[test]
    fn golden_normalizations() {
        let d = blockaded_density(GOLDEN, &Grid::Chebyshev(200)).unwrap();
        assert!((d.integrate_continuous(|_| 1.0) - 1.0).abs() < 1e-7);
        assert!((d.integrate_continuous(|e| e) - 1.0).abs() < 1e-7);
        for l in 0..2 {
            assert!((d.integrate_sector(l, |_| 1.0) - 1.0).abs() < 1e-7);
        }
        assert!((d.cdf.last().unwrap() - 1.0).abs() < 1e-6);
        assert!((d.support.1 - 4.231).abs() < 1e-3);
    }

    #[test]
    fn gapped_masses() {
        let d = blockaded_density(0.5, &Grid::Chebyshev(200)).unwrap();
        assert!((d.delta_mass_at_zero - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.integrate_sector(1, |_| 1.0) - 0.5).abs() < 1e-7);
        assert!((d.integrate_sector(0, |_| 1.0) - 1.0).abs() < 1e-7);
        assert!((d.integrate_continuous(|_| 1.0) + d.delta_mass_at_zero - 1.0).abs() < 1e-7);
        assert!((d.support.0 - 0.034).abs() < 5e-4);
    }

    #[test]
    fn multicritical_normalization() {
        let d = blockaded_density(1.0, &Grid::Chebyshev(200)).unwrap();
        assert!((d.integrate_continuous(|_| 1.0) - 1.0).abs() < 1e-7);
        assert!((d.integrate_continuous(|e| e) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn total_is_weighted_sector_sum() {
        let d = blockaded_density(GOLDEN, &Grid::Chebyshev(50)).unwrap();
        for i in 0..50 {
            let mix = (GOLDEN * d.p_sector[0][i] + d.p_sector[1][i]) / (GOLDEN + 1.0);
            assert!((mix - d.p_total[i]).abs() < 1e-12 * mix.max(1.0));
        }
    }

    #[test]
    fn single_sector_is_mp() {
        let d = diagonal_density(&ConstraintSpec::unconstrained(), &Grid::Chebyshev(100)).unwrap();
        for (e, p) in d.eps_grid.iter().zip(&d.p_total) {
            assert!((p - mp_density(*e)).abs() < 1e-12);
        }
        // F(x) = (2/pi)(u + sin u cos u), u = asin(sqrt(x)/2)
        let exact = 0.5 + 1.0 / std::f64::consts::PI;
        assert!((d.cdf_at(2.0) - exact).abs() < 1e-9);
    }

    #[test]
    fn diagonal_requires_diagonal_c() {
        let spec = asymptotic_spec(ModelKind::Blockaded { phi: 2.0 }).unwrap();
        assert!(matches!(diagonal_density(&spec, &Grid::Chebyshev(10)), Err(Error::Validation(_))));
    }

    #[test]
    fn unbalanced_sectors_carry_delta() {
        let spec = asymptotic_spec(ModelKind::DiagonalSz { sites: 4, up_spins: 2 }).unwrap();
        let d = diagonal_density(&spec, &Grid::Chebyshev(100)).unwrap();
        assert!(d.delta_mass_at_zero > 0.0);
        assert!((d.integrate_continuous(|_| 1.0) + d.delta_mass_at_zero - 1.0).abs() < 1e-7);
        assert!((d.integrate_continuous(|e| e) - 1.0).abs() < 1e-7);
        assert!(d.small_eps_exponent().is_none() || d.small_eps_exponent() == Some(-0.5));
    }

    #[test]
    fn rank_fraction() {
        let g = asymptotic_spec(ModelKind::Blockaded { phi: 0.5 }).unwrap();
        assert!((1.0 - generic_rank_fraction(&g) - 1.0 / 3.0).abs() < 1e-12);
        let g = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
        assert_eq!(generic_rank_fraction(&g), 1.0);
        let u = asymptotic_spec(ModelKind::Unbalanced { lambda: 2.0 }).unwrap();
        assert!((generic_rank_fraction(&u) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_weights_integrate_mp() {
        let (pts, w) = grid_points(&Grid::Chebyshev(10_000), 0.0, 4.0).unwrap();
        let mass: f64 = pts.iter().zip(&w).map(|(e, w)| mp_density(*e) * w).sum();
        assert!((mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn point_mass() {
        let d = SpectralDensity::point_mass(1.0).unwrap();
        assert_eq!(d.integrate_continuous(|e| e * e.ln()), 0.0);
        assert_eq!(d.cdf_at(0.5), 0.0);
        assert_eq!(d.cdf_at(1.0), 1.0);
    }
}
