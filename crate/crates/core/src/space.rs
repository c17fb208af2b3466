//! Constrained Hilbert-space models.
//!
//! A bipartition of a constrained chain is described asymptotically by a
//! binary compatibility matrix `C` between the boundary sectors of the left
//! and right halves, together with the relative sector dimensions `d` and
//! `d'` (sector dimension divided by a reference scale `N`). Finite chains are
//! enumerated explicitly so that Monte Carlo sampling can realize the actual
//! configuration basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The golden mean, the relative sector dimension of the blockaded chain.
pub const GOLDEN: f64 = 1.618_033_988_749_895;

/// Largest half-chain length accepted by [`blockaded_chain_space`].
pub const MAX_CHAIN_SITES: usize = 30;

/// Sector labels are tracked in 128-bit masks by the diagram sums.
pub const MAX_SECTORS: usize = 128;

/// Asymptotic model of a bipartitioned constrained space.
///
/// Serialized as `{"name", "C", "d", "d_prime"}` with `C` given as a nested
/// array of 0/1 integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ConstraintSpec {
    name: String,
    #[serde(rename = "C")]
    c: Vec<Vec<u8>>,
    d: Vec<f64>,
    d_prime: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpec {
    name: String,
    #[serde(rename = "C")]
    c: Vec<Vec<u8>>,
    d: Vec<f64>,
    d_prime: Vec<f64>,
}

impl TryFrom<RawSpec> for ConstraintSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ConstraintSpec::new(raw.name, raw.c, raw.d, raw.d_prime)
    }
}

impl ConstraintSpec {
    /// Builds a spec, checking that `C` is a 0/1 matrix without empty rows or
    /// columns and that all relative dimensions are positive and finite.
    pub fn new(
        name: impl Into<String>,
        c: Vec<Vec<u8>>,
        d: Vec<f64>,
        d_prime: Vec<f64>,
    ) -> Result<Self> {
        let n_left = d.len();
        let n_right = d_prime.len();
        if n_left == 0 || n_right == 0 {
            return Err(Error::validation("constraint spec needs at least one sector per side"));
        }
        if n_left > MAX_SECTORS || n_right > MAX_SECTORS {
            return Err(Error::size(format!("at most {MAX_SECTORS} sectors per side")));
        }
        if c.len() != n_left || c.iter().any(|row| row.len() != n_right) {
            return Err(Error::validation(format!(
                "C must be {n_left} x {n_right} to match d and d_prime"
            )));
        }
        if c.iter().flatten().any(|&bit| bit > 1) {
            return Err(Error::validation("C entries must be 0 or 1"));
        }
        if let Some(l) = c.iter().position(|row| row.iter().all(|&bit| bit == 0)) {
            return Err(Error::validation(format!("C row {l} is all zero")));
        }
        if let Some(r) = (0..n_right).find(|&r| c.iter().all(|row| row[r] == 0)) {
            return Err(Error::validation(format!("C column {r} is all zero")));
        }
        for (label, dims) in [("d", &d), ("d_prime", &d_prime)] {
            if dims.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return Err(Error::validation(format!(
                    "{label} entries must be strictly positive and finite"
                )));
            }
        }
        Ok(ConstraintSpec { name: name.into(), c, d, d_prime })
    }

    /// `C = (1)`, `d = d' = (1)`.
    pub fn unconstrained() -> Self {
        ConstraintSpec {
            name: "unconstrained".into(),
            c: vec![vec![1]],
            d: vec![1.0],
            d_prime: vec![1.0],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_left(&self) -> usize {
        self.d.len()
    }

    pub fn n_right(&self) -> usize {
        self.d_prime.len()
    }

    pub fn allowed(&self, l: usize, r: usize) -> bool {
        self.c[l][r] == 1
    }

    pub fn constraint_matrix(&self) -> &[Vec<u8>] {
        &self.c
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn d_prime(&self) -> &[f64] {
        &self.d_prime
    }

    /// Returns a copy with both dimension vectors multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        ConstraintSpec::new(
            format!("{}*{factor}", self.name),
            self.c.clone(),
            self.d.iter().map(|x| x * factor).collect(),
            self.d_prime.iter().map(|x| x * factor).collect(),
        )
    }

    /// `Some(phi)` when this is the balanced blockaded model
    /// `C = [[1,1],[1,0]]`, `d = d' = (phi, 1)`.
    pub fn as_blockaded(&self) -> Option<f64> {
        let blockade = self.c == [vec![1, 1], vec![1, 0]];
        if !blockade || self.d.len() != 2 || self.d_prime.len() != 2 {
            return None;
        }
        let same = self.d.iter().zip(&self.d_prime).all(|(a, b)| close(*a, *b));
        (same && close(self.d[1], 1.0)).then_some(self.d[0])
    }

    /// `Some((d, d'))` for a single unconstrained sector pair.
    pub fn as_single_sector(&self) -> Option<(f64, f64)> {
        (self.c == [vec![1]]).then(|| (self.d[0], self.d_prime[0]))
    }

    /// For a diagonal constraint (exactly one allowed partner per sector,
    /// bijectively), returns the right partner of each left sector.
    pub fn diagonal_partners(&self) -> Option<Vec<usize>> {
        if self.n_left() != self.n_right() {
            return None;
        }
        let mut partners = Vec::with_capacity(self.n_left());
        let mut used = vec![false; self.n_right()];
        for row in &self.c {
            let mut allowed = row.iter().enumerate().filter(|(_, &bit)| bit == 1);
            let (r, _) = allowed.next()?;
            if allowed.next().is_some() || used[r] {
                return None;
            }
            used[r] = true;
            partners.push(r);
        }
        Some(partners)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Model families with a known `(C, d, d')` parameterization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    Unconstrained,
    /// A single sector pair with `d = lambda`, `d' = 1`.
    Unbalanced { lambda: f64 },
    Blockaded { phi: f64 },
    /// Blockaded constraint with the left dimensions scaled: `d = lambda d'`.
    BlockadedUnbalanced { phi: f64, lambda: f64 },
    /// Spin-1/2 chain of `2 * sites` spins with `up_spins` total up spins;
    /// sector `l` counts the up spins in the left half.
    DiagonalSz { sites: usize, up_spins: usize },
}

pub fn asymptotic_spec(kind: ModelKind) -> Result<ConstraintSpec> {
    let check = |label: &str, x: f64| {
        if x.is_finite() && x > 0.0 {
            Ok(())
        } else {
            Err(Error::validation(format!("{label} must be positive and finite, got {x}")))
        }
    };
    let blockade = vec![vec![1, 1], vec![1, 0]];
    match kind {
        ModelKind::Unconstrained => Ok(ConstraintSpec::unconstrained()),
        ModelKind::Unbalanced { lambda } => {
            check("lambda", lambda)?;
            ConstraintSpec::new(format!("unbalanced(lambda={lambda})"), vec![vec![1]], vec![lambda], vec![1.0])
        }
        ModelKind::Blockaded { phi } => {
            check("phi", phi)?;
            ConstraintSpec::new(format!("blockaded(phi={phi})"), blockade, vec![phi, 1.0], vec![phi, 1.0])
        }
        ModelKind::BlockadedUnbalanced { phi, lambda } => {
            check("phi", phi)?;
            check("lambda", lambda)?;
            ConstraintSpec::new(
                format!("blockaded_unbalanced(phi={phi},lambda={lambda})"),
                blockade,
                vec![lambda * phi, lambda],
                vec![phi, 1.0],
            )
        }
        ModelKind::DiagonalSz { sites, up_spins } => diagonal_sz(sites, up_spins),
    }
}

fn diagonal_sz(sites: usize, up_spins: usize) -> Result<ConstraintSpec> {
    if sites == 0 {
        return Err(Error::validation("diagonal_sz needs at least one site per half"));
    }
    let lo = up_spins.saturating_sub(sites);
    let hi = sites.min(up_spins);
    if lo > hi {
        return Err(Error::validation(format!(
            "no sector satisfies 0 <= M - l <= L for L = {sites}, M = {up_spins}"
        )));
    }
    let central = binomial(sites, sites / 2);
    let sectors: Vec<usize> = (lo..=hi).collect();
    let d = sectors.iter().map(|&l| binomial(sites, l) / central).collect();
    let d_prime = sectors.iter().map(|&l| binomial(sites, up_spins - l) / central).collect();
    let n = sectors.len();
    let c = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
    ConstraintSpec::new(format!("diagonal_sz(L={sites},M={up_spins})"), c, d, d_prime)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Normalization constants converting raw eigenvalues to the `epsilon` scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingConstants {
    /// `sum_lr C_lr d_l d'_r`, the mean trace per unit `N`.
    pub norm_per_n: f64,
    pub sum_d: f64,
    /// `sum_d / norm_per_n`; multiplies raw eigenvalues to give `epsilon`.
    pub eps_scale: f64,
}

pub fn scaling_constants(spec: &ConstraintSpec) -> ScalingConstants {
    let mut norm_per_n = 0.0;
    for (l, dl) in spec.d().iter().enumerate() {
        for (r, dr) in spec.d_prime().iter().enumerate() {
            if spec.allowed(l, r) {
                norm_per_n += dl * dr;
            }
        }
    }
    let sum_d: f64 = spec.d().iter().sum();
    ScalingConstants { norm_per_n, sum_d, eps_scale: sum_d / norm_per_n }
}

/// Explicitly enumerated bipartition of a finite constrained chain.
///
/// Configurations are bit-packed: bit `k` of a left state is site `k + 1`
/// (so the boundary site `L` is bit `L - 1`), bit `k` of a right state is site
/// `L + 1 + k` (boundary site is bit 0).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteConstrainedSpace {
    pub sites: usize,
    pub left_states: Vec<Vec<u32>>,
    pub right_states: Vec<Vec<u32>>,
    pub dims: Vec<usize>,
    pub dims_prime: Vec<usize>,
    pub n_ref: usize,
    #[serde(rename = "C")]
    pub allowed: Vec<Vec<u8>>,
}

impl FiniteConstrainedSpace {
    /// Relative dimensions `D / N_ref` as an asymptotic spec.
    pub fn relative_spec(&self) -> Result<ConstraintSpec> {
        let n = self.n_ref as f64;
        ConstraintSpec::new(
            format!("finite(L={})", self.sites),
            self.allowed.clone(),
            self.dims.iter().map(|&x| x as f64 / n).collect(),
            self.dims_prime.iter().map(|&x| x as f64 / n).collect(),
        )
    }

    /// Number of allowed global configurations, `sum_lr C_lr D_l D'_r`.
    pub fn allowed_pairs(&self) -> u64 {
        let mut total = 0u64;
        for (l, &dl) in self.dims.iter().enumerate() {
            for (r, &dr) in self.dims_prime.iter().enumerate() {
                if self.allowed[l][r] == 1 {
                    total += (dl * dr) as u64;
                }
            }
        }
        total
    }

    /// All left configurations with their sector, in enumeration order.
    pub fn left_configs(&self) -> Vec<(u32, usize)> {
        flatten_sectors(&self.left_states)
    }

    pub fn right_configs(&self) -> Vec<(u32, usize)> {
        flatten_sectors(&self.right_states)
    }
}

fn flatten_sectors(states: &[Vec<u32>]) -> Vec<(u32, usize)> {
    let mut all: Vec<(u32, usize)> = states
        .iter()
        .enumerate()
        .flat_map(|(s, configs)| configs.iter().map(move |&c| (c, s)))
        .collect();
    all.sort_unstable();
    all
}

/// Enumerates the half chains of a length-`2L` Rydberg-blockaded chain.
pub fn blockaded_chain_space(sites: usize) -> Result<FiniteConstrainedSpace> {
    if !(1..=MAX_CHAIN_SITES).contains(&sites) {
        return Err(Error::size(format!(
            "half-chain length must be in 1..={MAX_CHAIN_SITES}, got {sites}"
        )));
    }
    let configs = blockaded_strings(sites);
    let boundary = 1u32 << (sites - 1);
    let mut left_states = vec![Vec::new(), Vec::new()];
    let mut right_states = vec![Vec::new(), Vec::new()];
    for &c in &configs {
        left_states[usize::from(c & boundary != 0)].push(c);
        right_states[usize::from(c & 1 != 0)].push(c);
    }
    let dims: Vec<usize> = left_states.iter().map(Vec::len).collect();
    let dims_prime: Vec<usize> = right_states.iter().map(Vec::len).collect();
    Ok(FiniteConstrainedSpace {
        sites,
        n_ref: dims[1],
        left_states,
        right_states,
        dims,
        dims_prime,
        allowed: vec![vec![1, 1], vec![1, 0]],
    })
}

/// All `sites`-bit strings without two adjacent set bits, in increasing order.
fn blockaded_strings(sites: usize) -> Vec<u32> {
    // Strings of length k extend those of length k-1 by a 0, or those of
    // length k-2 by "01" at the top.
    let mut prev: Vec<u32> = vec![0];
    let mut cur: Vec<u32> = vec![0, 1];
    for k in 2..=sites {
        let top = 1u32 << (k - 1);
        let mut next = cur.clone();
        next.extend(prev.iter().map(|&c| c | top));
        prev = cur;
        cur = next;
    }
    cur
}
