//! Command-line front end.
//!
//! Every subcommand renders its results in memory as a list of [`Output`]
//! files. With `--out DIR` they are written next to a [`RunManifest`];
//! otherwise the primary output goes to stdout.

pub mod format;
pub mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::diagrams::{catalan, finite_moment_exact, normalized_moment, planar_moment, MAX_EXACT_ORDER};
use crate::entropy::{entropy_report, page_correction};
use crate::error::{Error, Result};
use crate::montecarlo::{
    empirical_cdf_distance, sample_spectrum, spectrum_moments, MomentEstimate, SampleConfig, DEFAULT_DIM_CAP,
    MAX_MOMENT_ORDER,
};
use crate::resolvent::{blockaded_density, classify_phase, density, Grid, Method, SolverOptions, SpectralDensity};
use crate::space::{
    asymptotic_spec, blockaded_chain_space, scaling_constants, ConstraintSpec, FiniteConstrainedSpace, ModelKind,
    GOLDEN,
};
use format::{csv_row, fmt_g, to_json};
pub use manifest::{Output, RunManifest, MANIFEST_FILE};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ENTSPEC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "entspec", version, about = "Entanglement spectra of random states in constrained Hilbert spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Sector dimensions and the constraint matrix of a model.
    Space(SpaceArgs),
    /// Entanglement density of states on a grid.
    Dos(DosArgs),
    /// Planar, exact finite-size and sampled trace moments.
    Moments(MomentsArgs),
    /// Average and infinite-temperature Renyi entropies and Page corrections.
    Entropy(EntropyArgs),
    /// Monte Carlo entanglement spectra of random states.
    Sample(SampleArgs),
    /// Phase diagram of the blockaded family.
    Scan(ScanArgs),
    /// Rerun a manifest and verify its output checksums.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Blockaded,
    Unconstrained,
    DiagonalSz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Closed,
    FixedPoint,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Closed => Method::Closed,
            MethodArg::FixedPoint => Method::FixedPoint,
        }
    }
}

/// Accepts a decimal or the literal `golden`.
pub fn parse_phi(s: &str) -> std::result::Result<f64, String> {
    if s.eq_ignore_ascii_case("golden") {
        return Ok(GOLDEN);
    }
    s.parse::<f64>().map_err(|e| format!("expected a number or `golden`: {e}"))
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelName::Blockaded)]
    pub model: ModelName,
    /// Blockaded sector ratio, a decimal or `golden` [default: golden unless --L is given]
    #[arg(long, value_parser = parse_phi)]
    pub phi: Option<f64>,
    /// Left/right dimension ratio d/d' (unconstrained or blockaded)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Half-chain length; selects the enumerated finite chain
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub sites: Option<usize>,
    /// Total number of up spins (diagonal-sz) [default: L]
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub up_spins: Option<usize>,
}

impl ModelArgs {
    fn reject(&self, flag: &str, present: bool) -> Result<()> {
        if present {
            Err(Error::validation(format!("--{flag} does not apply to --model {}", self.model_label())))
        } else {
            Ok(())
        }
    }

    fn model_label(&self) -> &'static str {
        match self.model {
            ModelName::Blockaded => "blockaded",
            ModelName::Unconstrained => "unconstrained",
            ModelName::DiagonalSz => "diagonal-sz",
        }
    }

    /// Checks flag combinations and fills in defaults.
    pub fn resolved(&self) -> Result<ModelArgs> {
        let mut out = self.clone();
        match self.model {
            ModelName::Blockaded => {
                self.reject("M", self.up_spins.is_some())?;
                if self.sites.is_some() {
                    self.reject("phi", self.phi.is_some())?;
                    self.reject("lambda", self.lambda.is_some())?;
                } else {
                    out.phi = Some(self.phi.unwrap_or(GOLDEN));
                }
            }
            ModelName::Unconstrained => {
                self.reject("phi", self.phi.is_some())?;
                self.reject("L", self.sites.is_some())?;
                self.reject("M", self.up_spins.is_some())?;
            }
            ModelName::DiagonalSz => {
                self.reject("phi", self.phi.is_some())?;
                self.reject("lambda", self.lambda.is_some())?;
                let sites = self.sites.ok_or_else(|| Error::validation("--model diagonal-sz requires --L"))?;
                out.up_spins = Some(self.up_spins.unwrap_or(sites));
            }
        }
        Ok(out)
    }

    /// The enumerated chain, when `--L` selects one for the blockaded model.
    pub fn finite_space(&self) -> Result<Option<FiniteConstrainedSpace>> {
        match (self.model, self.sites) {
            (ModelName::Blockaded, Some(sites)) => blockaded_chain_space(sites).map(Some),
            _ => Ok(None),
        }
    }

    /// Asymptotic spec; a finite chain is represented by its relative dims.
    pub fn spec(&self) -> Result<ConstraintSpec> {
        if let Some(space) = self.finite_space()? {
            return space.relative_spec();
        }
        match self.model {
            ModelName::Blockaded => {
                let phi = self.phi.unwrap_or(GOLDEN);
                match self.lambda {
                    Some(lambda) => asymptotic_spec(ModelKind::BlockadedUnbalanced { phi, lambda }),
                    None => asymptotic_spec(ModelKind::Blockaded { phi }),
                }
            }
            ModelName::Unconstrained => match self.lambda {
                Some(lambda) => asymptotic_spec(ModelKind::Unbalanced { lambda }),
                None => Ok(ConstraintSpec::unconstrained()),
            },
            ModelName::DiagonalSz => {
                let sites = self.sites.ok_or_else(|| Error::validation("--model diagonal-sz requires --L"))?;
                let up_spins = self.up_spins.unwrap_or(sites);
                asymptotic_spec(ModelKind::DiagonalSz { sites, up_spins })
            }
        }
    }

    /// Integer reference scale of an exactly enumerable model.
    fn exact_scale(&self) -> Result<Option<usize>> {
        if let Some(space) = self.finite_space()? {
            return Ok(Some(space.n_ref));
        }
        Ok(match (self.model, self.sites) {
            (ModelName::DiagonalSz, Some(sites)) => Some(crate::space::binomial(sites, sites / 2) as usize),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
pub struct OutArgs {
    /// Directory for output files and the run manifest [default: primary output to stdout]
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Smallest imaginary offset; the extrapolation also uses twice this value
    #[arg(long, default_value = "1e-6")]
    pub eta: f64,
    /// Fixed-point residual target
    #[arg(long, default_value = "1e-12")]
    pub tol: f64,
    /// Fixed-point iteration budget per evaluation point
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Initial mixing weight of the damped iteration
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions> {
        if !(self.eta > 0.0 && self.tol > 0.0 && self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::validation("need eta > 0, tol > 0 and 0 < damping <= 1"));
        }
        Ok(SolverOptions { tol: self.tol, max_iter: self.max_iter, damping: self.damping, eta: [self.eta, 2.0 * self.eta] })
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SpaceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DosArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of Chebyshev grid points over the support
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Highest moment order
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Half-chain length of the blockaded chain used for finite-size moments
    #[arg(long = "finite-L")]
    #[serde(rename = "finite_L")]
    pub finite_l: Option<usize>,
    /// Add exact finite-size moments from all Wick contractions (n <= 5)
    #[arg(long)]
    pub exact: bool,
    /// Add Monte Carlo estimates from this many samples
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// Reference scale of the Monte Carlo estimates
    #[arg(long = "N", default_value_t = 500)]
    #[serde(rename = "N")]
    pub n_scale: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Renyi indices, comma separated; 1 is von Neumann
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1.0, 2.0])]
    pub n: Vec<f64>,
    /// Number of Chebyshev grid points over the support
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Reference scale; sector dimensions are round(N d_l) [ignored with --L]
    #[arg(long = "N", default_value_t = 1000)]
    #[serde(rename = "N")]
    pub n_scale: usize,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram bins over [0, max epsilon]
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Upper bound on the total left and right dimensions
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub cap: usize,
    /// Report the sup distance to the analytic integrated density
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_phi, default_value_t = 0.5)]
    pub phi_min: f64,
    #[arg(long, value_parser = parse_phi, default_value_t = 2.0)]
    pub phi_max: f64,
    /// Number of equally spaced phi values, endpoints included
    #[arg(long, default_value_t = 16)]
    pub steps: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run
    pub manifest: PathBuf,
    /// Directory for the regenerated files [default: verify only]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Space(_) => "space",
            Command::Dos(_) => "dos",
            Command::Moments(_) => "moments",
            Command::Entropy(_) => "entropy",
            Command::Sample(_) => "sample",
            Command::Scan(_) => "scan",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Moments(a) if a.mc_samples.is_some() => Some(a.seed),
            Command::Sample(a) => Some(a.seed),
            _ => None,
        }
    }

    fn out_dir(&self) -> Option<&PathBuf> {
        match self {
            Command::Space(a) => a.out.out.as_ref(),
            Command::Dos(a) => a.out.out.as_ref(),
            Command::Moments(a) => a.out.out.as_ref(),
            Command::Entropy(a) => a.out.out.as_ref(),
            Command::Sample(a) => a.out.out.as_ref(),
            Command::Scan(a) => a.out.out.as_ref(),
            Command::Replay(a) => a.out.as_ref(),
        }
    }

    /// The command with every model default made explicit.
    pub fn resolved(&self) -> Result<Command> {
        let mut cmd = self.clone();
        match &mut cmd {
            Command::Space(a) => a.model = a.model.resolved()?,
            Command::Dos(a) => a.model = a.model.resolved()?,
            Command::Moments(a) => a.model = a.model.resolved()?,
            Command::Entropy(a) => a.model = a.model.resolved()?,
            Command::Sample(a) => a.model = a.model.resolved()?,
            Command::Scan(_) | Command::Replay(_) => {}
        }
        Ok(cmd)
    }

    /// Computes all outputs; the first is the primary one.
    pub fn render(&self) -> Result<Vec<Output>> {
        match self {
            Command::Space(a) => cmd_space(a),
            Command::Dos(a) => cmd_dos(a),
            Command::Moments(a) => cmd_moments(a),
            Command::Entropy(a) => cmd_entropy(a),
            Command::Sample(a) => cmd_sample(a),
            Command::Scan(a) => cmd_scan(a),
            Command::Replay(_) => Err(Error::validation("a manifest cannot replay another replay")),
        }
    }
}

/// Process exit status: 2 for convergence failures, 1 for every other error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence { .. } => 2,
        _ => 1,
    }
}

/// Runs a parsed command, writing files or the primary output to stdout.
pub fn run(command: &Command) -> Result<()> {
    if let Command::Replay(args) = command {
        return replay(args);
    }
    let resolved = command.resolved()?;
    let outputs = resolved.render()?;
    match command.out_dir() {
        Some(dir) => manifest::write_all(dir, &resolved, &outputs),
        None => {
            print!("{}", outputs[0].contents);
            Ok(())
        }
    }
}

fn replay(args: &ReplayArgs) -> Result<()> {
    let manifest = RunManifest::load(&args.manifest)?;
    let outputs = manifest.params.render()?;
    let bad = manifest.mismatches(&outputs);
    if let Some(dir) = &args.out {
        manifest::write_all(dir, &manifest.params, &outputs)?;
    }
    if !bad.is_empty() {
        return Err(Error::validation(format!("replay checksums differ for {}", bad.join(", "))));
    }
    println!("replayed {} outputs of `{}`: checksums match", outputs.len(), manifest.subcommand);
    Ok(())
}

#[derive(Serialize)]
struct SpaceReport {
    model: &'static str,
    spec: ConstraintSpec,
    #[serde(rename = "N")]
    n_ref: Option<usize>,
    #[serde(rename = "D")]
    dims: Option<Vec<usize>>,
    #[serde(rename = "D_prime")]
    dims_prime: Option<Vec<usize>>,
    allowed_pairs: Option<u64>,
    #[serde(rename = "norm_per_N")]
    norm_per_n: f64,
    eps_scale: f64,
}

fn cmd_space(a: &SpaceArgs) -> Result<Vec<Output>> {
    let spec = a.model.spec()?;
    let n_ref = a.model.exact_scale()?;
    let round = |x: &[f64], n: usize| x.iter().map(|v| (v * n as f64).round() as usize).collect::<Vec<_>>();
    let dims = n_ref.map(|n| round(spec.d(), n));
    let dims_prime = n_ref.map(|n| round(spec.d_prime(), n));
    let allowed_pairs = dims.as_ref().zip(dims_prime.as_ref()).map(|(d, dp)| {
        let mut total = 0u64;
        for (l, &dl) in d.iter().enumerate() {
            for (r, &dr) in dp.iter().enumerate() {
                if spec.allowed(l, r) {
                    total += (dl * dr) as u64;
                }
            }
        }
        total
    });
    let scale = scaling_constants(&spec);
    match a.format {
        Format::Json => {
            let report = SpaceReport {
                model: a.model.model_label(),
                spec,
                n_ref,
                dims,
                dims_prime,
                allowed_pairs,
                norm_per_n: scale.norm_per_n,
                eps_scale: scale.eps_scale,
            };
            Ok(vec![Output::new("space.json", to_json(&report)?)])
        }
        Format::Csv => {
            let mut csv = String::from("sector,D,D_prime,d,d_prime\n");
            for l in 0..spec.n_left().max(spec.n_right()) {
                let int = |v: &Option<Vec<usize>>| v.as_ref().and_then(|v| v.get(l)).map_or(String::new(), |x| x.to_string());
                let real = |v: &[f64]| v.get(l).map_or(String::new(), |&x| fmt_g(x));
                csv.push_str(&format!(
                    "{l},{},{},{},{}\n",
                    int(&dims),
                    int(&dims_prime),
                    real(spec.d()),
                    real(spec.d_prime())
                ));
            }
            Ok(vec![Output::new("space.csv", csv)])
        }
    }
}

fn build_density(spec: &ConstraintSpec, grid: usize, method: MethodArg, solver: &SolverArgs) -> Result<SpectralDensity> {
    if grid < 2 {
        return Err(Error::validation("--grid needs at least two points"));
    }
    density(spec, &Grid::Chebyshev(grid), method.into(), &solver.options()?)
}

#[derive(Serialize)]
struct DosSidecar<'a> {
    model: &'a ConstraintSpec,
    method: Method,
    delta_mass_at_zero: f64,
    sector_delta: &'a [f64],
    support: (f64, f64),
}

fn cmd_dos(a: &DosArgs) -> Result<Vec<Output>> {
    let spec = a.model.spec()?;
    let d = build_density(&spec, a.grid, a.method, &a.solver)?;
    if a.format == Format::Json {
        return Ok(vec![Output::new("dos.json", to_json(&d)?)]);
    }
    let mut csv = String::from("epsilon,p_total");
    for l in 0..d.p_sector.len() {
        csv.push_str(&format!(",p_sector_{l}"));
    }
    csv.push_str(",cdf\n");
    for (i, &eps) in d.eps_grid.iter().enumerate() {
        let mut row = vec![eps, d.p_total[i]];
        row.extend(d.p_sector.iter().map(|p| p[i]));
        row.push(d.cdf[i]);
        csv.push_str(&csv_row(&row));
    }
    let sidecar = DosSidecar {
        model: &d.model,
        method: d.method,
        delta_mass_at_zero: d.delta_mass_at_zero,
        sector_delta: &d.sector_delta,
        support: d.support,
    };
    Ok(vec![Output::new("dos.csv", csv), Output::new("dos.json", to_json(&sidecar)?)])
}

#[derive(Serialize)]
struct MomentsTable {
    n: Vec<usize>,
    m_n: Vec<f64>,
    mu_n: Vec<f64>,
    catalan: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    finite: Option<FiniteMoments>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<Vec<MomentEstimate>>,
}

#[derive(Serialize)]
struct FiniteMoments {
    #[serde(rename = "L")]
    sites: usize,
    #[serde(rename = "N")]
    n_ref: usize,
    #[serde(rename = "D")]
    dims: Vec<usize>,
    #[serde(rename = "D_prime")]
    dims_prime: Vec<usize>,
    /// `E[Tr rho^n] / N` from all Wick contractions.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<f64>>,
}

fn cmd_moments(a: &MomentsArgs) -> Result<Vec<Output>> {
    if a.n_max == 0 {
        return Err(Error::validation("--n-max must be at least 1"));
    }
    let spec = a.model.spec()?;
    let ns: Vec<usize> = (1..=a.n_max).collect();
    let m_n = ns.iter().map(|&n| planar_moment(&spec, n)).collect::<Result<Vec<_>>>()?;
    let mu_n = ns.iter().map(|&n| normalized_moment(&spec, n)).collect::<Result<Vec<_>>>()?;
    let space = a.finite_l.map(blockaded_chain_space).transpose()?;
    if a.exact && space.is_none() {
        return Err(Error::validation("--exact needs --finite-L"));
    }
    let finite = match &space {
        Some(space) => {
            let exact = if a.exact {
                if a.n_max > MAX_EXACT_ORDER {
                    return Err(Error::validation(format!("--exact supports --n-max up to {MAX_EXACT_ORDER}")));
                }
                let values = ns
                    .iter()
                    .map(|&n| {
                        finite_moment_exact(&space.dims, &space.dims_prime, &space.allowed, space.n_ref, n)
                            .map(|m| m / space.n_ref as f64)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(values)
            } else {
                None
            };
            Some(FiniteMoments {
                sites: space.sites,
                n_ref: space.n_ref,
                dims: space.dims.clone(),
                dims_prime: space.dims_prime.clone(),
                exact,
            })
        }
        None => None,
    };
    let monte_carlo = match a.mc_samples {
        Some(samples) => {
            if a.n_max > MAX_MOMENT_ORDER {
                return Err(Error::validation(format!("Monte Carlo moments support --n-max up to {MAX_MOMENT_ORDER}")));
            }
            let cfg = match &space {
                Some(space) => SampleConfig::finite(space.clone(), a.seed, samples),
                None => SampleConfig::new(spec.clone(), a.n_scale, a.seed, samples),
            };
            let spectrum = sample_spectrum(&cfg)?;
            Some(spectrum_moments(&spectrum, cfg.n, a.n_max))
        }
        None => None,
    };
    let table = MomentsTable { catalan: ns.iter().map(|&n| catalan(n)).collect(), n: ns, m_n, mu_n, finite, monte_carlo };
    Ok(vec![Output::new("moments.json", to_json(&table)?)])
}

fn cmd_entropy(a: &EntropyArgs) -> Result<Vec<Output>> {
    if a.n.is_empty() {
        return Err(Error::validation("--n needs at least one index"));
    }
    let spec = a.model.spec()?;
    let d = build_density(&spec, a.grid, a.method, &a.solver)?;
    let report = entropy_report(&spec, &d, &a.n)?;
    if a.format == Format::Json {
        return Ok(vec![Output::new("entropy.json", to_json(&report)?)]);
    }
    let mut csv = String::from("n,mu_n,S_avg_minus_lnN,S_inf_minus_lnN,delta_S\n");
    for i in 0..report.n_values.len() {
        csv.push_str(&csv_row(&[
            report.n_values[i],
            report.mu_n[i],
            report.s_avg_minus_ln_n[i],
            report.s_inf_minus_ln_n[i],
            report.delta_s[i],
        ]));
    }
    if let Some(asymptote) = report.asymptote {
        csv.push_str(&format!("inf,,,,{}\n", fmt_g(asymptote)));
    }
    Ok(vec![Output::new("entropy.csv", csv)])
}

#[derive(Serialize)]
struct SampleSummary {
    #[serde(rename = "N")]
    n_ref: usize,
    samples: usize,
    seed: u64,
    dim: usize,
    zero_fraction: f64,
    eps_max: f64,
    moments: Vec<MomentEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cdf_distance: Option<f64>,
}

/// Closed form where one exists, otherwise the fixed-point solution.
fn reference_density(spec: &ConstraintSpec) -> Result<SpectralDensity> {
    let grid = Grid::default();
    let opts = SolverOptions::default();
    if spec.as_blockaded().is_some() || spec.diagonal_partners().is_some() {
        density(spec, &grid, Method::Closed, &opts)
    } else {
        density(spec, &grid, Method::FixedPoint, &opts)
    }
}

fn cmd_sample(a: &SampleArgs) -> Result<Vec<Output>> {
    if a.bins == 0 {
        return Err(Error::validation("--bins must be positive"));
    }
    let spec = a.model.spec()?;
    let cfg = match a.model.finite_space()? {
        Some(space) => SampleConfig::finite(space, a.seed, a.samples),
        None => SampleConfig::new(spec.clone(), a.n_scale, a.seed, a.samples),
    }
    .with_cap(a.cap);
    let spectrum = sample_spectrum(&cfg)?;
    let eps_max = spectrum.eps_values.last().copied().unwrap_or(0.0);
    let width = if eps_max > 0.0 { eps_max / a.bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; a.bins];
    for &e in &spectrum.eps_values {
        counts[((e / width) as usize).min(a.bins - 1)] += 1;
    }
    let mut csv = String::from("epsilon_bin_lo,epsilon_bin_hi,count\n");
    for (i, c) in counts.iter().enumerate() {
        csv.push_str(&format!("{},{},{c}\n", fmt_g(i as f64 * width), fmt_g((i + 1) as f64 * width)));
    }
    let cdf_distance = if a.compare {
        Some(empirical_cdf_distance(&spectrum, &reference_density(&spec)?))
    } else {
        None
    };
    let summary = SampleSummary {
        n_ref: cfg.n,
        samples: a.samples,
        seed: a.seed,
        dim: spectrum.dim,
        zero_fraction: spectrum.zero_fraction,
        eps_max,
        moments: spectrum_moments(&spectrum, cfg.n, 4),
        cdf_distance,
    };
    Ok(vec![Output::new("sample.csv", csv), Output::new("sample.json", to_json(&summary)?)])
}

fn cmd_scan(a: &ScanArgs) -> Result<Vec<Output>> {
    if !(a.phi_min > 0.0 && a.phi_max >= a.phi_min && a.steps >= 1) || (a.steps == 1 && a.phi_max != a.phi_min) {
        return Err(Error::validation("need 0 < phi-min <= phi-max and steps >= 1 (steps = 1 only for a single phi)"));
    }
    let phis: Vec<f64> = (0..a.steps)
        .map(|i| if a.steps == 1 { a.phi_min } else { a.phi_min + (a.phi_max - a.phi_min) * i as f64 / (a.steps - 1) as f64 })
        .collect();
    let mut csv = String::from("phi,z_minus,z_plus,delta_mass,fitted_exponent,phase,delta_S1\n");
    for phi in phis {
        let report = classify_phase(phi)?;
        let spec = asymptotic_spec(ModelKind::Blockaded { phi })?;
        let d = blockaded_density(phi, &Grid::Chebyshev(16))?;
        let ds1 = page_correction(&spec, &d, 1.0)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_g(phi),
            fmt_g(report.z_minus),
            fmt_g(report.z_plus),
            fmt_g(report.delta_mass),
            fmt_g(report.fitted_exponent),
            report.phase.label(),
            fmt_g(ds1)
        ));
    }
    Ok(vec![Output::new("scan.csv", csv)])
}
