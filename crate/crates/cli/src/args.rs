use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdebin::binarize::ThresholdMode;
use pdebin::preprocess::{AttenuationMode, Midpoint};
use pdebin::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "pdebin",
    version,
    about = "Binarize degraded document images with a three-term evolution equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binarize one image and write the binary PNG.
    Binarize {
        /// Input image (PNG or binary PGM); falls back to the config's `input`.
        input: Option<PathBuf>,
        /// Output path; falls back to the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Binarize one image for every (cs, ce) combination.
    Sweep {
        input: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Ground truth for the per-combination metrics CSV.
        #[arg(long)]
        gt: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        jobs: JobArgs,
    },
    /// Binarize every image in a directory.
    Batch {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth directory; when given, the outputs are evaluated.
        #[arg(long)]
        gt: Option<PathBuf>,
        /// Report base path (default `<out>/report`).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        jobs: JobArgs,
    },
    /// Score a directory of binary predictions against ground truths.
    Evaluate {
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        /// Report base path; `.csv` and `.json` are written next to each other.
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct JobArgs {
    /// Worker threads (0 = one per core).
    #[arg(long, env = "PDEBIN_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttenuationArg {
    Linear,
    Nonlinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThresholdArg {
    Fixed,
    Otsu,
}

/// Overrides applied on top of the config file (or the defaults).
#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Source coefficient; a comma list is accepted by `sweep`.
    #[arg(long, value_delimiter = ',')]
    pub cs: Vec<f64>,
    /// Edge coefficient; a comma list is accepted by `sweep`.
    #[arg(long, value_delimiter = ',')]
    pub ce: Vec<f64>,
    #[arg(long)]
    pub cd: Option<f64>,
    /// Fractional order in (0, 1]; 1 selects the integer-order scheme.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Iteration cap.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub k_pm: Option<f64>,
    /// Time-history depth of the fractional scheme.
    #[arg(long)]
    pub memory: Option<usize>,
    /// Spatial tap count of the fractional differences.
    #[arg(long)]
    pub taps: Option<usize>,
    #[arg(long, value_enum)]
    pub attenuation: Option<AttenuationArg>,
    #[arg(long)]
    pub gain: Option<f64>,
    #[arg(long)]
    pub bias: Option<f64>,
    #[arg(long)]
    pub slope: Option<f64>,
    /// Sigmoid midpoint: a number in [0, 1] or `auto`.
    #[arg(long)]
    pub midpoint: Option<Midpoint>,
    #[arg(long)]
    pub contrast_radius: Option<usize>,
    #[arg(long)]
    pub edge_mix: Option<f64>,
    #[arg(long)]
    pub sauvola_radius: Option<usize>,
    #[arg(long)]
    pub sauvola_k: Option<f64>,
    #[arg(long, value_enum)]
    pub threshold: Option<ThresholdArg>,
}

impl ParamArgs {
    /// The config file (if any) with every given flag applied. `cs`/`ce`
    /// take the first listed value.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let pde = &mut cfg.pde;
        set(&mut pde.cs, self.cs.first().copied());
        set(&mut pde.ce, self.ce.first().copied());
        set(&mut pde.cd, self.cd);
        set(&mut pde.alpha, self.alpha);
        set(&mut pde.dt, self.dt);
        set(&mut pde.max_iters, self.iters);
        set(&mut pde.tol, self.tol);
        set(&mut pde.k_pm, self.k_pm);
        set(&mut pde.memory, self.memory);
        set(&mut pde.taps, self.taps);
        let att = &mut cfg.attenuation;
        set(
            &mut att.mode,
            self.attenuation.map(|a| match a {
                AttenuationArg::Linear => AttenuationMode::Linear,
                AttenuationArg::Nonlinear => AttenuationMode::Nonlinear,
            }),
        );
        set(&mut att.gain, self.gain);
        set(&mut att.bias, self.bias);
        set(&mut att.slope, self.slope);
        set(&mut att.midpoint, self.midpoint);
        set(&mut cfg.contrast.radius, self.contrast_radius);
        set(&mut cfg.edge.mix, self.edge_mix);
        set(&mut cfg.sauvola.radius, self.sauvola_radius);
        set(&mut cfg.sauvola.k, self.sauvola_k);
        set(
            &mut cfg.threshold,
            self.threshold.map(|t| match t {
                ThresholdArg::Fixed => ThresholdMode::FixedHalf,
                ThresholdArg::Otsu => ThresholdMode::Otsu,
            }),
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
