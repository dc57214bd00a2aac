//! End-to-end binarization of one image.

use crate::binarize::{sauvola_target, threshold_final, threshold_grid};
use crate::config::RunConfig;
use crate::edge::edge_map;
use crate::error::Result;
use crate::evolution::{run_evolution, EvolutionResult};
use crate::grid::{BinaryMap, ScalarField};
use crate::preprocess::attenuate;

/// Inputs with a global range below one gray level have no usable contrast.
pub const FLAT_RANGE: f64 = 1.0 / 255.0;

/// Every intermediate of a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub preprocessed: ScalarField,
    pub edges: ScalarField,
    pub target: BinaryMap,
    pub evolution: EvolutionResult,
    pub binary: BinaryMap,
}

/// Provisional binary target for the source term. Flat inputs are split at
/// one half instead.
pub fn provisional_target(input: &ScalarField, preprocessed: &ScalarField, cfg: &RunConfig) -> Result<BinaryMap> {
    let (lo, hi) = input.min_max();
    if hi - lo < FLAT_RANGE {
        return Ok(threshold_grid(input.as_grid(), 0.5));
    }
    sauvola_target(preprocessed, &cfg.sauvola)
}

/// Attenuation, edge detection, provisional target, evolution and final
/// thresholding, in that order.
pub fn run_pipeline(input: &ScalarField, cfg: &RunConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let preprocessed = attenuate(input, &cfg.attenuation)?;
    let edges = edge_map(&preprocessed, &cfg.contrast, &cfg.edge)?;
    let target = provisional_target(input, &preprocessed, cfg)?;
    let evolution = run_evolution(&preprocessed, &cfg.pde, &edges, &target)?;
    let binary = threshold_final(&evolution.field, cfg.threshold);
    Ok(PipelineOutput {
        preprocessed,
        edges,
        target,
        evolution,
        binary,
    })
}
