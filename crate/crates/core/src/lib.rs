//! Degraded-document binarization by a three-term evolution equation
//! (source, edge and diffusion terms), in integer and fractional order,
//! with the usual document-binarization quality measures.
//!
//! Typical use goes through [`pipeline::run_pipeline`] with a
//! [`config::RunConfig`]; the individual stages are public for
//! experimentation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binarize;
pub mod config;
pub mod edge;
pub mod error;
pub mod evolution;
pub mod fractional;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod preprocess;
pub mod synth;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use grid::{BinaryMap, Grid, RealGrid, ScalarField};
pub use pipeline::{run_pipeline, PipelineOutput};
