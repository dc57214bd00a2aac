//! Browser bindings for the interactive demo page in `www/`.

use pdebin::edge::edge_map;
use pdebin::fractional::gl_coefficients;
use pdebin::io::from_rgba8;
use pdebin::metrics::{drd, evaluate_pair};
use pdebin::preprocess::{attenuate, AttenuationMode};
use pdebin::synth::{synthetic_document, SynthConfig};
use pdebin::{run_pipeline, BinaryMap, RunConfig, ScalarField};
use wasm_bindgen::prelude::*;

fn gray_to_rgba(values: impl Iterator<Item = u8>) -> Vec<u8> {
    values.flat_map(|v| [v, v, v, 255]).collect()
}

fn field_rgba(f: &ScalarField) -> Vec<u8> {
    gray_to_rgba(f.data().iter().map(|&v| pdebin::io::quantize(v)))
}

fn binary_rgba(b: &BinaryMap) -> Vec<u8> {
    gray_to_rgba(b.data().iter().map(|&v| v * 255))
}

/// One document page plus the outcome of the last binarization.
#[wasm_bindgen]
pub struct Demo {
    image: ScalarField,
    truth: Option<BinaryMap>,
    iterations: usize,
    converged: bool,
    fm: f64,
    drd: f64,
}

#[wasm_bindgen]
impl Demo {
    /// A synthetic stained page with a known clean mask.
    #[wasm_bindgen(constructor)]
    pub fn new(width: u32, height: u32, seed: u32, stain: f64, noise: f64) -> Result<Demo, String> {
        let doc = synthetic_document(&SynthConfig {
            width: width as usize,
            height: height as usize,
            seed: seed as u64,
            stain_amplitude: stain,
            noise_sigma: noise,
            ..SynthConfig::default()
        })
        .map_err(|e| e.to_string())?;
        Ok(Demo::with(doc.image, Some(doc.ground_truth)))
    }

    /// A user image taken from canvas RGBA pixels; no ground truth.
    pub fn from_rgba(width: u32, height: u32, rgba: &[u8]) -> Result<Demo, String> {
        let image = from_rgba8(width as usize, height as usize, rgba).map_err(|e| e.to_string())?;
        Ok(Demo::with(image, None))
    }

    fn with(image: ScalarField, truth: Option<BinaryMap>) -> Demo {
        Demo {
            image,
            truth,
            iterations: 0,
            converged: false,
            fm: f64::NAN,
            drd: f64::NAN,
        }
    }

    pub fn width(&self) -> u32 {
        self.image.width() as u32
    }

    pub fn height(&self) -> u32 {
        self.image.height() as u32
    }

    pub fn input_rgba(&self) -> Vec<u8> {
        field_rgba(&self.image)
    }

    pub fn has_truth(&self) -> bool {
        self.truth.is_some()
    }

    /// Full pipeline; returns the binary result as RGBA. Scores against the
    /// clean mask are available afterwards when the page is synthetic.
    pub fn binarize(
        &mut self,
        cs: f64,
        ce: f64,
        cd: f64,
        alpha: f64,
        nonlinear: bool,
        iters: u32,
    ) -> Result<Vec<u8>, String> {
        let mut cfg = RunConfig::default();
        cfg.pde.cs = cs;
        cfg.pde.ce = ce;
        cfg.pde.cd = cd;
        cfg.pde.alpha = alpha;
        cfg.pde.max_iters = iters.max(1) as usize;
        cfg.attenuation.mode = if nonlinear {
            AttenuationMode::Nonlinear
        } else {
            AttenuationMode::Linear
        };
        let out = run_pipeline(&self.image, &cfg).map_err(|e| e.to_string())?;
        self.iterations = out.evolution.iterations;
        self.converged = out.evolution.converged;
        (self.fm, self.drd) = match &self.truth {
            Some(t) => {
                let row = evaluate_pair("demo", &out.binary, t).map_err(|e| e.to_string())?;
                (row.fm, row.drd)
            }
            None => (f64::NAN, f64::NAN),
        };
        Ok(binary_rgba(&out.binary))
    }

    pub fn last_iterations(&self) -> u32 {
        self.iterations as u32
    }

    pub fn last_converged(&self) -> bool {
        self.converged
    }

    /// NaN without ground truth.
    pub fn last_fm(&self) -> f64 {
        self.fm
    }

    /// NaN without ground truth.
    pub fn last_drd(&self) -> f64 {
        self.drd
    }

    /// Combined edge map of the attenuated page, as RGBA.
    pub fn edge_map(&self, mix: f64, radius: u32, nonlinear: bool) -> Result<Vec<u8>, String> {
        let mut cfg = RunConfig::default();
        cfg.edge.mix = mix;
        cfg.contrast.radius = radius as usize;
        if !nonlinear {
            cfg.attenuation.mode = AttenuationMode::Linear;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        let pre = attenuate(&self.image, &cfg.attenuation).map_err(|e| e.to_string())?;
        let e = edge_map(&pre, &cfg.contrast, &cfg.edge).map_err(|e| e.to_string())?;
        Ok(field_rgba(&e))
    }

    /// DRD of the clean mask against itself shifted right by `dx` pixels;
    /// shows how the measure grows with displacement.
    pub fn shifted_truth_drd(&self, dx: u32) -> Result<f64, String> {
        let t = self.truth.as_ref().ok_or("no ground truth for this page")?;
        let dx = dx as usize;
        let shifted = BinaryMap::from_fn(t.width(), t.height(), |x, y| x >= dx && t.is_text(x - dx, y));
        drd(&shifted, t).map_err(|e| e.to_string())
    }
}

/// Grünwald-Letnikov weights `w_0..=w_depth` for order `alpha`.
#[wasm_bindgen]
pub fn gl_weights(alpha: f64, depth: u32) -> Result<Vec<f64>, String> {
    gl_coefficients(alpha, depth as usize)
        .map(|c| c.weights)
        .map_err(|e| e.to_string())
}
