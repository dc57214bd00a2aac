//! Seeded synthetic stained documents with a known clean mask.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    /// Peak darkening of the stain blob.
    pub stain_amplitude: f64,
    /// Standard deviation of additive Gaussian noise.
    pub noise_sigma: f64,
    /// Stroke thickness in pixels.
    pub stroke: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            width: 256,
            height: 256,
            seed: 0,
            stain_amplitude: 0.4,
            noise_sigma: 0.05,
            stroke: 3.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticDocument {
    pub image: ScalarField,
    pub ground_truth: BinaryMap,
}

/// Anchor points of a glyph cell on a 3x3 lattice, as fractions of the cell.
const ANCHORS: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.5, 0.0),
    (1.0, 0.0),
    (0.0, 0.5),
    (0.5, 0.5),
    (1.0, 0.5),
    (0.0, 1.0),
    (0.5, 1.0),
    (1.0, 1.0),
];

type Segment = ((f64, f64), (f64, f64));

fn segment_distance(px: f64, py: f64, ((ax, ay), (bx, by)): Segment) -> f64 {
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (ax + t * dx, ay + t * dy);
    ((px - cx).powi(2) + (py - cy).powi(2)).sqrt()
}

fn glyph_segments(rng: &mut ChaCha8Rng, x0: f64, y0: f64, w: f64, h: f64) -> Vec<Segment> {
    let strokes = rng.random_range(2..=4);
    (0..strokes)
        .map(|_| {
            let a = rng.random_range(0..ANCHORS.len());
            let mut b = rng.random_range(0..ANCHORS.len() - 1);
            if b >= a {
                b += 1;
            }
            let at = |i: usize| (x0 + ANCHORS[i].0 * w, y0 + ANCHORS[i].1 * h);
            (at(a), at(b))
        })
        .collect()
}

/// Lines of random stroke glyphs in black ink on a white page darkened by
/// one Gaussian stain and perturbed by Gaussian noise. The same config
/// always yields the same document.
pub fn synthetic_document(cfg: &SynthConfig) -> Result<SyntheticDocument> {
    let SynthConfig {
        width,
        height,
        seed,
        stain_amplitude,
        noise_sigma,
        stroke,
    } = *cfg;
    if width < 16 || height < 16 {
        return Err(Error::Parameter(format!(
            "synthetic page must be at least 16x16, got {width}x{height}"
        )));
    }
    if !(0.0..=1.0).contains(&stain_amplitude) || !(noise_sigma >= 0.0) || !(stroke > 0.0) {
        return Err(Error::Parameter(
            "stain amplitude must lie in [0, 1]; noise and stroke must be non-negative".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let glyph_w = 12.0;
    let glyph_h = 16.0;
    let advance = 18.0;
    let line_pitch = 32.0;
    let margin = (width.min(height) as f64 / 16.0).clamp(2.0, 10.0);
    let mut segments = Vec::new();
    let mut y = margin;
    while y + glyph_h + margin <= height as f64 {
        let mut x = margin;
        while x + glyph_w + margin <= width as f64 {
            if rng.random_bool(0.85) {
                segments.extend(glyph_segments(&mut rng, x, y, glyph_w, glyph_h));
            }
            x += advance;
        }
        y += line_pitch;
    }
    let half = stroke / 2.0;
    let ink = Grid::from_fn(width, height, |x, y| {
        let (px, py) = (x as f64, y as f64);
        segments.iter().any(|&s| segment_distance(px, py, s) <= half)
    });

    let cx = rng.random_range(0.25..0.75) * width as f64;
    let cy = rng.random_range(0.25..0.75) * height as f64;
    let sigma = 0.25 * width.min(height) as f64;
    let noise = Normal::new(0.0, noise_sigma).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut samples = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let r2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
            let page = 1.0 - stain_amplitude * (-r2 / (2.0 * sigma * sigma)).exp();
            let clean = if ink.get(x, y) { 0.0 } else { page };
            samples.push((clean + noise.sample(&mut rng)).clamp(0.0, 1.0));
        }
    }
    Ok(SyntheticDocument {
        image: ScalarField::new(width, height, samples)?,
        ground_truth: BinaryMap::from_fn(width, height, |x, y| ink.get(x, y)),
    })
}
