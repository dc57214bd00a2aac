//! Global (Otsu) and local (Sauvola) thresholds: the provisional target of
//! the source term and the final read-out of the evolved field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid, ScalarField};

const BINS: usize = 256;

#[inline]
fn bin_of(v: f64) -> usize {
    ((v * 255.0 + 0.5).floor() as usize).min(BINS - 1)
}

/// Otsu threshold over a 256-bin histogram (bin `i` centred at `i/255`).
///
/// Candidate `k` splits bins `< k` from bins `>= k` and yields threshold
/// `k/255`, so pixels strictly below it fall in the lower class. Ties go to
/// the lowest `k`. A field occupying a single bin returns its mean (the
/// constant itself for a constant field).
pub fn otsu_threshold(u: &ScalarField) -> f64 {
    let mut hist = [0u64; BINS];
    for &v in u.data() {
        hist[bin_of(v)] += 1;
    }
    if hist.iter().filter(|&&c| c > 0).count() <= 1 {
        return u.mean();
    }

    let total = u.len() as f64;
    let total_sum: f64 = hist.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    let mut below_count = 0.0;
    let mut below_sum = 0.0;
    let mut best_k = 1;
    let mut best_var = f64::NEG_INFINITY;
    for k in 1..BINS {
        below_count += hist[k - 1] as f64;
        below_sum += (k - 1) as f64 * hist[k - 1] as f64;
        let above_count = total - below_count;
        if below_count == 0.0 || above_count == 0.0 {
            continue;
        }
        let mean_below = below_sum / below_count;
        let mean_above = (total_sum - below_sum) / above_count;
        let var = below_count * above_count * (mean_below - mean_above).powi(2);
        if var > best_var {
            best_var = var;
            best_k = k;
        }
    }
    best_k as f64 / 255.0
}

/// True when every sample of `u` lands in one histogram bin.
pub fn is_flat(u: &ScalarField) -> bool {
    let first = bin_of(u.data()[0]);
    u.data().iter().all(|&v| bin_of(v) == first)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SauvolaConfig {
    pub radius: usize,
    /// Sensitivity `k`.
    pub k: f64,
    /// Dynamic range of the standard deviation.
    pub range: f64,
}

impl Default for SauvolaConfig {
    fn default() -> Self {
        SauvolaConfig {
            radius: 12,
            k: 0.3,
            range: 0.5,
        }
    }
}

/// Summed-area tables of `v` and `v^2` over the replicate-padded field.
struct WindowStats {
    stride: usize,
    sum: Vec<f64>,
    sq: Vec<f64>,
    r: usize,
}

impl WindowStats {
    fn new(u: &ScalarField, r: usize) -> Self {
        let (w, h) = (u.width() + 2 * r, u.height() + 2 * r);
        let stride = w + 1;
        let mut sum = vec![0.0; stride * (h + 1)];
        let mut sq = vec![0.0; stride * (h + 1)];
        for y in 0..h {
            let (mut row, mut row_sq) = (0.0, 0.0);
            for x in 0..w {
                let v = u.sample(x as isize - r as isize, y as isize - r as isize);
                row += v;
                row_sq += v * v;
                let i = (y + 1) * stride + x + 1;
                sum[i] = sum[i - stride] + row;
                sq[i] = sq[i - stride] + row_sq;
            }
        }
        WindowStats { stride, sum, sq, r }
    }

    /// Mean and standard deviation of the window centred on `(x, y)`.
    fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let side = 2 * self.r + 1;
        let (x0, y0, x1, y1) = (x, y, x + side, y + side);
        let rect = |t: &[f64]| {
            t[y1 * self.stride + x1] - t[y0 * self.stride + x1] - t[y1 * self.stride + x0] + t[y0 * self.stride + x0]
        };
        let n = (side * side) as f64;
        let mean = rect(&self.sum) / n;
        let var = (rect(&self.sq) / n - mean * mean).max(0.0);
        (mean, var.sqrt())
    }
}

/// Sauvola threshold `T = m (1 + k (s/R - 1))`; text iff `u < T`.
pub fn sauvola_target(u: &ScalarField, cfg: &SauvolaConfig) -> Result<BinaryMap> {
    if cfg.radius == 0 {
        return Err(Error::Parameter("Sauvola window radius must be >= 1".into()));
    }
    if !(cfg.k > 0.0) || !(cfg.range > 0.0) {
        return Err(Error::Parameter(format!(
            "Sauvola needs k > 0 and range > 0, got k={}, R={}",
            cfg.k, cfg.range
        )));
    }
    let stats = WindowStats::new(u, cfg.radius);
    Ok(BinaryMap::from_fn(u.width(), u.height(), |x, y| {
        let (m, s) = stats.at(x, y);
        let t = m * (1.0 + cfg.k * (s / cfg.range - 1.0));
        u.get(x, y) < t
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Text iff `u < 0.5`.
    #[default]
    FixedHalf,
    /// Text iff `u < otsu_threshold(u)`; flat fields fall back to 0.5.
    Otsu,
}

pub fn threshold_final(u: &ScalarField, mode: ThresholdMode) -> BinaryMap {
    let t = match mode {
        ThresholdMode::FixedHalf => 0.5,
        ThresholdMode::Otsu if is_flat(u) => 0.5,
        ThresholdMode::Otsu => otsu_threshold(u),
    };
    BinaryMap::from_fn(u.width(), u.height(), |x, y| u.get(x, y) < t)
}

/// Fixed-threshold map of any real grid; used for loading binary images.
pub fn threshold_grid(g: &Grid<f64>, t: f64) -> BinaryMap {
    BinaryMap::from_fn(g.width(), g.height(), |x, y| g.get(x, y) < t)
}
