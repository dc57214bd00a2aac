//! Binarization quality metrics: F-measure, pseudo F-measure, PSNR, DRD and
//! NRM. Text (bit 0) is the positive class throughout; a ratio whose
//! denominator is zero counts as 0.

mod report;
pub mod thinning;

pub use report::{evaluate_batch, load_binary, DatasetSummary, MetricReport, MetricSummary, Skipped};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMap, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }
}

#[inline]
fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[inline]
fn harmonic_percent(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        100.0 * 2.0 * p * r / (p + r)
    }
}

pub fn confusion_counts(pred: &BinaryMap, truth: &BinaryMap) -> Result<ConfusionCounts> {
    pred.ensure_same_shape(truth, "prediction and ground truth differ in size")?;
    let mut c = ConfusionCounts::default();
    for (&b, &g) in pred.data().iter().zip(truth.data()) {
        match (b == BinaryMap::TEXT, g == BinaryMap::TEXT) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// F-measure in percent.
pub fn f_measure(c: &ConfusionCounts) -> f64 {
    harmonic_percent(c.precision(), c.recall())
}

/// Pseudo F-measure in percent: recall is measured on the Zhang-Suen
/// skeleton of the ground-truth text.
pub fn pseudo_f_measure(pred: &BinaryMap, truth: &BinaryMap) -> Result<f64> {
    let c = confusion_counts(pred, truth)?;
    let text = truth.map(|b| b == BinaryMap::TEXT);
    let skeleton = thinning::zhang_suen(&text);
    let (mut hit, mut total) = (0u64, 0u64);
    for (&s, &b) in skeleton.data().iter().zip(pred.data()) {
        if s {
            total += 1;
            if b == BinaryMap::TEXT {
                hit += 1;
            }
        }
    }
    Ok(harmonic_percent(c.precision(), ratio(hit, total)))
}

/// PSNR in dB with unit peak; identical maps give `f64::INFINITY`.
pub fn psnr(pred: &BinaryMap, truth: &BinaryMap) -> Result<f64> {
    pred.ensure_same_shape(truth, "prediction and ground truth differ in size")?;
    let diff = pred.data().iter().zip(truth.data()).filter(|(a, b)| a != b).count();
    if diff == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = diff as f64 / pred.len() as f64;
    Ok(10.0 * (1.0 / mse).log10())
}

/// Negative rate metric as a fraction in `[0, 1]`.
pub fn nrm(c: &ConfusionCounts) -> f64 {
    (ratio(c.fn_, c.fn_ + c.tp) + ratio(c.fp, c.fp + c.tn)) / 2.0
}

/// Normalized 5x5 reciprocal-distance weights (zero at the centre).
pub fn drd_weights() -> [[f64; 5]; 5] {
    let mut w = [[0.0; 5]; 5];
    let mut sum = 0.0;
    for (i, row) in w.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 2.0, j as f64 - 2.0);
            if di != 0.0 || dj != 0.0 {
                *v = 1.0 / (di * di + dj * dj).sqrt();
                sum += *v;
            }
        }
    }
    for row in w.iter_mut() {
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    w
}

/// Number of 8x8 ground-truth blocks (partial edge blocks included) that
/// contain both text and background.
pub fn non_uniform_blocks(truth: &Grid<u8>) -> usize {
    const B: usize = 8;
    let mut count = 0;
    for by in (0..truth.height()).step_by(B) {
        for bx in (0..truth.width()).step_by(B) {
            let first = truth.get(bx, by);
            let mixed = (by..(by + B).min(truth.height()))
                .any(|y| (bx..(bx + B).min(truth.width())).any(|x| truth.get(x, y) != first));
            if mixed {
                count += 1;
            }
        }
    }
    count
}

/// Distance reciprocal distortion.
pub fn drd(pred: &BinaryMap, truth: &BinaryMap) -> Result<f64> {
    pred.ensure_same_shape(truth, "prediction and ground truth differ in size")?;
    let w = drd_weights();
    let mut total = 0.0;
    let mut flipped = 0;
    for y in 0..pred.height() {
        for x in 0..pred.width() {
            let b = pred.get(x, y);
            if b == truth.get(x, y) {
                continue;
            }
            flipped += 1;
            for (i, row) in w.iter().enumerate() {
                for (j, &wij) in row.iter().enumerate() {
                    let g = truth.sample(x as isize + j as isize - 2, y as isize + i as isize - 2);
                    if g != b {
                        total += wij;
                    }
                }
            }
        }
    }
    if flipped == 0 {
        return Ok(0.0);
    }
    match non_uniform_blocks(truth) {
        0 => Err(Error::DegenerateGroundTruth { flipped }),
        nubn => Ok(total / nubn as f64),
    }
}

/// All five metrics for one prediction/ground-truth pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub image: String,
    pub fm: f64,
    pub fps: f64,
    #[serde(with = "psnr_repr")]
    pub psnr: f64,
    pub drd: f64,
    pub nrm: f64,
}

pub fn evaluate_pair(image: impl Into<String>, pred: &BinaryMap, truth: &BinaryMap) -> Result<MetricRow> {
    let c = confusion_counts(pred, truth)?;
    Ok(MetricRow {
        image: image.into(),
        fm: f_measure(&c),
        fps: pseudo_f_measure(pred, truth)?,
        psnr: psnr(pred, truth)?,
        drd: drd(pred, truth)?,
        nrm: nrm(&c),
    })
}

/// PSNR as a JSON number, or the string `"inf"` for identical maps.
pub(crate) mod psnr_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad PSNR value {s:?}"))),
        }
    }
}
