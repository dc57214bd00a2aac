//! Directory-level evaluation: pairs predictions with ground truths by file
//! stem and aggregates the per-image rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{evaluate_pair, psnr_repr, MetricRow};
use crate::binarize::threshold_grid;
use crate::error::{Error, Result};
use crate::io::{list_images, load_image};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub count: usize,
    pub fm: f64,
    pub fps: f64,
    #[serde(with = "psnr_repr")]
    pub psnr: f64,
    pub drd: f64,
    pub nrm: f64,
}

impl MetricSummary {
    /// Arithmetic means, summed in slice order.
    pub fn mean_of(rows: impl IntoIterator<Item = (f64, f64, f64, f64, f64)>) -> Self {
        let mut s = MetricSummary {
            count: 0,
            fm: 0.0,
            fps: 0.0,
            psnr: 0.0,
            drd: 0.0,
            nrm: 0.0,
        };
        for (fm, fps, psnr, drd, nrm) in rows {
            s.count += 1;
            s.fm += fm;
            s.fps += fps;
            s.psnr += psnr;
            s.drd += drd;
            s.nrm += nrm;
        }
        if s.count > 0 {
            let n = s.count as f64;
            s.fm /= n;
            s.fps /= n;
            s.psnr /= n;
            s.drd /= n;
            s.nrm /= n;
        }
        s
    }

    fn of_rows(rows: &[MetricRow]) -> Self {
        Self::mean_of(rows.iter().map(|r| (r.fm, r.fps, r.psnr, r.drd, r.nrm)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub dataset: String,
    pub mean: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub image: String,
    pub reason: String,
}

/// Per-image rows plus aggregates. `mean` is the grand per-image mean;
/// `mean_of_datasets` averages the per-dataset means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub rows: Vec<MetricRow>,
    pub mean: MetricSummary,
    pub datasets: Vec<DatasetSummary>,
    pub mean_of_datasets: MetricSummary,
    pub skipped: Vec<Skipped>,
}

fn dataset_of(image: &str) -> &str {
    image.rsplit_once('/').map_or(".", |(dir, _)| dir)
}

impl MetricReport {
    /// Sorts rows by image key and computes every aggregate.
    pub fn from_rows(mut rows: Vec<MetricRow>, skipped: Vec<Skipped>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("no prediction/ground-truth pairs to evaluate".into()));
        }
        rows.sort_by(|a, b| a.image.cmp(&b.image));
        let mut groups: BTreeMap<&str, Vec<MetricRow>> = BTreeMap::new();
        for r in &rows {
            groups.entry(dataset_of(&r.image)).or_default().push(r.clone());
        }
        let datasets: Vec<DatasetSummary> = groups
            .into_iter()
            .map(|(name, rs)| DatasetSummary {
                dataset: name.to_string(),
                mean: MetricSummary::of_rows(&rs),
            })
            .collect();
        let mut mean_of_datasets = MetricSummary::mean_of(
            datasets
                .iter()
                .map(|d| (d.mean.fm, d.mean.fps, d.mean.psnr, d.mean.drd, d.mean.nrm)),
        );
        mean_of_datasets.count = rows.len();
        Ok(MetricReport {
            mean: MetricSummary::of_rows(&rows),
            rows,
            datasets,
            mean_of_datasets,
            skipped,
        })
    }

    /// CSV with columns `image,fm,fps,psnr,drd,nrm`; the last row is the mean.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("image,fm,fps,psnr,drd,nrm\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.image, r.fm, r.fps, r.psnr, r.drd, r.nrm
            ));
        }
        let m = &self.mean;
        out.push_str(&format!("mean,{},{},{},{},{}\n", m.fm, m.fps, m.psnr, m.drd, m.nrm));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }

    /// Writes `<base>.csv` and `<base>.json`; a `.csv`/`.json` extension on
    /// `base` is replaced.
    pub fn write(&self, base: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
        let base = base.as_ref();
        let base = match base.extension().and_then(|e| e.to_str()) {
            Some("csv" | "json") => base.with_extension(""),
            _ => base.to_path_buf(),
        };
        let csv = with_suffix(&base, "csv");
        let json = with_suffix(&base, "json");
        if let Some(parent) = csv.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&csv, self.to_csv()).map_err(|e| Error::io(&csv, e))?;
        fs::write(&json, self.to_json()).map_err(|e| Error::io(&json, e))?;
        Ok((csv, json))
    }
}

fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn strip_gt_suffix(key: &str) -> &str {
    key.strip_suffix("_gt")
        .or_else(|| key.strip_suffix("_GT"))
        .unwrap_or(key)
}

/// Loads an image and reads it as a binary map (text iff below 0.5).
pub fn load_binary(path: impl AsRef<Path>) -> Result<crate::grid::BinaryMap> {
    Ok(threshold_grid(load_image(path)?.as_grid(), 0.5))
}

/// Pairs every prediction under `pred_dir` with the ground truth of the same
/// relative stem under `gt_dir` (a trailing `_gt`/`_GT` on the ground-truth
/// stem is ignored). Unpaired or unreadable files are listed in `skipped`.
pub fn evaluate_batch(pred_dir: impl AsRef<Path>, gt_dir: impl AsRef<Path>) -> Result<MetricReport> {
    let preds = list_images(pred_dir.as_ref())?;
    let mut truths: BTreeMap<String, PathBuf> = BTreeMap::new();
    for (key, path) in list_images(gt_dir.as_ref())? {
        truths.entry(strip_gt_suffix(&key).to_string()).or_insert(path);
    }

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for (key, pred_path) in &preds {
        let Some(gt_path) = truths.get(key) else {
            skipped.push(Skipped {
                image: key.clone(),
                reason: "no matching ground truth".into(),
            });
            continue;
        };
        used.insert(key.clone());
        let row = load_binary(pred_path)
            .and_then(|p| load_binary(gt_path).map(|g| (p, g)))
            .and_then(|(p, g)| evaluate_pair(key.clone(), &p, &g));
        match row {
            Ok(r) => rows.push(r),
            Err(e) => skipped.push(Skipped {
                image: key.clone(),
                reason: e.to_string(),
            }),
        }
    }
    for key in truths.keys().filter(|k| !used.contains(*k)) {
        skipped.push(Skipped {
            image: key.clone(),
            reason: "no matching prediction".into(),
        });
    }
    MetricReport::from_rows(rows, skipped)
}
