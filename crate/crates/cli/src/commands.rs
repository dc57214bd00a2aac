use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use pdebin::io::{list_images, load_image, save_image};
use pdebin::metrics::{evaluate_batch, evaluate_pair, load_binary, MetricReport, MetricRow};
use pdebin::{run_pipeline, RunConfig};
use rayon::prelude::*;

use crate::args::ParamArgs;

/// Bad invocation detected after argument parsing; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn single_values(params: &ParamArgs) -> Result<()> {
    if params.cs.len() > 1 || params.ce.len() > 1 {
        return Err(usage("--cs and --ce take a single value outside `sweep`"));
    }
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    Ok(())
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

pub fn binarize(input: Option<PathBuf>, out: Option<PathBuf>, params: &ParamArgs) -> Result<ExitCode> {
    single_values(params)?;
    let cfg = params.resolve()?;
    let Some(input) = input.or_else(|| cfg.input.clone()) else {
        return Err(usage("no input image given (positional INPUT or config `input`)"));
    };
    let Some(out) = out.or_else(|| cfg.output.clone()) else {
        return Err(usage("no output path given (--out or config `output`)"));
    };
    let image = load_image(&input)?;
    let result = run_pipeline(&image, &cfg)?;
    ensure_parent(&out)?;
    save_image(&result.binary, &out)?;
    println!("iterations: {}", result.evolution.iterations);
    println!("converged: {}", result.evolution.converged);
    Ok(ExitCode::SUCCESS)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "image".into(), |s| s.to_string_lossy().into_owned())
}

/// Output name, iterations, converged flag and optional scores.
type SweepRun = (String, usize, bool, Option<MetricRow>);

pub fn sweep(input: &Path, out: &Path, gt: Option<&Path>, params: &ParamArgs, jobs: usize) -> Result<ExitCode> {
    let base = params.resolve()?;
    let cs_list = if params.cs.is_empty() {
        vec![base.pde.cs]
    } else {
        params.cs.clone()
    };
    let ce_list = if params.ce.is_empty() {
        vec![base.pde.ce]
    } else {
        params.ce.clone()
    };
    let image = load_image(input)?;
    let truth = gt.map(load_binary).transpose()?;
    let stem = file_stem(input);
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let combos: Vec<(f64, f64)> = cs_list
        .iter()
        .flat_map(|&cs| ce_list.iter().map(move |&ce| (cs, ce)))
        .collect();
    let runs: Vec<Result<SweepRun>> = thread_pool(jobs)?.install(|| {
        combos
            .par_iter()
            .map(|&(cs, ce)| {
                let mut cfg: RunConfig = base.clone();
                cfg.pde.cs = cs;
                cfg.pde.ce = ce;
                cfg.validate()?;
                let name = format!("{stem}_cs{cs}_ce{ce}.png");
                let result = run_pipeline(&image, &cfg)?;
                save_image(&result.binary, out.join(&name))?;
                let row = truth
                    .as_ref()
                    .map(|t| evaluate_pair(name.clone(), &result.binary, t))
                    .transpose()?;
                Ok((name, result.evolution.iterations, result.evolution.converged, row))
            })
            .collect()
    });

    let mut csv = String::from("cs,ce,output,iterations,converged,fm,fps,psnr,drd,nrm\n");
    for (&(cs, ce), run) in combos.iter().zip(runs) {
        let (name, iterations, converged, row) = run.with_context(|| format!("cs={cs} ce={ce}"))?;
        println!("{name}: iterations {iterations}, converged {converged}");
        if let Some(r) = row {
            writeln!(
                csv,
                "{cs},{ce},{name},{iterations},{converged},{},{},{},{},{}",
                r.fm, r.fps, r.psnr, r.drd, r.nrm
            )?;
        }
    }
    if truth.is_some() {
        let path = out.join(format!("{stem}_sweep.csv"));
        fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

struct BatchEntry {
    image: String,
    outcome: std::result::Result<(usize, bool), String>,
}

pub fn batch(
    input: &Path,
    out: &Path,
    gt: Option<&Path>,
    report: Option<PathBuf>,
    params: &ParamArgs,
    jobs: usize,
) -> Result<ExitCode> {
    single_values(params)?;
    let cfg = params.resolve()?;
    if !input.is_dir() {
        bail!("{} is not a directory", input.display());
    }
    let images: Vec<(String, PathBuf)> = list_images(input)?.into_iter().collect();
    if images.is_empty() {
        eprintln!("warning: no PNG or PGM images in {}", input.display());
        return Ok(ExitCode::SUCCESS);
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let entries: Vec<BatchEntry> = thread_pool(jobs)?.install(|| {
        images
            .par_iter()
            .map(|(key, path)| {
                let target = out.join(format!("{key}.png"));
                let outcome = load_image(path)
                    .and_then(|img| run_pipeline(&img, &cfg))
                    .and_then(|r| {
                        if let Some(parent) = target.parent() {
                            fs::create_dir_all(parent).map_err(|e| pdebin::Error::Io {
                                path: parent.to_path_buf(),
                                source: e,
                            })?;
                        }
                        save_image(&r.binary, &target)?;
                        Ok((r.evolution.iterations, r.evolution.converged))
                    })
                    .map_err(|e| e.to_string());
                BatchEntry {
                    image: key.clone(),
                    outcome,
                }
            })
            .collect()
    });

    let mut csv = String::from("image,status,iterations,converged,error\n");
    let mut json = Vec::new();
    let mut failures = 0;
    for e in &entries {
        match &e.outcome {
            Ok((iterations, converged)) => {
                writeln!(csv, "{},ok,{iterations},{converged},", e.image)?;
                json.push(serde_json::json!({
                    "image": e.image, "status": "ok", "iterations": iterations, "converged": converged,
                }));
            }
            Err(msg) => {
                failures += 1;
                eprintln!("error: {}: {msg}", e.image);
                writeln!(csv, "{},failed,,,\"{}\"", e.image, msg.replace('"', "\"\""))?;
                json.push(serde_json::json!({ "image": e.image, "status": "failed", "error": msg }));
            }
        }
    }
    let summary = serde_json::json!({
        "processed": entries.len() - failures,
        "failed": failures,
        "images": json,
    });
    fs::write(out.join("summary.csv"), csv)?;
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    println!("{} processed, {failures} failed", entries.len() - failures);

    if let Some(gt) = gt {
        let metrics = evaluate_batch(out, gt)?;
        write_report(&metrics, &report.unwrap_or_else(|| out.join("report")))?;
    }
    Ok(if failures > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn write_report(report: &MetricReport, base: &Path) -> Result<()> {
    for s in &report.skipped {
        eprintln!("warning: skipped {}: {}", s.image, s.reason);
    }
    let (csv, json) = report.write(base)?;
    println!("wrote {} and {}", csv.display(), json.display());
    let m = &report.mean;
    println!(
        "mean over {} images: fm {:.2}, fps {:.2}, psnr {:.2}, drd {:.3}, nrm {:.4}",
        m.count, m.fm, m.fps, m.psnr, m.drd, m.nrm
    );
    Ok(())
}

pub fn evaluate(pred: &Path, gt: &Path, report: &Path) -> Result<ExitCode> {
    let metrics = evaluate_batch(pred, gt)?;
    write_report(&metrics, report)?;
    Ok(ExitCode::SUCCESS)
}
