#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pdebin::io::save_image;
use pdebin::metrics::load_binary;
use pdebin::synth::{synthetic_document, SynthConfig};
use pdebin::{BinaryMap, ScalarField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pdebin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdebin"))
        .args(args)
        .env_remove("PDEBIN_JOBS")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_doc(dir: &Path, name: &str, seed: u64) -> BinaryMap {
    let doc = synthetic_document(&SynthConfig {
        width: 64,
        height: 48,
        seed,
        ..SynthConfig::default()
    })
    .unwrap();
    save_image(&doc.image, dir.join(name)).unwrap();
    doc.ground_truth
}

#[test]
fn binarize_writes_png_and_reports_iterations() {
    let dir = tempfile::tempdir().unwrap();
    small_doc(dir.path(), "page.png", 1);
    let out = dir.path().join("nested/out.png");
    let o = pdebin(&[
        "binarize",
        p(&dir.path().join("page.png")),
        "--out",
        p(&out),
        "--cs",
        "2.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(
        stdout.contains("iterations: ") && stdout.contains("converged: "),
        "{stdout}"
    );
    assert_eq!(&fs::read(&out).unwrap()[..4], b"\x89PNG");
}

#[test]
fn constant_pages_binarize_trivially() {
    let dir = tempfile::tempdir().unwrap();
    for (name, value, text) in [("white.png", 1.0, 0), ("black.png", 0.0, 30 * 20)] {
        save_image(&ScalarField::constant(30, 20, value).unwrap(), dir.path().join(name)).unwrap();
        let out = dir.path().join(format!("out_{name}"));
        let o = pdebin(&["binarize", p(&dir.path().join(name)), "--out", p(&out)]);
        assert!(o.status.success());
        assert_eq!(load_binary(&out).unwrap().text_count(), text);
    }
}

#[test]
fn config_file_supplies_paths_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    small_doc(dir.path(), "page.pgm", 2);
    let cfg = dir.path().join("run.json");
    let from_config = dir.path().join("cfg.png");
    fs::write(
        &cfg,
        format!(
            r#"{{"pde": {{"cs": 2.5, "max_iters": 2}}, "input": "{}", "output": "{}"}}"#,
            p(&dir.path().join("page.pgm")),
            p(&from_config)
        ),
    )
    .unwrap();
    let o = pdebin(&["binarize", "--config", p(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("iterations: 2"));
    assert!(from_config.exists());

    let o = pdebin(&["binarize", "--config", p(&cfg), "--iters", "1"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("iterations: 1"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    small_doc(dir.path(), "page.png", 3);
    let input = dir.path().join("page.png");
    let out = dir.path().join("o.png");
    assert_eq!(
        pdebin(&["binarize", p(&input), "--out", p(&out), "--cs", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pdebin(&["binarize", p(&input)]).status.code(), Some(2));
    assert_eq!(
        pdebin(&["binarize", p(&input), "--threshold", "median"]).status.code(),
        Some(2)
    );
    assert_eq!(pdebin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.png");
    let out = dir.path().join("o.png");
    let o = pdebin(&["binarize", p(&missing), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    small_doc(dir.path(), "page.png", 3);
    let o = pdebin(&[
        "binarize",
        p(&dir.path().join("page.png")),
        "--out",
        p(&out),
        "--dt",
        "0.3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_names_outputs_and_writes_metric_rows() {
    let dir = tempfile::tempdir().unwrap();
    let truth = small_doc(dir.path(), "page.png", 4);
    save_image(&truth, dir.path().join("gt.png")).unwrap();
    let out = dir.path().join("sweep");
    let o = pdebin(&[
        "sweep",
        p(&dir.path().join("page.png")),
        "--cs",
        "2.5,3,4",
        "--ce",
        "1",
        "--out",
        p(&out),
        "--gt",
        p(&dir.path().join("gt.png")),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["page_cs2.5_ce1.png", "page_cs3_ce1.png", "page_cs4_ce1.png"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let csv = fs::read_to_string(out.join("page_sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
    assert!(csv.starts_with("cs,ce,output,"));
}

#[test]
fn single_entry_sweep_equals_binarize() {
    let dir = tempfile::tempdir().unwrap();
    small_doc(dir.path(), "page.png", 5);
    let input = dir.path().join("page.png");
    let single = dir.path().join("single.png");
    assert!(
        pdebin(&["binarize", p(&input), "--out", p(&single), "--cs", "2", "--ce", "1"])
            .status
            .success()
    );
    let out = dir.path().join("sweep");
    assert!(
        pdebin(&["sweep", p(&input), "--cs", "2", "--ce", "1", "--out", p(&out)])
            .status
            .success()
    );
    assert_eq!(
        fs::read(single).unwrap(),
        fs::read(out.join("page_cs2_ce1.png")).unwrap()
    );
    assert!(!out.join("page_sweep.csv").exists());
}

#[test]
fn batch_counts_outputs_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    fs::create_dir(&input).unwrap();
    for (i, name) in ["a.png", "b.png", "c.pgm"].iter().enumerate() {
        small_doc(&input, name, i as u64);
    }
    let out = dir.path().join("out");
    let o = pdebin(&["batch", p(&input), "--out", p(&out), "--jobs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["a.png", "b.png", "c.png"] {
        assert!(out.join(name).exists());
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);

    fs::write(input.join("b.png"), b"\x89PNG not really").unwrap();
    let out2 = dir.path().join("out2");
    let o = pdebin(&["batch", p(&input), "--out", p(&out2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out2.join("a.png").exists() && out2.join("c.png").exists());
    assert!(!out2.join("b.png").exists());
    let summary = fs::read_to_string(out2.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().filter(|l| l.contains(",failed,")).count(), 1);
}

#[test]
fn batch_on_empty_directory_warns_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = pdebin(&["batch", p(dir.path()), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(!out.exists());
}

#[test]
fn batch_with_ground_truth_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let (input, gt) = (dir.path().join("in"), dir.path().join("gt"));
    fs::create_dir(&input).unwrap();
    fs::create_dir(&gt).unwrap();
    for i in 0..2 {
        let truth = small_doc(&input, &format!("p{i}.png"), 10 + i);
        save_image(&truth, gt.join(format!("p{i}_gt.png"))).unwrap();
    }
    let out = dir.path().join("out");
    let o = pdebin(&["batch", p(&input), "--out", p(&out), "--gt", p(&gt), "--cs", "2.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 + 1);
    assert!(out.join("report.json").exists());
}

#[test]
fn evaluate_identical_directories_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..2 {
        let truth = small_doc(dir.path(), &format!("scratch{i}.png"), i);
        save_image(&truth, dir.path().join(format!("mask{i}.png"))).unwrap();
        fs::remove_file(dir.path().join(format!("scratch{i}.png"))).unwrap();
    }
    let report = dir.path().join("rep/report");
    let o = pdebin(&["evaluate", p(dir.path()), "--gt", p(dir.path()), "--report", p(&report)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("rep/report.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "100");
        assert_eq!(cols[3], "inf");
        assert_eq!(cols[4], "0");
    }
}

#[test]
fn evaluate_lists_unpaired_prediction_as_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let (pred, gt) = (dir.path().join("pred"), dir.path().join("gt"));
    fs::create_dir(&pred).unwrap();
    fs::create_dir(&gt).unwrap();
    let m = BinaryMap::from_fn(16, 16, |x, y| (x + y) % 5 == 0);
    save_image(&m, pred.join("a.png")).unwrap();
    save_image(&m, gt.join("a.png")).unwrap();
    save_image(&m, pred.join("extra.png")).unwrap();
    let report = dir.path().join("r.json");
    let o = pdebin(&["evaluate", p(&pred), "--gt", p(&gt), "--report", p(&report)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: skipped extra"));
    let json = fs::read_to_string(&report).unwrap();
    assert!(json.contains("\"image\": \"extra\""));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let o = pdebin(&["evaluate", p(&empty), "--gt", p(&gt), "--report", p(&report)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn evaluate_report_matches_oracle_on_seeded_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let (pred, gt) = (dir.path().join("pred"), dir.path().join("gt"));
    fs::create_dir(&pred).unwrap();
    fs::create_dir(&gt).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut expected = Vec::new();
    for i in 0..5 {
        let truth = BinaryMap::from_fn(24, 20, |_, _| rng.random_bool(0.3));
        let guess = BinaryMap::from_fn(24, 20, |x, y| truth.is_text(x, y) != rng.random_bool(0.1));
        save_image(&guess, pred.join(format!("pair{i}.png"))).unwrap();
        save_image(&truth, gt.join(format!("pair{i}.png"))).unwrap();
        let (b, g) = (guess.data(), truth.data());
        expected.push([
            oracle::fm(b, g),
            oracle::psnr(b, g),
            oracle::drd(24, 20, b, g).unwrap(),
            oracle::nrm(b, g),
        ]);
    }
    let report = dir.path().join("golden");
    let o = pdebin(&["evaluate", p(&pred), "--gt", p(&gt), "--report", p(&report)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("golden.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for (i, (row, want)) in rows.iter().zip(&expected).enumerate() {
        assert_eq!(row[0], format!("pair{i}"));
        for (col, w) in [1, 3, 4, 5].into_iter().zip(want) {
            let got: f64 = row[col].parse().unwrap();
            assert!((got - w).abs() <= 1e-9, "pair{i} column {col}: {got} vs {w}");
        }
    }
    let mean_fm: f64 = rows[5][1].parse().unwrap();
    let want = expected.iter().map(|e| e[0]).sum::<f64>() / 5.0;
    assert!((mean_fm - want).abs() <= 1e-9);
}
