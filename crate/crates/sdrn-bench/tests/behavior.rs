//! Behavior tests for the harness: column mappings, cache verification,
//! run determinism, report round-trips, and the CLI's exit codes.
//!
//! Everything here is hermetic — synthetic data and temp directories,
//! never the network.

use std::fs;
use std::process::Command;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use sdrn::{ChannelSpec, MultiChannelPoint};
use sdrn_bench::config::{parse_channels, Algo, ConfigFile, ExperimentConfig};
use sdrn_bench::datasets::{self, DatasetSpec, LabelRule};
use sdrn_bench::error::BenchError;
use sdrn_bench::loader::{self, LoadedDataset};
use sdrn_bench::report::{self, Document};
use sdrn_bench::runner::{run_trials, shuffled_order, train_network};
use sdrn_bench::sweeps::{sweep_scale, sweep_vigilance};
use sdrn_bench::{fetch, Result};

fn write_temp(content: &str) -> (TempDir, std::path::PathBuf) {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("data.csv");
    fs::write(&path, content).unwrap();
    (dir, path)
}

// ---------------------------------------------------------------- loading

#[test]
fn banknote_row_parses_to_four_features_and_flag() {
    let (_dir, path) = write_temp("3.6216,8.6661,-2.8073,-0.44699,0\n-1.3971,3.3191,-1.3927,-1.9948,1\n");
    let data = loader::load_dataset(&path, &datasets::BANKNOTE, None).unwrap();
    assert_eq!(data.feature_dim, 4);
    assert_eq!(data.points[0].flatten(), vec![3.6216, 8.6661, -2.8073, -0.44699]);
    assert_eq!(data.labels, vec![0, 1]);
    assert_eq!(data.class_count, 2);
}

#[test]
fn balance_classes_use_the_fixed_table() {
    let (_dir, path) = write_temp("B,1,2,3,4\nL,5,4,3,2\nR,1,1,1,1\n");
    let data = loader::load_dataset(&path, &datasets::BALANCE, None).unwrap();
    assert_eq!(data.labels, vec![0, 1, 2]);
    assert_eq!(data.points[0].flatten(), vec![1.0, 2.0, 3.0, 4.0]);
    let (_dir2, bad) = write_temp("Q,1,2,3,4\n");
    let err = loader::load_dataset(&bad, &datasets::BALANCE, None).unwrap_err();
    assert!(matches!(err, BenchError::Input(_)), "{err}");
}

#[test]
fn liver_class_truncates_the_drinks_column() {
    let (_dir, path) = write_temp("85,92,45,27,31,0.5,1\n91,63,40,25,26,4.0,2\n");
    let data = loader::load_dataset(&path, &datasets::LIVER, None).unwrap();
    assert_eq!(data.feature_dim, 5);
    assert_eq!(data.points[0].flatten(), vec![85.0, 92.0, 45.0, 27.0, 31.0]);
    assert_eq!(data.labels, vec![0, 4]);
}

#[test]
fn transfusion_rows_survive_embedded_spaces() {
    let (_dir, path) = write_temp("2 ,50,12500,98 ,1\n0 ,13,3250,28 ,0\n");
    let data = loader::load_dataset(&path, &datasets::TRANSFUSION, None).unwrap();
    assert_eq!(data.points[0].flatten(), vec![2.0, 50.0, 12500.0, 98.0]);
    assert_eq!(data.labels, vec![1, 0]);
}

#[test]
fn car_rows_are_preencoded_integers() {
    let (_dir, path) = write_temp("1,1,2,2,1,1,1\n4,4,5,6,3,3,4\n");
    let data = loader::load_dataset(&path, &datasets::CAR, None).unwrap();
    assert_eq!(data.feature_dim, 6);
    assert_eq!(data.points[1].flatten(), vec![4.0, 4.0, 5.0, 6.0, 3.0, 3.0]);
    assert_eq!(data.labels, vec![1, 4]);
}

#[test]
fn wholesale_class_combines_channel_and_region() {
    let (_dir, path) = write_temp("2,3,12669,9656,7561,214,2674,1338\n1,1,1,2,3,4,5,6\n");
    let data = loader::load_dataset(&path, &datasets::WHOLESALE, None).unwrap();
    assert_eq!(data.feature_dim, 6);
    assert_eq!(data.points[0].flatten(), vec![12669.0, 9656.0, 7561.0, 214.0, 2674.0, 1338.0]);
    assert_eq!(data.labels, vec![3 * 2 + 3, 3 + 1]);
}

#[test]
fn loader_errors_name_the_row_and_column() {
    let (_dir, path) = write_temp("1,2,x,4,0\n");
    let err = loader::load_dataset(&path, &datasets::BANKNOTE, None).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("row 1") && msg.contains("column 3"), "{msg}");

    let (_dir2, ragged) = write_temp("1,2,3,4,0\n1,2,3\n");
    let err = loader::load_dataset(&ragged, &datasets::BANKNOTE, None).unwrap_err();
    assert!(err.to_string().contains("row 2"), "{err}");

    let (_dir3, empty) = write_temp("");
    let err = loader::load_dataset(&empty, &datasets::BANKNOTE, None).unwrap_err();
    assert!(err.to_string().contains("no data rows"), "{err}");
}

#[test]
fn delimited_loader_handles_headers_and_string_labels() {
    let (_dir, path) = write_temp("x;y;kind\n1.0;2.0;cat\n3.0;4.0;dog\n5.0;6.0;cat\n");
    let data = loader::load_delimited(&path, b';', true, None, None).unwrap();
    assert_eq!(data.feature_dim, 2);
    // String labels get ids in order of first appearance.
    assert_eq!(data.labels, vec![0, 1, 0]);
    assert_eq!(data.class_count, 2);

    // Integer labels are used as-is, and the label column can be moved.
    let (_dir2, path2) = write_temp("7,1.5,2.5\n3,4.5,5.5\n");
    let data = loader::load_delimited(&path2, b',', false, Some(0), None).unwrap();
    assert_eq!(data.labels, vec![7, 3]);
    assert_eq!(data.points[0].flatten(), vec![1.5, 2.5]);
}

#[test]
fn channel_layout_must_cover_the_features() {
    let (_dir, path) = write_temp("1,2,3,4,0\n5,6,7,8,1\n");
    let err = loader::load_dataset(&path, &datasets::BANKNOTE, Some(&[3, 2])).unwrap_err();
    assert!(err.to_string().contains("sums to 5"), "{err}");

    let data = loader::load_dataset(&path, &datasets::BANKNOTE, Some(&[3, 1])).unwrap();
    assert_eq!(data.points[0].channels(), 2);
    assert_eq!(data.points[0].channel(0), &[1.0, 2.0, 3.0]);
    assert_eq!(data.points[0].channel(1), &[4.0]);
}

// ---------------------------------------------------------------- caching

/// A miniature dataset spec whose file is the six bytes `hello\n`.
const TINY: DatasetSpec = DatasetSpec {
    name: "tiny",
    cache_name: "tiny.data",
    url: "https://github.com/nowhere/raw/main/tiny.data",
    sha256: "5891b5b522d5df086d0ff0b110fbd9d21bb4fc7163af34d08286a2e846f6be03",
    feature_cols: (0, 1),
    label: LabelRule::Integer { col: 1 },
};

#[test]
fn sha256_matches_known_vectors() {
    assert_eq!(
        fetch::sha256_hex(b""),
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    );
    assert_eq!(
        fetch::sha256_hex(b"abc"),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    );
}

#[test]
fn offline_cache_hit_miss_and_corruption() {
    let cache = TempDir::new().unwrap();

    // Missing file, offline: acquisition error.
    let err = fetch::ensure_in(cache.path(), &TINY, true).unwrap_err();
    assert!(matches!(err, BenchError::Acquisition(_)), "{err}");

    // Verified file: returned untouched.
    let path = cache.path().join(TINY.cache_name);
    fs::write(&path, "hello\n").unwrap();
    let got = fetch::ensure_in(cache.path(), &TINY, true).unwrap();
    assert_eq!(got, path);

    // Corrupted file, offline: refuses rather than re-downloading.
    fs::write(&path, "tampered").unwrap();
    let err = fetch::ensure_in(cache.path(), &TINY, true).unwrap_err();
    assert!(matches!(err, BenchError::Acquisition(_)), "{err}");
    assert!(err.to_string().contains("checksum"), "{err}");
}

// ------------------------------------------------------------- experiments

fn synthetic(n: usize, seed: u64) -> LoadedDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = [[0.0, 0.0, 0.0], [6.0, 6.0, 0.0], [0.0, 6.0, 6.0]];
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % centers.len();
        let coords: Vec<f64> = centers[c]
            .iter()
            .map(|&v| v + rng.gen_range(-1.0..1.0))
            .collect();
        points.push(MultiChannelPoint::single(coords));
        labels.push(c);
    }
    LoadedDataset {
        name: "synthetic".to_string(),
        points,
        labels,
        feature_dim: 3,
        class_count: centers.len(),
        channel_spec: ChannelSpec::single(3).unwrap(),
    }
}

fn cfg_for(algo: Algo, trials: u32, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        dataset: "synthetic".to_string(),
        algo,
        trials,
        seed,
        ..ExperimentConfig::default()
    }
}

#[test]
fn reports_are_bit_identical_across_reruns() -> Result<()> {
    let data = synthetic(90, 2);
    for algo in [Algo::Sdrn, Algo::DrnLike, Algo::Kmeans] {
        let cfg = cfg_for(algo, 6, 11);
        let (a, _) = run_trials(&cfg, &data)?;
        let (b, _) = run_trials(&cfg, &data)?;
        let bytes_a = report::document_bytes(&Document::Run(a))?;
        let bytes_b = report::document_bytes(&Document::Run(b))?;
        assert_eq!(bytes_a, bytes_b, "{algo} report changed between reruns");
    }
    Ok(())
}

#[test]
fn aggregates_recompute_from_records() -> Result<()> {
    let data = synthetic(90, 3);
    let (run, _) = run_trials(&cfg_for(Algo::Sdrn, 8, 5), &data)?;
    let dbi: Vec<f64> = run.records.iter().filter_map(|r| r.dbi).collect();
    let cp: Vec<f64> = run.records.iter().map(|r| r.cp).collect();
    let a = &run.aggregates;
    assert_eq!(a.dbi_defined, dbi.len());
    assert!((a.dbi_mean.unwrap() - sdrn::metrics::mean(&dbi)).abs() <= 1e-12);
    assert!((a.dbi_std.unwrap() - sdrn::metrics::population_std(&dbi)).abs() <= 1e-12);
    assert!((a.cp_mean - sdrn::metrics::mean(&cp)).abs() <= 1e-12);
    assert!((a.cp_std - sdrn::metrics::population_std(&cp)).abs() <= 1e-12);
    Ok(())
}

#[test]
fn scale_sweep_factor_one_is_the_plain_run() -> Result<()> {
    let data = synthetic(90, 4);
    let cfg = cfg_for(Algo::Sdrn, 5, 9);
    let (plain, _) = run_trials(&cfg, &data)?;
    let (sweep, _) = sweep_scale(&cfg, &data, Some(vec![1.0, 100.0]))?;
    let a = serde_json::to_string(&plain).unwrap();
    let b = serde_json::to_string(&sweep.runs[0]).unwrap();
    assert_eq!(a, b, "factor-1 sweep entry must match the standalone run byte for byte");
    Ok(())
}

#[test]
fn training_sees_each_point_exactly_once() -> Result<()> {
    let data = synthetic(75, 6);
    let cfg = cfg_for(Algo::Sdrn, 1, 0);
    let order = shuffled_order(data.points.len(), 123);
    let state = train_network(&cfg, &data, &data.points, &order)?;
    assert_eq!(state.steps(), data.points.len() as u64);
    assert!(state.node_count() > 0);
    Ok(())
}

#[test]
fn training_is_blind_to_labels() -> Result<()> {
    let data = synthetic(90, 7);
    let mut relabeled = data.clone();
    relabeled.labels.rotate_left(1);
    let cfg = cfg_for(Algo::Sdrn, 4, 2);
    let (a, _) = run_trials(&cfg, &data)?;
    let (b, _) = run_trials(&cfg, &relabeled)?;
    for (ra, rb) in a.records.iter().zip(&b.records) {
        assert_eq!(ra.clusters, rb.clusters);
        assert_eq!(ra.dbi, rb.dbi);
    }
    Ok(())
}

#[test]
fn vigilance_sweep_selects_and_degenerates() -> Result<()> {
    let data = synthetic(90, 8);
    let cfg = cfg_for(Algo::Sdrn, 4, 3);
    let (sweep, _) = sweep_vigilance(&cfg, &data, Some(vec![0.2, 0.5, 0.8]))?;
    assert_eq!(sweep.runs.len(), 3);
    assert_eq!(sweep.combined.len(), 3);
    assert!(sweep.best_rho.is_some());

    // A one-point grid degenerates to exactly the plain run.
    let mut single_cfg = cfg.clone();
    single_cfg.rho = 0.5;
    let (plain, _) = run_trials(&single_cfg, &data)?;
    let (single, _) = sweep_vigilance(&cfg, &data, Some(vec![0.5]))?;
    assert_eq!(
        serde_json::to_string(&plain).unwrap(),
        serde_json::to_string(&single.runs[0]).unwrap()
    );
    Ok(())
}

// ----------------------------------------------------------------- reports

#[test]
fn infinity_and_absence_survive_json() {
    let record = sdrn_bench::runner::TrialRecord {
        trial: 0,
        seed: 1,
        clusters: 2,
        dbi: Some(f64::INFINITY),
        cp: 0.5,
        nmi: 0.25,
    };
    let text = serde_json::to_string(&record).unwrap();
    assert!(text.contains("\"inf\""), "{text}");
    let back: sdrn_bench::runner::TrialRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(record, back);

    let none = sdrn_bench::runner::TrialRecord { dbi: None, ..record.clone() };
    let text = serde_json::to_string(&none).unwrap();
    assert!(text.contains("\"dbi\":null"), "{text}");
    let back: sdrn_bench::runner::TrialRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(none, back);
}

#[test]
fn documents_round_trip_exactly() -> Result<()> {
    let data = synthetic(60, 9);
    let cfg = cfg_for(Algo::Sdrn, 3, 4);
    let out = TempDir::new().unwrap();

    let (run, _) = run_trials(&cfg, &data)?;
    let doc = Document::Run(run);
    let path = report::write_report(out.path(), &doc)?;
    assert_eq!(report::read_report(&path)?, doc);

    let (sweep, _) = sweep_vigilance(&cfg, &data, Some(vec![0.3, 0.7]))?;
    let doc = Document::VigilanceSweep(sweep);
    let path = report::write_report(out.path(), &doc)?;
    assert_eq!(report::read_report(&path)?, doc);

    let (sweep, _) = sweep_scale(&cfg, &data, Some(vec![1.0, 10.0]))?;
    let doc = Document::ScaleSweep(sweep);
    let path = report::write_report(out.path(), &doc)?;
    assert_eq!(report::read_report(&path)?, doc);
    Ok(())
}

#[test]
fn sweep_outputs_have_one_row_per_point() -> Result<()> {
    let data = synthetic(60, 10);
    let cfg = cfg_for(Algo::Sdrn, 3, 4);
    let out = TempDir::new().unwrap();
    let (sweep, timings) = sweep_vigilance(&cfg, &data, None)?;
    report::emit_all(out.path(), &Document::VigilanceSweep(sweep), &timings)?;

    for name in ["plot_dbi.csv", "plot_cp.csv", "plot_nmi.csv", "plot_combined.csv"] {
        let text = fs::read_to_string(out.path().join(name)).unwrap();
        let rows = text.lines().count();
        assert_eq!(rows, 1 + 9, "{name} should have a header plus nine data rows");
    }
    assert!(out.path().join("sweep.svg").is_file());
    assert!(out.path().join("timings.json").is_file());
    let summary = fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 9);
    Ok(())
}

// ------------------------------------------------------------------ config

#[test]
fn config_precedence_is_defaults_then_file_then_flags() {
    let mut cfg = ExperimentConfig::default();
    assert_eq!(cfg.rho, 0.5);
    assert_eq!(cfg.trials, 100);

    let file: ConfigFile =
        toml::from_str("rho = 0.7\ndataset = \"car\"\nalgo = \"drn-like\"\ntrials = 12").unwrap();
    file.apply(&mut cfg);
    assert_eq!(cfg.rho, 0.7);
    assert_eq!(cfg.dataset, "car");
    assert_eq!(cfg.algo, Algo::DrnLike);
    assert_eq!(cfg.trials, 12);
    // An explicit flag would overwrite on top of this (exercised in the
    // CLI test below); untouched keys keep their defaults.
    assert_eq!(cfg.tau, 0.85);

    let err = toml::from_str::<ConfigFile>("rhoo = 1.0").unwrap_err();
    assert!(err.to_string().contains("rhoo"), "{err}");
}

#[test]
fn channel_flag_parsing() {
    assert_eq!(parse_channels("3,2").unwrap(), vec![3, 2]);
    assert_eq!(parse_channels(" 4 , 1 ").unwrap(), vec![4, 1]);
    assert!(parse_channels("3,x").is_err());
    assert!(parse_channels("0").is_err());
}

#[test]
fn validation_rejects_nonsense() {
    let base = ExperimentConfig::default();
    for broken in [
        ExperimentConfig { trials: 0, ..base.clone() },
        ExperimentConfig { scale: -1.0, ..base.clone() },
        ExperimentConfig { scale: f64::INFINITY, ..base.clone() },
        ExperimentConfig { split_ratio: 1.0, ..base.clone() },
        ExperimentConfig { channels: Some(vec![]), ..base.clone() },
        ExperimentConfig { channels: Some(vec![2, 0]), ..base.clone() },
        ExperimentConfig { kmeans_max_iters: 0, ..base.clone() },
    ] {
        assert!(broken.validate().is_err());
    }
    assert!(base.validate().is_ok());
}

// --------------------------------------------------------------------- CLI

fn bench_cmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdrn-bench"));
    cmd.env_remove("SDRN_MIRROR");
    cmd
}

#[test]
fn cli_runs_a_custom_file_end_to_end() {
    let (_data_dir, csv) = write_temp("1.0,2.0,0\n1.1,2.1,0\n5.0,6.0,1\n5.2,6.1,1\n1.2,1.9,0\n");
    let out = TempDir::new().unwrap();
    let status = bench_cmd()
        .args(["run", "--dataset"])
        .arg(&csv)
        .args(["--trials", "2", "--seed", "1", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["report.json", "summary.csv", "timings.json"] {
        assert!(out.path().join(name).is_file(), "missing {name}");
    }
    // The config flag layer: a file sets trials, the flag overrides rho.
    let cfg_path = out.path().join("exp.toml");
    fs::write(&cfg_path, "trials = 3\nrho = 0.9\n").unwrap();
    let status = bench_cmd()
        .args(["run", "--dataset"])
        .arg(&csv)
        .args(["--config"])
        .arg(&cfg_path)
        .args(["--rho", "0.4", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let doc = report::read_report(&out.path().join("report.json")).unwrap();
    match doc {
        Document::Run(run) => {
            assert_eq!(run.trials, 3, "config file should set trials");
            assert_eq!(run.rho, 0.4, "flag should beat config file");
        }
        other => panic!("expected a run document, got {other:?}"),
    }
}

#[test]
fn cli_exit_codes_distinguish_failure_classes() {
    let out = TempDir::new().unwrap();
    let status = bench_cmd()
        .args(["run", "--dataset", "definitely-not-a-dataset", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    let empty_cache = TempDir::new().unwrap();
    let status = bench_cmd()
        .env("SDRN_DATA_DIR", empty_cache.path())
        .args(["run", "--dataset", "balance", "--offline", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bench_cmd()
        .args(["run", "--rho", "not-a-number"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1), "usage errors exit 1");
}

// ------------------------------------------------------------------ timing

#[test]
fn doubling_points_at_fixed_nodes_roughly_doubles_time() -> Result<()> {
    // Tight, well-separated clusters keep the node count flat, so the
    // per-point cost is constant and total time scales with n.
    let small = synthetic(40_000, 12);
    let big = synthetic(80_000, 12);
    let cfg = cfg_for(Algo::Sdrn, 1, 0);

    let time_once = |data: &LoadedDataset| -> Result<f64> {
        let order = shuffled_order(data.points.len(), 77);
        let start = std::time::Instant::now();
        let state = train_network(&cfg, data, &data.points, &order)?;
        let elapsed = start.elapsed().as_secs_f64();
        assert!(state.node_count() < 64, "node count stayed small");
        Ok(elapsed)
    };

    let median = |mut xs: Vec<f64>| {
        xs.sort_by(f64::total_cmp);
        xs[xs.len() / 2]
    };
    let mut small_times = Vec::new();
    let mut big_times = Vec::new();
    for _ in 0..5 {
        small_times.push(time_once(&small)?);
        big_times.push(time_once(&big)?);
    }
    let ratio = median(big_times) / median(small_times);
    assert!(
        ratio <= 2.6,
        "doubling n should at most roughly double wall time, ratio was {ratio:.2}"
    );
    Ok(())
}
