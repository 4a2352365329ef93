use std::path::Path;
use std::process::Command;

use saeame::problems::ProblemId;
use saeame_cli::config::DimSettings;
use saeame_cli::records::{fingerprint, LogRow, RunRecord};
use saeame_cli::summary::{emit_front_csv, summarize_dir};
use saeame_cli::{run_cell, run_experiment, Algorithm, ExperimentConfig};

fn small_config() -> ExperimentConfig {
    ExperimentConfig::parse(
        "problems = zdt1\n\
         dims = 3\n\
         algorithms = saeame, nsga2-budget, random-search\n\
         repeats = 3\n\
         base_seed = 5\n\
         pop_size_3 = 8\n\
         budget_3 = 40\n",
    )
    .unwrap()
}

#[test]
fn run_experiment_covers_the_matrix_and_skips_existing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config();

    let outcome = run_experiment(&config, dir.path(), false, Some(1)).unwrap();
    assert_eq!(outcome.computed, 9);
    assert_eq!(outcome.skipped, 0);

    let mut seeds = Vec::new();
    for algorithm in [
        Algorithm::Saeame,
        Algorithm::Nsga2Budget,
        Algorithm::RandomSearch,
    ] {
        for repeat in 0..3 {
            let path = dir
                .path()
                .join(RunRecord::file_name(ProblemId::Zdt1, 3, algorithm, repeat));
            let record = RunRecord::read(&path).unwrap();
            assert_eq!(
                record.log.len(),
                40,
                "{algorithm} r{repeat} must spend the whole budget"
            );
            assert!(!record.archive.is_empty());
            assert_eq!(record.seed, 5 + repeat as u64);
            if algorithm == Algorithm::Saeame {
                seeds.push(record.seed);
            }
        }
    }
    seeds.dedup();
    assert_eq!(seeds.len(), 3, "seeds must be unique within a cell");

    let rerun = run_experiment(&config, dir.path(), false, Some(1)).unwrap();
    assert_eq!(rerun.computed, 0);
    assert_eq!(rerun.skipped, 9);

    let forced = run_experiment(&config, dir.path(), true, Some(1)).unwrap();
    assert_eq!(forced.computed, 9);
    assert_eq!(forced.skipped, 0);
}

#[test]
fn repeated_cells_serialize_identically_apart_from_wall_time() {
    let settings = DimSettings {
        pop_size: 8,
        budget: 40,
    };
    let first = run_cell(ProblemId::Zdt1, 3, Algorithm::Saeame, settings, 7, 0).unwrap();
    let second = run_cell(ProblemId::Zdt1, 3, Algorithm::Saeame, settings, 7, 0).unwrap();
    assert_eq!(
        fingerprint(&first.to_text()),
        fingerprint(&second.to_text())
    );

    let other_seed = run_cell(ProblemId::Zdt1, 3, Algorithm::Saeame, settings, 8, 0).unwrap();
    assert_ne!(
        fingerprint(&first.to_text()),
        fingerprint(&other_seed.to_text())
    );
}

fn synthetic_record(algorithm: Algorithm, repeat: usize, igd: f64) -> RunRecord {
    RunRecord {
        problem: ProblemId::Zdt1,
        dim: 3,
        algorithm,
        repeat,
        seed: repeat as u64,
        pop_size: 8,
        budget: 1,
        igd,
        wall_time_s: 0.0,
        archive: vec![0],
        log: vec![LogRow {
            iteration: 0,
            x: vec![0.5, 0.5, 0.5],
            objectives: vec![0.5, 2.0],
        }],
    }
}

fn write_records(dir: &Path, algorithm: Algorithm, igds: &[f64]) {
    for (repeat, &igd) in igds.iter().enumerate() {
        let record = synthetic_record(algorithm, repeat, igd);
        record
            .write_atomic(&dir.join(RunRecord::file_name(record.problem, 3, algorithm, repeat)))
            .unwrap();
    }
}

#[test]
fn summary_marks_fully_separated_samples_in_favor_of_the_lower_one() {
    let dir = tempfile::tempdir().unwrap();
    write_records(dir.path(), Algorithm::Saeame, &[0.01; 11]);
    write_records(dir.path(), Algorithm::RandomSearch, &[10.0; 11]);

    let rows = summarize_dir(dir.path()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].algorithm, Algorithm::Saeame);
    assert_eq!(rows[0].marker, "");
    assert_eq!(rows[0].median_igd, 0.01);
    assert_eq!(rows[1].algorithm, Algorithm::RandomSearch);
    assert_eq!(rows[1].marker, "\u{2020}");

    // Swapping which algorithm holds the better sample flips the marker.
    let swapped = tempfile::tempdir().unwrap();
    write_records(swapped.path(), Algorithm::Saeame, &[10.0; 11]);
    write_records(swapped.path(), Algorithm::RandomSearch, &[0.01; 11]);
    let rows = summarize_dir(swapped.path()).unwrap();
    assert_eq!(rows[1].algorithm, Algorithm::RandomSearch);
    assert_eq!(rows[1].marker, "\u{2021}");
}

#[test]
fn summary_suppresses_markers_on_identical_or_tiny_samples() {
    let identical = tempfile::tempdir().unwrap();
    write_records(identical.path(), Algorithm::Saeame, &[0.2; 11]);
    write_records(identical.path(), Algorithm::RandomSearch, &[0.2; 11]);
    let rows = summarize_dir(identical.path()).unwrap();
    assert!(rows.iter().all(|row| row.marker.is_empty()));

    let single = tempfile::tempdir().unwrap();
    write_records(single.path(), Algorithm::Saeame, &[0.1]);
    write_records(single.path(), Algorithm::RandomSearch, &[0.9]);
    let rows = summarize_dir(single.path()).unwrap();
    assert!(rows.iter().all(|row| row.marker.is_empty()));
    assert_eq!(rows[0].median_igd, 0.1);
    assert_eq!(rows[0].std_igd, None);
    assert_eq!(rows[1].median_igd, 0.9);

    let empty = tempfile::tempdir().unwrap();
    assert!(summarize_dir(empty.path()).is_err());
}

#[test]
fn front_export_labels_archive_and_reference_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut record = synthetic_record(Algorithm::Saeame, 0, 0.1);
    record.log.push(LogRow {
        iteration: 0,
        x: vec![0.1, 0.5, 0.5],
        objectives: vec![0.1, 3.0],
    });
    record.archive = vec![0, 1];

    let out = dir.path().join("front.csv");
    emit_front_csv(&record, &out).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "label,f1,f2");
    assert_eq!(lines.len(), 1 + 2 + 1000);
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("archive,")).count(),
        2
    );
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("true_pf,")).count(),
        1000
    );

    for line in &lines[1..] {
        let f1: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(
            (0.0..=1.0).contains(&f1),
            "ZDT1 f1 out of range in `{line}`"
        );
    }
}

fn saeame_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_saeame"))
}

#[test]
fn cli_runs_summarizes_and_exports_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("experiment.conf");
    std::fs::write(
        &config_path,
        "problems = zdt1\n\
         dims = 3\n\
         algorithms = saeame, random-search\n\
         repeats = 1\n\
         pop_size_3 = 8\n\
         budget_3 = 30\n",
    )
    .unwrap();
    let results = dir.path().join("results");

    let run = saeame_bin()
        .args(["run", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&results)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(results.join("zdt1_n3_saeame_r0.csv").exists());
    assert!(results.join("zdt1_n3_random-search_r0.csv").exists());

    let summary_path = dir.path().join("summary.csv");
    let summarize = saeame_bin()
        .args(["summarize", "--in"])
        .arg(&results)
        .arg("--out")
        .arg(&summary_path)
        .output()
        .unwrap();
    assert!(
        summarize.status.success(),
        "{}",
        String::from_utf8_lossy(&summarize.stderr)
    );
    let summary = std::fs::read_to_string(&summary_path).unwrap();
    assert!(summary.starts_with("problem,n,algorithm,median_igd,std_igd,marker\n"));
    assert!(summary.contains("zdt1,3,saeame,"));

    let front_path = dir.path().join("front.csv");
    let front = saeame_bin()
        .args(["front", "--record"])
        .arg(results.join("zdt1_n3_saeame_r0.csv"))
        .arg("--out")
        .arg(&front_path)
        .output()
        .unwrap();
    assert!(
        front.status.success(),
        "{}",
        String::from_utf8_lossy(&front.stderr)
    );
    assert!(std::fs::read_to_string(&front_path)
        .unwrap()
        .starts_with("label,f1,f2"));
}

#[test]
fn cli_env_seed_override_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("experiment.conf");
    std::fs::write(
        &config_path,
        "problems = zdt1\n\
         dims = 3\n\
         algorithms = random-search\n\
         repeats = 1\n\
         base_seed = 5\n\
         pop_size_3 = 8\n\
         budget_3 = 20\n",
    )
    .unwrap();
    let results = dir.path().join("results");

    let run = saeame_bin()
        .env("SAEA_SEED", "123")
        .args(["run", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&results)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let record = RunRecord::read(&results.join("zdt1_n3_random-search_r0.csv")).unwrap();
    assert_eq!(record.seed, 123);

    let bad_config = dir.path().join("bad.conf");
    std::fs::write(&bad_config, "problems = zdt1\nwibble = 1\n").unwrap();
    let bad = saeame_bin()
        .args(["run", "--config"])
        .arg(&bad_config)
        .arg("--out")
        .arg(&results)
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("wibble"));
}

#[test]
fn cli_saea_single_reports_a_near_optimal_point() {
    let out = saeame_bin()
        .args([
            "saea-single",
            "--problem",
            "quadratic",
            "--budget",
            "15",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("best_x = "), "{stdout}");
    assert!(stdout.contains("best_value = "), "{stdout}");

    let unknown = saeame_bin()
        .args(["saea-single", "--problem", "mystery", "--budget", "5"])
        .output()
        .unwrap();
    assert!(!unknown.status.success());
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("mystery"));
}
