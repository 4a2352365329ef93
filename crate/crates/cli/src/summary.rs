//! Summary tables over stored run records and plot-ready front exports.

use std::collections::BTreeMap;
use std::path::Path;

use saeame::metrics::{wilcoxon_rank_sum, RankDirection};
use saeame::problems::Problem;

use crate::config::Algorithm;
use crate::error::HarnessError;
use crate::records::{format_sci, write_atomic, RunRecord};
use crate::runner::reference_front;

/// Significance level of the rank-sum markers.
pub const MARKER_ALPHA: f64 = 0.05;

/// One summary table line.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub median_igd: f64,
    /// Sample standard deviation; `None` with fewer than two repeats.
    pub std_igd: Option<f64>,
    /// `†` when saeame's IGD sample is significantly lower than this row's,
    /// `‡` when significantly higher, empty otherwise or on saeame rows.
    pub marker: &'static str,
}

/// Loads every record under `results_dir` and reduces each
/// (problem, n, algorithm) cell to median, spread, and significance against
/// the saeame cell.
pub fn summarize_dir(results_dir: &Path) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut paths = Vec::new();
    let entries = std::fs::read_dir(results_dir).map_err(|e| HarnessError::io(results_dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| HarnessError::io(results_dir, e))?.path();
        if path.extension().is_some_and(|ext| ext == "csv") {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(HarnessError::EmptyResults(results_dir.to_path_buf()));
    }
    paths.sort();

    let mut cells: BTreeMap<(String, usize), BTreeMap<Algorithm, Vec<f64>>> = BTreeMap::new();
    for path in &paths {
        let record = RunRecord::read(path)?;
        cells
            .entry((record.problem.to_string(), record.dim))
            .or_default()
            .entry(record.algorithm)
            .or_default()
            .push(record.igd);
    }

    let mut rows = Vec::new();
    for ((problem, n), by_algorithm) in &cells {
        let saeame_sample = by_algorithm.get(&Algorithm::Saeame);
        for (&algorithm, sample) in by_algorithm {
            let marker = match saeame_sample {
                Some(reference) if algorithm != Algorithm::Saeame => {
                    match wilcoxon_rank_sum(reference, sample, MARKER_ALPHA) {
                        Ok(outcome) if outcome.significant => match outcome.direction {
                            RankDirection::FirstLower => "\u{2020}",
                            RankDirection::SecondLower => "\u{2021}",
                            RankDirection::Tied => "",
                        },
                        _ => "",
                    }
                }
                _ => "",
            };
            rows.push(SummaryRow {
                problem: problem.clone(),
                n: *n,
                algorithm,
                median_igd: median(sample),
                std_igd: sample_std(sample),
                marker,
            });
        }
    }
    Ok(rows)
}

/// Renders summary rows as CSV.
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("problem,n,algorithm,median_igd,std_igd,marker\n");
    for row in rows {
        let std_text = row.std_igd.map(format_sci).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.problem,
            row.n,
            row.algorithm,
            format_sci(row.median_igd),
            std_text,
            row.marker
        ));
    }
    out
}

/// Writes the record's archive and the true-front reference sample as
/// labeled rows for external plotting.
pub fn emit_front_csv(record: &RunRecord, out_path: &Path) -> Result<(), HarnessError> {
    let problem = Problem::new(record.problem, record.dim)?;
    let m = problem.num_objectives();

    let mut out = String::from("label");
    for j in 1..=m {
        out.push_str(&format!(",f{j}"));
    }
    out.push('\n');
    for objectives in record.archive_objectives() {
        out.push_str("archive");
        for v in &objectives {
            out.push(',');
            out.push_str(&format_sci(*v));
        }
        out.push('\n');
    }
    for point in reference_front(&problem) {
        out.push_str("true_pf");
        for v in &point {
            out.push(',');
            out.push_str(&format_sci(*v));
        }
        out.push('\n');
    }
    write_atomic(out_path, &out)
}

fn median(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

fn sample_std(sample: &[f64]) -> Option<f64> {
    if sample.len() < 2 {
        return None;
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let ss = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    Some((ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_and_std_match_hand_values() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(sample_std(&[1.0]), None);
        // Two points a distance 2 apart: sample variance (1 + 1)/1 = 2.
        let two = sample_std(&[1.0, 3.0]).unwrap();
        assert!((two - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn summary_csv_formats_rows() {
        let rows = vec![
            SummaryRow {
                problem: "zdt1".into(),
                n: 10,
                algorithm: Algorithm::Saeame,
                median_igd: 0.129,
                std_igd: Some(0.01),
                marker: "",
            },
            SummaryRow {
                problem: "zdt1".into(),
                n: 10,
                algorithm: Algorithm::RandomSearch,
                median_igd: 0.9,
                std_igd: None,
                marker: "\u{2020}",
            },
        ];
        let text = summary_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "problem,n,algorithm,median_igd,std_igd,marker"
        );
        assert_eq!(
            lines.next().unwrap(),
            "zdt1,10,saeame,1.29000E-1,1.00000E-2,"
        );
        assert_eq!(
            lines.next().unwrap(),
            "zdt1,10,random-search,9.00000E-1,,\u{2020}"
        );
    }
}
