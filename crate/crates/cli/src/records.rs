//! Self-describing result files: one per run, a `#`-prefixed header with the
//! full config snapshot followed by the evaluation log as CSV.

use std::fs;
use std::path::Path;

use saeame::problems::ProblemId;

use crate::config::Algorithm;
use crate::error::HarnessError;

/// One expensive evaluation: the iteration that requested it, the decision
/// vector, and the resulting objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub iteration: usize,
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// Everything a single run produced, sufficient to recompute any summary
/// number downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: ProblemId,
    pub dim: usize,
    pub algorithm: Algorithm,
    pub repeat: usize,
    pub seed: u64,
    pub pop_size: usize,
    pub budget: usize,
    pub igd: f64,
    pub wall_time_s: f64,
    /// Indices into `log` of the final non-dominated archive, ascending.
    pub archive: Vec<usize>,
    pub log: Vec<LogRow>,
}

/// Table-style scientific notation with 6 significant digits.
pub fn format_sci(value: f64) -> String {
    format!("{value:.5E}")
}

impl RunRecord {
    pub fn file_name(
        problem: ProblemId,
        dim: usize,
        algorithm: Algorithm,
        repeat: usize,
    ) -> String {
        format!("{problem}_n{dim}_{algorithm}_r{repeat}.csv")
    }

    pub fn archive_objectives(&self) -> Vec<Vec<f64>> {
        self.archive
            .iter()
            .map(|&i| self.log[i].objectives.clone())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let n = self.dim;
        let m = self.log.first().map_or(0, |row| row.objectives.len());
        let mut out = String::new();
        out.push_str(&format!("# problem = {}\n", self.problem));
        out.push_str(&format!("# n = {n}\n"));
        out.push_str(&format!("# algorithm = {}\n", self.algorithm));
        out.push_str(&format!("# repeat = {}\n", self.repeat));
        out.push_str(&format!("# seed = {}\n", self.seed));
        out.push_str(&format!("# pop_size = {}\n", self.pop_size));
        out.push_str(&format!("# budget = {}\n", self.budget));
        out.push_str(&format!("# igd = {}\n", format_sci(self.igd)));
        out.push_str(&format!(
            "# wall_time_s = {}\n",
            format_sci(self.wall_time_s)
        ));
        let archive: Vec<String> = self.archive.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("# archive = {}\n", archive.join(",")));

        out.push_str("iter,fe_index");
        for j in 1..=n {
            out.push_str(&format!(",x_{j}"));
        }
        for j in 1..=m {
            out.push_str(&format!(",f_{j}"));
        }
        out.push('\n');
        for (fe_index, row) in self.log.iter().enumerate() {
            out.push_str(&format!("{},{fe_index}", row.iteration));
            for v in row.x.iter().chain(row.objectives.iter()) {
                out.push(',');
                out.push_str(&format_sci(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<RunRecord, HarnessError> {
        let bad = |message: String| HarnessError::Record {
            path: path.to_path_buf(),
            message,
        };

        let mut problem = None;
        let mut dim = None;
        let mut algorithm = None;
        let mut repeat = None;
        let mut seed = None;
        let mut pop_size = None;
        let mut budget = None;
        let mut igd = None;
        let mut wall_time_s = None;
        let mut archive: Option<Vec<usize>> = None;

        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            let (key, value) = rest
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed header line `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "problem" => {
                    problem = Some(value.parse::<ProblemId>().map_err(|e| bad(e.to_string()))?)
                }
                "n" => dim = Some(parse_field(key, value, &bad)?),
                "algorithm" => {
                    algorithm = Some(value.parse::<Algorithm>().map_err(|e| bad(e.to_string()))?)
                }
                "repeat" => repeat = Some(parse_field(key, value, &bad)?),
                "seed" => seed = Some(parse_field(key, value, &bad)?),
                "pop_size" => pop_size = Some(parse_field(key, value, &bad)?),
                "budget" => budget = Some(parse_field(key, value, &bad)?),
                "igd" => igd = Some(parse_field(key, value, &bad)?),
                "wall_time_s" => wall_time_s = Some(parse_field(key, value, &bad)?),
                "archive" => {
                    let indices = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| parse_field("archive", s, &bad))
                        .collect::<Result<Vec<usize>, _>>()?;
                    archive = Some(indices);
                }
                _ => return Err(bad(format!("unknown header key `{key}`"))),
            }
            lines.next();
        }

        let header = lines
            .next()
            .ok_or_else(|| bad("missing column header".into()))?;
        let columns: Vec<&str> = header.split(',').collect();
        let dim = require(dim, "n", &bad)?;
        if columns.len() < 2 + dim + 1 || columns[0] != "iter" || columns[1] != "fe_index" {
            return Err(bad(format!("unexpected column header `{header}`")));
        }
        let m = columns.len() - 2 - dim;

        let mut log = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(bad(format!(
                    "row {} has {} fields, expected {}",
                    log.len(),
                    fields.len(),
                    columns.len()
                )));
            }
            let iteration = parse_field("iter", fields[0], &bad)?;
            let fe_index: usize = parse_field("fe_index", fields[1], &bad)?;
            if fe_index != log.len() {
                return Err(bad(format!(
                    "fe_index {fe_index} out of order at row {}",
                    log.len()
                )));
            }
            let values = fields[2..]
                .iter()
                .map(|s| parse_field::<f64>("value", s, &bad))
                .collect::<Result<Vec<f64>, _>>()?;
            log.push(LogRow {
                iteration,
                x: values[..dim].to_vec(),
                objectives: values[dim..].to_vec(),
            });
        }

        let archive = require(archive, "archive", &bad)?;
        if let Some(&out_of_range) = archive.iter().find(|&&i| i >= log.len()) {
            return Err(bad(format!("archive index {out_of_range} exceeds the log")));
        }
        if log.iter().any(|row| row.objectives.len() != m) {
            return Err(bad("inconsistent objective count".into()));
        }

        Ok(RunRecord {
            problem: require(problem, "problem", &bad)?,
            dim,
            algorithm: require(algorithm, "algorithm", &bad)?,
            repeat: require(repeat, "repeat", &bad)?,
            seed: require(seed, "seed", &bad)?,
            pop_size: require(pop_size, "pop_size", &bad)?,
            budget: require(budget, "budget", &bad)?,
            igd: require(igd, "igd", &bad)?,
            wall_time_s: require(wall_time_s, "wall_time_s", &bad)?,
            archive,
            log,
        })
    }

    pub fn read(path: &Path) -> Result<RunRecord, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        RunRecord::parse(&text, path)
    }

    /// Writes the record through a temporary sibling file and an atomic
    /// rename, so readers never observe a partial record.
    pub fn write_atomic(&self, path: &Path) -> Result<(), HarnessError> {
        write_atomic(path, &self.to_text())
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents).map_err(|e| HarnessError::io(tmp, e))?;
    fs::rename(tmp, path).map_err(|e| HarnessError::io(path, e))
}

/// The portion of a serialized record that must be bit-identical across
/// reruns with the same seed and config: everything except the wall time.
pub fn fingerprint(text: &str) -> String {
    text.lines()
        .filter(|line| !line.starts_with("# wall_time_s"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_field<T: std::str::FromStr>(
    key: &str,
    value: &str,
    bad: &impl Fn(String) -> HarnessError,
) -> Result<T, HarnessError> {
    value
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad `{key}` value `{value}`")))
}

fn require<T>(
    value: Option<T>,
    key: &str,
    bad: &impl Fn(String) -> HarnessError,
) -> Result<T, HarnessError> {
    value.ok_or_else(|| bad(format!("missing header key `{key}`")))
}
