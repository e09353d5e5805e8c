//! Size statistics over a corpus of automaton files: each file is run
//! through disambiguation or determinization and the expansion
//! `size(out) / size(in)`, with `size = |Q| + |E|`, is aggregated.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::automaton::{trim, Wfa};
use crate::determinize::determinize;
use crate::disambiguate::{disambiguate, DisambiguateOptions};
use crate::error::{Error, Result};
use crate::oracle::families::lattice_corpus;
use crate::relation::common_future_relation;
use crate::semiring::Rational;
use crate::text::{parse_wfa, write_wfa};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Disambiguate,
    Determinize,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operation::Disambiguate => "disambiguate",
            Operation::Determinize => "determinize",
        })
    }
}

impl FromStr for Operation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Operation> {
        match s {
            "disambiguate" => Ok(Operation::Disambiguate),
            "determinize" => Ok(Operation::Determinize),
            _ => Err(Error::Config(format!(
                "unknown operation `{s}` (expected disambiguate or determinize)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsConfig {
    pub operation: Operation,
    /// Disambiguation settings; `state_limit` also bounds determinization.
    pub disambiguation: DisambiguateOptions,
}

impl StatsConfig {
    pub fn new(operation: Operation) -> Self {
        StatsConfig {
            operation,
            disambiguation: DisambiguateOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub states: usize,
    pub transitions: usize,
}

impl Sizes {
    pub fn of(a: &Wfa) -> Sizes {
        Sizes {
            states: a.num_states(),
            transitions: a.num_transitions(),
        }
    }

    pub fn total(&self) -> usize {
        self.states + self.transitions
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Done {
        input: Sizes,
        output: Sizes,
    },
    /// The construction hit its state limit.
    Failed {
        input: Sizes,
        message: String,
    },
    /// The file could not be read or parsed, or the input was unsuitable.
    Error {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsRow {
    pub file: String,
    pub outcome: Outcome,
}

impl StatsRow {
    pub fn expansion(&self) -> Option<Rational> {
        match &self.outcome {
            Outcome::Done { input, output } => Some(Rational::new(
                output.total().into(),
                input.total().max(1).into(),
            )),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsReport {
    pub operation: Operation,
    /// Sorted by file name.
    pub rows: Vec<StatsRow>,
}

impl StatsReport {
    pub fn succeeded(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Done { .. }))
            .count()
    }

    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Failed { .. }))
            .count()
    }

    pub fn errors(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Error { .. }))
            .count()
    }

    pub fn expansions(&self) -> Vec<Rational> {
        self.rows.iter().filter_map(StatsRow::expansion).collect()
    }

    /// Exact mean expansion over the successful rows.
    pub fn mean_expansion(&self) -> Option<Rational> {
        let xs = self.expansions();
        if xs.is_empty() {
            return None;
        }
        let n = Rational::from_integer(xs.len().into());
        Some(xs.into_iter().sum::<Rational>() / n)
    }

    /// Population variance of the expansions, exact.
    pub fn expansion_variance(&self) -> Option<Rational> {
        let mean = self.mean_expansion()?;
        let xs = self.expansions();
        let n = Rational::from_integer(xs.len().into());
        Some(
            xs.into_iter()
                .map(|x| {
                    let d = x - &mean;
                    &d * &d
                })
                .sum::<Rational>()
                / n,
        )
    }

    pub fn expansion_std_dev(&self) -> Option<f64> {
        self.expansion_variance()
            .map(|v| v.to_f64().unwrap_or(f64::NAN).sqrt())
    }

    /// `(input, output)` size totals over the successful rows.
    pub fn total_sizes(&self) -> (usize, usize) {
        self.rows.iter().fold((0, 0), |(i, o), r| match &r.outcome {
            Outcome::Done { input, output } => (i + input.total(), o + output.total()),
            _ => (i, o),
        })
    }

    /// Tab-separated rows followed by a summary; a pure function of the rows.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# operation {}", self.operation).unwrap();
        writeln!(
            out,
            "file\tin_states\tin_transitions\tin_size\tout_states\tout_transitions\tout_size\texpansion\tstatus"
        )
        .unwrap();
        for row in &self.rows {
            match &row.outcome {
                Outcome::Done { input, output } => writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\tok",
                    row.file,
                    input.states,
                    input.transitions,
                    input.total(),
                    output.states,
                    output.transitions,
                    output.total(),
                    decimal(&row.expansion().unwrap()),
                ),
                Outcome::Failed { input, message } => writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t-\t-\t-\t-\tfailed: {message}",
                    row.file,
                    input.states,
                    input.transitions,
                    input.total(),
                ),
                Outcome::Error { message } => {
                    writeln!(out, "{}\t-\t-\t-\t-\t-\t-\t-\terror: {message}", row.file)
                }
            }
            .unwrap();
        }
        let (total_in, total_out) = self.total_sizes();
        writeln!(out, "# files {}", self.rows.len()).unwrap();
        writeln!(out, "# succeeded {}", self.succeeded()).unwrap();
        writeln!(out, "# failures {}", self.failures()).unwrap();
        writeln!(out, "# errors {}", self.errors()).unwrap();
        writeln!(out, "# total_in_size {total_in}").unwrap();
        writeln!(out, "# total_out_size {total_out}").unwrap();
        let mean = self.mean_expansion().map_or("-".into(), |m| decimal(&m));
        let sd = self
            .expansion_std_dev()
            .map_or("-".into(), |s| format!("{s:.6}"));
        writeln!(out, "# mean_expansion {mean}").unwrap();
        writeln!(out, "# stddev_expansion {sd}").unwrap();
        out
    }
}

/// Six decimal places, rounded half away from zero, computed exactly.
fn decimal(x: &Rational) -> String {
    let scaled = (x * Rational::from_integer(1_000_000.into())).round();
    let v = scaled.to_integer();
    let sign = if v < 0.into() { "-" } else { "" };
    let digits = format!("{:07}", v.magnitude());
    let (int, frac) = digits.split_at(digits.len() - 6);
    format!("{sign}{int}.{frac}")
}

fn run_one(a: &Wfa, config: &StatsConfig) -> Outcome {
    let a = trim(a);
    let input = Sizes::of(&a);
    let result = match config.operation {
        Operation::Disambiguate => common_future_relation(&a)
            .and_then(|rel| disambiguate(&a, &rel, &config.disambiguation))
            .map(|d| d.automaton),
        Operation::Determinize => {
            determinize(&a, config.disambiguation.state_limit).map(|d| trim(&d))
        }
    };
    match result {
        Ok(out) => Outcome::Done {
            input,
            output: Sizes::of(&out),
        },
        Err(e) if e.is_limit() => Outcome::Failed {
            input,
            message: e.to_string(),
        },
        Err(e) => Outcome::Error {
            message: e.to_string(),
        },
    }
}

/// Runs the statistics over named automata (or their load errors).
pub fn stats_on(inputs: Vec<(String, Result<Wfa>)>, config: &StatsConfig) -> StatsReport {
    let mut rows: Vec<StatsRow> = inputs
        .into_par_iter()
        .map(|(file, a)| {
            let outcome = match a {
                Ok(a) => run_one(&a, config),
                Err(e) => Outcome::Error {
                    message: e.to_string(),
                },
            };
            StatsRow { file, outcome }
        })
        .collect();
    rows.sort_by(|x, y| x.file.cmp(&y.file));
    StatsReport {
        operation: config.operation,
        rows,
    }
}

/// Runs the statistics over every `*.wfa` file of `dir`. Unreadable or
/// malformed files become error rows; only an unreadable directory fails.
pub fn stats_run(dir: &Path, config: &StatsConfig) -> Result<StatsReport> {
    let mut inputs = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "wfa") {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let a = fs::read_to_string(&path)
                .map_err(Error::from)
                .and_then(|text| parse_wfa(&text));
            inputs.push((name, a));
        }
    }
    Ok(stats_on(inputs, config))
}

/// Writes the pinned lattice corpus into `dir`, returning the file paths.
pub fn write_lattice_corpus(dir: &Path, count: usize, seed: u64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    lattice_corpus(count, seed)
        .into_iter()
        .map(|(name, a)| {
            let path = dir.join(name);
            fs::write(&path, write_wfa(&a))?;
            Ok(path)
        })
        .collect()
}
