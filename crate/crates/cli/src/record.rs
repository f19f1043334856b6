//! Result records and their CSV / JSON renderings.

use serde::{Deserialize, Serialize};
use su2lab::montecarlo::{Estimate, Tolerances};
use su2lab::verify::SuiteReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One run of one subcommand.
///
/// The default rendering is a pure function of the command line; the
/// schedule-dependent fields live in `run` and are only filled on request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub tool_version: String,
    pub plan: PlanEcho,
    pub result: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

/// Every input needed to reproduce the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEcho {
    pub degrees: Vec<usize>,
    pub radius: Option<f64>,
    pub trials: Option<u64>,
    pub master_seed: Option<u64>,
    pub delta: Option<f64>,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl PlanEcho {
    pub fn new(degrees: Vec<usize>) -> Self {
        Self {
            degrees,
            radius: None,
            trials: None,
            master_seed: None,
            delta: None,
            tolerances: Tolerances::default(),
            input: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub workers: usize,
    pub wall_time_seconds: f64,
    /// UTC, ISO-8601
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Samples {
        polynomials: Vec<SampleRow>,
    },
    Roots {
        #[serde(rename = "N")]
        n: usize,
        seed: u64,
        index: u64,
        degree_deficit: usize,
        roots: Vec<RootRow>,
    },
    Count(CountRow),
    Estimates {
        rows: Vec<EstimateRow>,
    },
    OmegaBound {
        rows: Vec<OmegaRow>,
    },
    Fit(FitResult),
    Verify {
        suites: Vec<SuiteReport>,
    },
    Orthonormality {
        checks: Vec<CheckRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: u64,
    /// `[re, im]` of `α_0 … α_N`
    pub coefficients: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    pub seed: u64,
    pub index: u64,
    pub count_roots: usize,
    pub count_argument: usize,
    pub boundary_flags: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub trials: u64,
    pub trials_failed: u64,
    pub point: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub seed: u64,
}

impl EstimateRow {
    pub fn new(n: usize, r: f64, seed: u64, e: &Estimate) -> Self {
        Self {
            n,
            r,
            delta: None,
            trials: e.trials(),
            trials_failed: e.trials_failed,
            point: e.point,
            stderr: e.stderr,
            ci_lo: e.ci95.0,
            ci_hi: e.ci95.1,
            expected: None,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    pub log_p: f64,
    pub log_p_over_n2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c_hat: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(N, ln P)` pairs used in the fit
    pub points: Vec<(usize, f64)>,
    pub dropped: Vec<DroppedRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedRow {
    /// 1-based line (CSV) or row position (JSON)
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub max_error: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Header and rows of the CSV rendering.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl ExperimentRecord {
    pub fn table(&self) -> Table {
        match &self.result {
            Payload::Samples { polynomials } => Table {
                header: vec!["index", "j", "re", "im"],
                rows: polynomials
                    .iter()
                    .flat_map(|p| {
                        p.coefficients.iter().enumerate().map(move |(j, c)| {
                            vec![p.index.to_string(), j.to_string(), num(c[0]), num(c[1])]
                        })
                    })
                    .collect(),
            },
            Payload::Roots { roots, .. } => Table {
                header: vec!["k", "re", "im", "modulus", "residual"],
                rows: roots
                    .iter()
                    .enumerate()
                    .map(|(k, r)| {
                        vec![
                            k.to_string(),
                            num(r.re),
                            num(r.im),
                            num(r.modulus),
                            num(r.residual),
                        ]
                    })
                    .collect(),
            },
            Payload::Count(c) => Table {
                header: vec![
                    "N",
                    "r",
                    "seed",
                    "index",
                    "count_roots",
                    "count_argument",
                    "boundary_flags",
                ],
                rows: vec![vec![
                    c.n.to_string(),
                    num(c.r),
                    c.seed.to_string(),
                    c.index.to_string(),
                    c.count_roots.to_string(),
                    c.count_argument.to_string(),
                    c.boundary_flags.to_string(),
                ]],
            },
            Payload::Estimates { rows } => estimate_table(&self.command, rows),
            Payload::OmegaBound { rows } => Table {
                header: vec!["N", "r", "log_p", "log_p_over_n2"],
                rows: rows
                    .iter()
                    .map(|o| {
                        vec![
                            o.n.to_string(),
                            num(o.r),
                            num(o.log_p),
                            num(o.log_p_over_n2),
                        ]
                    })
                    .collect(),
            },
            Payload::Fit(fit) => Table {
                header: vec!["c_hat", "intercept", "r_squared", "points", "dropped"],
                rows: vec![vec![
                    num(fit.c_hat),
                    num(fit.intercept),
                    num(fit.r_squared),
                    fit.points.len().to_string(),
                    fit.dropped.len().to_string(),
                ]],
            },
            Payload::Verify { suites } => Table {
                header: vec!["id", "passed", "measured", "threshold", "description"],
                rows: suites
                    .iter()
                    .map(|s| {
                        vec![
                            s.id.clone(),
                            s.passed.to_string(),
                            num(s.measured),
                            num(s.threshold),
                            s.description.clone(),
                        ]
                    })
                    .collect(),
            },
            Payload::Orthonormality { checks } => Table {
                header: vec!["check", "N", "max_error", "threshold", "passed"],
                rows: checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.check.clone(),
                            c.n.to_string(),
                            num(c.max_error),
                            num(c.threshold),
                            c.passed.to_string(),
                        ]
                    })
                    .collect(),
            },
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let table = self.table();
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }

    pub fn to_json(&self) -> Result<Vec<u8>, serde_json::Error> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }
}

fn estimate_table(command: &str, rows: &[EstimateRow]) -> Table {
    let mut header = vec!["N", "r"];
    let with_delta = command == "deviation";
    let with_expected = command == "mean-zeros";
    if with_delta {
        header.push("delta");
    }
    header.extend([
        "trials",
        "trials_failed",
        "point",
        "stderr",
        "ci_lo",
        "ci_hi",
    ]);
    if with_expected {
        header.push("expected");
    }
    header.push("seed");
    let rows = rows
        .iter()
        .map(|e| {
            let mut row = vec![e.n.to_string(), num(e.r)];
            if with_delta {
                row.push(e.delta.map(num).unwrap_or_default());
            }
            row.extend([
                e.trials.to_string(),
                e.trials_failed.to_string(),
                num(e.point),
                num(e.stderr),
                num(e.ci_lo),
                num(e.ci_hi),
            ]);
            if with_expected {
                row.push(e.expected.map(num).unwrap_or_default());
            }
            row.push(e.seed.to_string());
            row
        })
        .collect();
    Table { header, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hole_record() -> ExperimentRecord {
        let mut plan = PlanEcho::new(vec![1, 2]);
        plan.radius = Some(1.0);
        plan.trials = Some(100);
        plan.master_seed = Some(3);
        let row = |n, p| EstimateRow {
            n,
            r: 1.0,
            delta: None,
            trials: 100,
            trials_failed: 0,
            point: p,
            stderr: 0.05,
            ci_lo: 0.125,
            ci_hi: 0.75,
            expected: None,
            seed: 3,
        };
        ExperimentRecord {
            command: "hole".into(),
            tool_version: TOOL_VERSION.into(),
            plan,
            result: Payload::Estimates {
                rows: vec![row(1, 0.5), row(2, 0.25)],
            },
            run: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let rec = hole_record();
        let bytes = rec.to_json().unwrap();
        let back: ExperimentRecord = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, rec);
        let with_run = ExperimentRecord {
            run: Some(RunInfo {
                workers: 4,
                wall_time_seconds: 0.25,
                timestamp: "2026-01-01T00:00:00Z".into(),
            }),
            ..rec
        };
        let back: ExperimentRecord = serde_json::from_slice(&with_run.to_json().unwrap()).unwrap();
        assert_eq!(back, with_run);
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(hole_record().to_csv().unwrap()).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(
            lines[0],
            "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed"
        );
        assert_eq!(lines[1], "1,1.0,100,0,0.5,0.05,0.125,0.75,3");
        assert_eq!(lines.len(), 4);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_grid_is_header_only() {
        let mut rec = hole_record();
        rec.result = Payload::Estimates { rows: vec![] };
        let text = String::from_utf8(rec.to_csv().unwrap()).unwrap();
        assert_eq!(
            text,
            "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed\n"
        );
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.1, 5.0, 1e-300, 123456789.125, -2.5e-7] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
