//! Reading `(N, ln P)` pairs back from result files.

use crate::error::CliError;
use crate::record::{DroppedRow, EstimateRow, ExperimentRecord, Payload};
use std::path::Path;
use su2lab::montecarlo::MAX_FAILURE_RATE;

/// Points usable for a decay fit, plus the rows that were left out.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedResults {
    pub points: Vec<(usize, f64)>,
    pub dropped: Vec<DroppedRow>,
}

/// Reads a CSV table with `N` and `point` columns (optionally `trials` and
/// `trials_failed`), or a JSON record holding estimate rows.
///
/// Rows with `point <= 0` or more than 1% failed trials are dropped and
/// reported; malformed input is an error naming the offending line.
pub fn parse_results_file(path: &Path) -> Result<ParsedResults, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    parse_results(&text)
}

pub fn parse_results(text: &str) -> Result<ParsedResults, CliError> {
    match text.trim_start().chars().next() {
        Some('{') => parse_json(text),
        Some(_) => parse_csv(text),
        None => Err(CliError::Runtime("results file is empty".into())),
    }
}

struct RawRow {
    line: usize,
    n: usize,
    point: f64,
    trials: Option<u64>,
    failed: Option<u64>,
}

fn screen(rows: impl IntoIterator<Item = RawRow>) -> ParsedResults {
    let mut points = Vec::new();
    let mut dropped = Vec::new();
    for row in rows {
        let failure_share = match (row.trials, row.failed) {
            (Some(t), Some(f)) if t > 0 => f as f64 / t as f64,
            _ => 0.0,
        };
        let reason = if row.point.is_nan() || row.point <= 0.0 {
            Some(format!(
                "N = {}: point {} has no logarithm",
                row.n, row.point
            ))
        } else if failure_share > MAX_FAILURE_RATE {
            Some(format!(
                "N = {}: {:.2}% of trials failed",
                row.n,
                100.0 * failure_share
            ))
        } else {
            None
        };
        match reason {
            Some(reason) => dropped.push(DroppedRow {
                line: row.line,
                reason,
            }),
            None => points.push((row.n, row.point.ln())),
        }
    }
    ParsedResults { points, dropped }
}

fn parse_csv(text: &str) -> Result<ParsedResults, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Runtime(format!("line 1: {e}")))?
        .clone();
    let column = |name: &str| header.iter().position(|h| h == name);
    let n_col = column("N").ok_or_else(|| CliError::Runtime("line 1: no `N` column".into()))?;
    let p_col =
        column("point").ok_or_else(|| CliError::Runtime("line 1: no `point` column".into()))?;
    let t_col = column("trials");
    let f_col = column("trials_failed");
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Runtime(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line()) as usize;
        let field = |i: usize, what: &str| -> Result<&str, CliError> {
            record
                .get(i)
                .ok_or_else(|| CliError::Runtime(format!("line {line}: missing {what}")))
        };
        let bad = |what: &str, v: &str| CliError::Runtime(format!("line {line}: bad {what} {v:?}"));
        let n_text = field(n_col, "N")?;
        let n = n_text.parse().map_err(|_| bad("N", n_text))?;
        let p_text = field(p_col, "point")?;
        let point = p_text.parse().map_err(|_| bad("point", p_text))?;
        let optional = |col: Option<usize>, what: &str| -> Result<Option<u64>, CliError> {
            match col {
                None => Ok(None),
                Some(i) => {
                    let v = field(i, what)?;
                    v.parse().map(Some).map_err(|_| bad(what, v))
                }
            }
        };
        rows.push(RawRow {
            line,
            n,
            point,
            trials: optional(t_col, "trials")?,
            failed: optional(f_col, "trials_failed")?,
        });
    }
    Ok(screen(rows))
}

fn parse_json(text: &str) -> Result<ParsedResults, CliError> {
    let record: ExperimentRecord = serde_json::from_str(text)
        .map_err(|e| CliError::Runtime(format!("line {}: {e}", e.line())))?;
    let rows: Vec<EstimateRow> = match record.result {
        Payload::Estimates { rows } => rows,
        _ => {
            return Err(CliError::Runtime(format!(
                "a `{}` record holds no estimates",
                record.command
            )))
        }
    };
    Ok(screen(rows.into_iter().enumerate().map(|(i, r)| RawRow {
        line: i + 1,
        n: r.n,
        point: r.point,
        trials: Some(r.trials),
        failed: Some(r.trials_failed),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOLE_CSV: &str = "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed\n\
        4,0.5,1000,0,0.29,0.01,0.27,0.31,1\n\
        8,0.5,1000,0,0.03,0.005,0.02,0.04,1\n\
        12,0.5,1000,2,0.001,0.001,0.0002,0.005,1\n\
        16,0.5,1000,0,0.0001,0.0001,0.00001,0.0005,1\n";

    #[test]
    fn csv_rows_become_log_points() {
        let parsed = parse_results(HOLE_CSV).unwrap();
        assert_eq!(parsed.points.len(), 4);
        assert_eq!(parsed.points[1], (8, 0.03f64.ln()));
        assert!(parsed.dropped.is_empty());
    }

    #[test]
    fn zero_points_and_failures_are_dropped() {
        let text =
            "N,point,trials,trials_failed\n2,0.5,100,0\n4,0.0,100,0\n6,0.1,100,5\n8,0.01,100,1\n";
        let parsed = parse_results(text).unwrap();
        assert_eq!(parsed.points.len(), 2);
        assert_eq!(parsed.dropped.len(), 2);
        assert_eq!(parsed.dropped[0].line, 3);
        assert_eq!(parsed.dropped[1].line, 4);
    }

    #[test]
    fn malformed_line_is_reported() {
        let err = parse_results("N,point\n2,0.5\n4,abc\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_results("N,point\n2,0.5\n4\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_results("M,point\n2,0.5\n").is_err());
        assert!(parse_results("   ").is_err());
    }

    #[test]
    fn json_record_rows() {
        let record = r#"{"command":"hole","tool_version":"0","plan":{"degrees":[1,2],"radius":1.0,"trials":10,"master_seed":1,"delta":null,"tolerances":{"root_residual":1e-8,"boundary_margin":1e-9,"quadrature_target":1e-9}},"result":{"kind":"estimates","rows":[{"N":1,"r":1.0,"trials":10,"trials_failed":0,"point":0.5,"stderr":0.1,"ci_lo":0.2,"ci_hi":0.8,"seed":1},{"N":2,"r":1.0,"trials":10,"trials_failed":0,"point":0.0,"stderr":0.0,"ci_lo":0.0,"ci_hi":0.3,"seed":1}]}}"#;
        let parsed = parse_results(record).unwrap();
        assert_eq!(parsed.points, vec![(1, 0.5f64.ln())]);
        assert_eq!(parsed.dropped.len(), 1);
        assert!(parse_results("{\"command\": 3}").is_err());
    }
}
