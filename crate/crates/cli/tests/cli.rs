use std::process::{Command, Output};
use su2lab_cli::record::Payload;
use su2lab_cli::ExperimentRecord;

fn su2lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2lab"))
        .args(args)
        .env("SU2LAB_WORKERS", "2")
        .output()
        .expect("run su2lab")
}

fn stdout(args: &[&str]) -> String {
    let out = su2lab(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["hole", "-N", "3", "-r", "1", "--bogus"],
        vec!["hole", "-N", "three", "-r", "1"],
        vec!["hole", "-N", "3", "-r", "abc"],
        vec!["hole", "-N", "3", "-r", "-1"],
        vec!["hole", "-N", "3", "-r", "0"],
        vec!["hole", "-N", "3", "-r", "1", "--trials", "0"],
        vec!["hole", "-r", "1"],
        vec!["hole", "-N", "3", "-r", "1", "--workers", "0"],
        vec!["deviation", "-N", "3", "-r", "1", "--delta", "-0.2"],
        vec!["nonsense"],
        vec!["verify", "--suite", "no.such.suite"],
    ] {
        let out = su2lab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let two_points = dir.path().join("two.csv");
    std::fs::write(&two_points, "N,point\n2,0.81\n4,0.43\n").unwrap();
    let out = su2lab(&["fit-decay", "--input", two_points.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 3 points"));

    let malformed = dir.path().join("bad.csv");
    std::fs::write(&malformed, "N,point\n2,0.5\n4,oops\n6,0.1\n").unwrap();
    let out = su2lab(&["fit-decay", "--input", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = dir.path().join("missing.csv");
    let out = su2lab(&["fit-decay", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degree_one_hole_matches_half() {
    let text = stdout(&[
        "hole", "-N", "1", "-r", "1", "--trials", "20000", "--format", "json",
    ]);
    let record: ExperimentRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(record.command, "hole");
    assert!(record.run.is_none());
    let Payload::Estimates { rows } = &record.result else {
        panic!("unexpected payload")
    };
    let row = &rows[0];
    assert_eq!(row.trials, 20000);
    assert!((row.point - 0.5).abs() <= 3.0 * row.stderr, "{row:?}");
    assert!(row.ci_lo <= row.point && row.point <= row.ci_hi);
}

#[test]
fn json_records_round_trip() {
    for args in [
        vec![
            "hole", "--grid", "1,2", "-r", "0.7", "--trials", "2000", "--format", "json",
        ],
        vec![
            "deviation",
            "-N",
            "6",
            "-r",
            "1",
            "--delta",
            "0.3",
            "--trials",
            "2000",
            "--format",
            "json",
        ],
        vec!["roots", "-N", "7", "--format", "json"],
        vec!["count", "-N", "7", "-r", "1", "--format", "json"],
        vec!["sample", "-N", "3", "--trials", "2", "--format", "json"],
        vec![
            "omega-bound",
            "--grid",
            "1,2,3",
            "-r",
            "1",
            "--format",
            "json",
        ],
        vec!["orthonormality", "-N", "4", "--format", "json"],
    ] {
        let text = stdout(&args);
        let record: ExperimentRecord = serde_json::from_str(&text).unwrap();
        let again = String::from_utf8(record.to_json().unwrap()).unwrap();
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn provenance_adds_run_info() {
    let text = stdout(&[
        "hole",
        "-N",
        "2",
        "-r",
        "1",
        "--trials",
        "500",
        "--workers",
        "3",
        "--format",
        "json",
        "--provenance",
    ]);
    let record: ExperimentRecord = serde_json::from_str(&text).unwrap();
    let run = record.run.expect("run info");
    assert_eq!(run.workers, 3);
    assert!(run.wall_time_seconds >= 0.0);
    assert!(run.timestamp.ends_with('Z') && run.timestamp.contains('T'));
}

#[test]
fn csv_output_is_lf_with_fixed_columns() {
    let text = stdout(&[
        "hole", "--grid", "1,3", "-r", "0.5", "--trials", "1000", "--seed", "4",
    ]);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,0.5,1000,0,"));
    assert!(lines[2].ends_with(",4"));

    let empty = stdout(&["hole", "--grid", "", "-r", "0.5"]);
    assert_eq!(
        empty,
        "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed\n"
    );

    let mean = stdout(&["mean-zeros", "-N", "4", "-r", "1", "--trials", "500"]);
    assert!(mean.starts_with("N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,expected,seed\n"));
    let dev = stdout(&[
        "deviation",
        "-N",
        "4",
        "-r",
        "1",
        "--delta",
        "0.25",
        "--trials",
        "500",
    ]);
    assert!(dev.starts_with("N,r,delta,trials,"));
}

#[test]
fn out_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("omega.csv");
    let out = su2lab(&[
        "omega-bound",
        "-N",
        "5",
        "-r",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("N,r,log_p,log_p_over_n2\n5,1.0,"));
}

#[test]
fn hole_results_feed_the_decay_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hole.csv");
    let json = dir.path().join("hole.json");
    let grid = ["--grid", "1,2,3,4", "-r", "0.6", "--trials", "4000"];
    let mut a = vec!["hole"];
    a.extend(grid);
    let mut csv_args = a.clone();
    csv_args.extend(["--out", csv.to_str().unwrap()]);
    assert!(su2lab(&csv_args).status.success());
    let mut json_args = a.clone();
    json_args.extend(["--format", "json", "--out", json.to_str().unwrap()]);
    assert!(su2lab(&json_args).status.success());

    let from_csv = stdout(&[
        "fit-decay",
        "--input",
        csv.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let from_json = stdout(&[
        "fit-decay",
        "--input",
        json.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let inline = {
        let mut args = vec!["fit-decay"];
        args.extend(grid);
        args.extend(["--format", "json"]);
        stdout(&args)
    };
    let fits: Vec<ExperimentRecord> = [from_csv, from_json, inline]
        .iter()
        .map(|t| serde_json::from_str(t).unwrap())
        .collect();
    let results: Vec<_> = fits
        .iter()
        .map(|r| match &r.result {
            Payload::Fit(f) => f.clone(),
            _ => panic!("unexpected payload"),
        })
        .collect();
    assert_eq!(results[0].points.len(), 4);
    assert!(results[0].c_hat > 0.0);
    assert_eq!(results[0], results[1]);
    assert_eq!(results[0], results[2]);
}

#[test]
fn zero_point_rows_are_dropped_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    std::fs::write(
        &path,
        "N,r,trials,trials_failed,point,stderr,ci_lo,ci_hi,seed\n\
         2,1.0,1000,0,0.3,0.01,0.28,0.32,1\n\
         4,1.0,1000,0,0.0,0.0,0.0,0.004,1\n\
         6,1.0,1000,0,0.02,0.004,0.01,0.03,1\n\
         8,1.0,1000,0,0.001,0.001,0.0002,0.006,1\n",
    )
    .unwrap();
    let out = su2lab(&[
        "fit-decay",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dropped row 3"));
    let record: ExperimentRecord = serde_json::from_slice(&out.stdout).unwrap();
    let Payload::Fit(fit) = record.result else {
        panic!("unexpected payload")
    };
    assert_eq!(fit.points.len(), 3);
    assert_eq!(fit.dropped.len(), 1);
}

#[test]
fn verify_lists_suites_with_measurements() {
    let text = stdout(&["verify"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("id,passed,measured,threshold,description")
    );
    let ids: Vec<String> = lines
        .map(|l| {
            assert!(l.split(',').nth(1) == Some("true"), "{l}");
            l.split(',').next().unwrap().to_string()
        })
        .collect();
    assert_eq!(ids, su2lab::verify::suite_ids());
}

#[test]
fn count_agrees_between_methods() {
    for seed in ["1", "2", "3"] {
        let text = stdout(&["count", "-N", "30", "-r", "1.3", "--seed", seed]);
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[4], row[5]);
    }
}
