use crate::args::{
    Command, CountArgs, DeviationArgs, FitArgs, Grid, McArgs, OmegaArgs, OrthoArgs, OutputArgs,
    PolyArgs, SampleArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::record::{
    CheckRow, CountRow, EstimateRow, ExperimentRecord, FitResult, OmegaRow, Payload, PlanEcho,
    RootRow, SampleRow, TOOL_VERSION,
};
use crate::results::{parse_results_file, ParsedResults};
use num_complex::Complex64;
use su2lab::montecarlo::{
    default_workers, estimate_deviation_probability, estimate_hole_probability,
    estimate_zero_count_mean, expected_zero_count, fit_decay_exponent, omega_lower_bound,
    DeviationSpec, TrialPlan,
};
use su2lab::zeros::{count_zeros_argument_principle, count_zeros_from_roots, find_all_roots, Disk};
use su2lab::{
    basis_change_matrix, fs_inner_product, log_binomial, sample_polynomial, RngSeed, SU2Polynomial,
};

/// A finished command: the record plus whether every check it ran passed.
pub struct Outcome {
    pub record: ExperimentRecord,
    pub output: OutputSettings,
    pub workers: usize,
    pub all_passed: bool,
}

pub struct OutputSettings {
    pub format: crate::args::Format,
    pub out: Option<std::path::PathBuf>,
    pub provenance: bool,
}

impl From<OutputArgs> for OutputSettings {
    fn from(o: OutputArgs) -> Self {
        Self {
            format: o.format,
            out: o.out,
            provenance: o.provenance,
        }
    }
}

fn record(command: &str, plan: PlanEcho, result: Payload) -> ExperimentRecord {
    ExperimentRecord {
        command: command.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        plan,
        result,
        run: None,
    }
}

fn outcome(record: ExperimentRecord, output: OutputArgs, workers: usize) -> Outcome {
    Outcome {
        record,
        output: output.into(),
        workers,
        all_passed: true,
    }
}

fn check_radius(r: f64) -> Result<f64, CliError> {
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(CliError::Usage(format!(
            "--radius must be positive and finite, got {r}"
        )))
    }
}

fn check_trials(trials: u64) -> Result<u64, CliError> {
    if trials == 0 {
        Err(CliError::Usage("--trials must be at least 1".into()))
    } else {
        Ok(trials)
    }
}

fn resolve_workers(workers: Option<usize>) -> Result<usize, CliError> {
    match workers {
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => Ok(w),
        None => Ok(default_workers()),
    }
}

fn degrees(degree: Option<usize>, grid: Option<Grid>) -> Result<Vec<usize>, CliError> {
    match (degree, grid) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(Grid(g))) => Ok(g),
        (None, None) => Err(CliError::Usage("give --degree or --grid".into())),
        (Some(_), Some(_)) => Err(CliError::Usage("--degree and --grid are exclusive".into())),
    }
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sample(a) => sample(a),
        Command::Roots(a) => roots(a),
        Command::Count(a) => count(a),
        Command::MeanZeros(a) => estimates("mean-zeros", a, None),
        Command::Deviation(DeviationArgs { mc, delta }) => {
            let spec = DeviationSpec::new(delta)
                .map_err(|_| CliError::Usage(format!("--delta must be positive, got {delta}")))?;
            estimates("deviation", mc, Some(spec))
        }
        Command::Hole(a) => estimates("hole", a, None),
        Command::OmegaBound(a) => omega(a),
        Command::FitDecay(a) => fit(a),
        Command::Verify(a) => verify(a),
        Command::Orthonormality(a) => orthonormality(a),
    }
}

fn sample(a: SampleArgs) -> Result<Outcome, CliError> {
    let trials = check_trials(a.trials)?;
    let polynomials = (0..trials)
        .map(|index| SampleRow {
            index,
            coefficients: sample_polynomial(a.degree, RngSeed::new(a.seed, index))
                .coefficients()
                .iter()
                .map(|c| [c.re, c.im])
                .collect(),
        })
        .collect();
    let mut plan = PlanEcho::new(vec![a.degree]);
    plan.trials = Some(trials);
    plan.master_seed = Some(a.seed);
    Ok(outcome(
        record("sample", plan, Payload::Samples { polynomials }),
        a.output,
        1,
    ))
}

fn roots(a: PolyArgs) -> Result<Outcome, CliError> {
    let poly = sample_polynomial(a.degree, RngSeed::new(a.seed, a.index));
    if a.degree == 0 {
        return Err(CliError::Usage("roots need --degree at least 1".into()));
    }
    let zeros = find_all_roots(&poly)?;
    let roots = zeros
        .roots
        .iter()
        .map(|r| RootRow {
            re: r.location.re,
            im: r.location.im,
            modulus: r.location.norm(),
            residual: r.residual,
        })
        .collect();
    let mut plan = PlanEcho::new(vec![a.degree]);
    plan.master_seed = Some(a.seed);
    let payload = Payload::Roots {
        n: a.degree,
        seed: a.seed,
        index: a.index,
        degree_deficit: zeros.degree_deficit,
        roots,
    };
    Ok(outcome(record("roots", plan, payload), a.output, 1))
}

fn count(a: CountArgs) -> Result<Outcome, CliError> {
    let r = check_radius(a.radius)?;
    let p = a.poly;
    let poly = sample_polynomial(p.degree, RngSeed::new(p.seed, p.index));
    let disk = Disk::centered(r)?;
    let (count_roots, boundary_flags) = if p.degree == 0 {
        (0, 0)
    } else {
        let c = count_zeros_from_roots(&find_all_roots(&poly)?, &disk);
        (c.count, c.boundary_flags)
    };
    let count_argument = if p.degree == 0 {
        0
    } else {
        count_zeros_argument_principle(&poly, &disk)?.count
    };
    let mut plan = PlanEcho::new(vec![p.degree]);
    plan.radius = Some(r);
    plan.master_seed = Some(p.seed);
    let row = CountRow {
        n: p.degree,
        r,
        seed: p.seed,
        index: p.index,
        count_roots,
        count_argument,
        boundary_flags,
    };
    Ok(outcome(
        record("count", plan, Payload::Count(row)),
        p.output,
        1,
    ))
}

fn estimates(command: &str, a: McArgs, spec: Option<DeviationSpec>) -> Result<Outcome, CliError> {
    let r = check_radius(a.radius)?;
    let trials = check_trials(a.trials)?;
    let workers = resolve_workers(a.workers)?;
    let degrees = degrees(a.degree, a.grid)?;
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in &degrees {
        let plan = TrialPlan::new(n, r, trials, a.seed)?.with_workers(workers);
        let e = match command {
            "mean-zeros" => estimate_zero_count_mean(&plan)?,
            "deviation" => estimate_deviation_probability(&plan, spec.expect("deviation spec"))?,
            _ => estimate_hole_probability(&plan)?,
        };
        let mut row = EstimateRow::new(n, r, a.seed, &e);
        row.delta = spec.map(|s| s.delta);
        if command == "mean-zeros" {
            row.expected = Some(expected_zero_count(n, r));
        }
        rows.push(row);
    }
    let mut plan = PlanEcho::new(degrees);
    plan.radius = Some(r);
    plan.trials = Some(trials);
    plan.master_seed = Some(a.seed);
    plan.delta = spec.map(|s| s.delta);
    Ok(outcome(
        record(command, plan, Payload::Estimates { rows }),
        a.output,
        workers,
    ))
}

fn omega(a: OmegaArgs) -> Result<Outcome, CliError> {
    let r = check_radius(a.radius)?;
    let degrees = degrees(a.degree, a.grid)?;
    if degrees.contains(&0) {
        return Err(CliError::Usage(
            "omega-bound needs degrees of at least 1".into(),
        ));
    }
    let rows = degrees
        .iter()
        .map(|&n| {
            let log_p = omega_lower_bound(n, r)?;
            Ok(OmegaRow {
                n,
                r,
                log_p,
                log_p_over_n2: log_p / (n * n) as f64,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut plan = PlanEcho::new(degrees);
    plan.radius = Some(r);
    Ok(outcome(
        record("omega-bound", plan, Payload::OmegaBound { rows }),
        a.output,
        1,
    ))
}

fn fit(a: FitArgs) -> Result<Outcome, CliError> {
    let (parsed, plan, workers) = match (a.input, a.grid) {
        (Some(path), None) => {
            let parsed = parse_results_file(&path)?;
            let mut plan = PlanEcho::new(parsed.points.iter().map(|p| p.0).collect());
            plan.input = Some(path.display().to_string());
            (parsed, plan, 1)
        }
        (None, Some(Grid(grid))) => {
            let r = a
                .radius
                .ok_or_else(|| CliError::Usage("an inline grid needs --radius".into()))
                .and_then(check_radius)?;
            let trials = check_trials(a.trials)?;
            let workers = resolve_workers(a.workers)?;
            let mut points = Vec::new();
            let mut dropped = Vec::new();
            for (i, &n) in grid.iter().enumerate() {
                let plan = TrialPlan::new(n, r, trials, a.seed)?.with_workers(workers);
                let e = estimate_hole_probability(&plan)?;
                if e.point > 0.0 {
                    points.push((n, e.point.ln()));
                } else {
                    dropped.push(crate::record::DroppedRow {
                        line: i + 1,
                        reason: format!("N = {n}: no holes in {trials} trials"),
                    });
                }
            }
            let mut plan = PlanEcho::new(grid);
            plan.radius = Some(r);
            plan.trials = Some(trials);
            plan.master_seed = Some(a.seed);
            (ParsedResults { points, dropped }, plan, workers)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --input or --grid".into(),
            ))
        }
    };
    for d in &parsed.dropped {
        eprintln!("dropped row {}: {}", d.line, d.reason);
    }
    let fit = fit_decay_exponent(&parsed.points)?;
    let result = FitResult {
        c_hat: fit.c_hat,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        points: fit.points,
        dropped: parsed.dropped,
    };
    Ok(outcome(
        record("fit-decay", plan, Payload::Fit(result)),
        a.output,
        workers,
    ))
}

fn verify(a: VerifyArgs) -> Result<Outcome, CliError> {
    let suites = match &a.suite {
        Some(id) => vec![su2lab::verify::run_suite(id, a.seed).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown suite {id:?}; known: {}",
                su2lab::verify::suite_ids().join(", ")
            ))
        })?],
        None => su2lab::verify::run_all(a.seed),
    };
    let all_passed = suites.iter().all(|s| s.passed);
    let mut plan = PlanEcho::new(vec![]);
    plan.master_seed = Some(a.seed);
    let mut out = outcome(
        record("verify", plan, Payload::Verify { suites }),
        a.output,
        1,
    );
    out.all_passed = all_passed;
    Ok(out)
}

fn unit(n: usize, j: usize) -> SU2Polynomial {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[j] = Complex64::new(1.0, 0.0);
    SU2Polynomial::new(c).expect("finite")
}

fn orthonormality(a: OrthoArgs) -> Result<Outcome, CliError> {
    let n = a.degree;
    let basis: Vec<SU2Polynomial> = (0..=n).map(|j| unit(n, j)).collect();
    let mut gram: f64 = 0.0;
    for (j, f) in basis.iter().enumerate() {
        for (k, g) in basis.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            gram = gram.max((fs_inner_product(f, g, n)? - target).norm());
        }
    }
    let mut beta: f64 = 0.0;
    for j in 0..=n {
        let mut mono = vec![Complex64::new(0.0, 0.0); n + 1];
        mono[j] = Complex64::new(1.0, 0.0);
        let z_j = SU2Polynomial::from_monomial(&mono)?;
        let expect = (-log_binomial(n, j)?).exp();
        beta = beta.max((fs_inner_product(&z_j, &z_j, n)? - expect).norm());
    }
    let u = basis_change_matrix(n, Complex64::new(0.0, 0.3));
    let centered: Vec<SU2Polynomial> = (0..=n)
        .map(|j| SU2Polynomial::new(u.column(j)))
        .collect::<Result<_, _>>()?;
    let mut shifted: f64 = 0.0;
    for (j, f) in centered.iter().enumerate() {
        for (k, g) in centered.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            shifted = shifted.max((fs_inner_product(f, g, n)? - target).norm());
        }
    }
    let row = |check: &str, max_error: f64, threshold: f64| CheckRow {
        check: check.to_string(),
        n,
        max_error,
        threshold,
        passed: max_error <= threshold,
    };
    let checks = vec![
        row("weighted_monomial_gram", gram, 1e-10),
        row("monomial_norm_closed_form", beta, 1e-10),
        row("centered_basis_gram", shifted, 1e-9),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    let mut out = outcome(
        record(
            "orthonormality",
            PlanEcho::new(vec![n]),
            Payload::Orthonormality { checks },
        ),
        a.output,
        1,
    );
    out.all_passed = all_passed;
    Ok(out)
}
