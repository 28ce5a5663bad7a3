use misbench_core::bounds::{builtin_bounds, BoundsRow};
use misbench_core::config::BenchConfig;
use misbench_core::harness::{
    emit_report, fit_scaling, hard_benchmark_matrix, jsonl_sink, parse_records, run_benchmark,
    BenchRecord, HarnessError, ReportFormat, RunSpec, SolverSpec, CSV_HEADER,
};
use misbench_core::mcmc::{AnnealSchedule, Ramp};

fn collect(matrix: &[RunSpec], workers: usize) -> Vec<BenchRecord> {
    run_benchmark(matrix, &builtin_bounds(), workers, |_| Ok(())).unwrap()
}

#[test]
fn five_dga_repetitions_are_valid_and_distinct() {
    let spec = RunSpec::derived(SolverSpec::Dga, 1000, 3, 5, 42);
    let records = collect(&[spec], 1);
    assert_eq!(records.len(), 5);
    assert!(records.iter().all(|r| r.accepted()));
    let seeds: std::collections::BTreeSet<u64> = records.iter().map(|r| r.instance_seed).collect();
    assert_eq!(seeds.len(), 5);
    for r in &records {
        let density = r.density.unwrap();
        assert!((0.40..0.47).contains(&density), "{density}");
        assert!(r.ar.is_some());
        assert_eq!(r.rng, "xoshiro256++/splitmix64-seeded");
    }
}

#[test]
fn infeasible_parity_becomes_a_failure_record() {
    let matrix = [
        RunSpec::derived(SolverSpec::Dga, 5, 3, 1, 0),
        RunSpec::derived(SolverSpec::Ga, 10, 3, 1, 0),
    ];
    let records = collect(&matrix, 1);
    assert_eq!(records.len(), 2);
    assert!(!records[0].valid);
    assert!(records[0]
        .error
        .as_deref()
        .unwrap()
        .contains("InfeasibleParity"));
    assert!(records[1].accepted());
}

#[test]
fn exact_too_large_is_recorded_not_fatal() {
    let records = collect(&[RunSpec::derived(SolverSpec::Exact, 100, 3, 1, 0)], 1);
    assert!(!records[0].accepted());
    assert!(records[0].error.is_some());
}

#[test]
fn worker_count_does_not_change_results() {
    let sa = SolverSpec::Sa {
        schedule: AnnealSchedule::new(0.0, 6.0, 50, Ramp::Linear).unwrap(),
    };
    let matrix = vec![
        RunSpec::derived(SolverSpec::Ga, 500, 3, 3, 1),
        RunSpec::derived(SolverSpec::Dga, 500, 5, 3, 1),
        RunSpec::derived(sa, 300, 3, 2, 1),
        RunSpec::derived(SolverSpec::Dga, 7, 3, 1, 1),
    ];
    let strip = |rs: Vec<BenchRecord>| -> Vec<_> {
        rs.into_iter()
            .map(|r| {
                (
                    r.solver,
                    r.n,
                    r.d,
                    r.repetition,
                    r.instance_seed,
                    r.solver_seed,
                    r.alpha,
                    r.valid,
                    r.error,
                )
            })
            .collect()
    };
    let serial = strip(collect(&matrix, 1));
    let parallel = strip(collect(&matrix, 4));
    assert_eq!(serial, parallel);
}

#[test]
fn sink_sees_records_in_order_and_errors_abort() {
    let matrix = vec![RunSpec::derived(SolverSpec::Dga, 200, 3, 6, 2)];
    let mut seen = Vec::new();
    run_benchmark(&matrix, &builtin_bounds(), 3, |r| {
        seen.push(r.repetition);
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);

    let mut count = 0;
    let err = run_benchmark(&matrix, &builtin_bounds(), 2, |_| {
        count += 1;
        if count == 2 {
            Err(HarnessError::Io(std::io::Error::other("disk full")))
        } else {
            Ok(())
        }
    });
    assert!(err.is_err());
}

#[test]
fn jsonl_round_trip_and_reports() {
    let matrix = vec![
        RunSpec::derived(SolverSpec::Ga, 300, 3, 2, 5),
        RunSpec::derived(SolverSpec::Dga, 300, 3, 2, 5),
        RunSpec::derived(SolverSpec::Dga, 300, 4, 1, 5),
    ];
    let mut buf = Vec::new();
    let records = run_benchmark(&matrix, &builtin_bounds(), 1, jsonl_sink(&mut buf)).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 5);
    let back = parse_records(&text).unwrap();
    assert_eq!(back, records);

    let csv = emit_report(&back, &builtin_bounds(), ReportFormat::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("ga,3,300,"));
    // No tabulated bound for d = 4: empty ratio column.
    assert_eq!(lines[5].split(',').nth(6), Some(""));

    let jl = emit_report(&back, &builtin_bounds(), ReportFormat::JsonLines);
    assert_eq!(parse_records(&jl).unwrap().len(), 5);

    let table = emit_report(&back, &builtin_bounds(), ReportFormat::PlotTable);
    assert!(table.contains("# solver=dga d=3"));
    assert!(table.contains("rho_ub=0.45537"));
    assert!(table.contains("ar_1rsb=0.990"));

    // Adding a bound later fills in the ratio.
    let mut bounds = builtin_bounds();
    bounds
        .insert(BoundsRow {
            d: 4,
            rho_ub: Some(0.41635),
            ar_1rsb: None,
            ar_mcmc: None,
            ar_bpr: None,
        })
        .unwrap();
    let csv = emit_report(&back, &bounds, ReportFormat::Csv);
    let ar: f64 = csv
        .lines()
        .nth(5)
        .unwrap()
        .split(',')
        .nth(6)
        .unwrap()
        .parse()
        .unwrap();
    assert!(ar > 0.8 && ar < 1.05);
}

#[test]
fn malformed_record_reports_line_number() {
    let good =
        serde_json::to_string(&collect(&[RunSpec::derived(SolverSpec::Dga, 50, 3, 1, 0)], 1)[0])
            .unwrap();
    let text = format!("{good}\n\n{{\"solver\":\"dga\"}}\n");
    match parse_records(&text) {
        Err(HarnessError::MalformedRecord { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scaling_fit_recovers_synthetic_exponent() {
    let template = collect(&[RunSpec::derived(SolverSpec::Dga, 50, 3, 1, 0)], 1).remove(0);
    let mut records = Vec::new();
    for n in [1000usize, 10_000, 100_000] {
        for k in 0..3 {
            let mut r = template.clone();
            r.n = n;
            r.time_s = Some(2e-7 * (n as f64).powf(1.1) * (1.0 + 0.01 * k as f64));
            records.push(r);
        }
    }
    let fit = fit_scaling(&records).unwrap();
    assert!((fit.exponent - 1.1).abs() < 1e-6, "{fit:?}");
    assert!(fit.r_squared > 0.999);
    assert_eq!((fit.n_min, fit.n_max), (1000, 100_000));

    assert!(matches!(
        fit_scaling(&records[..6]),
        Err(HarnessError::InsufficientPoints(2))
    ));
    let mut mixed = records.clone();
    mixed[0].d = 5;
    assert!(matches!(
        fit_scaling(&mixed),
        Err(HarnessError::MixedRecords(_))
    ));
}

#[test]
fn hard_benchmark_matrix_shape() {
    let m = hard_benchmark_matrix(&[1000, 2000], 3, 7);
    assert_eq!(m.len(), 2 * 4 * 2 * 3);
    assert!(m.iter().all(|s| s.d == 20 || s.d == 100));
    let ids: std::collections::BTreeSet<&str> = m.iter().map(|s| s.solver.id()).collect();
    assert_eq!(
        ids.into_iter().collect::<Vec<_>>(),
        vec!["dga", "ga", "pt", "sa"]
    );
    // Same instance for every solver at a given (d, n, seed).
    let ga: Vec<u64> = m
        .iter()
        .filter(|s| s.solver.id() == "ga")
        .map(|s| s.instance_seed)
        .collect();
    let pt: Vec<u64> = m
        .iter()
        .filter(|s| s.solver.id() == "pt")
        .map(|s| s.instance_seed)
        .collect();
    assert_eq!(ga, pt);
}

#[test]
fn config_builds_matrix() {
    let cfg = BenchConfig::from_toml_str(
        r#"
master_seed = 1
records = "r.jsonl"
[sa]
sweeps = 10
[[run]]
solvers = ["dga", "sa"]
n = [100, 200]
d = [3]
repetitions = 2
"#,
    )
    .unwrap();
    let m = cfg.matrix().unwrap();
    assert_eq!(m.len(), 4);
    let records = collect(&m, 2);
    assert_eq!(records.len(), 8);
    assert!(records.iter().all(|r| r.accepted()));
}
