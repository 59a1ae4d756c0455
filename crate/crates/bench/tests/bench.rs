use matchembed::generators::predicted_greedy_ratio;
use matchembed_bench::{
    read_trials_csv, render_svg, run_experiment, summarize, t_critical, write_trials_csv, Algorithm, ExperimentSpec,
    GeneratorKind, Sweep, SweepVar, TrialRecord,
};
use matchembed::ObjectiveKind;

/// Student-t density integrated with composite Simpson; independent of statrs.
fn t_cdf(x: f64, df: f64) -> f64 {
    let ln_gamma = |z: f64| {
        // Lanczos, g = 7.
        const C: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let z = z - 1.0;
        let mut a = C[0];
        let t = z + 7.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    };
    let norm = (ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0)).exp() / (df * std::f64::consts::PI).sqrt();
    let pdf = |u: f64| norm * (1.0 + u * u / df).powf(-(df + 1.0) / 2.0);
    let steps = 200_000;
    let h = x / steps as f64;
    let mut s = pdf(0.0) + pdf(x);
    for i in 1..steps {
        s += pdf(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + s * h / 3.0
}

fn t_quantile(p: f64, df: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn record(algorithm: &str, trial: usize, ratio: f64) -> TrialRecord {
    TrialRecord {
        experiment: "unit".into(),
        generator: "none".into(),
        sweep_var: "t".into(),
        sweep_value: 1.0,
        objective: "mcm".into(),
        algorithm: algorithm.into(),
        trial,
        seed: trial as u64,
        value: Some(ratio),
        optimum: Some(1.0),
        ratio: Some(ratio),
        difference: Some(ratio - 1.0),
        ratio_undefined: false,
        uses_sentinel: false,
        error: String::new(),
    }
}

#[test]
fn critical_values_match_numeric_quantile() {
    assert!((t_critical(4).unwrap() - 2.776).abs() < 1e-3);
    assert!((t_critical(1).unwrap() - 12.706).abs() < 1e-3);
    for df in [1usize, 2, 4, 9, 29] {
        let oracle = t_quantile(0.975, df as f64);
        assert!((t_critical(df).unwrap() - oracle).abs() < 1e-5, "df {df}: oracle {oracle}");
    }
}

#[test]
fn summary_examples() {
    let ones: Vec<_> = (0..5).map(|t| record("greedy", t, 1.0)).collect();
    let s = summarize(&ones).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!((s[0].mean, s[0].half_width), (1.0, 0.0));

    let pair = vec![record("greedy", 0, 1.0), record("greedy", 1, 3.0)];
    let s = summarize(&pair).unwrap();
    assert_eq!(s[0].mean, 2.0);
    assert!((s[0].half_width - 12.706).abs() < 1e-3);

    let xs = [1.2, 1.9, 1.4, 2.6, 1.1];
    let five: Vec<_> = xs.iter().enumerate().map(|(t, &x)| record("deepwalk", t, x)).collect();
    let s = summarize(&five).unwrap();
    let mean = xs.iter().sum::<f64>() / 5.0;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0).sqrt();
    assert!((s[0].mean - mean).abs() < 1e-12);
    assert!((s[0].half_width - t_quantile(0.975, 4.0) * sd / 5f64.sqrt()).abs() < 1e-6);
    assert!((s[0].upper - s[0].lower - 2.0 * s[0].half_width).abs() < 1e-12);
}

#[test]
fn single_record_cell_is_an_error() {
    assert!(summarize(&[record("greedy", 0, 1.0)]).is_err());
    let mut failed = vec![record("greedy", 0, 1.0), record("greedy", 1, 1.0)];
    failed[1].error = "boom".into();
    assert!(summarize(&failed).is_err());
}

fn adversarial_spec(algorithms: Vec<Algorithm>, ts: &[f64]) -> ExperimentSpec {
    ExperimentSpec {
        id: "adv".into(),
        generator: GeneratorKind::Adversarial,
        algorithms,
        sweep: Sweep {
            var: SweepVar::T,
            values: ts.to_vec(),
        },
        trials: 2,
        ..ExperimentSpec::default()
    }
}

#[test]
fn exact_only_gives_unit_ratios() {
    for objective in [ObjectiveKind::Mcm, ObjectiveKind::Bm] {
        let spec = ExperimentSpec {
            generator: GeneratorKind::Uniform,
            n: 12,
            objective,
            algorithms: vec![Algorithm::Exact],
            sweep: Sweep {
                var: SweepVar::N,
                values: vec![8.0, 12.0],
            },
            trials: 3,
            ..ExperimentSpec::default()
        };
        let result = run_experiment(&spec, 1).unwrap();
        assert_eq!(result.records.len(), 6);
        assert!(result.records.iter().all(|r| r.ratio == Some(1.0)));
    }
}

#[test]
fn adversarial_greedy_ratio_column() {
    let spec = adversarial_spec(vec![Algorithm::Greedy], &[3.0, 4.0, 5.0, 6.0, 7.0]);
    let result = run_experiment(&spec, 1).unwrap();
    for r in &result.records {
        let t = r.sweep_value as u32;
        let expected = predicted_greedy_ratio(t);
        assert!((r.ratio.unwrap() / expected - 1.0).abs() < 1e-3, "t={t}: {:?}", r.ratio);
    }
    let means: Vec<f64> = summarize(&result.records).unwrap().iter().map(|s| s.mean).collect();
    let expected = [2.0, 3.5, 5.75, 9.125, 14.1875];
    for (m, e) in means.iter().zip(expected) {
        assert!((m - e).abs() / e < 1e-3);
    }
}

#[test]
fn records_respect_invariants() {
    let spec = ExperimentSpec {
        generator: GeneratorKind::Uniform,
        algorithms: vec![Algorithm::Exact, Algorithm::Greedy, Algorithm::DeepWalk, Algorithm::Node2Vec],
        sweep: Sweep {
            var: SweepVar::N,
            values: vec![10.0, 16.0],
        },
        trials: 2,
        ..ExperimentSpec::default()
    };
    for objective in ObjectiveKind::ALL {
        for bipartite in [false, true] {
            let spec = ExperimentSpec {
                objective,
                bipartite,
                ..spec.clone()
            };
            let result = run_experiment(&spec, 1).unwrap();
            assert!(result.failed_cells.is_empty());
            for (r, t) in result.records.iter().zip(&result.timings) {
                assert!(r.is_ok(), "{}", r.error);
                let opt = r.optimum.unwrap();
                if opt > 0.0 {
                    assert!(r.ratio.unwrap() >= 1.0 - 1e-12, "{objective} {}: {:?}", r.algorithm, r.ratio);
                } else {
                    assert!(r.ratio.is_none() && r.ratio_undefined);
                }
                assert!(r.difference.unwrap() >= -1e-9);
                assert!(t.embed_ms + t.solve_ms <= t.total_ms + 1e-9, "{t:?}");
            }
        }
    }
}

#[test]
fn zero_optimum_stores_difference() {
    // t = 2 is a single edge: max - min is 0.
    let mut spec = adversarial_spec(vec![Algorithm::Exact, Algorithm::Greedy], &[2.0]);
    spec.objective = ObjectiveKind::Um;
    let result = run_experiment(&spec, 1).unwrap();
    for r in &result.records {
        assert_eq!(r.optimum, Some(0.0));
        assert!(r.ratio.is_none() && r.ratio_undefined);
        assert_eq!(r.difference, Some(0.0));
    }
    let s = summarize(&result.records).unwrap();
    assert!(s.iter().all(|row| row.metric == "difference" && row.mean == 0.0));
}

#[test]
fn failed_cells_are_flagged_and_run_continues() {
    let spec = adversarial_spec(vec![Algorithm::Greedy], &[3.0, 40.0]);
    let result = run_experiment(&spec, 1).unwrap();
    assert_eq!(result.records.len(), 4);
    assert!(result.records[..2].iter().all(|r| r.is_ok()));
    assert!(result.records[2..].iter().all(|r| !r.is_ok()));
    assert_eq!(result.failed_cells, vec![(1, Algorithm::Greedy)]);
}

#[test]
fn csv_round_trip() {
    let mut records = vec![record("greedy", 0, 2.5)];
    assert_eq!(
        {
            let mut buf = Vec::new();
            write_trials_csv(&records, &mut buf).unwrap();
            String::from_utf8(buf).unwrap().lines().count()
        },
        2
    );
    let mut odd = record("node2vec", 1, 1.0 / 3.0);
    odd.value = None;
    odd.ratio = None;
    odd.difference = None;
    odd.ratio_undefined = true;
    odd.error = "bad \"thing\", with comma\nand newline".into();
    odd.generator = "lomax(alpha=2,n=100,bipartite=false)".into();
    odd.sweep_value = 0.1 + 0.2;
    odd.seed = u64::MAX;
    records.push(odd);
    let mut buf = Vec::new();
    write_trials_csv(&records, &mut buf).unwrap();
    assert_eq!(read_trials_csv(buf.as_slice()).unwrap(), records);

    let result = run_experiment(&adversarial_spec(vec![Algorithm::Exact, Algorithm::Greedy], &[3.0, 4.0]), 1).unwrap();
    let mut buf = Vec::new();
    write_trials_csv(&result.records, &mut buf).unwrap();
    assert_eq!(read_trials_csv(buf.as_slice()).unwrap(), result.records);
}

fn csv_bytes(spec: &ExperimentSpec, threads: usize) -> Vec<u8> {
    let result = run_experiment(spec, threads).unwrap();
    let mut buf = Vec::new();
    write_trials_csv(&result.records, &mut buf).unwrap();
    buf
}

#[test]
fn byte_identical_across_thread_counts() {
    let mut spec = adversarial_spec(vec![Algorithm::Greedy, Algorithm::DeepWalk, Algorithm::Node2Vec], &[3.0, 4.0]);
    spec.embedding.walks_per_node = 4;
    spec.embedding.walk_length = 8;
    spec.embedding.epochs = 2;
    spec.seed = 99;
    let one = csv_bytes(&spec, 1);
    assert_eq!(one, csv_bytes(&spec, 2));
    assert_eq!(one, csv_bytes(&spec, 8));
    spec.seed = 100;
    assert_ne!(one, csv_bytes(&spec, 1));
}

#[test]
fn svg_has_one_series_per_algorithm() {
    let result = run_experiment(&adversarial_spec(vec![Algorithm::Exact, Algorithm::Greedy], &[3.0, 4.0, 5.0]), 1).unwrap();
    let svg = render_svg(&summarize(&result.records).unwrap());
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches(r#"class="series""#).count(), 2);
    assert!(svg.contains(r#"data-algorithm="greedy""#));
    assert_eq!(svg.matches("<circle").count(), 6);
    let means: Vec<f64> = svg
        .split(r#"data-mean=""#)
        .skip(1)
        .map(|s| s.split('"').next().unwrap().parse().unwrap())
        .collect();
    assert!(means.iter().any(|m| (m - 5.75).abs() < 1e-3));
}
