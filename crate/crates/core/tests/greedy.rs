use std::time::Instant;

use matchembed::exact::{blossom_mwpm, solve_exact};
use matchembed::generators::{gen_adversarial, gen_uniform_random, predicted_greedy_ratio, DEFAULT_EPSILON};
use matchembed::geometry::Points;
use matchembed::greedy::{distance_graph, euclidean_greedy_match, greedy_match, greedy_matching, TiePolicy};
use matchembed::oracle::brute_force_optimum;
use matchembed::{DenseGraph, ObjectiveKind};
use proptest::prelude::*;
use rand::Rng;

fn adversarial_ratio(t: u32) -> f64 {
    let inst = gen_adversarial(t, DEFAULT_EPSILON).unwrap();
    let greedy = greedy_match(&inst.graph, ObjectiveKind::Mcm, TiePolicy::ByIndex).unwrap().value;
    let opt = blossom_mwpm(&inst.graph).unwrap().value;
    greedy / opt
}

#[test]
fn adversarial_ratio_sequence() {
    let expected = [2.0, 3.5, 5.75, 9.125, 14.1875, 21.78125];
    let mut prev = 0.0;
    for (t, want) in (3..=8).zip(expected) {
        let got = adversarial_ratio(t);
        assert!(((got - want) / want).abs() < 1e-3, "t={t}: {got} vs {want}");
        assert!(((got - predicted_greedy_ratio(t)) / want).abs() < 1e-3);
        assert!(got > prev, "ratio not increasing at t={t}");
        prev = got;
    }
}

#[test]
fn adversarial_opt_agrees_with_oracle() {
    for t in 3..=5 {
        let inst = gen_adversarial(t, DEFAULT_EPSILON).unwrap();
        let (_, opt) = brute_force_optimum(&inst.graph, ObjectiveKind::Mcm).unwrap();
        assert_eq!(blossom_mwpm(&inst.graph).unwrap().value, opt);
    }
}

#[test]
fn greedy_never_beats_exact() {
    for bipartite in [false, true] {
        for seed in 0..100 {
            let n = 4 + 2 * (seed as usize % 20);
            let g = gen_uniform_random(n, seed, bipartite).unwrap();
            for o in ObjectiveKind::ALL {
                let greedy = greedy_match(&g, o, TiePolicy::ByIndex).unwrap();
                assert!(greedy.matching.is_perfect());
                let exact = solve_exact(&g, o).unwrap().value;
                assert!(greedy.value >= exact - 1e-9 * (1.0 + exact.abs()), "{o} n={n}");
            }
        }
    }
}

#[test]
fn equal_weights_give_optimal_cost() {
    for n in [2usize, 6, 20] {
        let g = DenseGraph::from_fn(n, false, |_, _| 2.5).unwrap();
        let greedy = greedy_match(&g, ObjectiveKind::Mcm, TiePolicy::Randomized { seed: 4 }).unwrap().value;
        assert_eq!(greedy, solve_exact(&g, ObjectiveKind::Mcm).unwrap().value);
    }
}

fn random_points(rng: &mut impl Rng, n: usize, d: usize, grid: bool) -> Points {
    // A coarse integer grid produces many exactly tied distances.
    let data = (0..n * d)
        .map(|_| if grid { rng.gen_range(0..4) as f64 } else { rng.gen::<f64>() })
        .collect();
    Points::new(d, data).unwrap()
}

#[test]
fn euclidean_matches_dense_on_random_sets() {
    let mut rng = matchembed::rng::stream(2024, &[]);
    for case in 0..500u64 {
        let n = 2 * rng.gen_range(1..=100);
        let d = if case % 2 == 0 { 2 } else { 10 };
        let pts = random_points(&mut rng, n, d, case % 5 == 0);
        let policy = if case % 3 == 0 {
            TiePolicy::Randomized { seed: case }
        } else {
            TiePolicy::ByIndex
        };
        let fast = euclidean_greedy_match(&pts, policy).unwrap();
        let dense = greedy_matching(&distance_graph(&pts, false).unwrap(), policy);
        assert_eq!(fast, dense, "case {case} n={n} d={d}");
    }
}

#[test]
fn euclidean_is_faster_at_scale() {
    let mut rng = matchembed::rng::stream(7, &[]);
    let pts = random_points(&mut rng, 4096, 10, false);
    let t0 = Instant::now();
    let fast = euclidean_greedy_match(&pts, TiePolicy::ByIndex).unwrap();
    let fast_time = t0.elapsed();
    let t1 = Instant::now();
    let dense = greedy_matching(&distance_graph(&pts, false).unwrap(), TiePolicy::ByIndex);
    let dense_time = t1.elapsed();
    assert_eq!(fast, dense);
    assert!(fast_time < dense_time, "k-d tree {fast_time:?} vs dense {dense_time:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn output_is_perfect_and_deterministic(n in 1usize..30, seed in 0u64..1000, bipartite: bool) {
        let g = gen_uniform_random(2 * n, seed, bipartite).unwrap();
        let a = greedy_matching(&g, TiePolicy::ByIndex);
        prop_assert!(a.is_perfect());
        prop_assert!(!a.uses_sentinel(&g));
        prop_assert_eq!(a, greedy_matching(&g, TiePolicy::ByIndex));
    }

    #[test]
    fn euclidean_equivalence_small(
        rows in prop::collection::vec(prop::collection::vec(-3i32..3, 3), 1..20).prop_map(|r| {
            let mut r: Vec<Vec<f64>> = r.into_iter().map(|v| v.into_iter().map(f64::from).collect()).collect();
            if r.len() % 2 == 1 { r.pop(); }
            r
        }),
        seed in 0u64..50,
    ) {
        prop_assume!(!rows.is_empty());
        let pts = Points::from_rows(&rows).unwrap();
        for policy in [TiePolicy::ByIndex, TiePolicy::Randomized { seed }] {
            let fast = euclidean_greedy_match(&pts, policy).unwrap();
            let dense = greedy_matching(&distance_graph(&pts, false).unwrap(), policy);
            prop_assert_eq!(fast, dense);
        }
    }
}
