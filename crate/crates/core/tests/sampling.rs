mod common;

use rayon::prelude::*;
use qwmc::algorithms::WcsEngine;
use qwmc::rng::stream;
use qwmc::{instances, rng, WeightedFormula};

const SHOTS: u64 = 100_000;

/// Empirical query distribution over successful draws.
fn conditional_histogram<F>(width: usize, draw: F) -> (Vec<f64>, u64)
where
    F: Fn(u64) -> Option<(u64, bool)> + Sync,
{
    let draws: Vec<_> = (0..SHOTS).into_par_iter().map(&draw).collect();
    let mut counts = vec![0u64; 1 << width];
    let mut successes = 0;
    for (outcome, ok) in draws.into_iter().flatten() {
        if ok {
            counts[outcome as usize] += 1;
            successes += 1;
        }
    }
    let freq = counts.iter().map(|&c| c as f64 / successes as f64).collect();
    (freq, successes)
}

#[test]
fn sprinkler_conditional_distribution() {
    let wf = instances::sprinkler();
    let engine = WcsEngine::new(&wf).unwrap();
    let exact = common::normalized_wmc(&wf);

    let all = [0, 1, 2];
    let want = common::conditional_distribution(&wf, &all);
    let expected = [(0b000, 0.1392), (0b100, 0.3247), (0b110, 0.1392), (0b101, 0.3969)];
    for (q, p) in expected {
        assert!((want[q] - p).abs() < 1e-4, "{q:03b}");
    }
    let (got, _) = conditional_histogram(3, |i| {
        let r = engine.known_wmc(&all, exact, &mut stream(5, i)).unwrap();
        Some((r.outcome, r.succeeded))
    });
    assert!(common::total_variation(&got, &want) < 0.03);

    let sw = [0, 2];
    let want = common::conditional_distribution(&wf, &sw);
    for (q, p) in [(0b00, 0.1392), (0b10, 0.4639), (0b11, 0.3969)] {
        assert!((want[q] - p).abs() < 1e-4);
    }
    let (got, successes) = conditional_histogram(2, |i| {
        let r = engine.full(&sw, None, 1, &mut stream(6, i)).ok()?;
        Some((r.outcome, r.succeeded))
    });
    assert!(successes > SHOTS / 2);
    assert!(common::total_variation(&got, &want) < 0.03);
}

#[test]
fn random_instances_conditional_distribution() {
    let mut r = rng::seeded(99);
    let mut checked = 0;
    let mut i = 0;
    while checked < 20 {
        let n = 2 + i % 4;
        let wf: WeightedFormula = instances::random_weighted(&mut r, n, 1 + i % 3);
        i += 1;
        if common::model_count(&wf.formula) == 0 {
            continue;
        }
        let query: Vec<usize> = (0..n).step_by(1 + i % 2).collect();
        let want = common::conditional_distribution(&wf, &query);
        let engine = WcsEngine::new(&wf).unwrap();
        let wmc = common::normalized_wmc(&wf);
        let (got, _) = conditional_histogram(query.len(), |s| {
            let res = engine.known_wmc(&query, wmc, &mut stream(i as u64, s)).unwrap();
            Some((res.outcome, res.succeeded))
        });
        let tv = common::total_variation(&got, &want);
        assert!(tv < 0.03, "instance {i}: tv {tv}");
        checked += 1;
    }
}

#[test]
fn unknown_wmc_sampling_succeeds_a_quarter_of_the_time() {
    let wf = instances::sprinkler();
    let engine = WcsEngine::new(&wf).unwrap();
    let ok = (0..10_000u64)
        .filter(|&i| engine.unknown_wmc(&[0, 1, 2], &mut stream(8, i)).unwrap().succeeded)
        .count();
    assert!(ok as f64 / 1e4 >= 0.25, "rate {}", ok as f64 / 1e4);
}

#[test]
fn failed_draws_never_extend_to_models() {
    let wf = instances::sprinkler();
    let engine = WcsEngine::new(&wf).unwrap();
    for i in 0..2000 {
        let r = engine.known_wmc(&[0, 1, 2], 0.679, &mut stream(3, i)).unwrap();
        let x = r.world & 0b111;
        assert_eq!(r.succeeded, (r.world >> 3) & 1 == 1 && common::eval(&wf.formula, x));
    }
}
