mod common;

use qwmc::baselines::{
    classical_count_estimate, classical_search, classical_wmc_estimate, vote_event_probability,
};
use qwmc::rng::{seeded, stream};
use qwmc::{instances, CnfFormula, WeightTable, WeightedFormula};

#[test]
fn sprinkler_estimators() {
    let wf = instances::sprinkler();
    let c = classical_count_estimate(&wf.formula, 100_000, &mut seeded(1)).unwrap();
    assert!((c.estimate - 4.0).abs() < 0.15, "{}", c.estimate);
    assert_eq!(c.queries, 100_000);
    let w = classical_wmc_estimate(&wf, 100_000, &mut seeded(2)).unwrap();
    assert!((w.estimate - 0.679).abs() < 0.0045, "{}", w.estimate);
    assert_eq!(w.queries, 100_000);
}

#[test]
fn wmc_estimator_is_unbiased() {
    let wf = instances::sprinkler();
    let exact = common::normalized_wmc(&wf);
    let (runs, s) = (1000u64, 200u64);
    let mean = (0..runs)
        .map(|i| classical_wmc_estimate(&wf, s, &mut stream(3, i)).unwrap().estimate)
        .sum::<f64>()
        / runs as f64;
    let sigma = (exact * (1.0 - exact) / (s * runs) as f64).sqrt();
    assert!((mean - exact).abs() < 4.0 * sigma, "mean {mean}");
}

#[test]
fn error_shrinks_like_inverse_root_samples() {
    let wf = instances::sprinkler();
    let exact = common::normalized_wmc(&wf);
    let rmse = |s: u64| {
        let runs = 400;
        ((0..runs)
            .map(|i| {
                let e = classical_wmc_estimate(&wf, s, &mut stream(s, i)).unwrap().estimate;
                (e - exact).powi(2)
            })
            .sum::<f64>()
            / runs as f64)
            .sqrt()
    };
    let ratio = rmse(100) / rmse(1600);
    assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
}

#[test]
fn degenerate_weights_are_deterministic() {
    let f = CnfFormula::from_dimacs(2, &[&[1], &[-2]]).unwrap();
    let wf = WeightedFormula::new(f, WeightTable::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap()).unwrap();
    assert_eq!(classical_wmc_estimate(&wf, 50, &mut seeded(4)).unwrap().estimate, 1.0);
    let bot = WeightedFormula::uniform(CnfFormula::contradiction(2));
    assert_eq!(classical_wmc_estimate(&bot, 50, &mut seeded(4)).unwrap().estimate, 0.0);
}

#[test]
fn search_budget_one_on_sprinkler() {
    let f = instances::sprinkler().formula;
    let hits = (0..20_000u64)
        .filter(|&i| classical_search(&f, 1, &mut stream(5, i)).unwrap().model.is_some())
        .count();
    assert!((hits as f64 / 2e4 - 0.5).abs() < 0.015);
    let top = classical_search(&CnfFormula::tautology(3), 10, &mut seeded(6)).unwrap();
    assert_eq!(top.queries, 1);
}

#[test]
fn vote_event_study() {
    let mut r = seeded(7);
    assert!(vote_event_probability(5, 20, 1000.0, 2000, &mut r).unwrap() > 0.99);
    let sym = vote_event_probability(2, 10_001, 1.0, 4000, &mut r).unwrap();
    assert!((sym - 0.5).abs() < 0.04, "{sym}");
    assert!(vote_event_probability(50, 10_000, 3.0, 500, &mut r).unwrap() > 0.99);
    assert!(vote_event_probability(1, 10, 2.0, 10, &mut r).is_err());
}
