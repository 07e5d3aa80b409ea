mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qwmc::algorithms::{weighted_iterations, WcsEngine};
use qwmc::{instances, rng, WeightedFormula};

/// Amplitudes of `Rot|0⟩` on the solution subspace (`γ`) and its complement
/// (`δ`), each normalized, from the weights alone.
fn good_bad(wf: &WeightedFormula) -> (Vec<f64>, Vec<f64>, f64) {
    let n = wf.num_vars();
    let p = common::probabilities(wf);
    let wmc = common::normalized_wmc(wf);
    let mut good = vec![0.0; 1 << (n + 1)];
    let mut bad = vec![0.0; 1 << (n + 1)];
    for x in 0..1u64 << (n + 1) {
        let amp = (common::world_weight(&p, x & ((1 << n) - 1)) / 2.0).sqrt();
        let solution = (x >> n) & 1 == 1 && common::eval(&wf.formula, x & ((1 << n) - 1));
        if solution {
            good[x as usize] = amp / (wmc / 2.0).sqrt();
        } else {
            bad[x as usize] = amp / (1.0 - wmc / 2.0).sqrt();
        }
    }
    (good, bad, wmc)
}

fn overlap(a: &[f64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn satisfiable_instances(count: usize, max_n: usize, seed: u64) -> Vec<WeightedFormula> {
    let mut r = rng::seeded(seed);
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let n = 1 + i % max_n;
        let wf = instances::random_weighted(&mut r, n, 1 + i % 4);
        i += 1;
        if common::model_count(&wf.formula) > 0 {
            out.push(wf);
        }
    }
    out
}

#[test]
fn rotation_identity_on_random_instances() {
    for wf in satisfiable_instances(50, 6, 11) {
        let (good, bad, wmc) = good_bad(&wf);
        let theta = (wmc / 2.0).sqrt().asin();
        let engine = WcsEngine::new(&wf).unwrap();
        for k in 0..=10u64 {
            let s = engine.state_after(k).unwrap();
            let phase = ((2 * k + 1) as f64 * theta).sin_cos();
            let g = overlap(&good, s.amplitudes());
            let b = overlap(&bad, s.amplitudes());
            assert!((g - phase.0).norm() < 1e-9, "k={k} good {g} vs {}", phase.0);
            assert!((b - phase.1).norm() < 1e-9, "k={k} bad {b} vs {}", phase.1);
            let p = engine.success_probability(k).unwrap();
            assert!((p - phase.0.powi(2)).abs() < 1e-9);
        }
    }
}

#[test]
fn known_wmc_iteration_reaches_one_half() {
    for wf in satisfiable_instances(60, 6, 12) {
        let wmc = common::normalized_wmc(&wf);
        let (_, r) = weighted_iterations(wmc).unwrap();
        let p = WcsEngine::new(&wf).unwrap().success_probability(r).unwrap();
        assert!(p >= 0.5 - 1e-12, "success {p} for WMC {wmc}");
    }
}

/// Query marginal from the closed forms: a solution part proportional to the
/// model weight consistent with `q`, and a non-solution part carrying the
/// whole weight of `q` (extra qubit 0) plus its non-models (extra qubit 1).
fn closed_form_marginal(wf: &WeightedFormula, query: &[usize], k: u64) -> Vec<f64> {
    let n = wf.num_vars();
    let p = common::probabilities(wf);
    let wmc = common::normalized_wmc(wf);
    let theta = (wmc / 2.0).sqrt().asin();
    let (s, c) = ((2 * k + 1) as f64 * theta).sin_cos();
    let mut models = vec![0.0; 1 << query.len()];
    let mut all = vec![0.0; 1 << query.len()];
    let mut non_models = vec![0.0; 1 << query.len()];
    for x in 0..1u64 << n {
        let q = common::bits(x, query) as usize;
        let w = common::world_weight(&p, x);
        all[q] += w;
        if common::eval(&wf.formula, x) {
            models[q] += w;
        } else {
            non_models[q] += w;
        }
    }
    (0..models.len())
        .map(|q| s * s * models[q] / wmc + c * c * (all[q] + non_models[q]) / (2.0 - wmc))
        .collect()
}

#[test]
fn query_marginal_matches_closed_form_and_cross_terms_vanish() {
    let mut queries_checked = 0;
    for wf in satisfiable_instances(30, 4, 13) {
        let n = wf.num_vars();
        let engine = WcsEngine::new(&wf).unwrap();
        let (good, bad, _) = good_bad(&wf);
        for mask in 1u32..1 << n {
            let query: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            // Cross terms: γ and δ never share a basis state with the same q.
            let mut cross = vec![0.0; 1 << query.len()];
            for x in 0..1u64 << (n + 1) {
                cross[common::bits(x, &query) as usize] += good[x as usize] * bad[x as usize];
            }
            assert!(cross.iter().all(|c| c.abs() < 1e-15));
            for k in 0..4u64 {
                let sim = engine.state_after(k).unwrap().marginal_probabilities(&query).unwrap();
                let want = closed_form_marginal(&wf, &query, k);
                for (q, w) in want.iter().enumerate() {
                    assert!((sim.probability(q as u64) - w).abs() < 1e-9);
                }
            }
            queries_checked += 1;
        }
    }
    assert!(queries_checked > 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn success_probability_is_closed_form(seed in any::<u64>(), n in 1usize..=6, m in 0usize..=5, k in 0u64..=10) {
        let wf = instances::random_weighted(&mut rng::seeded(seed), n, m);
        let wmc = common::normalized_wmc(&wf);
        let theta = (wmc / 2.0).sqrt().asin();
        let p = WcsEngine::new(&wf).unwrap().success_probability(k).unwrap();
        prop_assert!((p - ((2 * k + 1) as f64 * theta).sin().powi(2)).abs() < 1e-9);
    }
}
