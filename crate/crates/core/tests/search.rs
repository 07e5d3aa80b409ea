mod common;

use qwmc::algorithms::SearchEngine;
use qwmc::rng::stream;
use qwmc::{instances, CnfFormula};

const RUNS: u64 = 10_000;

fn rate<F: Fn(u64) -> bool>(f: F) -> f64 {
    (0..RUNS).filter(|&i| f(i)).count() as f64 / RUNS as f64
}

#[test]
fn known_m_closed_forms() {
    let single = CnfFormula::from_dimacs(2, &[&[1], &[-2]]).unwrap();
    let e = SearchEngine::new(&single).unwrap();
    assert!((e.success_probability(1).unwrap() - 1.0).abs() < 1e-12);
    for i in 0..200 {
        let r = e.known_m(1, &mut stream(1, i)).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.assignment.to_string(), "10");
        assert_eq!(r.oracle_queries, 1);
    }

    let sprinkler = instances::sprinkler().formula;
    let e = SearchEngine::new(&sprinkler).unwrap();
    let theta = 0.5f64.sqrt().asin();
    let want = (3.0 * theta).sin().powi(2);
    assert!((e.success_probability(1).unwrap() - want).abs() < 1e-12);
    assert!((want - 0.5).abs() < 1e-12);
    let empirical = rate(|i| e.known_m(4, &mut stream(2, i)).unwrap().satisfied);
    assert!((empirical - 0.5).abs() < 0.02, "{empirical}");
}

#[test]
fn known_m_uniform_guess_cases() {
    let top = CnfFormula::tautology(3);
    let e = SearchEngine::new(&top).unwrap();
    for i in 0..100 {
        let r = e.known_m(8, &mut stream(3, i)).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.iterations, 0);
    }
    let bot = CnfFormula::contradiction(3);
    let e = SearchEngine::new(&bot).unwrap();
    let r = e.known_m(0, &mut stream(3, 0)).unwrap();
    assert!(!r.satisfied);
    assert!(e.known_m(9, &mut stream(3, 0)).is_err());
}

#[test]
fn known_m_succeeds_a_quarter_of_the_time_on_random_formulas() {
    let mut r = qwmc::rng::seeded(77);
    for i in 0..30 {
        let n = 2 + i % 5;
        let f = instances::random_cnf(&mut r, n, 1 + i % 4);
        let m = common::model_count(&f);
        if m == 0 {
            continue;
        }
        let e = SearchEngine::new(&f).unwrap();
        match qwmc::algorithms::grover_iterations(n, m) {
            Some(k) => assert!(e.success_probability(k).unwrap() >= 0.25),
            None => assert!(m * 4 > 3 << n),
        }
    }
}

#[test]
fn unknown_m_rates() {
    let f = instances::sprinkler().formula;
    let e = SearchEngine::new(&f).unwrap();
    assert!(rate(|i| e.unknown_m(&mut stream(4, i)).unwrap().satisfied) >= 0.25);
    let extra = rate(|i| e.extra_qubit(&mut stream(5, i)).unwrap().satisfied);
    assert!(extra >= 0.25, "{extra}");

    let top = SearchEngine::new(&CnfFormula::tautology(4)).unwrap();
    let r = top.unknown_m(&mut stream(6, 0)).unwrap();
    assert!(r.satisfied);
    assert_eq!((r.iterations, r.oracle_queries), (0, 1));
}

#[test]
fn extra_qubit_flags_and_contradiction() {
    let e = SearchEngine::new(&instances::sprinkler().formula).unwrap();
    for i in 0..2000 {
        let r = e.extra_qubit(&mut stream(7, i)).unwrap();
        if r.satisfied {
            assert_eq!(r.extra_bit, Some(true));
        }
    }
    let bot = SearchEngine::new(&CnfFormula::contradiction(3)).unwrap();
    for i in 0..500 {
        assert!(!bot.extra_qubit(&mut stream(8, i)).unwrap().satisfied);
        assert!(!bot.unknown_m(&mut stream(8, i)).unwrap().satisfied);
    }
}
