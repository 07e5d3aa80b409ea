use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use qwmc::algorithms::{default_t, vote_with_engine, CountEstimate, VoteResult, WcsEngine, WmcEstimate, WmcSource};
use qwmc::baselines::{classical_count_estimate, classical_wmc_estimate, complexity_curve, to_csv};
use qwmc::circuits::{
    build_grover, build_marking_oracle, build_qft, build_rot, build_weighted_grover,
    marking_to_phase, OracleSpec, DEFAULT_ANCILLA_BUDGET,
};
use qwmc::formula::ENUMERATION_LIMIT;
use qwmc::histogram::label;
use qwmc::rng::{derive_seed, stream};
use qwmc::{
    exact_map, exact_mpe, exact_normalized_wmc, exact_query_distribution, exact_wmc,
    instances, parse_weighted_dimacs, Error, Histogram, WeightedFormula,
};

use crate::cli::{CircuitKind, Common, Format, Method};
use crate::output::{emit, render, write_file};

// Stream indices, so that each stage draws from its own generator.
const QWMC_STREAM: u64 = 0;
const CLASSICAL_STREAM: u64 = 1;
const SHOTS_STREAM: u64 = 2;

struct Loaded {
    name: String,
    wf: WeightedFormula,
}

fn load(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let wf = parse_weighted_dimacs(&text)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());
    Ok(Loaded { name, wf })
}

fn enumerable(wf: &WeightedFormula) -> bool {
    wf.num_vars() <= ENUMERATION_LIMIT
}

/// 1-based CLI variables to 0-based indices.
fn parse_query(query: Option<&[i64]>, num_vars: usize, default_all: bool) -> Result<Vec<usize>> {
    let Some(vars) = query else {
        if default_all {
            return Ok((0..num_vars).collect());
        }
        return Err(Error::InvalidArgument("--query is required".into()).into());
    };
    if vars.is_empty() {
        return Err(Error::InvalidArgument("query must not be empty".into()).into());
    }
    let mut out: Vec<usize> = Vec::with_capacity(vars.len());
    for &v in vars {
        if v < 1 || v as usize > num_vars {
            return Err(Error::VariableOutOfRange { var: v, num_vars }.into());
        }
        let idx = v as usize - 1;
        if out.contains(&idx) {
            return Err(Error::InvalidArgument(format!("variable {v} repeated in query")).into());
        }
        out.push(idx);
    }
    Ok(out)
}

fn one_based(query: &[usize]) -> Vec<usize> {
    query.iter().map(|v| v + 1).collect()
}

#[derive(Serialize)]
struct OutcomeCount {
    outcome: String,
    count: u64,
}

fn outcome_counts(h: &Histogram) -> Vec<OutcomeCount> {
    let mut rows: Vec<OutcomeCount> = h
        .iter()
        .map(|(o, count)| OutcomeCount {
            outcome: h.label(o),
            count,
        })
        .collect();
    rows.sort_by(|a, b| a.outcome.cmp(&b.outcome));
    rows
}

#[derive(Serialize)]
struct PhaseCount {
    y: u64,
    count: u64,
    estimate: f64,
}

#[derive(Serialize)]
struct QuantumWmc {
    normalized_estimate: f64,
    raw_estimate: f64,
    t: usize,
    m: usize,
    shots: u64,
    measured_phase_integer: u64,
    phase: f64,
    error_bound: f64,
    oracle_queries: u64,
    histogram: Vec<PhaseCount>,
}

impl From<&WmcEstimate> for QuantumWmc {
    fn from(e: &WmcEstimate) -> Self {
        let scale = (1u64 << e.t) as f64;
        let histogram = e
            .histogram
            .iter()
            .map(|(y, count)| PhaseCount {
                y,
                count,
                estimate: 2.0 * (std::f64::consts::PI * y as f64 / scale).sin().powi(2),
            })
            .collect();
        Self {
            normalized_estimate: e.normalized_estimate,
            raw_estimate: e.raw_estimate,
            t: e.t,
            m: e.m,
            shots: e.shots,
            measured_phase_integer: e.measured_phase_integer,
            phase: e.measured_phase_integer as f64 / scale,
            error_bound: e.error_bound,
            oracle_queries: e.oracle_queries,
            histogram,
        }
    }
}

#[derive(Serialize)]
struct ExactWmc {
    wmc: f64,
    normalized_wmc: f64,
    v_product: f64,
    model_count: u64,
}

#[derive(Serialize)]
struct ClassicalWmc {
    normalized_estimate: f64,
    raw_estimate: f64,
    samples: u64,
    oracle_queries: u64,
}

#[derive(Serialize)]
struct WmcReport {
    command: &'static str,
    instance: String,
    num_vars: usize,
    num_clauses: usize,
    seed: u64,
    exact: Option<ExactWmc>,
    quantum: Option<QuantumWmc>,
    classical: Option<ClassicalWmc>,
}

fn exact_wmc_section(wf: &WeightedFormula) -> Result<ExactWmc> {
    Ok(ExactWmc {
        wmc: exact_wmc(wf)?,
        normalized_wmc: exact_normalized_wmc(wf)?,
        v_product: wf.normalized().v_product(),
        model_count: wf.formula.model_count()?,
    })
}

fn wmc_report(
    name: &str,
    wf: &WeightedFormula,
    seed: u64,
    method: Method,
    t: Option<usize>,
    shots: u64,
    samples: u64,
) -> Result<WmcReport> {
    let exact = if method == Method::Exact || (method.exact() && enumerable(wf)) {
        Some(exact_wmc_section(wf)?)
    } else {
        None
    };
    let quantum = if method.quantum() {
        let engine = WcsEngine::new(wf)?;
        Some(QuantumWmc::from(&engine.qwmc(t, shots, &mut stream(seed, QWMC_STREAM))?))
    } else {
        None
    };
    let classical = if method.classical() {
        let est = classical_wmc_estimate(wf, samples, &mut stream(seed, CLASSICAL_STREAM))?;
        Some(ClassicalWmc {
            normalized_estimate: est.estimate,
            raw_estimate: est.estimate * wf.normalized().v_product(),
            samples,
            oracle_queries: est.queries,
        })
    } else {
        None
    };
    Ok(WmcReport {
        command: "wmc",
        instance: name.into(),
        num_vars: wf.num_vars(),
        num_clauses: wf.formula.clauses().len(),
        seed,
        exact,
        quantum,
        classical,
    })
}

pub fn wmc(c: &Common, samples: u64) -> Result<()> {
    let l = load(&c.input)?;
    let r = wmc_report(&l.name, &l.wf, c.seed, c.method, c.t_bits, c.shots, samples)?;
    emit(&r, c.format, c.out_dir.as_deref(), "wmc")
}

#[derive(Serialize)]
struct OutcomeProbability {
    outcome: String,
    probability: f64,
}

#[derive(Serialize)]
struct SampleReport {
    command: &'static str,
    instance: String,
    num_vars: usize,
    seed: u64,
    query: Vec<usize>,
    shots: u64,
    t: usize,
    qwmc_shots: u64,
    successes: u64,
    success_rate: f64,
    zero_estimates: u64,
    oracle_queries: u64,
    histogram: Vec<OutcomeCount>,
    raw_histogram: Vec<OutcomeCount>,
    exact_distribution: Option<Vec<OutcomeProbability>>,
}

pub fn sample(c: &Common, qwmc_shots: u64) -> Result<()> {
    let l = load(&c.input)?;
    let wf = &l.wf;
    let query = parse_query(c.query.as_deref(), wf.num_vars(), true)?;
    let t = c.t_bits.unwrap_or_else(|| default_t(wf.num_vars()));
    let engine = WcsEngine::new(wf)?;
    let draws = engine.full_batch(&query, Some(t), qwmc_shots, c.shots, stream_seed(c.seed))?;

    let mut histogram = Histogram::new(query.len());
    let mut raw = Histogram::new(query.len());
    let (mut zero, mut queries) = (0u64, 0u64);
    for d in draws {
        match d {
            Ok(r) => {
                raw.record(r.outcome);
                queries += r.oracle_queries;
                if r.succeeded {
                    histogram.record(r.outcome);
                }
            }
            Err(Error::Unsatisfiable) => {
                zero += 1;
                queries += (1u64 << t) - 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if zero == c.shots {
        return Err(Error::Unsatisfiable.into());
    }
    let exact_distribution = if enumerable(wf) {
        let d = exact_query_distribution(wf, &query)?;
        let z: f64 = d.iter().sum();
        let mut rows: Vec<OutcomeProbability> = d
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(o, &p)| OutcomeProbability {
                outcome: label(o as u64, query.len()),
                probability: p / z,
            })
            .collect();
        rows.sort_by(|a, b| a.outcome.cmp(&b.outcome));
        Some(rows)
    } else {
        None
    };
    let successes = histogram.shots();
    let r = SampleReport {
        command: "sample",
        instance: l.name,
        num_vars: wf.num_vars(),
        seed: c.seed,
        query: one_based(&query),
        shots: c.shots,
        t,
        qwmc_shots,
        successes,
        success_rate: successes as f64 / c.shots as f64,
        zero_estimates: zero,
        oracle_queries: queries,
        histogram: outcome_counts(&histogram),
        raw_histogram: outcome_counts(&raw),
        exact_distribution,
    };
    emit(&r, c.format, c.out_dir.as_deref(), "sample")
}

fn stream_seed(seed: u64) -> u64 {
    derive_seed(seed, SHOTS_STREAM)
}

#[derive(Serialize)]
struct ExactOutcome {
    outcome: String,
    weight: f64,
}

#[derive(Serialize)]
struct VoteReport {
    command: &'static str,
    instance: String,
    num_vars: usize,
    seed: u64,
    query: Vec<usize>,
    shots: u64,
    wmc_source: &'static str,
    wmc_used: f64,
    iterations: u64,
    successes: u64,
    winner: Option<String>,
    oracle_queries: u64,
    histogram: Vec<OutcomeCount>,
    raw_histogram: Vec<OutcomeCount>,
    exact: Option<ExactOutcome>,
}

fn vote_report(
    command: &'static str,
    name: &str,
    wf: &WeightedFormula,
    query: &[usize],
    seed: u64,
    shots: u64,
    method: Method,
    t: Option<usize>,
) -> Result<VoteReport> {
    let (source, source_name) = match method {
        Method::Exact => (WmcSource::Exact, "exact"),
        Method::Quantum | Method::All => (WmcSource::Estimate { t, shots }, "quantum"),
        Method::Classical => {
            return Err(Error::InvalidArgument(format!("{command} has no classical method")).into())
        }
    };
    let engine = WcsEngine::new(wf)?;
    let v: VoteResult = vote_with_engine(&engine, query, shots, source, stream_seed(seed))?;
    let exact = if enumerable(wf) {
        let all: Vec<usize> = (0..wf.num_vars()).collect();
        if query == all.as_slice() {
            let (a, w) = exact_mpe(wf)?;
            Some(ExactOutcome {
                outcome: a.to_string(),
                weight: w,
            })
        } else {
            let (a, w) = exact_map(wf, query)?;
            Some(ExactOutcome {
                outcome: a.to_string(),
                weight: w,
            })
        }
    } else {
        None
    };
    if v.winner.is_none() && v.wmc_used <= 0.0 {
        return Err(Error::Unsatisfiable.into());
    }
    Ok(VoteReport {
        command,
        instance: name.into(),
        num_vars: wf.num_vars(),
        seed,
        query: one_based(query),
        shots,
        wmc_source: source_name,
        wmc_used: v.wmc_used,
        iterations: v.iterations,
        successes: v.successes,
        winner: v.winner.map(|w| v.histogram.label(w)),
        oracle_queries: v.oracle_queries,
        histogram: outcome_counts(&v.histogram),
        raw_histogram: outcome_counts(&v.raw_histogram),
        exact,
    })
}

pub fn mpe(c: &Common) -> Result<()> {
    let l = load(&c.input)?;
    let query: Vec<usize> = (0..l.wf.num_vars()).collect();
    let r = vote_report("mpe", &l.name, &l.wf, &query, c.seed, c.shots, c.method, c.t_bits)?;
    emit(&r, c.format, c.out_dir.as_deref(), "mpe")
}

pub fn map(c: &Common) -> Result<()> {
    let l = load(&c.input)?;
    let query = parse_query(c.query.as_deref(), l.wf.num_vars(), false)?;
    let r = vote_report("map", &l.name, &l.wf, &query, c.seed, c.shots, c.method, c.t_bits)?;
    emit(&r, c.format, c.out_dir.as_deref(), "map")
}

#[derive(Serialize)]
struct QuantumCount {
    estimate: u64,
    normalized_estimate: f64,
    t: usize,
    shots: u64,
    measured_phase_integer: u64,
    oracle_queries: u64,
    histogram: Vec<PhaseCount>,
}

#[derive(Serialize)]
struct ClassicalCount {
    estimate: f64,
    samples: u64,
    oracle_queries: u64,
}

#[derive(Serialize)]
struct CountReport {
    command: &'static str,
    instance: String,
    num_vars: usize,
    seed: u64,
    exact: Option<u64>,
    quantum: Option<QuantumCount>,
    classical: Option<ClassicalCount>,
}

pub fn count(c: &Common, samples: u64) -> Result<()> {
    let l = load(&c.input)?;
    let f = &l.wf.formula;
    let exact = if c.method == Method::Exact || (c.method.exact() && enumerable(&l.wf)) {
        Some(f.model_count()?)
    } else {
        None
    };
    let quantum = if c.method.quantum() {
        let uniform = WeightedFormula::uniform(f.clone());
        let engine = WcsEngine::new(&uniform)?;
        let est = engine.qwmc(c.t_bits, c.shots, &mut stream(c.seed, QWMC_STREAM))?;
        let q = QuantumWmc::from(&est);
        let ce = CountEstimate::from_wmc(f.num_vars(), est);
        Some(QuantumCount {
            estimate: ce.estimate,
            normalized_estimate: q.normalized_estimate,
            t: q.t,
            shots: q.shots,
            measured_phase_integer: q.measured_phase_integer,
            oracle_queries: q.oracle_queries,
            histogram: q.histogram,
        })
    } else {
        None
    };
    let classical = if c.method.classical() {
        let est = classical_count_estimate(f, samples, &mut stream(c.seed, CLASSICAL_STREAM))?;
        Some(ClassicalCount {
            estimate: est.estimate,
            samples,
            oracle_queries: est.queries,
        })
    } else {
        None
    };
    let r = CountReport {
        command: "count",
        instance: l.name,
        num_vars: f.num_vars(),
        seed: c.seed,
        exact,
        quantum,
        classical,
    };
    emit(&r, c.format, c.out_dir.as_deref(), "count")
}

#[derive(Serialize)]
struct ModelRow {
    world: String,
    weight: f64,
}

#[derive(Serialize)]
struct ExactReport {
    command: &'static str,
    instance: String,
    wmc: f64,
    normalized_wmc: f64,
    model_count: u64,
    models: Vec<ModelRow>,
    mpe: ExactOutcome,
    map_query: Vec<usize>,
    map: ExactOutcome,
}

#[derive(Serialize)]
struct ReproSummary {
    command: &'static str,
    seed: u64,
    shots: u64,
    t: usize,
    files: Vec<String>,
    wmc_mode_phase_integer: u64,
    wmc_mode_estimate: f64,
    mpe_mode: Option<String>,
    map_mode: Option<String>,
}

/// S and W, 0-based.
const SPRINKLER_MAP_QUERY: [usize; 2] = [0, 2];

pub fn repro_sprinkler(out_dir: &Path, seed: u64, shots: u64, t: usize, format: Format) -> Result<()> {
    let wf = instances::sprinkler();
    let name = "sprinkler";
    let ext = format.extension();

    let wmc = wmc_report(name, &wf, seed, Method::Quantum, Some(t), shots, 1)?;
    let q = wmc.quantum.as_ref().expect("quantum section requested");
    let (mode_y, mode_est) = (q.measured_phase_integer, q.normalized_estimate);

    let all: Vec<usize> = (0..wf.num_vars()).collect();
    let mpe = vote_report("mpe", name, &wf, &all, seed, shots, Method::Quantum, Some(t))?;
    let map = vote_report("map", name, &wf, &SPRINKLER_MAP_QUERY, seed, shots, Method::Quantum, Some(t))?;

    let (mpe_x, mpe_w) = exact_mpe(&wf)?;
    let (map_x, map_w) = exact_map(&wf, &SPRINKLER_MAP_QUERY)?;
    let exact = ExactReport {
        command: "exact",
        instance: name.into(),
        wmc: exact_wmc(&wf)?,
        normalized_wmc: exact_normalized_wmc(&wf)?,
        model_count: wf.formula.model_count()?,
        models: wf
            .formula
            .enumerate_models()?
            .into_iter()
            .map(|x| {
                let weight = wf.weights.raw_world_weight(&x).expect("sizes match");
                ModelRow {
                    world: x.to_string(),
                    weight,
                }
            })
            .collect(),
        mpe: ExactOutcome {
            outcome: mpe_x.to_string(),
            weight: mpe_w,
        },
        map_query: one_based(&SPRINKLER_MAP_QUERY),
        map: ExactOutcome {
            outcome: map_x.to_string(),
            weight: map_w,
        },
    };

    let files = vec![
        format!("wmc_histogram.{ext}"),
        format!("mpe_histogram.{ext}"),
        format!("map_histogram.{ext}"),
        format!("exact.{ext}"),
    ];
    write_file(out_dir, &files[0], &render(&wmc, format)?)?;
    write_file(out_dir, &files[1], &render(&mpe, format)?)?;
    write_file(out_dir, &files[2], &render(&map, format)?)?;
    write_file(out_dir, &files[3], &render(&exact, format)?)?;

    let summary = ReproSummary {
        command: "repro-sprinkler",
        seed,
        shots,
        t,
        files,
        wmc_mode_phase_integer: mode_y,
        wmc_mode_estimate: mode_est,
        mpe_mode: mpe.winner,
        map_mode: map.winner,
    };
    emit(&summary, format, None, "summary")
}

pub fn circuit(input: &Path, kind: CircuitKind, t: usize) -> Result<()> {
    let gadget = if kind == CircuitKind::Qft {
        build_qft(t)?
    } else {
        let wf = load(input)?.wf;
        let spec = OracleSpec::new(wf.formula.clone(), true);
        match kind {
            CircuitKind::Oracle => build_marking_oracle(&spec, DEFAULT_ANCILLA_BUDGET)?,
            CircuitKind::PhaseOracle => {
                marking_to_phase(&build_marking_oracle(&spec, DEFAULT_ANCILLA_BUDGET)?)?
            }
            CircuitKind::Rot => build_rot(&wf.normalized(), true),
            CircuitKind::WeightedGrover => build_weighted_grover(&wf, DEFAULT_ANCILLA_BUDGET)?,
            CircuitKind::Grover => build_grover(&wf.formula, DEFAULT_ANCILLA_BUDGET)?,
            CircuitKind::Qft => unreachable!(),
        }
    };
    print!("{}", gadget.dump());
    Ok(())
}

pub fn curve(
    input: &Path,
    seed: u64,
    instance: Option<&str>,
    t_values: &[usize],
    samples: &[u64],
    errors: &[f64],
) -> Result<()> {
    let l = load(input)?;
    let name = instance.unwrap_or(&l.name);
    let rows = complexity_curve(&l.wf, name, t_values, samples, errors, seed)?;
    print!("{}", to_csv(&rows));
    Ok(())
}
