//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p satfuzz --test acceptance -- --nocapture` to see
//! the report. Every criterion runs even if an earlier one fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};
use satfuzz::cli::{cmd_compare, cmd_gen, CompareArgs, GenArgs, GenOptions};
use satfuzz::manifest::RunManifest;
use satfuzz_core::coverage::percentage;
use satfuzz_core::synth::{self, random_netlist, RandomParams};
use satfuzz_core::{
    build_graph, build_target_formula, check_validity, coverage_curve, encode, generate, measure, run_cgf, simulate,
    CircuitGraph, GenConfig, InputPattern, Lit, NodeId, SatBackend, Solver, StopReason, TargetSource, TargetSpec,
    Valuation,
};

const TARGETING_LIMIT: Duration = Duration::from_secs(5);
const VALIDITY_LIMIT: Duration = Duration::from_secs(60);
const ENCODING_LIMIT: Duration = Duration::from_secs(60);
const COMPARISON_LIMIT: Duration = Duration::from_secs(30);

const VALIDITY_CASES: u32 = 200;
const ENCODING_CASES: u32 = 100;
const DIVERSITY_CASES: u32 = 200;
const COVERAGE_CASES: u32 = 1000;
const CGF_TRIALS: u64 = 15;
const CGF_MEAN_CEILING: f64 = 10.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm))
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn all_patterns(width: usize) -> impl Iterator<Item = InputPattern> {
    (0u64..1 << width).map(move |bits| InputPattern::from_bools((0..width).map(|i| bits >> i & 1 == 1)))
}

fn all_valuations(g: &CircuitGraph) -> Vec<(InputPattern, Valuation)> {
    all_patterns(g.input_count()).map(|p| (p.clone(), simulate(g, &p).unwrap())).collect()
}

fn hits(spec: &TargetSpec, v: &Valuation) -> bool {
    spec.entries().iter().all(|&(n, want)| v.get(n) == want)
}

/// 1 to 3 distinct nodes with random desired values.
fn spec_strategy(g: &CircuitGraph) -> impl Strategy<Value = TargetSpec> {
    let g = g.clone();
    let n = g.node_count();
    prop::collection::btree_map(0..n as u32, any::<bool>(), 1..=3.min(n)).prop_map(move |m| {
        TargetSpec::new(&g, m.into_iter().map(|(i, v)| (NodeId(i), v)).collect(), TargetSource::Manual).unwrap()
    })
}

fn circuit(max_inputs: usize, max_gates: usize) -> impl Strategy<Value = CircuitGraph> {
    (any::<u64>(), 1..=max_inputs, 1..=max_gates, 2usize..=4).prop_map(|(seed, inputs, gates, max_fanin)| {
        build_graph(&random_netlist(seed, RandomParams { inputs, gates, max_fanin, const_percent: 3 })).unwrap()
    })
}

fn gen_args(netlist: &str, targets: &str, patterns: usize) -> GenArgs {
    GenArgs {
        netlist: fixture(netlist),
        targets: fixture(targets),
        options: GenOptions { patterns, dmin: 2, seed: 0, retries: 20, conflict_budget: None, solver: None },
        dimacs_out: None,
        patterns_out: None,
        report_out: None,
        coverage_out: None,
        curve_out: None,
        timing: false,
    }
}

fn per_pattern_targeting() -> Outcome {
    let designs = [
        ("c17.bench", "c17.targets"),
        ("c432.bench", "c432.targets"),
        ("s27.bench", "s27.targets"),
        ("and16.bench", "and16.targets"),
        ("or4.bench", "or4.targets"),
        ("xor_ladder8.bench", "xor_ladder8.targets"),
    ];
    let start = Instant::now();
    let mut total = 0;
    for (netlist, targets) in designs {
        let out = cmd_gen(&gen_args(netlist, targets, 100), &mut RunManifest::new("gen")).map_err(|e| format!("{netlist}: {e}"))?;
        if out.report.patterns.is_empty() {
            return Err(format!("{netlist}: no patterns"));
        }
        for (i, p) in out.report.patterns.iter().enumerate() {
            if !hits(&out.spec, &simulate(&out.design.graph, p).unwrap()) {
                return Err(format!("{netlist}: pattern {i} misses a target"));
            }
        }
        if out.curve[0].state_pct != 100.0 {
            return Err(format!("{netlist}: T_C after pattern 1 is {}", out.curve[0].state_pct));
        }
        total += out.report.patterns.len();
    }
    let took = within(TARGETING_LIMIT, start)?;
    Ok(format!("{total} patterns over 6 designs all hit their targets, T_C=100% after pattern 1 ({took:.2?})"))
}

fn validity_oracle() -> Outcome {
    let start = Instant::now();
    let strategy = circuit(12, 30).prop_flat_map(|g| (Just(g.clone()), spec_strategy(&g)));
    runner(VALIDITY_CASES)
        .run(&strategy, |(g, spec)| {
            let reachable = all_valuations(&g).iter().any(|(_, v)| hits(&spec, v));
            let verdict = check_validity(&spec, &encode(&g)).unwrap();
            prop_assert_eq!(verdict.is_valid(), reachable);
            if let Some(w) = verdict.witness() {
                prop_assert!(hits(&spec, &simulate(&g, w).unwrap()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let took = within(VALIDITY_LIMIT, start)?;
    Ok(format!("{VALIDITY_CASES}/{VALIDITY_CASES} verdicts agree with exhaustive simulation ({took:.2?})"))
}

fn encoding_soundness() -> Outcome {
    let start = Instant::now();
    runner(ENCODING_CASES)
        .run(&circuit(10, 25), |g| {
            let f = encode(&g);
            let mut solver = Solver::from_formula(&f, 0);
            let mut models = BTreeSet::new();
            while let Some(model) = solver.solve(&[]).unwrap().model {
                let proj: Vec<bool> = (0..f.node_count()).map(|i| model[f.node_to_var[i].index()]).collect();
                let block: Vec<Lit> = (0..f.node_count()).map(|i| Lit::with_value(f.node_to_var[i], !proj[i])).collect();
                prop_assert!(models.insert(proj));
                solver.add_clause(&block);
            }
            let simulated: BTreeSet<Vec<bool>> = all_valuations(&g).into_iter().map(|(_, v)| v.0).collect();
            prop_assert_eq!(models, simulated);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let took = within(ENCODING_LIMIT, start)?;
    Ok(format!("{ENCODING_CASES}/{ENCODING_CASES} projected model sets equal the valuation sets ({took:.2?})"))
}

fn diversity() -> Outcome {
    let exhausted_runs = std::cell::Cell::new(0);
    let strategy = circuit(12, 30).prop_flat_map(|g| {
        let inputs = g.input_count().max(2);
        (Just(g.clone()), spec_strategy(&g), 2..=3.min(inputs), any::<u64>())
    });
    runner(DIVERSITY_CASES)
        .run(&strategy, |(g, spec, d_min, seed)| {
            let inputs = g.input_count();
            if d_min > inputs {
                return Ok(());
            }
            let f = encode(&g);
            let cfg = GenConfig { pattern_budget: 30, d_min, retry_budget: 1000, seed, conflict_budget: None };
            let r = generate(&f, &build_target_formula(&spec, &f), &cfg).unwrap();
            for (i, p) in r.patterns.iter().enumerate() {
                for q in &r.patterns[i + 1..] {
                    prop_assert!(p.hamming(q) >= d_min);
                }
            }
            prop_assert!(r.observed_d_max <= inputs);
            if r.patterns.len() >= 2 {
                prop_assert!(r.observed_d_min >= d_min);
            }
            if r.exhausted {
                prop_assert_eq!(r.stop_reason, StopReason::SolutionSpaceExhausted);
                let left = all_valuations(&g)
                    .into_iter()
                    .any(|(p, v)| hits(&spec, &v) && r.patterns.iter().all(|q| q.hamming(&p) >= d_min));
                prop_assert!(!left, "a qualifying pattern remains after exhaustion");
                exhausted_runs.set(exhausted_runs.get() + 1);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{DIVERSITY_CASES} runs keep distance >= d_min and D_max <= I; {} exhausted runs confirmed by brute force", exhausted_runs.get()))
}

fn single_target(g: &CircuitGraph, name: &str) -> TargetSpec {
    TargetSpec::new(g, vec![(g.find(name).unwrap(), true)], TargetSource::Manual).unwrap()
}

fn sat_directed(g: &CircuitGraph, spec: &TargetSpec, budget: usize) -> satfuzz_core::CoverageReport {
    let f = encode(g);
    let cfg = GenConfig { pattern_budget: budget, ..GenConfig::default() };
    let r = generate(&f, &build_target_formula(spec, &f), &cfg).unwrap();
    measure(g, spec, &r.patterns).unwrap()
}

fn cgf_comparison() -> Outcome {
    const BUDGET: usize = 100;
    let start = Instant::now();

    let and16 = build_graph(&synth::and_tree(16)).unwrap();
    let spec = single_target(&and16, "root");
    let sat = sat_directed(&and16, &spec, BUDGET);
    let sat_first = sat.full_state_index().map(|i| i + 1);
    if sat.state_coverage_pct != 100.0 || sat_first != Some(1) {
        return Err(format!("AND16: sat-directed T_C {} first reach {sat_first:?}", sat.state_coverage_pct));
    }
    let cgf_mean = (0..CGF_TRIALS)
        .map(|seed| run_cgf(&and16, &spec, BUDGET, seed).unwrap().report.state_coverage_pct)
        .sum::<f64>()
        / CGF_TRIALS as f64;
    if cgf_mean > CGF_MEAN_CEILING {
        return Err(format!("AND16: CGF mean T_C {cgf_mean:.2}% > {CGF_MEAN_CEILING}%"));
    }

    let or4 = build_graph(&synth::or_gate(4)).unwrap();
    let spec = single_target(&or4, "y");
    let sat = sat_directed(&or4, &spec, BUDGET);
    let sat_first = sat.full_state_index().map(|i| i + 1).unwrap_or(BUDGET + 1);
    let mut cgf_first = 0.0;
    for seed in 0..CGF_TRIALS {
        let run = run_cgf(&or4, &spec, BUDGET, seed).unwrap();
        if run.report.state_coverage_pct != 100.0 {
            return Err(format!("OR4: CGF trial {seed} T_C {}", run.report.state_coverage_pct));
        }
        cgf_first += (run.report.full_state_index().unwrap() + 1) as f64;
    }
    cgf_first /= CGF_TRIALS as f64;
    if sat.state_coverage_pct != 100.0 || sat_first as f64 > cgf_first {
        return Err(format!("OR4: sat-directed first reach {sat_first} vs CGF mean {cgf_first:.2}"));
    }
    let took = within(COMPARISON_LIMIT, start)?;
    Ok(format!(
        "AND16 sat-directed 100% at pattern 1, CGF mean {cgf_mean:.2}%; OR4 first reach {sat_first} vs CGF mean {cgf_first:.2} ({took:.2?})"
    ))
}

fn compare_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |sub: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let args = CompareArgs {
            netlist: fixture("c432.bench"),
            targets: fixture("c432.targets"),
            options: GenOptions { patterns: 100, dmin: 2, seed: 7, retries: 20, conflict_budget: None, solver: None },
            trials: 15,
            out: dir.path().join(sub),
        };
        let out = cmd_compare(&args, &mut RunManifest::new("compare")).map_err(|e| e.to_string())?;
        let read = |p: &Path| std::fs::read(p).map_err(|e| e.to_string());
        Ok((read(&out.curves_csv)?, read(&out.summary_csv)?))
    };
    let a = run("a")?;
    let b = run("b")?;
    if a != b {
        return Err("CSV outputs differ between identical runs".to_string());
    }
    Ok(format!("curves.csv ({} bytes) and summary.csv ({} bytes) byte-identical across runs", a.0.len(), a.1.len()))
}

fn shuffled<T: Clone>(items: &[T], mut x: u64) -> Vec<T> {
    let mut v = items.to_vec();
    for i in (1..v.len()).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        v.swap(i, (x % (i as u64 + 1)) as usize);
    }
    v
}

fn coverage_properties() -> Outcome {
    let strategy = circuit(8, 20).prop_flat_map(|g| {
        let width = g.input_count();
        let pats = prop::collection::vec(prop::collection::vec(any::<bool>(), width), 0..80)
            .prop_map(|v| v.into_iter().map(InputPattern::from_bools).collect::<Vec<_>>());
        (Just(g.clone()), spec_strategy(&g), pats, any::<u64>())
    });
    runner(COVERAGE_CASES)
        .run(&strategy, |(g, spec, pats, perm_seed)| {
            let report = measure(&g, &spec, &pats).unwrap();
            let curve = coverage_curve(&g, &spec, &pats).unwrap();
            prop_assert_eq!(curve.len(), pats.len());
            for w in curve.windows(2) {
                prop_assert!(w[0].state_pct <= w[1].state_pct && w[0].site_pct <= w[1].site_pct);
            }
            if let Some(last) = curve.last() {
                prop_assert_eq!((last.state_pct, last.site_pct), (report.state_coverage_pct, report.site_coverage_pct));
            }
            let permuted = measure(&g, &spec, &shuffled(&pats, perm_seed | 1)).unwrap();
            prop_assert_eq!(permuted.state_coverage_pct, report.state_coverage_pct);
            prop_assert_eq!(permuted.site_coverage_pct, report.site_coverage_pct);
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    // Hand count: or4 with targets x0=1, x1=1, x2=1, y=0 under the single pattern 1110.
    let g = build_graph(&synth::or_gate(4)).unwrap();
    let entries = [("x0", true), ("x1", true), ("x2", true), ("y", false)].map(|(n, v)| (g.find(n).unwrap(), v));
    let spec = TargetSpec::new(&g, entries.to_vec(), TargetSource::Manual).unwrap();
    let r = measure(&g, &spec, &[InputPattern::from_bitstring("1110").unwrap()]).unwrap();
    if r.state_coverage_pct != 75.0 || percentage(3, 4) != 75.0 || percentage(0, 0) != 0.0 {
        return Err(format!("3-of-4 hand count gave {}%", r.state_coverage_pct));
    }
    Ok(format!("{COVERAGE_CASES} cases monotone and permutation-invariant; 3-of-4 targets = 75%"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 per-pattern targeting", per_pattern_targeting),
        ("2 validity oracle", validity_oracle),
        ("3 encoding soundness", encoding_soundness),
        ("4 diversity", diversity),
        ("5 CGF comparison", cgf_comparison),
        ("6 compare determinism", compare_determinism),
        ("7 coverage properties", coverage_properties),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
