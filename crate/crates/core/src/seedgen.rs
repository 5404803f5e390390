//! Diverse targeted pattern generation.
//!
//! Each round solves the circuit CNF under the target literals, projects the
//! model onto the primary inputs and accepts the candidate if it is at least
//! `d_min` bits away from every accepted pattern. Every candidate is blocked;
//! every accepted pattern also gets an at-least-`d_min`-flips constraint, so
//! later models keep their distance from it. The upper distance is only
//! measured.

use alloc::vec::Vec;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit, Var};
use crate::pattern::InputPattern;
use crate::sat::{SatBackend, SatError, Solver};
use crate::target::project_inputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    /// Maximum number of accepted patterns (R).
    pub pattern_budget: usize,
    /// Minimum pairwise Hamming distance, `2 <= d_min <= I`.
    pub d_min: usize,
    /// Consecutive rejections tolerated before giving up.
    pub retry_budget: usize,
    pub seed: u64,
    /// Conflict cap for each solver call.
    pub conflict_budget: Option<u64>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { pattern_budget: 100, d_min: 2, retry_budget: 20, seed: 0, conflict_budget: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("d_min must be at least 2, got {0}")]
    DminTooSmall(usize),
    #[error("d_min = {d_min} exceeds the {inputs} primary inputs")]
    DminExceedsInputs { d_min: usize, inputs: usize },
    #[error("pattern budget must be positive")]
    ZeroPatternBudget,
    #[error("retry budget must be positive")]
    ZeroRetryBudget,
    #[error(transparent)]
    Sat(#[from] SatError),
}

impl GenConfig {
    pub fn validate(&self, inputs: usize) -> Result<(), GenError> {
        if self.pattern_budget == 0 {
            return Err(GenError::ZeroPatternBudget);
        }
        if self.retry_budget == 0 {
            return Err(GenError::ZeroRetryBudget);
        }
        if self.d_min < 2 {
            return Err(GenError::DminTooSmall(self.d_min));
        }
        if self.d_min > inputs {
            return Err(GenError::DminExceedsInputs { d_min: self.d_min, inputs });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `pattern_budget` patterns accepted.
    BudgetReached,
    /// No further pattern at distance `>= d_min` exists.
    SolutionSpaceExhausted,
    /// `retry_budget` consecutive candidates were too close to an accepted one.
    RetriesExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenReport {
    pub patterns: Vec<InputPattern>,
    /// Smallest pairwise distance; 0 with fewer than two patterns.
    pub observed_d_min: usize,
    /// Largest pairwise distance; 0 with fewer than two patterns.
    pub observed_d_max: usize,
    pub exhausted: bool,
    pub solver_calls: usize,
    pub stop_reason: StopReason,
}

/// Generate patterns with the built-in solver, seeded from `config.seed`.
pub fn generate(formula: &CnfFormula, targets: &[Lit], config: &GenConfig) -> Result<GenReport, GenError> {
    config.validate(formula.input_vars.len())?;
    let mut solver = Solver::from_formula(formula, config.seed);
    solver.set_conflict_budget(config.conflict_budget);
    generate_with(&mut solver, &formula.input_vars, targets, config)
}

/// Generate patterns on any backend already loaded with the circuit clauses.
pub fn generate_with<B: SatBackend + ?Sized>(
    backend: &mut B,
    input_vars: &[Var],
    targets: &[Lit],
    config: &GenConfig,
) -> Result<GenReport, GenError> {
    config.validate(input_vars.len())?;
    let mut accepted: Vec<InputPattern> = Vec::new();
    let mut rejections = 0usize;
    let mut solver_calls = 0usize;

    let stop_reason = loop {
        if accepted.len() >= config.pattern_budget {
            break StopReason::BudgetReached;
        }
        let result = backend.solve(targets)?;
        solver_calls += 1;
        let Some(candidate) = project_inputs(&result, input_vars) else {
            break StopReason::SolutionSpaceExhausted;
        };
        // Literal i is true exactly when input i differs from the candidate.
        let flipped: Vec<Lit> = input_vars.iter().zip(candidate.iter()).map(|(&v, b)| Lit::with_value(v, !b)).collect();
        backend.add_clause(&flipped);
        if accepted.iter().all(|p| p.hamming(&candidate) >= config.d_min) {
            backend.encode_at_least_k(&flipped, config.d_min)?;
            accepted.push(candidate);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= config.retry_budget {
                break StopReason::RetriesExhausted;
            }
        }
    };

    let (observed_d_min, observed_d_max) = distance_band(&accepted);
    Ok(GenReport {
        patterns: accepted,
        observed_d_min,
        observed_d_max,
        exhausted: stop_reason == StopReason::SolutionSpaceExhausted,
        solver_calls,
        stop_reason,
    })
}

/// Minimum and maximum pairwise Hamming distance, `(0, 0)` below two patterns.
pub fn distance_band(patterns: &[InputPattern]) -> (usize, usize) {
    let mut band: Option<(usize, usize)> = None;
    for (i, a) in patterns.iter().enumerate() {
        for b in &patterns[i + 1..] {
            let d = a.hamming(b);
            band = Some(match band {
                None => (d, d),
                Some((lo, hi)) => (lo.min(d), hi.max(d)),
            });
        }
    }
    band.unwrap_or((0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::encode;
    use crate::graph::build_graph;
    use crate::netlist::{GateKind, Netlist, RawGate};
    use crate::sim::simulate;
    use crate::synth;
    use crate::target::{build_target_formula, TargetSource, TargetSpec};
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn run(net: &Netlist, targets: &[(&str, bool)], config: GenConfig) -> (crate::graph::CircuitGraph, GenReport) {
        let g = build_graph(net).unwrap();
        let f = encode(&g);
        let spec = TargetSpec::new(
            &g,
            targets.iter().map(|(n, v)| (g.find(n).unwrap(), *v)).collect(),
            TargetSource::Manual,
        )
        .unwrap();
        let report = generate(&f, &build_target_formula(&spec, &f), &config).unwrap();
        (g, report)
    }

    #[test]
    fn unique_solution_exhausts() {
        let n = Netlist::new("t", s(&["a", "b"]), s(&["y"]), vec![RawGate::new("y", GateKind::And, ["a", "b"])])
            .unwrap();
        let (_, r) = run(&n, &[("y", true)], GenConfig { pattern_budget: 10, ..GenConfig::default() });
        assert_eq!(r.patterns.len(), 1);
        assert_eq!(r.patterns[0].to_bitstring(), "11");
        assert!(r.exhausted);
        assert_eq!(r.stop_reason, StopReason::SolutionSpaceExhausted);
        assert_eq!((r.observed_d_min, r.observed_d_max), (0, 0));
    }

    /// Largest subset of the 15 OR-satisfying 4-bit inputs with pairwise
    /// distance >= 2, by exhaustive search over subsets.
    fn max_code_size_or4() -> usize {
        let words: Vec<u32> = (1u32..16).collect();
        let mut best = 0;
        for mask in 0u32..1 << words.len() {
            let chosen: Vec<u32> = (0..words.len()).filter(|i| mask >> i & 1 == 1).map(|i| words[i]).collect();
            if chosen.len() <= best {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(i, a)| chosen[i + 1..].iter().all(|b| (a ^ b).count_ones() >= 2));
            if ok {
                best = chosen.len();
            }
        }
        best
    }

    #[test]
    fn or4_patterns_are_diverse() {
        let best = max_code_size_or4();
        assert_eq!(best, 8);
        let (g, r) = run(&synth::or_gate(4), &[("y", true)], GenConfig::default());
        assert!(r.patterns.len() <= 15);
        assert!(r.patterns.len() <= best);
        assert!(r.exhausted);
        let y = g.find("y").unwrap();
        for (i, p) in r.patterns.iter().enumerate() {
            assert!(simulate(&g, p).unwrap().get(y));
            for q in &r.patterns[i + 1..] {
                assert!(p.hamming(q) >= 2);
            }
        }
        assert!(r.observed_d_min >= 2 && r.observed_d_max <= 4);
    }

    #[test]
    fn config_errors() {
        let g = build_graph(&synth::c17()).unwrap();
        let f = encode(&g);
        let too_wide = GenConfig { d_min: 6, ..GenConfig::default() };
        assert_eq!(generate(&f, &[], &too_wide), Err(GenError::DminExceedsInputs { d_min: 6, inputs: 5 }));
        let too_small = GenConfig { d_min: 1, ..GenConfig::default() };
        assert_eq!(generate(&f, &[], &too_small), Err(GenError::DminTooSmall(1)));
        let zero = GenConfig { pattern_budget: 0, ..GenConfig::default() };
        assert_eq!(generate(&f, &[], &zero), Err(GenError::ZeroPatternBudget));
    }

    #[test]
    fn invalid_target_gives_empty_exhausted_report() {
        let g = build_graph(&synth::c17()).unwrap();
        let f = encode(&g);
        let (n11, n16) = (g.find("n11").unwrap(), g.find("n16").unwrap());
        let lits = vec![f.var_of(n11).neg(), f.var_of(n16).neg()];
        let r = generate(&f, &lits, &GenConfig::default()).unwrap();
        assert!(r.patterns.is_empty());
        assert!(r.exhausted);
        assert_eq!(r.solver_calls, 1);
    }

    #[test]
    fn same_seed_same_patterns() {
        let cfg = GenConfig { pattern_budget: 20, seed: 11, ..GenConfig::default() };
        let (_, a) = run(&synth::and_tree(16), &[("a1_0", true)], cfg);
        let (_, b) = run(&synth::and_tree(16), &[("a1_0", true)], cfg);
        assert_eq!(a.patterns, b.patterns);
        assert_eq!(a.patterns.len(), 20);
    }

    #[test]
    fn band_helper() {
        let p = |s: &str| InputPattern::from_bitstring(s).unwrap();
        assert_eq!(distance_band(&[p("000"), p("011"), p("111")]), (1, 3));
        assert_eq!(distance_band(&[p("01")]), (0, 0));
    }
}
