//! Tseitin encoding against exhaustive simulation.
mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use satfuzz_core::synth::{random_netlist, RandomParams};
use satfuzz_core::{build_graph, encode, simulate, simulate_batch, CnfFormula, InputPattern, Lit, SatBackend, Solver};

/// Every model of the formula, projected onto the node variables, found by
/// repeatedly blocking the previous projection.
fn projected_models(formula: &CnfFormula, seed: u64) -> BTreeSet<Vec<bool>> {
    let mut solver = Solver::from_formula(formula, seed);
    let nodes = formula.node_count();
    let mut models = BTreeSet::new();
    loop {
        let r = solver.solve(&[]).unwrap();
        let Some(model) = r.model else { break };
        let proj: Vec<bool> = (0..nodes).map(|i| model[formula.node_to_var[i].index()]).collect();
        let block: Vec<Lit> = (0..nodes).map(|i| Lit::with_value(formula.node_to_var[i], !proj[i])).collect();
        assert!(models.insert(proj), "blocked model returned twice");
        solver.add_clause(&block);
    }
    models
}

fn params(inputs: usize, gates: usize, max_fanin: usize) -> RandomParams {
    RandomParams { inputs, gates, max_fanin, const_percent: 5 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn models_equal_simulated_valuations(seed in any::<u64>(), inputs in 1usize..=8, gates in 1usize..=20, fanin in 2usize..=4) {
        let g = build_graph(&random_netlist(seed, params(inputs, gates, fanin))).unwrap();
        let f = encode(&g);
        prop_assert_eq!(projected_models(&f, seed), common::valuation_set(&g));
    }

    #[test]
    fn simulated_valuations_satisfy_every_node_clause(seed in any::<u64>(), inputs in 1usize..=10, gates in 1usize..=30) {
        let g = build_graph(&random_netlist(seed, params(inputs, gates, 3))).unwrap();
        let f = encode(&g);
        let mut solver = Solver::from_formula(&f, 1);
        for (p, v) in common::reference_valuations(&g).into_iter().step_by(7) {
            let assumptions: Vec<Lit> = (0..f.node_count()).map(|i| Lit::with_value(f.node_to_var[i], v.0[i])).collect();
            prop_assert!(solver.solve(&assumptions).unwrap().is_sat(), "valuation of {} rejected", p);
        }
    }

    #[test]
    fn batch_equals_scalar(seed in any::<u64>(), inputs in 1usize..=12, gates in 1usize..=40, lanes in 1usize..=64) {
        let g = build_graph(&random_netlist(seed, params(inputs, gates, 4))).unwrap();
        let pats: Vec<InputPattern> = (0..lanes as u64)
            .map(|j| InputPattern::from_bools((0..inputs).map(|i| (seed.rotate_left(j as u32) ^ j) >> i & 1 == 1)))
            .collect();
        let batch = simulate_batch(&g, &pats).unwrap();
        for (lane, p) in pats.iter().enumerate() {
            prop_assert_eq!(batch.valuation(lane), simulate(&g, p).unwrap());
        }
    }

    #[test]
    fn simulator_matches_reference(seed in any::<u64>(), inputs in 1usize..=6, gates in 1usize..=25) {
        let g = build_graph(&random_netlist(seed, params(inputs, gates, 4))).unwrap();
        for (p, v) in common::reference_valuations(&g) {
            prop_assert_eq!(simulate(&g, &p).unwrap(), v);
        }
    }
}

#[test]
fn c17_model_count() {
    let g = build_graph(&satfuzz_core::synth::c17()).unwrap();
    assert_eq!(projected_models(&encode(&g), 0).len(), 32);
}
