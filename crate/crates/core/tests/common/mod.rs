//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use satfuzz_core::{CircuitGraph, InputPattern, Valuation};

pub fn all_patterns(width: usize) -> impl Iterator<Item = InputPattern> {
    (0u64..1 << width).map(move |bits| InputPattern::from_bools((0..width).map(|i| bits >> i & 1 == 1)))
}

/// Node valuation for every input pattern, computed gate by gate from the
/// node list without going through the simulator.
pub fn reference_valuations(graph: &CircuitGraph) -> Vec<(InputPattern, Valuation)> {
    all_patterns(graph.input_count())
        .map(|p| {
            let mut values = vec![false; graph.node_count()];
            let mut next_input = 0;
            for (i, node) in graph.nodes.iter().enumerate() {
                values[i] = match node.kind {
                    satfuzz_core::NodeKind::Input => {
                        next_input += 1;
                        p.get(next_input - 1)
                    }
                    satfuzz_core::NodeKind::Const(c) => c,
                    satfuzz_core::NodeKind::Gate(kind) => reference_gate(kind, node.fanin.iter().map(|f| values[f.index()])),
                };
            }
            (p, Valuation(values))
        })
        .collect()
}

fn reference_gate(kind: satfuzz_core::GateKind, inputs: impl Iterator<Item = bool>) -> bool {
    use satfuzz_core::GateKind::*;
    let v: Vec<bool> = inputs.collect();
    let ones = v.iter().filter(|b| **b).count();
    match kind {
        And => ones == v.len(),
        Nand => ones != v.len(),
        Or => ones > 0,
        Nor => ones == 0,
        Xor => ones % 2 == 1,
        Xnor => ones % 2 == 0,
        Not => !v[0],
        Buf => v[0],
        Dff | Const0 | Const1 => unreachable!("not a graph gate"),
    }
}

pub fn valuation_set(graph: &CircuitGraph) -> BTreeSet<Vec<bool>> {
    reference_valuations(graph).into_iter().map(|(_, v)| v.0).collect()
}
