//! Two-valued levelized simulation, scalar and 64-lane bit-parallel.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{CircuitGraph, NodeId, NodeKind};
use crate::pattern::InputPattern;

/// Patterns per bit-parallel pass.
pub const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("pattern has {found} bits but the circuit has {expected} inputs")]
    PatternLength { expected: usize, found: usize },
    #[error("batch of {0} patterns exceeds the word width of {WORD_BITS}")]
    BatchTooLarge(usize),
}

/// One value per node, indexed by `NodeId`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(pub Vec<bool>);

impl Valuation {
    pub fn get(&self, node: NodeId) -> bool {
        self.0[node.index()]
    }
}

pub fn simulate(graph: &CircuitGraph, pattern: &InputPattern) -> Result<Valuation, SimError> {
    check_len(graph, pattern)?;
    let mut value = vec![false; graph.node_count()];
    for (i, &pi) in graph.primary_inputs.iter().enumerate() {
        value[pi.index()] = pattern.get(i);
    }
    for &id in &graph.topo_order {
        let node = graph.node(id);
        value[id.index()] = match node.kind {
            NodeKind::Input => continue,
            NodeKind::Const(c) => c,
            NodeKind::Gate(kind) => kind.eval(node.fanin.iter().map(|f| value[f.index()])),
        };
    }
    Ok(Valuation(value))
}

/// Up to [`WORD_BITS`] patterns simulated together; lane `j` is pattern `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimBatch {
    pub patterns: Vec<InputPattern>,
    /// Indexed by `NodeId`.
    pub words: Vec<u64>,
}

impl SimBatch {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Mask of the lanes that carry a pattern.
    pub fn lane_mask(&self) -> u64 {
        match self.patterns.len() {
            WORD_BITS => !0,
            n => (1u64 << n) - 1,
        }
    }

    pub fn value(&self, node: NodeId, lane: usize) -> bool {
        assert!(lane < self.patterns.len());
        self.words[node.index()] >> lane & 1 == 1
    }

    pub fn valuation(&self, lane: usize) -> Valuation {
        Valuation((0..self.words.len()).map(|i| self.words[i] >> lane & 1 == 1).collect())
    }
}

pub fn simulate_batch(graph: &CircuitGraph, patterns: &[InputPattern]) -> Result<SimBatch, SimError> {
    if patterns.len() > WORD_BITS {
        return Err(SimError::BatchTooLarge(patterns.len()));
    }
    if patterns.is_empty() {
        return Ok(SimBatch { patterns: Vec::new(), words: Vec::new() });
    }
    for p in patterns {
        check_len(graph, p)?;
    }
    let mut words = vec![0u64; graph.node_count()];
    for (i, &pi) in graph.primary_inputs.iter().enumerate() {
        words[pi.index()] = patterns.iter().enumerate().fold(0, |acc, (lane, p)| acc | (p.get(i) as u64) << lane);
    }
    for &id in &graph.topo_order {
        let node = graph.node(id);
        words[id.index()] = match node.kind {
            NodeKind::Input => continue,
            NodeKind::Const(c) => {
                if c {
                    !0
                } else {
                    0
                }
            }
            NodeKind::Gate(kind) => kind.eval_word(node.fanin.iter().map(|f| words[f.index()])),
        };
    }
    let mask = if patterns.len() == WORD_BITS { !0 } else { (1u64 << patterns.len()) - 1 };
    for w in &mut words {
        *w &= mask;
    }
    Ok(SimBatch { patterns: patterns.to_vec(), words })
}

fn check_len(graph: &CircuitGraph, pattern: &InputPattern) -> Result<(), SimError> {
    if pattern.len() != graph.input_count() {
        return Err(SimError::PatternLength { expected: graph.input_count(), found: pattern.len() });
    }
    Ok(())
}
