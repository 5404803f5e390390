//! Target state coverage and target site (toggle) coverage.
//!
//! A target is state-covered once any applied pattern drives it to its desired
//! value, and site-covered once it has been seen at both 0 and 1. Both
//! percentages are over the number of targets; with no targets they are 0.

use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{CircuitGraph, NodeId};
use crate::pattern::InputPattern;
use crate::sim::{simulate_batch, SimError, WORD_BITS};
use crate::target::TargetSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("target node {0} is not in the graph")]
    MissingNode(NodeId),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetCoverage {
    pub node: NodeId,
    pub desired: bool,
    pub reached_state: bool,
    pub saw_0: bool,
    pub saw_1: bool,
    /// 0-based index of the first pattern that reached the desired value.
    pub first_reach_index: Option<usize>,
}

impl TargetCoverage {
    pub fn toggled(&self) -> bool {
        self.saw_0 && self.saw_1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub per_target: Vec<TargetCoverage>,
    pub state_coverage_pct: f64,
    pub site_coverage_pct: f64,
    pub patterns_applied: usize,
}

impl CoverageReport {
    pub fn reached_count(&self) -> usize {
        self.per_target.iter().filter(|t| t.reached_state).count()
    }

    pub fn toggled_count(&self) -> usize {
        self.per_target.iter().filter(|t| t.toggled()).count()
    }

    /// Index of the pattern after which every target had reached its state.
    pub fn full_state_index(&self) -> Option<usize> {
        if self.per_target.is_empty() {
            return None;
        }
        self.per_target.iter().map(|t| t.first_reach_index).collect::<Option<Vec<_>>>()?.into_iter().max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Number of patterns applied so far (1-based).
    pub patterns: usize,
    pub state_pct: f64,
    pub site_pct: f64,
}

pub fn percentage(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

struct Tracker {
    targets: Vec<TargetCoverage>,
    reached: usize,
    toggled: usize,
}

impl Tracker {
    fn new(graph: &CircuitGraph, spec: &TargetSpec) -> Result<Tracker, CoverageError> {
        let targets = spec
            .entries()
            .iter()
            .map(|&(node, desired)| {
                if !graph.contains(node) {
                    return Err(CoverageError::MissingNode(node));
                }
                Ok(TargetCoverage {
                    node,
                    desired,
                    reached_state: false,
                    saw_0: false,
                    saw_1: false,
                    first_reach_index: None,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Tracker { targets, reached: 0, toggled: 0 })
    }

    /// Fold in one batch whose first lane is pattern `base`; `on_lane` is
    /// called after each lane with the running counts.
    fn absorb(&mut self, words: &[u64], lanes: usize, base: usize, mut on_lane: impl FnMut(usize, usize, usize)) {
        for lane in 0..lanes {
            for t in &mut self.targets {
                let v = words[t.node.index()] >> lane & 1 == 1;
                let was_toggled = t.toggled();
                if v {
                    t.saw_1 = true;
                } else {
                    t.saw_0 = true;
                }
                if !was_toggled && t.toggled() {
                    self.toggled += 1;
                }
                if !t.reached_state && v == t.desired {
                    t.reached_state = true;
                    t.first_reach_index = Some(base + lane);
                    self.reached += 1;
                }
            }
            on_lane(base + lane, self.reached, self.toggled);
        }
    }

    fn run(
        graph: &CircuitGraph,
        spec: &TargetSpec,
        patterns: &[InputPattern],
        mut on_lane: impl FnMut(usize, usize, usize),
    ) -> Result<Tracker, CoverageError> {
        let mut tracker = Tracker::new(graph, spec)?;
        for (chunk_index, chunk) in patterns.chunks(WORD_BITS).enumerate() {
            let batch = simulate_batch(graph, chunk)?;
            tracker.absorb(&batch.words, chunk.len(), chunk_index * WORD_BITS, &mut on_lane);
        }
        Ok(tracker)
    }
}

pub fn measure(graph: &CircuitGraph, spec: &TargetSpec, patterns: &[InputPattern]) -> Result<CoverageReport, CoverageError> {
    let tracker = Tracker::run(graph, spec, patterns, |_, _, _| {})?;
    let k = tracker.targets.len();
    Ok(CoverageReport {
        state_coverage_pct: percentage(tracker.reached, k),
        site_coverage_pct: percentage(tracker.toggled, k),
        per_target: tracker.targets,
        patterns_applied: patterns.len(),
    })
}

/// Coverage after each prefix of `patterns`; the last point equals [`measure`].
pub fn coverage_curve(
    graph: &CircuitGraph,
    spec: &TargetSpec,
    patterns: &[InputPattern],
) -> Result<Vec<CurvePoint>, CoverageError> {
    let k = spec.len();
    let mut curve = Vec::with_capacity(patterns.len());
    Tracker::run(graph, spec, patterns, |index, reached, toggled| {
        curve.push(CurvePoint {
            patterns: index + 1,
            state_pct: percentage(reached, k),
            site_pct: percentage(toggled, k),
        })
    })?;
    Ok(curve)
}
