//! Coverage-guided greybox fuzzing baseline.
//!
//! The first executed pattern is uniformly random and seeds the corpus. Every
//! later pattern mutates a corpus seed picked uniformly: with probability 1/10
//! it is replaced by a fresh random pattern, otherwise `w` distinct bits are
//! flipped with `w = 1 + Geometric(1/2)` capped at the input count. A mutant
//! joins the corpus when it shows a (target, value) pair never seen before.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coverage::{coverage_curve, measure, CoverageError, CoverageReport, CurvePoint};
use crate::graph::CircuitGraph;
use crate::pattern::InputPattern;
use crate::sim::simulate;
use crate::target::TargetSpec;

const REPLACE_PROBABILITY: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CgfError {
    #[error("pattern budget must be positive")]
    ZeroBudget,
    #[error(transparent)]
    Coverage(#[from] CoverageError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub pattern: InputPattern,
    /// New (target, value) pairs this seed contributed when admitted.
    pub fitness: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub seeds: Vec<CorpusEntry>,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgfRun {
    /// Every executed pattern, in order; its length equals the budget.
    pub patterns: Vec<InputPattern>,
    pub report: CoverageReport,
    pub curve: Vec<CurvePoint>,
    pub corpus: Corpus,
}

pub fn run_cgf(graph: &CircuitGraph, spec: &TargetSpec, budget: usize, rng_seed: u64) -> Result<CgfRun, CgfError> {
    if budget == 0 {
        return Err(CgfError::ZeroBudget);
    }
    if let Some(&(missing, _)) = spec.entries().iter().find(|(n, _)| !graph.contains(*n)) {
        return Err(CoverageError::MissingNode(missing).into());
    }
    let inputs = graph.input_count();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    // seen[t][v]: target t observed at value v
    let mut seen = vec![[false; 2]; spec.len()];
    let mut corpus = Corpus { seeds: Vec::new(), rng_seed };
    let mut patterns = Vec::with_capacity(budget);

    for step in 0..budget {
        let candidate = if step == 0 {
            random_pattern(&mut rng, inputs)
        } else {
            let parent = &corpus.seeds[rng.random_range(0..corpus.seeds.len())].pattern;
            mutate(&mut rng, parent)
        };
        let valuation = simulate(graph, &candidate).map_err(CoverageError::from)?;
        let mut fitness = 0;
        for (i, &(node, _)) in spec.entries().iter().enumerate() {
            let slot = &mut seen[i][valuation.get(node) as usize];
            if !*slot {
                *slot = true;
                fitness += 1;
            }
        }
        if fitness > 0 || step == 0 {
            corpus.seeds.push(CorpusEntry { pattern: candidate.clone(), fitness });
        }
        patterns.push(candidate);
    }

    let report = measure(graph, spec, &patterns)?;
    let curve = coverage_curve(graph, spec, &patterns)?;
    Ok(CgfRun { patterns, report, curve, corpus })
}

fn random_pattern(rng: &mut ChaCha8Rng, len: usize) -> InputPattern {
    InputPattern::from_bools((0..len).map(|_| rng.random::<bool>()))
}

fn mutate(rng: &mut ChaCha8Rng, parent: &InputPattern) -> InputPattern {
    let len = parent.len();
    if len == 0 {
        return parent.clone();
    }
    if rng.random_bool(REPLACE_PROBABILITY) {
        return random_pattern(rng, len);
    }
    let mut weight = 1;
    while weight < len && rng.random::<bool>() {
        weight += 1;
    }
    let mut child = parent.clone();
    for bit in sample(rng, len, weight) {
        child.flip(bit);
    }
    child
}
