//! Target sites with desired values, their literal form, and validity.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit, Var};
use crate::graph::{CircuitGraph, GraphDiff, NodeId};
use crate::pattern::InputPattern;
use crate::sat::{SatBackend, SatError, SatResult, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSource {
    Manual,
    GraphDiff,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("node {0} does not exist in the graph")]
    UnknownNode(NodeId),
    #[error("node {0} is targeted more than once")]
    DuplicateNode(NodeId),
}

/// Ordered `(node, desired value)` pairs over distinct graph nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    entries: Vec<(NodeId, bool)>,
    pub source: TargetSource,
}

impl TargetSpec {
    pub fn new(
        graph: &CircuitGraph,
        entries: Vec<(NodeId, bool)>,
        source: TargetSource,
    ) -> Result<TargetSpec, TargetError> {
        let mut seen = BTreeSet::new();
        for &(node, _) in &entries {
            if !graph.contains(node) {
                return Err(TargetError::UnknownNode(node));
            }
            if !seen.insert(node) {
                return Err(TargetError::DuplicateNode(node));
            }
        }
        Ok(TargetSpec { entries, source })
    }

    pub fn entries(&self) -> &[(NodeId, bool)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every entry exists in `graph`.
    pub fn fits(&self, graph: &CircuitGraph) -> bool {
        self.entries.iter().all(|(n, _)| graph.contains(*n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Zero,
    One,
    Both,
}

/// One spec per requested polarity over `changed ∪ added` (ascending node id).
/// `Both` yields the all-0 spec then the all-1 spec. An empty diff yields no
/// specs.
pub fn targets_from_diff(diff: &GraphDiff, polarity: Polarity) -> Vec<TargetSpec> {
    let nodes = diff.touched();
    if nodes.is_empty() {
        return Vec::new();
    }
    let values: &[bool] = match polarity {
        Polarity::Zero => &[false],
        Polarity::One => &[true],
        Polarity::Both => &[false, true],
    };
    values
        .iter()
        .map(|&v| TargetSpec { entries: nodes.iter().map(|&n| (n, v)).collect(), source: TargetSource::GraphDiff })
        .collect()
}

/// The target conjunction as literals: `t` for a desired 1, `¬t` for a 0.
pub fn build_target_formula(spec: &TargetSpec, formula: &CnfFormula) -> Vec<Lit> {
    spec.entries.iter().map(|&(node, v)| Lit::with_value(formula.var_of(node), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidityVerdict {
    Valid { witness: InputPattern },
    Invalid,
}

impl ValidityVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityVerdict::Valid { .. })
    }

    pub fn witness(&self) -> Option<&InputPattern> {
        match self {
            ValidityVerdict::Valid { witness } => Some(witness),
            ValidityVerdict::Invalid => None,
        }
    }
}

/// A target state is valid iff the circuit CNF together with the target
/// literals is satisfiable; the model's input bits are kept as a witness.
pub fn check_validity(spec: &TargetSpec, formula: &CnfFormula) -> Result<ValidityVerdict, SatError> {
    let mut solver = Solver::from_formula(formula, 0);
    check_validity_with(&mut solver, spec, formula)
}

pub fn check_validity_with<B: SatBackend + ?Sized>(
    backend: &mut B,
    spec: &TargetSpec,
    formula: &CnfFormula,
) -> Result<ValidityVerdict, SatError> {
    let assumptions = build_target_formula(spec, formula);
    let result = backend.solve(&assumptions)?;
    Ok(match project_inputs(&result, &formula.input_vars) {
        Some(witness) => ValidityVerdict::Valid { witness },
        None => ValidityVerdict::Invalid,
    })
}

/// Primary-input bits of a SAT model.
pub(crate) fn project_inputs(result: &SatResult, input_vars: &[Var]) -> Option<InputPattern> {
    let model = result.model.as_ref()?;
    Some(InputPattern::from_bools(input_vars.iter().map(|v| model[v.index()])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::encode;
    use crate::graph::{build_graph, diff_graphs};
    use crate::netlist::{GateKind, Netlist, RawGate};
    use crate::sim::simulate;
    use crate::synth;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn literal_form() {
        let g = build_graph(&synth::c17()).unwrap();
        let f = encode(&g);
        let t: Vec<NodeId> = ["n10", "n11", "n16"].iter().map(|n| g.find(n).unwrap()).collect();
        let spec = TargetSpec::new(&g, vec![(t[0], true), (t[1], false), (t[2], true)], TargetSource::Manual).unwrap();
        let lits = build_target_formula(&spec, &f);
        assert_eq!(lits, vec![f.var_of(t[0]).pos(), f.var_of(t[1]).neg(), f.var_of(t[2]).pos()]);

        let empty = TargetSpec::new(&g, vec![], TargetSource::Manual).unwrap();
        assert!(build_target_formula(&empty, &f).is_empty());
        let single = TargetSpec::new(&g, vec![(t[1], false)], TargetSource::Manual).unwrap();
        assert_eq!(build_target_formula(&single, &f), vec![f.var_of(t[1]).neg()]);
    }

    #[test]
    fn spec_rejects_duplicates_and_strangers() {
        let g = build_graph(&synth::c17()).unwrap();
        let n = g.find("n22").unwrap();
        assert_eq!(
            TargetSpec::new(&g, vec![(n, true), (n, false)], TargetSource::Manual),
            Err(TargetError::DuplicateNode(n))
        );
        assert_eq!(
            TargetSpec::new(&g, vec![(NodeId(99), true)], TargetSource::Manual),
            Err(TargetError::UnknownNode(NodeId(99)))
        );
    }

    #[test]
    fn and_gate_validity() {
        let n = Netlist::new("t", s(&["a", "b"]), s(&["y"]), vec![RawGate::new("y", GateKind::And, ["a", "b"])])
            .unwrap();
        let g = build_graph(&n).unwrap();
        let f = encode(&g);
        let spec = TargetSpec::new(&g, vec![(g.find("y").unwrap(), true)], TargetSource::Manual).unwrap();
        let verdict = check_validity(&spec, &f).unwrap();
        assert_eq!(verdict.witness().unwrap().to_bitstring(), "11");
    }

    #[test]
    fn constant_node_is_invalid_target() {
        let n = Netlist::new(
            "t",
            s(&["a"]),
            s(&["y"]),
            vec![RawGate::new("na", GateKind::Not, ["a"]), RawGate::new("y", GateKind::And, ["a", "na"])],
        )
        .unwrap();
        let g = build_graph(&n).unwrap();
        let spec = TargetSpec::new(&g, vec![(g.find("y").unwrap(), true)], TargetSource::Manual).unwrap();
        assert_eq!(check_validity(&spec, &encode(&g)).unwrap(), ValidityVerdict::Invalid);
    }

    #[test]
    fn c17_pairs_match_exhaustive_simulation() {
        let g = build_graph(&synth::c17()).unwrap();
        let f = encode(&g);
        let all: Vec<_> = (0u32..32)
            .map(|b| simulate(&g, &InputPattern::from_bools((0..5).map(|i| b >> i & 1 == 1))).unwrap())
            .collect();
        let names = ["n10", "n11", "n16", "n19", "n22", "n23"];
        for a in names {
            for b in names {
                if a == b {
                    continue;
                }
                for (va, vb) in [(false, false), (false, true), (true, false), (true, true)] {
                    let (na, nb) = (g.find(a).unwrap(), g.find(b).unwrap());
                    let spec = TargetSpec::new(&g, vec![(na, va), (nb, vb)], TargetSource::Manual).unwrap();
                    let reachable = all.iter().any(|v| v.get(na) == va && v.get(nb) == vb);
                    let verdict = check_validity(&spec, &f).unwrap();
                    assert_eq!(verdict.is_valid(), reachable, "{a}={va} {b}={vb}");
                    if let Some(w) = verdict.witness() {
                        let v = simulate(&g, w).unwrap();
                        assert!(v.get(na) == va && v.get(nb) == vb);
                    }
                }
            }
        }
    }

    #[test]
    fn diff_specs() {
        let g = build_graph(&synth::c17()).unwrap();
        assert!(targets_from_diff(&diff_graphs(&g, &g), Polarity::Both).is_empty());

        let mut net = synth::c17();
        for g in net.gates.iter_mut().filter(|g| g.output == "n10" || g.output == "n19") {
            g.kind = GateKind::And;
        }
        let m = build_graph(&net).unwrap();
        let d = diff_graphs(&g, &m);
        let one = targets_from_diff(&d, Polarity::One);
        assert_eq!(one.len(), 1);
        assert!(one[0].entries().iter().all(|&(_, v)| v));
        let both = targets_from_diff(&d, Polarity::Both);
        assert_eq!(both.len(), 2);
        assert_eq!(both[0].len(), 2);
        assert!(both[0].entries().iter().all(|&(_, v)| !v));
        assert!(both[1].entries().iter().all(|&(_, v)| v));
        assert_eq!(both[0].source, TargetSource::GraphDiff);
    }
}
