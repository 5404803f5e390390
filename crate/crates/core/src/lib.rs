//! SAT-directed input generation for gate-level netlists.
//!
//! The crate takes a flattened, full-scan netlist, turns it into a levelized
//! graph and a Tseitin CNF, and uses a built-in CDCL solver to produce input
//! patterns that drive a chosen set of nodes to chosen values. The same graph
//! feeds a bit-parallel simulator, the target coverage metrics, and a
//! coverage-guided greybox fuzzer used as a baseline.
//!
//! Everything here is `no_std` + `alloc`. Parsing, file formats, process
//! spawning and the command line live in the companion `satfuzz` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cgf;
pub mod cnf;
pub mod coverage;
pub mod graph;
pub mod netlist;
pub mod pattern;
pub mod sat;
pub mod seedgen;
pub mod sim;
pub mod synth;
pub mod target;

pub use cgf::{run_cgf, CgfError, CgfRun, Corpus, CorpusEntry};
pub use cnf::{encode, CnfFormula, Lit, Var};
pub use coverage::{coverage_curve, measure, CoverageError, CoverageReport, CurvePoint, TargetCoverage};
pub use graph::{build_graph, diff_graphs, CircuitGraph, DiffReason, GraphDiff, GraphError, Node, NodeId, NodeKind};
pub use netlist::{scan_convert, GateKind, Netlist, NetlistError, RawGate};
pub use pattern::InputPattern;
pub use sat::{SatBackend, SatError, SatResult, SatStatus, Solver};
pub use seedgen::{generate, generate_with, GenConfig, GenError, GenReport, StopReason};
pub use sim::{simulate, simulate_batch, SimBatch, SimError, Valuation, WORD_BITS};
pub use target::{
    build_target_formula, check_validity, targets_from_diff, Polarity, TargetError, TargetSource, TargetSpec,
    ValidityVerdict,
};
