//! Gate-wise Tseitin encoding of a [`CircuitGraph`].
//!
//! Node `i` (in topological order) gets variable `i + 1`, so primary inputs
//! occupy `1..=I`. Wide XOR/XNOR gates are chained through 2-input helper
//! variables numbered after the last node; helpers have no node.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

use crate::graph::{CircuitGraph, NodeId, NodeKind};
use crate::netlist::GateKind;

/// A 1-based variable index, as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on 0.
    #[inline]
    pub fn new(v: u32) -> Var {
        assert!(v >= 1, "variables are 1-based");
        Var(v)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based index for dense arrays.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Var {
        Var(i as u32 + 1)
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit::new(self, false)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, true)
    }
}

/// Packed literal: `2 * (var - 1) + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(((var.0 - 1) << 1) | negated as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense index over literals, `0..2 * var_count`.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// The literal whose value is `value` when `var` is true, i.e. `var` if
    /// `value`, `¬var` otherwise.
    #[inline]
    pub fn with_value(var: Var, value: bool) -> Lit {
        Lit::new(var, !value)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    /// `None` for 0 or out-of-range values.
    pub fn from_dimacs(x: i64) -> Option<Lit> {
        if x == 0 || x.unsigned_abs() > u32::MAX as u64 / 2 {
            return None;
        }
        Some(Lit::new(Var(x.unsigned_abs() as u32), x < 0))
    }

    /// Truth value under a total assignment indexed by `Var::index`.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var().index()] != self.is_negated()
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub clauses: Vec<Vec<Lit>>,
    pub var_count: u32,
    /// Indexed by `NodeId::index`.
    pub node_to_var: Vec<Var>,
    /// Indexed by `Var::index`; `None` for helpers.
    pub var_to_node: Vec<Option<NodeId>>,
    /// Variables of the graph's primary inputs, in input order.
    pub input_vars: Vec<Var>,
}

impl CnfFormula {
    /// A bare formula with no node map (helper-only), mostly for tests.
    pub fn from_clauses(var_count: u32, clauses: Vec<Vec<Lit>>) -> CnfFormula {
        CnfFormula {
            clauses,
            var_count,
            node_to_var: Vec::new(),
            var_to_node: vec![None; var_count as usize],
            input_vars: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_to_var.len()
    }

    pub fn var_of(&self, node: NodeId) -> Var {
        self.node_to_var[node.index()]
    }

    pub fn node_of(&self, var: Var) -> Option<NodeId> {
        self.var_to_node.get(var.index()).copied().flatten()
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    fn fresh(&mut self) -> Var {
        self.var_count += 1;
        self.var_to_node.push(None);
        Var(self.var_count)
    }
}

/// Encode the graph as CNF. Satisfying assignments projected onto node
/// variables are exactly the consistent valuations of the circuit.
pub fn encode(graph: &CircuitGraph) -> CnfFormula {
    let n = graph.node_count();
    let mut node_to_var = vec![Var(1); n];
    let mut var_to_node = vec![None; n];
    for (pos, &id) in graph.topo_order.iter().enumerate() {
        node_to_var[id.index()] = Var::from_index(pos);
        var_to_node[pos] = Some(id);
    }
    let input_vars = graph.primary_inputs.iter().map(|pi| node_to_var[pi.index()]).collect();
    let mut f = CnfFormula { clauses: Vec::new(), var_count: n as u32, node_to_var, var_to_node, input_vars };

    for &id in &graph.topo_order {
        let node = graph.node(id);
        let y = f.var_of(id);
        let fanin: Vec<Var> = node.fanin.iter().map(|&u| f.var_of(u)).collect();
        match node.kind {
            NodeKind::Input => {}
            NodeKind::Const(value) => f.clauses.push(vec![Lit::with_value(y, value)]),
            NodeKind::Gate(kind) => encode_gate(&mut f, kind, y, &fanin),
        }
    }
    f
}

fn encode_gate(f: &mut CnfFormula, kind: GateKind, y: Var, fanin: &[Var]) {
    match kind {
        GateKind::Buf | GateKind::Not => {
            let a = fanin[0].pos();
            let a = if kind == GateKind::Not { !a } else { a };
            f.clauses.push(vec![y.neg(), a]);
            f.clauses.push(vec![y.pos(), !a]);
        }
        GateKind::And | GateKind::Nand | GateKind::Or | GateKind::Nor => {
            // AND: y -> a_i for all i, and (all a_i) -> y. OR is the dual, with
            // inverted inputs and output; NAND/NOR invert the output only.
            let invert_inputs = matches!(kind, GateKind::Or | GateKind::Nor);
            let invert_output = matches!(kind, GateKind::Nand | GateKind::Or);
            let out = Lit::new(y, invert_output);
            let ins: Vec<Lit> = fanin.iter().map(|a| Lit::new(*a, invert_inputs)).collect();
            for &a in &ins {
                f.clauses.push(vec![!out, a]);
            }
            let mut big = Vec::with_capacity(ins.len() + 1);
            big.push(out);
            big.extend(ins.iter().map(|&a| !a));
            f.clauses.push(big);
        }
        GateKind::Xor | GateKind::Xnor => {
            let mut acc = fanin[0];
            for (i, &b) in fanin[1..].iter().enumerate() {
                let last = i + 2 == fanin.len();
                let (target, invert) = if last { (y, kind == GateKind::Xnor) } else { (f.fresh(), false) };
                push_xor2(f, Lit::new(target, invert), acc, b);
                acc = target;
            }
        }
        GateKind::Const0 | GateKind::Const1 | GateKind::Dff => {
            unreachable!("graph nodes never carry {kind}")
        }
    }
}

/// `out <-> a xor b`.
fn push_xor2(f: &mut CnfFormula, out: Lit, a: Var, b: Var) {
    let (a, b) = (a.pos(), b.pos());
    f.clauses.push(vec![!out, a, b]);
    f.clauses.push(vec![!out, !a, !b]);
    f.clauses.push(vec![out, !a, b]);
    f.clauses.push(vec![out, a, !b]);
}
