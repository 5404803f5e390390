//! Levelized DAG over a scan-converted netlist.
//!
//! Node ids are handed out in topological order: primary inputs first, in
//! declaration order, then gates (constants included) in Kahn order with ties
//! broken by declaration order. `topo_order` is therefore the identity
//! permutation, but it is still materialized so callers don't rely on that.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::netlist::{GateKind, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Input,
    Const(bool),
    /// Never `Dff`, `Const0` or `Const1`.
    Gate(GateKind),
}

impl NodeKind {
    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Input => "INPUT",
            NodeKind::Const(false) => "CONST0",
            NodeKind::Const(true) => "CONST1",
            NodeKind::Gate(k) => k.keyword(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
    pub fanin: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("netlist still contains DFF `{0}`; run scan conversion first")]
    NotScanConverted(String),
    #[error("combinational cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("`{0}` is referenced but not defined")]
    Undefined(String),
}

#[derive(Debug, Clone)]
pub struct CircuitGraph {
    pub name: String,
    pub nodes: Vec<Node>,
    pub primary_inputs: Vec<NodeId>,
    pub primary_outputs: Vec<NodeId>,
    pub topo_order: Vec<NodeId>,
    pub level: Vec<u32>,
    by_name: BTreeMap<String, NodeId>,
}

impl CircuitGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of primary inputs (after scan conversion, pseudo-inputs included).
    pub fn input_count(&self) -> usize {
        self.primary_inputs.len()
    }

    /// Nodes that are neither inputs nor constants.
    pub fn gate_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Gate(_))).count()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn find(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn max_level(&self) -> u32 {
        self.level.iter().copied().max().unwrap_or(0)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }
}

/// Build the levelized graph of a combinational (or scan-converted) netlist.
pub fn build_graph(netlist: &Netlist) -> Result<CircuitGraph, GraphError> {
    if let Some(dff) = netlist.gates.iter().find(|g| g.kind == GateKind::Dff) {
        return Err(GraphError::NotScanConverted(dff.output.clone()));
    }

    enum Def {
        Input,
        Gate(usize),
    }
    let mut defs: BTreeMap<&str, Def> = BTreeMap::new();
    for pi in &netlist.primary_inputs {
        defs.insert(pi.as_str(), Def::Input);
    }
    for (i, g) in netlist.gates.iter().enumerate() {
        defs.insert(g.output.as_str(), Def::Gate(i));
    }

    // Gate-to-gate edges for Kahn's algorithm; inputs are ready from the start.
    let gate_count = netlist.gates.len();
    let mut pending = vec![0usize; gate_count];
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); gate_count];
    for (i, g) in netlist.gates.iter().enumerate() {
        for input in &g.inputs {
            match defs.get(input.as_str()) {
                Some(Def::Gate(src)) => {
                    pending[i] += 1;
                    consumers[*src].push(i);
                }
                Some(Def::Input) => {}
                None => return Err(GraphError::Undefined(input.clone())),
            }
        }
    }

    let mut nodes = Vec::with_capacity(netlist.primary_inputs.len() + gate_count);
    let mut by_name = BTreeMap::new();
    for pi in &netlist.primary_inputs {
        by_name.insert(pi.clone(), NodeId(nodes.len() as u32));
        nodes.push(Node { name: pi.clone(), kind: NodeKind::Input, fanin: Vec::new() });
    }

    let mut ready: VecDeque<usize> = (0..gate_count).filter(|&i| pending[i] == 0).collect();
    let mut placed = 0usize;
    while let Some(i) = ready.pop_front() {
        let g = &netlist.gates[i];
        let fanin = g.inputs.iter().map(|name| by_name[name.as_str()]).collect();
        let kind = match g.kind {
            GateKind::Const0 => NodeKind::Const(false),
            GateKind::Const1 => NodeKind::Const(true),
            k => NodeKind::Gate(k),
        };
        by_name.insert(g.output.clone(), NodeId(nodes.len() as u32));
        nodes.push(Node { name: g.output.clone(), kind, fanin });
        placed += 1;
        for &c in &consumers[i] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push_back(c);
            }
        }
    }
    if placed < gate_count {
        return Err(GraphError::Cycle(find_cycle(netlist, &pending, &defs_to_gate_index(netlist))));
    }

    let mut level = vec![0u32; nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        if let Some(max) = node.fanin.iter().map(|f| level[f.index()]).max() {
            level[i] = max + 1;
        }
    }

    Ok(CircuitGraph {
        name: netlist.name.clone(),
        primary_inputs: (0..netlist.primary_inputs.len() as u32).map(NodeId).collect(),
        primary_outputs: netlist.primary_outputs.iter().map(|o| by_name[o.as_str()]).collect(),
        topo_order: (0..nodes.len() as u32).map(NodeId).collect(),
        level,
        nodes,
        by_name,
    })
}

fn defs_to_gate_index(netlist: &Netlist) -> BTreeMap<&str, usize> {
    netlist.gates.iter().enumerate().map(|(i, g)| (g.output.as_str(), i)).collect()
}

/// Walk backwards from an unplaced gate through unplaced fanins until a gate
/// repeats; every unplaced gate has at least one unplaced fanin.
fn find_cycle(netlist: &Netlist, pending: &[usize], gate_of: &BTreeMap<&str, usize>) -> Vec<String> {
    let start = pending.iter().position(|&p| p > 0).expect("cycle without pending gate");
    let mut seen_at: BTreeMap<usize, usize> = BTreeMap::new();
    let mut path = Vec::new();
    let mut cur = start;
    loop {
        if let Some(&pos) = seen_at.get(&cur) {
            let mut cycle: Vec<String> = path[pos..].iter().map(|&g: &usize| netlist.gates[g].output.clone()).collect();
            cycle.reverse();
            cycle.push(cycle[0].clone());
            return cycle;
        }
        seen_at.insert(cur, path.len());
        path.push(cur);
        cur = netlist.gates[cur]
            .inputs
            .iter()
            .filter_map(|i| gate_of.get(i.as_str()).copied())
            .find(|&g| pending[g] > 0)
            .expect("unplaced gate with all fanins placed");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiffReason {
    KindChanged,
    FaninChanged,
    NewNode,
}

impl DiffReason {
    pub fn tag(self) -> &'static str {
        match self {
            DiffReason::KindChanged => "kind-changed",
            DiffReason::FaninChanged => "fanin-changed",
            DiffReason::NewNode => "new-node",
        }
    }
}

/// Structural difference, expressed in node ids of the modified graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDiff {
    pub changed: Vec<NodeId>,
    pub added: Vec<NodeId>,
    pub reason: BTreeMap<NodeId, DiffReason>,
}

impl GraphDiff {
    pub fn is_empty(&self) -> bool {
        self.changed.is_empty() && self.added.is_empty()
    }

    /// `changed ∪ added`, ascending by node id.
    pub fn touched(&self) -> Vec<NodeId> {
        self.reason.keys().copied().collect()
    }
}

/// Name-matched structural diff. Deleted nodes are ignored.
pub fn diff_graphs(original: &CircuitGraph, modified: &CircuitGraph) -> GraphDiff {
    let mut diff = GraphDiff::default();
    for id in modified.node_ids() {
        let node = modified.node(id);
        let reason = match original.find(&node.name) {
            None => Some(DiffReason::NewNode),
            Some(orig_id) => {
                let orig = original.node(orig_id);
                if orig.kind != node.kind {
                    Some(DiffReason::KindChanged)
                } else if fanin_names(original, orig) != fanin_names(modified, node) {
                    Some(DiffReason::FaninChanged)
                } else {
                    None
                }
            }
        };
        match reason {
            Some(DiffReason::NewNode) => diff.added.push(id),
            Some(_) => diff.changed.push(id),
            None => continue,
        }
        diff.reason.insert(id, reason.unwrap());
    }
    diff
}

fn fanin_names<'a>(graph: &'a CircuitGraph, node: &Node) -> Vec<&'a str> {
    let mut names: Vec<&str> = node.fanin.iter().map(|f| graph.node(*f).name.as_str()).collect();
    names.sort_unstable();
    names
}
