//! Small circuit builders: the classic c17/s27 benchmarks, parametric
//! AND-tree / OR / XOR-ladder fixtures, and seeded random netlists.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{GateKind, Netlist, RawGate};

fn ids<S: AsRef<str>>(v: &[S]) -> Vec<String> {
    v.iter().map(|s| s.as_ref().to_string()).collect()
}

/// ISCAS-85 c17 with identifiers prefixed by `n`.
pub fn c17() -> Netlist {
    use GateKind::Nand;
    Netlist::new(
        "c17",
        ids(&["n1", "n2", "n3", "n6", "n7"]),
        ids(&["n22", "n23"]),
        alloc::vec![
            RawGate::new("n10", Nand, ["n1", "n3"]),
            RawGate::new("n11", Nand, ["n3", "n6"]),
            RawGate::new("n16", Nand, ["n2", "n11"]),
            RawGate::new("n19", Nand, ["n11", "n7"]),
            RawGate::new("n22", Nand, ["n10", "n16"]),
            RawGate::new("n23", Nand, ["n16", "n19"]),
        ],
    )
    .expect("c17 is well formed")
}

/// ISCAS-89 s27 (three DFFs, not scan converted).
pub fn s27() -> Netlist {
    use GateKind::*;
    Netlist::new(
        "s27",
        ids(&["G0", "G1", "G2", "G3"]),
        ids(&["G17"]),
        alloc::vec![
            RawGate::new("G5", Dff, ["G10"]),
            RawGate::new("G6", Dff, ["G11"]),
            RawGate::new("G7", Dff, ["G13"]),
            RawGate::new("G14", Not, ["G0"]),
            RawGate::new("G17", Not, ["G11"]),
            RawGate::new("G8", And, ["G14", "G6"]),
            RawGate::new("G15", Or, ["G12", "G8"]),
            RawGate::new("G16", Or, ["G3", "G8"]),
            RawGate::new("G9", Nand, ["G16", "G15"]),
            RawGate::new("G10", Nor, ["G14", "G11"]),
            RawGate::new("G11", Nor, ["G5", "G9"]),
            RawGate::new("G12", Nor, ["G1", "G7"]),
            RawGate::new("G13", Nor, ["G2", "G12"]),
        ],
    )
    .expect("s27 is well formed")
}

/// Balanced tree of 2-input ANDs over `leaves` inputs `x0..`; the root is `root`.
/// `leaves` must be a power of two, at least 2.
pub fn and_tree(leaves: usize) -> Netlist {
    assert!(leaves >= 2 && leaves.is_power_of_two(), "leaves must be a power of two >= 2");
    let inputs: Vec<String> = (0..leaves).map(|i| format!("x{i}")).collect();
    let mut layer = inputs.clone();
    let mut gates = Vec::new();
    let mut depth = 0;
    while layer.len() > 1 {
        depth += 1;
        let next: Vec<String> = layer
            .chunks(2)
            .enumerate()
            .map(|(j, pair)| {
                let name = if layer.len() == 2 { "root".to_string() } else { format!("a{depth}_{j}") };
                gates.push(RawGate::new(name.clone(), GateKind::And, [pair[0].clone(), pair[1].clone()]));
                name
            })
            .collect();
        layer = next;
    }
    Netlist::new(format!("and_tree{leaves}"), inputs, ids(&["root"]), gates).expect("tree is well formed")
}

/// A single `width`-input OR gate `y`.
pub fn or_gate(width: usize) -> Netlist {
    let inputs: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
    let gate = RawGate::new("y", GateKind::Or, inputs.clone());
    Netlist::new(format!("or{width}"), inputs, ids(&["y"]), alloc::vec![gate]).expect("or is well formed")
}

/// Chain of XOR/XNOR stages over `width` inputs, closed by one 3-input XOR so
/// the wide-XOR encoding is exercised. `width >= 4`.
pub fn xor_ladder(width: usize) -> Netlist {
    assert!(width >= 4);
    let inputs: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
    let mut gates = Vec::new();
    let mut prev = inputs[0].clone();
    for (i, x) in inputs[1..width - 2].iter().enumerate() {
        let kind = if i % 3 == 2 { GateKind::Xnor } else { GateKind::Xor };
        let name = format!("s{}", i + 1);
        gates.push(RawGate::new(name.clone(), kind, [prev.clone(), x.clone()]));
        prev = name;
    }
    gates.push(RawGate::new("parity", GateKind::Xor, [prev, inputs[width - 2].clone(), inputs[width - 1].clone()]));
    gates.push(RawGate::new("mix", GateKind::And, ["s1", "parity"]));
    Netlist::new(format!("xor_ladder{width}"), inputs, ids(&["parity", "mix"]), gates).expect("ladder is well formed")
}

#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub inputs: usize,
    pub gates: usize,
    /// Maximum fanin for multi-input kinds.
    pub max_fanin: usize,
    /// Probability (in percent) of emitting a constant node.
    pub const_percent: u32,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { inputs: 6, gates: 12, max_fanin: 3, const_percent: 3 }
    }
}

/// Seeded random combinational netlist. Gates draw fanins from any earlier
/// signal, so the result is acyclic; every sink gate becomes an output.
pub fn random_netlist(seed: u64, params: RandomParams) -> Netlist {
    const KINDS: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<String> = (0..params.inputs.max(1)).map(|i| format!("i{i}")).collect();
    let mut signals = inputs.clone();
    let mut used = alloc::vec![false; inputs.len()];
    let mut gates = Vec::with_capacity(params.gates);
    for g in 0..params.gates {
        let name = format!("g{g}");
        let kind = if rng.random_range(0..100) < params.const_percent {
            if rng.random_bool(0.5) {
                GateKind::Const1
            } else {
                GateKind::Const0
            }
        } else {
            KINDS[rng.random_range(0..KINDS.len())]
        };
        let arity = match kind {
            GateKind::Not | GateKind::Buf => 1,
            GateKind::Const0 | GateKind::Const1 => 0,
            _ => rng.random_range(2..=params.max_fanin.max(2)),
        };
        let fanin: Vec<String> = (0..arity)
            .map(|_| {
                let s = rng.random_range(0..signals.len());
                used[s] = true;
                signals[s].clone()
            })
            .collect();
        gates.push(RawGate { output: name.clone(), kind, inputs: fanin });
        signals.push(name);
        used.push(false);
    }
    let outputs: Vec<String> =
        signals.iter().zip(&used).skip(inputs.len()).filter(|(_, u)| !**u).map(|(s, _)| s.clone()).collect();
    Netlist::new(format!("random{seed}"), inputs, outputs, gates).expect("random netlist is well formed")
}
