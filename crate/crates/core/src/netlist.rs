//! Flat gate lists as produced by the netlist readers, and full-scan conversion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Gate vocabulary shared by the readers, the graph and the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Dff,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Dff,
        GateKind::Const0,
        GateKind::Const1,
    ];

    /// Upper-case keyword, as written in `.bench` files.
    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Dff => "DFF",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    /// Case-insensitive keyword lookup. `BUFF` is accepted as an alias of `BUF`.
    pub fn from_keyword(word: &str) -> Option<GateKind> {
        let kind = match word.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "NOT" => GateKind::Not,
            "BUF" | "BUFF" => GateKind::Buf,
            "DFF" => GateKind::Dff,
            "CONST0" => GateKind::Const0,
            "CONST1" => GateKind::Const1,
            _ => return None,
        };
        Some(kind)
    }

    /// Whether `n` fanins is a legal arity for this kind.
    pub fn accepts_arity(self, n: usize) -> bool {
        match self {
            GateKind::Not | GateKind::Buf | GateKind::Dff => n == 1,
            GateKind::Const0 | GateKind::Const1 => n == 0,
            _ => n >= 2,
        }
    }

    pub fn arity_description(self) -> &'static str {
        match self {
            GateKind::Not | GateKind::Buf | GateKind::Dff => "exactly 1 input",
            GateKind::Const0 | GateKind::Const1 => "no inputs",
            _ => "at least 2 inputs",
        }
    }

    /// Evaluate the combinational function on 64 lanes at once.
    ///
    /// Panics on `Dff`, which has no combinational meaning.
    pub fn eval_word(self, inputs: impl IntoIterator<Item = u64>) -> u64 {
        let mut it = inputs.into_iter();
        match self {
            GateKind::And => it.fold(!0, |acc, w| acc & w),
            GateKind::Nand => !it.fold(!0, |acc, w| acc & w),
            GateKind::Or => it.fold(0, |acc, w| acc | w),
            GateKind::Nor => !it.fold(0, |acc, w| acc | w),
            GateKind::Xor => it.fold(0, |acc, w| acc ^ w),
            GateKind::Xnor => !it.fold(0, |acc, w| acc ^ w),
            GateKind::Not => !it.next().unwrap_or(0),
            GateKind::Buf => it.next().unwrap_or(0),
            GateKind::Const0 => 0,
            GateKind::Const1 => !0,
            GateKind::Dff => panic!("DFF has no combinational function; scan-convert first"),
        }
    }

    pub fn eval(self, inputs: impl IntoIterator<Item = bool>) -> bool {
        self.eval_word(inputs.into_iter().map(|b| if b { !0 } else { 0 })) & 1 == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGate {
    pub output: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
}

impl RawGate {
    pub fn new(output: impl Into<String>, kind: GateKind, inputs: impl IntoIterator<Item = impl Into<String>>) -> Self {
        RawGate { output: output.into(), kind, inputs: inputs.into_iter().map(Into::into).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("empty identifier")]
    EmptyIdentifier,
    #[error("`{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("`{signal}` is used by `{user}` but never defined")]
    UndefinedSignal { signal: String, user: String },
    #[error("output `{0}` is never defined")]
    UndefinedOutput(String),
    #[error("{kind} gate `{output}` has {found} inputs, expected {expected}")]
    Arity { output: String, kind: GateKind, found: usize, expected: &'static str },
    #[error("scan-converted netlist still contains DFF `{0}`")]
    LatchAfterScan(String),
}

/// A parsed, flattened netlist.
///
/// Built through [`Netlist::new`], which checks referential integrity, so every
/// `Netlist` in circulation can be turned into a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub name: String,
    pub primary_inputs: Vec<String>,
    pub primary_outputs: Vec<String>,
    pub gates: Vec<RawGate>,
    pub scan_converted: bool,
}

impl Netlist {
    pub fn new(
        name: impl Into<String>,
        primary_inputs: Vec<String>,
        primary_outputs: Vec<String>,
        gates: Vec<RawGate>,
    ) -> Result<Self, NetlistError> {
        let netlist = Netlist { name: name.into(), primary_inputs, primary_outputs, gates, scan_converted: false };
        netlist.validate()?;
        Ok(netlist)
    }

    pub fn validate(&self) -> Result<(), NetlistError> {
        let mut defined = BTreeSet::new();
        for id in self.primary_inputs.iter().chain(self.gates.iter().map(|g| &g.output)) {
            if id.is_empty() {
                return Err(NetlistError::EmptyIdentifier);
            }
            if !defined.insert(id.as_str()) {
                return Err(NetlistError::DuplicateDefinition(id.clone()));
            }
        }
        for gate in &self.gates {
            if !gate.kind.accepts_arity(gate.inputs.len()) {
                return Err(NetlistError::Arity {
                    output: gate.output.clone(),
                    kind: gate.kind,
                    found: gate.inputs.len(),
                    expected: gate.kind.arity_description(),
                });
            }
            if self.scan_converted && gate.kind == GateKind::Dff {
                return Err(NetlistError::LatchAfterScan(gate.output.clone()));
            }
            if let Some(missing) = gate.inputs.iter().find(|i| !defined.contains(i.as_str())) {
                return Err(NetlistError::UndefinedSignal { signal: missing.clone(), user: gate.output.clone() });
            }
        }
        if let Some(missing) = self.primary_outputs.iter().find(|o| !defined.contains(o.as_str())) {
            return Err(NetlistError::UndefinedOutput(missing.clone()));
        }
        Ok(())
    }

    pub fn dff_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Dff).count()
    }

    /// Gate count per kind, in [`GateKind::ALL`] order.
    pub fn kind_histogram(&self) -> BTreeMap<GateKind, usize> {
        let mut hist = BTreeMap::new();
        for g in &self.gates {
            *hist.entry(g.kind).or_insert(0) += 1;
        }
        hist
    }
}

/// Full-scan conversion: every DFF becomes a pseudo primary input (its Q) and
/// a pseudo primary output (its D).
///
/// Pseudo-inputs are appended after the original inputs in gate declaration
/// order, and so are pseudo-outputs. A D net that is already a primary output
/// is not listed twice. Initial values are not modeled. Netlists already marked
/// as converted are returned unchanged.
pub fn scan_convert(netlist: &Netlist) -> Netlist {
    if netlist.scan_converted {
        return netlist.clone();
    }
    let mut out = netlist.clone();
    out.gates.clear();
    for gate in &netlist.gates {
        if gate.kind == GateKind::Dff {
            out.primary_inputs.push(gate.output.clone());
            let d = &gate.inputs[0];
            if !out.primary_outputs.contains(d) {
                out.primary_outputs.push(d.clone());
            }
        } else {
            out.gates.push(gate.clone());
        }
    }
    out.scan_converted = true;
    out
}
