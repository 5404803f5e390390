//! BLIF subset reader: `.model`, `.inputs`, `.outputs`, `.names`, `.latch`
//! and `.end`.
//!
//! Each `.names` cover must compute one of the supported gate functions of its
//! inputs. Covers are compared by truth table, so `1- 1` / `-1 1` reads as an
//! OR just like the AND-of-complements form would read as a NAND. A cover with
//! no rows is constant 0; a lone `1` row over no inputs is constant 1.

use satfuzz_core::{GateKind, Netlist, RawGate};

use crate::{strip_comment, SourceError};

/// Widest cover compared by truth table.
const MAX_COVER_INPUTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlifNetlist {
    pub netlist: Netlist,
    /// Non-fatal notes, e.g. ignored latch initial values.
    pub warnings: Vec<String>,
}

/// Logical lines: comments removed, `\` continuations joined, blank lines
/// dropped. Each carries its first physical line number.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let (body, continued) = match body.trim_end().strip_suffix('\\') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let entry = pending.get_or_insert_with(|| (i + 1, String::new()));
        entry.1.push(' ');
        entry.1.push_str(body);
        if !continued {
            let (line, s) = pending.take().unwrap();
            if !s.trim().is_empty() {
                out.push((line, s.trim().to_string()));
            }
        }
    }
    if let Some((line, s)) = pending {
        if !s.trim().is_empty() {
            out.push((line, s.trim().to_string()));
        }
    }
    out
}

struct Cover {
    line: usize,
    signals: Vec<String>,
    rows: Vec<(usize, String)>,
}

pub fn parse_blif(text: &str) -> Result<BlifNetlist, SourceError> {
    let mut name = String::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut gates = Vec::new();
    let mut warnings = Vec::new();
    let mut cover: Option<Cover> = None;
    let mut seen_model = false;
    let mut ended = false;

    for (line, text) in logical_lines(text) {
        if ended {
            return Err(SourceError::new(line, 1, "text after `.end`"));
        }
        let mut words = text.split_whitespace();
        let head = words.next().unwrap();
        if !head.starts_with('.') {
            match cover.as_mut() {
                Some(c) => c.rows.push((line, text.clone())),
                None => return Err(SourceError::new(line, 1, "cover row outside `.names`")),
            }
            continue;
        }
        if let Some(c) = cover.take() {
            gates.push(cover_to_gate(c)?);
        }
        let args: Vec<String> = words.map(str::to_string).collect();
        match head {
            ".model" => {
                if seen_model {
                    return Err(SourceError::new(line, 1, "only one `.model` per file is supported"));
                }
                seen_model = true;
                name = args.first().cloned().unwrap_or_default();
            }
            ".inputs" => inputs.extend(args),
            ".outputs" => outputs.extend(args),
            ".names" => {
                if args.is_empty() {
                    return Err(SourceError::new(line, 1, "`.names` needs at least an output signal"));
                }
                cover = Some(Cover { line, signals: args, rows: Vec::new() });
            }
            ".latch" => {
                if args.len() < 2 {
                    return Err(SourceError::new(line, 1, "`.latch` needs an input and an output"));
                }
                if args.len() > 2 {
                    warnings.push(format!(
                        "line {line}: latch `{}` extra fields `{}` ignored (initial values are not modeled)",
                        args[1],
                        args[2..].join(" ")
                    ));
                }
                gates.push(RawGate::new(args[1].clone(), GateKind::Dff, [args[0].clone()]));
            }
            ".end" => ended = true,
            other => return Err(SourceError::new(line, 1, format!("unsupported BLIF construct `{other}`"))),
        }
    }
    if let Some(c) = cover.take() {
        gates.push(cover_to_gate(c)?);
    }
    let netlist = Netlist::new(name, inputs, outputs, gates).map_err(|e| SourceError::new(0, 0, e.to_string()))?;
    Ok(BlifNetlist { netlist, warnings })
}

fn cover_to_gate(cover: Cover) -> Result<RawGate, SourceError> {
    let (fanin, output) = cover.signals.split_at(cover.signals.len() - 1);
    let output = output[0].clone();
    let n = fanin.len();
    if n > MAX_COVER_INPUTS {
        return Err(SourceError::new(cover.line, 1, format!("cover for `{output}` has more than {MAX_COVER_INPUTS} inputs")));
    }

    let mut cubes: Vec<&str> = Vec::new();
    let mut polarity: Option<bool> = None;
    for (line, row) in &cover.rows {
        let fields: Vec<&str> = row.split_whitespace().collect();
        let (plane, out) = match (n, fields.as_slice()) {
            (0, [out]) => ("", *out),
            (_, [plane, out]) if n > 0 => (*plane, *out),
            _ => return Err(SourceError::new(*line, 1, format!("malformed cover row `{row}`"))),
        };
        if plane.len() != n || !plane.chars().all(|c| matches!(c, '0' | '1' | '-')) {
            return Err(SourceError::new(*line, 1, format!("cover row `{row}` does not match {n} inputs")));
        }
        let bit = match out {
            "1" => true,
            "0" => false,
            _ => return Err(SourceError::new(*line, 1, format!("cover output `{out}` is not 0 or 1"))),
        };
        if polarity.replace(bit).is_some_and(|p| p != bit) {
            return Err(SourceError::new(*line, 1, "cover mixes on-set and off-set rows"));
        }
        cubes.push(plane);
    }

    if n == 0 {
        let kind = if polarity == Some(true) { GateKind::Const1 } else { GateKind::Const0 };
        return Ok(RawGate { output, kind, inputs: Vec::new() });
    }

    let on_set = polarity.unwrap_or(true);
    let table: Vec<bool> = (0u32..1 << n)
        .map(|m| {
            let hit = cubes.iter().any(|cube| {
                cube.chars().enumerate().all(|(i, c)| match c {
                    '-' => true,
                    c => (c == '1') == (m >> i & 1 == 1),
                })
            });
            hit == on_set
        })
        .collect();

    let candidates: &[GateKind] = if n == 1 {
        &[GateKind::Buf, GateKind::Not]
    } else {
        &[GateKind::And, GateKind::Nand, GateKind::Or, GateKind::Nor, GateKind::Xor, GateKind::Xnor]
    };
    let matched = candidates.iter().copied().find(|kind| {
        (0u32..1 << n).all(|m| kind.eval((0..n).map(|i| m >> i & 1 == 1)) == table[m as usize])
    });
    match matched {
        Some(kind) => Ok(RawGate { output, kind, inputs: fanin.to_vec() }),
        None => {
            let rows: Vec<&str> = cover.rows.iter().map(|(_, r)| r.as_str()).collect();
            Err(SourceError::new(
                cover.line,
                1,
                format!(
                    "cover for `{output}` over ({}) is not a supported gate; rows: {}",
                    fanin.join(", "),
                    if rows.is_empty() { "(none)".to_string() } else { rows.join("; ") }
                ),
            ))
        }
    }
}
