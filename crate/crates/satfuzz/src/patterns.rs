//! Pattern files: a `# <input names>` header, then one bitstring per pattern
//! with the first primary input leftmost.

use std::fmt::Write as _;

use satfuzz_core::{CircuitGraph, InputPattern};

use crate::{strip_comment, SourceError};

pub fn write_patterns(patterns: &[InputPattern], graph: &CircuitGraph) -> String {
    let names: Vec<&str> = graph.primary_inputs.iter().map(|&i| graph.node(i).name.as_str()).collect();
    let mut out = format!("# {}\n", names.join(" "));
    for p in patterns {
        let _ = writeln!(out, "{p}");
    }
    out
}

pub fn parse_patterns(text: &str, width: usize) -> Result<Vec<InputPattern>, SourceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let p = InputPattern::from_bitstring(body)
            .ok_or_else(|| SourceError::new(i + 1, 0, format!("`{body}` is not a bitstring")))?;
        if p.len() != width {
            return Err(SourceError::new(i + 1, 0, format!("pattern has {} bits, expected {width}", p.len())));
        }
        out.push(p);
    }
    Ok(out)
}
