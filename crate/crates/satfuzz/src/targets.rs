//! Target files: one `<node>=<0|1>` per line, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use satfuzz_core::{CircuitGraph, TargetSource, TargetSpec};

use crate::{strip_comment, SourceError};

pub fn parse_targets(text: &str, graph: &CircuitGraph) -> Result<TargetSpec, SourceError> {
    let mut entries = Vec::new();
    let mut first_line: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let Some((name, value)) = body.split_once('=') else {
            return Err(SourceError::new(line, 0, format!("expected `<node>=<0|1>`, found `{body}`")));
        };
        let (name, value) = (name.trim(), value.trim());
        let value = match value {
            "0" => false,
            "1" => true,
            other => return Err(SourceError::new(line, 0, format!("target value `{other}` is not 0 or 1"))),
        };
        let node = graph.find(name).ok_or_else(|| SourceError::new(line, 0, format!("unknown node `{name}`")))?;
        if let Some(prev) = first_line.insert(name, line) {
            return Err(SourceError::new(line, 0, format!("node `{name}` is already targeted on line {prev}")));
        }
        entries.push((node, value));
    }
    TargetSpec::new(graph, entries, TargetSource::Manual).map_err(|e| SourceError::new(0, 0, e.to_string()))
}

pub fn write_targets(spec: &TargetSpec, graph: &CircuitGraph) -> String {
    let mut out = String::new();
    for &(node, v) in spec.entries() {
        let _ = writeln!(out, "{}={}", graph.node(node).name, v as u8);
    }
    out
}
