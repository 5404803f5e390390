//! DIMACS CNF reader and writer, plus the solver-competition output format.

use std::fmt::Write as _;

use satfuzz_core::{CircuitGraph, CnfFormula, Lit, SatResult};

use crate::SourceError;

/// Node map comments, the header, the formula clauses, then one unit clause
/// per assumption.
pub fn write_dimacs(formula: &CnfFormula, graph: Option<&CircuitGraph>, assumptions: &[Lit]) -> String {
    let mut out = String::new();
    if let Some(g) = graph {
        for id in g.node_ids() {
            let _ = writeln!(out, "c node {} = var {}", g.node(id).name, formula.var_of(id).get());
        }
    }
    let _ = write!(out, "p cnf {} {}", formula.var_count, formula.clauses.len() + assumptions.len());
    for clause in formula.clauses.iter().map(Vec::as_slice).chain(assumptions.iter().map(std::slice::from_ref)) {
        out.push('\n');
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push('0');
    }
    out.push('\n');
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SourceError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('c') || body.starts_with('%') {
            continue;
        }
        if body.starts_with('p') {
            let fields: Vec<&str> = body.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| SourceError::new(line, 0, format!("bad header `{body}`")))?);
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(SourceError::new(line, 0, "clause before `p cnf` header"));
        };
        for tok in body.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| SourceError::new(line, 0, format!("bad literal `{tok}`")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if x.unsigned_abs() > vars as u64 {
                return Err(SourceError::new(line, 0, format!("literal {x} exceeds the {vars} declared variables")));
            }
            current.push(Lit::from_dimacs(x).expect("nonzero literal"));
        }
    }
    let Some((vars, declared)) = header else {
        return Err(SourceError::new(0, 0, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(SourceError::new(0, 0, format!("header declares {declared} clauses, found {}", clauses.len())));
    }
    Ok(CnfFormula::from_clauses(vars, clauses))
}

/// `s SATISFIABLE` with `v` lines, or `s UNSATISFIABLE`.
pub fn write_solver_output(result: &SatResult) -> String {
    let Some(model) = &result.model else {
        return "s UNSATISFIABLE\n".to_string();
    };
    let mut out = String::from("s SATISFIABLE\n");
    let lits: Vec<String> = model
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let v = i as i64 + 1;
            (if b { v } else { -v }).to_string()
        })
        .chain(std::iter::once("0".to_string()))
        .collect();
    for chunk in lits.chunks(16) {
        let _ = writeln!(out, "v {}", chunk.join(" "));
    }
    out
}
