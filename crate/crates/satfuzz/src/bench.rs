//! ISCAS `.bench` reader and writer.
//!
//! ```text
//! # comment
//! INPUT(a)
//! OUTPUT(y)
//! y = NAND(a, b)
//! ```
//!
//! Keywords are case-insensitive, identifiers are not. `BUFF` reads as `BUF`,
//! and `CONST0()` / `CONST1()` are accepted so that every netlist can be
//! written back out.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use satfuzz_core::{GateKind, Netlist, RawGate};

use crate::{strip_comment, SourceError};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> SourceError {
        SourceError::new(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SourceError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}` before end of line")),
            })
        }
    }

    /// Identifier plus its column.
    fn ident(&mut self) -> Result<(&'a str, usize), SourceError> {
        self.skip_ws();
        let column = self.column();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| c.is_whitespace() || "(),=".contains(c)).unwrap_or(rest.len());
        if len == 0 {
            return Err(match rest.chars().next() {
                Some(c) => self.error(format!("expected an identifier, found `{c}`")),
                None => self.error("expected an identifier before end of line"),
            });
        }
        self.pos += len;
        Ok((&rest[..len], column))
    }
}

struct Located {
    line: usize,
    column: usize,
}

pub fn parse_bench(text: &str) -> Result<Netlist, SourceError> {
    let mut inputs = Vec::new();
    let mut outputs: Vec<(String, Located)> = Vec::new();
    let mut gates = Vec::new();
    // Every fanin reference, checked once all definitions are known.
    let mut uses: Vec<(String, Located)> = Vec::new();
    let mut defined: BTreeMap<String, usize> = BTreeMap::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let mut cur = Cursor { text: strip_comment(raw), pos: 0, line };
        if cur.at_end() {
            continue;
        }
        let (first, first_col) = cur.ident()?;
        if cur.eat('(') {
            let (name, col) = cur.ident()?;
            cur.expect(')')?;
            if !cur.at_end() {
                return Err(cur.error("unexpected text after declaration"));
            }
            match first.to_ascii_uppercase().as_str() {
                "INPUT" => {
                    define(&mut defined, name, line, col)?;
                    inputs.push(name.to_string());
                }
                "OUTPUT" => {
                    if outputs.iter().any(|(o, _)| o == name) {
                        return Err(SourceError::new(line, col, format!("output `{name}` is declared twice")));
                    }
                    outputs.push((name.to_string(), Located { line, column: col }));
                }
                _ => return Err(SourceError::new(line, first_col, format!("unknown declaration `{first}`"))),
            }
            continue;
        }
        cur.expect('=')?;
        let (keyword, kind_col) = cur.ident()?;
        let kind = GateKind::from_keyword(keyword)
            .ok_or_else(|| SourceError::new(line, kind_col, format!("unsupported gate keyword `{keyword}`")))?;
        cur.expect('(')?;
        let mut fanin = Vec::new();
        if !cur.eat(')') {
            loop {
                let (name, col) = cur.ident()?;
                fanin.push(name.to_string());
                uses.push((name.to_string(), Located { line, column: col }));
                if cur.eat(')') {
                    break;
                }
                if !cur.eat(',') {
                    return Err(cur.error("expected `,` or `)` in the input list"));
                }
            }
        }
        if !cur.at_end() {
            return Err(cur.error("unexpected text after gate"));
        }
        if !kind.accepts_arity(fanin.len()) {
            return Err(SourceError::new(
                line,
                kind_col,
                format!("{kind} takes {} inputs, found {}", kind.arity_description(), fanin.len()),
            ));
        }
        define(&mut defined, first, line, first_col)?;
        gates.push(RawGate { output: first.to_string(), kind, inputs: fanin });
    }

    for (name, at) in uses.iter().chain(&outputs) {
        if !defined.contains_key(name) {
            return Err(SourceError::new(at.line, at.column, format!("undefined signal `{name}`")));
        }
    }
    let outputs = outputs.into_iter().map(|(o, _)| o).collect();
    Netlist::new("", inputs, outputs, gates).map_err(|e| SourceError::new(0, 0, e.to_string()))
}

fn define(defined: &mut BTreeMap<String, usize>, name: &str, line: usize, column: usize) -> Result<(), SourceError> {
    if let Some(first) = defined.get(name) {
        return Err(SourceError::new(line, column, format!("`{name}` is already defined on line {first}")));
    }
    defined.insert(name.to_string(), line);
    Ok(())
}

pub fn write_bench(netlist: &Netlist) -> String {
    let mut out = String::new();
    if !netlist.name.is_empty() {
        let _ = writeln!(out, "# {}", netlist.name);
    }
    let _ = writeln!(
        out,
        "# {} inputs, {} outputs, {} gates\n",
        netlist.primary_inputs.len(),
        netlist.primary_outputs.len(),
        netlist.gates.len()
    );
    for i in &netlist.primary_inputs {
        let _ = writeln!(out, "INPUT({i})");
    }
    if !netlist.primary_inputs.is_empty() {
        out.push('\n');
    }
    for o in &netlist.primary_outputs {
        let _ = writeln!(out, "OUTPUT({o})");
    }
    if !netlist.primary_outputs.is_empty() {
        out.push('\n');
    }
    for g in &netlist.gates {
        let _ = writeln!(out, "{} = {}({})", g.output, g.kind.keyword(), g.inputs.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)").unwrap();
        assert_eq!(n.primary_inputs, ["a", "b"]);
        assert_eq!(n.primary_outputs, ["y"]);
        assert_eq!(n.gates, [RawGate::new("y", GateKind::And, ["a", "b"])]);
    }

    #[test]
    fn comments_case_and_aliases() {
        let n = parse_bench("# header\n\ninput(A)  # trailing\nOUTPUT(z)\nz = buff(A)\nk = CONST1()\n").unwrap();
        assert_eq!(n.gates[0].kind, GateKind::Buf);
        assert_eq!(n.gates[1].kind, GateKind::Const1);
        assert!(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(A)").is_err());
    }

    #[test]
    fn located_errors() {
        let e = parse_bench("INPUT(a)\ny = AND(a)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(e.message.contains("AND"));

        let e = parse_bench("INPUT(a)\ny = FOO(a, a)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));

        let e = parse_bench("INPUT(a)\ny = AND(a, b)\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 12));
        assert!(e.message.contains("`b`"));

        let e = parse_bench("INPUT(a)\na = NOT(a)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));

        let e = parse_bench("INPUT(a)\ny = NOT(a\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("`)`"));

        let e = parse_bench("OUTPUT(q)\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 8));
    }

    #[test]
    fn write_then_parse() {
        let src = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nq = DFF(y)\nn = NOR(a, q)\ny = XOR(n, b, a)\nc = CONST0()\n";
        let n = parse_bench(src).unwrap();
        assert_eq!(parse_bench(&write_bench(&n)).unwrap(), n);
    }
}
