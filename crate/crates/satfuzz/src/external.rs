//! Any DIMACS solver binary as a [`SatBackend`].
//!
//! Each `solve` writes the accumulated clauses plus the assumptions as unit
//! clauses to the child's stdin and reads its stdout. Both the competition
//! format (`s SATISFIABLE` / `v` lines) and the bare `SAT` / `UNSAT` format
//! followed by a literal list are understood. Variables the solver leaves out
//! of its model read as false.

use std::ffi::OsString;
use std::io::Write;
use std::process::{Command, Stdio};

use satfuzz_core::{CnfFormula, Lit, SatBackend, SatError, SatResult, Var};

use crate::dimacs::write_dimacs;

#[derive(Debug, Clone)]
pub struct ExternalSolver {
    program: OsString,
    args: Vec<OsString>,
    formula: CnfFormula,
}

impl ExternalSolver {
    pub fn new(program: impl Into<OsString>, args: impl IntoIterator<Item = impl Into<OsString>>) -> Self {
        ExternalSolver {
            program: program.into(),
            args: args.into_iter().map(Into::into).collect(),
            formula: CnfFormula::from_clauses(0, Vec::new()),
        }
    }

    /// Parse `program arg arg ...` split on whitespace.
    pub fn from_command_line(command: &str) -> Option<Self> {
        let mut words = command.split_whitespace();
        let program = words.next()?;
        Some(ExternalSolver::new(program, words))
    }

    pub fn load(&mut self, formula: &CnfFormula) {
        for c in &formula.clauses {
            self.add_clause(c);
        }
        self.formula.var_count = self.formula.var_count.max(formula.var_count);
    }
}

impl SatBackend for ExternalSolver {
    fn var_count(&self) -> u32 {
        self.formula.var_count
    }

    fn new_var(&mut self) -> Var {
        self.formula.var_count += 1;
        Var::new(self.formula.var_count)
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        if let Some(max) = clause.iter().map(|l| l.var().get()).max() {
            self.formula.var_count = self.formula.var_count.max(max);
        }
        self.formula.clauses.push(clause.to_vec());
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SatResult, SatError> {
        let input = write_dimacs(&self.formula, None, assumptions);
        let backend = |e: &dyn std::fmt::Display| SatError::Backend(format!("{}: {e}", self.program.to_string_lossy()));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| backend(&e))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
        let output = child.wait_with_output().map_err(|e| backend(&e))?;
        writer.join().expect("stdin writer").ok();
        let result = parse_solver_output(&String::from_utf8_lossy(&output.stdout), self.formula.var_count)
            .map_err(|e| backend(&e))?;
        if let Some(model) = &result.model {
            if !self.formula.is_satisfied_by(model) || !assumptions.iter().all(|l| l.eval(model)) {
                return Err(backend(&"returned model does not satisfy the formula"));
            }
        }
        Ok(result)
    }
}

pub fn parse_solver_output(text: &str, var_count: u32) -> Result<SatResult, String> {
    let mut status: Option<bool> = None;
    let mut model = vec![false; var_count as usize];
    for line in text.lines().map(str::trim) {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match tag {
            "s" => {
                status = match rest.trim() {
                    "SATISFIABLE" => Some(true),
                    "UNSATISFIABLE" => Some(false),
                    other => return Err(format!("solver reported `{other}`")),
                }
            }
            "SAT" | "SATISFIABLE" => status = Some(true),
            "UNSAT" | "UNSATISFIABLE" => status = Some(false),
            "v" => read_literals(rest, &mut model)?,
            "c" | "" => {}
            _ if status == Some(true) => read_literals(line, &mut model)?,
            _ => {}
        }
    }
    match status {
        Some(true) => Ok(SatResult::sat(model)),
        Some(false) => Ok(SatResult::unsat()),
        None => Err("no satisfiability verdict in solver output".to_string()),
    }
}

fn read_literals(text: &str, model: &mut [bool]) -> Result<(), String> {
    for tok in text.split_whitespace() {
        let x: i64 = tok.parse().map_err(|_| format!("bad model literal `{tok}`"))?;
        let v = x.unsigned_abs() as usize;
        if v > model.len() {
            return Err(format!("model literal {x} beyond {} variables", model.len()));
        }
        if v > 0 {
            model[v - 1] = x > 0;
        }
    }
    Ok(())
}
