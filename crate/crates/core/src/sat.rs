//! Incremental CDCL solver and the backend boundary used by callers.
//!
//! Callers only talk to [`SatBackend`], so an external DIMACS solver can be
//! dropped in for the built-in [`Solver`]. Added clauses are permanent;
//! assumptions only hold for one `solve` call.

use alloc::vec;
use alloc::vec::Vec;
use core::mem;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{CnfFormula, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub status: SatStatus,
    /// Total assignment indexed by `Var::index`, present iff `Sat`.
    pub model: Option<Vec<bool>>,
}

impl SatResult {
    pub fn unsat() -> SatResult {
        SatResult { status: SatStatus::Unsat, model: None }
    }

    pub fn sat(model: Vec<bool>) -> SatResult {
        SatResult { status: SatStatus::Sat, model: Some(model) }
    }

    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.model.as_ref().map(|m| m[var.index()])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("conflict budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("at-least-{k} constraint over {n} literals is infeasible")]
    InfeasibleCardinality { k: usize, n: usize },
    #[error("external solver: {0}")]
    Backend(alloc::string::String),
}

/// What the rest of the crate needs from a SAT solver.
pub trait SatBackend {
    fn var_count(&self) -> u32;

    fn new_var(&mut self) -> Var;

    /// Permanently conjoin `clause`. Variables beyond `var_count` are created.
    fn add_clause(&mut self, clause: &[Lit]);

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SatResult, SatError>;

    /// Constrain at least `k` of `lits` to be true, using fresh helper variables.
    fn encode_at_least_k(&mut self, lits: &[Lit], k: usize) -> Result<(), SatError> {
        let mut clauses = Vec::new();
        encode_at_least_k_into(lits, k, || self.new_var(), |c| clauses.push(c))?;
        for c in &clauses {
            self.add_clause(c);
        }
        Ok(())
    }
}

/// Clause-level at-least-k: `k == 1` is a single clause, `k == n` unit
/// clauses, anything in between a sequential counter over the literals.
pub fn encode_at_least_k_into(
    lits: &[Lit],
    k: usize,
    mut fresh: impl FnMut() -> Var,
    mut emit: impl FnMut(Vec<Lit>),
) -> Result<(), SatError> {
    let n = lits.len();
    if k > n {
        return Err(SatError::InfeasibleCardinality { k, n });
    }
    match k {
        0 => {}
        1 => emit(lits.to_vec()),
        _ if k == n => lits.iter().for_each(|&l| emit(vec![l])),
        _ => encode_counter(lits, k, &mut fresh, &mut emit),
    }
    Ok(())
}

/// Sequential counter with `n * k` registers: `s[i][j]` implies that at least
/// `j + 1` of `x_0..=x_i` are true, and `s[n-1][k-1]` is asserted. Register
/// `s[i][j]` only exists for `j <= i`.
fn encode_counter(xs: &[Lit], k: usize, fresh: &mut impl FnMut() -> Var, emit: &mut impl FnMut(Vec<Lit>)) {
    let n = xs.len();
    let mut prev: Vec<Var> = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let width = k.min(i + 1);
        let cur: Vec<Var> = (0..width).map(|_| fresh()).collect();
        for (j, &s) in cur.iter().enumerate() {
            // s -> prev[j] | x   and   s -> prev[j] | prev[j-1]
            let carry = prev.get(j).map(|p| p.pos());
            let mut take = vec![s.neg(), x];
            take.extend(carry);
            emit(take);
            if j > 0 {
                let mut shift = vec![s.neg(), prev[j - 1].pos()];
                shift.extend(carry);
                emit(shift);
            }
        }
        prev = cur;
    }
    debug_assert_eq!(prev.len(), k.min(n));
    emit(vec![prev[k - 1].pos()]);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

type ClauseRef = u32;

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

/// Max-heap of variable indices keyed by activity; ties go to the lower index.
#[derive(Debug, Clone, Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, ABSENT);
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != ABSENT
    }

    fn before(act: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top as usize)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::before(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && Self::before(act, self.heap[r], self.heap[l]) { r } else { l };
            if !Self::before(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_UNIT: u64 = 100;
const RANDOM_DECISION_FREQ: f64 = 0.02;

enum SearchOutcome {
    Done(SatStatus),
    Restart,
}

/// Built-in CDCL solver.
///
/// Unit propagation uses two watched literals with blockers; conflicts are
/// analysed to the first UIP with local minimization; branching is VSIDS with
/// a seeded tie-break perturbation and a small seeded random-decision rate;
/// restarts follow the Luby sequence; learnt clauses are thinned by LBD at
/// restarts. Decisions always take the negative phase, so unconstrained
/// variables come back false.
#[derive(Debug, Clone)]
pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    seen: Vec<bool>,
    ok: bool,
    rng: ChaCha8Rng,
    conflict_budget: Option<u64>,
    max_learnts: f64,
    learnt_count: usize,
    stats: SolverStats,
}

impl Solver {
    pub fn new(seed: u64) -> Solver {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            seen: Vec::new(),
            ok: true,
            rng: ChaCha8Rng::seed_from_u64(seed),
            conflict_budget: None,
            max_learnts: 2000.0,
            learnt_count: 0,
            stats: SolverStats::default(),
        }
    }

    /// A session over `formula`, whose clauses are loaded up front.
    pub fn from_formula(formula: &CnfFormula, seed: u64) -> Solver {
        let mut s = Solver::new(seed);
        s.reserve_vars(formula.var_count as usize);
        for c in &formula.clauses {
            s.add_clause(c);
        }
        s.max_learnts = (formula.clauses.len() as f64 / 3.0).max(2000.0);
        s
    }

    /// Conflict cap per `solve` call; `None` means unlimited.
    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.conflict_budget = budget;
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the clause set alone is known to be unsatisfiable.
    pub fn is_consistent(&self) -> bool {
        self.ok
    }

    fn reserve_vars(&mut self, n: usize) {
        let old = self.assigns.len();
        if n <= old {
            return;
        }
        self.assigns.resize(n, None);
        self.level.resize(n, 0);
        self.reason.resize(n, None);
        self.seen.resize(n, false);
        self.watches.resize_with(2 * n, Vec::new);
        self.order.grow(n);
        for v in old..n {
            // Seeded perturbation so different seeds explore different orders.
            let jitter: f64 = self.rng.random::<f64>() * 1e-3;
            self.activity.push(jitter);
            self.order.insert(v, &self.activity);
        }
    }

    #[inline]
    fn value(&self, lit: Lit) -> Option<bool> {
        self.assigns[lit.var().index()].map(|b| b != lit.is_negated())
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<ClauseRef>) {
        let v = lit.var().index();
        debug_assert!(self.assigns[v].is_none());
        self.assigns[v] = Some(!lit.is_negated());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for i in (lim..self.trail.len()).rev() {
            let v = self.trail[i].var().index();
            self.assigns[v] = None;
            self.reason[v] = None;
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
        self.qhead = lim;
    }

    fn attach(&mut self, cref: ClauseRef) {
        let c = &self.clauses[cref as usize];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a.code()].push(Watcher { cref, blocker: b });
        self.watches[b.code()].push(Watcher { cref, blocker: a });
    }

    fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() && conflict.is_none() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let lits = &mut self.clauses[cref as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let first_val = self.assigns[first.var().index()].map(|b| b != first.is_negated());
                if first != w.blocker && first_val == Some(true) {
                    ws[j] = Watcher { cref, blocker: first };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    if self.assigns[l.var().index()].map(|b| b != l.is_negated()) != Some(false) {
                        lits.swap(1, k);
                        self.watches[l.code()].push(Watcher { cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher { cref, blocker: first };
                j += 1;
                if first_val == Some(false) {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP learning. Returns the learnt clause (asserting literal first,
    /// highest remaining level second), the backjump level and its LBD.
    fn analyze(&mut self, mut confl: ClauseRef) -> (Vec<Lit>, usize, u32) {
        let current = self.decision_level() as u32;
        let mut learnt = vec![Lit::new(Var::new(1), false)];
        let mut to_clear = Vec::new();
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut uip: Option<Lit> = None;
        loop {
            self.bump_clause(confl);
            let skip = usize::from(uip.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[skip..] {
                let v = q.var().index();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                to_clear.push(v);
                self.bump_var(v);
                if self.level[v] >= current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var().index()] = false;
            pending -= 1;
            uip = Some(p);
            if pending == 0 {
                break;
            }
            confl = self.reason[p.var().index()].expect("non-decision literal on conflict path");
        }
        learnt[0] = !uip.unwrap();

        // Local minimization: drop literals implied by the rest of the clause.
        let mut keep = 1;
        for i in 1..learnt.len() {
            let q = learnt[i];
            let redundant = match self.reason[q.var().index()] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|l| {
                    let v = l.var().index();
                    self.seen[v] || self.level[v] == 0
                }),
            };
            if !redundant {
                learnt[keep] = q;
                keep += 1;
            }
        }
        learnt.truncate(keep);
        for v in to_clear {
            self.seen[v] = false;
        }

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let max_i = (1..learnt.len()).max_by_key(|&i| (self.level[learnt[i].var().index()], usize::MAX - i)).unwrap();
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()] as usize
        };
        let mut levels: Vec<u32> = learnt.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        (learnt, backjump, levels.len() as u32)
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if !self.order.heap.is_empty() && self.rng.random_bool(RANDOM_DECISION_FREQ) {
            let i = self.rng.random_range(0..self.order.heap.len());
            let v = self.order.heap[i] as usize;
            if self.assigns[v].is_none() {
                return Some(Var::from_index(v).neg());
            }
        }
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v].is_none() {
                return Some(Var::from_index(v).neg());
            }
        }
        None
    }

    fn reduce_learnts(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut learnts: Vec<usize> = (0..self.clauses.len()).filter(|&i| self.clauses[i].learnt).collect();
        learnts.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a], &self.clauses[b]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap_or(core::cmp::Ordering::Equal))
        });
        let mut drop = vec![false; self.clauses.len()];
        for &i in learnts.iter().take(learnts.len() / 2) {
            if self.clauses[i].lbd > 2 {
                drop[i] = true;
            }
        }
        // Level-0 reasons are never consulted by analysis.
        for v in 0..self.reason.len() {
            self.reason[v] = None;
        }
        let old = mem::take(&mut self.clauses);
        self.clauses = old.into_iter().zip(drop).filter(|(_, d)| !d).map(|(c, _)| c).collect();
        self.learnt_count = self.clauses.iter().filter(|c| c.learnt).count();
        for w in &mut self.watches {
            w.clear();
        }
        for cref in 0..self.clauses.len() as u32 {
            self.attach(cref);
        }
        self.max_learnts *= 1.1;
    }

    fn search(&mut self, restart_after: u64, assumptions: &[Lit], used: &mut u64) -> Result<SearchOutcome, SatError> {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                *used += 1;
                local_conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Ok(SearchOutcome::Done(SatStatus::Unsat));
                }
                let (learnt, backjump, lbd) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let cref = self.clauses.len() as ClauseRef;
                    let first = learnt[0];
                    self.clauses.push(Clause { lits: learnt, learnt: true, lbd, activity: 0.0 });
                    self.learnt_count += 1;
                    self.bump_clause(cref);
                    self.attach(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if let Some(budget) = self.conflict_budget {
                    if *used >= budget {
                        return Err(SatError::BudgetExhausted(budget));
                    }
                }
                continue;
            }

            if local_conflicts >= restart_after {
                return Ok(SearchOutcome::Restart);
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let p = assumptions[self.decision_level()];
                match self.value(p) {
                    Some(true) => self.trail_lim.push(self.trail.len()),
                    Some(false) => return Ok(SearchOutcome::Done(SatStatus::Unsat)),
                    None => {
                        next = Some(p);
                        break;
                    }
                }
            }
            let lit = match next {
                Some(p) => p,
                None => match self.pick_branch() {
                    Some(l) => {
                        self.stats.decisions += 1;
                        l
                    }
                    None => return Ok(SearchOutcome::Done(SatStatus::Sat)),
                },
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit, None);
        }
    }

    fn check_model(&self, model: &[bool], assumptions: &[Lit]) {
        for c in self.clauses.iter().filter(|c| !c.learnt) {
            assert!(c.lits.iter().any(|l| l.eval(model)), "model violates clause {:?}", c.lits);
        }
        for a in assumptions {
            assert!(a.eval(model), "model violates assumption {a}");
        }
    }
}

/// Luby sequence over powers of two: 1 1 2 1 1 2 4 1 1 2 ...
fn luby(mut x: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

impl SatBackend for Solver {
    fn var_count(&self) -> u32 {
        self.assigns.len() as u32
    }

    fn new_var(&mut self) -> Var {
        let n = self.assigns.len();
        self.reserve_vars(n + 1);
        Var::from_index(n)
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        if let Some(max) = clause.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        let mut lits = clause.to_vec();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        if lits.iter().any(|&l| self.value(l) == Some(true)) {
            return;
        }
        lits.retain(|&l| self.value(l).is_none());
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.clauses.len() as ClauseRef;
                self.clauses.push(Clause { lits, learnt: false, lbd: 0, activity: 0.0 });
                self.attach(cref);
            }
        }
    }

    fn solve(&mut self, assumptions: &[Lit]) -> Result<SatResult, SatError> {
        self.stats.solves += 1;
        if !self.ok {
            return Ok(SatResult::unsat());
        }
        if let Some(max) = assumptions.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        let mut used = 0u64;
        let mut restarts = 0u64;
        let outcome = loop {
            match self.search(luby(restarts) * RESTART_UNIT, assumptions, &mut used) {
                Ok(SearchOutcome::Done(status)) => break Ok(status),
                Ok(SearchOutcome::Restart) => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                    if self.learnt_count as f64 > self.max_learnts {
                        self.reduce_learnts();
                    }
                }
                Err(e) => break Err(e),
            }
        };
        let result = match outcome {
            Ok(SatStatus::Sat) => {
                let model: Vec<bool> = self.assigns.iter().map(|a| a.expect("total assignment")).collect();
                if cfg!(debug_assertions) {
                    self.check_model(&model, assumptions);
                }
                Ok(SatResult::sat(model))
            }
            Ok(SatStatus::Unsat) => Ok(SatResult::unsat()),
            Err(e) => Err(e),
        };
        self.cancel_until(0);
        result
    }
}
