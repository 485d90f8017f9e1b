//! Chronological-backtracking DPLL with two-watched-literal unit propagation.
//!
//! Branching is fixed: the lowest-numbered unassigned variable, `false`
//! first. There is no learning and no restarts, so a run is fully
//! determined by its input.

use std::time::{Duration, Instant};

use super::{CnfFormula, SatResult, SatStatus, SolverStats};
use crate::error::SolveError;
use crate::formula::Assignment;

const UNASSIGNED: u8 = 2;

/// Literal code: `2 * index + 1` for positive, `2 * index` for negative.
type Lit = usize;

#[inline]
fn var_of(l: Lit) -> usize {
    l >> 1
}

#[inline]
fn negate(l: Lit) -> Lit {
    l ^ 1
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// Per variable: 0 false, 1 true, `UNASSIGNED`.
    values: Vec<u8>,
    trail: Vec<Lit>,
    /// Trail length at the start of each decision level.
    levels: Vec<usize>,
    qhead: usize,
    next_var: usize,
    stats: SolverStats,
}

impl Solver {
    #[inline]
    fn lit_value(&self, l: Lit) -> u8 {
        let v = self.values[var_of(l)];
        if v == UNASSIGNED {
            UNASSIGNED
        } else {
            v ^ (!l as u8 & 1)
        }
    }

    fn assign(&mut self, l: Lit) {
        self.values[var_of(l)] = (l & 1) as u8;
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = negate(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = false;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_value = {
                    let v = self.values[var_of(first)];
                    if v == UNASSIGNED {
                        UNASSIGNED
                    } else {
                        v ^ (!first as u8 & 1)
                    }
                };
                if first_value == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let v = self.values[var_of(l)];
                    if v == UNASSIGNED || v == (l & 1) as u8 {
                        clause.swap(1, k);
                        self.watches[clause[1]].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if first_value == 0 {
                    conflict = true;
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.stats.propagations += 1;
                    self.assign(first);
                }
            }
            ws.truncate(j);
            self.watches[false_lit] = ws;
            if conflict {
                return false;
            }
        }
        true
    }

    /// Undoes the current decision level and returns its decision literal.
    fn backtrack(&mut self) -> Lit {
        let start = self.levels.pop().expect("backtrack at level 0");
        let decision = self.trail[start];
        for &l in &self.trail[start..] {
            self.values[var_of(l)] = UNASSIGNED;
            self.next_var = self.next_var.min(var_of(l));
        }
        self.trail.truncate(start);
        self.qhead = start;
        decision
    }

    fn pick(&mut self) -> Option<usize> {
        while self.next_var < self.values.len() {
            if self.values[self.next_var] == UNASSIGNED {
                return Some(self.next_var);
            }
            self.next_var += 1;
        }
        None
    }
}

/// Complete search over `f`; `budget` bounds wall-clock time.
pub fn dpll_sat(f: &CnfFormula, budget: Option<Duration>) -> Result<SatResult, SolveError> {
    let start = Instant::now();
    let nvars = f.nvars();
    let encode = |l: &crate::formula::Literal| 2 * l.var().index() + usize::from(l.is_positive());

    let mut solver = Solver {
        clauses: Vec::with_capacity(f.clauses().len()),
        watches: vec![Vec::new(); 2 * nvars],
        values: vec![UNASSIGNED; nvars],
        trail: Vec::with_capacity(nvars),
        levels: Vec::new(),
        qhead: 0,
        next_var: 0,
        stats: SolverStats::default(),
    };

    let unsat = |mut stats: SolverStats| {
        stats.finish(start);
        Ok(SatResult { status: SatStatus::Unsat, model: None, stats })
    };

    let mut units = Vec::new();
    for c in f.clauses() {
        let lits: Vec<Lit> = c.literals().iter().map(encode).collect();
        match lits.len() {
            0 => return unsat(solver.stats),
            1 => units.push(lits[0]),
            _ => {
                let ci = solver.clauses.len();
                solver.watches[lits[0]].push(ci);
                solver.watches[lits[1]].push(ci);
                solver.clauses.push(lits);
            }
        }
    }
    for l in units {
        match solver.lit_value(l) {
            0 => return unsat(solver.stats),
            1 => {}
            _ => {
                solver.stats.propagations += 1;
                solver.assign(l);
            }
        }
    }

    let mut ok = solver.propagate();
    let mut steps: u64 = 0;
    loop {
        steps += 1;
        if let Some(b) = budget {
            if steps & 0xff == 0 && start.elapsed() > b {
                return Err(SolveError::Timeout(b));
            }
        }
        if !ok {
            if solver.levels.is_empty() {
                return unsat(solver.stats);
            }
            // The decision failed in every extension, so its negation is
            // implied at the level below.
            let decision = solver.backtrack();
            solver.stats.propagations += 1;
            solver.assign(negate(decision));
            ok = solver.propagate();
            continue;
        }
        match solver.pick() {
            None => break,
            Some(var) => {
                solver.stats.decisions += 1;
                solver.levels.push(solver.trail.len());
                solver.assign(2 * var);
                ok = solver.propagate();
            }
        }
    }

    let model = Assignment::from_values(solver.values.iter().map(|&v| v == 1).collect());
    solver.stats.finish(start);
    Ok(SatResult { status: SatStatus::Sat, model: Some(model), stats: solver.stats })
}
