//! Exhaustive enumeration; the oracle the search route is checked against.

use std::time::{Duration, Instant};

use super::{Query, SatResult, SatStatus, SolverStats};
use crate::error::SolveError;
use crate::formula::{Assignment, DnfSet, Literal};

/// Enumerates the assignments of `d` in ascending binary order (variable
/// `i` is bit `i - 1`) and returns the first model.
pub fn brute_force_sat(d: &DnfSet, cap: usize) -> Result<SatResult, SolveError> {
    brute_force_query(&Query::new(d), cap, None)
}

/// Terms and clauses compiled to (positive-mask, negative-mask) pairs.
struct Compiled {
    formulas: Vec<Vec<(u64, u64)>>,
    clauses: Vec<(u64, u64)>,
    contradiction: bool,
}

fn masks<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> (u64, u64) {
    lits.into_iter().fold((0, 0), |(p, n), l| {
        let bit = 1u64 << l.var().index();
        if l.is_positive() {
            (p | bit, n)
        } else {
            (p, n | bit)
        }
    })
}

impl Compiled {
    fn new(q: &Query<'_>) -> Self {
        let mut contradiction = false;
        let mut formulas: Vec<Vec<(u64, u64)>> = Vec::new();
        for f in q.set.formulas() {
            if f.has_empty_term() {
                continue;
            }
            if f.terms().is_empty() {
                contradiction = true;
            }
            formulas.push(f.terms().iter().map(|t| masks(t.literals())).collect());
        }
        // Evaluation order only affects speed: short formulas reject sooner.
        formulas.sort_by_key(Vec::len);
        let clauses = q.extra.iter().map(|c| masks(c.literals())).collect::<Vec<_>>();
        if q.extra.iter().any(|c| c.is_empty()) {
            contradiction = true;
        }
        Compiled { formulas, clauses, contradiction }
    }

    #[inline]
    fn satisfied(&self, a: u64) -> bool {
        let na = !a;
        self.clauses.iter().all(|&(p, n)| a & p != 0 || na & n != 0)
            && self.formulas.iter().all(|terms| terms.iter().any(|&(p, n)| a & p == p && na & n == n))
    }
}

pub fn brute_force_query(q: &Query<'_>, cap: usize, budget: Option<Duration>) -> Result<SatResult, SolveError> {
    let nvars = q.nvars();
    if nvars > cap || nvars >= 64 {
        return Err(SolveError::BruteForceCap { nvars, cap });
    }
    for c in &q.extra {
        if c.max_var() > nvars {
            return Err(SolveError::BruteForceCap { nvars: c.max_var(), cap });
        }
    }
    let start = Instant::now();
    let compiled = Compiled::new(q);
    let mut stats = SolverStats::default();
    let total: u64 = 1 << nvars;

    if !compiled.contradiction {
        for a in 0..total {
            if a & 0xffff == 0xffff {
                if let Some(b) = budget {
                    if start.elapsed() > b {
                        return Err(SolveError::Timeout(b));
                    }
                }
            }
            if compiled.satisfied(a) {
                stats.decisions = a + 1;
                stats.finish(start);
                return Ok(SatResult { status: SatStatus::Sat, model: Some(Assignment::from_bits(nvars, a)), stats });
            }
        }
        stats.decisions = total;
    }
    stats.finish(start);
    Ok(SatResult { status: SatStatus::Unsat, model: None, stats })
}
