//! Satisfiability of k-DNF sets, optionally conjoined with extra CNF
//! constraints over the same variables.
//!
//! Two independent routes decide every query: [`brute_force_query`]
//! enumerates assignments, and the search route clausifies and runs
//! [`dpll_sat`] (or an external DIMACS solver). [`sat_query`] picks one
//! according to [`Strategy`] and re-checks every model it returns.

mod brute;
mod cnf;
mod dpll;
mod external;
mod implication;
mod xor;

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_query, brute_force_sat};
pub use cnf::{clausify, Clausification, CnfClause, CnfFormula, ExtensionVar};
pub use dpll::dpll_sat;
pub use external::ExternalSolver;
pub use implication::{implies, negated_clause_query, shared_universe, ClauseCertificate, ClauseStatus, Implication};
pub use xor::{encode_xor_atom, CdXorFormula, XorAtom};

use crate::error::{FormulaError, SolveError};
use crate::formula::{Assignment, DnfSet, VariableId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SatStatus {
    Sat,
    Unsat,
}

impl SatStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SatStatus::Sat => "SAT",
            SatStatus::Unsat => "UNSAT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub elapsed_us: u64,
}

impl SolverStats {
    pub fn merge(&mut self, other: &SolverStats) {
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.elapsed_us += other.elapsed_us;
    }

    pub(crate) fn finish(&mut self, start: Instant) {
        self.elapsed_us = start.elapsed().as_micros() as u64;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub status: SatStatus,
    pub model: Option<Assignment>,
    pub stats: SolverStats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Brute force within the cap, search beyond it.
    #[default]
    Auto,
    Brute,
    Search,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "brute" => Ok(Strategy::Brute),
            "search" => Ok(Strategy::Search),
            other => Err(format!("unknown strategy {other:?} (expected auto, brute or search)")),
        }
    }
}

pub const DEFAULT_BRUTE_CAP: usize = 24;
pub const DEFAULT_XOR_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub strategy: Strategy,
    pub brute_cap: usize,
    pub xor_cap: usize,
    pub budget: Option<Duration>,
    /// Replaces the internal search when set.
    pub external: Option<ExternalSolver>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            strategy: Strategy::Auto,
            brute_cap: DEFAULT_BRUTE_CAP,
            xor_cap: DEFAULT_XOR_CAP,
            budget: None,
            external: None,
        }
    }
}

impl SolverConfig {
    pub fn with_strategy(&self, strategy: Strategy) -> Self {
        SolverConfig { strategy, ..self.clone() }
    }

    pub fn with_budget(&self, budget: Option<Duration>) -> Self {
        SolverConfig { budget, ..self.clone() }
    }

    /// The route `Auto` resolves to for a universe of `nvars` variables.
    pub fn resolve(&self, nvars: usize) -> Strategy {
        match self.strategy {
            Strategy::Auto if nvars <= self.brute_cap => Strategy::Brute,
            Strategy::Auto => Strategy::Search,
            s => s,
        }
    }
}

/// A k-DNF set conjoined with CNF side constraints on its own variables.
#[derive(Debug, Clone)]
pub struct Query<'a> {
    pub set: &'a DnfSet,
    pub extra: Vec<CnfClause>,
}

impl<'a> Query<'a> {
    pub fn new(set: &'a DnfSet) -> Self {
        Query { set, extra: Vec::new() }
    }

    pub fn with_extra(set: &'a DnfSet, extra: Vec<CnfClause>) -> Self {
        Query { set, extra }
    }

    pub fn nvars(&self) -> usize {
        self.set.nvars()
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, SolveError> {
        if !self.set.eval(a)? {
            return Ok(false);
        }
        for c in &self.extra {
            if !c.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decides `d` alone.
pub fn sat(d: &DnfSet, config: &SolverConfig) -> Result<SatResult, SolveError> {
    sat_query(&Query::new(d), config)
}

/// Decides a query; any model returned is over the query's own universe
/// and has been re-evaluated against it.
pub fn sat_query(q: &Query<'_>, config: &SolverConfig) -> Result<SatResult, SolveError> {
    let result = match config.resolve(q.nvars()) {
        Strategy::Brute | Strategy::Auto => brute_force_query(q, config.brute_cap, config.budget)?,
        Strategy::Search => search_query(q, config)?,
    };
    if let Some(model) = &result.model {
        if !q.eval(model)? {
            return Err(SolveError::UnsoundModel);
        }
    }
    Ok(result)
}

fn search_query(q: &Query<'_>, config: &SolverConfig) -> Result<SatResult, SolveError> {
    let mut c = clausify(q.set);
    for clause in &q.extra {
        if clause.max_var() > q.nvars() {
            return Err(SolveError::Formula(FormulaError::VariableOutOfRange {
                id: VariableId::new(clause.max_var() as u32),
                nvars: q.nvars(),
            }));
        }
    }
    c.cnf.extend(q.extra.iter().cloned());
    let mut result = match &config.external {
        Some(ext) => ext.solve(&c.cnf, config.budget)?,
        None => dpll_sat(&c.cnf, config.budget)?,
    };
    result.model = result.model.map(|m| m.restrict(c.original_vars));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{naive_pair, tarsi_cnf, weight_gadget};
    use crate::formula::{DnfFormula, Literal, Term, VarName, VariableId};

    #[test]
    fn auto_switches_on_cap() {
        let cfg = SolverConfig { brute_cap: 3, ..SolverConfig::default() };
        assert_eq!(cfg.resolve(3), Strategy::Brute);
        assert_eq!(cfg.resolve(4), Strategy::Search);
    }

    #[test]
    fn strategies_agree_on_small_families() {
        let sets = [tarsi_cnf(4).unwrap(), naive_pair(3).unwrap(), weight_gadget(2, 3).unwrap()];
        for d in &sets {
            let b = sat(d, &SolverConfig::default().with_strategy(Strategy::Brute)).unwrap();
            let s = sat(d, &SolverConfig::default().with_strategy(Strategy::Search)).unwrap();
            assert_eq!(b.status, s.status);
        }
    }

    #[test]
    fn weight_gadget_is_satisfiable() {
        let d = weight_gadget(2, 3).unwrap();
        let r = sat(&d, &SolverConfig::default()).unwrap();
        assert!(r.is_sat());
        assert!(d.eval(r.model.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn empty_formula_is_unsat_on_both_routes() {
        let names = vec![VarName::new("x", &[1])];
        let unit = Term::new([Literal::pos(VariableId::new(1))]).unwrap();
        let d = DnfSet::new(1, names, vec![DnfFormula::new(vec![unit]), DnfFormula::new(vec![])]).unwrap();
        for s in [Strategy::Brute, Strategy::Search] {
            let r = sat(&d, &SolverConfig::default().with_strategy(s)).unwrap();
            assert_eq!(r.status, SatStatus::Unsat);
        }
    }

    #[test]
    fn extra_constraints_restrict_models() {
        let d = weight_gadget(2, 3).unwrap();
        // x1 and x2 both true is impossible under the gadget.
        let extra =
            vec![CnfClause::unit(Literal::pos(VariableId::new(1))), CnfClause::unit(Literal::pos(VariableId::new(2)))];
        let q = Query::with_extra(&d, extra);
        for s in [Strategy::Brute, Strategy::Search] {
            let r = sat_query(&q, &SolverConfig::default().with_strategy(s)).unwrap();
            assert_eq!(r.status, SatStatus::Unsat);
        }
    }
}
