//! CNF clauses and the term-extension clausification of k-DNF sets.

use serde::{Deserialize, Serialize};

use crate::error::FormulaError;
use crate::formula::{Assignment, DnfSet, Literal, VariableId};

/// A disjunction of literals over distinct variables. Empty means `false`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfClause {
    literals: Vec<Literal>,
}

impl CnfClause {
    /// Literal order is preserved; a variable may occur only once.
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        let mut vars: Vec<VariableId> = literals.iter().map(|l| l.var()).collect();
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(FormulaError::RepeatedVariable(w[0]));
        }
        Ok(CnfClause { literals })
    }

    pub fn unit(lit: Literal) -> Self {
        CnfClause { literals: vec![lit] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> usize {
        self.literals.iter().map(|l| l.var().get() as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for lit in &self.literals {
            if lit.eval(a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    nvars: usize,
    clauses: Vec<CnfClause>,
}

impl CnfFormula {
    /// `nvars` is raised to cover every variable that occurs.
    pub fn new(nvars: usize, clauses: Vec<CnfClause>) -> Self {
        let nvars = clauses.iter().map(CnfClause::max_var).fold(nvars, usize::max);
        CnfFormula { nvars, clauses }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn clauses(&self) -> &[CnfClause] {
        &self.clauses
    }

    pub fn push(&mut self, clause: CnfClause) {
        self.nvars = self.nvars.max(clause.max_var());
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = CnfClause>) {
        for c in clauses {
            self.push(c);
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for c in &self.clauses {
            if !c.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Extension variable standing for one term of size at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionVar {
    pub var: VariableId,
    pub formula: usize,
    pub term: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clausification {
    pub cnf: CnfFormula,
    pub original_vars: usize,
    pub extensions: Vec<ExtensionVar>,
}

/// Satisfiability-preserving CNF for a k-DNF set.
///
/// Every term of size >= 2 gets a fresh variable `a` (ids after the
/// original universe, in term order) with clauses `-a | l` for each of its
/// literals. Each formula becomes one clause over unit-term literals and
/// extension variables, followed by its extension clauses. Formulas with an
/// empty term are constant true and contribute nothing; formulas whose
/// clause would contain `l` and `-l` are dropped as tautologies.
pub fn clausify(d: &DnfSet) -> Clausification {
    let original_vars = d.nvars();
    let mut next = original_vars as u32;
    let mut cnf = CnfFormula::new(original_vars, Vec::new());
    let mut extensions = Vec::new();

    for (fi, f) in d.formulas().iter().enumerate() {
        if f.has_empty_term() {
            continue;
        }
        let mut clause: Vec<Literal> = Vec::with_capacity(f.terms().len());
        let mut implications = Vec::new();
        for (ti, t) in f.terms().iter().enumerate() {
            match t.literals() {
                [lit] => clause.push(*lit),
                lits => {
                    next += 1;
                    let var = VariableId::new(next);
                    extensions.push(ExtensionVar { var, formula: fi, term: ti });
                    clause.push(Literal::pos(var));
                    for &l in lits {
                        implications.push(CnfClause { literals: vec![Literal::neg(var), l] });
                    }
                }
            }
        }
        let mut deduped: Vec<Literal> = Vec::with_capacity(clause.len());
        let mut tautology = false;
        for lit in clause {
            if deduped.contains(&lit) {
                continue;
            }
            if deduped.contains(&lit.negate()) {
                tautology = true;
                break;
            }
            deduped.push(lit);
        }
        if !tautology {
            cnf.push(CnfClause { literals: deduped });
        }
        cnf.extend(implications);
    }
    cnf.nvars = cnf.nvars.max(next as usize);

    Clausification { cnf, original_vars, extensions }
}

impl Clausification {
    /// Extends an assignment of the original variables by giving each
    /// extension variable the value of its term.
    pub fn extend_assignment(&self, d: &DnfSet, a: &Assignment) -> Result<Assignment, FormulaError> {
        let mut values = a.values().to_vec();
        values.resize(self.cnf.nvars(), false);
        let mut full = Assignment::from_values(values);
        for ext in &self.extensions {
            let term = &d.formulas()[ext.formula].terms()[ext.term];
            full.set(ext.var, term.eval(a)?);
        }
        Ok(full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{DnfFormula, Term, VarName};

    fn lit(i: i64) -> Literal {
        Literal::from_signed(i)
    }

    fn set(k: usize, n: u32, formulas: Vec<Vec<Vec<i64>>>) -> DnfSet {
        let names = (1..=n).map(|i| VarName::new("x", &[i])).collect();
        let formulas = formulas
            .into_iter()
            .map(|f| DnfFormula::new(f.into_iter().map(|t| Term::new(t.into_iter().map(lit)).unwrap()).collect()))
            .collect();
        DnfSet::new(k, names, formulas).unwrap()
    }

    fn signed(c: &CnfClause) -> Vec<i64> {
        c.literals().iter().map(|l| l.to_signed()).collect()
    }

    #[test]
    fn one_extension_variable() {
        let d = set(2, 3, vec![vec![vec![1, 2], vec![3]]]);
        let c = clausify(&d);
        let clauses: Vec<_> = c.cnf.clauses().iter().map(signed).collect();
        assert_eq!(clauses, vec![vec![4, 3], vec![-4, 1], vec![-4, 2]]);
        assert_eq!(c.extensions.len(), 1);
        assert_eq!(c.cnf.nvars(), 4);
    }

    #[test]
    fn cnf_input_is_identity() {
        let d = set(1, 2, vec![vec![vec![1]], vec![vec![2]], vec![vec![-1], vec![-2]]]);
        let c = clausify(&d);
        let clauses: Vec<_> = c.cnf.clauses().iter().map(signed).collect();
        assert_eq!(clauses, vec![vec![1], vec![2], vec![-1, -2]]);
        assert!(c.extensions.is_empty());
    }

    #[test]
    fn empty_term_drops_formula() {
        let d = set(1, 1, vec![vec![vec![], vec![1]]]);
        assert!(clausify(&d).cnf.clauses().is_empty());
    }

    #[test]
    fn empty_formula_gives_empty_clause() {
        let d = set(1, 1, vec![vec![]]);
        let c = clausify(&d);
        assert_eq!(c.cnf.clauses().len(), 1);
        assert!(c.cnf.clauses()[0].is_empty());
    }

    #[test]
    fn tautological_clause_is_dropped() {
        let d = set(1, 1, vec![vec![vec![1], vec![-1], vec![1]]]);
        assert!(clausify(&d).cnf.clauses().is_empty());
    }

    #[test]
    fn clause_rejects_repeated_variable() {
        assert!(CnfClause::new(vec![lit(1), lit(-1)]).is_err());
    }
}
