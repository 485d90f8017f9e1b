use std::borrow::Cow;

use super::{encode_xor_atom, sat_query, CdXorFormula, Query, SolverConfig, XorAtom};
use crate::error::{FormulaError, SolveError};
use crate::formula::{Assignment, DnfSet, VariableId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    /// `d ∧ ¬C` is unsatisfiable.
    Implied,
    /// Some model of `d` falsifies `C`.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseCertificate {
    pub clause: usize,
    pub status: ClauseStatus,
    pub witness: Option<Assignment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub universe: DnfSet,
    pub certificates: Vec<ClauseCertificate>,
}

impl Implication {
    pub fn holds(&self) -> bool {
        self.certificates.iter().all(|c| c.status == ClauseStatus::Implied)
    }

    /// First violated clause and the model of `d` falsifying it.
    pub fn violation(&self) -> Option<(usize, &Assignment)> {
        self.certificates
            .iter()
            .find(|c| c.status == ClauseStatus::Violated)
            .and_then(|c| c.witness.as_ref().map(|w| (c.clause, w)))
    }
}

/// `d` over the union of its universe and `g`'s. Shared ids must carry the
/// same names.
pub fn shared_universe<'a>(d: &'a DnfSet, g: &CdXorFormula) -> Result<Cow<'a, DnfSet>, FormulaError> {
    for (i, (a, b)) in d.names().iter().zip(g.names()).enumerate() {
        if a != b {
            return Err(FormulaError::UniverseMismatch {
                id: VariableId::from_index(i),
                left: a.to_string(),
                right: b.to_string(),
            });
        }
    }
    if g.nvars() > d.nvars() {
        Ok(Cow::Owned(d.with_extra_names(g.names()[d.nvars()..].iter().cloned())?))
    } else {
        Ok(Cow::Borrowed(d))
    }
}

/// `universe ∧ ¬(a_1 ∨ … ∨ a_r)`, each negated atom as parity clauses.
/// An empty atom list leaves `universe` unconstrained.
pub fn negated_clause_query<'a>(
    universe: &'a DnfSet,
    g: &CdXorFormula,
    atoms: &[XorAtom],
    xor_cap: usize,
) -> Result<Query<'a>, SolveError> {
    let mut extra = Vec::new();
    for &atom in atoms {
        extra.extend(encode_xor_atom(g.block(atom), atom.positive, false, xor_cap)?);
    }
    Ok(Query::with_extra(universe, extra))
}

/// Decides whether every model of `d` satisfies `g`, one clause at a time.
pub fn implies(d: &DnfSet, g: &CdXorFormula, config: &SolverConfig) -> Result<Implication, SolveError> {
    let universe = shared_universe(d, g)?.into_owned();
    let mut certificates = Vec::with_capacity(g.clauses().len());
    for (ci, clause) in g.clauses().iter().enumerate() {
        let q = negated_clause_query(&universe, g, clause, config.xor_cap)?;
        let r = sat_query(&q, config)?;
        certificates.push(ClauseCertificate {
            clause: ci,
            status: if r.is_sat() { ClauseStatus::Violated } else { ClauseStatus::Implied },
            witness: r.model,
        });
    }
    Ok(Implication { universe, certificates })
}
