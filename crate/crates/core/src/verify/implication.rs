use super::{
    subject, xor_subject, AtomEntry, AtomStatus, CheckKind, Checker, ClauseEntry, ClauseOutcome, Decision, Tally,
};
use super::{Verdict, VerificationReport, VerifyOptions};
use crate::constructions::FamilyDescriptor;
use crate::error::VerifyError;
use crate::formula::DnfSet;
use crate::sat::{negated_clause_query, shared_universe, CdXorFormula, XorAtom};

fn implication_report(
    kind: CheckKind,
    d: &DnfSet,
    g: &CdXorFormula,
    descriptor: Option<&FamilyDescriptor>,
) -> VerificationReport {
    let mut s = subject(d, descriptor);
    s.g = Some(xor_subject(g));
    VerificationReport::new(kind, s)
}

/// One `d ∧ ¬clause` query per clause of `g`; `Sat` carries a model of `d`
/// falsifying `clause`.
fn refute(
    checker: &Checker<'_>,
    universe: &DnfSet,
    g: &CdXorFormula,
    clause: &[XorAtom],
    context: &str,
    tally: &mut Tally,
) -> Result<Decision, VerifyError> {
    let q = negated_clause_query(universe, g, clause, checker.opts.solver.xor_cap)?;
    let dec = checker.decide(&q, || context.to_owned(), tally)?;
    if let Decision::Sat(model) = &dec {
        let falsified = clause.iter().all(|&a| matches!(g.eval_atom(a, model), Ok(false)));
        if !universe.eval(model)? || !falsified {
            return Err(VerifyError::InvalidWitness(context.to_owned()));
        }
    }
    Ok(dec)
}

fn implication_part(
    checker: &Checker<'_>,
    universe: &DnfSet,
    g: &CdXorFormula,
    report: &mut VerificationReport,
    tally: &mut Tally,
) -> Result<Verdict, VerifyError> {
    let indices: Vec<usize> = (0..g.clauses().len()).collect();
    let results = checker.par_map(&indices, |&ci| -> Result<(ClauseEntry, Tally), VerifyError> {
        let mut t = Tally::default();
        let dec = refute(checker, universe, g, &g.clauses()[ci], &format!("clause {ci} of G"), &mut t)?;
        let entry = match dec {
            Decision::Sat(model) => {
                ClauseEntry { clause: ci, status: ClauseOutcome::Violated, witness: Some(universe.named(&model)) }
            }
            Decision::Unsat { .. } => ClauseEntry { clause: ci, status: ClauseOutcome::Implied, witness: None },
            Decision::Timeout => ClauseEntry { clause: ci, status: ClauseOutcome::Timeout, witness: None },
        };
        Ok((entry, t))
    });
    let mut parts = Vec::new();
    for r in results {
        let (entry, t) = r?;
        tally.merge(&t);
        report.counts.checked += 1;
        parts.push(match entry.status {
            ClauseOutcome::Implied => {
                report.counts.unsatisfiable += 1;
                Verdict::Holds
            }
            ClauseOutcome::Violated => {
                report.counts.satisfiable += 1;
                if report.counterexample.is_none() {
                    report.counterexample = entry.witness.clone();
                }
                Verdict::Fails
            }
            ClauseOutcome::Timeout => {
                report.counts.timeouts += 1;
                Verdict::Timeout
            }
        });
        report.clauses.push(entry);
    }
    Ok(Verdict::combine(parts))
}

/// Holds iff every model of `d` satisfies `g`.
pub fn check_implication(
    d: &DnfSet,
    g: &CdXorFormula,
    descriptor: Option<&FamilyDescriptor>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let mut report = implication_report(CheckKind::Implication, d, g, descriptor);
    let universe = shared_universe(d, g)?;
    report.verdict = implication_part(&checker, &universe, g, &mut report, &mut tally)?;
    checker.finish(&mut report, &tally);
    Ok(report)
}

/// Holds iff `d` implies `g` and deleting any single atom occurrence from
/// `g` breaks the implication. A clause losing its last atom is constant
/// false.
pub fn check_precise_implication(
    d: &DnfSet,
    g: &CdXorFormula,
    descriptor: Option<&FamilyDescriptor>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let mut report = implication_report(CheckKind::PreciseImplication, d, g, descriptor);
    let universe = shared_universe(d, g)?;
    let implied = implication_part(&checker, &universe, g, &mut report, &mut tally)?;
    if implied == Verdict::Fails {
        report.verdict = Verdict::Fails;
        report.notes.push("the implication itself does not hold".into());
        checker.finish(&mut report, &tally);
        return Ok(report);
    }

    let occurrences: Vec<(usize, usize)> =
        g.clauses().iter().enumerate().flat_map(|(ci, c)| (0..c.len()).map(move |ai| (ci, ai))).collect();
    let results = checker.par_map(&occurrences, |&(ci, ai)| -> Result<(AtomEntry, Tally), VerifyError> {
        let mut t = Tally::default();
        let mut strengthened = g.clauses()[ci].clone();
        strengthened.remove(ai);
        let context = format!("clause {ci} of G without atom {ai}");
        let dec = refute(&checker, &universe, g, &strengthened, &context, &mut t)?;
        let (status, witness) = match dec {
            Decision::Sat(model) => (AtomStatus::Breaks, Some(universe.named(&model))),
            Decision::Unsat { .. } => (AtomStatus::StillImplied, None),
            Decision::Timeout => (AtomStatus::Timeout, None),
        };
        Ok((AtomEntry { clause: ci, atom: ai, status, witness }, t))
    });
    let mut parts = vec![implied];
    for r in results {
        let (entry, t) = r?;
        tally.merge(&t);
        report.counts.checked += 1;
        parts.push(match entry.status {
            AtomStatus::Breaks => {
                report.counts.satisfiable += 1;
                Verdict::Holds
            }
            AtomStatus::StillImplied => {
                report.counts.unsatisfiable += 1;
                Verdict::Fails
            }
            AtomStatus::Timeout => {
                report.counts.timeouts += 1;
                Verdict::Timeout
            }
        });
        report.atoms.push(entry);
    }
    report.verdict = Verdict::combine(parts);
    checker.finish(&mut report, &tally);
    Ok(report)
}
