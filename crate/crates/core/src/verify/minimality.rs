use super::{subject, x_groups, x_weights, CheckKind, Checker, Decision, LocusEntry, LocusStatus, Tally, Verdict};
use super::{VerificationReport, VerifyOptions};
use crate::constructions::FamilyDescriptor;
use crate::error::VerifyError;
use crate::formula::DnfSet;
use crate::sat::Query;

/// Holds iff `d` is unsatisfiable; a model is attached otherwise.
pub fn check_unsat(
    d: &DnfSet,
    descriptor: Option<&FamilyDescriptor>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let mut report = VerificationReport::new(CheckKind::Unsat, subject(d, descriptor));
    unsat_part(&checker, d, descriptor, &mut report, &mut tally)?;
    checker.finish(&mut report, &tally);
    Ok(report)
}

/// Sets the verdict from the unsatisfiability of `d` alone.
fn unsat_part(
    checker: &Checker<'_>,
    d: &DnfSet,
    descriptor: Option<&FamilyDescriptor>,
    report: &mut VerificationReport,
    tally: &mut Tally,
) -> Result<(), VerifyError> {
    report.counts.checked += 1;
    match checker.decide(&Query::new(d), || "the input set".into(), tally)? {
        Decision::Unsat { brute_confirmed } => {
            report.counts.unsatisfiable += 1;
            report.verdict = Verdict::Holds;
            if brute_confirmed {
                report.notes.push("unsatisfiability confirmed by both routes".into());
            }
        }
        Decision::Sat(model) => {
            if !d.eval(&model)? {
                return Err(VerifyError::InvalidWitness("the input set".into()));
            }
            report.counts.satisfiable += 1;
            report.verdict = Verdict::Fails;
            if let Some(w) = x_weights(&x_groups(d, descriptor), &model) {
                report.notes.push(format!("counterexample x-weights per gadget copy: {w:?}"));
            }
            report.counterexample = Some(d.named(&model));
        }
        Decision::Timeout => {
            report.counts.timeouts += 1;
            report.verdict = Verdict::Timeout;
        }
    }
    Ok(())
}

/// Holds iff `d` is unsatisfiable and every single-literal weakening is
/// satisfiable. Loci whose weakening stays unsatisfiable are listed as
/// counterexamples.
pub fn check_min_unsat(
    d: &DnfSet,
    descriptor: Option<&FamilyDescriptor>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let mut report = VerificationReport::new(CheckKind::MinUnsat, subject(d, descriptor));
    unsat_part(&checker, d, descriptor, &mut report, &mut tally)?;
    match report.verdict {
        Verdict::Fails => {
            report.notes.push("the set is satisfiable, so no locus was examined".into());
            checker.finish(&mut report, &tally);
            return Ok(report);
        }
        Verdict::Timeout => {
            report.notes.push("unsatisfiability undecided within budget".into());
        }
        _ => {}
    }
    let unsat_verdict = report.verdict;

    let groups = x_groups(d, descriptor);
    let loci = d.weakening_loci();
    let results = checker.par_map(&loci, |&locus| -> Result<(LocusEntry, Tally), VerifyError> {
        let mut t = Tally::default();
        let weakened = d.weaken(locus)?;
        let decision = checker.decide(&Query::new(&weakened), || format!("weakening at locus {locus}"), &mut t)?;
        let entry = match decision {
            Decision::Sat(model) => {
                if !weakened.eval(&model)? {
                    return Err(VerifyError::InvalidWitness(format!("locus {locus}")));
                }
                LocusEntry {
                    locus,
                    status: LocusStatus::Satisfiable,
                    witness: Some(weakened.named(&model)),
                    x_weights: x_weights(&groups, &model),
                    confirmed_by_brute_force: None,
                }
            }
            Decision::Unsat { brute_confirmed } => LocusEntry {
                locus,
                status: LocusStatus::StillUnsatisfiable,
                witness: None,
                x_weights: None,
                confirmed_by_brute_force: Some(brute_confirmed),
            },
            Decision::Timeout => LocusEntry {
                locus,
                status: LocusStatus::Timeout,
                witness: None,
                x_weights: None,
                confirmed_by_brute_force: None,
            },
        };
        Ok((entry, t))
    });

    let mut parts = vec![unsat_verdict];
    for r in results {
        let (entry, t) = r?;
        tally.merge(&t);
        report.counts.checked += 1;
        match entry.status {
            LocusStatus::Satisfiable => {
                report.counts.satisfiable += 1;
                parts.push(Verdict::Holds);
            }
            LocusStatus::StillUnsatisfiable => {
                report.counts.unsatisfiable += 1;
                parts.push(Verdict::Fails);
            }
            LocusStatus::Timeout => {
                report.counts.timeouts += 1;
                parts.push(Verdict::Timeout);
            }
        }
        report.loci.push(entry);
    }
    report.verdict = Verdict::combine(parts);
    let bad = report.counterexample_loci().len();
    if bad > 0 {
        report.notes.push(format!("{bad} of {} weakenings remain unsatisfiable", loci.len()));
    }
    checker.finish(&mut report, &tally);
    Ok(report)
}
