//! The three weight-gadget claims, phrased as satisfiability queries.
//!
//! (a) each x-assignment of weight at most 1, fixed by unit clauses, is
//! satisfiable together with the gadget; (b) the gadget plus `x_a ∧ x_b` is
//! unsatisfiable for every pair `a < b`; (c) every single-literal weakening
//! of the gadget is satisfiable together with `x_a ∧ x_b` for some pair.

use super::{subject, CheckKind, Checker, ClaimEntry, Decision, LocusEntry, LocusStatus, Tally, Verdict};
use super::{VerificationReport, VerifyOptions};
use crate::constructions::{weight_gadget_with, FamilyDescriptor, V1Range};
use crate::error::VerifyError;
use crate::formula::{Assignment, DnfSet, Literal, VariableId};
use crate::sat::{CnfClause, Query};

fn fixed(xs: &[VariableId], ones: &[usize]) -> Vec<CnfClause> {
    xs.iter().enumerate().map(|(i, &v)| CnfClause::unit(Literal::new(v, ones.contains(&i)))).collect()
}

fn both_true(xs: &[VariableId], a: usize, b: usize) -> Vec<CnfClause> {
    vec![CnfClause::unit(Literal::pos(xs[a])), CnfClause::unit(Literal::pos(xs[b]))]
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn claim(name: &str, statement: &str) -> ClaimEntry {
    ClaimEntry {
        claim: name.into(),
        statement: statement.into(),
        verdict: Verdict::Holds,
        checked: 0,
        counterexample: None,
        failing_loci: Vec::new(),
    }
}

fn checked_model(q: &Query<'_>, model: Assignment, what: &str) -> Result<Assignment, VerifyError> {
    if q.eval(&model)? {
        Ok(model)
    } else {
        Err(VerifyError::InvalidWitness(what.into()))
    }
}

pub fn check_weight_gadget(m: usize, k: usize, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    check_weight_gadget_variant(m, k, V1Range::default(), opts)
}

pub fn check_weight_gadget_variant(
    m: usize,
    k: usize,
    v1: V1Range,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let d = weight_gadget_with(m, k, v1)?;
    let descriptor = FamilyDescriptor::WeightGadget { m, k, v1 };
    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let mut report = VerificationReport::new(CheckKind::WeightGadget, subject(&d, Some(&descriptor)));
    let xs: Vec<VariableId> = (0..d.nvars()).map(VariableId::from_index).filter(|&v| d.name(v).tag() == "x").collect();
    let n = xs.len();

    // (a)
    let mut a = claim("a", "every x-assignment of weight at most 1 extends to a model");
    let lows: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
    let results = checker.par_map(&lows, |&one| -> Result<(Decision, Tally), VerifyError> {
        let mut t = Tally::default();
        let ones: Vec<usize> = one.into_iter().collect();
        let q = Query::with_extra(&d, fixed(&xs, &ones));
        let dec = checker.decide(&q, || format!("claim (a) with ones at {ones:?}"), &mut t)?;
        if let Decision::Sat(model) = dec {
            return Ok((Decision::Sat(checked_model(&q, model, "claim (a)")?), t));
        }
        Ok((dec, t))
    });
    let mut parts = Vec::new();
    for (one, r) in lows.iter().zip(results) {
        let (dec, t) = r?;
        tally.merge(&t);
        a.checked += 1;
        parts.push(match dec {
            Decision::Sat(_) => Verdict::Holds,
            Decision::Unsat { .. } => {
                if a.counterexample.is_none() {
                    let mut x = Assignment::all_false(d.nvars());
                    if let Some(i) = one {
                        x.set(xs[*i], true);
                    }
                    a.counterexample =
                        Some(xs.iter().map(|&v| (d.name(v).to_string(), x.value(v) == Some(true))).collect());
                }
                Verdict::Fails
            }
            Decision::Timeout => Verdict::Timeout,
        });
    }
    a.verdict = Verdict::combine(parts);

    // (b)
    let mut b = claim("b", "every model has x-weight at most 1");
    let all_pairs = pairs(n);
    let results = checker.par_map(&all_pairs, |&(i, j)| -> Result<(Decision, Tally), VerifyError> {
        let mut t = Tally::default();
        let q = Query::with_extra(&d, both_true(&xs, i, j));
        let dec = checker.decide(&q, || format!("claim (b) with x pair ({i},{j})"), &mut t)?;
        if let Decision::Sat(model) = dec {
            return Ok((Decision::Sat(checked_model(&q, model, "claim (b)")?), t));
        }
        Ok((dec, t))
    });
    let mut parts = Vec::new();
    for r in results {
        let (dec, t) = r?;
        tally.merge(&t);
        b.checked += 1;
        parts.push(match dec {
            Decision::Sat(model) => {
                if b.counterexample.is_none() {
                    b.counterexample = Some(d.named(&model));
                }
                Verdict::Fails
            }
            Decision::Unsat { .. } => Verdict::Holds,
            Decision::Timeout => Verdict::Timeout,
        });
    }
    b.verdict = Verdict::combine(parts);

    // (c)
    let mut c = claim("c", "every single-literal weakening admits a model of x-weight at least 2");
    let loci = d.weakening_loci();
    let results = checker.par_map(&loci, |&locus| -> Result<(LocusEntry, Tally), VerifyError> {
        let mut t = Tally::default();
        let weakened: DnfSet = d.weaken(locus)?;
        let mut timed_out = false;
        let mut all_confirmed = true;
        for &(i, j) in &all_pairs {
            let q = Query::with_extra(&weakened, both_true(&xs, i, j));
            match checker.decide(&q, || format!("claim (c) at locus {locus} with x pair ({i},{j})"), &mut t)? {
                Decision::Sat(model) => {
                    let model = checked_model(&q, model, &format!("claim (c) at locus {locus}"))?;
                    let entry = LocusEntry {
                        locus,
                        status: LocusStatus::Satisfiable,
                        witness: Some(weakened.named(&model)),
                        x_weights: Some(vec![model.weight(xs.iter().copied())]),
                        confirmed_by_brute_force: None,
                    };
                    return Ok((entry, t));
                }
                Decision::Unsat { brute_confirmed } => all_confirmed &= brute_confirmed,
                Decision::Timeout => timed_out = true,
            }
        }
        let entry = LocusEntry {
            locus,
            status: if timed_out { LocusStatus::Timeout } else { LocusStatus::StillUnsatisfiable },
            witness: None,
            x_weights: None,
            confirmed_by_brute_force: (!timed_out).then_some(all_confirmed),
        };
        Ok((entry, t))
    });
    let mut parts = Vec::new();
    for r in results {
        let (entry, t) = r?;
        tally.merge(&t);
        c.checked += 1;
        parts.push(match entry.status {
            LocusStatus::Satisfiable => Verdict::Holds,
            LocusStatus::StillUnsatisfiable => {
                c.failing_loci.push(entry.locus);
                Verdict::Fails
            }
            LocusStatus::Timeout => Verdict::Timeout,
        });
        report.loci.push(entry);
    }
    c.verdict = Verdict::combine(parts);
    report.notes.push(
        "locus entries belong to claim (c): satisfiable means the weakened gadget has a model of x-weight at least 2"
            .into(),
    );

    for cl in [&a, &b, &c] {
        report.counts.checked += cl.checked;
    }
    report.counts.satisfiable = report.loci.iter().filter(|e| e.status == LocusStatus::Satisfiable).count();
    report.counts.unsatisfiable = c.failing_loci.len();
    report.counts.timeouts = report.loci.iter().filter(|e| e.status == LocusStatus::Timeout).count();
    report.verdict = Verdict::combine([a.verdict, b.verdict, c.verdict]);
    report.claims = vec![a, b, c];
    checker.finish(&mut report, &tally);
    Ok(report)
}
