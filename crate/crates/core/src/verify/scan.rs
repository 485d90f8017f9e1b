//! Exhaustive check of the CNF variable bound on tiny clause sets.
//!
//! Clauses over `max_vars` variables are coded in base 3 (absent, positive,
//! negative per variable) and evaluated as bitmasks over all `2^max_vars`
//! assignments, so a set is unsatisfiable iff the AND of its masks is zero.
//! Every minimally unsatisfiable set found is re-decided through the
//! library's two routes.

use std::collections::BTreeMap;

use super::{CheckKind, Checker, Decision, ScanSummary, ShapeCount, Subject, Tally, Verdict};
use super::{VerificationReport, VerifyOptions};
use crate::error::VerifyError;
use crate::formula::{DnfFormula, DnfSet, Literal, Term, VarName, VariableId, WeakeningLocus};
use crate::sat::Query;

/// Refusal threshold on the number of clause sets enumerated.
pub const SCAN_LIMIT: u64 = 2_000_000;

struct Clause {
    literals: Vec<Literal>,
    sat_mask: u64,
    var_mask: u64,
}

fn all_clauses(nvars: usize) -> Vec<Clause> {
    let total = 3usize.pow(nvars as u32);
    let mut out = Vec::with_capacity(total - 1);
    for code in 1..total {
        let mut literals = Vec::new();
        let mut c = code;
        for v in 0..nvars {
            match c % 3 {
                1 => literals.push(Literal::pos(VariableId::from_index(v))),
                2 => literals.push(Literal::neg(VariableId::from_index(v))),
                _ => {}
            }
            c /= 3;
        }
        let mut sat_mask = 0u64;
        for a in 0..(1u64 << nvars) {
            if literals.iter().any(|l| ((a >> l.var().index()) & 1 == 1) == l.is_positive()) {
                sat_mask |= 1 << a;
            }
        }
        let var_mask = literals.iter().fold(0, |m, l| m | 1 << l.var().index());
        out.push(Clause { literals, sat_mask, var_mask });
    }
    out
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Advances `idx` to the next `r`-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn render(set: &[&Clause]) -> String {
    let parts: Vec<String> = set
        .iter()
        .map(|c| {
            let lits: Vec<String> = c.literals.iter().map(|l| l.to_signed().to_string()).collect();
            format!("[{}]", lits.join(" "))
        })
        .collect();
    parts.join(" ")
}

fn as_dnf_set(nvars: usize, set: &[&Clause]) -> DnfSet {
    let names = (1..=nvars as u32).map(|i| VarName::new("x", &[i])).collect();
    let formulas = set
        .iter()
        .map(|c| DnfFormula::new(c.literals.iter().map(|&l| Term::new([l]).expect("unit term")).collect()))
        .collect();
    DnfSet::new(1, names, formulas).expect("scan sets are well formed")
}

/// Enumerates every set of at most `max_clauses` distinct nonempty clauses
/// over `max_vars` variables and checks `vars <= clauses - 1` on each
/// minimally unsatisfiable one.
pub fn tarsi_scan(
    max_clauses: usize,
    max_vars: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if max_vars == 0 || max_clauses == 0 {
        return Err(VerifyError::ScanTooLarge("both bounds must be positive".into()));
    }
    if max_vars > 6 {
        return Err(VerifyError::ScanTooLarge(format!("{max_vars} variables exceeds the limit of 6")));
    }
    let nclauses = 3u64.pow(max_vars as u32) - 1;
    let total: u64 = (1..=max_clauses as u64)
        .take_while(|&r| r <= nclauses)
        .fold(0u64, |acc, r| acc.saturating_add(binomial(nclauses, r)));
    if total > SCAN_LIMIT {
        return Err(VerifyError::ScanTooLarge(format!("{total} clause sets exceed the limit of {SCAN_LIMIT}")));
    }

    let checker = Checker::new(opts);
    let mut tally = Tally::default();
    let clauses = all_clauses(max_vars);
    let full = if max_vars == 6 { u64::MAX } else { (1u64 << (1 << max_vars)) - 1 };
    let mut shapes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut violating_sets = Vec::new();
    let mut examined = 0u64;

    for r in 1..=max_clauses.min(clauses.len()) {
        let mut idx: Vec<usize> = (0..r).collect();
        let mut prefix = vec![0u64; r + 1];
        let mut suffix = vec![0u64; r + 1];
        loop {
            examined += 1;
            prefix[0] = full;
            for i in 0..r {
                prefix[i + 1] = prefix[i] & clauses[idx[i]].sat_mask;
            }
            if prefix[r] == 0 {
                suffix[r] = full;
                for i in (0..r).rev() {
                    suffix[i] = suffix[i + 1] & clauses[idx[i]].sat_mask;
                }
                let minimal = (0..r).all(|i| prefix[i] & suffix[i + 1] != 0);
                if minimal {
                    let occurring = idx.iter().fold(0u64, |m, &i| m | clauses[i].var_mask).count_ones() as usize;
                    *shapes.entry((r, occurring)).or_default() += 1;
                    if occurring + 1 > r {
                        let set: Vec<&Clause> = idx.iter().map(|&i| &clauses[i]).collect();
                        violating_sets.push(render(&set));
                    }
                    found.push(idx.clone());
                }
            }
            if !next_combination(&mut idx, clauses.len()) {
                break;
            }
        }
    }

    let mut report = VerificationReport::new(
        CheckKind::TarsiScan,
        Subject { nvars: max_vars, nformulas: max_clauses, k: 1, ..Subject::default() },
    );
    let results = checker.par_map(&found, |idx| -> Result<(bool, Tally), VerifyError> {
        let mut t = Tally::default();
        let set: Vec<&Clause> = idx.iter().map(|&i| &clauses[i]).collect();
        let d = as_dnf_set(max_vars, &set);
        let label = render(&set);
        let mut timed_out = false;
        match checker.decide(&Query::new(&d), || format!("scan set {label}"), &mut t)? {
            Decision::Unsat { .. } => {}
            Decision::Sat(_) => {
                return Err(VerifyError::OracleDisagreement {
                    context: format!("truth table (as brute) vs solvers (as search) on scan set {label}"),
                    brute: "UNSAT",
                    search: "SAT",
                })
            }
            Decision::Timeout => timed_out = true,
        }
        for f in 0..d.len() {
            let weakened = d.weaken(WeakeningLocus::new(f, 0, 0))?;
            match checker.decide(&Query::new(&weakened), || format!("scan set {label} without clause {f}"), &mut t)? {
                Decision::Sat(_) => {}
                Decision::Unsat { .. } => {
                    return Err(VerifyError::OracleDisagreement {
                        context: format!(
                            "truth table (as brute) vs solvers (as search) on scan set {label} without clause {f}"
                        ),
                        brute: "SAT",
                        search: "UNSAT",
                    })
                }
                Decision::Timeout => timed_out = true,
            }
        }
        Ok((timed_out, t))
    });
    for r in results {
        let (timed_out, t) = r?;
        tally.merge(&t);
        report.counts.checked += 1;
        report.counts.unsatisfiable += 1;
        report.counts.timeouts += usize::from(timed_out);
    }

    let violations = violating_sets.len();
    report.verdict = match (violations, report.counts.timeouts) {
        (0, 0) => Verdict::Holds,
        (0, _) => Verdict::Mixed,
        _ => Verdict::Fails,
    };
    report.scan = Some(ScanSummary {
        max_clauses,
        max_vars,
        sets_examined: examined,
        min_unsat_found: found.len(),
        violations,
        shapes: shapes.into_iter().map(|((nclauses, nvars), count)| ShapeCount { nclauses, nvars, count }).collect(),
        violating_sets,
    });
    report.notes.push(
        "each minimally unsatisfiable set was re-decided, with every clause removal, by both solver routes".into(),
    );
    checker.finish(&mut report, &tally);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        assert_eq!(binomial(26, 4), 14950);
    }

    #[test]
    fn single_variable() {
        let r = tarsi_scan(2, 1, &VerifyOptions::default()).unwrap();
        let s = r.scan.unwrap();
        assert_eq!(s.sets_examined, 3);
        assert_eq!(s.min_unsat_found, 1);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn no_three_by_three_sets() {
        let r = tarsi_scan(3, 3, &VerifyOptions::default()).unwrap();
        let s = r.scan.unwrap();
        assert!(s.shapes.iter().all(|c| c.nvars < 3));
        assert_eq!(s.violations, 0);
    }

    #[test]
    fn refuses_large_scans() {
        assert!(matches!(tarsi_scan(6, 4, &VerifyOptions::default()), Err(VerifyError::ScanTooLarge(_))));
        assert!(tarsi_scan(1, 7, &VerifyOptions::default()).is_err());
    }
}
