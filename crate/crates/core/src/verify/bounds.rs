//! Counting identities and bound inequalities, in exact arithmetic.
//!
//! Record fields evaluate the bound expressions at `m = nformulas`. Family
//! assertions additionally use the generator parameter `m` where the
//! family's own inequalities are stated in it.

use num_bigint::BigInt;

use super::{
    subject, xor_subject, BoundAssertion, BoundsRecord, BoundsSection, CheckKind, Verdict, VerificationReport,
};
use crate::bounds::{
    counts, lower_bound_expr, tarsi_bound, upper_bound, xor_bound, xor_bound_floor, y_universe, Exact,
};
use crate::constructions::FamilyDescriptor;
use crate::formula::DnfSet;
use crate::sat::CdXorFormula;

pub fn bounds_record(d: &DnfSet, descriptor: Option<&FamilyDescriptor>, g: Option<&CdXorFormula>) -> BoundsRecord {
    let (k, m) = (d.k(), d.len());
    let family_m = match descriptor {
        Some(
            FamilyDescriptor::WeightGadget { m, .. }
            | FamilyDescriptor::MinUnsat { m, .. }
            | FamilyDescriptor::XorPair { m, .. },
        ) => Some(*m),
        _ => None,
    };
    BoundsRecord {
        k,
        nformulas: m,
        nvars: d.occurring_vars().len(),
        family_m,
        g_nvars: g.map(|g| g.occurring_vars().len()),
        tarsi_bound: tarsi_bound(m),
        upper_bound: upper_bound(k, m),
        lower_bound_expr: lower_bound_expr(k.max(1), m),
        xor_bound: xor_bound(k.max(1), m),
    }
}

fn cmp(name: &str, lhs: Exact, relation: &str, rhs: Exact) -> BoundAssertion {
    let holds = match relation {
        "=" => lhs == rhs,
        "<" => lhs < rhs,
        "<=" => lhs <= rhs,
        ">" => lhs > rhs,
        ">=" => lhs >= rhs,
        _ => unreachable!("relation {relation}"),
    };
    BoundAssertion { name: name.into(), lhs, relation: relation.into(), rhs, holds }
}

fn n(v: usize) -> Exact {
    Exact::int(v)
}

fn big(v: BigInt) -> Exact {
    Exact::int(v)
}

/// Computes the record and checks the identities and inequalities that
/// apply to `descriptor` (only the upper bound without one).
pub fn check_bounds(d: &DnfSet, descriptor: Option<&FamilyDescriptor>, g: Option<&CdXorFormula>) -> VerificationReport {
    let record = bounds_record(d, descriptor, g);
    let (k, nf, nv) = (record.k, record.nformulas, record.nvars);
    let mut a = vec![cmp("upper bound on variables", n(nv), "<=", record.upper_bound.clone())];
    let mut notes = vec!["the upper bound is guaranteed only for minimally unsatisfiable sets".to_owned()];
    match descriptor.copied() {
        Some(FamilyDescriptor::Tarsi { .. }) => {
            a.push(cmp("tarsi equality", n(nv), "=", record.tarsi_bound.clone()));
        }
        Some(FamilyDescriptor::NaivePair { n: size }) => {
            a.push(cmp("formula count", n(nf), "=", n(2)));
            a.push(cmp("variable count", n(nv), "=", n(size + 1)));
        }
        Some(FamilyDescriptor::Substitution { n: size, k: kk }) => {
            a.push(cmp("formula count", n(nf), "=", n(size + 1)));
            a.push(cmp("variable count", n(nv), "=", n(kk * kk * size)));
        }
        Some(FamilyDescriptor::WeightGadget { m, k: kk, .. }) => {
            a.push(cmp("formula count", n(nf), "=", big(counts::gadget_formulas(m))));
            a.push(cmp("variable count", n(nv), "=", big(counts::gadget_vars(m, kk))));
        }
        Some(FamilyDescriptor::MinUnsat { m, k: kk, nu_range, .. }) if nu_range == m * (kk - 1) => {
            a.push(cmp("formula count", n(nf), "=", big(counts::min_unsat_formulas(m, kk))));
            a.push(cmp("variable count", n(nv), "=", big(counts::min_unsat_vars(m, kk))));
            a.push(cmp("formulas below 4mk", n(nf), "<", n(4 * m * kk)));
            a.push(cmp("variables above (m(k-1))^k", n(nv), ">", big(y_universe(m, kk))));
            a.push(cmp("variables above lower-bound expression", n(nv), ">", record.lower_bound_expr.clone()));
        }
        Some(FamilyDescriptor::MinUnsat { .. }) => {
            notes.push("restricted nu range: closed-form counts do not apply".into());
        }
        Some(FamilyDescriptor::XorPair { m, k: kk, .. }) => {
            a.push(cmp("formula count", n(nf), "=", big(counts::xor_pair_formulas(m, kk))));
            match record.g_nvars {
                Some(gv) => {
                    a.push(cmp("G variable count", n(gv), "=", big(counts::xor_pair_g_vars(m, kk))));
                    a.push(cmp("G variables against xor bound at |D|", n(gv), ">=", record.xor_bound.clone()));
                    a.push(cmp("G variables against xor bound at m", n(gv), ">=", xor_bound(kk, m)));
                    a.push(cmp("xor bound chain at |D|", record.xor_bound.clone(), ">=", xor_bound_floor(k, nf)));
                }
                None => notes.push("no G supplied: G assertions skipped".into()),
            }
        }
        None => {}
    }
    let mut s = subject(d, descriptor);
    s.g = g.map(xor_subject);
    let mut report = VerificationReport::new(CheckKind::Bounds, s);
    report.verdict = Verdict::combine(a.iter().map(|x| if x.holds { Verdict::Holds } else { Verdict::Fails }));
    report.counts.checked = a.len();
    report.bounds = Some(BoundsSection { record, assertions: a });
    report.notes = notes;
    report
}
