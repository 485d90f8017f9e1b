//! Machine-checked verdicts, with witnesses, for the claims made about the
//! generated families.
//!
//! Every satisfiability question goes through [`Checker::decide`], which
//! runs the configured route and, whenever the query fits the brute-force
//! cap, the other route as well. A disagreement is an error, never a
//! verdict. Independent queries fan out over a rayon pool of `jobs`
//! workers; results are collected in input order, so reports do not depend
//! on the worker count.

mod bounds;
mod gadget;
mod implication;
mod minimality;
mod report;
mod scan;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use bounds::{bounds_record, check_bounds};
pub use gadget::{check_weight_gadget, check_weight_gadget_variant};
pub use implication::{check_implication, check_precise_implication};
pub use minimality::{check_min_unsat, check_unsat};
pub use report::*;
pub use scan::{tarsi_scan, SCAN_LIMIT};

use crate::constructions::FamilyDescriptor;
use crate::error::VerifyError;
use crate::formula::{Assignment, DnfSet, VariableId};
use crate::io::kdnf::{serialize_cdxor, serialize_kdnf};
use crate::sat::{sat_query, CdXorFormula, Query, SatStatus, SolverConfig, SolverStats, Strategy};

pub const DEFAULT_PER_CHECK: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub solver: SolverConfig,
    /// Budget for one satisfiability query (each route separately).
    pub per_check: Option<Duration>,
    /// Budget for the whole report.
    pub total: Option<Duration>,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { solver: SolverConfig::default(), per_check: Some(DEFAULT_PER_CHECK), total: None, jobs: 1 }
    }
}

impl VerifyOptions {
    pub fn with_jobs(&self, jobs: usize) -> Self {
        VerifyOptions { jobs, ..self.clone() }
    }

    pub fn with_strategy(&self, strategy: Strategy) -> Self {
        VerifyOptions { solver: self.solver.with_strategy(strategy), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Decision {
    Sat(Assignment),
    Unsat { brute_confirmed: bool },
    Timeout,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub stats: SolverStats,
    pub queries: u64,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.stats.merge(&other.stats);
        self.queries += other.queries;
    }
}

/// Per-report state: options, the report deadline, and the clock.
pub(crate) struct Checker<'o> {
    pub opts: &'o VerifyOptions,
    deadline: Option<Instant>,
    start: Instant,
}

impl<'o> Checker<'o> {
    pub fn new(opts: &'o VerifyOptions) -> Self {
        let start = Instant::now();
        Checker { opts, deadline: opts.total.map(|t| start + t), start }
    }

    /// `None` once the report deadline has passed.
    fn budget(&self) -> Option<Option<Duration>> {
        let remaining = match self.deadline {
            None => None,
            Some(d) => {
                let now = Instant::now();
                if now >= d {
                    return None;
                }
                Some(d - now)
            }
        };
        Some(match (self.opts.per_check, remaining) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
    }

    fn run(
        &self,
        q: &Query<'_>,
        strategy: Strategy,
        tally: &mut Tally,
    ) -> Result<Option<(SatStatus, Option<Assignment>)>, VerifyError> {
        let Some(budget) = self.budget() else {
            return Ok(None);
        };
        let cfg = self.opts.solver.with_strategy(strategy).with_budget(budget);
        tally.queries += 1;
        match sat_query(q, &cfg) {
            Ok(r) => {
                tally.stats.merge(&r.stats);
                Ok(Some((r.status, r.model)))
            }
            Err(e) if e.is_timeout() => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Decides `q`, cross-checking the two routes within the brute-force cap.
    /// Models are taken from the configured route.
    pub fn decide(
        &self,
        q: &Query<'_>,
        context: impl FnOnce() -> String,
        tally: &mut Tally,
    ) -> Result<Decision, VerifyError> {
        let primary = self.opts.solver.resolve(q.nvars());
        let Some((status, model)) = self.run(q, primary, tally)? else {
            return Ok(Decision::Timeout);
        };
        let in_cap = q.nvars() <= self.opts.solver.brute_cap && q.nvars() < 64;
        if in_cap {
            let other = match primary {
                Strategy::Brute | Strategy::Auto => Strategy::Search,
                Strategy::Search => Strategy::Brute,
            };
            let Some((other_status, _)) = self.run(q, other, tally)? else {
                return Ok(Decision::Timeout);
            };
            if other_status != status {
                let (brute, search) =
                    if other == Strategy::Brute { (other_status, status) } else { (status, other_status) };
                return Err(VerifyError::OracleDisagreement {
                    context: context(),
                    brute: brute.as_str(),
                    search: search.as_str(),
                });
            }
        }
        Ok(match model {
            Some(m) if status == SatStatus::Sat => Decision::Sat(m),
            _ => Decision::Unsat { brute_confirmed: in_cap },
        })
    }

    /// Maps `f` over `items` on the worker pool, preserving order.
    pub fn par_map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.opts.jobs <= 1 {
            return items.iter().map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.opts.jobs).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(f).collect(),
        }
    }

    pub fn finish(&self, report: &mut VerificationReport, tally: &Tally) {
        report.stats = ReportStats {
            elapsed_us: self.start.elapsed().as_micros() as u64,
            queries: tally.queries,
            decisions: tally.stats.decisions,
            propagations: tally.stats.propagations,
            jobs: self.opts.jobs.max(1),
        };
    }
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// SHA-256 of the set's serialized form.
pub fn instance_hash(d: &DnfSet) -> String {
    sha256_hex(&serialize_kdnf(d, None))
}

pub fn subject(d: &DnfSet, descriptor: Option<&FamilyDescriptor>) -> Subject {
    Subject {
        descriptor: descriptor.map(|f| f.to_string()),
        instance_hash: Some(instance_hash(d)),
        nvars: d.nvars(),
        nformulas: d.len(),
        k: d.k(),
        g: None,
    }
}

pub(crate) fn xor_subject(g: &CdXorFormula) -> XorSubject {
    XorSubject {
        instance_hash: sha256_hex(&serialize_cdxor(g, None)),
        nvars: g.nvars(),
        nclauses: g.clauses().len(),
        block_width: g.block_width(),
    }
}

/// Gadget x-variables grouped by copy: `x_c_i` by `c`, plain `x_i` as one
/// group. Empty unless the family is gadget-based.
pub(crate) fn x_groups(d: &DnfSet, descriptor: Option<&FamilyDescriptor>) -> Vec<Vec<VariableId>> {
    if !descriptor.is_some_and(|f| f.has_gadget()) {
        return Vec::new();
    }
    let mut groups: BTreeMap<u32, Vec<VariableId>> = BTreeMap::new();
    for (i, name) in d.names().iter().enumerate() {
        if name.tag() != "x" {
            continue;
        }
        let key = match name.indices() {
            [c, _] => *c,
            _ => 0,
        };
        groups.entry(key).or_default().push(VariableId::from_index(i));
    }
    groups.into_values().collect()
}

pub(crate) fn x_weights(groups: &[Vec<VariableId>], a: &Assignment) -> Option<Vec<usize>> {
    if groups.is_empty() {
        None
    } else {
        Some(groups.iter().map(|g| a.weight(g.iter().copied())).collect())
    }
}
