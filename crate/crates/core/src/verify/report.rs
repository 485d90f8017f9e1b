//! Report schema shared by every check.
//!
//! Witnesses are variable-name to value maps. Everything except `stats` is
//! a deterministic function of the instance and options, so
//! [`VerificationReport::canonical_json`] is stable across runs and worker
//! counts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::Exact;
use crate::formula::WeakeningLocus;

pub type Witness = BTreeMap<String, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Unsat,
    MinUnsat,
    WeightGadget,
    Implication,
    PreciseImplication,
    Bounds,
    TarsiScan,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Unsat => "unsat",
            CheckKind::MinUnsat => "min-unsat",
            CheckKind::WeightGadget => "weight-gadget",
            CheckKind::Implication => "implication",
            CheckKind::PreciseImplication => "precise-implication",
            CheckKind::Bounds => "bounds",
            CheckKind::TarsiScan => "tarsi-scan",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Some sub-checks timed out and none refuted the claim.
    Mixed,
    /// Nothing could be decided within budget.
    Timeout,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Mixed => "mixed",
            Verdict::Timeout => "timeout",
        }
    }

    /// Combines sub-verdicts: any failure wins, then any undecided part.
    pub fn combine(parts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let (mut fails, mut decided, mut undecided) = (false, false, false);
        for p in parts {
            match p {
                Verdict::Fails => fails = true,
                Verdict::Holds => decided = true,
                Verdict::Mixed => {
                    decided = true;
                    undecided = true;
                }
                Verdict::Timeout => undecided = true,
            }
        }
        match (fails, decided, undecided) {
            (true, _, _) => Verdict::Fails,
            (false, _, false) => Verdict::Holds,
            (false, true, true) => Verdict::Mixed,
            (false, false, true) => Verdict::Timeout,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the report is about: `nvars` is the declared universe, `nformulas`
/// the set's length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_hash: Option<String>,
    pub nvars: usize,
    pub nformulas: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<XorSubject>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorSubject {
    pub instance_hash: String,
    pub nvars: usize,
    pub nclauses: usize,
    pub block_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocusStatus {
    Satisfiable,
    StillUnsatisfiable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusEntry {
    pub locus: WeakeningLocus,
    pub status: LocusStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Per gadget copy, for sets built from weight gadgets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_weights: Option<Vec<usize>>,
    /// Set on `still-unsatisfiable` entries: whether the brute-force route
    /// agreed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confirmed_by_brute_force: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseOutcome {
    Implied,
    Violated,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseEntry {
    pub clause: usize,
    pub status: ClauseOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomStatus {
    /// Deleting the atom breaks the implication.
    Breaks,
    StillImplied,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub clause: usize,
    pub atom: usize,
    pub status: AtomStatus,
    /// A model of the set falsifying the strengthened clause.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimEntry {
    pub claim: String,
    pub statement: String,
    pub verdict: Verdict,
    pub checked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failing_loci: Vec<WeakeningLocus>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub k: usize,
    pub nformulas: usize,
    /// Variables occurring in the set.
    pub nvars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_m: Option<usize>,
    /// Size of `vars(G)` for implication pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_nvars: Option<usize>,
    pub tarsi_bound: Exact,
    pub upper_bound: Exact,
    pub lower_bound_expr: Exact,
    pub xor_bound: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundAssertion {
    pub name: String,
    pub lhs: Exact,
    pub relation: String,
    pub rhs: Exact,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsSection {
    pub record: BoundsRecord,
    pub assertions: Vec<BoundAssertion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCount {
    pub nclauses: usize,
    pub nvars: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub max_clauses: usize,
    pub max_vars: usize,
    pub sets_examined: u64,
    pub min_unsat_found: usize,
    pub violations: usize,
    /// Minimally unsatisfiable sets found, by clause and occurring-variable
    /// count.
    pub shapes: Vec<ShapeCount>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violating_sets: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub checked: usize,
    pub satisfiable: usize,
    pub unsatisfiable: usize,
    pub timeouts: usize,
}

/// Timing and solver effort; excluded from the canonical body.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub elapsed_us: u64,
    pub queries: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: CheckKind,
    pub subject: Subject,
    pub verdict: Verdict,
    pub counts: Counts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loci: Vec<LocusEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<ClauseEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub stats: ReportStats,
}

impl VerificationReport {
    pub fn new(check: CheckKind, subject: Subject) -> Self {
        VerificationReport {
            check,
            subject,
            verdict: Verdict::Holds,
            counts: Counts::default(),
            counterexample: None,
            loci: Vec::new(),
            clauses: Vec::new(),
            atoms: Vec::new(),
            claims: Vec::new(),
            bounds: None,
            scan: None,
            notes: Vec::new(),
            stats: ReportStats::default(),
        }
    }

    /// Loci whose weakening stayed unsatisfiable.
    pub fn counterexample_loci(&self) -> Vec<WeakeningLocus> {
        self.loci.iter().filter(|e| e.status == LocusStatus::StillUnsatisfiable).map(|e| e.locus).collect()
    }

    /// Pretty JSON without the `stats` block.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports always serialize");
        if let serde_json::Value::Object(map) = &mut v {
            map.remove("stats");
        }
        serde_json::to_string_pretty(&v).expect("reports always serialize")
    }

    /// One-screen human summary.
    pub fn summary(&self) -> String {
        let mut out = format!("check: {}\n", self.check);
        if let Some(d) = &self.subject.descriptor {
            out.push_str(&format!("instance: {d}\n"));
        }
        out.push_str(&format!(
            "size: {} formulas, {} variables, k = {}\n",
            self.subject.nformulas, self.subject.nvars, self.subject.k
        ));
        out.push_str(&format!("verdict: {}\n", self.verdict));
        let c = self.counts;
        if c.checked > 0 {
            out.push_str(&format!(
                "queries: {} checked, {} satisfiable, {} unsatisfiable, {} timed out\n",
                c.checked, c.satisfiable, c.unsatisfiable, c.timeouts
            ));
        }
        let bad = self.counterexample_loci();
        if !bad.is_empty() {
            let shown: Vec<String> = bad.iter().map(|l| l.to_string()).collect();
            out.push_str(&format!("still-unsatisfiable loci (formula,term,literal): {}\n", shown.join(" ")));
        }
        for claim in &self.claims {
            out.push_str(&format!("claim ({}): {} [{} checked]\n", claim.claim, claim.verdict, claim.checked));
        }
        if !self.atoms.is_empty() {
            let breaks = self.atoms.iter().filter(|a| a.status == AtomStatus::Breaks).count();
            out.push_str(&format!("atom removals breaking the implication: {}/{}\n", breaks, self.atoms.len()));
        }
        if let Some(b) = &self.bounds {
            for a in &b.assertions {
                let mark = if a.holds { "ok" } else { "VIOLATED" };
                out.push_str(&format!("{}: {} {} {} [{mark}]\n", a.name, a.lhs, a.relation, a.rhs));
            }
        }
        if let Some(s) = &self.scan {
            out.push_str(&format!(
                "scanned {} sets, {} minimally unsatisfiable, {} violations\n",
                s.sets_examined, s.min_unsat_found, s.violations
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}
