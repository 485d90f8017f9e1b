//! `kdnf`: generate formula families, verify claims about them, tabulate
//! bounds.
//!
//! Exit codes: 0 verdict holds (or command succeeded), 1 verdict fails or is
//! mixed, 2 usage or input error, 3 verdict undecided within budget, 4 tool
//! fault (the two solver routes disagreed, or a witness failed validation).

use std::fs;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kdnf::constructions::{xor_implication_pair_with, FamilyDescriptor, V1Range, DEFAULT_TERM_CAP};
use kdnf::io::{
    emit_bounds_table, export_dimacs, parse_cdxor, parse_kdnf, serialize_cdxor, serialize_kdnf, write_solution,
    TableFamily, TableFormat, TableOptions,
};
use kdnf::sat::{sat, CdXorFormula, ExternalSolver, SatStatus, SolverConfig, Strategy, DEFAULT_BRUTE_CAP};
use kdnf::verify::{self, CheckKind, Verdict, VerificationReport, VerifyOptions};
use kdnf::{DnfSet, VerifyError, WeakeningLocus};

#[derive(Parser, Debug)]
#[command(name = "kdnf", version, about = "k-DNF formula families and their mechanical verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a family instance (with its descriptor) in the kdnf format.
    Gen(GenArgs),
    /// Run one check and emit a JSON report plus a human summary.
    Verify(VerifyArgs),
    /// Tabulate the bound expressions over a (k, m) grid.
    Bounds(BoundsArgs),
    /// Apply one single-literal weakening.
    Weaken(WeakenArgs),
    /// Decide satisfiability of a set and print a DIMACS-style answer.
    Solve(SolveArgs),
    /// Export the clausified set as DIMACS CNF.
    Dimacs(DimacsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Tarsi,
    NaivePair,
    Substitution,
    WeightGadget,
    MinUnsat,
    XorPair,
}

#[derive(Args, Debug, Clone, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of `u` selectors in min-unsat (default m(k-1)).
    #[arg(long)]
    nu_range: Option<usize>,
    /// Variables feeding the gadget's first disjunction: `block` (x_1..x_{k-1}) or `displayed` (x_1..x_k).
    #[arg(long, value_parser = parse_v1)]
    #[serde(serialize_with = "ser_v1")]
    v1: Option<V1Range>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SolverArgs {
    /// `internal`, or `external:<command>` for a DIMACS solver.
    #[arg(long, default_value = "internal")]
    solver: String,
    #[arg(long, value_parser = parse_strategy, default_value = "auto")]
    strategy: Strategy,
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    brute_cap: usize,
    /// Seconds per satisfiability query; 0 disables the limit.
    #[arg(long, default_value_t = 10.0)]
    timeout_per_check: f64,
    /// Seconds for the whole report; 0 disables the limit.
    #[arg(long, default_value_t = 0.0)]
    timeout_total: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Output path; for xor-pair, G goes next to it with extension `.cdxor`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the clausified set as DIMACS to this path.
    #[arg(long)]
    dimacs: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Check {
    Unsat,
    MinUnsat,
    WeightGadget,
    Implication,
    PreciseImplication,
    Bounds,
    TarsiScan,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// Instance file; otherwise the instance is generated from the family flags.
    input: Option<PathBuf>,
    /// G for implication checks (default: the input path with extension `.cdxor`).
    #[arg(long)]
    g: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 4)]
    max_clauses: usize,
    #[arg(long, default_value_t = 3)]
    max_vars: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// JSON report path; the summary then goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// A value or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    k: RangeInclusive<usize>,
    #[arg(long, value_parser = parse_range)]
    m: RangeInclusive<usize>,
    #[arg(long, value_parser = parse_table_format, default_value = "csv")]
    format: TableFormat,
    /// Add the xor-bound column.
    #[arg(long, alias = "theorem6")]
    xor_column: bool,
    /// Add generated formula and variable counts for a family.
    #[arg(long, value_parser = parse_table_family)]
    family: Option<TableFamily>,
    /// Skip family cells whose generated size exceeds this many terms.
    #[arg(long)]
    term_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeakenArgs {
    input: PathBuf,
    /// `formula,term,literal`, zero-based.
    #[arg(long)]
    locus: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    input: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct DimacsArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_v1(s: &str) -> Result<V1Range, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn parse_table_format(s: &str) -> Result<TableFormat, String> {
    s.parse()
}

fn parse_table_family(s: &str) -> Result<TableFamily, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |p: &str| p.trim().parse::<usize>().map_err(|_| format!("bad number {p:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn ser_v1<S: serde::Serializer>(v: &Option<V1Range>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(r.as_str()),
        None => s.serialize_none(),
    }
}

/// Failure outcomes other than a verdict.
enum Failure {
    Usage(String),
    Fault(String),
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::OracleDisagreement { .. } | VerifyError::InvalidWitness(_) => Failure::Fault(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

impl FamilyArgs {
    fn need(&self, v: Option<usize>, flag: &str, family: Family) -> Result<usize, Failure> {
        v.ok_or_else(|| usage(format!("--family {} requires --{flag}", family_name(family))))
    }

    fn descriptor(&self) -> Result<Option<FamilyDescriptor>, Failure> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let d = match family {
            Family::Tarsi => FamilyDescriptor::Tarsi { n: self.need(self.n, "n", family)? },
            Family::NaivePair => FamilyDescriptor::NaivePair { n: self.need(self.n, "n", family)? },
            Family::Substitution => FamilyDescriptor::Substitution {
                n: self.need(self.n, "n", family)?,
                k: self.need(self.k, "k", family)?,
            },
            Family::WeightGadget => {
                FamilyDescriptor::weight_gadget(self.need(self.m, "m", family)?, self.need(self.k, "k", family)?)
            }
            Family::MinUnsat => {
                let (m, k) = (self.need(self.m, "m", family)?, self.need(self.k, "k", family)?);
                match self.nu_range {
                    Some(nu_range) => FamilyDescriptor::MinUnsat { m, k, nu_range, v1: V1Range::default() },
                    None => FamilyDescriptor::min_unsat(m, k),
                }
            }
            Family::XorPair => {
                FamilyDescriptor::xor_pair(self.need(self.m, "m", family)?, self.need(self.k, "k", family)?)
            }
        };
        Ok(Some(match self.v1 {
            Some(v1) => d.with_v1(v1),
            None => d,
        }))
    }
}

fn family_name(f: Family) -> String {
    f.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()
}

struct Instance {
    set: DnfSet,
    descriptor: Option<FamilyDescriptor>,
    g: Option<CdXorFormula>,
}

fn generate(descriptor: &FamilyDescriptor) -> Result<Instance, Failure> {
    let (set, g) = match *descriptor {
        FamilyDescriptor::XorPair { m, k, v1 } => {
            let (d, g) = xor_implication_pair_with(m, k, v1, DEFAULT_TERM_CAP).map_err(usage)?;
            (d, Some(g))
        }
        _ => (descriptor.generate().map_err(usage)?, None),
    };
    Ok(Instance { set, descriptor: Some(*descriptor), g })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_set(path: &Path) -> Result<(DnfSet, Option<FamilyDescriptor>), Failure> {
    let doc = parse_kdnf(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((doc.set, doc.descriptor))
}

fn load_g(path: &Path) -> Result<CdXorFormula, Failure> {
    let doc = parse_cdxor(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(doc.formula)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Fault(e.to_string()))
        }
    }
}

fn solver_config(a: &SolverArgs) -> Result<SolverConfig, Failure> {
    let external = match a.solver.as_str() {
        "internal" => None,
        s => match s.strip_prefix("external:") {
            Some(cmd) => {
                Some(ExternalSolver::from_command(cmd).ok_or_else(|| usage("--solver external: needs a command"))?)
            }
            None => return Err(usage(format!("unknown solver {s:?} (expected internal or external:<command>)"))),
        },
    };
    Ok(SolverConfig { strategy: a.strategy, brute_cap: a.brute_cap, external, ..SolverConfig::default() })
}

fn seconds(v: f64, flag: &str) -> Result<Option<Duration>, Failure> {
    if !v.is_finite() || v < 0.0 {
        return Err(usage(format!("--{flag} must be a non-negative number of seconds")));
    }
    Ok((v > 0.0).then(|| Duration::from_secs_f64(v)))
}

fn verify_options(a: &SolverArgs) -> Result<VerifyOptions, Failure> {
    if a.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    Ok(VerifyOptions {
        solver: solver_config(a)?,
        per_check: seconds(a.timeout_per_check, "timeout-per-check")?,
        total: seconds(a.timeout_total, "timeout-total")?,
        jobs: a.jobs,
    })
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let descriptor = a.family.descriptor()?.ok_or_else(|| usage("gen requires --family"))?;
    let inst = generate(&descriptor)?;
    emit(a.out.as_deref(), &serialize_kdnf(&inst.set, Some(&descriptor)))?;
    if let Some(g) = &inst.g {
        let text = serialize_cdxor(g, Some(&descriptor));
        match &a.out {
            Some(p) => emit(Some(&p.with_extension("cdxor")), &text)?,
            None => emit(None, &text)?,
        }
    }
    if let Some(p) = &a.dimacs {
        emit(Some(p), &export_dimacs(&inst.set))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_instance(a: &VerifyArgs) -> Result<Instance, Failure> {
    let flags = a.family.descriptor()?;
    let mut inst = match &a.input {
        Some(path) => {
            let (set, stored) = load_set(path)?;
            Instance { set, descriptor: flags.or(stored), g: None }
        }
        None => generate(&flags.ok_or_else(|| usage("verify needs an input file or --family"))?)?,
    };
    let wants_g = matches!(a.check, Check::Implication | Check::PreciseImplication | Check::Bounds);
    if wants_g && inst.g.is_none() {
        let path = a.g.clone().or_else(|| {
            let p = a.input.as_ref()?.with_extension("cdxor");
            p.exists().then_some(p)
        });
        match path {
            Some(p) => inst.g = Some(load_g(&p)?),
            None if a.check != Check::Bounds => {
                return Err(usage("implication checks need G: pass --g or a sibling .cdxor file"))
            }
            None => {}
        }
    }
    Ok(inst)
}

fn exit_for(v: Verdict) -> ExitCode {
    match v {
        Verdict::Holds => ExitCode::SUCCESS,
        Verdict::Fails | Verdict::Mixed => ExitCode::from(1),
        Verdict::Timeout => ExitCode::from(3),
    }
}

#[derive(Serialize)]
struct RunConfig<'a> {
    subcommand: &'static str,
    #[serde(flatten)]
    args: &'a VerifyArgs,
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let opts = verify_options(&a.solver)?;
    let report: VerificationReport = match a.check {
        Check::TarsiScan => verify::tarsi_scan(a.max_clauses, a.max_vars, &opts)?,
        Check::WeightGadget => {
            let descriptor = match (a.family.descriptor()?, &a.input) {
                (Some(d), _) => Some(d),
                (None, Some(p)) => load_set(p)?.1,
                (None, None) => None,
            };
            match descriptor {
                Some(FamilyDescriptor::WeightGadget { m, k, v1 }) => {
                    verify::check_weight_gadget_variant(m, k, v1, &opts)?
                }
                _ => {
                    return Err(usage(
                        "weight-gadget check needs --family weight-gadget --m --k or a gadget instance file",
                    ))
                }
            }
        }
        check => {
            let inst = verify_instance(a)?;
            let (d, desc, g) = (&inst.set, inst.descriptor.as_ref(), inst.g.as_ref());
            match check {
                Check::Unsat => verify::check_unsat(d, desc, &opts)?,
                Check::MinUnsat => verify::check_min_unsat(d, desc, &opts)?,
                Check::Implication => verify::check_implication(d, g.expect("loaded above"), desc, &opts)?,
                Check::PreciseImplication => {
                    verify::check_precise_implication(d, g.expect("loaded above"), desc, &opts)?
                }
                Check::Bounds => verify::check_bounds(d, desc, g),
                Check::TarsiScan | Check::WeightGadget => unreachable!(),
            }
        }
    };
    debug_assert_eq!(report.check, check_kind(a.check));

    let summary = format!(
        "{}elapsed: {:.3} s, {} solver queries, {} jobs\n",
        report.summary(),
        report.stats.elapsed_us as f64 / 1e6,
        report.stats.queries,
        report.stats.jobs
    );
    match a.format {
        ReportFormat::Text => emit(None, &summary)?,
        ReportFormat::Json => {
            let body: serde_json::Value =
                serde_json::from_str(&report.canonical_json()).map_err(|e| Failure::Fault(e.to_string()))?;
            let doc = serde_json::json!({
                "config": RunConfig { subcommand: "verify", args: a },
                "report": body,
            });
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Fault(e.to_string()))?;
            text.push('\n');
            emit(a.out.as_deref(), &text)?;
            if a.out.is_some() {
                emit(None, &summary)?;
            } else {
                eprint!("{summary}");
            }
        }
    }
    Ok(exit_for(report.verdict))
}

fn check_kind(c: Check) -> CheckKind {
    match c {
        Check::Unsat => CheckKind::Unsat,
        Check::MinUnsat => CheckKind::MinUnsat,
        Check::WeightGadget => CheckKind::WeightGadget,
        Check::Implication => CheckKind::Implication,
        Check::PreciseImplication => CheckKind::PreciseImplication,
        Check::Bounds => CheckKind::Bounds,
        Check::TarsiScan => CheckKind::TarsiScan,
    }
}

fn cmd_bounds(a: &BoundsArgs) -> CmdResult {
    let options = TableOptions { xor_column: a.xor_column, family: a.family, term_cap: a.term_cap };
    let table = emit_bounds_table(a.k.clone(), a.m.clone(), options, a.format).map_err(usage)?;
    emit(a.out.as_deref(), &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_weaken(a: &WeakenArgs) -> CmdResult {
    let (d, _) = load_set(&a.input)?;
    let locus: WeakeningLocus = a.locus.parse().map_err(usage)?;
    let w = d.weaken(locus).map_err(usage)?;
    emit(a.out.as_deref(), &serialize_kdnf(&w, None))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: &SolveArgs) -> CmdResult {
    let (d, _) = load_set(&a.input)?;
    let opts = verify_options(&a.solver)?;
    let cfg = opts.solver.with_budget(opts.per_check);
    match sat(&d, &cfg) {
        Ok(r) => {
            let model = r.model.as_ref().filter(|_| r.status == SatStatus::Sat);
            emit(None, &write_solution(model))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) if e.is_timeout() => {
            emit(None, "s UNKNOWN\n")?;
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(usage(e)),
    }
}

fn cmd_dimacs(a: &DimacsArgs) -> CmdResult {
    let (d, _) = load_set(&a.input)?;
    emit(a.out.as_deref(), &export_dimacs(&d))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Weaken(a) => cmd_weaken(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Dimacs(a) => cmd_dimacs(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Fault(msg)) => {
            eprintln!("fault: {msg}");
            ExitCode::from(4)
        }
    }
}
