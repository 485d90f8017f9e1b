//! Deterministic generators for the formula families.
//!
//! Variable allocation order is part of each generator's contract, since
//! weakening loci and report witnesses are addressed through it:
//!
//! * `tarsi_cnf(n)`: `x_i` for `i = 1..n`.
//! * `naive_pair(n)`: `x`, then `y_1..y_n`.
//! * `substitute_or_of_ands`: `x_i_j` (copy `j` of input variable `i`),
//!   input-variable major.
//! * `weight_gadget(m, k)`: `x_1..x_{m(k-1)}`, then `u_1..u_{m-1}`, then
//!   `v_1..v_{m-1}`.
//! * `min_unsat_set(m, k)`: gadget copies `c = 1..k-1` contribute `x_c_i`,
//!   then all `u_c_j`, then all `v_c_j` (copy major within each group);
//!   then `y_nu_i1_.._i{k-1}` (nu major, index tuples in lexicographic
//!   order); then the selectors `u_nu`, which carry one index where the
//!   gadget auxiliaries carry two.
//! * `xor_implication_pair(m, k)`: gadget variables as above, then
//!   `y_nu_r_i1_.._i{k-1}` ordered by nu, tuple, then `r = 1..k+1`, so every
//!   XOR block is a contiguous id range.
//!
//! The gadget's auxiliary variables are always called `u` and `v`.
//!
//! The `v_1` formula's disjunction ranges over the first block by default
//! ([`V1Range::FirstBlock`]). [`V1Range::Displayed`] instead ranges over
//! `x_1..x_k`, which reaches into the second block; with it the gadget loses
//! its weakening property for every `k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;
use crate::formula::{DnfFormula, DnfSet, Literal, Term, VarName, VariableId};
use crate::sat::{CdXorFormula, XorAtom};

/// Index range of the `v_1` formula's `⋁_i ⋀_{i' != i} ¬x_{i'}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum V1Range {
    /// `i, i'` over the block `X_1 = x_1..x_{k-1}`.
    #[default]
    FirstBlock,
    /// `i, i'` over `x_1..x_k`.
    Displayed,
}

impl V1Range {
    pub fn is_default(&self) -> bool {
        *self == V1Range::FirstBlock
    }

    pub fn as_str(self) -> &'static str {
        match self {
            V1Range::FirstBlock => "block",
            V1Range::Displayed => "displayed",
        }
    }
}

impl FromStr for V1Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(V1Range::FirstBlock),
            "displayed" => Ok(V1Range::Displayed),
            other => Err(format!("unknown v1 range {other:?} (expected block or displayed)")),
        }
    }
}

/// Default refusal threshold for the number of terms a generator emits.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    Tarsi {
        n: usize,
    },
    NaivePair {
        n: usize,
    },
    /// `substitute_or_of_ands(tarsi_cnf(n), k)`.
    Substitution {
        n: usize,
        k: usize,
    },
    WeightGadget {
        m: usize,
        k: usize,
        #[serde(default, skip_serializing_if = "V1Range::is_default")]
        v1: V1Range,
    },
    MinUnsat {
        m: usize,
        k: usize,
        nu_range: usize,
        #[serde(default, skip_serializing_if = "V1Range::is_default")]
        v1: V1Range,
    },
    XorPair {
        m: usize,
        k: usize,
        #[serde(default, skip_serializing_if = "V1Range::is_default")]
        v1: V1Range,
    },
}

impl FamilyDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyDescriptor::Tarsi { .. } => "tarsi",
            FamilyDescriptor::NaivePair { .. } => "naive_pair",
            FamilyDescriptor::Substitution { .. } => "substitution",
            FamilyDescriptor::WeightGadget { .. } => "weight_gadget",
            FamilyDescriptor::MinUnsat { .. } => "min_unsat",
            FamilyDescriptor::XorPair { .. } => "xor_pair",
        }
    }

    pub fn weight_gadget(m: usize, k: usize) -> Self {
        FamilyDescriptor::WeightGadget { m, k, v1: V1Range::default() }
    }

    /// `min_unsat` with the default `nu` range `m(k-1)`.
    pub fn min_unsat(m: usize, k: usize) -> Self {
        FamilyDescriptor::MinUnsat { m, k, nu_range: m * k.saturating_sub(1), v1: V1Range::default() }
    }

    pub fn xor_pair(m: usize, k: usize) -> Self {
        FamilyDescriptor::XorPair { m, k, v1: V1Range::default() }
    }

    /// Replaces the `v_1` range of gadget-based families; others are
    /// returned unchanged.
    pub fn with_v1(self, range: V1Range) -> Self {
        match self {
            FamilyDescriptor::WeightGadget { m, k, .. } => FamilyDescriptor::WeightGadget { m, k, v1: range },
            FamilyDescriptor::MinUnsat { m, k, nu_range, .. } => {
                FamilyDescriptor::MinUnsat { m, k, nu_range, v1: range }
            }
            FamilyDescriptor::XorPair { m, k, .. } => FamilyDescriptor::XorPair { m, k, v1: range },
            other => other,
        }
    }

    pub fn v1(&self) -> Option<V1Range> {
        match *self {
            FamilyDescriptor::WeightGadget { v1, .. }
            | FamilyDescriptor::MinUnsat { v1, .. }
            | FamilyDescriptor::XorPair { v1, .. } => Some(v1),
            _ => None,
        }
    }

    /// The k-DNF set this descriptor names (for `xor_pair`, the set `D`).
    pub fn generate(&self) -> Result<DnfSet, ConstructionError> {
        match *self {
            FamilyDescriptor::Tarsi { n } => tarsi_cnf(n),
            FamilyDescriptor::NaivePair { n } => naive_pair(n),
            FamilyDescriptor::Substitution { n, k } => substitute_or_of_ands(&tarsi_cnf(n)?, k),
            FamilyDescriptor::WeightGadget { m, k, v1 } => weight_gadget_with(m, k, v1),
            FamilyDescriptor::MinUnsat { m, k, nu_range, v1 } => {
                min_unsat_set_with(m, k, nu_range, v1, DEFAULT_TERM_CAP)
            }
            FamilyDescriptor::XorPair { m, k, v1 } => {
                xor_implication_pair_with(m, k, v1, DEFAULT_TERM_CAP).map(|(d, _)| d)
            }
        }
    }

    /// Gadget-derived families carry x-blocks whose weights are reported.
    pub fn has_gadget(&self) -> bool {
        matches!(
            self,
            FamilyDescriptor::WeightGadget { .. }
                | FamilyDescriptor::MinUnsat { .. }
                | FamilyDescriptor::XorPair { .. }
        )
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match *self {
            FamilyDescriptor::Tarsi { n } | FamilyDescriptor::NaivePair { n } => write!(f, " n={n}"),
            FamilyDescriptor::Substitution { n, k } => write!(f, " n={n} k={k}"),
            FamilyDescriptor::WeightGadget { m, k, .. } | FamilyDescriptor::XorPair { m, k, .. } => {
                write!(f, " m={m} k={k}")
            }
            FamilyDescriptor::MinUnsat { m, k, nu_range, .. } => write!(f, " m={m} k={k} nu={nu_range}"),
        }?;
        match self.v1() {
            Some(v1) if !v1.is_default() => write!(f, " v1={}", v1.as_str()),
            _ => Ok(()),
        }
    }
}

impl FromStr for FamilyDescriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let family = words.next().ok_or("empty family descriptor")?;
        let (mut n, mut m, mut k, mut nu) = (None, None, None, None);
        let mut v1 = V1Range::default();
        for w in words {
            let (key, value) = w.split_once('=').ok_or_else(|| format!("expected key=value, got {w:?}"))?;
            if key == "v1" {
                v1 = value.parse()?;
                continue;
            }
            let value: usize = value.parse().map_err(|_| format!("bad value in {w:?}"))?;
            match key {
                "n" => n = Some(value),
                "m" => m = Some(value),
                "k" => k = Some(value),
                "nu" => nu = Some(value),
                _ => return Err(format!("unknown parameter {key:?}")),
            }
        }
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| format!("{family} needs {name}"));
        Ok(match family {
            "tarsi" => FamilyDescriptor::Tarsi { n: need(n, "n")? },
            "naive_pair" => FamilyDescriptor::NaivePair { n: need(n, "n")? },
            "substitution" => FamilyDescriptor::Substitution { n: need(n, "n")?, k: need(k, "k")? },
            "weight_gadget" => FamilyDescriptor::WeightGadget { m: need(m, "m")?, k: need(k, "k")?, v1 },
            "min_unsat" => {
                let (m, k) = (need(m, "m")?, need(k, "k")?);
                FamilyDescriptor::MinUnsat { m, k, nu_range: nu.unwrap_or(m * k.saturating_sub(1)), v1 }
            }
            "xor_pair" => FamilyDescriptor::XorPair { m: need(m, "m")?, k: need(k, "k")?, v1 },
            other => return Err(format!("unknown family {other:?}")),
        })
    }
}

fn require(name: &'static str, value: usize, min: usize, requirement: &'static str) -> Result<(), ConstructionError> {
    if value < min {
        return Err(ConstructionError::Parameter { name, value, requirement });
    }
    Ok(())
}

fn term(lits: impl IntoIterator<Item = Literal>) -> Term {
    Term::new(lits).expect("generators never repeat a variable within a term")
}

/// Allocates ids in call order.
#[derive(Default)]
struct Universe {
    names: Vec<VarName>,
}

impl Universe {
    fn fresh(&mut self, tag: &str, indices: &[u32]) -> VariableId {
        self.names.push(VarName::new(tag, indices));
        VariableId::from_index(self.names.len() - 1)
    }
}

/// `{x_1, …, x_n, ¬x_1 ∨ … ∨ ¬x_n}`.
pub fn tarsi_cnf(n: usize) -> Result<DnfSet, ConstructionError> {
    require("n", n, 1, "n >= 1")?;
    let mut u = Universe::default();
    let xs: Vec<VariableId> = (1..=n).map(|i| u.fresh("x", &[i as u32])).collect();
    let mut formulas: Vec<DnfFormula> = xs.iter().map(|&x| DnfFormula::new(vec![term([Literal::pos(x)])])).collect();
    formulas.push(DnfFormula::new(xs.iter().map(|&x| term([Literal::neg(x)])).collect()));
    Ok(DnfSet::new(1, u.names, formulas)?)
}

/// `{ ⋁_i (x ∧ y_i), ⋁_i (¬x ∧ y_i) }`: unsatisfiable and deletion-minimal,
/// but not minimal under term weakening.
pub fn naive_pair(n: usize) -> Result<DnfSet, ConstructionError> {
    require("n", n, 1, "n >= 1")?;
    let mut u = Universe::default();
    let x = u.fresh("x", &[]);
    let ys: Vec<VariableId> = (1..=n).map(|i| u.fresh("y", &[i as u32])).collect();
    let side = |positive: bool| {
        DnfFormula::new(ys.iter().map(|&y| term([Literal::new(x, positive), Literal::pos(y)])).collect())
    };
    let formulas = vec![side(true), side(false)];
    Ok(DnfSet::new(2, u.names, formulas)?)
}

/// Replaces every variable of a CNF by an OR of `k` disjoint `k`-ANDs over
/// fresh variables and expands each clause into a k-DNF formula.
///
/// A positive literal contributes the `k` conjunctions; a negative one the
/// full distributive expansion of the negated OR: `k^k` terms, each taking
/// one negated variable from every block, in lexicographic choice order.
pub fn substitute_or_of_ands(cnf: &DnfSet, k: usize) -> Result<DnfSet, ConstructionError> {
    require("k", k, 2, "k >= 2")?;
    for (fi, f) in cnf.formulas().iter().enumerate() {
        if f.width() > 1 {
            return Err(ConstructionError::NotCnf(fi));
        }
    }
    let mut u = Universe::default();
    // blocks[i][b] = variables of the b-th conjunction replacing variable i + 1.
    let blocks: Vec<Vec<Vec<VariableId>>> = (1..=cnf.nvars())
        .map(|i| {
            let copies: Vec<VariableId> = (1..=k * k).map(|j| u.fresh("x", &[i as u32, j as u32])).collect();
            copies.chunks(k).map(<[VariableId]>::to_vec).collect()
        })
        .collect();

    let positive =
        |bs: &[Vec<VariableId>]| -> Vec<Term> { bs.iter().map(|b| term(b.iter().map(|&v| Literal::pos(v)))).collect() };
    let negative = |bs: &[Vec<VariableId>]| -> Vec<Term> {
        let mut out = Vec::with_capacity(k.pow(k as u32));
        let mut choice = vec![0usize; k];
        loop {
            out.push(term(choice.iter().enumerate().map(|(b, &c)| Literal::neg(bs[b][c]))));
            // Odometer over the block choices, last block fastest.
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < k {
                    break;
                }
                choice[pos] = 0;
            }
        }
    };

    let mut formulas = Vec::with_capacity(cnf.len());
    for f in cnf.formulas() {
        let mut terms = Vec::new();
        for t in f.terms() {
            match t.literals() {
                [] => terms.push(Term::empty()),
                [lit] => {
                    let bs = &blocks[lit.var().index()];
                    terms.extend(if lit.is_positive() { positive(bs) } else { negative(bs) });
                }
                _ => unreachable!("width checked above"),
            }
        }
        formulas.push(DnfFormula::new(terms));
    }
    Ok(DnfSet::new(k, u.names, formulas)?)
}

/// Variables of one weight gadget: `x` has `m(k-1)` entries, `u` and `v`
/// have `m - 1` each.
struct GadgetVars {
    x: Vec<VariableId>,
    u: Vec<VariableId>,
    v: Vec<VariableId>,
}

/// The `2m - 1` formulas bounding the Hamming weight of `x` by one.
fn gadget_formulas(m: usize, k: usize, v1_range: V1Range, g: &GadgetVars) -> Vec<DnfFormula> {
    let w = k - 1;
    // Block X_j, 1-based.
    let block = |j: usize| &g.x[(j - 1) * w..j * w];
    let u = |j: usize| g.u[j - 1];
    let v = |j: usize| g.v[j - 1];
    let none_of = |xs: &[VariableId]| xs.iter().map(|&x| Literal::neg(x)).collect::<Vec<_>>();
    let with = |head: VariableId, xs: &[VariableId]| term(std::iter::once(Literal::pos(head)).chain(none_of(xs)));
    let all_but = |xs: &[VariableId], skip: usize| {
        xs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect::<Vec<_>>()
    };

    let mut formulas = Vec::with_capacity(2 * m - 1);
    // u_1: ¬u_1 ∨ ⋀_{X_1} ¬x
    formulas.push(DnfFormula::new(vec![term([Literal::neg(u(1))]), term(none_of(block(1)))]));
    // u_j: ¬u_j ∨ (u_{j-1} ∧ ⋀_{X_j} ¬x)
    for j in 2..m {
        formulas.push(DnfFormula::new(vec![term([Literal::neg(u(j))]), with(u(j - 1), block(j))]));
    }
    // v_1: ¬v_1 ∨ u_1 ∨ ⋁_{i ∈ R} ⋀_{i' ∈ R \ {i}} ¬x_{i'}, R = X_1 or [k]
    {
        let range = match v1_range {
            V1Range::FirstBlock => block(1),
            V1Range::Displayed => &g.x[..k],
        };
        let mut terms = vec![term([Literal::neg(v(1))]), term([Literal::pos(u(1))])];
        terms.extend((0..range.len()).map(|i| term(none_of(&all_but(range, i)))));
        formulas.push(DnfFormula::new(terms));
    }
    // v_j: ¬v_j ∨ u_j ∨ (v_{j-1} ∧ ⋀_{X_j} ¬x) ∨ ⋁_{i ∈ X_j} (u_{j-1} ∧ ⋀_{X_j \ {i}} ¬x)
    for j in 2..m {
        let b = block(j);
        let mut terms = vec![term([Literal::neg(v(j))]), term([Literal::pos(u(j))]), with(v(j - 1), b)];
        terms.extend((0..w).map(|i| with(u(j - 1), &all_but(b, i))));
        formulas.push(DnfFormula::new(terms));
    }
    // Final: (v_{m-1} ∧ ⋀_{X_m} ¬x) ∨ ⋁_{i ∈ X_m} (u_{m-1} ∧ ⋀_{X_m \ {i}} ¬x)
    {
        let b = block(m);
        let mut terms = vec![with(v(m - 1), b)];
        terms.extend((0..w).map(|i| with(u(m - 1), &all_but(b, i))));
        formulas.push(DnfFormula::new(terms));
    }
    formulas
}

fn check_gadget_params(m: usize, k: usize) -> Result<(), ConstructionError> {
    require("m", m, 2, "m >= 2")?;
    require("k", k, 2, "k >= 2")
}

/// Weight-at-most-one gadget over `x_1..x_{m(k-1)}`.
pub fn weight_gadget(m: usize, k: usize) -> Result<DnfSet, ConstructionError> {
    weight_gadget_with(m, k, V1Range::default())
}

pub fn weight_gadget_with(m: usize, k: usize, v1: V1Range) -> Result<DnfSet, ConstructionError> {
    check_gadget_params(m, k)?;
    let mut u = Universe::default();
    let len = m * (k - 1);
    let g = GadgetVars {
        x: (1..=len).map(|i| u.fresh("x", &[i as u32])).collect(),
        u: (1..m).map(|j| u.fresh("u", &[j as u32])).collect(),
        v: (1..m).map(|j| u.fresh("v", &[j as u32])).collect(),
    };
    let formulas = gadget_formulas(m, k, v1, &g);
    Ok(DnfSet::new(k, u.names, formulas)?)
}

/// `k - 1` gadget copies over disjoint universes, allocated x, u, v.
fn gadget_copies(u: &mut Universe, m: usize, k: usize) -> Vec<GadgetVars> {
    let len = m * (k - 1);
    let copies = 1..k;
    let xs: Vec<Vec<VariableId>> =
        copies.clone().map(|c| (1..=len).map(|i| u.fresh("x", &[c as u32, i as u32])).collect()).collect();
    let us: Vec<Vec<VariableId>> =
        copies.clone().map(|c| (1..m).map(|j| u.fresh("u", &[c as u32, j as u32])).collect()).collect();
    let vs: Vec<Vec<VariableId>> =
        copies.map(|c| (1..m).map(|j| u.fresh("v", &[c as u32, j as u32])).collect()).collect();
    xs.into_iter().zip(us).zip(vs).map(|((x, u), v)| GadgetVars { x, u, v }).collect()
}

/// All tuples of `[len]^arity` in lexicographic order, 1-based.
fn index_tuples(len: usize, arity: usize) -> Vec<Vec<u32>> {
    let mut tuples = vec![Vec::new()];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (1..=len as u32).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    tuples
}

fn guard(terms: u128, cap: usize) -> Result<(), ConstructionError> {
    if terms > cap as u128 {
        return Err(ConstructionError::TooLarge { terms, cap });
    }
    Ok(())
}

/// Selector conjunction `x^1_{i1} ∧ … ∧ x^{k-1}_{i_{k-1}}` for a tuple.
fn selector(copies: &[GadgetVars], tuple: &[u32]) -> Vec<Literal> {
    copies.iter().zip(tuple).map(|(g, &i)| Literal::pos(g.x[i as usize - 1])).collect()
}

/// The minimally unsatisfiable k-DNF set over `k - 1` weight gadgets with
/// `nu` ranging over `m(k-1)`.
pub fn min_unsat_set(m: usize, k: usize) -> Result<DnfSet, ConstructionError> {
    min_unsat_set_with(m, k, m * k.saturating_sub(1), V1Range::default(), DEFAULT_TERM_CAP)
}

pub fn min_unsat_set_with(
    m: usize,
    k: usize,
    nu_range: usize,
    v1: V1Range,
    term_cap: usize,
) -> Result<DnfSet, ConstructionError> {
    check_gadget_params(m, k)?;
    require("nu_range", nu_range, 1, "nu_range >= 1")?;
    let len = m * (k - 1);
    let ntuples = (len as u128).pow(k as u32 - 1);
    guard(2 * nu_range as u128 * ntuples, term_cap)?;

    let mut u = Universe::default();
    let copies = gadget_copies(&mut u, m, k);
    let tuples = index_tuples(len, k - 1);
    let ys: Vec<Vec<VariableId>> = (1..=nu_range as u32)
        .map(|nu| {
            tuples
                .iter()
                .map(|t| {
                    let mut idx = vec![nu];
                    idx.extend(t);
                    u.fresh("y", &idx)
                })
                .collect()
        })
        .collect();
    let selectors: Vec<VariableId> = (1..=nu_range as u32).map(|nu| u.fresh("u", &[nu])).collect();

    let mut formulas: Vec<DnfFormula> = copies.iter().flat_map(|g| gadget_formulas(m, k, v1, g)).collect();
    let sel: Vec<Vec<Literal>> = tuples.iter().map(|t| selector(&copies, t)).collect();
    let y_terms = |nu: usize, positive: bool| {
        sel.iter().zip(&ys[nu]).map(move |(s, &y)| {
            let mut lits = s.clone();
            lits.push(Literal::new(y, positive));
            term(lits)
        })
    };
    for nu in 0..nu_range {
        formulas.push(DnfFormula::new(y_terms(nu, true).collect()));
    }
    for (nu, &s) in selectors.iter().enumerate() {
        let mut terms = vec![term([Literal::neg(s)])];
        terms.extend(y_terms(nu, false));
        formulas.push(DnfFormula::new(terms));
    }
    formulas.push(DnfFormula::new(selectors.iter().map(|&s| term([Literal::pos(s)])).collect()));
    Ok(DnfSet::new(k, u.names, formulas)?)
}

/// A k-DNF set `D` and a CD-(k+1)-XOR formula `G` with `D` implying `G`.
pub fn xor_implication_pair(m: usize, k: usize) -> Result<(DnfSet, CdXorFormula), ConstructionError> {
    xor_implication_pair_with(m, k, V1Range::default(), DEFAULT_TERM_CAP)
}

pub fn xor_implication_pair_with(
    m: usize,
    k: usize,
    v1: V1Range,
    term_cap: usize,
) -> Result<(DnfSet, CdXorFormula), ConstructionError> {
    check_gadget_params(m, k)?;
    let len = m * (k - 1);
    let ntuples = (len as u128).pow(k as u32 - 1);
    guard(len as u128 * ntuples * (k as u128 + 1), term_cap)?;

    let mut u = Universe::default();
    let copies = gadget_copies(&mut u, m, k);
    let tuples = index_tuples(len, k - 1);
    // blocks[nu][t] = (y^{nu,1}_t, …, y^{nu,k+1}_t)
    let blocks: Vec<Vec<Vec<VariableId>>> = (1..=len as u32)
        .map(|nu| {
            tuples
                .iter()
                .map(|t| {
                    (1..=k as u32 + 1)
                        .map(|r| {
                            let mut idx = vec![nu, r];
                            idx.extend(t);
                            u.fresh("y", &idx)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut formulas: Vec<DnfFormula> = copies.iter().flat_map(|g| gadget_formulas(m, k, v1, g)).collect();
    let sel: Vec<Vec<Literal>> = tuples.iter().map(|t| selector(&copies, t)).collect();
    let y_formula = |nu: usize, r: usize, positive: bool| {
        DnfFormula::new(
            sel.iter()
                .zip(&blocks[nu])
                .map(|(s, b)| {
                    let mut lits = s.clone();
                    lits.push(Literal::new(b[r], positive));
                    term(lits)
                })
                .collect(),
        )
    };
    for nu in 0..len {
        formulas.push(y_formula(nu, 0, true));
    }
    for nu in 0..len {
        for r in 1..=k {
            formulas.push(y_formula(nu, r, false));
        }
    }
    let d = DnfSet::new(k, u.names.clone(), formulas)?;

    let flat_blocks: Vec<Vec<VariableId>> = blocks.iter().flatten().cloned().collect();
    let clauses =
        (0..len).map(|nu| (0..tuples.len()).map(|t| XorAtom::new(true, nu * tuples.len() + t)).collect()).collect();
    let g = CdXorFormula::new(k + 1, u.names, flat_blocks, clauses)?;
    Ok((d, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_terms(d: &DnfSet, f: usize) -> Vec<Vec<i64>> {
        d.formulas()[f].terms().iter().map(|t| t.literals().iter().map(|l| l.to_signed()).collect()).collect()
    }

    #[test]
    fn tarsi_shapes() {
        let d = tarsi_cnf(1).unwrap();
        assert_eq!(signed_terms(&d, 0), vec![vec![1]]);
        assert_eq!(signed_terms(&d, 1), vec![vec![-1]]);
        for n in 1..=8 {
            let d = tarsi_cnf(n).unwrap();
            assert_eq!(d.len(), n + 1);
            assert_eq!(d.nvars(), n);
        }
        assert!(tarsi_cnf(0).is_err());
    }

    #[test]
    fn naive_pair_shape() {
        let d = naive_pair(2).unwrap();
        assert_eq!(signed_terms(&d, 0), vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(signed_terms(&d, 1), vec![vec![-1, 2], vec![-1, 3]]);
        assert!(naive_pair(0).is_err());
    }

    #[test]
    fn substitution_of_single_variable() {
        let d = substitute_or_of_ands(&tarsi_cnf(1).unwrap(), 2).unwrap();
        // a, b, c, d = x_1_1 .. x_1_4
        assert_eq!(signed_terms(&d, 0), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(signed_terms(&d, 1), vec![vec![-1, -3], vec![-1, -4], vec![-2, -3], vec![-2, -4]]);
        assert_eq!(d.nvars(), 4);
    }

    #[test]
    fn substitution_counts() {
        for k in 2..=3 {
            for n in 1..=3 {
                let d = substitute_or_of_ands(&tarsi_cnf(n).unwrap(), k).unwrap();
                assert_eq!(d.len(), n + 1);
                assert_eq!(d.nvars(), k * k * n);
                assert_eq!(d.occurring_vars().len(), k * k * n);
                for f in &d.formulas()[..n] {
                    assert_eq!(f.terms().len(), k);
                }
                assert_eq!(d.formulas()[n].terms().len(), n * k.pow(k as u32));
                assert!(d.formulas().iter().flat_map(|f| f.terms()).all(|t| t.len() == k));
            }
        }
    }

    #[test]
    fn substitution_rejects_non_cnf() {
        assert_eq!(substitute_or_of_ands(&naive_pair(2).unwrap(), 2).unwrap_err(), ConstructionError::NotCnf(0));
    }

    #[test]
    fn gadget_2_2_by_hand() {
        // x1, x2, u1, v1 = 1, 2, 3, 4
        let d = weight_gadget(2, 2).unwrap();
        assert_eq!(signed_terms(&d, 0), vec![vec![-3], vec![-1]]);
        // X_1 = {x1}: the only term left after dropping x1 is empty
        assert_eq!(signed_terms(&d, 1), vec![vec![-4], vec![3], vec![]]);
        assert_eq!(signed_terms(&d, 2), vec![vec![-2, 4], vec![3]]);
        let d = weight_gadget_with(2, 2, V1Range::Displayed).unwrap();
        assert_eq!(signed_terms(&d, 1), vec![vec![-4], vec![3], vec![-2], vec![-1]]);
    }

    #[test]
    fn gadget_3_3_by_hand() {
        // x1..x6 = 1..6, u1 u2 = 7 8, v1 v2 = 9 10
        let d = weight_gadget(3, 3).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(signed_terms(&d, 0), vec![vec![-7], vec![-1, -2]]);
        assert_eq!(signed_terms(&d, 1), vec![vec![-8], vec![-3, -4, 7]]);
        assert_eq!(signed_terms(&d, 2), vec![vec![-9], vec![7], vec![-2], vec![-1]]);
        assert_eq!(signed_terms(&d, 3), vec![vec![-10], vec![8], vec![-3, -4, 9], vec![-4, 7], vec![-3, 7]]);
        assert_eq!(signed_terms(&d, 4), vec![vec![-5, -6, 10], vec![-6, 8], vec![-5, 8]]);
    }

    #[test]
    fn displayed_v1_spans_first_k() {
        let d = weight_gadget_with(3, 3, V1Range::Displayed).unwrap();
        assert_eq!(signed_terms(&d, 2), vec![vec![-9], vec![7], vec![-2, -3], vec![-1, -3], vec![-1, -2]]);
        assert_eq!(signed_terms(&d, 3), signed_terms(&weight_gadget(3, 3).unwrap(), 3));
    }

    #[test]
    fn gadget_counts() {
        for k in 2..=4 {
            for m in 2..=6 {
                let d = weight_gadget(m, k).unwrap();
                assert_eq!(d.len(), 2 * m - 1);
                assert_eq!(weight_gadget_with(m, k, V1Range::Displayed).unwrap().len(), 2 * m - 1);
                assert_eq!(d.nvars(), m * (k - 1) + 2 * (m - 1));
                assert_eq!(d.occurring_vars().len(), d.nvars());
                assert!(d.width() <= k);
            }
        }
    }

    #[test]
    fn min_unsat_small_counts() {
        let d = min_unsat_set(2, 2).unwrap();
        assert_eq!((d.len(), d.nvars()), (8, 10));
        assert_eq!(d.weakening_loci().len(), 27);
        let shown = min_unsat_set_with(2, 2, 2, V1Range::Displayed, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(shown.weakening_loci().len(), 29);
        let d = min_unsat_set(2, 3).unwrap();
        assert_eq!((d.len(), d.nvars()), (15, 80));
        assert_eq!(d.width(), 3);
    }

    #[test]
    fn min_unsat_names() {
        let d = min_unsat_set(2, 2).unwrap();
        let names: Vec<String> = d.names().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["x_1_1", "x_1_2", "u_1_1", "v_1_1", "y_1_1", "y_1_2", "y_2_1", "y_2_2", "u_1", "u_2"]);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            min_unsat_set_with(6, 4, 18, V1Range::default(), 1000),
            Err(ConstructionError::TooLarge { .. })
        ));
    }

    #[test]
    fn xor_pair_2_2() {
        let (d, g) = xor_implication_pair(2, 2).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(g.clauses().len(), 2);
        assert!(g.clauses().iter().all(|c| c.len() == 2));
        assert!(g.blocks().iter().all(|b| b.len() == 3));
        assert_eq!(g.occurring_vars().len(), 12);
        assert_eq!(d.nvars(), 16);
        assert_eq!(d.occurring_vars().len(), 16);
    }

    #[test]
    fn descriptor_text_round_trip() {
        for d in [
            FamilyDescriptor::Tarsi { n: 3 },
            FamilyDescriptor::NaivePair { n: 2 },
            FamilyDescriptor::Substitution { n: 2, k: 3 },
            FamilyDescriptor::weight_gadget(2, 3),
            FamilyDescriptor::min_unsat(2, 3),
            FamilyDescriptor::min_unsat(2, 2).with_v1(V1Range::Displayed),
            FamilyDescriptor::xor_pair(2, 2),
        ] {
            assert_eq!(d.to_string().parse::<FamilyDescriptor>().unwrap(), d);
        }
    }
}
