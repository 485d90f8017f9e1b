//! Variables, literals, terms, k-DNF formulas and sets of them.
//!
//! A [`DnfSet`] is the conjunction of its formulas; a [`DnfFormula`] is the
//! disjunction of its terms; a [`Term`] is the conjunction of its literals.
//! The empty term is the constant `true` and is kept in the data model so
//! that weakened sets remain addressable by [`WeakeningLocus`].

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::FormulaError;

/// Dense, 1-based variable identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableId(u32);

impl VariableId {
    /// Panics on zero; ids are 1-based.
    pub fn new(id: u32) -> Self {
        assert!(id > 0, "variable ids are 1-based");
        VariableId(id)
    }

    pub fn from_index(index: usize) -> Self {
        VariableId(index as u32 + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position, `id - 1`.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Structured variable label: an alphabetic family tag plus integer indices.
///
/// Rendered as the tag followed by `_`-separated indices, so `x^2_5` is
/// `x_2_5` and the bare variable `x` is just `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName {
    tag: String,
    indices: Vec<u32>,
}

impl VarName {
    pub fn new(tag: &str, indices: &[u32]) -> Self {
        assert!(
            !tag.is_empty() && tag.chars().all(|c| c.is_ascii_alphabetic()),
            "variable tags are non-empty and alphabetic: {tag:?}"
        );
        VarName { tag: tag.to_owned(), indices: indices.to_vec() }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)?;
        for i in &self.indices {
            write!(f, "_{i}")?;
        }
        Ok(())
    }
}

impl FromStr for VarName {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || FormulaError::InvalidName(s.to_owned());
        let mut parts = s.split('_');
        let tag = parts.next().ok_or_else(invalid)?;
        if tag.is_empty() || !tag.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(invalid());
        }
        let indices = parts
            .map(|p| {
                if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(invalid());
                }
                p.parse::<u32>().map_err(|_| invalid())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VarName { tag: tag.to_owned(), indices })
    }
}

impl Serialize for VarName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: VariableId,
    positive: bool,
}

impl Literal {
    pub fn new(var: VariableId, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn pos(var: VariableId) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: VariableId) -> Self {
        Literal::new(var, false)
    }

    /// DIMACS-style signed integer; panics on zero.
    pub fn from_signed(value: i64) -> Self {
        assert!(value != 0, "literal 0 is the DIMACS terminator");
        Literal::new(VariableId::new(value.unsigned_abs() as u32), value > 0)
    }

    pub fn to_signed(self) -> i64 {
        let v = i64::from(self.var.get());
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> VariableId {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    pub fn eval(self, a: &Assignment) -> Result<bool, FormulaError> {
        a.value(self.var).map(|v| v == self.positive).ok_or(FormulaError::Unassigned(self.var))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// A conjunction of literals over distinct variables, ordered by variable id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Term {
    literals: Vec<Literal>,
}

impl Term {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, FormulaError> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        for w in literals.windows(2) {
            if w[0].var == w[1].var {
                return Err(FormulaError::RepeatedVariable(w[0].var));
            }
        }
        Ok(Term { literals })
    }

    /// The constant-true term.
    pub fn empty() -> Self {
        Term::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Copy of this term with the literal at `index` removed.
    pub fn without(&self, index: usize) -> Term {
        let mut literals = self.literals.clone();
        literals.remove(index);
        Term { literals }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for lit in &self.literals {
            if !lit.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A disjunction of terms. No terms at all means constant `false`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DnfFormula {
    terms: Vec<Term>,
}

impl DnfFormula {
    pub fn new(terms: Vec<Term>) -> Self {
        DnfFormula { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn width(&self) -> usize {
        self.terms.iter().map(Term::len).max().unwrap_or(0)
    }

    /// True when some term is empty, making the formula constant true.
    pub fn has_empty_term(&self) -> bool {
        self.terms.iter().any(Term::is_empty)
    }

    pub fn literal_count(&self) -> usize {
        self.terms.iter().map(Term::len).sum()
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for t in &self.terms {
            if t.eval(a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Address of one literal occurrence: formula, term within it, literal within that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeakeningLocus {
    pub formula: usize,
    pub term: usize,
    pub literal: usize,
}

impl WeakeningLocus {
    pub fn new(formula: usize, term: usize, literal: usize) -> Self {
        WeakeningLocus { formula, term, literal }
    }
}

impl fmt::Display for WeakeningLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.formula, self.term, self.literal)
    }
}

impl FromStr for WeakeningLocus {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| FormulaError::InvalidLocus(s.to_owned()))?;
        match parts.as_slice() {
            [f, t, l] => Ok(WeakeningLocus::new(*f, *t, *l)),
            _ => Err(FormulaError::InvalidLocus(s.to_owned())),
        }
    }
}

/// An ordered sequence of DNF formulas of width at most `k` over a named
/// variable universe `1..=nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfSet {
    k: usize,
    names: Vec<VarName>,
    formulas: Vec<DnfFormula>,
}

impl DnfSet {
    /// `names[i]` names variable `i + 1`.
    pub fn new(k: usize, names: Vec<VarName>, formulas: Vec<DnfFormula>) -> Result<Self, FormulaError> {
        let mut seen = HashSet::with_capacity(names.len());
        for n in &names {
            if !seen.insert(n) {
                return Err(FormulaError::DuplicateName(n.to_string()));
            }
        }
        for (i, f) in formulas.iter().enumerate() {
            let width = f.width();
            if width > k {
                return Err(FormulaError::WidthExceeded { formula: i, width, k });
            }
            for t in f.terms() {
                for lit in t.literals() {
                    if lit.var().index() >= names.len() {
                        return Err(FormulaError::VariableOutOfRange { id: lit.var(), nvars: names.len() });
                    }
                }
            }
        }
        Ok(DnfSet { k, names, formulas })
    }

    /// Same formulas over a universe extended with `extra` fresh names.
    pub fn with_extra_names(&self, extra: impl IntoIterator<Item = VarName>) -> Result<Self, FormulaError> {
        let mut names = self.names.clone();
        names.extend(extra);
        DnfSet::new(self.k, names, self.formulas.clone())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[VarName] {
        &self.names
    }

    pub fn name(&self, id: VariableId) -> &VarName {
        &self.names[id.index()]
    }

    pub fn find(&self, name: &VarName) -> Option<VariableId> {
        self.names.iter().position(|n| n == name).map(VariableId::from_index)
    }

    pub fn formulas(&self) -> &[DnfFormula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn width(&self) -> usize {
        self.formulas.iter().map(DnfFormula::width).max().unwrap_or(0)
    }

    pub fn literal_count(&self) -> usize {
        self.formulas.iter().map(DnfFormula::literal_count).sum()
    }

    pub fn term_count(&self) -> usize {
        self.formulas.iter().map(|f| f.terms().len()).sum()
    }

    /// `vars(D)`: the variables that actually occur in some term.
    pub fn occurring_vars(&self) -> BTreeSet<VariableId> {
        self.formulas.iter().flat_map(|f| f.terms()).flat_map(|t| t.literals()).map(|l| l.var()).collect()
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for f in &self.formulas {
            if !f.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// One locus per literal occurrence, in (formula, term, literal) order.
    pub fn weakening_loci(&self) -> Vec<WeakeningLocus> {
        let mut loci = Vec::with_capacity(self.literal_count());
        for (fi, f) in self.formulas.iter().enumerate() {
            for (ti, t) in f.terms().iter().enumerate() {
                for li in 0..t.len() {
                    loci.push(WeakeningLocus::new(fi, ti, li));
                }
            }
        }
        loci
    }

    /// Copy of the set with the addressed literal removed from its term.
    pub fn weaken(&self, locus: WeakeningLocus) -> Result<DnfSet, FormulaError> {
        let term = self
            .formulas
            .get(locus.formula)
            .and_then(|f| f.terms().get(locus.term))
            .filter(|t| locus.literal < t.len())
            .ok_or(FormulaError::LocusOutOfRange(locus))?;
        let weakened = term.without(locus.literal);
        let mut formulas = self.formulas.clone();
        formulas[locus.formula].terms[locus.term] = weakened;
        Ok(DnfSet { k: self.k, names: self.names.clone(), formulas })
    }

    /// Variable-name keyed view of an assignment, for reports.
    pub fn named(&self, a: &Assignment) -> BTreeMap<String, bool> {
        self.names
            .iter()
            .enumerate()
            .filter_map(|(i, n)| a.value(VariableId::from_index(i)).map(|v| (n.to_string(), v)))
            .collect()
    }
}

/// Total truth assignment over variables `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn all_false(nvars: usize) -> Self {
        Assignment { values: vec![false; nvars] }
    }

    pub fn from_values(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Bit `i` of `bits` is the value of variable `i + 1`.
    pub fn from_bits(nvars: usize, bits: u64) -> Self {
        Assignment { values: (0..nvars).map(|i| bits >> i & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, var: VariableId) -> Option<bool> {
        self.values.get(var.index()).copied()
    }

    pub fn set(&mut self, var: VariableId, value: bool) {
        self.values[var.index()] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Prefix over variables `1..=nvars`.
    pub fn restrict(&self, nvars: usize) -> Assignment {
        Assignment { values: self.values[..nvars.min(self.values.len())].to_vec() }
    }

    /// Number of the given variables set to true.
    pub fn weight(&self, vars: impl IntoIterator<Item = VariableId>) -> usize {
        vars.into_iter().filter(|&v| self.value(v) == Some(true)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VariableId {
        VariableId::new(i)
    }

    fn names(n: u32) -> Vec<VarName> {
        (1..=n).map(|i| VarName::new("x", &[i])).collect()
    }

    fn unit(l: i64) -> Term {
        Term::new([Literal::from_signed(l)]).unwrap()
    }

    fn tarsi2() -> DnfSet {
        let f = |terms: Vec<Term>| DnfFormula::new(terms);
        DnfSet::new(1, names(2), vec![f(vec![unit(1)]), f(vec![unit(2)]), f(vec![unit(-1), unit(-2)])]).unwrap()
    }

    #[test]
    fn empty_term_is_true() {
        let a = Assignment::from_values(vec![false, true]);
        assert!(Term::empty().eval(&a).unwrap());
        assert!(Term::empty().eval(&Assignment::all_false(0)).unwrap());
    }

    #[test]
    fn term_eval() {
        let t = Term::new([Literal::pos(v(1)), Literal::neg(v(2))]).unwrap();
        assert!(t.eval(&Assignment::from_values(vec![true, false])).unwrap());
        assert!(!t.eval(&Assignment::from_values(vec![true, true])).unwrap());
    }

    #[test]
    fn unassigned_variable_is_an_error() {
        let t = Term::new([Literal::pos(v(3))]).unwrap();
        assert_eq!(t.eval(&Assignment::all_false(2)), Err(FormulaError::Unassigned(v(3))));
    }

    #[test]
    fn term_rejects_repeated_variable() {
        assert!(Term::new([Literal::pos(v(1)), Literal::neg(v(1))]).is_err());
        assert!(Term::new([Literal::pos(v(1)), Literal::pos(v(1))]).is_err());
    }

    #[test]
    fn term_is_canonically_ordered() {
        let t = Term::new([Literal::neg(v(3)), Literal::pos(v(1))]).unwrap();
        assert_eq!(t.literals()[0].var(), v(1));
    }

    #[test]
    fn eval_tarsi() {
        let d = tarsi2();
        assert!(!d.eval(&Assignment::from_values(vec![true, true])).unwrap());
        assert!(!d.eval(&Assignment::from_values(vec![true, false])).unwrap());
    }

    #[test]
    fn formula_with_empty_term_is_tautology() {
        let d = DnfSet::new(1, names(1), vec![DnfFormula::new(vec![Term::empty(), unit(1)])]).unwrap();
        for bits in 0..2 {
            assert!(d.eval(&Assignment::from_bits(1, bits)).unwrap());
        }
    }

    #[test]
    fn weaken_unit_term_yields_empty_term() {
        let d = tarsi2();
        let w = d.weaken(WeakeningLocus::new(0, 0, 0)).unwrap();
        assert!(w.formulas()[0].has_empty_term());
        for bits in 0..4 {
            assert!(w.formulas()[0].eval(&Assignment::from_bits(2, bits)).unwrap());
        }
    }

    #[test]
    fn weaken_removes_one_literal() {
        let t = Term::new([Literal::pos(v(1)), Literal::neg(v(2))]).unwrap();
        let d = DnfSet::new(2, names(3), vec![DnfFormula::new(vec![t, unit(3)])]).unwrap();
        let w = d.weaken(WeakeningLocus::new(0, 0, 1)).unwrap();
        assert_eq!(w.formulas()[0].terms()[0], unit(1));
        assert_eq!(w.formulas()[0].terms()[1], unit(3));
    }

    #[test]
    fn weaken_out_of_range() {
        let d = tarsi2();
        for loc in [WeakeningLocus::new(3, 0, 0), WeakeningLocus::new(2, 2, 0), WeakeningLocus::new(2, 0, 1)] {
            assert_eq!(d.weaken(loc), Err(FormulaError::LocusOutOfRange(loc)));
        }
    }

    #[test]
    fn loci_of_tarsi() {
        assert_eq!(tarsi2().weakening_loci().len(), 4);
        let empty = DnfSet::new(1, vec![], vec![]).unwrap();
        assert!(empty.weakening_loci().is_empty());
    }

    #[test]
    fn width_is_enforced() {
        let t = Term::new([Literal::pos(v(1)), Literal::neg(v(2))]).unwrap();
        assert!(matches!(
            DnfSet::new(1, names(2), vec![DnfFormula::new(vec![t])]),
            Err(FormulaError::WidthExceeded { .. })
        ));
    }

    #[test]
    fn var_name_round_trip() {
        for s in ["x", "x_1", "y_2_13_4", "u_1"] {
            assert_eq!(s.parse::<VarName>().unwrap().to_string(), s);
        }
        for s in ["", "_1", "x__1", "x_a", "x1", "x_-1"] {
            assert!(s.parse::<VarName>().is_err(), "{s}");
        }
    }

    #[test]
    fn locus_parse() {
        assert_eq!("1,2,3".parse::<WeakeningLocus>().unwrap(), WeakeningLocus::new(1, 2, 3));
        assert!("1,2".parse::<WeakeningLocus>().is_err());
    }
}
