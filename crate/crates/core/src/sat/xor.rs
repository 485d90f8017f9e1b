//! Conjunctions of disjunctions of signed XORs over disjoint variable blocks.

use std::collections::HashSet;

use super::CnfClause;
use crate::error::{FormulaError, SolveError};
use crate::formula::{Assignment, Literal, VarName, VariableId};

/// `positive` XOR is true on odd parity of its block; negated on even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct XorAtom {
    pub positive: bool,
    /// Index into [`CdXorFormula::blocks`].
    pub block: usize,
}

impl XorAtom {
    pub fn new(positive: bool, block: usize) -> Self {
        XorAtom { positive, block }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdXorFormula {
    block_width: usize,
    names: Vec<VarName>,
    blocks: Vec<Vec<VariableId>>,
    clauses: Vec<Vec<XorAtom>>,
}

impl CdXorFormula {
    /// `names[i]` names variable `i + 1`; blocks must be pairwise disjoint
    /// and exactly `block_width` wide.
    pub fn new(
        block_width: usize,
        names: Vec<VarName>,
        blocks: Vec<Vec<VariableId>>,
        clauses: Vec<Vec<XorAtom>>,
    ) -> Result<Self, FormulaError> {
        let mut seen = HashSet::new();
        for (bi, b) in blocks.iter().enumerate() {
            if b.len() != block_width {
                return Err(FormulaError::BlockWidth { block: bi, width: block_width });
            }
            for &v in b {
                if v.index() >= names.len() {
                    return Err(FormulaError::VariableOutOfRange { id: v, nvars: names.len() });
                }
                if !seen.insert(v) {
                    return Err(FormulaError::OverlappingBlocks(v));
                }
            }
        }
        for atom in clauses.iter().flatten() {
            if atom.block >= blocks.len() {
                return Err(FormulaError::UnknownBlock(atom.block));
            }
        }
        Ok(CdXorFormula { block_width, names, blocks, clauses })
    }

    pub fn block_width(&self) -> usize {
        self.block_width
    }

    pub fn names(&self) -> &[VarName] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn blocks(&self) -> &[Vec<VariableId>] {
        &self.blocks
    }

    pub fn block(&self, atom: XorAtom) -> &[VariableId] {
        &self.blocks[atom.block]
    }

    pub fn clauses(&self) -> &[Vec<XorAtom>] {
        &self.clauses
    }

    /// `vars(G)`: variables of the blocks that some atom mentions.
    pub fn occurring_vars(&self) -> Vec<VariableId> {
        let used: HashSet<usize> = self.clauses.iter().flatten().map(|a| a.block).collect();
        let mut vars: Vec<VariableId> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| used.contains(i))
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        vars.sort();
        vars
    }

    pub fn eval_atom(&self, atom: XorAtom, a: &Assignment) -> Result<bool, FormulaError> {
        let mut parity = false;
        for &v in self.block(atom) {
            parity ^= a.value(v).ok_or(FormulaError::Unassigned(v))?;
        }
        Ok(parity == atom.positive)
    }

    pub fn eval_clause(&self, clause: usize, a: &Assignment) -> Result<bool, FormulaError> {
        for &atom in &self.clauses[clause] {
            if self.eval_atom(atom, a)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, FormulaError> {
        for ci in 0..self.clauses.len() {
            if !self.eval_clause(ci, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Copy with the atom at (`clause`, `atom`) deleted.
    pub fn without_atom(&self, clause: usize, atom: usize) -> CdXorFormula {
        let mut clauses = self.clauses.clone();
        clauses[clause].remove(atom);
        CdXorFormula { clauses, ..self.clone() }
    }
}

/// Direct CNF for "the atom over `block` evaluates to `target`": one clause
/// forbidding each block assignment of the wrong parity, enumerated in
/// ascending binary order (first block variable is the low bit).
pub fn encode_xor_atom(
    block: &[VariableId],
    positive: bool,
    target: bool,
    cap: usize,
) -> Result<Vec<CnfClause>, SolveError> {
    let width = block.len();
    if width > cap || width >= 32 {
        return Err(SolveError::XorCap { width, cap });
    }
    let parity = positive == target;
    let mut clauses = Vec::with_capacity(1 << width.saturating_sub(1));
    for bits in 0u32..1 << width {
        if (bits.count_ones() % 2 == 1) == parity {
            continue;
        }
        let lits = block.iter().enumerate().map(|(i, &v)| Literal::new(v, bits >> i & 1 == 0)).collect();
        clauses.push(CnfClause::new(lits)?);
    }
    Ok(clauses)
}
