//! Line-oriented text format for k-DNF sets and CD-XOR formulas.
//!
//! ```text
//! c kdnf format 1
//! d tarsi n=2
//! p kdnf 2 3 1
//! v 1 x_1
//! v 2 x_2
//! 1
//! 2
//! -1 | -2
//! ```
//!
//! Formula lines separate terms with `|` and literals with `&`; `T` is the
//! empty (true) term and a lone `F` a formula with no terms. CD-XOR files
//! use `p cdxor <nvars> <nblocks> <block width> <nclauses>`, one `b` line
//! per block listing its variable ids, and clause lines of signed 1-based
//! block numbers (`-3` is the negated XOR over block 3).

use std::fmt::Write as _;

use crate::constructions::FamilyDescriptor;
use crate::error::ParseError;
use crate::formula::{DnfFormula, DnfSet, Literal, Term, VarName, VariableId};
use crate::sat::{CdXorFormula, XorAtom};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdnfDocument {
    pub descriptor: Option<FamilyDescriptor>,
    pub set: DnfSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdXorDocument {
    pub descriptor: Option<FamilyDescriptor>,
    pub formula: CdXorFormula,
}

fn write_preamble(out: &mut String, descriptor: Option<&FamilyDescriptor>) {
    writeln!(out, "c kdnf format {FORMAT_VERSION}").unwrap();
    if let Some(d) = descriptor {
        writeln!(out, "d {d}").unwrap();
    }
}

fn write_names(out: &mut String, names: &[VarName]) {
    for (i, n) in names.iter().enumerate() {
        writeln!(out, "v {} {n}", i + 1).unwrap();
    }
}

pub fn serialize_kdnf(d: &DnfSet, descriptor: Option<&FamilyDescriptor>) -> String {
    let mut out = String::new();
    write_preamble(&mut out, descriptor);
    writeln!(out, "p kdnf {} {} {}", d.nvars(), d.len(), d.k()).unwrap();
    write_names(&mut out, d.names());
    for f in d.formulas() {
        if f.terms().is_empty() {
            out.push_str("F\n");
            continue;
        }
        let terms: Vec<String> = f
            .terms()
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "T".to_owned()
                } else {
                    t.literals().iter().map(ToString::to_string).collect::<Vec<_>>().join(" & ")
                }
            })
            .collect();
        out.push_str(&terms.join(" | "));
        out.push('\n');
    }
    out
}

pub fn serialize_cdxor(g: &CdXorFormula, descriptor: Option<&FamilyDescriptor>) -> String {
    let mut out = String::new();
    write_preamble(&mut out, descriptor);
    writeln!(out, "p cdxor {} {} {} {}", g.nvars(), g.blocks().len(), g.block_width(), g.clauses().len()).unwrap();
    write_names(&mut out, g.names());
    for b in g.blocks() {
        let ids: Vec<String> = b.iter().map(ToString::to_string).collect();
        writeln!(out, "b {}", ids.join(" ")).unwrap();
    }
    for c in g.clauses() {
        if c.is_empty() {
            out.push_str("F\n");
            continue;
        }
        let atoms: Vec<String> =
            c.iter().map(|a| format!("{}{}", if a.positive { "+" } else { "-" }, a.block + 1)).collect();
        out.push_str(&atoms.join(" | "));
        out.push('\n');
    }
    out
}

/// Shared header state for both document kinds.
struct Header {
    descriptor: Option<FamilyDescriptor>,
    /// Numbers following `p <kind>`.
    params: Vec<usize>,
    names: Vec<Option<VarName>>,
}

enum Line<'a> {
    Header(usize, &'a str),
    Body(usize, &'a str),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn classify(no: usize, line: &str) -> Line<'_> {
    match line.split_whitespace().next() {
        Some("c" | "d" | "p" | "v") => Line::Header(no, line),
        _ => Line::Body(no, line),
    }
}

/// Numbered body lines, in file order.
type Body<'a> = Vec<(usize, &'a str)>;

fn parse_header<'a>(text: &'a str, kind: &str, nparams: usize) -> Result<(Header, Body<'a>), ParseError> {
    let mut header = Header { descriptor: None, params: Vec::new(), names: Vec::new() };
    let mut seen_p = false;
    let mut body = Vec::new();
    for (no, line) in lines(text) {
        match classify(no, line) {
            Line::Header(no, line) => {
                let mut words = line.split_whitespace();
                let tag = words.next().unwrap();
                let rest = line[1..].trim();
                match tag {
                    "c" => {
                        let w: Vec<&str> = words.collect();
                        if let ["kdnf", "format", v] = w.as_slice() {
                            let v: u32 = v.parse().map_err(|_| ParseError::new(no, "bad format version"))?;
                            if v > FORMAT_VERSION {
                                return Err(ParseError::new(no, format!("unsupported format version {v}")));
                            }
                        }
                    }
                    "d" => {
                        if seen_p {
                            return Err(ParseError::new(no, "descriptor after problem line"));
                        }
                        header.descriptor = Some(rest.parse().map_err(|e: String| ParseError::new(no, e))?);
                    }
                    "p" => {
                        if seen_p {
                            return Err(ParseError::new(no, "duplicate problem line"));
                        }
                        seen_p = true;
                        if words.next() != Some(kind) {
                            return Err(ParseError::new(no, format!("expected `p {kind}`")));
                        }
                        header.params = words
                            .map(|w| w.parse::<usize>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| ParseError::new(no, "problem line parameters must be naturals"))?;
                        if header.params.len() != nparams {
                            return Err(ParseError::new(no, format!("`p {kind}` takes {nparams} parameters")));
                        }
                        header.names = vec![None; header.params[0]];
                    }
                    "v" => {
                        if !seen_p {
                            return Err(ParseError::new(no, "name before problem line"));
                        }
                        let w: Vec<&str> = words.collect();
                        let [id, name] = w.as_slice() else {
                            return Err(ParseError::new(no, "expected `v <id> <name>`"));
                        };
                        let id: usize = id.parse().map_err(|_| ParseError::new(no, "bad variable id"))?;
                        if id == 0 || id > header.names.len() {
                            return Err(ParseError::new(no, format!("variable id {id} out of range")));
                        }
                        if header.names[id - 1].is_some() {
                            return Err(ParseError::new(no, format!("variable {id} named twice")));
                        }
                        let name: VarName = name.parse().map_err(|e| ParseError::new(no, format!("{e}")))?;
                        header.names[id - 1] = Some(name);
                    }
                    _ => unreachable!(),
                }
            }
            Line::Body(no, line) => {
                if !seen_p {
                    return Err(ParseError::new(no, "content before problem line"));
                }
                body.push((no, line));
            }
        }
    }
    if !seen_p {
        return Err(ParseError::new(0, format!("missing `p {kind}` line")));
    }
    Ok((header, body))
}

/// Unnamed variables default to `x_<id>`.
fn resolve_names(names: Vec<Option<VarName>>) -> Vec<VarName> {
    names.into_iter().enumerate().map(|(i, n)| n.unwrap_or_else(|| VarName::new("x", &[i as u32 + 1]))).collect()
}

fn parse_signed(no: usize, tok: &str, limit: usize, what: &str) -> Result<(bool, usize), ParseError> {
    let v: i64 = tok.parse().map_err(|_| ParseError::new(no, format!("bad {what} {tok:?}")))?;
    let abs = v.unsigned_abs() as usize;
    if v == 0 || abs > limit {
        return Err(ParseError::new(no, format!("{what} {v} out of range")));
    }
    Ok((v > 0, abs))
}

pub fn parse_kdnf(text: &str) -> Result<KdnfDocument, ParseError> {
    let (header, body) = parse_header(text, "kdnf", 3)?;
    let (nvars, nformulas, k) = (header.params[0], header.params[1], header.params[2]);
    if body.len() != nformulas {
        return Err(ParseError::new(
            body.last().map_or(0, |b| b.0),
            format!("expected {nformulas} formulas, found {}", body.len()),
        ));
    }
    let mut formulas = Vec::with_capacity(nformulas);
    for (no, line) in body {
        if line == "F" {
            formulas.push(DnfFormula::new(Vec::new()));
            continue;
        }
        let mut terms = Vec::new();
        for t in line.split('|') {
            let t = t.trim();
            if t == "T" {
                terms.push(Term::empty());
                continue;
            }
            let lits = t
                .split('&')
                .map(|tok| {
                    let (positive, id) = parse_signed(no, tok.trim(), nvars, "literal")?;
                    Ok(Literal::new(VariableId::new(id as u32), positive))
                })
                .collect::<Result<Vec<_>, ParseError>>()?;
            let term = Term::new(lits).map_err(|e| ParseError::new(no, e.to_string()))?;
            if term.len() > k {
                return Err(ParseError::new(no, format!("term of size {} exceeds k = {k}", term.len())));
            }
            terms.push(term);
        }
        formulas.push(DnfFormula::new(terms));
    }
    let set = DnfSet::new(k, resolve_names(header.names), formulas).map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(KdnfDocument { descriptor: header.descriptor, set })
}

pub fn parse_cdxor(text: &str) -> Result<CdXorDocument, ParseError> {
    let (header, body) = parse_header(text, "cdxor", 4)?;
    let (nvars, nblocks, width, nclauses) = (header.params[0], header.params[1], header.params[2], header.params[3]);
    let mut blocks = Vec::with_capacity(nblocks);
    let mut clauses = Vec::with_capacity(nclauses);
    for (no, line) in body {
        if let Some(rest) = line.strip_prefix("b ") {
            if !clauses.is_empty() {
                return Err(ParseError::new(no, "block line after clause lines"));
            }
            let ids = rest
                .split_whitespace()
                .map(|tok| match parse_signed(no, tok, nvars, "variable id")? {
                    (true, id) => Ok(VariableId::new(id as u32)),
                    (false, _) => Err(ParseError::new(no, "block ids must be positive")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(ids);
            continue;
        }
        if line == "F" {
            clauses.push(Vec::new());
            continue;
        }
        let atoms = line
            .split('|')
            .map(|tok| {
                let tok = tok.trim();
                let (positive, b) = parse_signed(no, tok.trim_start_matches('+'), nblocks, "block")?;
                Ok(XorAtom::new(positive, b - 1))
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        clauses.push(atoms);
    }
    if blocks.len() != nblocks {
        return Err(ParseError::new(0, format!("expected {nblocks} blocks, found {}", blocks.len())));
    }
    if clauses.len() != nclauses {
        return Err(ParseError::new(0, format!("expected {nclauses} clauses, found {}", clauses.len())));
    }
    let formula = CdXorFormula::new(width, resolve_names(header.names), blocks, clauses)
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(CdXorDocument { descriptor: header.descriptor, formula })
}
