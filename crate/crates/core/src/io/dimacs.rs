//! DIMACS CNF output for clausified sets, DIMACS input, and the
//! competition solution-line convention.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::formula::{Assignment, DnfSet, Literal};
use crate::sat::{clausify, CnfClause, CnfFormula};

/// `comments` are emitted as `c` lines ahead of the problem line.
pub fn write_dimacs(cnf: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p cnf {} {}", cnf.nvars(), cnf.clauses().len()).unwrap();
    for clause in cnf.clauses() {
        for lit in clause.literals() {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Clausifies `d` and writes it with the extension-variable map as comments.
pub fn export_dimacs(d: &DnfSet) -> String {
    let c = clausify(d);
    let mut comments = vec![format!(
        "kdnf clausification: {} original variables, {} extension variables",
        c.original_vars,
        c.extensions.len()
    )];
    for e in &c.extensions {
        comments.push(format!("ext {} formula {} term {}", e.var, e.formula, e.term));
    }
    write_dimacs(&c.cnf, &comments)
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        last_line = no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(no, "duplicate problem line"));
            }
            let w: Vec<&str> = line.split_whitespace().collect();
            let ["p", "cnf", v, c] = w.as_slice() else {
                return Err(ParseError::new(no, "expected `p cnf <vars> <clauses>`"));
            };
            let v = v.parse().map_err(|_| ParseError::new(no, "bad variable count"))?;
            let c = c.parse().map_err(|_| ParseError::new(no, "bad clause count"))?;
            header = Some((v, c));
            continue;
        }
        let Some((nvars, _)) = header else {
            return Err(ParseError::new(no, "clause before problem line"));
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| ParseError::new(no, format!("bad literal {tok:?}")))?;
            if v == 0 {
                let clause =
                    CnfClause::new(std::mem::take(&mut current)).map_err(|e| ParseError::new(no, e.to_string()))?;
                clauses.push(clause);
            } else if v.unsigned_abs() as usize > nvars {
                return Err(ParseError::new(no, format!("literal {v} exceeds {nvars} variables")));
            } else {
                current.push(Literal::from_signed(v));
            }
        }
    }
    let Some((nvars, nclauses)) = header else {
        return Err(ParseError::new(0, "missing problem line"));
    };
    if !current.is_empty() {
        return Err(ParseError::new(last_line, "unterminated clause"));
    }
    if clauses.len() != nclauses {
        return Err(ParseError::new(last_line, format!("header declares {nclauses} clauses, found {}", clauses.len())));
    }
    Ok(CnfFormula::new(nvars, clauses))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat(Assignment),
    Unsat,
    Unknown,
}

/// Reads `s` and `v` lines; unmentioned variables default to false.
pub fn parse_solution(text: &str, nvars: usize) -> Result<SolverAnswer, ParseError> {
    let mut status = None;
    let mut values = vec![false; nvars];
    let mut saw_values = false;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => true,
                "UNSATISFIABLE" => false,
                "UNKNOWN" => return Ok(SolverAnswer::Unknown),
                other => return Err(ParseError::new(no, format!("unknown status {other:?}"))),
            });
        } else if let Some(rest) = line.strip_prefix("v ") {
            saw_values = true;
            for tok in rest.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| ParseError::new(no, format!("bad literal {tok:?}")))?;
                let idx = v.unsigned_abs() as usize;
                if v != 0 && idx <= nvars {
                    values[idx - 1] = v > 0;
                }
            }
        }
    }
    match status {
        Some(true) if saw_values => Ok(SolverAnswer::Sat(Assignment::from_values(values))),
        Some(true) => Err(ParseError::new(0, "satisfiable answer without a model")),
        Some(false) => Ok(SolverAnswer::Unsat),
        None => Ok(SolverAnswer::Unknown),
    }
}

/// Answer in the convention [`parse_solution`] reads.
pub fn write_solution(model: Option<&Assignment>) -> String {
    match model {
        None => "s UNSATISFIABLE\n".to_owned(),
        Some(a) => {
            let mut out = String::from("s SATISFIABLE\nv");
            for (i, &v) in a.values().iter().enumerate() {
                let id = i as i64 + 1;
                write!(out, " {}", if v { id } else { -id }).unwrap();
            }
            out.push_str(" 0\n");
            out
        }
    }
}
