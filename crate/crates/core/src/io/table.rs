//! CSV / markdown tables of the exact bound expressions.

use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::bounds::{lower_bound_expr, tarsi_bound, upper_bound, xor_bound};
use crate::constructions::{min_unsat_set_with, weight_gadget, xor_implication_pair_with, V1Range, DEFAULT_TERM_CAP};
use crate::error::ConstructionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(format!("unknown table format {other:?} (expected csv or markdown)")),
        }
    }
}

/// Family whose generated sizes are appended to each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFamily {
    MinUnsat,
    WeightGadget,
    XorPair,
}

impl FromStr for TableFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-unsat" | "min_unsat" => Ok(TableFamily::MinUnsat),
            "weight-gadget" | "weight_gadget" => Ok(TableFamily::WeightGadget),
            "xor-pair" | "xor_pair" => Ok(TableFamily::XorPair),
            other => Err(format!("no size columns for family {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TableOptions {
    pub xor_column: bool,
    pub family: Option<TableFamily>,
    /// Term cap for generated families; larger cells print `skipped`.
    pub term_cap: Option<usize>,
}

fn family_cells(family: TableFamily, k: usize, m: usize, cap: usize) -> [String; 2] {
    let sizes: Result<(usize, usize), ConstructionError> = match family {
        TableFamily::MinUnsat => {
            min_unsat_set_with(m, k, m * k.saturating_sub(1), V1Range::default(), cap).map(|d| (d.len(), d.nvars()))
        }
        TableFamily::WeightGadget => weight_gadget(m, k).map(|d| (d.len(), d.nvars())),
        TableFamily::XorPair => {
            xor_implication_pair_with(m, k, V1Range::default(), cap).map(|(d, g)| (d.len(), g.occurring_vars().len()))
        }
    };
    match sizes {
        Ok((f, v)) => [f.to_string(), v.to_string()],
        Err(ConstructionError::TooLarge { .. }) => ["skipped".into(), "skipped".into()],
        Err(_) => ["-".into(), "-".into()],
    }
}

/// One row per `(k, m)`, `k` outer. `m` is the formula count in the bound
/// columns and the generator parameter in the family columns.
pub fn emit_bounds_table(
    ks: RangeInclusive<usize>,
    ms: RangeInclusive<usize>,
    options: TableOptions,
    format: TableFormat,
) -> Result<String, String> {
    if ks.is_empty() || ms.is_empty() {
        return Err("bounds table ranges must be nonempty".into());
    }
    if *ks.start() == 0 {
        return Err("k must be at least 1".into());
    }
    let mut header: Vec<&str> = vec!["k", "m", "tarsi", "upper", "lower"];
    if options.xor_column {
        header.push("xor_bound");
    }
    match options.family {
        Some(TableFamily::MinUnsat) => header.extend(["min_unsat_formulas", "min_unsat_vars"]),
        Some(TableFamily::WeightGadget) => header.extend(["weight_gadget_formulas", "weight_gadget_vars"]),
        Some(TableFamily::XorPair) => header.extend(["xor_pair_formulas", "xor_pair_g_vars"]),
        None => {}
    }
    let cap = options.term_cap.unwrap_or(DEFAULT_TERM_CAP);

    let mut rows: Vec<Vec<String>> = Vec::new();
    for k in ks {
        for m in ms.clone() {
            let mut row = vec![
                k.to_string(),
                m.to_string(),
                tarsi_bound(m).to_string(),
                upper_bound(k, m).to_string(),
                lower_bound_expr(k, m).to_string(),
            ];
            if options.xor_column {
                row.push(xor_bound(k, m).to_string());
            }
            if let Some(f) = options.family {
                row.extend(family_cells(f, k, m, cap));
            }
            rows.push(row);
        }
    }

    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in rows {
                out.push_str(&format!("| {} |\n", r.join(" | ")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_rows(text: &str) -> Vec<Vec<String>> {
        text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
    }

    #[test]
    fn spot_rows() {
        let t = emit_bounds_table(2..=2, 8..=8, TableOptions::default(), TableFormat::Csv).unwrap();
        assert_eq!(csv_rows(&t), vec![vec!["2", "8", "7", "4096", "1"]]);
        let t = emit_bounds_table(1..=1, 5..=5, TableOptions::default(), TableFormat::Csv).unwrap();
        assert_eq!(csv_rows(&t)[0][2], "4");
    }

    #[test]
    fn family_columns() {
        let opts = TableOptions { family: Some(TableFamily::MinUnsat), ..TableOptions::default() };
        let t = emit_bounds_table(1..=2, 2..=2, opts, TableFormat::Csv).unwrap();
        let rows = csv_rows(&t);
        assert_eq!(&rows[0][5..], ["-", "-"]);
        assert_eq!(&rows[1][5..], ["8", "10"]);
    }

    #[test]
    fn grid_and_markdown() {
        let opts = TableOptions { xor_column: true, ..TableOptions::default() };
        let t = emit_bounds_table(2..=4, 2..=6, opts, TableFormat::Csv).unwrap();
        assert_eq!(csv_rows(&t).len(), 15);
        assert!(t.starts_with("k,m,tarsi,upper,lower,xor_bound\n"));
        let md = emit_bounds_table(2..=2, 2..=2, opts, TableFormat::Markdown).unwrap();
        assert_eq!(md.lines().count(), 3);
        assert!(md.lines().nth(2).unwrap().contains("3/16"));
    }

    #[test]
    fn empty_range_rejected() {
        #[allow(clippy::reversed_empty_ranges)]
        let r = emit_bounds_table(3..=2, 2..=2, TableOptions::default(), TableFormat::Csv);
        assert!(r.is_err());
    }
}
