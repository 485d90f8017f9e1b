//! Text formats: KDNF / CD-XOR documents, DIMACS, bound tables.

pub mod dimacs;
pub mod kdnf;
pub mod table;

pub use dimacs::{export_dimacs, parse_dimacs, parse_solution, write_dimacs, write_solution, SolverAnswer};
pub use kdnf::{parse_cdxor, parse_kdnf, serialize_cdxor, serialize_kdnf, CdXorDocument, KdnfDocument};
pub use table::{emit_bounds_table, TableFamily, TableFormat, TableOptions};
