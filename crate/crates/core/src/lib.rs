//! Minimally unsatisfiable k-DNF sets: representation, constructions,
//! satisfiability oracles, and verification of the claimed properties.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod formula;
pub mod io;
pub mod sat;
pub mod verify;

pub use error::{ConstructionError, FormulaError, ParseError, SolveError, VerifyError};
pub use formula::{Assignment, DnfFormula, DnfSet, Literal, Term, VarName, VariableId, WeakeningLocus};
