//! File-based handoff to a DIMACS solver that follows the competition
//! output convention (`s SATISFIABLE` / `s UNSATISFIABLE`, `v` model lines,
//! exit status 10 / 20).

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{CnfFormula, SatResult, SatStatus, SolverStats};
use crate::error::SolveError;
use crate::io::dimacs::{parse_solution, write_dimacs, SolverAnswer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalSolver {
    /// Splits a command line on whitespace; the instance path is appended.
    pub fn from_command(command: &str) -> Option<Self> {
        let mut words = command.split_whitespace().map(str::to_owned);
        let program = words.next()?;
        Some(ExternalSolver { program, args: words.collect() })
    }

    pub fn solve(&self, cnf: &CnfFormula, budget: Option<Duration>) -> Result<SatResult, SolveError> {
        let err = |e: std::io::Error| SolveError::External(e.to_string());
        let start = Instant::now();
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile().map_err(err)?;
        file.write_all(write_dimacs(cnf, &[]).as_bytes()).map_err(err)?;
        file.flush().map_err(err)?;

        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| SolveError::External(format!("cannot run {}: {e}", self.program)))?;
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });

        let status = loop {
            if let Some(status) = child.try_wait().map_err(err)? {
                break status;
            }
            if let Some(b) = budget {
                if start.elapsed() > b {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(SolveError::Timeout(b));
                }
            }
            thread::sleep(Duration::from_millis(5));
        };
        let output = reader.join().map_err(|_| SolveError::External("output reader panicked".into()))?.map_err(err)?;

        let answer = parse_solution(&output, cnf.nvars())
            .map_err(|e| SolveError::External(format!("unreadable answer: {e}")))?;
        let answer = match (answer, status.code()) {
            (SolverAnswer::Unknown, Some(20)) => SolverAnswer::Unsat,
            (a, _) => a,
        };
        let mut stats = SolverStats::default();
        stats.finish(start);
        match answer {
            SolverAnswer::Sat(model) => Ok(SatResult { status: SatStatus::Sat, model: Some(model), stats }),
            SolverAnswer::Unsat => Ok(SatResult { status: SatStatus::Unsat, model: None, stats }),
            SolverAnswer::Unknown => {
                Err(SolveError::External(format!("{} gave no verdict (exit status {status})", self.program)))
            }
        }
    }
}
