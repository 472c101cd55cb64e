//! Running a SAT-competition style solver as a child process.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::encoding::{emit_dimacs, CnfFormula};
use crate::solver::{SatStatus, SolverError};

/// What the child process reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOutput {
    pub status: SatStatus,
    pub assignment: Option<Vec<bool>>,
    pub diagnostic: Option<String>,
}

/// Parses `s` / `v` lines; exit codes 10 and 20 stand in for a missing status line.
pub fn parse_solver_output(
    stdout: &str,
    exit_code: Option<i32>,
    num_vars: u32,
) -> Result<SolverOutput, SolverError> {
    let mut status = None;
    let mut values: Vec<Option<bool>> = vec![None; num_vars as usize];
    let mut saw_values = false;
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => SatStatus::Sat,
                "UNSATISFIABLE" => SatStatus::Unsat,
                "UNKNOWN" | "INDETERMINATE" => SatStatus::Unknown,
                other => {
                    return Err(SolverError::Unparsable(format!(
                        "unknown status line `s {other}`"
                    )))
                }
            });
        } else if let Some(rest) = line.strip_prefix('v') {
            saw_values = true;
            for tok in rest.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| {
                    SolverError::Unparsable(format!("bad literal `{tok}` in value line"))
                })?;
                if lit == 0 {
                    continue;
                }
                let var = lit.unsigned_abs() as usize;
                if var > num_vars as usize {
                    return Err(SolverError::Unparsable(format!(
                        "literal {lit} beyond {num_vars} variables"
                    )));
                }
                values[var - 1] = Some(lit > 0);
            }
        }
    }
    let status = match (status, exit_code) {
        (Some(s), _) => s,
        (None, Some(10)) => SatStatus::Sat,
        (None, Some(20)) => SatStatus::Unsat,
        (None, code) => {
            return Ok(SolverOutput {
                status: SatStatus::Unknown,
                assignment: None,
                diagnostic: Some(format!("no status line; exit code {code:?}")),
            })
        }
    };
    let assignment = match status {
        SatStatus::Sat => {
            if !saw_values && num_vars > 0 {
                return Err(SolverError::Unparsable(
                    "satisfiable but no value lines".into(),
                ));
            }
            // Variables the solver left out are set to false.
            Some(values.into_iter().map(|v| v.unwrap_or(false)).collect())
        }
        _ => None,
    };
    Ok(SolverOutput {
        status,
        assignment,
        diagnostic: None,
    })
}

/// Writes `cnf` to a fresh temporary file and runs `<exe> <file>`.
pub fn run_external(
    exe: &Path,
    cnf: &CnfFormula,
    timeout: Duration,
) -> Result<SolverOutput, SolverError> {
    let mut file = tempfile::Builder::new()
        .prefix("bdnsat-")
        .suffix(".cnf")
        .tempfile()
        .map_err(|e| SolverError::Io(e.to_string()))?;
    {
        let mut w = std::io::BufWriter::new(file.as_file_mut());
        emit_dimacs(cnf, &[], &mut w).map_err(|e| SolverError::Io(e.to_string()))?;
        w.flush().map_err(|e| SolverError::Io(e.to_string()))?;
    }
    let mut child = match Command::new(exe)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(child) => child,
        Err(e) => {
            return Ok(SolverOutput {
                status: SatStatus::Unknown,
                assignment: None,
                diagnostic: Some(format!("failed to start {}: {e}", exe.display())),
            })
        }
    };
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });
    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return Err(SolverError::Io(e.to_string())),
        }
    };
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    let Some(status) = status else {
        return Ok(SolverOutput {
            status: SatStatus::Unknown,
            assignment: None,
            diagnostic: Some(format!("timed out after {:.1}s", timeout.as_secs_f64())),
        });
    };
    let code = status.code();
    let mut parsed = parse_solver_output(&out, code, cnf.num_vars)?;
    if parsed.status == SatStatus::Unknown {
        let tail: String = err.lines().last().unwrap_or("").chars().take(200).collect();
        parsed.diagnostic = Some(match parsed.diagnostic {
            Some(d) if !tail.is_empty() => format!("{d}; stderr: {tail}"),
            Some(d) => d,
            None => format!("solver reported unknown (exit code {code:?})"),
        });
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn competition_output() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        let parsed = parse_solver_output(out, Some(10), 3).unwrap();
        assert_eq!(parsed.status, SatStatus::Sat);
        assert_eq!(parsed.assignment, Some(vec![true, false, true]));
    }

    #[test]
    fn missing_values_default_to_false() {
        let parsed = parse_solver_output("s SATISFIABLE\nv 2 0\n", None, 3).unwrap();
        assert_eq!(parsed.assignment, Some(vec![false, true, false]));
    }

    #[test]
    fn exit_codes_without_status_line() {
        assert_eq!(
            parse_solver_output("", Some(20), 2).unwrap().status,
            SatStatus::Unsat
        );
        assert_eq!(
            parse_solver_output("v -1 0\n", Some(10), 1).unwrap().status,
            SatStatus::Sat
        );
        assert_eq!(
            parse_solver_output("", Some(1), 1).unwrap().status,
            SatStatus::Unknown
        );
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(parse_solver_output("s MAYBE\n", None, 1).is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv x 0\n", None, 1).is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 7 0\n", None, 1).is_err());
        assert!(parse_solver_output("s SATISFIABLE\n", None, 1).is_err());
    }
}
