//! SAT back ends: an external solver process or the built-in DPLL.

pub mod dpll;
pub mod external;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::encoding::CnfFormula;

/// Environment variable naming an external solver executable.
pub const SOLVER_ENV: &str = "BDNSAT_SOLVER";

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("unparsable solver output: {0}")]
    Unparsable(String),
    #[error("solver executable `{0}` not found")]
    MissingExecutable(String),
    #[error("solver returned an assignment that violates clause {0}")]
    InvalidModel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatStats {
    pub wall_time: Duration,
    pub solver: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub status: SatStatus,
    /// Present iff `status` is `Sat`; entry `v - 1` is the value of variable `v`.
    pub assignment: Option<Vec<bool>>,
    pub stats: SatStats,
    /// Why the status is `Unknown`, when it is.
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverMode {
    Internal,
    External(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub mode: SolverMode,
    pub timeout: Duration,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::internal()
    }
}

impl SolverConfig {
    pub fn internal() -> Self {
        SolverConfig {
            mode: SolverMode::Internal,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn external(path: impl Into<PathBuf>) -> Self {
        SolverConfig {
            mode: SolverMode::External(path.into()),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    /// An explicit path wins, then `BDNSAT_SOLVER`, then the built-in solver.
    pub fn from_env(explicit: Option<PathBuf>) -> Self {
        match explicit.or_else(|| {
            std::env::var_os(SOLVER_ENV)
                .filter(|s| !s.is_empty())
                .map(PathBuf::from)
        }) {
            Some(path) => SolverConfig::external(path),
            None => SolverConfig::internal(),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

/// Resolves a bare executable name through `PATH`.
fn resolve_executable(path: &PathBuf) -> Option<PathBuf> {
    if path.components().count() > 1 || path.is_absolute() {
        return path.is_file().then(|| path.clone());
    }
    if path.is_file() {
        return Some(path.clone());
    }
    std::env::var_os("PATH").and_then(|paths| {
        std::env::split_paths(&paths)
            .map(|dir| dir.join(path))
            .find(|candidate| candidate.is_file())
    })
}

/// Solves `cnf` with the configured back end.
///
/// Timeouts and crashed processes come back as `Unknown` with a diagnostic.
/// Every returned model is checked against all clauses.
pub fn solve(cnf: &CnfFormula, cfg: &SolverConfig) -> Result<SatResult, SolverError> {
    let start = Instant::now();
    let (status, assignment, diagnostic, solver) = match &cfg.mode {
        SolverMode::Internal => {
            let deadline = start.checked_add(cfg.timeout);
            match dpll::solve_dpll(cnf.num_vars, &cnf.clauses, deadline) {
                dpll::DpllOutcome::Sat(a) => {
                    (SatStatus::Sat, Some(a), None, "internal-dpll".to_owned())
                }
                dpll::DpllOutcome::Unsat => {
                    (SatStatus::Unsat, None, None, "internal-dpll".to_owned())
                }
                dpll::DpllOutcome::Interrupted => (
                    SatStatus::Unknown,
                    None,
                    Some(format!("timed out after {:.1}s", cfg.timeout.as_secs_f64())),
                    "internal-dpll".to_owned(),
                ),
            }
        }
        SolverMode::External(path) => {
            let exe = resolve_executable(path)
                .ok_or_else(|| SolverError::MissingExecutable(path.display().to_string()))?;
            let out = external::run_external(&exe, cnf, cfg.timeout)?;
            (
                out.status,
                out.assignment,
                out.diagnostic,
                exe.display().to_string(),
            )
        }
    };
    if let Some(a) = &assignment {
        if let Some(bad) = cnf.clauses.iter().position(|c| {
            !c.iter().any(|&l| {
                a.get(l.unsigned_abs() as usize - 1)
                    .copied()
                    .unwrap_or(false)
                    == (l > 0)
            })
        }) {
            return Err(SolverError::InvalidModel(bad));
        }
    }
    Ok(SatResult {
        status,
        assignment,
        stats: SatStats {
            wall_time: start.elapsed(),
            solver,
        },
        diagnostic,
    })
}
