//! The full pipeline: detect a backdoor, encode, solve, decode.

use crate::atoms::{Atom, AtomSet};
use crate::backdoor::{find_backdoor, ASSIGNMENT_LIMIT};
use crate::encoding::{
    build_query, decode_model, tseitin_cnf, CnfFormula, EncodedQuery, Mode, QuerySpec,
};
use crate::error::{Error, Result};
use crate::mincheck::is_answer_set;
use crate::program::Program;
use crate::solver::{solve, SatResult, SatStatus, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub answer: Answer,
    /// Brave/yes: an answer set containing the atom. Skeptical/no: one without it.
    pub witness: Option<AtomSet>,
    pub backdoor: AtomSet,
    pub sat: SatResult,
}

/// Smallest strong Normal-backdoor within the block-count guard.
pub fn auto_backdoor(p: &Program) -> Result<AtomSet> {
    match find_backdoor(p, ASSIGNMENT_LIMIT) {
        Some(b) => Ok(b.atoms().clone()),
        None => Err(Error::SizeGuard {
            what: "smallest backdoor",
            size: ASSIGNMENT_LIMIT + 1,
            limit: ASSIGNMENT_LIMIT,
        }),
    }
}

/// Encodes the query and converts it to CNF.
pub fn encode(p: &Program, x: &AtomSet, q: &QuerySpec) -> Result<(EncodedQuery, CnfFormula)> {
    let enc = build_query(p, x, q)?;
    let cnf = tseitin_cnf(&enc.formula, &enc.vars);
    Ok((enc, cnf))
}

/// Decides a brave or skeptical query. `x = None` detects a backdoor first.
///
/// Witness models are re-checked with the fpt answer-set test before being
/// reported; an `Unknown` solver status is passed through unchanged.
pub fn decide(
    p: &Program,
    x: Option<&AtomSet>,
    q: &QuerySpec,
    cfg: &SolverConfig,
) -> Result<Decision> {
    let x = match x {
        Some(x) => x.clone(),
        None => auto_backdoor(p)?,
    };
    let (enc, cnf) = encode(p, &x, q)?;
    let sat = solve(&cnf, cfg)?;
    let witness = match &sat.assignment {
        Some(a) => {
            let m = decode_model(a, &enc.vars, p.capacity())?;
            if !is_answer_set(p, &m, &x)? {
                return Err(Error::DecodeVerification(m.display(p.table()).to_string()));
            }
            Some(m)
        }
        None => None,
    };
    let answer = match (sat.status, q.mode) {
        (SatStatus::Unknown, _) => Answer::Unknown,
        (SatStatus::Sat, Mode::Brave) | (SatStatus::Unsat, Mode::Skeptical) => Answer::Yes,
        (SatStatus::Unsat, Mode::Brave) | (SatStatus::Sat, Mode::Skeptical) => Answer::No,
    };
    Ok(Decision {
        answer,
        witness,
        backdoor: x,
        sat,
    })
}

/// Shorthand for `decide` with a fresh query on `atom`.
pub fn decide_atom(p: &Program, atom: Atom, mode: Mode, cfg: &SolverConfig) -> Result<Answer> {
    Ok(decide(p, None, &QuerySpec::new(mode, atom), cfg)?.answer)
}
