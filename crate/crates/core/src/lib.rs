//! Brave and skeptical reasoning for ground disjunctive answer-set programs.
//!
//! A small strong Normal-backdoor is found through a vertex cover of the head
//! dependency graph, and the query is compiled into one SAT instance whose
//! size grows with `2^k` for a backdoor of size `k`.

pub mod atoms;
pub mod backdoor;
pub mod encoding;
pub mod error;
pub mod generate;
pub mod mincheck;
pub mod oracle;
pub mod parse;
pub mod program;
pub mod reasoning;
pub mod semantics;
pub mod solver;

pub use atoms::{Atom, AtomSet, AtomTable};
pub use error::{Error, Result};
pub use parse::parse_program;
pub use program::{Program, ProgramBuilder, Rule};
