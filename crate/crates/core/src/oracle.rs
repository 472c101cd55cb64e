//! Brute-force answer-set semantics, straight from the definition.
//!
//! These routines share no code with the backdoor-based checker and exist to
//! validate it.

use crate::atoms::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::program::Program;

/// Largest `|at(P)|` accepted by [`enumerate_answer_sets`] without forcing.
pub const ORACLE_ATOM_LIMIT: usize = 20;

/// Hard limit of the bitmask representation.
const MASK_BITS: usize = 63;

#[derive(Clone, Copy)]
struct MaskRule {
    head: u64,
    pos: u64,
    neg: u64,
}

fn mask_rules(p: &Program, index: &[Option<usize>]) -> Vec<MaskRule> {
    let mask = |atoms: &[Atom]| {
        atoms.iter().fold(0u64, |acc, a| match index[a.index()] {
            Some(i) => acc | 1 << i,
            None => acc,
        })
    };
    p.rules()
        .iter()
        .map(|r| MaskRule {
            head: mask(r.head()),
            pos: mask(r.pos_body()),
            neg: mask(r.neg_body()),
        })
        .collect()
}

/// True iff no proper subset of `m` is a model of the reduct `reduct`.
fn no_smaller_model(reduct: &[MaskRule], m: u64) -> bool {
    if m == 0 {
        return true;
    }
    let mut s = (m - 1) & m;
    loop {
        if reduct.iter().all(|r| r.head & s != 0 || r.pos & !s != 0) {
            return false;
        }
        if s == 0 {
            return true;
        }
        s = (s - 1) & m;
    }
}

/// All answer sets of `p`, in ascending bitmask order over `at(p)`.
///
/// Refuses programs with more than [`ORACLE_ATOM_LIMIT`] atoms unless `force`.
pub fn enumerate_answer_sets(p: &Program, force: bool) -> Result<Vec<AtomSet>> {
    let atoms: Vec<Atom> = p.atoms_used().iter().collect();
    let limit = if force { MASK_BITS } else { ORACLE_ATOM_LIMIT };
    if atoms.len() > limit {
        return Err(Error::SizeGuard {
            what: "oracle atom count",
            size: atoms.len(),
            limit,
        });
    }
    let mut index = vec![None; p.capacity()];
    for (i, a) in atoms.iter().enumerate() {
        index[a.index()] = Some(i);
    }
    let rules = mask_rules(p, &index);
    let mut found = Vec::new();
    let mut reduct = Vec::with_capacity(rules.len());
    for m in 0u64..(1u64 << atoms.len()) {
        let is_model = rules
            .iter()
            .all(|r| r.head & m != 0 || r.neg & m != 0 || r.pos & !m != 0);
        if !is_model {
            continue;
        }
        reduct.clear();
        reduct.extend(rules.iter().filter(|r| r.neg & m == 0).copied());
        if no_smaller_model(&reduct, m) {
            found.push(
                p.set_of(
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 == 1)
                        .map(|(_, &a)| a),
                ),
            );
        }
    }
    Ok(found)
}

/// Whether `m` is a minimal model of `gl_reduct(p, m)`.
///
/// Checks the `2^|m|` subsets of `m`; errors only when `|m|` exceeds the
/// 63-bit representation.
pub fn naive_is_answer_set(p: &Program, m: &AtomSet) -> Result<bool> {
    let members: Vec<Atom> = m.iter().collect();
    if members.len() > MASK_BITS {
        return Err(Error::SizeGuard {
            what: "candidate set",
            size: members.len(),
            limit: MASK_BITS,
        });
    }
    if !p.is_model(m) {
        return Ok(false);
    }
    let mut index = vec![None; p.capacity().max(m.capacity())];
    for (i, a) in members.iter().enumerate() {
        index[a.index()] = Some(i);
    }
    // Rules whose positive body leaves M are satisfied by every subset of M.
    let reduct: Vec<MaskRule> = p
        .rules()
        .iter()
        .filter(|r| !r.neg_body().iter().any(|&a| m.contains(a)))
        .filter(|r| r.pos_body().iter().all(|&a| m.contains(a)))
        .map(|r| MaskRule {
            head: r
                .head()
                .iter()
                .filter_map(|a| index[a.index()])
                .fold(0, |acc, i| acc | 1 << i),
            pos: r
                .pos_body()
                .iter()
                .filter_map(|a| index[a.index()])
                .fold(0, |acc, i| acc | 1 << i),
            neg: 0,
        })
        .collect();
    let full = if members.is_empty() {
        0
    } else {
        u64::MAX >> (64 - members.len())
    };
    Ok(no_smaller_model(&reduct, full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn disjunctive_fact_has_two_answer_sets() {
        let p = parse_program("a | b.").unwrap();
        let all = enumerate_answer_sets(&p, false).unwrap();
        assert_eq!(
            all,
            vec![
                p.set_from_names(["a"]).unwrap(),
                p.set_from_names(["b"]).unwrap()
            ]
        );
    }

    #[test]
    fn odd_loop_has_none() {
        let p = parse_program("a :- not a.").unwrap();
        assert!(enumerate_answer_sets(&p, false).unwrap().is_empty());
    }

    #[test]
    fn empty_program_has_empty_answer_set() {
        let p = parse_program("").unwrap();
        assert_eq!(
            enumerate_answer_sets(&p, false).unwrap(),
            vec![p.empty_set()]
        );
        assert!(naive_is_answer_set(&p, &p.empty_set()).unwrap());
    }

    #[test]
    fn size_guard() {
        let text: String = (0..21).map(|i| format!("a{i} | b{i}.\n")).collect();
        let p = parse_program(&text).unwrap();
        assert!(matches!(
            enumerate_answer_sets(&p, false),
            Err(Error::SizeGuard { .. })
        ));
    }
}
