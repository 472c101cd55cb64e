//! Answer-set checking in `O(2^k n)` time given a strong Normal-backdoor of
//! size `k`.
//!
//! For each subset `X1` of the backdoor, MinCheck decides whether some model
//! `M'` of `P^M` with `M' ∩ X = X1` lies strictly below `M`; `M` is an answer
//! set iff every subset is cleared.

use std::fmt;

use crate::atoms::{Atom, AtomSet};
use crate::backdoor::{verify_strong_backdoor, ASSIGNMENT_LIMIT};
use crate::error::{Error, Result};
use crate::program::{Program, Rule};
use crate::semantics::{gl_reduct, least_model};

/// The program `P_{X1⊆X}` with the sets it was built from.
#[derive(Debug, Clone)]
pub struct RestrictedProgram {
    pub base: Program,
    pub x: AtomSet,
    pub x1: AtomSet,
}

/// Builds `P_{X1⊆X}`: drops rules whose head meets `x1`, then removes `x`
/// from the remaining heads and `x1` from the remaining positive bodies.
/// Negative bodies are left alone.
pub fn restrict_program(p: &Program, x: &AtomSet, x1: &AtomSet) -> Result<RestrictedProgram> {
    if !x1.is_subset(x) {
        return Err(Error::NotInBackdoor);
    }
    let rules = p
        .rules()
        .iter()
        .filter(|r| !r.head().iter().any(|&a| x1.contains(a)))
        .map(|r| {
            Rule::new(
                r.head()
                    .iter()
                    .copied()
                    .filter(|&a| !x.contains(a))
                    .collect(),
                r.pos_body()
                    .iter()
                    .copied()
                    .filter(|&a| !x1.contains(a))
                    .collect(),
                r.neg_body().to_vec(),
            )
        })
        .collect();
    Ok(RestrictedProgram {
        base: p.derive(rules),
        x: x.clone(),
        x1: x1.clone(),
    })
}

/// Which of the step-4 conditions held for a subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Conditions {
    /// The least model violates a constraint of the restricted reduct.
    pub a: bool,
    /// The least model is not inside `M \ X`.
    pub b: bool,
    /// `L ∪ X1` is not a proper subset of `M`.
    pub c: bool,
    /// `L ∪ X1` is not a model of `P^M`.
    pub d: bool,
}

impl Conditions {
    pub fn any(&self) -> bool {
        self.a || self.b || self.c || self.d
    }
}

impl fmt::Display for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.a, "a"), (self.b, "b"), (self.c, "c"), (self.d, "d")]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

/// Why MinCheck answered the way it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinCheckOutcome {
    /// Step 1: `X1 ⊄ M`.
    NotContained,
    /// Steps 2-5, with the least model `L` and every condition evaluated.
    Evaluated {
        least_model: AtomSet,
        conditions: Conditions,
    },
}

impl MinCheckOutcome {
    pub fn passed(&self) -> bool {
        match self {
            MinCheckOutcome::NotContained => true,
            MinCheckOutcome::Evaluated { conditions, .. } => conditions.any(),
        }
    }
}

/// MinCheck(X1) for the candidate `m`.
///
/// `m` must be a model of `P^M` and `x` a strong Normal-backdoor of `p`.
pub fn mincheck(p: &Program, m: &AtomSet, x: &AtomSet, x1: &AtomSet) -> Result<MinCheckOutcome> {
    if !x1.is_subset(x) {
        return Err(Error::NotInBackdoor);
    }
    let reduct = gl_reduct(p, m);
    if !reduct.is_model(m) {
        return Err(Error::NotAModel);
    }
    mincheck_on_reduct(&reduct, m, x, x1)
}

fn mincheck_on_reduct(
    reduct: &Program,
    m: &AtomSet,
    x: &AtomSet,
    x1: &AtomSet,
) -> Result<MinCheckOutcome> {
    if !x1.is_subset(m) {
        return Ok(MinCheckOutcome::NotContained);
    }
    // Restriction never looks at negative bodies, so it commutes with the reduct.
    let restricted = restrict_program(reduct, x, x1)?.base;
    if !restricted.flags().horn {
        return Err(Error::NotABackdoor);
    }
    let lm = least_model(&restricted)?;
    let a = restricted
        .rules()
        .iter()
        .filter(|r| r.is_constraint())
        .any(|r| !r.is_satisfied_by(&lm));
    let b = !lm.is_subset(&m.difference(x));
    let lx1 = lm.union(x1);
    let c = lx1 == *m || !lx1.is_subset(m);
    let d = !reduct.is_model(&lx1);
    Ok(MinCheckOutcome::Evaluated {
        least_model: lm,
        conditions: Conditions { a, b, c, d },
    })
}

/// Per-subset record of an answer-set check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetReport {
    /// Binary-counter index: bit `i` selects the `i`-th backdoor atom by id.
    pub index: u64,
    pub subset: AtomSet,
    pub outcome: MinCheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSetCheck {
    pub is_model: bool,
    pub is_answer_set: bool,
    /// Subsets examined, in index order; empty when `m` is not a model.
    pub subsets: Vec<SubsetReport>,
}

impl AnswerSetCheck {
    /// The smallest subset index for which MinCheck failed.
    pub fn first_failure(&self) -> Option<&SubsetReport> {
        self.subsets.iter().find(|s| !s.outcome.passed())
    }
}

/// Subset `index` of `atoms` in binary-counter order.
pub fn subset_by_index(capacity: usize, atoms: &[Atom], index: u64) -> AtomSet {
    AtomSet::from_atoms(
        capacity,
        atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| index >> i & 1 == 1)
            .map(|(_, &a)| a),
    )
}

/// Decides whether `m` is an answer set of `p` using the backdoor `x`.
///
/// Every one of the `2^|x ∩ at(p)|` subsets is examined, even after a failure,
/// so the report is the same whatever order the subsets are run in.
pub fn check_answer_set(p: &Program, m: &AtomSet, x: &AtomSet) -> Result<AnswerSetCheck> {
    let x = x.intersection(&p.atoms_used());
    let atoms: Vec<Atom> = x.iter().collect();
    if atoms.len() > ASSIGNMENT_LIMIT {
        return Err(Error::SizeGuard {
            what: "backdoor",
            size: atoms.len(),
            limit: ASSIGNMENT_LIMIT,
        });
    }
    if !verify_strong_backdoor(p, &x) {
        return Err(Error::NotABackdoor);
    }
    let reduct = gl_reduct(p, m);
    if !reduct.is_model(m) {
        return Ok(AnswerSetCheck {
            is_model: false,
            is_answer_set: false,
            subsets: Vec::new(),
        });
    }
    let subsets = (0..1u64 << atoms.len())
        .map(|index| {
            let subset = subset_by_index(p.capacity(), &atoms, index);
            let outcome = mincheck_on_reduct(&reduct, m, &x, &subset)?;
            Ok(SubsetReport {
                index,
                subset,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let is_answer_set = subsets.iter().all(|s| s.outcome.passed());
    Ok(AnswerSetCheck {
        is_model: true,
        is_answer_set,
        subsets,
    })
}

/// `true` iff `m` is an answer set of `p`; see [`check_answer_set`].
pub fn is_answer_set(p: &Program, m: &AtomSet, x: &AtomSet) -> Result<bool> {
    check_answer_set(p, m, x).map(|c| c.is_answer_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn empty_restriction_is_identity() {
        let p = parse_program("a | b :- c, not d. c.").unwrap();
        let e = p.empty_set();
        assert_eq!(restrict_program(&p, &e, &e).unwrap().base, p);
    }

    #[test]
    fn subset_outside_backdoor_is_rejected() {
        let p = parse_program("a | b.").unwrap();
        let x = p.set_from_names(["a"]).unwrap();
        let x1 = p.set_from_names(["b"]).unwrap();
        assert!(matches!(
            restrict_program(&p, &x, &x1),
            Err(Error::NotInBackdoor)
        ));
        let m = p.set_from_names(["a"]).unwrap();
        assert!(matches!(
            mincheck(&p, &m, &x, &x1),
            Err(Error::NotInBackdoor)
        ));
    }

    #[test]
    fn non_model_is_rejected_by_mincheck() {
        let p = parse_program("a | b.").unwrap();
        let x = p.set_from_names(["a"]).unwrap();
        assert!(matches!(
            mincheck(&p, &p.empty_set(), &x, &p.empty_set()),
            Err(Error::NotAModel)
        ));
        let check = check_answer_set(&p, &p.empty_set(), &x).unwrap();
        assert!(!check.is_model && !check.is_answer_set);
    }

    #[test]
    fn non_backdoor_is_rejected() {
        let p = parse_program("a | b.").unwrap();
        let m = p.set_from_names(["a"]).unwrap();
        assert!(matches!(
            is_answer_set(&p, &m, &p.empty_set()),
            Err(Error::NotABackdoor)
        ));
    }

    #[test]
    fn disjunctive_fact() {
        let p = parse_program("a | b.").unwrap();
        let x = p.set_from_names(["b"]).unwrap();
        for (names, expected) in [(&["a"][..], true), (&["b"], true), (&["a", "b"], false)] {
            let m = p.set_from_names(names.iter().copied()).unwrap();
            assert_eq!(is_answer_set(&p, &m, &x).unwrap(), expected, "{names:?}");
        }
    }
}
