#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;

use bdnsat::{Atom, AtomSet, AtomTable, Program, Rule};

pub const MAX_ATOMS: usize = 7;

fn atoms_of(mask: u8) -> Vec<Atom> {
    (0..8).filter(|i| mask >> i & 1 == 1).map(Atom).collect()
}

fn table(n: usize) -> Arc<AtomTable> {
    let mut t = AtomTable::new();
    for i in 0..n {
        t.intern(&format!("a{i}"));
    }
    Arc::new(t)
}

/// Programs over `a0..a{n-1}` built from raw masks. Rules may be tautological
/// and atoms may be unused.
pub fn raw_program(n: usize, rules: &[(u8, u8, u8)]) -> Program {
    let limit = ((1u16 << n) - 1) as u8;
    let rules = rules
        .iter()
        .map(|&(h, p, q)| {
            Rule::new(
                atoms_of(h & limit),
                atoms_of(p & limit),
                atoms_of(q & limit),
            )
        })
        .collect();
    Program::new(table(n), rules)
}

/// Tautology-free programs: positive bodies avoid the head, negative bodies
/// avoid both. Completely empty rules are skipped.
pub fn clean_program(n: usize, rules: &[(u8, u8, u8)]) -> Program {
    let limit = ((1u16 << n) - 1) as u8;
    let rules = rules
        .iter()
        .filter_map(|&(h, p, q)| {
            let h = h & limit;
            let p = p & limit & !h;
            let q = q & limit & !p;
            (h | p | q != 0).then(|| Rule::new(atoms_of(h), atoms_of(p), atoms_of(q)))
        })
        .collect();
    Program::new(table(n), rules)
}

fn sparse_mask() -> impl Strategy<Value = u8> {
    // Mostly one or two atoms per part.
    prop_oneof![
        2 => Just(0u8),
        3 => (0..8u8).prop_map(|i| 1 << i),
        2 => (0..8u8, 0..8u8).prop_map(|(i, j)| (1 << i) | (1 << j)),
        1 => any::<u8>(),
    ]
}

pub fn rule_masks(max_rules: usize) -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
    prop::collection::vec((sparse_mask(), sparse_mask(), sparse_mask()), 0..=max_rules)
}

pub fn program() -> impl Strategy<Value = Program> {
    (1..=MAX_ATOMS, rule_masks(10)).prop_map(|(n, rules)| clean_program(n, &rules))
}

/// Every subset of `at(p)`.
pub fn subsets_of_used(p: &Program) -> Vec<AtomSet> {
    let used: Vec<Atom> = p.atoms_used().iter().collect();
    (0..1u64 << used.len())
        .map(|mask| {
            p.set_of(
                used.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &a)| a),
            )
        })
        .collect()
}

/// Answer sets straight from the definition: models of `P^M` with no model
/// strictly below. Shares nothing with the library's oracle.
pub fn answer_sets_by_definition(p: &Program) -> Vec<AtomSet> {
    let all = subsets_of_used(p);
    let reduct_model = |m: &AtomSet, s: &AtomSet| {
        p.rules().iter().all(|r| {
            r.neg_body().iter().any(|&b| m.contains(b))
                || r.head().iter().any(|&h| s.contains(h))
                || r.pos_body().iter().any(|&b| !s.contains(b))
        })
    };
    all.iter()
        .filter(|m| {
            reduct_model(m, m)
                && !all
                    .iter()
                    .any(|s| s.is_proper_subset(m) && reduct_model(m, s))
        })
        .cloned()
        .collect()
}
