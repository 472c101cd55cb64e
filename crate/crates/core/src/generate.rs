//! Seeded random programs and formulas for testing and benchmarking.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::encoding::{Formula, Var};
use crate::program::{Program, ProgramBuilder};

/// Shape limits for [`random_program`].
#[derive(Debug, Clone, Copy)]
pub struct ProgramShape {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_head: usize,
    pub max_pos: usize,
    pub max_neg: usize,
}

impl Default for ProgramShape {
    fn default() -> Self {
        ProgramShape {
            max_atoms: 7,
            max_rules: 10,
            max_head: 3,
            max_pos: 2,
            max_neg: 2,
        }
    }
}

/// A random tautology-free program over atoms `a0, a1, ...`.
///
/// Heads, positive bodies and negative bodies are drawn disjointly, so no rule
/// is tautological, and no rule is completely empty.
pub fn random_program(rng: &mut impl Rng, shape: &ProgramShape) -> Program {
    let n_atoms = rng.gen_range(1..=shape.max_atoms.max(1));
    let n_rules = rng.gen_range(1..=shape.max_rules.max(1));
    let mut b = ProgramBuilder::new();
    let atoms: Vec<_> = (0..n_atoms)
        .map(|i| b.atom(&format!("a{i}")).expect("generated names are valid"))
        .collect();
    for _ in 0..n_rules {
        let mut pool = atoms.clone();
        pool.shuffle(rng);
        // One rule in eight is a constraint.
        let h = if rng.gen_ratio(1, 8) {
            0
        } else {
            rng.gen_range(1..=shape.max_head.min(pool.len()))
        };
        let head: Vec<_> = pool.drain(..h).collect();
        let p = rng.gen_range(0..=shape.max_pos.min(pool.len()));
        let pos: Vec<_> = pool.drain(..p).collect();
        let mut n = rng.gen_range(0..=shape.max_neg.min(pool.len()));
        if head.is_empty() && pos.is_empty() && n == 0 {
            if pool.is_empty() {
                continue;
            }
            n = 1;
        }
        let neg: Vec<_> = pool.drain(..n).collect();
        b.push_rule(head, pos, neg);
    }
    b.build()
}

/// A random formula over variables `1..=num_vars` with at most `depth` levels
/// of connectives.
pub fn random_formula(rng: &mut impl Rng, num_vars: Var, depth: u32) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..20) {
            0 => Formula::Const(rng.gen()),
            _ => Formula::Var(rng.gen_range(1..=num_vars.max(1))),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::Not(Box::new(random_formula(rng, num_vars, depth - 1))),
        1 => Formula::And(children(rng, num_vars, depth - 1)),
        2 => Formula::Or(children(rng, num_vars, depth - 1)),
        3 => Formula::Implies(
            Box::new(random_formula(rng, num_vars, depth - 1)),
            Box::new(random_formula(rng, num_vars, depth - 1)),
        ),
        _ => Formula::Iff(
            Box::new(random_formula(rng, num_vars, depth - 1)),
            Box::new(random_formula(rng, num_vars, depth - 1)),
        ),
    }
}

fn children(rng: &mut impl Rng, num_vars: Var, depth: u32) -> Vec<Formula> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|_| random_formula(rng, num_vars, depth))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn programs_respect_shape() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let shape = ProgramShape::default();
        for _ in 0..200 {
            let p = random_program(&mut rng, &shape);
            assert!(p.atoms_used().len() <= shape.max_atoms);
            assert!(p.len() <= shape.max_rules);
            assert_eq!(p.ingest_report().tautologies_removed, 0);
            assert!(p.rules().iter().all(|r| r.atoms().next().is_some()));
        }
    }

    #[test]
    fn formulas_stay_in_range() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(random_formula(&mut rng, 5, 4).max_var() <= 5);
        }
    }
}
