mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bdnsat::backdoor::find_backdoor;
use bdnsat::encoding::{
    build_f_lm_block, build_f_min_block, build_query, decode_model, dimacs_string, tseitin_cnf,
    Formula, Mode, QuerySpec, VarRole, VarTable,
};
use bdnsat::generate::random_formula;
use bdnsat::mincheck::{mincheck, subset_by_index};
use bdnsat::oracle::enumerate_answer_sets;
use bdnsat::semantics::{gl_reduct, least_model};
use bdnsat::solver::dpll::{solve_dpll, DpllOutcome};
use bdnsat::{Atom, AtomSet, Program};

use common::*;

fn sat(num_vars: u32, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    match solve_dpll(num_vars, clauses, None) {
        DpllOutcome::Sat(a) => {
            assert!(clauses.iter().all(|c| c
                .iter()
                .any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0))));
            Some(a)
        }
        DpllOutcome::Unsat => None,
        DpllOutcome::Interrupted => unreachable!("no deadline"),
    }
}

fn truth_table_sat(f: &Formula, n: u32) -> bool {
    (0..1u32 << n).any(|mask| f.eval(&|v| mask >> (v - 1) & 1 == 1))
}

/// Solves `f` with the v-vars pinned to `m`; returns all variable values.
fn pinned(f: &Formula, vt: &VarTable, m: &AtomSet) -> Option<Vec<bool>> {
    let mut cnf = tseitin_cnf(f, vt);
    for &a in vt.atoms() {
        let v = vt.v(a) as i32;
        cnf.push_unit(if m.contains(a) { v } else { -v });
    }
    sat(cnf.num_vars, &cnf.clauses)
}

fn top_layer(values: &[bool], vt: &VarTable, block: u64, p: &Program) -> AtomSet {
    p.set_of(
        vt.atoms()
            .iter()
            .copied()
            .filter(|&a| values[vt.u(block, vt.layers(), a) as usize - 1]),
    )
}

fn formula_strategy() -> impl Strategy<Value = (Formula, u32)> {
    (any::<u64>(), 1..=12u32, 1..=5u32).prop_map(|(seed, n, depth)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_formula(&mut rng, n, depth), n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn tseitin_is_equisatisfiable((f, n) in formula_strategy()) {
        let cnf = tseitin_cnf(&f, &VarTable::plain(n));
        let model = sat(cnf.num_vars, &cnf.clauses);
        prop_assert_eq!(model.is_some(), truth_table_sat(&f, n));
        if let Some(a) = model {
            prop_assert!(f.eval(&|v| a[v as usize - 1]));
        }
    }

    #[test]
    fn every_model_extends_to_cnf((f, n) in formula_strategy(), mask in any::<u32>()) {
        let value = |v: u32| mask >> (v - 1) & 1 == 1;
        if f.eval(&value) {
            let mut cnf = tseitin_cnf(&f, &VarTable::plain(n));
            for v in 1..=n {
                cnf.push_unit(if value(v) { v as i32 } else { -(v as i32) });
            }
            prop_assert!(sat(cnf.num_vars, &cnf.clauses).is_some());
        }
    }

    #[test]
    fn dpll_matches_truth_table(n in 1..=15u32, clauses in prop::collection::vec(prop::collection::vec((1..=15i32, any::<bool>()), 3), 0..70)) {
        let clauses: Vec<Vec<i32>> = clauses
            .into_iter()
            .map(|c| c.into_iter().map(|(v, pos)| {
                let v = (v - 1) % n as i32 + 1;
                if pos { v } else { -v }
            }).collect())
            .collect();
        let expected = (0..1u32 << n).any(|mask| {
            clauses.iter().all(|c| c.iter().any(|&l| (mask >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
        });
        prop_assert_eq!(sat(n, &clauses).is_some(), expected);
    }

    #[test]
    fn least_model_layers_for_normal_programs(n in 1..=5usize, rules in rule_masks(8)) {
        let normal: Vec<_> = rules.iter().map(|&(h, p, q)| (h & h.wrapping_neg(), p, q)).collect();
        let p = clean_program(n, &normal);
        let vt = VarTable::new(&p, 1);
        let none = p.empty_set();
        let lm = build_f_lm_block(&p, &none, &none, 1, &vt).unwrap();
        for m in subsets_of_used(&p) {
            let values = pinned(&lm, &vt, &m).expect("layers are always satisfiable");
            let definite = gl_reduct(&p, &m);
            let expected = least_model(&definite).unwrap();
            prop_assert_eq!(top_layer(&values, &vt, 1, &p), expected);
        }
    }

    #[test]
    fn u_vars_are_determined_by_v(p in program()) {
        let x = find_backdoor(&p, 7).unwrap().atoms().clone();
        let xs: Vec<Atom> = x.iter().collect();
        let vt = VarTable::new(&p, 1 << xs.len());
        let block = 1 << xs.len();
        let xi = subset_by_index(p.capacity(), &xs, block - 1);
        let lm = build_f_lm_block(&p, &x, &xi, block, &vt).unwrap();
        for m in subsets_of_used(&p).into_iter().take(16) {
            let values = pinned(&lm, &vt, &m).unwrap();
            // Block the found u-assignment; nothing else may remain.
            let mut cnf = tseitin_cnf(&lm, &vt);
            for &a in vt.atoms() {
                let v = vt.v(a) as i32;
                cnf.push_unit(if m.contains(a) { v } else { -v });
            }
            let blocking: Vec<i32> = (1..=vt.len())
                .filter(|&v| matches!(vt.role(v), VarRole::Layer { block: b, .. } if b == block))
                .map(|v| if values[v as usize - 1] { -(v as i32) } else { v as i32 })
                .collect();
            if !blocking.is_empty() {
                cnf.clauses.push(blocking);
                prop_assert!(sat(cnf.num_vars, &cnf.clauses).is_none());
            }
        }
    }

    #[test]
    fn blocks_replay_mincheck(p in program()) {
        let x = find_backdoor(&p, 7).unwrap().atoms().clone();
        let xs: Vec<Atom> = x.iter().collect();
        let blocks = 1u64 << xs.len();
        let vt = VarTable::new(&p, blocks);
        for block in 1..=blocks {
            let xi = subset_by_index(p.capacity(), &xs, block - 1);
            let f = build_f_min_block(&p, &x, &xi, block, &vt).unwrap();
            let lm = build_f_lm_block(&p, &x, &xi, block, &vt).unwrap();
            for m in subsets_of_used(&p) {
                if !gl_reduct(&p, &m).is_model(&m) {
                    continue;
                }
                let values = pinned(&lm, &vt, &m).unwrap();
                let truth = f.eval(&|v| values[v as usize - 1]);
                prop_assert_eq!(truth, mincheck(&p, &m, &x, &xi).unwrap().passed(), "block {}", block);
            }
        }
    }

    #[test]
    fn brave_and_skeptical_match_oracle(p in program()) {
        let x = find_backdoor(&p, 7).unwrap().atoms().clone();
        let all = enumerate_answer_sets(&p, false).unwrap();
        for a in p.atoms_used().iter() {
            for mode in [Mode::Brave, Mode::Skeptical] {
                let q = build_query(&p, &x, &QuerySpec::new(mode, a)).unwrap();
                let cnf = tseitin_cnf(&q.formula, &q.vars);
                let model = sat(cnf.num_vars, &cnf.clauses);
                match mode {
                    Mode::Brave => prop_assert_eq!(model.is_some(), all.iter().any(|m| m.contains(a))),
                    Mode::Skeptical => prop_assert_eq!(model.is_none(), all.iter().all(|m| m.contains(a))),
                }
                if let Some(values) = model {
                    let m = decode_model(&values, &q.vars, p.capacity()).unwrap();
                    prop_assert!(all.contains(&m));
                }
            }
        }
    }

    #[test]
    fn property_conjunct_restricts_answer_sets(p in program(), pick in any::<u8>()) {
        let x = find_backdoor(&p, 7).unwrap().atoms().clone();
        let used: Vec<Atom> = p.atoms_used().iter().collect();
        prop_assume!(used.len() >= 2);
        let a = used[pick as usize % used.len()];
        let b = used[(pick as usize / 7 + 1 + pick as usize) % used.len()];
        prop_assume!(a != b);
        let vt = VarTable::new(&p, 1);
        let prop = Formula::not_var(vt.v(b));
        let q = build_query(&p, &x, &QuerySpec::new(Mode::Brave, a).with_property(prop)).unwrap();
        let cnf = tseitin_cnf(&q.formula, &q.vars);
        let expected = enumerate_answer_sets(&p, false).unwrap().iter().any(|m| m.contains(a) && !m.contains(b));
        prop_assert_eq!(sat(cnf.num_vars, &cnf.clauses).is_some(), expected);
    }

    #[test]
    fn dimacs_is_deterministic(p in program()) {
        let x = find_backdoor(&p, 7).unwrap().atoms().clone();
        let Some(a) = p.atoms_used().iter().next() else { return Ok(()); };
        let q = QuerySpec::new(Mode::Brave, a);
        let one = build_query(&p, &x, &q).unwrap();
        let two = build_query(&p, &x, &q).unwrap();
        prop_assert_eq!(
            dimacs_string(&tseitin_cnf(&one.formula, &one.vars)),
            dimacs_string(&tseitin_cnf(&two.formula, &two.vars))
        );
        prop_assert_eq!(one.blocks(), 1 << x.len());
    }

    #[test]
    fn decode_inverts_encode(p in program(), mask in any::<u8>(), noise in any::<u64>()) {
        let m = p.set_of(p.atoms_used().iter().filter(|a| mask >> a.0 & 1 == 1));
        let vt = VarTable::new(&p, 2);
        let values: Vec<bool> = (1..=vt.len())
            .map(|v| match vt.role(v) {
                VarRole::Atom(a) => m.contains(a),
                _ => noise >> (v % 64) & 1 == 1,
            })
            .collect();
        prop_assert_eq!(decode_model(&values, &vt, p.capacity()).unwrap(), m);
    }
}

#[test]
fn normal_program_has_one_block() {
    let p = bdnsat::parse_program("a. b :- a, not c. c :- not b.").unwrap();
    let x = find_backdoor(&p, 0).unwrap();
    assert_eq!(x.k(), 0);
    let q = build_query(
        &p,
        x.atoms(),
        &QuerySpec::new(Mode::Brave, p.table().get("b").unwrap()),
    )
    .unwrap();
    assert_eq!(q.blocks(), 1);
}

#[test]
fn contradiction_is_unsat() {
    let f = Formula::and(vec![Formula::var(1), Formula::not_var(1)]);
    let cnf = tseitin_cnf(&f, &VarTable::plain(1));
    assert!(sat(cnf.num_vars, &cnf.clauses).is_none());
}

#[test]
fn empty_program_pins_every_layer_false() {
    let p = bdnsat::parse_program("a :- not b.").unwrap();
    let vt = VarTable::new(&p, 1);
    let e = p.empty_set();
    // A program whose only rule is blocked when b is true.
    let lm = build_f_lm_block(&p, &e, &e, 1, &vt).unwrap();
    let values = pinned(&lm, &vt, &p.set_from_names(["b"]).unwrap()).unwrap();
    for j in 0..=vt.layers() {
        for &a in vt.atoms() {
            assert!(!values[vt.u(1, j, a) as usize - 1]);
        }
    }
    let empty = Program::new(p.shared_table().clone(), Vec::new());
    let vt = VarTable::new(&empty, 1);
    let lm = build_f_lm_block(&empty, &e, &e, 1, &vt).unwrap();
    assert!(pinned(&lm, &vt, &e).is_some());
}
