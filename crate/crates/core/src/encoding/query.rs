//! Brave and skeptical queries as propositional formulas.
//!
//! The v-vars describe a candidate set `M`. `F_mod` says `M` is a model of
//! `P`; for every subset `X_i` of the backdoor, block `F_i^min` replays
//! MinCheck(X_i) symbolically, with the u-vars of the block computing the
//! least model of the restricted reduct layer by layer.

use crate::atoms::{Atom, AtomSet};
use crate::backdoor::{verify_strong_backdoor, ASSIGNMENT_LIMIT};
use crate::encoding::formula::Formula;
use crate::encoding::vartable::{VarRole, VarTable};
use crate::error::{Error, Result};
use crate::mincheck::{restrict_program, subset_by_index};
use crate::program::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Brave,
    Skeptical,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "brave" => Ok(Mode::Brave),
            "skeptical" | "cautious" => Ok(Mode::Skeptical),
            other => Err(format!(
                "unknown mode `{other}` (expected brave or skeptical)"
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Brave => "brave",
            Mode::Skeptical => "skeptical",
        })
    }
}

/// What to ask about the program.
#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub mode: Mode,
    pub atom: Atom,
    /// Extra requirement on the answer set, over v-vars only.
    pub property: Option<Formula>,
}

impl QuerySpec {
    pub fn new(mode: Mode, atom: Atom) -> Self {
        QuerySpec {
            mode,
            atom,
            property: None,
        }
    }

    pub fn with_property(mut self, property: Formula) -> Self {
        self.property = Some(property);
        self
    }
}

/// `⋀_r (⋀_{B−} ¬v[b] → ⋁_{B+} ¬v[b] ∨ ⋁_H v[b])`
pub fn build_f_mod(p: &Program, vt: &VarTable) -> Formula {
    Formula::and(
        p.rules()
            .iter()
            .map(|r| {
                let guard = Formula::and(
                    r.neg_body()
                        .iter()
                        .map(|&b| Formula::not_var(vt.v(b)))
                        .collect(),
                );
                let conclusion = Formula::or(
                    r.pos_body()
                        .iter()
                        .map(|&b| Formula::not_var(vt.v(b)))
                        .chain(r.head().iter().map(|&h| Formula::var(vt.v(h))))
                        .collect(),
                );
                Formula::implies(guard, conclusion)
            })
            .collect(),
    )
}

fn check_subset(x: &AtomSet, xi: &AtomSet) -> Result<()> {
    if xi.is_subset(x) {
        Ok(())
    } else {
        Err(Error::NotInBackdoor)
    }
}

/// Least-model layers of block `block`: `u^0[a] ↔ ⊥` and for `j = 1..=p`
/// `u^j[a] ↔ u^{j-1}[a] ∨ ⋁_{r, H(r)={a}} (⋀_{B+} u^{j-1}[b] ∧ ⋀_{B−} ¬v[b])`
/// over the rules of `P_{Xi⊆X}`.
pub fn build_f_lm_block(
    p: &Program,
    x: &AtomSet,
    xi: &AtomSet,
    block: u64,
    vt: &VarTable,
) -> Result<Formula> {
    check_subset(x, xi)?;
    let restricted = restrict_program(p, x, xi)?.base;
    Ok(lm_layers(&restricted, block, vt))
}

fn lm_layers(restricted: &Program, block: u64, vt: &VarTable) -> Formula {
    let atoms = vt.atoms();
    let mut deriving: Vec<Vec<usize>> = vec![Vec::new(); restricted.capacity()];
    for (i, r) in restricted.rules().iter().enumerate() {
        if let Some(&h) = r.head().first() {
            deriving[h.index()].push(i);
        }
    }
    let mut conjuncts = Vec::with_capacity(atoms.len() * (vt.layers() as usize + 1));
    for &a in atoms {
        conjuncts.push(Formula::iff(
            Formula::var(vt.u(block, 0, a)),
            Formula::Const(false),
        ));
    }
    for j in 1..=vt.layers() {
        for &a in atoms {
            let mut options = vec![Formula::var(vt.u(block, j - 1, a))];
            for &ri in &deriving[a.index()] {
                let r = &restricted.rules()[ri];
                options.push(Formula::and(
                    r.pos_body()
                        .iter()
                        .map(|&b| Formula::var(vt.u(block, j - 1, b)))
                        .chain(r.neg_body().iter().map(|&b| Formula::not_var(vt.v(b))))
                        .collect(),
                ));
            }
            conjuncts.push(Formula::iff(
                Formula::var(vt.u(block, j, a)),
                Formula::or(options),
            ));
        }
    }
    Formula::and(conjuncts)
}

/// The step-4 conditions of block `block` as formulas over v-vars and the
/// top-layer u-vars of the block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockConditions {
    pub a: Formula,
    pub b: Formula,
    pub c: Formula,
    pub d: Formula,
}

/// Conditions (a)-(d) for subset `xi`; membership in `x` and `xi` is folded.
pub fn block_conditions(
    p: &Program,
    x: &AtomSet,
    xi: &AtomSet,
    block: u64,
    vt: &VarTable,
) -> Result<BlockConditions> {
    check_subset(x, xi)?;
    let restricted = restrict_program(p, x, xi)?.base;
    Ok(conditions(p, &restricted, x, xi, block, vt))
}

fn conditions(
    p: &Program,
    restricted: &Program,
    x: &AtomSet,
    xi: &AtomSet,
    block: u64,
    vt: &VarTable,
) -> BlockConditions {
    let top = vt.layers();
    let v = |a: Atom| vt.v(a);
    let u = |a: Atom| vt.u(block, top, a);

    // (a) a constraint of the restricted reduct is violated by L.
    let a = Formula::or(
        restricted
            .rules()
            .iter()
            .filter(|r| r.is_constraint())
            .map(|r| {
                Formula::and(
                    r.neg_body()
                        .iter()
                        .map(|&b| Formula::not_var(v(b)))
                        .chain(r.pos_body().iter().map(|&b| Formula::var(u(b))))
                        .collect(),
                )
            })
            .collect(),
    );

    // (b) L has an atom outside M \ X.
    let b = Formula::or(
        vt.atoms()
            .iter()
            .filter(|&&a| !x.contains(a))
            .map(|&a| Formula::and(vec![Formula::not_var(v(a)), Formula::var(u(a))]))
            .collect(),
    );

    // (c) L ∪ Xi equals M, or has an atom outside M.
    let equal = Formula::and(
        vt.atoms()
            .iter()
            .map(|&a| {
                if xi.contains(a) {
                    Formula::var(v(a))
                } else {
                    Formula::iff(Formula::var(v(a)), Formula::var(u(a)))
                }
            })
            .collect(),
    );
    let overflow = Formula::or(
        vt.atoms()
            .iter()
            .map(|&a| {
                if xi.contains(a) {
                    Formula::not_var(v(a))
                } else {
                    Formula::and(vec![Formula::var(u(a)), Formula::not_var(v(a))])
                }
            })
            .collect(),
    );
    let c = Formula::or(vec![equal, overflow]);

    // (d) some rule of P^M is violated by L ∪ Xi. A head atom in Xi satisfies
    // the rule outright; a body atom in Xi is satisfied outright.
    let d = Formula::or(
        p.rules()
            .iter()
            .filter(|r| !r.head().iter().any(|&a| xi.contains(a)))
            .map(|r| {
                Formula::and(
                    r.neg_body()
                        .iter()
                        .map(|&b| Formula::not_var(v(b)))
                        .chain(r.head().iter().map(|&a| Formula::not_var(u(a))))
                        .chain(
                            r.pos_body()
                                .iter()
                                .filter(|&&b| !xi.contains(b))
                                .map(|&b| Formula::var(u(b))),
                        )
                        .collect(),
                )
            })
            .collect(),
    );
    BlockConditions { a, b, c, d }
}

/// Block `F_i^min := ¬F_i^⊆ ∨ (F_i^lm ∧ (F^(a) ∨ F^(b) ∨ F^(c) ∨ F^(d)))`.
///
/// Membership in `x` and `xi` is folded at build time, so the block only
/// mentions v-vars and its own u-vars.
pub fn build_f_min_block(
    p: &Program,
    x: &AtomSet,
    xi: &AtomSet,
    block: u64,
    vt: &VarTable,
) -> Result<Formula> {
    check_subset(x, xi)?;
    let restricted = restrict_program(p, x, xi)?.base;
    let contained = Formula::and(xi.iter().map(|a| Formula::var(vt.v(a))).collect());
    let lm = lm_layers(&restricted, block, vt);
    let BlockConditions { a, b, c, d } = conditions(p, &restricted, x, xi, block, vt);
    Ok(Formula::or(vec![
        Formula::not(contained),
        Formula::and(vec![lm, Formula::Or(vec![a, b, c, d])]),
    ]))
}

/// A complete query formula with its variable layout.
#[derive(Debug, Clone)]
pub struct EncodedQuery {
    pub formula: Formula,
    pub vars: VarTable,
    /// Backdoor atoms inside `at(P)`, ascending; block `i` uses subset `i - 1`.
    pub backdoor: Vec<Atom>,
}

impl EncodedQuery {
    pub fn blocks(&self) -> u64 {
        self.vars.blocks()
    }
}

/// `F_mod ∧ F_min ∧ (v[a*] | ¬v[a*]) [∧ F_prop]`.
///
/// Brave: satisfiable iff `a*` is in some answer set. Skeptical: unsatisfiable
/// iff `a*` is in every answer set.
pub fn build_query(p: &Program, x: &AtomSet, q: &QuerySpec) -> Result<EncodedQuery> {
    let used = p.atoms_used();
    if !used.contains(q.atom) {
        let name = if q.atom.index() < p.capacity() {
            p.table().name(q.atom).to_owned()
        } else {
            format!("#{}", q.atom.0)
        };
        return Err(Error::UnknownAtom(name));
    }
    let x = x.intersection(&used);
    let backdoor: Vec<Atom> = x.iter().collect();
    if backdoor.len() > ASSIGNMENT_LIMIT {
        return Err(Error::SizeGuard {
            what: "backdoor",
            size: backdoor.len(),
            limit: ASSIGNMENT_LIMIT,
        });
    }
    if !verify_strong_backdoor(p, &x) {
        return Err(Error::NotABackdoor);
    }
    let blocks = 1u64 << backdoor.len();
    let vt = VarTable::new(p, blocks);
    if let Some(prop) = &q.property {
        let mut bad = None;
        prop.visit_vars(&mut |var| {
            if !matches!(vt.role(var), VarRole::Atom(_)) {
                bad.get_or_insert(var);
            }
        });
        if let Some(var) = bad {
            return Err(Error::PropertyVariable(var));
        }
    }

    let mut conjuncts = Vec::with_capacity(blocks as usize + 3);
    conjuncts.push(build_f_mod(p, &vt));
    for block in 1..=blocks {
        let xi = subset_by_index(p.capacity(), &backdoor, block - 1);
        conjuncts.push(build_f_min_block(p, &x, &xi, block, &vt)?);
    }
    let target = vt.v(q.atom);
    conjuncts.push(match q.mode {
        Mode::Brave => Formula::var(target),
        Mode::Skeptical => Formula::not_var(target),
    });
    if let Some(prop) = &q.property {
        conjuncts.push(prop.clone());
    }
    Ok(EncodedQuery {
        formula: Formula::And(conjuncts),
        vars: vt,
        backdoor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn fact_encodes_its_head() {
        let p = parse_program("c.").unwrap();
        let vt = VarTable::new(&p, 1);
        let f = build_f_mod(&p, &vt).simplify();
        assert_eq!(f, Formula::var(1));
    }

    #[test]
    fn constraint_encodes_negation() {
        let p = parse_program(":- a.").unwrap();
        let vt = VarTable::new(&p, 1);
        assert_eq!(build_f_mod(&p, &vt).simplify(), Formula::not_var(1));
    }

    #[test]
    fn unknown_query_atom() {
        let p = parse_program("a.").unwrap();
        let q = QuerySpec::new(Mode::Brave, Atom(5));
        assert!(matches!(
            build_query(&p, &p.empty_set(), &q),
            Err(Error::UnknownAtom(_))
        ));
    }

    #[test]
    fn property_must_use_atom_vars() {
        let p = parse_program("a | b.").unwrap();
        let x = p.set_from_names(["a"]).unwrap();
        let q = QuerySpec::new(Mode::Brave, Atom(0)).with_property(Formula::var(999));
        assert!(matches!(
            build_query(&p, &x, &q),
            Err(Error::PropertyVariable(999))
        ));
    }

    #[test]
    fn block_count_is_two_to_the_k() {
        let p = parse_program("a | b. c | d. e.").unwrap();
        let x = p.set_from_names(["a", "c"]).unwrap();
        let q = QuerySpec::new(Mode::Brave, p.table().get("e").unwrap());
        let enc = build_query(&p, &x, &q).unwrap();
        assert_eq!(enc.blocks(), 4);
        match &enc.formula {
            Formula::And(cs) => assert_eq!(cs.len(), 1 + 4 + 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_backdoor_is_rejected() {
        let p = parse_program("a | b.").unwrap();
        let q = QuerySpec::new(Mode::Brave, Atom(0));
        assert!(matches!(
            build_query(&p, &p.empty_set(), &q),
            Err(Error::NotABackdoor)
        ));
    }
}
