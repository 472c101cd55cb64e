//! Reducts and least models.

use crate::atoms::AtomSet;
use crate::error::{Error, Result};
use crate::program::{Program, Rule};

/// GL reduct P^M: drop rules whose negative body meets `m`, then strip the
/// negative bodies of the survivors.
pub fn gl_reduct(p: &Program, m: &AtomSet) -> Program {
    let rules = p
        .rules()
        .iter()
        .filter(|r| !r.neg_body().iter().any(|&a| m.contains(a)))
        .map(|r| Rule::new(r.head().to_vec(), r.pos_body().to_vec(), Vec::new()))
        .collect();
    p.derive(rules)
}

/// Least model of DH(p), the non-constraint part of a Horn program.
///
/// Constraints are ignored; callers check them against the result. Runs the
/// counter-based forward chaining in time linear in the program size.
pub fn least_model(p: &Program) -> Result<AtomSet> {
    if !p.flags().horn {
        return Err(Error::NotHorn);
    }
    let cap = p.capacity();
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); cap];
    let mut missing: Vec<usize> = Vec::with_capacity(p.len());
    let mut model = p.empty_set();
    let mut queue = Vec::new();
    for (i, r) in p.rules().iter().enumerate() {
        missing.push(r.pos_body().len());
        for &b in r.pos_body() {
            watchers[b.index()].push(i);
        }
        if let (Some(&h), true) = (r.head().first(), r.pos_body().is_empty()) {
            if model.insert(h) {
                queue.push(h);
            }
        }
    }
    while let Some(a) = queue.pop() {
        for &i in &watchers[a.index()] {
            missing[i] -= 1;
            if missing[i] == 0 {
                if let Some(&h) = p.rules()[i].head().first() {
                    if model.insert(h) {
                        queue.push(h);
                    }
                }
            }
        }
    }
    Ok(model)
}

/// Immediate-consequence operator T_P(A) over the rules with a head.
pub fn immediate_consequences(p: &Program, a: &AtomSet) -> AtomSet {
    let mut out = p.empty_set();
    for r in p.rules() {
        if r.pos_body().iter().all(|&b| a.contains(b)) {
            for &h in r.head() {
                out.insert(h);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn reduct_drops_blocked_rules() {
        let p = parse_program("g :- not i.").unwrap();
        let m = p.set_from_names(["i"]).unwrap();
        assert!(gl_reduct(&p, &m).is_empty());
    }

    #[test]
    fn reduct_of_negation_free_is_identity() {
        let p = parse_program("a | b :- c. c.").unwrap();
        let m = p.set_from_names(["a"]).unwrap();
        assert_eq!(gl_reduct(&p, &m), p);
    }

    #[test]
    fn least_model_chain() {
        let p = parse_program("a. b :- a.").unwrap();
        assert_eq!(
            least_model(&p).unwrap(),
            p.set_from_names(["a", "b"]).unwrap()
        );
    }

    #[test]
    fn least_model_ignores_constraints() {
        let p = parse_program("a :- b. :- a. :- e. a. g.").unwrap();
        assert_eq!(
            least_model(&p).unwrap(),
            p.set_from_names(["a", "g"]).unwrap()
        );
    }

    #[test]
    fn least_model_rejects_non_horn() {
        let p = parse_program("a | b.").unwrap();
        assert_eq!(least_model(&p), Err(Error::NotHorn));
        let p = parse_program("a :- not b.").unwrap();
        assert_eq!(least_model(&p), Err(Error::NotHorn));
    }
}
