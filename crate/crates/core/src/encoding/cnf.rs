//! Tseitin conversion, DIMACS output and model decoding.

use std::io::{self, Write};

use crate::atoms::AtomSet;
use crate::encoding::formula::{Formula, Var};
use crate::encoding::vartable::{VarRole, VarTable};
use crate::error::{Error, Result};

/// A clause list over variables `1..=num_vars`.
#[derive(Debug, Clone)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// Layout of the non-auxiliary variables.
    pub vars: VarTable,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>, vars: VarTable) -> Self {
        debug_assert!(clauses
            .iter()
            .all(|c| !c.is_empty() && c.iter().all(|&l| l != 0 && l.unsigned_abs() <= num_vars)));
        CnfFormula {
            num_vars,
            clauses,
            vars,
        }
    }

    pub fn role(&self, var: Var) -> VarRole {
        self.vars.role(var)
    }

    /// Whether `assignment` (entry `v - 1` is the value of variable `v`) satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = assignment
                    .get(l.unsigned_abs() as usize - 1)
                    .copied()
                    .unwrap_or(false);
                value == (l > 0)
            })
        })
    }

    /// Adds a unit clause, e.g. to pin a v-var.
    pub fn push_unit(&mut self, lit: i32) {
        assert!(lit != 0 && lit.unsigned_abs() <= self.num_vars);
        self.clauses.push(vec![lit]);
    }
}

struct Tseitin {
    next: u32,
    clauses: Vec<Vec<i32>>,
}

impl Tseitin {
    fn fresh(&mut self) -> i32 {
        self.next += 1;
        self.next as i32
    }

    /// Literal equivalent to `f`; `f` must be constant-free.
    fn lit(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::Const(_) => unreachable!("constants are folded before labeling"),
            Formula::Var(v) => *v as i32,
            Formula::Not(g) => -self.lit(g),
            Formula::And(cs) => {
                let lits: Vec<i32> = cs.iter().map(|c| self.lit(c)).collect();
                let t = self.fresh();
                let mut long = vec![t];
                for &l in &lits {
                    self.clauses.push(vec![-t, l]);
                    long.push(-l);
                }
                self.clauses.push(long);
                t
            }
            Formula::Or(cs) => {
                let lits: Vec<i32> = cs.iter().map(|c| self.lit(c)).collect();
                let t = self.fresh();
                let mut long = vec![-t];
                for &l in &lits {
                    self.clauses.push(vec![t, -l]);
                    long.push(l);
                }
                self.clauses.push(long);
                t
            }
            Formula::Implies(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                let t = self.fresh();
                self.clauses.push(vec![-t, -la, lb]);
                self.clauses.push(vec![t, la]);
                self.clauses.push(vec![t, -lb]);
                t
            }
            Formula::Iff(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                let t = self.fresh();
                self.clauses.push(vec![-t, -la, lb]);
                self.clauses.push(vec![-t, la, -lb]);
                self.clauses.push(vec![t, la, lb]);
                self.clauses.push(vec![t, -la, -lb]);
                t
            }
        }
    }

    /// Adds clauses forcing `f` true; top-level connectives need no label.
    fn assert(&mut self, f: &Formula) {
        match f {
            Formula::Const(_) => unreachable!("constants are folded before labeling"),
            Formula::And(cs) => cs.iter().for_each(|c| self.assert(c)),
            Formula::Or(cs) => {
                let clause = cs.iter().map(|c| self.lit(c)).collect();
                self.clauses.push(clause);
            }
            Formula::Implies(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                self.clauses.push(vec![-la, lb]);
            }
            Formula::Iff(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                self.clauses.push(vec![-la, lb]);
                self.clauses.push(vec![la, -lb]);
            }
            Formula::Not(g) => match g.as_ref() {
                Formula::Or(cs) => cs
                    .iter()
                    .for_each(|c| self.assert(&Formula::not(c.clone()))),
                Formula::Not(h) => self.assert(h),
                _ => {
                    let l = self.lit(g);
                    self.clauses.push(vec![-l]);
                }
            },
            Formula::Var(v) => self.clauses.push(vec![*v as i32]),
        }
    }
}

/// Equisatisfiable CNF of `f`.
///
/// Constants are folded first; labels are then numbered bottom-up after the
/// last variable of `vt`. Models of the CNF restricted to the original
/// variables satisfy `f`, and every model of `f` extends to one of the CNF.
pub fn tseitin_cnf(f: &Formula, vt: &VarTable) -> CnfFormula {
    let base = vt.len().max(f.max_var());
    let mut ts = Tseitin {
        next: base,
        clauses: Vec::new(),
    };
    match f.simplify() {
        Formula::Const(true) => {}
        Formula::Const(false) => {
            let t = ts.fresh();
            ts.clauses.push(vec![t]);
            ts.clauses.push(vec![-t]);
        }
        g => ts.assert(&g),
    }
    CnfFormula::new(ts.next, ts.clauses, vt.clone())
}

/// Writes DIMACS: optional `c` comment lines, the `p cnf` header, then one
/// zero-terminated clause per line.
pub fn emit_dimacs(c: &CnfFormula, comments: &[String], out: &mut impl Write) -> io::Result<()> {
    for comment in comments {
        for line in comment.lines() {
            writeln!(out, "c {line}")?;
        }
    }
    writeln!(out, "p cnf {} {}", c.num_vars, c.clauses.len())?;
    let mut line = String::new();
    for clause in &c.clauses {
        line.clear();
        for lit in clause {
            line.push_str(&lit.to_string());
            line.push(' ');
        }
        line.push_str("0\n");
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn dimacs_string(c: &CnfFormula) -> String {
    let mut buf = Vec::new();
    emit_dimacs(c, &[], &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("DIMACS is ASCII")
}

/// Writes the variable-map sidecar, one line per variable.
pub fn emit_var_map(c: &CnfFormula, out: &mut impl Write) -> io::Result<()> {
    for var in 1..=c.num_vars {
        writeln!(out, "{}", c.vars.describe(var))?;
    }
    Ok(())
}

/// Reads DIMACS CNF. Comment lines may appear anywhere; clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["p", "cnf", v, n] => {
                    let v = v.parse().map_err(|_| {
                        Error::Dimacs(format!("line {}: bad variable count", no + 1))
                    })?;
                    let n = n
                        .parse()
                        .map_err(|_| Error::Dimacs(format!("line {}: bad clause count", no + 1)))?;
                    header = Some((v, n));
                }
                _ => return Err(Error::Dimacs(format!("line {}: malformed header", no + 1))),
            }
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| Error::Dimacs("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| Error::Dimacs(format!("line {}: bad literal `{tok}`", no + 1)))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Dimacs(format!("line {}: empty clause", no + 1)));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > num_vars {
                return Err(Error::Dimacs(format!(
                    "line {}: literal {lit} out of range",
                    no + 1
                )));
            } else {
                current.push(lit);
            }
        }
    }
    let (num_vars, declared) = header.ok_or_else(|| Error::Dimacs("missing header".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(Error::Dimacs(format!(
            "header declares {declared} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(CnfFormula::new(
        num_vars,
        clauses,
        VarTable::plain(num_vars),
    ))
}

/// M = { a : v[a] is true }. Entry `v - 1` of `assignment` is the value of `v`.
pub fn decode_model(assignment: &[bool], vt: &VarTable, capacity: usize) -> Result<AtomSet> {
    let needed = vt.atom_count() as usize;
    if assignment.len() < needed {
        return Err(Error::MalformedAssignment(format!(
            "{} values given, {needed} atom variables expected",
            assignment.len()
        )));
    }
    let mut m = AtomSet::empty(capacity);
    for &a in vt.atoms() {
        if assignment[vt.v(a) as usize - 1] {
            m.insert(a);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_is_a_unit_clause() {
        let cnf = tseitin_cnf(&Formula::var(1), &VarTable::plain(1));
        assert_eq!(dimacs_string(&cnf), "p cnf 1 1\n1 0\n");
    }

    #[test]
    fn false_constant_gives_contradiction() {
        let cnf = tseitin_cnf(&Formula::Const(false), &VarTable::plain(0));
        assert_eq!(cnf.clauses, vec![vec![1], vec![-1]]);
        let cnf = tseitin_cnf(&Formula::Const(true), &VarTable::plain(0));
        assert!(cnf.clauses.is_empty());
    }

    #[test]
    fn dimacs_comments_and_parse_back() {
        let f = Formula::and(vec![
            Formula::or(vec![Formula::var(1), Formula::not_var(2)]),
            Formula::iff(Formula::var(2), Formula::var(3)),
        ]);
        let cnf = tseitin_cnf(&f, &VarTable::plain(3));
        let mut buf = Vec::new();
        emit_dimacs(&cnf, &["made by a test".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("c made by a test\np cnf 3 3\n"));
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back.clauses, cnf.clauses);
        assert_eq!(back.num_vars, cnf.num_vars);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf x 1\n").is_err());
    }

    #[test]
    fn decode_rejects_short_assignment() {
        let p = crate::parse::parse_program("a | b.").unwrap();
        let vt = VarTable::new(&p, 1);
        assert!(decode_model(&[true], &vt, p.capacity()).is_err());
        let m = decode_model(&[false, true, true, true], &vt, p.capacity()).unwrap();
        assert_eq!(m, p.set_from_names(["b"]).unwrap());
    }
}
