//! Propositional formula trees.

/// Variable id; positive and 1-based so it maps directly onto DIMACS.
pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(v: Var) -> Formula {
        Formula::Var(v)
    }

    pub fn not_var(v: Var) -> Formula {
        Formula::Not(Box::new(Formula::Var(v)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is `true`, a singleton is its member.
    pub fn and(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::Const(true),
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// Disjunction; the empty disjunction is `false`, a singleton is its member.
    pub fn or(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::Const(false),
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            count += 1;
            match f {
                Formula::Const(_) | Formula::Var(_) => {}
                Formula::Not(g) => stack.push(g),
                Formula::And(cs) | Formula::Or(cs) => stack.extend(cs),
                Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        count
    }

    /// Largest variable id referenced, 0 if none.
    pub fn max_var(&self) -> Var {
        let mut max = 0;
        self.visit_vars(&mut |v| max = max.max(v));
        max
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => f(*v),
            Formula::Not(g) => g.visit_vars(f),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.visit_vars(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    pub fn eval(&self, value: &impl Fn(Var) -> bool) -> bool {
        match self {
            Formula::Const(c) => *c,
            Formula::Var(v) => value(*v),
            Formula::Not(g) => !g.eval(value),
            Formula::And(cs) => cs.iter().all(|c| c.eval(value)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval(value)),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
            Formula::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Folds constants away. The result is either a `Const` or contains none.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(g) => match g.simplify() {
                Formula::Const(c) => Formula::Const(!c),
                Formula::Not(h) => *h,
                s => Formula::not(s),
            },
            Formula::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        Formula::Const(true) => {}
                        Formula::Const(false) => return Formula::Const(false),
                        Formula::And(inner) => out.extend(inner),
                        s => out.push(s),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        Formula::Const(false) => {}
                        Formula::Const(true) => return Formula::Const(true),
                        Formula::Or(inner) => out.extend(inner),
                        s => out.push(s),
                    }
                }
                Formula::or(out)
            }
            Formula::Implies(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::Const(false), _) | (_, Formula::Const(true)) => Formula::Const(true),
                (Formula::Const(true), s) => s,
                (s, Formula::Const(false)) => Formula::not(s).simplify(),
                (sa, sb) => Formula::implies(sa, sb),
            },
            Formula::Iff(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::Const(c), s) | (s, Formula::Const(c)) => {
                    if c {
                        s
                    } else {
                        Formula::not(s).simplify()
                    }
                }
                (sa, sb) => Formula::iff(sa, sb),
            },
        }
    }
}
