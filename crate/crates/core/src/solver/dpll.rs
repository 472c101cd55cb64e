//! Small DPLL solver: unit propagation, pure-literal elimination and
//! chronological backtracking. No clause learning.
//!
//! Clause state is kept in counters (true and false literals per clause), and
//! every assignment is recorded on a trail so backtracking restores the
//! counters exactly.

use std::time::Instant;

/// Outcome of a DPLL run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpllOutcome {
    /// Entry `v - 1` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
    /// The deadline passed.
    Interrupted,
}

#[inline]
fn lit_index(lit: i32) -> usize {
    let v = lit.unsigned_abs() as usize;
    2 * v + usize::from(lit < 0)
}

struct State<'a> {
    clauses: &'a [Vec<i32>],
    occurs: Vec<Vec<u32>>,
    /// 0 unassigned, 1 true, -1 false; indexed by variable.
    value: Vec<i8>,
    true_count: Vec<u32>,
    false_count: Vec<u32>,
    /// Unsatisfied clauses containing each literal.
    active: Vec<u32>,
    open_clauses: usize,
    trail: Vec<i32>,
    pending_units: Vec<u32>,
    conflict: bool,
}

impl<'a> State<'a> {
    fn new(num_vars: u32, clauses: &'a [Vec<i32>]) -> Self {
        let n = num_vars as usize;
        let mut occurs = vec![Vec::new(); 2 * n + 2];
        let mut active = vec![0u32; 2 * n + 2];
        for (ci, clause) in clauses.iter().enumerate() {
            for &l in clause {
                occurs[lit_index(l)].push(ci as u32);
                active[lit_index(l)] += 1;
            }
        }
        let mut state = State {
            clauses,
            occurs,
            value: vec![0; n + 1],
            true_count: vec![0; clauses.len()],
            false_count: vec![0; clauses.len()],
            active,
            open_clauses: clauses.len(),
            trail: Vec::new(),
            pending_units: Vec::new(),
            conflict: false,
        };
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.len() == 1 {
                state.pending_units.push(ci as u32);
            }
            if clause.is_empty() {
                state.conflict = true;
            }
        }
        state
    }

    #[inline]
    fn lit_value(&self, lit: i32) -> i8 {
        let v = self.value[lit.unsigned_abs() as usize];
        if lit < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, lit: i32) {
        let var = lit.unsigned_abs() as usize;
        debug_assert_eq!(self.value[var], 0);
        self.value[var] = if lit > 0 { 1 } else { -1 };
        self.trail.push(lit);
        for k in 0..self.occurs[lit_index(lit)].len() {
            let ci = self.occurs[lit_index(lit)][k] as usize;
            self.true_count[ci] += 1;
            if self.true_count[ci] == 1 {
                self.open_clauses -= 1;
                for &l in &self.clauses[ci] {
                    self.active[lit_index(l)] -= 1;
                }
            }
        }
        for k in 0..self.occurs[lit_index(-lit)].len() {
            let ci = self.occurs[lit_index(-lit)][k] as usize;
            self.false_count[ci] += 1;
            if self.true_count[ci] == 0 {
                let len = self.clauses[ci].len() as u32;
                if self.false_count[ci] == len {
                    self.conflict = true;
                } else if self.false_count[ci] + 1 == len {
                    self.pending_units.push(ci as u32);
                }
            }
        }
    }

    fn unassign(&mut self, lit: i32) {
        let var = lit.unsigned_abs() as usize;
        for k in 0..self.occurs[lit_index(-lit)].len() {
            let ci = self.occurs[lit_index(-lit)][k] as usize;
            self.false_count[ci] -= 1;
        }
        for k in 0..self.occurs[lit_index(lit)].len() {
            let ci = self.occurs[lit_index(lit)][k] as usize;
            self.true_count[ci] -= 1;
            if self.true_count[ci] == 0 {
                self.open_clauses += 1;
                for &l in &self.clauses[ci] {
                    self.active[lit_index(l)] += 1;
                }
            }
        }
        self.value[var] = 0;
    }

    fn backtrack_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().unwrap();
            self.unassign(lit);
            // `unassign` does not touch the trail, but `assign` pushed to it.
        }
        self.pending_units.clear();
        self.conflict = false;
    }

    /// Unit propagation followed by pure-literal elimination, to fixpoint.
    /// Returns false on conflict.
    fn simplify(&mut self) -> bool {
        loop {
            while let Some(ci) = self.pending_units.pop() {
                if self.conflict {
                    return false;
                }
                let ci = ci as usize;
                if self.true_count[ci] > 0 {
                    continue;
                }
                let unit = self.clauses[ci]
                    .iter()
                    .copied()
                    .find(|&l| self.lit_value(l) == 0);
                match unit {
                    Some(l) => self.assign(l),
                    None => {
                        self.conflict = true;
                        return false;
                    }
                }
            }
            if self.conflict {
                return false;
            }
            let mut changed = false;
            for var in 1..self.value.len() {
                if self.value[var] != 0 {
                    continue;
                }
                let pos = self.active[lit_index(var as i32)];
                let neg = self.active[lit_index(-(var as i32))];
                if pos > 0 && neg == 0 {
                    self.assign(var as i32);
                    changed = true;
                } else if neg > 0 && pos == 0 {
                    self.assign(-(var as i32));
                    changed = true;
                }
            }
            if !changed && self.pending_units.is_empty() {
                return !self.conflict;
            }
        }
    }

    fn first_open_var(&self) -> Option<i32> {
        // Prefer a variable from some open clause; unconstrained variables are
        // filled in at the end.
        (1..self.value.len())
            .find(|&v| {
                self.value[v] == 0
                    && (self.active[lit_index(v as i32)] > 0
                        || self.active[lit_index(-(v as i32))] > 0)
            })
            .map(|v| v as i32)
    }
}

/// Solves the clause set over variables `1..=num_vars`.
pub fn solve_dpll(num_vars: u32, clauses: &[Vec<i32>], deadline: Option<Instant>) -> DpllOutcome {
    let mut s = State::new(num_vars, clauses);
    if s.conflict {
        return DpllOutcome::Unsat;
    }
    // (trail length before the decision, decision literal, second branch taken)
    let mut decisions: Vec<(usize, i32, bool)> = Vec::new();
    let mut steps: u64 = 0;
    let mut ok = s.simplify();
    loop {
        if ok {
            if s.open_clauses == 0 {
                let assignment = (1..=num_vars as usize).map(|v| s.value[v] > 0).collect();
                return DpllOutcome::Sat(assignment);
            }
            steps += 1;
            if steps.is_multiple_of(256) {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return DpllOutcome::Interrupted;
                    }
                }
            }
            let var = s
                .first_open_var()
                .expect("open clause has an unassigned literal");
            // Try false first.
            let lit = -var;
            decisions.push((s.trail.len(), lit, false));
            s.assign(lit);
            ok = s.simplify();
        } else {
            loop {
                match decisions.pop() {
                    None => return DpllOutcome::Unsat,
                    Some((mark, lit, false)) => {
                        s.backtrack_to(mark);
                        decisions.push((mark, -lit, true));
                        s.assign(-lit);
                        ok = s.simplify();
                        break;
                    }
                    Some((mark, _, true)) => {
                        s.backtrack_to(mark);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(num_vars: u32, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
        match solve_dpll(num_vars, clauses, None) {
            DpllOutcome::Sat(a) => {
                assert!(clauses.iter().all(|c| c
                    .iter()
                    .any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0))));
                Some(a)
            }
            DpllOutcome::Unsat => None,
            DpllOutcome::Interrupted => panic!("no deadline was set"),
        }
    }

    #[test]
    fn contradiction() {
        assert!(check(1, &[vec![1], vec![-1]]).is_none());
    }

    #[test]
    fn single_clause() {
        assert!(check(2, &[vec![1, 2]]).is_some());
    }

    #[test]
    fn empty_formula_assigns_everything() {
        assert_eq!(check(3, &[]), Some(vec![false; 3]));
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i,h): pigeon i in hole h, var = 2*i + h + 1
        let p = |i: i32, h: i32| 2 * i + h + 1;
        let mut clauses = Vec::new();
        for i in 0..3 {
            clauses.push(vec![p(i, 0), p(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    clauses.push(vec![-p(i, h), -p(j, h)]);
                }
            }
        }
        assert!(check(6, &clauses).is_none());
    }

    #[test]
    fn backtracking_restores_counters() {
        // Forces the solver through a failed first branch.
        let clauses = vec![
            vec![1, 2],
            vec![1, -2],
            vec![-1, 3],
            vec![-1, -3, 4],
            vec![-4, 2],
        ];
        let a = check(4, &clauses).unwrap();
        assert!(a[0] && a[2] && a[3] && a[1]);
    }
}
