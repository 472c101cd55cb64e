//! Ground disjunctive programs.

use std::fmt;
use std::sync::Arc;

use crate::atoms::{is_valid_atom_name, Atom, AtomSet, AtomTable};
use crate::error::{Error, Result};

/// A rule `h1 | ... | hl :- p1, ..., pn, not z1, ..., not zm.`
///
/// All three atom lists are kept sorted by id and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    head: Vec<Atom>,
    pos_body: Vec<Atom>,
    neg_body: Vec<Atom>,
}

fn normalize(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_unstable();
    atoms.dedup();
    atoms
}

impl Rule {
    pub fn new(head: Vec<Atom>, pos_body: Vec<Atom>, neg_body: Vec<Atom>) -> Self {
        Rule {
            head: normalize(head),
            pos_body: normalize(pos_body),
            neg_body: normalize(neg_body),
        }
    }

    pub fn head(&self) -> &[Atom] {
        &self.head
    }

    pub fn pos_body(&self) -> &[Atom] {
        &self.pos_body
    }

    pub fn neg_body(&self) -> &[Atom] {
        &self.neg_body
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.head
            .iter()
            .chain(&self.pos_body)
            .chain(&self.neg_body)
            .copied()
    }

    /// B+ ∩ (H ∪ B−) ≠ ∅.
    pub fn is_tautological(&self) -> bool {
        self.pos_body
            .iter()
            .any(|a| self.head.binary_search(a).is_ok() || self.neg_body.binary_search(a).is_ok())
    }

    pub fn is_normal(&self) -> bool {
        self.head.len() <= 1
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_negation_free(&self) -> bool {
        self.neg_body.is_empty()
    }

    pub fn is_horn(&self) -> bool {
        self.is_normal() && self.is_negation_free()
    }

    /// A set M satisfies r iff (H ∪ B−) ∩ M ≠ ∅ or B+ \ M ≠ ∅.
    pub fn is_satisfied_by(&self, m: &AtomSet) -> bool {
        self.head
            .iter()
            .chain(&self.neg_body)
            .any(|&a| m.contains(a))
            || self.pos_body.iter().any(|&a| !m.contains(a))
    }

    pub fn display<'a>(&'a self, table: &'a AtomTable) -> impl fmt::Display + 'a {
        DisplayRule { rule: self, table }
    }
}

struct DisplayRule<'a> {
    rule: &'a Rule,
    table: &'a AtomTable,
}

impl fmt::Display for DisplayRule<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.table;
        for (i, &a) in self.rule.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            f.write_str(t.name(a))?;
        }
        let body: Vec<String> = self
            .rule
            .pos_body
            .iter()
            .map(|&a| t.name(a).to_owned())
            .chain(
                self.rule
                    .neg_body
                    .iter()
                    .map(|&a| format!("not {}", t.name(a))),
            )
            .collect();
        if !body.is_empty() {
            if !self.rule.head.is_empty() {
                f.write_str(" ")?;
            }
            write!(f, ":- {}", body.join(", "))?;
        } else if self.rule.head.is_empty() {
            // Empty head and body only arises from atom deletion; it has no source form.
            f.write_str(":- ")?;
        }
        f.write_str(".")
    }
}

/// Syntactic class flags of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub normal: bool,
    pub horn: bool,
    pub negation_free: bool,
    pub tight: bool,
}

/// Counters gathered while a program was ingested.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub tautologies_removed: usize,
    pub duplicate_atoms: usize,
}

/// An ordered list of rules over a shared atom table.
///
/// Programs derived from one another (reducts, restrictions, deletions) share
/// the table, so their atom sets live in the same id space. `at(P)` may then
/// be a strict subset of the table; see [`Program::atoms_used`].
#[derive(Debug, Clone)]
pub struct Program {
    table: Arc<AtomTable>,
    rules: Vec<Rule>,
    flags: Flags,
    ingest: IngestReport,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules && *self.table == *other.table
    }
}

impl Eq for Program {}

impl Program {
    pub fn new(table: Arc<AtomTable>, rules: Vec<Rule>) -> Self {
        let flags = classify_rules(table.len(), &rules);
        Program {
            table,
            rules,
            flags,
            ingest: IngestReport::default(),
        }
    }

    /// Builds a program sharing this program's atom table.
    pub fn derive(&self, rules: Vec<Rule>) -> Program {
        Program::new(Arc::clone(&self.table), rules)
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn shared_table(&self) -> &Arc<AtomTable> {
        &self.table
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn ingest_report(&self) -> IngestReport {
        self.ingest
    }

    /// Size of the atom id space (not `|at(P)|`).
    pub fn capacity(&self) -> usize {
        self.table.len()
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::empty(self.capacity())
    }

    pub fn set_of(&self, atoms: impl IntoIterator<Item = Atom>) -> AtomSet {
        AtomSet::from_atoms(self.capacity(), atoms)
    }

    /// Resolves atom names into a set; unknown names are an error.
    pub fn set_from_names<S: AsRef<str>>(
        &self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<AtomSet> {
        let mut set = self.empty_set();
        for name in names {
            let name = name.as_ref();
            let atom = self
                .table
                .get(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_owned()))?;
            set.insert(atom);
        }
        Ok(set)
    }

    /// at(P): atoms occurring in some rule.
    pub fn atoms_used(&self) -> AtomSet {
        let mut set = self.empty_set();
        for rule in &self.rules {
            for a in rule.atoms() {
                set.insert(a);
            }
        }
        set
    }

    /// Literal count plus rule count; the usual input-size measure.
    pub fn size(&self) -> usize {
        self.rules
            .iter()
            .map(|r| 1 + r.head.len() + r.pos_body.len() + r.neg_body.len())
            .sum()
    }

    /// Drops tautological rules, keeping the order of the others.
    pub fn remove_tautologies(&self) -> Program {
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| !r.is_tautological())
            .cloned()
            .collect();
        let removed = self.rules.len() - rules.len();
        let mut out = self.derive(rules);
        out.ingest = IngestReport {
            tautologies_removed: self.ingest.tautologies_removed + removed,
            duplicate_atoms: self.ingest.duplicate_atoms,
        };
        out
    }

    pub fn is_model(&self, m: &AtomSet) -> bool {
        self.rules.iter().all(|r| r.is_satisfied_by(m))
    }

    pub fn is_tautology_free(&self) -> bool {
        self.rules.iter().all(|r| !r.is_tautological())
    }
}

/// Whether `m` satisfies `r`.
pub fn satisfies(m: &AtomSet, r: &Rule) -> bool {
    r.is_satisfied_by(m)
}

/// Recomputes the class flags of `p` from its rules.
pub fn classify(p: &Program) -> Flags {
    classify_rules(p.capacity(), p.rules())
}

fn classify_rules(capacity: usize, rules: &[Rule]) -> Flags {
    let normal = rules.iter().all(Rule::is_normal);
    let negation_free = rules.iter().all(Rule::is_negation_free);
    Flags {
        normal,
        horn: normal && negation_free,
        negation_free,
        tight: positive_graph_is_acyclic(capacity, rules),
    }
}

/// Adjacency lists of D⁺_P: edge x -> y iff some rule has x ∈ H and y ∈ B+.
pub fn positive_dependency_graph(p: &Program) -> Vec<Vec<Atom>> {
    positive_edges(p.capacity(), p.rules())
}

fn positive_edges(capacity: usize, rules: &[Rule]) -> Vec<Vec<Atom>> {
    let mut adj: Vec<Vec<Atom>> = vec![Vec::new(); capacity];
    for r in rules {
        for &h in &r.head {
            adj[h.index()].extend_from_slice(&r.pos_body);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn positive_graph_is_acyclic(capacity: usize, rules: &[Rule]) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let adj = positive_edges(capacity, rules);
    let mut mark = vec![Mark::White; capacity];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..capacity {
        if mark[root] != Mark::White {
            continue;
        }
        mark[root] = Mark::Grey;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                match mark[w.index()] {
                    Mark::Grey => return false,
                    Mark::White => {
                        mark[w.index()] = Mark::Grey;
                        stack.push((w.index(), 0));
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                stack.pop();
            }
        }
    }
    true
}

impl fmt::Display for Program {
    /// One rule per line in source syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{}", rule.display(&self.table))?;
        }
        Ok(())
    }
}

/// Incremental construction of a program from atom names.
///
/// [`ProgramBuilder::build`] drops tautological rules and compacts the atom
/// table to the atoms still in use, keeping first-appearance order.
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    table: AtomTable,
    rules: Vec<Rule>,
    duplicates: usize,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(&mut self, name: &str) -> Result<Atom> {
        if !is_valid_atom_name(name) {
            return Err(Error::InvalidAtomName(name.to_owned()));
        }
        Ok(self.table.intern(name))
    }

    /// Adds a rule given by atom names.
    pub fn rule(
        &mut self,
        head: &[&str],
        pos_body: &[&str],
        neg_body: &[&str],
    ) -> Result<&mut Self> {
        let mut ids =
            |names: &[&str]| -> Result<Vec<Atom>> { names.iter().map(|n| self.atom(n)).collect() };
        let head = ids(head)?;
        let pos = ids(pos_body)?;
        let neg = ids(neg_body)?;
        self.push_rule(head, pos, neg);
        Ok(self)
    }

    /// Adds a rule over atoms previously returned by [`ProgramBuilder::atom`].
    pub fn push_rule(&mut self, head: Vec<Atom>, pos_body: Vec<Atom>, neg_body: Vec<Atom>) {
        let raw = head.len() + pos_body.len() + neg_body.len();
        let rule = Rule::new(head, pos_body, neg_body);
        self.duplicates += raw - rule.atoms().count();
        self.rules.push(rule);
    }

    pub fn build(self) -> Program {
        let total = self.rules.len();
        let kept: Vec<Rule> = self
            .rules
            .into_iter()
            .filter(|r| !r.is_tautological())
            .collect();
        let mut used = vec![false; self.table.len()];
        for r in &kept {
            for a in r.atoms() {
                used[a.index()] = true;
            }
        }
        let mut table = AtomTable::new();
        let mut remap = vec![Atom(u32::MAX); used.len()];
        for old in self.table.atoms() {
            if used[old.index()] {
                remap[old.index()] = table.intern(self.table.name(old));
            }
        }
        let map = |atoms: &[Atom]| atoms.iter().map(|a| remap[a.index()]).collect::<Vec<_>>();
        let rules = kept
            .iter()
            .map(|r| Rule::new(map(&r.head), map(&r.pos_body), map(&r.neg_body)))
            .collect::<Vec<_>>();
        let mut program = Program::new(Arc::new(table), rules);
        program.ingest = IngestReport {
            tautologies_removed: total - program.rules.len(),
            duplicate_atoms: self.duplicates,
        };
        program
    }
}
