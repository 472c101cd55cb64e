//! Strong Normal-backdoors: detection through vertex cover, reducts, and
//! verification.

use std::collections::BTreeMap;

use crate::atoms::{Atom, AtomSet, AtomTable};
use crate::error::{Error, Result};
use crate::program::{Program, Rule};

/// Largest backdoor for which all `2^|X|` truth assignments are enumerated.
pub const ASSIGNMENT_LIMIT: usize = 20;

/// Undirected graph joining atoms that share a rule head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadGraph {
    capacity: usize,
    vertices: Vec<Atom>,
    edges: Vec<(Atom, Atom)>,
}

impl HeadGraph {
    /// Builds a graph from explicit edges; self-loops and duplicates are dropped.
    pub fn from_edges(
        capacity: usize,
        vertices: Vec<Atom>,
        edges: impl IntoIterator<Item = (Atom, Atom)>,
    ) -> Self {
        let mut edges: Vec<(Atom, Atom)> = edges
            .into_iter()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| (x.min(y), x.max(y)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        HeadGraph {
            capacity,
            vertices,
            edges,
        }
    }

    pub fn vertices(&self) -> &[Atom] {
        &self.vertices
    }

    /// Edges as `(low, high)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(Atom, Atom)] {
        &self.edges
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_cover(&self, cover: &AtomSet) -> bool {
        self.edges
            .iter()
            .all(|&(x, y)| cover.contains(x) || cover.contains(y))
    }
}

pub fn head_dependency_graph(p: &Program) -> HeadGraph {
    let mut edges = Vec::new();
    for r in p.rules() {
        let h = r.head();
        for (i, &x) in h.iter().enumerate() {
            for &y in &h[i + 1..] {
                edges.push((x, y));
            }
        }
    }
    HeadGraph::from_edges(p.capacity(), p.atoms_used().iter().collect(), edges)
}

/// A vertex cover of `g` with at most `k` vertices, if one exists.
///
/// Vertices of degree above the remaining budget are forced into the cover;
/// otherwise the search branches on the lexicographically smallest uncovered
/// edge, lower endpoint first. At most `2^k` leaves.
pub fn vertex_cover_bounded(g: &HeadGraph, k: usize) -> Option<AtomSet> {
    let mut chosen = Vec::new();
    if cover_search(g.edges.clone(), k, &mut chosen) {
        Some(AtomSet::from_atoms(g.capacity, chosen))
    } else {
        None
    }
}

fn take_vertex(edges: &[(Atom, Atom)], v: Atom) -> Vec<(Atom, Atom)> {
    edges
        .iter()
        .copied()
        .filter(|&(x, y)| x != v && y != v)
        .collect()
}

fn cover_search(mut edges: Vec<(Atom, Atom)>, mut budget: usize, chosen: &mut Vec<Atom>) -> bool {
    let mark = chosen.len();
    loop {
        if edges.is_empty() {
            return true;
        }
        // Degree kernel: a vertex with more than `budget` edges must be taken.
        let mut degree: BTreeMap<Atom, usize> = BTreeMap::new();
        for &(x, y) in &edges {
            *degree.entry(x).or_default() += 1;
            *degree.entry(y).or_default() += 1;
        }
        match degree.iter().find(|&(_, &d)| d > budget) {
            Some((&v, _)) => {
                if budget == 0 {
                    chosen.truncate(mark);
                    return false;
                }
                budget -= 1;
                chosen.push(v);
                edges = take_vertex(&edges, v);
            }
            None => break,
        }
    }
    // Every remaining vertex covers at most `budget` edges.
    if edges.len() > budget * budget {
        chosen.truncate(mark);
        return false;
    }
    let (x, y) = edges[0];
    for v in [x, y] {
        chosen.push(v);
        if cover_search(take_vertex(&edges, v), budget - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    chosen.truncate(mark);
    false
}

/// P − X: removes the atoms of `x` (and their negations) from every rule.
/// No rule is dropped, so a rule may end up empty.
pub fn delete_atoms(p: &Program, x: &AtomSet) -> Program {
    let keep = |atoms: &[Atom]| {
        atoms
            .iter()
            .copied()
            .filter(|&a| !x.contains(a))
            .collect::<Vec<_>>()
    };
    p.derive(
        p.rules()
            .iter()
            .map(|r| Rule::new(keep(r.head()), keep(r.pos_body()), keep(r.neg_body())))
            .collect(),
    )
}

/// A total truth assignment over a set of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthAssignment {
    domain: AtomSet,
    ones: AtomSet,
}

impl TruthAssignment {
    /// `ones` must lie inside `domain`; atoms of the domain outside it map to 0.
    pub fn new(domain: AtomSet, ones: AtomSet) -> Result<Self> {
        if !ones.is_subset(&domain) {
            return Err(Error::MalformedAssignment(
                "true atoms outside the domain".into(),
            ));
        }
        Ok(TruthAssignment { domain, ones })
    }

    /// Assignment over `atoms` where bit `i` of `mask` is the value of `atoms[i]`.
    pub fn from_mask(capacity: usize, atoms: &[Atom], mask: u64) -> Self {
        let domain = AtomSet::from_atoms(capacity, atoms.iter().copied());
        let ones = AtomSet::from_atoms(
            capacity,
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a),
        );
        TruthAssignment { domain, ones }
    }

    pub fn domain(&self) -> &AtomSet {
        &self.domain
    }

    /// τ⁻¹(1)
    pub fn true_atoms(&self) -> &AtomSet {
        &self.ones
    }

    /// τ⁻¹(0)
    pub fn false_atoms(&self) -> AtomSet {
        self.domain.difference(&self.ones)
    }

    pub fn value(&self, atom: Atom) -> Option<bool> {
        self.domain.contains(atom).then(|| self.ones.contains(atom))
    }
}

/// Truth-assignment reduct P_τ.
///
/// A rule is dropped when (i) its head meets τ⁻¹(1), (ii) its head lies inside
/// the domain, (iii) its positive body meets τ⁻¹(0), or (iv) its negative body
/// meets τ⁻¹(1). Domain atoms are then stripped from the survivors.
pub fn assignment_reduct(p: &Program, t: &TruthAssignment) -> Program {
    let x = t.domain();
    let ones = t.true_atoms();
    let zeros = t.false_atoms();
    let meets = |atoms: &[Atom], s: &AtomSet| atoms.iter().any(|&a| s.contains(a));
    let strip = |atoms: &[Atom]| {
        atoms
            .iter()
            .copied()
            .filter(|&a| !x.contains(a))
            .collect::<Vec<_>>()
    };
    let rules = p
        .rules()
        .iter()
        .filter(|r| {
            !(meets(r.head(), ones)
                || r.head().iter().all(|&a| x.contains(a))
                || meets(r.pos_body(), &zeros)
                || meets(r.neg_body(), ones))
        })
        .map(|r| Rule::new(strip(r.head()), strip(r.pos_body()), strip(r.neg_body())))
        .collect();
    p.derive(rules)
}

/// Whether `x` is a strong Normal-backdoor of the tautology-free program `p`.
///
/// Strong and deletion Normal-backdoors coincide here, so this only checks
/// that P − X is normal.
pub fn verify_strong_backdoor(p: &Program, x: &AtomSet) -> bool {
    debug_assert!(p.is_tautology_free());
    let deletion = delete_atoms(p, x).flags().normal;
    #[cfg(debug_assertions)]
    if x.len() <= 6 {
        debug_assert_eq!(Ok(deletion), verify_strong_backdoor_by_reducts(p, x));
    }
    deletion
}

/// Strong-backdoor check by definition: every P_τ, τ over `x`, is normal.
pub fn verify_strong_backdoor_by_reducts(p: &Program, x: &AtomSet) -> Result<bool> {
    let atoms: Vec<Atom> = x.iter().collect();
    if atoms.len() > ASSIGNMENT_LIMIT {
        return Err(Error::SizeGuard {
            what: "backdoor",
            size: atoms.len(),
            limit: ASSIGNMENT_LIMIT,
        });
    }
    Ok((0..1u64 << atoms.len()).all(|mask| {
        assignment_reduct(p, &TruthAssignment::from_mask(p.capacity(), &atoms, mask))
            .flags()
            .normal
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackdoorKind {
    Strong,
    Deletion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetClass {
    Normal,
}

/// A backdoor set together with its kind and target class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backdoor {
    atoms: AtomSet,
    kind: BackdoorKind,
    target: TargetClass,
    verified: bool,
}

impl Backdoor {
    /// Verifies `x` against `p`; errors if it is not a strong Normal-backdoor.
    pub fn verified(p: &Program, x: AtomSet) -> Result<Self> {
        if !verify_strong_backdoor(p, &x) {
            return Err(Error::NotABackdoor);
        }
        Ok(Backdoor {
            atoms: x,
            kind: BackdoorKind::Strong,
            target: TargetClass::Normal,
            verified: true,
        })
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn kind(&self) -> BackdoorKind {
        self.kind
    }

    pub fn target(&self) -> TargetClass {
        self.target
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn k(&self) -> usize {
        self.atoms.len()
    }
}

/// Smallest strong Normal-backdoor of size at most `max_k`.
pub fn find_backdoor(p: &Program, max_k: usize) -> Option<Backdoor> {
    let graph = head_dependency_graph(p);
    let cover = (0..=max_k).find_map(|k| vertex_cover_bounded(&graph, k))?;
    Some(Backdoor::verified(p, cover).expect("vertex covers of the head graph are backdoors"))
}

/// One atom name per line, sorted by name.
pub fn serialize_backdoor(x: &AtomSet, table: &AtomTable) -> String {
    let mut names: Vec<&str> = x.iter().map(|a| table.name(a)).collect();
    names.sort_unstable();
    names.iter().map(|n| format!("{n}\n")).collect()
}

/// Reads a backdoor given one name per line or as a comma-separated list.
pub fn parse_backdoor(p: &Program, text: &str) -> Result<AtomSet> {
    let names = text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty());
    p.set_from_names(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn normal_program_has_no_head_edges() {
        let p = parse_program("a :- b. b :- not a. :- a.").unwrap();
        assert!(head_dependency_graph(&p).edges().is_empty());
        assert_eq!(find_backdoor(&p, 0).unwrap().k(), 0);
        assert!(verify_strong_backdoor(&p, &p.empty_set()));
    }

    #[test]
    fn deduplicated_head_has_no_self_loop() {
        let p = parse_program("a | a :- b.").unwrap();
        assert!(head_dependency_graph(&p).edges().is_empty());
    }

    #[test]
    fn edgeless_cover_is_empty() {
        let g = HeadGraph::from_edges(3, vec![Atom(0), Atom(1), Atom(2)], []);
        assert_eq!(vertex_cover_bounded(&g, 0), Some(AtomSet::empty(3)));
    }

    #[test]
    fn star_is_covered_by_its_centre() {
        let g = HeadGraph::from_edges(
            5,
            (0..5).map(Atom).collect(),
            (1..5).map(|i| (Atom(0), Atom(i))),
        );
        assert_eq!(
            vertex_cover_bounded(&g, 1),
            Some(AtomSet::from_atoms(5, [Atom(0)]))
        );
        assert_eq!(vertex_cover_bounded(&g, 0), None);
    }

    #[test]
    fn deleting_everything_leaves_empty_rule() {
        let p = parse_program("a | b.").unwrap();
        let q = delete_atoms(&p, &p.atoms_used());
        assert_eq!(q.len(), 1);
        assert!(q.rules()[0].atoms().next().is_none());
        assert_eq!(delete_atoms(&p, &p.empty_set()), p);
    }

    #[test]
    fn assignment_rejects_outside_ones() {
        let d = AtomSet::from_atoms(2, [Atom(0)]);
        let o = AtomSet::from_atoms(2, [Atom(1)]);
        assert!(TruthAssignment::new(d, o).is_err());
    }

    #[test]
    fn backdoor_text_forms() {
        let p = parse_program("b | a. c | d.").unwrap();
        let x = parse_backdoor(&p, "b, c").unwrap();
        assert_eq!(serialize_backdoor(&x, p.table()), "b\nc\n");
        assert_eq!(parse_backdoor(&p, "c\nb\n").unwrap(), x);
        assert!(matches!(
            parse_backdoor(&p, "zz"),
            Err(Error::UnknownAtom(_))
        ));
        assert!(!verify_strong_backdoor(
            &p,
            &p.set_from_names(["a"]).unwrap()
        ));
        assert!(Backdoor::verified(&p, p.set_from_names(["a"]).unwrap()).is_err());
    }
}
