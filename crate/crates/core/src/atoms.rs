//! Atom interning and dense atom sets.

use std::collections::HashMap;
use std::fmt;

/// A propositional atom, identified by its dense id inside an [`AtomTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name <-> id table. Ids are contiguous from 0 and assigned in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    ids: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, interning it if unseen.
    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&atom) = self.ids.get(name) {
            return atom;
        }
        let atom = Atom(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), atom);
        atom
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.names.len() as u32).map(Atom)
    }
}

/// Checks the atom lexical rule `[a-z][A-Za-z0-9_]*`.
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Bitset over the atom ids of one table.
///
/// Every set built for a given table has the same capacity, so equality and
/// the set operations compare word by word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
    capacity: usize,
}

impl AtomSet {
    pub fn empty(capacity: usize) -> Self {
        AtomSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = Self::empty(capacity);
        for i in 0..capacity {
            set.insert(Atom(i as u32));
        }
        set
    }

    pub fn from_atoms(capacity: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut set = Self::empty(capacity);
        for atom in atoms {
            set.insert(atom);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, atom: Atom) -> bool {
        let i = atom.index();
        i < self.capacity && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, atom: Atom) -> bool {
        let i = atom.index();
        assert!(
            i < self.capacity,
            "atom {i} outside set capacity {}",
            self.capacity
        );
        let was = self.contains(atom);
        self.words[i / 64] |= 1 << (i % 64);
        !was
    }

    #[inline]
    pub fn remove(&mut self, atom: Atom) -> bool {
        let was = self.contains(atom);
        if was {
            let i = atom.index();
            self.words[i / 64] &= !(1 << (i % 64));
        }
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Iterates members in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros();
                w &= w - 1;
                Some(Atom(wi as u32 * 64 + bit))
            })
        })
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.zip_words(other).all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &AtomSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        self.zip_words(other).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.combine(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.combine(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        self.combine(other, |a, b| a & !b)
    }

    fn zip_words<'a>(&'a self, other: &'a AtomSet) -> impl Iterator<Item = (u64, u64)> + 'a {
        let n = self.words.len().max(other.words.len());
        (0..n).map(move |i| {
            (
                self.words.get(i).copied().unwrap_or(0),
                other.words.get(i).copied().unwrap_or(0),
            )
        })
    }

    fn combine(&self, other: &AtomSet, op: impl Fn(u64, u64) -> u64) -> AtomSet {
        let capacity = self.capacity.max(other.capacity);
        let words = self.zip_words(other).map(|(a, b)| op(a, b)).collect();
        AtomSet { words, capacity }
    }

    /// Renders the set as `{a,b,c}` using the names from `table`.
    pub fn display<'a>(&'a self, table: &'a AtomTable) -> impl fmt::Display + 'a {
        DisplaySet { set: self, table }
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

struct DisplaySet<'a> {
    set: &'a AtomSet,
    table: &'a AtomTable,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.table.name(atom))?;
        }
        f.write_str("}")
    }
}
