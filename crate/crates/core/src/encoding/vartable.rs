use std::fmt;
use std::sync::Arc;

use crate::atoms::{Atom, AtomTable};
use crate::encoding::formula::Var;
use crate::program::Program;

/// Semantic role of a CNF variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    /// `v[a]`: atom `a` belongs to the candidate set.
    Atom(Atom),
    /// `u_block^layer[a]`: `a` derived after `layer` steps in block `block` (1-based).
    Layer { block: u64, layer: u32, atom: Atom },
    /// A variable with no program meaning (formulas not built from a program).
    Free,
    /// Tseitin label.
    Aux,
}

/// Variable layout: v-vars first, then u-vars block by block, layer by layer.
///
/// Ids are pure arithmetic on `(block, layer, atom index)`, so any block can be
/// built without coordinating with the others.
#[derive(Debug, Clone)]
pub struct VarTable {
    table: Arc<AtomTable>,
    atoms: Vec<Atom>,
    index: Vec<Option<u32>>,
    free: u32,
    blocks: u64,
    layers: u32,
}

impl VarTable {
    /// Layout for `p` with `blocks` least-model blocks.
    ///
    /// Covers the atoms of `at(p)`; the layer count is `min(|P|, |at(P)|)`.
    pub fn new(p: &Program, blocks: u64) -> Self {
        let atoms: Vec<Atom> = p.atoms_used().iter().collect();
        let mut index = vec![None; p.capacity()];
        for (i, a) in atoms.iter().enumerate() {
            index[a.index()] = Some(i as u32);
        }
        let layers = p.len().min(atoms.len()) as u32;
        VarTable {
            table: Arc::clone(p.shared_table()),
            atoms,
            index,
            free: 0,
            blocks,
            layers,
        }
    }

    /// Layout with `n` anonymous variables and no program behind it.
    pub fn plain(n: u32) -> Self {
        VarTable {
            table: Arc::new(AtomTable::new()),
            atoms: Vec::new(),
            index: Vec::new(),
            free: n,
            blocks: 0,
            layers: 0,
        }
    }

    pub fn atom_table(&self) -> &AtomTable {
        &self.table
    }

    /// Atoms with a v-var, ascending.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> u32 {
        self.atoms.len() as u32
    }

    pub fn blocks(&self) -> u64 {
        self.blocks
    }

    /// `p`: the highest layer index; layers run `0..=p`.
    pub fn layers(&self) -> u32 {
        self.layers
    }

    pub fn contains_atom(&self, a: Atom) -> bool {
        self.index.get(a.index()).copied().flatten().is_some()
    }

    pub fn try_v(&self, a: Atom) -> Option<Var> {
        self.index.get(a.index()).copied().flatten().map(|i| i + 1)
    }

    /// The v-var of `a`. Panics if `a` is not in the layout.
    pub fn v(&self, a: Atom) -> Var {
        self.try_v(a).expect("atom has no v-var")
    }

    pub fn u(&self, block: u64, layer: u32, a: Atom) -> Var {
        assert!(block >= 1 && block <= self.blocks && layer <= self.layers);
        let n = self.atoms.len() as u64;
        let i = self.index[a.index()].expect("atom has no u-var") as u64;
        let offset = ((block - 1) * (self.layers as u64 + 1) + layer as u64) * n + i;
        (n + offset + 1) as Var
    }

    /// Count of v-vars and u-vars (or free vars); Tseitin labels come after.
    pub fn len(&self) -> u32 {
        let n = self.atoms.len() as u64;
        (self.free as u64 + n + self.blocks * (self.layers as u64 + 1) * n) as u32
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn role(&self, var: Var) -> VarRole {
        let n = self.atoms.len() as u64;
        let id = var as u64;
        if id == 0 || id > self.len() as u64 {
            return VarRole::Aux;
        }
        if self.free > 0 {
            return VarRole::Free;
        }
        if id <= n {
            return VarRole::Atom(self.atoms[(id - 1) as usize]);
        }
        let offset = id - n - 1;
        let per_block = (self.layers as u64 + 1) * n;
        VarRole::Layer {
            block: offset / per_block + 1,
            layer: ((offset % per_block) / n) as u32,
            atom: self.atoms[(offset % n) as usize],
        }
    }

    /// One sidecar line for `var`: `v <id> <atom>`, `u <id> <block> <layer> <atom>` or `t <id>`.
    pub fn describe(&self, var: Var) -> impl fmt::Display + '_ {
        Described { vt: self, var }
    }
}

struct Described<'a> {
    vt: &'a VarTable,
    var: Var,
}

impl fmt::Display for Described<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.vt.table;
        match self.vt.role(self.var) {
            VarRole::Atom(a) => write!(f, "v {} {}", self.var, t.name(a)),
            VarRole::Layer { block, layer, atom } => {
                write!(f, "u {} {} {} {}", self.var, block, layer, t.name(atom))
            }
            VarRole::Free => write!(f, "x {}", self.var),
            VarRole::Aux => write!(f, "t {}", self.var),
        }
    }
}
