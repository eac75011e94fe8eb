use std::collections::BTreeSet;

use crate::decor::{BoolParam, Instantiation, IntParam, PTerm};

use super::atom::{Atom, Constraint, ConstraintClass};

/// The generated constraints of one term, with the parameter inventory of
/// its free decoration. Emissions keep full provenance; identical
/// (atom, rule, path) triples collapse. Trivially true parameter-free atoms
/// (empty prefix sums) are never stored.
#[derive(Debug, Clone, Default)]
pub struct ConstraintStore {
    pub constraints: Vec<Constraint>,
    pub bool_params: BTreeSet<BoolParam>,
    pub int_params: BTreeSet<IntParam>,
    seen: BTreeSet<Constraint>,
}

impl ConstraintStore {
    pub fn new(term: &PTerm) -> Self {
        let (bool_params, int_params) = term.parameters();
        ConstraintStore { constraints: Vec::new(), bool_params, int_params, seen: BTreeSet::new() }
    }

    pub fn push(&mut self, c: Constraint) {
        if c.atom.is_trivially_true() {
            return;
        }
        if self.seen.insert(c.clone()) {
            self.constraints.push(c);
        }
    }

    /// Distinct atoms, forgetting provenance.
    pub fn distinct_atoms(&self) -> BTreeSet<Atom> {
        self.constraints.iter().map(|c| c.atom.clone()).collect()
    }

    /// Distinct atom counts per class: (boolean, linear, mixed).
    pub fn class_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for atom in self.distinct_atoms() {
            match atom.class() {
                ConstraintClass::Boolean => counts.0 += 1,
                ConstraintClass::Linear => counts.1 += 1,
                ConstraintClass::Mixed => counts.2 += 1,
            }
        }
        counts
    }

    pub fn atoms_of_class(&self, class: ConstraintClass) -> Vec<&Constraint> {
        self.constraints.iter().filter(|c| c.atom.class() == class).collect()
    }

    /// First constraint violated by the assignment, if any.
    pub fn first_violated(&self, phi: &Instantiation) -> Option<&Constraint> {
        self.constraints.iter().find(|c| !c.atom.is_satisfied(phi))
    }

    pub fn is_satisfied_by(&self, phi: &Instantiation) -> bool {
        self.first_violated(phi).is_none()
    }

    /// Stable text listing: one emission per line,
    /// `CLASS | ATOM | RULE | PATH`, ordered path-lexicographically.
    pub fn dump(&self) -> String {
        let mut rows: Vec<&Constraint> = self.constraints.iter().collect();
        rows.sort_by(|a, b| {
            (&a.path, a.rule, &a.atom).cmp(&(&b.path, b.rule, &b.atom))
        });
        let mut out = String::new();
        for c in rows {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }
}
