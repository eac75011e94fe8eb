use std::collections::BTreeMap;

use serde::Serialize;

use crate::constraints::{Atom, Constraint};
use crate::decor::BoolParam;

/// A total boolean assignment: parameters outside the true-set read 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoolAssignment {
    true_set: std::collections::BTreeSet<BoolParam>,
}

impl BoolAssignment {
    pub fn value(&self, b: BoolParam) -> bool {
        self.true_set.contains(&b)
    }

    pub fn set_true(&mut self, b: BoolParam) {
        self.true_set.insert(b);
    }

    pub fn trues(&self) -> impl Iterator<Item = BoolParam> + '_ {
        self.true_set.iter().copied()
    }

    /// Pointwise `<=` (extensional order).
    pub fn leq(&self, other: &impl Fn(BoolParam) -> bool) -> bool {
        self.true_set.iter().all(|b| other(*b))
    }
}

/// One step of the saturation, kept for diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct DerivationStep {
    pub param: String,
    pub value: u8,
    pub via: String,
    pub from: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BoolUnsat {
    pub conflict: BoolParam,
    pub derivation: Vec<DerivationStep>,
}

/// Saturate the boolean constraints: propagate constants across equalities
/// (symmetrically) and fire implications whose antecedent was derived 1.
/// Returns the minimal solution — exactly the parameters forced to 1 — or
/// the conflicting parameter with its derivation trace.
pub fn solve_boolean_minimal(
    atoms: &[&Constraint],
) -> Result<(BoolAssignment, Vec<DerivationStep>), BoolUnsat> {
    let mut eq_edges: BTreeMap<BoolParam, Vec<(BoolParam, usize)>> = BTreeMap::new();
    let mut impl_edges: BTreeMap<BoolParam, Vec<(BoolParam, usize)>> = BTreeMap::new();
    let mut seeds: Vec<(BoolParam, bool, usize)> = Vec::new();
    for (idx, c) in atoms.iter().enumerate() {
        match &c.atom {
            Atom::BoolConst(b, v) => seeds.push((*b, *v, idx)),
            Atom::BoolEq(a, b) => {
                eq_edges.entry(*a).or_default().push((*b, idx));
                eq_edges.entry(*b).or_default().push((*a, idx));
            }
            Atom::BoolImpl(a, b) => impl_edges.entry(*a).or_default().push((*b, idx)),
            _ => {}
        }
    }

    let mut assigned: BTreeMap<BoolParam, bool> = BTreeMap::new();
    let mut steps: Vec<DerivationStep> = Vec::new();
    let mut queue: Vec<BoolParam> = Vec::new();

    let push = |p: BoolParam,
                    v: bool,
                    via: usize,
                    from: Option<BoolParam>,
                    assigned: &mut BTreeMap<BoolParam, bool>,
                    steps: &mut Vec<DerivationStep>,
                    queue: &mut Vec<BoolParam>|
     -> Result<(), BoolUnsat> {
        match assigned.get(&p) {
            Some(old) if *old == v => Ok(()),
            Some(_) => {
                steps.push(DerivationStep {
                    param: p.to_string(),
                    value: v as u8,
                    via: atoms[via].atom.to_string(),
                    from: from.map(|f| f.to_string()),
                });
                Err(BoolUnsat { conflict: p, derivation: steps.clone() })
            }
            None => {
                assigned.insert(p, v);
                steps.push(DerivationStep {
                    param: p.to_string(),
                    value: v as u8,
                    via: atoms[via].atom.to_string(),
                    from: from.map(|f| f.to_string()),
                });
                queue.push(p);
                Ok(())
            }
        }
    };

    for (p, v, idx) in seeds {
        push(p, v, idx, None, &mut assigned, &mut steps, &mut queue)?;
    }
    while let Some(p) = queue.pop() {
        let v = assigned[&p];
        if let Some(neigh) = eq_edges.get(&p) {
            for (q, idx) in neigh.clone() {
                push(q, v, idx, Some(p), &mut assigned, &mut steps, &mut queue)?;
            }
        }
        if v {
            if let Some(targets) = impl_edges.get(&p) {
                for (q, idx) in targets.clone() {
                    push(q, true, idx, Some(p), &mut assigned, &mut steps, &mut queue)?;
                }
            }
        }
    }

    let mut psi = BoolAssignment::default();
    for (p, v) in &assigned {
        if *v {
            psi.set_true(*p);
        }
    }
    Ok((psi, steps))
}

/// Keep `c >= 1` exactly for the mixed atoms whose guard is 1 under `psi`.
pub fn apply_guards<'a>(
    psi: &BoolAssignment,
    mixed: impl IntoIterator<Item = &'a Constraint>,
) -> Vec<&'a Constraint> {
    mixed
        .into_iter()
        .filter(|c| match &c.atom {
            Atom::Mixed(b, _) => psi.value(*b),
            _ => false,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fterm::Path;

    fn c(atom: Atom) -> Constraint {
        Constraint { atom, rule: crate::constraints::Rule::LtypeShared, path: Path::root() }
    }

    #[test]
    fn fixpoint_propagates_equalities_and_implications() {
        let b1 = BoolParam(1);
        let b2 = BoolParam(2);
        let b3 = BoolParam(3);
        let atoms = vec![
            c(Atom::BoolEq(b1, b2)),
            c(Atom::BoolConst(b2, true)),
            c(Atom::BoolImpl(b1, b3)),
        ];
        let refs: Vec<&Constraint> = atoms.iter().collect();
        let (psi, steps) = solve_boolean_minimal(&refs).unwrap();
        assert!(psi.value(b1) && psi.value(b2) && psi.value(b3));
        assert!(!psi.value(BoolParam(4)), "unmentioned parameters default to 0");
        assert!(!steps.is_empty());
    }

    #[test]
    fn direct_conflict_is_unsatisfiable() {
        let b = BoolParam(1);
        let atoms = vec![c(Atom::BoolConst(b, false)), c(Atom::BoolConst(b, true))];
        let refs: Vec<&Constraint> = atoms.iter().collect();
        let err = solve_boolean_minimal(&refs).unwrap_err();
        assert_eq!(err.conflict, b);
        assert!(err.derivation.len() >= 2);
    }

    #[test]
    fn empty_set_yields_all_zero() {
        let (psi, steps) = solve_boolean_minimal(&[]).unwrap();
        assert_eq!(psi.trues().count(), 0);
        assert!(steps.is_empty());
    }

    #[test]
    fn implications_do_not_fire_backwards() {
        // b=1 => b'=1 with nothing else: minimal solution is all-zero
        let atoms = vec![c(Atom::BoolImpl(BoolParam(1), BoolParam(2)))];
        let refs: Vec<&Constraint> = atoms.iter().collect();
        let (psi, _) = solve_boolean_minimal(&refs).unwrap();
        assert_eq!(psi.trues().count(), 0);
    }

    #[test]
    fn zero_propagates_through_equalities() {
        let b1 = BoolParam(1);
        let b2 = BoolParam(2);
        let atoms = vec![
            c(Atom::BoolConst(b1, false)),
            c(Atom::BoolEq(b1, b2)),
            c(Atom::BoolConst(b2, true)),
        ];
        let refs: Vec<&Constraint> = atoms.iter().collect();
        assert!(solve_boolean_minimal(&refs).is_err());
    }
}
