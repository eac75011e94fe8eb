use std::collections::BTreeMap;

use thiserror::Error;

use crate::fterm::Path;

use super::params::{BoolParam, IntParam, LinComb};
use super::pseudo::{PseudoTerm, StarLin, StarSkel, StarType};
use super::pterm::PTerm;
use super::ptype::{BangPType, LinPType, PSkel};

/// A finite assignment of booleans and integers to parameters. Unmentioned
/// booleans read 0 and unmentioned integers read 0.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Instantiation {
    bools: BTreeMap<BoolParam, bool>,
    ints: BTreeMap<IntParam, i64>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_bool(&mut self, p: BoolParam, v: bool) {
        self.bools.insert(p, v);
    }

    pub fn set_int(&mut self, p: IntParam, v: i64) {
        self.ints.insert(p, v);
    }

    pub fn bool_value(&self, p: BoolParam) -> bool {
        self.bools.get(&p).copied().unwrap_or(false)
    }

    pub fn int_value(&self, p: IntParam) -> i64 {
        self.ints.get(&p).copied().unwrap_or(0)
    }

    pub fn eval(&self, c: &LinComb) -> i64 {
        c.eval(|p| self.int_value(p))
    }

    pub fn bools(&self) -> impl Iterator<Item = (BoolParam, bool)> + '_ {
        self.bools.iter().map(|(p, v)| (*p, *v))
    }

    pub fn ints(&self) -> impl Iterator<Item = (IntParam, i64)> + '_ {
        self.ints.iter().map(|(p, v)| (*p, *v))
    }

    /// Pointwise order on the boolean part.
    pub fn bool_leq(&self, other: &Instantiation) -> bool {
        self.bools.iter().all(|(p, v)| !*v || other.bool_value(*p))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AdmissibilityError {
    #[error("combination {combination} evaluates to {value} < 0 in the type at {path}")]
    NegativeCombination { path: Path, combination: String, value: i64 },
    #[error("bang flag {flag} is 1 but {combination} evaluates to {value} < 1 in the type at {path}")]
    BangWithoutDoor { path: Path, flag: BoolParam, combination: String, value: i64 },
}

/// Check that `phi` is admissible for every p-type occurring in `t`:
/// every combination evaluates ≥ 0, and ≥ 1 wherever the bang flag is set.
/// Door parameters are unconstrained.
pub fn check_admissible(t: &PTerm, phi: &Instantiation) -> Result<(), AdmissibilityError> {
    for (path, node) in t.occurrences() {
        match node {
            PTerm::Var { ty, .. } | PTerm::Abs { ty, .. } => check_bang_type(ty, phi, &path)?,
            PTerm::TyApp { arg, .. } => check_lin_type(arg, phi, &path)?,
            _ => {}
        }
    }
    Ok(())
}

fn check_bang_type(
    ty: &BangPType,
    phi: &Instantiation,
    path: &Path,
) -> Result<(), AdmissibilityError> {
    for c in ty.combinations() {
        let v = phi.eval(&c);
        if v < 0 {
            return Err(AdmissibilityError::NegativeCombination {
                path: path.clone(),
                combination: c.to_string(),
                value: v,
            });
        }
    }
    for (b, c) in ty.bang_pairs() {
        if phi.bool_value(b) && phi.eval(&c) < 1 {
            return Err(AdmissibilityError::BangWithoutDoor {
                path: path.clone(),
                flag: b,
                combination: c.to_string(),
                value: phi.eval(&c),
            });
        }
    }
    Ok(())
}

fn check_lin_type(
    ty: &LinPType,
    phi: &Instantiation,
    path: &Path,
) -> Result<(), AdmissibilityError> {
    for c in ty.combinations() {
        let v = phi.eval(&c);
        if v < 0 {
            return Err(AdmissibilityError::NegativeCombination {
                path: path.clone(),
                combination: c.to_string(),
                value: v,
            });
        }
    }
    for (b, c) in ty.bang_pairs() {
        if phi.bool_value(b) && phi.eval(&c) < 1 {
            return Err(AdmissibilityError::BangWithoutDoor {
                path: path.clone(),
                flag: b,
                combination: c.to_string(),
                value: phi.eval(&c),
            });
        }
    }
    Ok(())
}

/// Materialize a p-term under an admissible instantiation: each door node
/// becomes `phi(m)` concrete doors (`§` if positive, `§-` if negative), each
/// bang p-type with flag 0 becomes `§^c A` and with flag 1 becomes
/// `!§^(c-1) A`.
pub fn instantiate(t: &PTerm, phi: &Instantiation) -> Result<PseudoTerm, AdmissibilityError> {
    check_admissible(t, phi)?;
    Ok(instantiate_unchecked(t, phi))
}

fn instantiate_unchecked(t: &PTerm, phi: &Instantiation) -> PseudoTerm {
    match t {
        PTerm::Var { name, ty } => {
            PseudoTerm::Var { name: name.clone(), ty: inst_bang(ty, phi) }
        }
        PTerm::Abs { name, ty, body } => PseudoTerm::Abs {
            name: name.clone(),
            ty: inst_bang(ty, phi),
            body: Box::new(instantiate_unchecked(body, phi)),
        },
        PTerm::App { fun, arg } => PseudoTerm::App {
            fun: Box::new(instantiate_unchecked(fun, phi)),
            arg: Box::new(instantiate_unchecked(arg, phi)),
        },
        PTerm::TyAbs { name, body } => PseudoTerm::TyAbs {
            name: name.clone(),
            body: Box::new(instantiate_unchecked(body, phi)),
        },
        PTerm::TyApp { fun, arg } => PseudoTerm::TyApp {
            fun: Box::new(instantiate_unchecked(fun, phi)),
            arg: inst_lin(arg, phi),
        },
        PTerm::Door { m, body } => {
            PseudoTerm::doors(phi.int_value(*m), instantiate_unchecked(body, phi))
        }
    }
}

fn inst_lin(ty: &LinPType, phi: &Instantiation) -> StarLin {
    StarLin { doors: phi.eval(&ty.c) as u32, skel: inst_skel(&ty.skel, phi) }
}

fn inst_bang(ty: &BangPType, phi: &Instantiation) -> StarType {
    let skel = inst_skel(&ty.skel, phi);
    let c = phi.eval(&ty.c);
    if phi.bool_value(ty.b) {
        StarType::Bang(StarLin { doors: (c - 1) as u32, skel })
    } else {
        StarType::Lin(StarLin { doors: c as u32, skel })
    }
}

fn inst_skel(skel: &PSkel, phi: &Instantiation) -> StarSkel {
    match skel {
        PSkel::Var(n) => StarSkel::Var(n.clone()),
        PSkel::Arrow(d, c) => {
            StarSkel::Arrow(Box::new(inst_bang(d, phi)), Box::new(inst_lin(c, phi)))
        }
        PSkel::Forall(n, body) => StarSkel::Forall(n.clone(), Box::new(inst_lin(body, phi))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::pterm::free_decoration;
    use super::*;
    use crate::fterm::parse_term;

    fn id_decoration() -> PTerm {
        free_decoration(&parse_term(r"\x:a. x").unwrap())
    }

    #[test]
    fn all_zero_instantiation_is_doorless() {
        let p = id_decoration();
        let phi = Instantiation::new();
        let t = instantiate(&p, &phi).unwrap();
        for (_, node) in t.occurrences() {
            assert!(!matches!(node, PseudoTerm::Door { .. }));
        }
        assert!(t.erase().alpha_eq(&parse_term(r"\x:a. x").unwrap()));
    }

    #[test]
    fn bang_flag_consumes_one_door() {
        let p = id_decoration();
        let (bools, _) = p.parameters();
        let b = *bools.iter().next().unwrap();
        let mut phi = Instantiation::new();
        phi.set_bool(b, true);
        // inadmissible: flag set but combination is 0
        assert!(matches!(
            instantiate(&p, &phi),
            Err(AdmissibilityError::BangWithoutDoor { .. })
        ));
        // give the type parameter the value 2: !§^1 a
        let ty_param = match &p {
            PTerm::Door { body, .. } => match body.as_ref() {
                PTerm::Abs { ty, .. } => ty.c.params().next().unwrap(),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        phi.set_int(ty_param, 2);
        let t = instantiate(&p, &phi).unwrap();
        match &t {
            PseudoTerm::Abs { ty, .. } => match ty {
                StarType::Bang(a) => assert_eq!(a.doors, 1),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_door_values_print_aux_doors() {
        let p = id_decoration();
        let m = match &p {
            PTerm::Door { m, .. } => *m,
            other => panic!("unexpected {other:?}"),
        };
        let mut phi = Instantiation::new();
        phi.set_int(m, -1);
        let t = instantiate(&p, &phi).unwrap();
        match &t {
            PseudoTerm::Door { main, .. } => assert!(!main),
            other => panic!("expected a door, got {other:?}"),
        }
    }

    #[test]
    fn negative_type_combination_is_inadmissible() {
        let p = id_decoration();
        let ty_param = match &p {
            PTerm::Door { body, .. } => match body.as_ref() {
                PTerm::Abs { ty, .. } => ty.c.params().next().unwrap(),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        };
        let mut phi = Instantiation::new();
        phi.set_int(ty_param, -1);
        assert!(matches!(
            instantiate(&p, &phi),
            Err(AdmissibilityError::NegativeCombination { .. })
        ));
    }
}
