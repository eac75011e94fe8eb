use thiserror::Error;

use super::ast::{FTerm, FType, Name, NameSupply};

/// Result of a completed normalization: the normal form and the number of
/// term-level beta steps taken to reach it. Type-level redexes are contracted
/// along the way but not counted.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub term: FTerm,
    pub steps: u64,
}

#[derive(Debug, Clone, Error)]
#[error("fuel exhausted after {steps} beta steps")]
pub struct FuelExhausted {
    pub steps: u64,
    pub partial: FTerm,
}

/// Structural size: the number of term nodes, ignoring embedded types.
pub fn term_size(t: &FTerm) -> u64 {
    match t {
        FTerm::Var { .. } => 1,
        FTerm::Abs { body, .. } => 1 + term_size(body),
        FTerm::App { fun, arg } => 1 + term_size(fun) + term_size(arg),
        FTerm::TyAbs { body, .. } => 1 + term_size(body),
        FTerm::TyApp { fun, .. } => 1 + term_size(fun),
    }
}

/// Normalize by leftmost-outermost reduction of both term and type redexes,
/// counting term-level beta steps. `fuel` bounds the number of counted steps.
pub fn beta_normalize(t: &FTerm, fuel: u64) -> Result<NormalForm, FuelExhausted> {
    let mut supply = NameSupply::above_term(t);
    let mut cur = t.clone();
    let mut steps: u64 = 0;
    loop {
        match contract_leftmost(cur, &mut supply) {
            Contraction::TermStep(next) => {
                steps += 1;
                if steps > fuel {
                    return Err(FuelExhausted { steps: steps - 1, partial: next });
                }
                cur = next;
            }
            Contraction::TypeStep(next) => cur = next,
            Contraction::Normal(done) => return Ok(NormalForm { term: done, steps }),
        }
    }
}

enum Contraction {
    TermStep(FTerm),
    TypeStep(FTerm),
    Normal(FTerm),
}

/// Contract the leftmost-outermost redex, if any. Preorder: a node is its
/// own leftmost position, then children left to right.
fn contract_leftmost(t: FTerm, supply: &mut NameSupply) -> Contraction {
    match t {
        FTerm::App { fun, arg } => {
            if let FTerm::Abs { name, body, .. } = *fun {
                return Contraction::TermStep(subst_term(*body, &name, &arg, supply));
            }
            match contract_leftmost(*fun, supply) {
                Contraction::TermStep(f) => {
                    Contraction::TermStep(FTerm::App { fun: Box::new(f), arg })
                }
                Contraction::TypeStep(f) => {
                    Contraction::TypeStep(FTerm::App { fun: Box::new(f), arg })
                }
                Contraction::Normal(f) => match contract_leftmost(*arg, supply) {
                    Contraction::TermStep(a) => {
                        Contraction::TermStep(FTerm::App { fun: Box::new(f), arg: Box::new(a) })
                    }
                    Contraction::TypeStep(a) => {
                        Contraction::TypeStep(FTerm::App { fun: Box::new(f), arg: Box::new(a) })
                    }
                    Contraction::Normal(a) => {
                        Contraction::Normal(FTerm::App { fun: Box::new(f), arg: Box::new(a) })
                    }
                },
            }
        }
        FTerm::TyApp { fun, arg } => {
            if let FTerm::TyAbs { name, body } = *fun {
                return Contraction::TypeStep(subst_type_in_term(*body, &name, &arg, supply));
            }
            match contract_leftmost(*fun, supply) {
                Contraction::TermStep(f) => {
                    Contraction::TermStep(FTerm::TyApp { fun: Box::new(f), arg })
                }
                Contraction::TypeStep(f) => {
                    Contraction::TypeStep(FTerm::TyApp { fun: Box::new(f), arg })
                }
                Contraction::Normal(f) => {
                    Contraction::Normal(FTerm::TyApp { fun: Box::new(f), arg })
                }
            }
        }
        FTerm::Abs { name, ty, body } => match contract_leftmost(*body, supply) {
            Contraction::TermStep(b) => {
                Contraction::TermStep(FTerm::Abs { name, ty, body: Box::new(b) })
            }
            Contraction::TypeStep(b) => {
                Contraction::TypeStep(FTerm::Abs { name, ty, body: Box::new(b) })
            }
            Contraction::Normal(b) => Contraction::Normal(FTerm::Abs { name, ty, body: Box::new(b) }),
        },
        FTerm::TyAbs { name, body } => match contract_leftmost(*body, supply) {
            Contraction::TermStep(b) => Contraction::TermStep(FTerm::TyAbs { name, body: Box::new(b) }),
            Contraction::TypeStep(b) => Contraction::TypeStep(FTerm::TyAbs { name, body: Box::new(b) }),
            Contraction::Normal(b) => Contraction::Normal(FTerm::TyAbs { name, body: Box::new(b) }),
        },
        v @ FTerm::Var { .. } => Contraction::Normal(v),
    }
}

/// Capture-avoiding substitution of `arg` for the term variable `var`.
fn subst_term(t: FTerm, var: &Name, arg: &FTerm, supply: &mut NameSupply) -> FTerm {
    match t {
        FTerm::Var { ref name, .. } => {
            if name == var {
                arg.clone()
            } else {
                t
            }
        }
        FTerm::Abs { name, ty, body } => {
            if &name == var {
                FTerm::Abs { name, ty, body }
            } else if arg.free_term_vars().contains(&name) {
                let fresh = supply.fresh(name.base());
                let renamed = subst_term(
                    *body,
                    &name,
                    &FTerm::Var { name: fresh.clone(), ty: Some(ty.clone()) },
                    supply,
                );
                FTerm::Abs { name: fresh, ty, body: Box::new(subst_term(renamed, var, arg, supply)) }
            } else {
                FTerm::Abs { name, ty, body: Box::new(subst_term(*body, var, arg, supply)) }
            }
        }
        FTerm::App { fun, arg: a } => FTerm::App {
            fun: Box::new(subst_term(*fun, var, arg, supply)),
            arg: Box::new(subst_term(*a, var, arg, supply)),
        },
        FTerm::TyAbs { name, body } => {
            if arg.free_type_vars().contains(&name) {
                let fresh = supply.fresh(name.base());
                let renamed =
                    subst_type_in_term(*body, &name, &FType::Var(fresh.clone()), supply);
                FTerm::TyAbs { name: fresh, body: Box::new(subst_term(renamed, var, arg, supply)) }
            } else {
                FTerm::TyAbs { name, body: Box::new(subst_term(*body, var, arg, supply)) }
            }
        }
        FTerm::TyApp { fun, arg: ty } => {
            FTerm::TyApp { fun: Box::new(subst_term(*fun, var, arg, supply)), arg: ty }
        }
    }
}

/// Capture-avoiding substitution of type `rep` for the type variable `var`
/// throughout a term's annotations and type arguments.
fn subst_type_in_term(t: FTerm, var: &Name, rep: &FType, supply: &mut NameSupply) -> FTerm {
    match t {
        FTerm::Var { name, ty } => {
            FTerm::Var { name, ty: ty.map(|ty| ty.subst(var, rep, supply)) }
        }
        FTerm::Abs { name, ty, body } => FTerm::Abs {
            name,
            ty: ty.subst(var, rep, supply),
            body: Box::new(subst_type_in_term(*body, var, rep, supply)),
        },
        FTerm::App { fun, arg } => FTerm::App {
            fun: Box::new(subst_type_in_term(*fun, var, rep, supply)),
            arg: Box::new(subst_type_in_term(*arg, var, rep, supply)),
        },
        FTerm::TyAbs { name, body } => {
            if &name == var {
                FTerm::TyAbs { name, body }
            } else if rep.free_vars().contains(&name) {
                let fresh = supply.fresh(name.base());
                let renamed = subst_type_in_term(*body, &name, &FType::Var(fresh.clone()), supply);
                FTerm::TyAbs {
                    name: fresh,
                    body: Box::new(subst_type_in_term(renamed, var, rep, supply)),
                }
            } else {
                FTerm::TyAbs { name, body: Box::new(subst_type_in_term(*body, var, rep, supply)) }
            }
        }
        FTerm::TyApp { fun, arg } => FTerm::TyApp {
            fun: Box::new(subst_type_in_term(*fun, var, rep, supply)),
            arg: arg.subst(var, rep, supply),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_term;
    use super::super::typecheck::typecheck;
    use super::*;

    #[test]
    fn single_step() {
        let t = parse_term(r"(\x:a. x) y").unwrap();
        // y is free here; normalize anyway (reduction is type-agnostic)
        let nf = beta_normalize(&t, 10).unwrap();
        assert_eq!(nf.steps, 1);
        assert!(matches!(nf.term, FTerm::Var { .. }));
    }

    #[test]
    fn normal_form_takes_zero_steps() {
        let t = parse_term(r"\x:a. x").unwrap();
        let nf = beta_normalize(&t, 10).unwrap();
        assert_eq!(nf.steps, 0);
        assert!(nf.term.alpha_eq(&t));
    }

    #[test]
    fn type_steps_not_counted() {
        let t = parse_term(r"(/\a. \x:a. x) [b]").unwrap();
        let nf = beta_normalize(&t, 10).unwrap();
        assert_eq!(nf.steps, 0);
        assert!(nf.term.alpha_eq(&parse_term(r"\x:b. x").unwrap()));
    }

    #[test]
    fn fuel_exhaustion_reports_progress() {
        let t = parse_term(r"(\x:a. x) ((\x:a. x) ((\x:a. x) y))").unwrap();
        let err = beta_normalize(&t, 2).unwrap_err();
        assert_eq!(err.steps, 2);
    }

    #[test]
    fn subject_reduction_on_identity_application() {
        let t = parse_term(r"(/\a. \x:a. x) [b -> b] (\y:b. y)").unwrap();
        let before = typecheck(&t).unwrap();
        let nf = beta_normalize(&t, 100).unwrap();
        let after = typecheck(&nf.term).unwrap();
        assert!(before.alpha_eq(&after));
        assert_eq!(nf.steps, 1);
    }

    #[test]
    fn capture_avoided_under_binders() {
        // (\x:a. \y:a. x) y — the free y must not be captured by \y
        let t = FTerm::app(
            parse_term(r"\x:a. \y:a. x").unwrap(),
            FTerm::Var { name: Name::new("y"), ty: None },
        );
        let nf = beta_normalize(&t, 10).unwrap();
        match nf.term {
            FTerm::Abs { name, body, .. } => match *body {
                FTerm::Var { name: inner, .. } => {
                    assert_eq!(inner, Name::new("y"));
                    assert_ne!(name, inner, "bound y must have been freshened");
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(term_size(&parse_term("\\x:a. x").unwrap()), 2);
        assert_eq!(term_size(&parse_term(r"(/\a. \x:a. x) [b]").unwrap()), 4);
    }
}
