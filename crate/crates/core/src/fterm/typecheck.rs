use thiserror::Error;

use super::ast::{FTerm, FType, Name, NameSupply, Path, Step};
use super::print::print_type;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable '{name}' at {path}")]
    UnboundVariable { name: Name, path: Path },
    #[error("variable '{name}' at {path} is annotated {found} but its binder declares {expected}")]
    AnnotationMismatch { name: Name, path: Path, expected: String, found: String },
    #[error("application at {path}: function has non-arrow type {found}")]
    AppNonArrow { path: Path, found: String },
    #[error("application at {path}: argument has type {found}, function expects {expected}")]
    AppArgMismatch { path: Path, expected: String, found: String },
    #[error("type application at {path}: head has non-forall type {found}")]
    TyAppNonForall { path: Path, found: String },
    #[error("eigenvariable violation at {path}: '{binder}' occurs free in the type of free variable '{var}'")]
    EigenvariableViolation { binder: Name, var: Name, path: Path },
}

/// Compute the type of a Church-annotated term, enforcing the five formation
/// rules and the eigenvariable condition. Free variables are accepted when
/// they carry a declared type and rejected as unbound otherwise.
pub fn typecheck(t: &FTerm) -> Result<FType, TypeError> {
    let mut supply = NameSupply::above_term(t);
    check(t, &mut Vec::new(), &Path::root(), &mut supply)
}

fn check(
    t: &FTerm,
    env: &mut Vec<(Name, FType)>,
    path: &Path,
    supply: &mut NameSupply,
) -> Result<FType, TypeError> {
    match t {
        FTerm::Var { name, ty } => {
            let binder = env.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t.clone());
            match (binder, ty) {
                (Some(expected), Some(found)) => {
                    if expected.alpha_eq(found) {
                        Ok(expected)
                    } else {
                        Err(TypeError::AnnotationMismatch {
                            name: name.clone(),
                            path: path.clone(),
                            expected: print_type(&expected),
                            found: print_type(found),
                        })
                    }
                }
                (Some(expected), None) => Ok(expected),
                (None, Some(declared)) => Ok(declared.clone()),
                (None, None) => {
                    Err(TypeError::UnboundVariable { name: name.clone(), path: path.clone() })
                }
            }
        }
        FTerm::Abs { name, ty, body } => {
            env.push((name.clone(), ty.clone()));
            let cod = check(body, env, &path.child(Step::AbsBody), supply)?;
            env.pop();
            Ok(FType::Arrow(Box::new(ty.clone()), Box::new(cod)))
        }
        FTerm::App { fun, arg } => {
            let fun_ty = check(fun, env, &path.child(Step::AppFun), supply)?;
            let arg_ty = check(arg, env, &path.child(Step::AppArg), supply)?;
            match fun_ty {
                FType::Arrow(dom, cod) => {
                    if dom.alpha_eq(&arg_ty) {
                        Ok(*cod)
                    } else {
                        Err(TypeError::AppArgMismatch {
                            path: path.clone(),
                            expected: print_type(&dom),
                            found: print_type(&arg_ty),
                        })
                    }
                }
                other => {
                    Err(TypeError::AppNonArrow { path: path.clone(), found: print_type(&other) })
                }
            }
        }
        FTerm::TyAbs { name, body } => {
            // eigenvariable: the bound type variable may not occur freely in
            // the types of the body's free term variables
            for var in body.free_term_vars() {
                let var_ty = env
                    .iter()
                    .rev()
                    .find(|(n, _)| *n == var)
                    .map(|(_, t)| t.clone())
                    .or_else(|| declared_type(body, &var));
                if let Some(ty) = var_ty {
                    if ty.free_vars().contains(name) {
                        return Err(TypeError::EigenvariableViolation {
                            binder: name.clone(),
                            var,
                            path: path.clone(),
                        });
                    }
                }
            }
            let body_ty = check(body, env, &path.child(Step::TyAbsBody), supply)?;
            Ok(FType::Forall(name.clone(), Box::new(body_ty)))
        }
        FTerm::TyApp { fun, arg } => {
            let fun_ty = check(fun, env, &path.child(Step::TyAppFun), supply)?;
            match fun_ty {
                FType::Forall(n, body) => Ok(body.subst(&n, arg, supply)),
                other => {
                    Err(TypeError::TyAppNonForall { path: path.clone(), found: print_type(&other) })
                }
            }
        }
    }
}

/// The declared type of a free variable occurrence inside `t`, if any.
fn declared_type(t: &FTerm, var: &Name) -> Option<FType> {
    match t {
        FTerm::Var { name, ty } if name == var => ty.clone(),
        FTerm::Var { .. } => None,
        FTerm::Abs { name, body, .. } => {
            if name == var {
                None
            } else {
                declared_type(body, var)
            }
        }
        FTerm::App { fun, arg } => declared_type(fun, var).or_else(|| declared_type(arg, var)),
        FTerm::TyAbs { body, .. } => declared_type(body, var),
        FTerm::TyApp { fun, .. } => declared_type(fun, var),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_term, parse_type};
    use super::*;

    #[test]
    fn identity_types_as_forall() {
        let t = parse_term(r"/\a. \x:a. x").unwrap();
        let ty = typecheck(&t).unwrap();
        assert!(ty.alpha_eq(&parse_type("forall a. a -> a").unwrap()));
    }

    #[test]
    fn self_application_rejected() {
        let t = parse_term(r"\x:a. x x").unwrap();
        assert!(matches!(typecheck(&t), Err(TypeError::AppNonArrow { .. })));
    }

    #[test]
    fn type_application_of_non_forall_rejected() {
        let t = parse_term(r"\x:a. x [a]").unwrap();
        assert!(matches!(typecheck(&t), Err(TypeError::TyAppNonForall { .. })));
    }

    #[test]
    fn unbound_variable_rejected() {
        let t = parse_term(r"\x:a. y").unwrap();
        assert!(matches!(typecheck(&t), Err(TypeError::UnboundVariable { .. })));
    }

    #[test]
    fn eigenvariable_violation_rejected() {
        // built directly (not via the parser, whose alpha-normalization reads
        // the annotation's 'a' apart from the /\-bound one): \x:a. /\a. x
        let t = FTerm::abs(
            "x",
            FType::var("a"),
            FTerm::ty_abs("a", FTerm::var("x", FType::var("a"))),
        );
        assert!(matches!(typecheck(&t), Err(TypeError::EigenvariableViolation { .. })));
        // the parsed spelling is fine: the annotation refers to a free 'a'
        let parsed = parse_term(r"\x:a. /\a. x").unwrap();
        assert!(typecheck(&parsed).is_ok());
    }

    #[test]
    fn type_application_substitutes() {
        let t = parse_term(r"(/\a. \x:a. x) [b -> b]").unwrap();
        let ty = typecheck(&t).unwrap();
        assert!(ty.alpha_eq(&parse_type("(b -> b) -> b -> b").unwrap()));
    }

    #[test]
    fn arg_mismatch_reported() {
        let t = parse_term(r"(\x:a -> a. x) (\y:b. y)").unwrap();
        assert!(matches!(typecheck(&t), Err(TypeError::AppArgMismatch { .. })));
    }
}
