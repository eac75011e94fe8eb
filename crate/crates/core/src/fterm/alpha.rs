use std::collections::BTreeSet;

use super::ast::{FTerm, FType, Name, NameSupply};

/// Rename binders so that every `Abs` and `TyAbs` binder is unique within
/// the term, and annotate every bound variable occurrence with its binder's
/// (normalized) annotation. Original names are kept where no clash exists.
///
/// Occurrences of unbound term variables are left untouched; the typechecker
/// reports them (or accepts them when they carry a declared type).
pub fn alpha_normalize(t: &FTerm) -> FTerm {
    let mut st = Normalizer {
        used_term: t.free_term_vars(),
        used_type: t.free_type_vars(),
        supply: NameSupply::above_term(t),
    };
    st.term(t, &mut Vec::new(), &mut Vec::new())
}

struct Normalizer {
    used_term: BTreeSet<Name>,
    used_type: BTreeSet<Name>,
    supply: NameSupply,
}

impl Normalizer {
    fn pick(&mut self, orig: &Name, is_type: bool) -> Name {
        let used = if is_type { &mut self.used_type } else { &mut self.used_term };
        if !used.contains(orig) {
            used.insert(orig.clone());
            return orig.clone();
        }
        loop {
            let cand = self.supply.fresh(orig.base());
            let used = if is_type { &mut self.used_type } else { &mut self.used_term };
            if !used.contains(&cand) {
                used.insert(cand.clone());
                return cand;
            }
        }
    }

    fn term(
        &mut self,
        t: &FTerm,
        env: &mut Vec<(Name, Name, FType)>,
        tenv: &mut Vec<(Name, Name)>,
    ) -> FTerm {
        match t {
            FTerm::Var { name, ty } => {
                for (orig, new, binder_ty) in env.iter().rev() {
                    if orig == name {
                        return FTerm::Var { name: new.clone(), ty: Some(binder_ty.clone()) };
                    }
                }
                // free occurrence: keep the name, re-point any renamed type vars
                let ty = ty.as_ref().map(|ty| rename_type(ty, tenv));
                FTerm::Var { name: name.clone(), ty }
            }
            FTerm::Abs { name, ty, body } => {
                let ty = rename_type(ty, tenv);
                let new = self.pick(name, false);
                env.push((name.clone(), new.clone(), ty.clone()));
                let body = self.term(body, env, tenv);
                env.pop();
                FTerm::Abs { name: new, ty, body: Box::new(body) }
            }
            FTerm::App { fun, arg } => FTerm::App {
                fun: Box::new(self.term(fun, env, tenv)),
                arg: Box::new(self.term(arg, env, tenv)),
            },
            FTerm::TyAbs { name, body } => {
                let new = self.pick(name, true);
                tenv.push((name.clone(), new.clone()));
                let body = self.term(body, env, tenv);
                tenv.pop();
                FTerm::TyAbs { name: new, body: Box::new(body) }
            }
            FTerm::TyApp { fun, arg } => FTerm::TyApp {
                fun: Box::new(self.term(fun, env, tenv)),
                arg: rename_type(arg, tenv),
            },
        }
    }
}

/// Apply the type-binder renaming to a type, respecting `forall` shadowing.
fn rename_type(ty: &FType, tenv: &[(Name, Name)]) -> FType {
    fn go(ty: &FType, tenv: &[(Name, Name)], shadow: &mut Vec<Name>) -> FType {
        match ty {
            FType::Var(n) => {
                if !shadow.contains(n) {
                    for (orig, new) in tenv.iter().rev() {
                        if orig == n {
                            return FType::Var(new.clone());
                        }
                    }
                }
                ty.clone()
            }
            FType::Arrow(d, c) => {
                FType::Arrow(Box::new(go(d, tenv, shadow)), Box::new(go(c, tenv, shadow)))
            }
            FType::Forall(n, body) => {
                shadow.push(n.clone());
                let body = go(body, tenv, shadow);
                shadow.pop();
                FType::Forall(n.clone(), Box::new(body))
            }
        }
    }
    go(ty, tenv, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadowed_binders_get_fresh_names() {
        // \x:a. \x:a. x — the inner x shadows; both binders must end up distinct
        let t = FTerm::abs(
            "x",
            FType::var("a"),
            FTerm::abs("x", FType::var("a"), FTerm::Var { name: Name::new("x"), ty: None }),
        );
        let n = alpha_normalize(&t);
        match &n {
            FTerm::Abs { name: outer, body, .. } => match body.as_ref() {
                FTerm::Abs { name: inner, body, .. } => {
                    assert_ne!(outer, inner);
                    match body.as_ref() {
                        FTerm::Var { name, ty } => {
                            assert_eq!(name, inner);
                            assert!(ty.is_some());
                        }
                        other => panic!("unexpected {other:?}"),
                    }
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
        assert!(n.alpha_eq(&t));
    }

    #[test]
    fn bound_occurrences_get_binder_annotation() {
        let t = FTerm::abs("x", FType::var("a"), FTerm::Var { name: Name::new("x"), ty: None });
        let n = alpha_normalize(&t);
        match n {
            FTerm::Abs { body, .. } => match *body {
                FTerm::Var { ty, .. } => assert_eq!(ty, Some(FType::var("a"))),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tyabs_renaming_reaches_annotations() {
        // /\a. \x:a. x  under an enclosing /\a: inner binder freshened and the
        // annotation follows it
        let inner = FTerm::ty_abs(
            "a",
            FTerm::abs("x", FType::var("a"), FTerm::Var { name: Name::new("x"), ty: None }),
        );
        let t = FTerm::ty_abs("a", FTerm::abs("y", FType::var("a"), inner));
        let n = alpha_normalize(&t);
        assert!(n.alpha_eq(&t));
        // the two type binders must differ after normalization
        match &n {
            FTerm::TyAbs { name: outer, body } => match body.as_ref() {
                FTerm::Abs { body, .. } => match body.as_ref() {
                    FTerm::TyAbs { name: inner, body } => {
                        assert_ne!(outer, inner);
                        match body.as_ref() {
                            FTerm::Abs { ty, .. } => assert_eq!(ty, &FType::Var(inner.clone())),
                            other => panic!("unexpected {other:?}"),
                        }
                    }
                    other => panic!("unexpected {other:?}"),
                },
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }
}
