use std::collections::{BTreeMap, BTreeSet};

use crate::fterm::{alpha_normalize, FTerm, Name, NameSupply, Path, Step};

use super::params::{BoolParam, IntParam, ParamSupply};
use super::ptype::{bang_free_decoration, erase_bang, erase_lin, lin_free_decoration, BangPType, LinPType};

/// A parameterized pseudo-term. Every door node carries one fresh integer
/// parameter; every variable carries the bang p-type shared with its binder
/// and all of its other occurrences.
#[derive(Clone, Debug)]
pub enum PTerm {
    Var { name: Name, ty: BangPType },
    Abs { name: Name, ty: BangPType, body: Box<PTerm> },
    App { fun: Box<PTerm>, arg: Box<PTerm> },
    TyAbs { name: Name, body: Box<PTerm> },
    TyApp { fun: Box<PTerm>, arg: LinPType },
    Door { m: IntParam, body: Box<PTerm> },
}

impl PTerm {
    pub fn child(&self, step: Step) -> Option<&PTerm> {
        match (self, step) {
            (PTerm::Abs { body, .. }, Step::AbsBody) => Some(body),
            (PTerm::App { fun, .. }, Step::AppFun) => Some(fun),
            (PTerm::App { arg, .. }, Step::AppArg) => Some(arg),
            (PTerm::TyAbs { body, .. }, Step::TyAbsBody) => Some(body),
            (PTerm::TyApp { fun, .. }, Step::TyAppFun) => Some(fun),
            (PTerm::Door { body, .. }, Step::DoorBody) => Some(body),
            _ => None,
        }
    }

    pub fn at_path(&self, path: &Path) -> Option<&PTerm> {
        let mut cur = self;
        for s in path.steps() {
            cur = cur.child(*s)?;
        }
        Some(cur)
    }

    /// All subterm occurrences in preorder, with their paths.
    pub fn occurrences(&self) -> Vec<(Path, &PTerm)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a PTerm, path: Path, out: &mut Vec<(Path, &'a PTerm)>) {
            out.push((path.clone(), t));
            match t {
                PTerm::Var { .. } => {}
                PTerm::Abs { body, .. } => go(body, path.child(Step::AbsBody), out),
                PTerm::App { fun, arg } => {
                    go(fun, path.child(Step::AppFun), out);
                    go(arg, path.child(Step::AppArg), out);
                }
                PTerm::TyAbs { body, .. } => go(body, path.child(Step::TyAbsBody), out),
                PTerm::TyApp { fun, .. } => go(fun, path.child(Step::TyAppFun), out),
                PTerm::Door { body, .. } => go(body, path.child(Step::DoorBody), out),
            }
        }
        go(self, Path::root(), &mut out);
        out
    }

    /// Boolean and integer parameters occurring anywhere in the term,
    /// including inside its p-types.
    pub fn parameters(&self) -> (BTreeSet<BoolParam>, BTreeSet<IntParam>) {
        let mut bools = BTreeSet::new();
        let mut ints = BTreeSet::new();
        for (_, node) in self.occurrences() {
            match node {
                PTerm::Var { ty, .. } | PTerm::Abs { ty, .. } => {
                    for (b, c) in ty.bang_pairs() {
                        bools.insert(b);
                        ints.extend(c.params());
                    }
                    for c in ty.combinations() {
                        ints.extend(c.params());
                    }
                }
                PTerm::TyApp { arg, .. } => {
                    for (b, c) in arg.bang_pairs() {
                        bools.insert(b);
                        ints.extend(c.params());
                    }
                    for c in arg.combinations() {
                        ints.extend(c.params());
                    }
                }
                PTerm::Door { m, .. } => {
                    ints.insert(*m);
                }
                _ => {}
            }
        }
        (bools, ints)
    }

    /// Erase doors, parameters and modalities, recovering the System F term.
    pub fn erase(&self) -> FTerm {
        match self {
            PTerm::Var { name, ty } => {
                FTerm::Var { name: name.clone(), ty: Some(erase_bang(ty)) }
            }
            PTerm::Abs { name, ty, body } => FTerm::Abs {
                name: name.clone(),
                ty: erase_bang(ty),
                body: Box::new(body.erase()),
            },
            PTerm::App { fun, arg } => {
                FTerm::App { fun: Box::new(fun.erase()), arg: Box::new(arg.erase()) }
            }
            PTerm::TyAbs { name, body } => {
                FTerm::TyAbs { name: name.clone(), body: Box::new(body.erase()) }
            }
            PTerm::TyApp { fun, arg } => {
                FTerm::TyApp { fun: Box::new(fun.erase()), arg: erase_lin(arg) }
            }
            PTerm::Door { body, .. } => body.erase(),
        }
    }
}

/// The free decoration `⟨M⟩`: alpha-normalizes, then decorates every node
/// under one fresh door parameter, sharing one bang free decoration across
/// all occurrences of each variable and allocating mutually distinct fresh
/// decorations everywhere else.
///
/// The input must typecheck (in particular every free variable must carry a
/// declared type); this is the caller's responsibility.
pub fn free_decoration(m: &FTerm) -> PTerm {
    let m = alpha_normalize(m);
    let mut names = NameSupply::above_term(&m);
    let mut params = ParamSupply::new();
    let mut var_types: BTreeMap<Name, BangPType> = BTreeMap::new();
    decorate(&m, &mut params, &mut names, &mut var_types)
}

fn decorate(
    m: &FTerm,
    params: &mut ParamSupply,
    names: &mut NameSupply,
    var_types: &mut BTreeMap<Name, BangPType>,
) -> PTerm {
    let door = |params: &mut ParamSupply, body: PTerm| PTerm::Door {
        m: params.fresh_int(),
        body: Box::new(body),
    };
    match m {
        FTerm::Var { name, ty } => {
            let d = var_types.entry(name.clone()).or_insert_with(|| {
                let ty = ty
                    .as_ref()
                    .expect("free_decoration requires a typechecked term (unbound variable)");
                bang_free_decoration(ty, params, names)
            });
            let var = PTerm::Var { name: name.clone(), ty: d.clone() };
            door(params, var)
        }
        FTerm::Abs { name, ty, body } => {
            let d = var_types
                .entry(name.clone())
                .or_insert_with(|| bang_free_decoration(ty, params, names))
                .clone();
            let body = decorate(body, params, names, var_types);
            door(params, PTerm::Abs { name: name.clone(), ty: d, body: Box::new(body) })
        }
        FTerm::App { fun, arg } => {
            let fun = decorate(fun, params, names, var_types);
            let arg = decorate(arg, params, names, var_types);
            door(params, PTerm::App { fun: Box::new(fun), arg: Box::new(arg) })
        }
        FTerm::TyAbs { name, body } => {
            let body = decorate(body, params, names, var_types);
            door(params, PTerm::TyAbs { name: name.clone(), body: Box::new(body) })
        }
        FTerm::TyApp { fun, arg } => {
            let fun = decorate(fun, params, names, var_types);
            let arg = lin_free_decoration(arg, params, names);
            door(params, PTerm::TyApp { fun: Box::new(fun), arg })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fterm::{parse_term, typecheck};

    #[test]
    fn decoration_of_identity_shape() {
        // ⟨\x:a. x⟩ = §^{m1} \x^{(b1,n,a)}. §^{m2} x
        let t = parse_term(r"\x:a. x").unwrap();
        let p = free_decoration(&t);
        match &p {
            PTerm::Door { body, .. } => match body.as_ref() {
                PTerm::Abs { ty, body, .. } => {
                    match body.as_ref() {
                        PTerm::Door { body, .. } => match body.as_ref() {
                            PTerm::Var { ty: occ_ty, .. } => {
                                // proviso (i): binder and occurrence share one decoration
                                assert_eq!(occ_ty, ty);
                            }
                            other => panic!("unexpected {other:?}"),
                        },
                        other => panic!("unexpected {other:?}"),
                    }
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
        let (bools, ints) = p.parameters();
        assert_eq!(bools.len(), 1); // the b of x's decoration
        assert_eq!(ints.len(), 3); // two doors + x's type parameter
    }

    #[test]
    fn erasure_recovers_the_term() {
        for src in [r"\x:a. x", r"/\a. \x:a. x", r"(/\a. \x:a. x) [b -> b]"] {
            let t = parse_term(src).unwrap();
            typecheck(&t).unwrap();
            let p = free_decoration(&t);
            assert!(p.erase().alpha_eq(&t), "{src}");
        }
    }

    #[test]
    fn type_application_gets_linear_decoration() {
        let t = parse_term(r"(/\a. \x:a. x) [b]").unwrap();
        let p = free_decoration(&t);
        match &p {
            PTerm::Door { body, .. } => match body.as_ref() {
                PTerm::TyApp { arg, .. } => {
                    let terms: Vec<_> = arg.c.terms().collect();
                    assert_eq!(terms.len(), 1);
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parameters_are_mutually_distinct_across_sites() {
        let t = parse_term(r"\f:a -> a. \x:a. f x").unwrap();
        let p = free_decoration(&t);
        // f and x have disjoint decorations; door params distinct from both
        let mut seen_ints = BTreeSet::new();
        let mut seen_bools = BTreeSet::new();
        for (_, node) in p.occurrences() {
            if let PTerm::Abs { ty, .. } = node {
                for (b, c) in ty.bang_pairs() {
                    assert!(seen_bools.insert(b));
                    for q in c.params() {
                        assert!(seen_ints.insert(q));
                    }
                }
                for c in ty.combinations() {
                    for q in c.params() {
                        seen_ints.insert(q);
                    }
                }
            }
            if let PTerm::Door { m, .. } = node {
                assert!(seen_ints.insert(*m), "door param reused");
            }
        }
    }
}
