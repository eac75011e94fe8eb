use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A term or type variable. `id` 0 is reserved for names as written in the
/// source; alpha-normalization and substitution mint fresh names with
/// positive ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Name {
    base: String,
    id: u32,
}

impl Name {
    pub fn new(base: impl Into<String>) -> Self {
        Name { base: base.into(), id: 0 }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn id(&self) -> u32 {
        self.id
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}'{}", self.base, self.id)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Source of fresh names. Ids are unique per supply; callers that combine
/// terms from different supplies must re-normalize.
#[derive(Debug, Default)]
pub struct NameSupply {
    next: u32,
}

impl NameSupply {
    pub fn new() -> Self {
        NameSupply { next: 1 }
    }

    /// A supply whose ids are strictly above every id occurring in `t`.
    pub fn above_term(t: &FTerm) -> Self {
        let mut max = 0;
        t.visit_names(&mut |n| max = max.max(n.id()));
        NameSupply { next: max + 1 }
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let id = self.next;
        self.next += 1;
        Name { base: base.to_string(), id }
    }
}

/// System F types: variables, arrows, universal quantification.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FType {
    Var(Name),
    Arrow(Box<FType>, Box<FType>),
    Forall(Name, Box<FType>),
}

impl FType {
    pub fn var(n: impl Into<String>) -> Self {
        FType::Var(Name::new(n))
    }

    pub fn arrow(dom: FType, cod: FType) -> Self {
        FType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn forall(n: impl Into<String>, body: FType) -> Self {
        FType::Forall(Name::new(n), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.free_vars_into(&mut acc, &mut Vec::new());
        acc
    }

    fn free_vars_into(&self, acc: &mut BTreeSet<Name>, bound: &mut Vec<Name>) {
        match self {
            FType::Var(n) => {
                if !bound.contains(n) {
                    acc.insert(n.clone());
                }
            }
            FType::Arrow(d, c) => {
                d.free_vars_into(acc, bound);
                c.free_vars_into(acc, bound);
            }
            FType::Forall(n, body) => {
                bound.push(n.clone());
                body.free_vars_into(acc, bound);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding substitution of `replacement` for the free variable
    /// `var`. Forall binders that would capture are freshened via `supply`.
    pub fn subst(&self, var: &Name, replacement: &FType, supply: &mut NameSupply) -> FType {
        match self {
            FType::Var(n) => {
                if n == var {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            FType::Arrow(d, c) => FType::Arrow(
                Box::new(d.subst(var, replacement, supply)),
                Box::new(c.subst(var, replacement, supply)),
            ),
            FType::Forall(n, body) => {
                if n == var {
                    // shadowed: var is not free below
                    self.clone()
                } else if replacement.free_vars().contains(n) {
                    let fresh = supply.fresh(n.base());
                    let renamed = body.subst(n, &FType::Var(fresh.clone()), supply);
                    FType::Forall(fresh, Box::new(renamed.subst(var, replacement, supply)))
                } else {
                    FType::Forall(n.clone(), Box::new(body.subst(var, replacement, supply)))
                }
            }
        }
    }

    /// Alpha-equivalence.
    pub fn alpha_eq(&self, other: &FType) -> bool {
        fn go(a: &FType, b: &FType, env: &mut Vec<(Name, Name)>) -> bool {
            match (a, b) {
                (FType::Var(x), FType::Var(y)) => {
                    // innermost binding wins
                    for (l, r) in env.iter().rev() {
                        if l == x || r == y {
                            return l == x && r == y;
                        }
                    }
                    x == y
                }
                (FType::Arrow(d1, c1), FType::Arrow(d2, c2)) => {
                    go(d1, d2, env) && go(c1, c2, env)
                }
                (FType::Forall(x, b1), FType::Forall(y, b2)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(b1, b2, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

/// Church-typed System F terms. Variable occurrences carry the annotation of
/// their binder; `None` marks an occurrence the parser could not resolve,
/// which the typechecker rejects as unbound. Terms built programmatically
/// may declare free variables by annotating them directly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FTerm {
    Var { name: Name, ty: Option<FType> },
    Abs { name: Name, ty: FType, body: Box<FTerm> },
    App { fun: Box<FTerm>, arg: Box<FTerm> },
    TyAbs { name: Name, body: Box<FTerm> },
    TyApp { fun: Box<FTerm>, arg: FType },
}

impl FTerm {
    pub fn var(n: impl Into<String>, ty: FType) -> Self {
        FTerm::Var { name: Name::new(n), ty: Some(ty) }
    }

    pub fn abs(n: impl Into<String>, ty: FType, body: FTerm) -> Self {
        FTerm::Abs { name: Name::new(n), ty, body: Box::new(body) }
    }

    pub fn app(fun: FTerm, arg: FTerm) -> Self {
        FTerm::App { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn ty_abs(n: impl Into<String>, body: FTerm) -> Self {
        FTerm::TyAbs { name: Name::new(n), body: Box::new(body) }
    }

    pub fn ty_app(fun: FTerm, arg: FType) -> Self {
        FTerm::TyApp { fun: Box::new(fun), arg }
    }

    /// Left-nested application of `fun` to several arguments.
    pub fn apps(fun: FTerm, args: impl IntoIterator<Item = FTerm>) -> Self {
        args.into_iter().fold(fun, FTerm::app)
    }

    /// Free term variables (names not bound by an enclosing `Abs`).
    pub fn free_term_vars(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.free_term_vars_into(&mut acc, &mut Vec::new());
        acc
    }

    fn free_term_vars_into(&self, acc: &mut BTreeSet<Name>, bound: &mut Vec<Name>) {
        match self {
            FTerm::Var { name, .. } => {
                if !bound.contains(name) {
                    acc.insert(name.clone());
                }
            }
            FTerm::Abs { name, body, .. } => {
                bound.push(name.clone());
                body.free_term_vars_into(acc, bound);
                bound.pop();
            }
            FTerm::App { fun, arg } => {
                fun.free_term_vars_into(acc, bound);
                arg.free_term_vars_into(acc, bound);
            }
            FTerm::TyAbs { body, .. } => body.free_term_vars_into(acc, bound),
            FTerm::TyApp { fun, .. } => fun.free_term_vars_into(acc, bound),
        }
    }

    /// Free type variables of annotations and type arguments (names not
    /// bound by an enclosing `TyAbs` or a `Forall` inside a type).
    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.free_type_vars_into(&mut acc, &mut Vec::new());
        acc
    }

    fn free_type_vars_into(&self, acc: &mut BTreeSet<Name>, bound: &mut Vec<Name>) {
        let collect_ty = |ty: &FType, acc: &mut BTreeSet<Name>, bound: &Vec<Name>| {
            for v in ty.free_vars() {
                if !bound.contains(&v) {
                    acc.insert(v);
                }
            }
        };
        match self {
            FTerm::Var { ty, .. } => {
                if let Some(ty) = ty {
                    collect_ty(ty, acc, bound);
                }
            }
            FTerm::Abs { ty, body, .. } => {
                collect_ty(ty, acc, bound);
                body.free_type_vars_into(acc, bound);
            }
            FTerm::App { fun, arg } => {
                fun.free_type_vars_into(acc, bound);
                arg.free_type_vars_into(acc, bound);
            }
            FTerm::TyAbs { name, body } => {
                bound.push(name.clone());
                body.free_type_vars_into(acc, bound);
                bound.pop();
            }
            FTerm::TyApp { fun, arg } => {
                collect_ty(arg, acc, bound);
                fun.free_type_vars_into(acc, bound);
            }
        }
    }

    fn visit_names(&self, f: &mut impl FnMut(&Name)) {
        fn ty_names(ty: &FType, f: &mut impl FnMut(&Name)) {
            match ty {
                FType::Var(n) => f(n),
                FType::Arrow(d, c) => {
                    ty_names(d, f);
                    ty_names(c, f);
                }
                FType::Forall(n, b) => {
                    f(n);
                    ty_names(b, f);
                }
            }
        }
        match self {
            FTerm::Var { name, ty } => {
                f(name);
                if let Some(ty) = ty {
                    ty_names(ty, f);
                }
            }
            FTerm::Abs { name, ty, body } => {
                f(name);
                ty_names(ty, f);
                body.visit_names(f);
            }
            FTerm::App { fun, arg } => {
                fun.visit_names(f);
                arg.visit_names(f);
            }
            FTerm::TyAbs { name, body } => {
                f(name);
                body.visit_names(f);
            }
            FTerm::TyApp { fun, arg } => {
                fun.visit_names(f);
                ty_names(arg, f);
            }
        }
    }

    /// Alpha-equivalence on terms (annotations compared up to alpha as well).
    pub fn alpha_eq(&self, other: &FTerm) -> bool {
        fn ty_eq(a: &FType, b: &FType, tenv: &Vec<(Name, Name)>) -> bool {
            // rename b's view of a's type variables, then alpha-compare
            fn go(a: &FType, b: &FType, tenv: &Vec<(Name, Name)>, local: &mut Vec<(Name, Name)>) -> bool {
                match (a, b) {
                    (FType::Var(x), FType::Var(y)) => {
                        for (l, r) in local.iter().rev() {
                            if l == x || r == y {
                                return l == x && r == y;
                            }
                        }
                        for (l, r) in tenv.iter().rev() {
                            if l == x || r == y {
                                return l == x && r == y;
                            }
                        }
                        x == y
                    }
                    (FType::Arrow(d1, c1), FType::Arrow(d2, c2)) => {
                        go(d1, d2, tenv, local) && go(c1, c2, tenv, local)
                    }
                    (FType::Forall(x, b1), FType::Forall(y, b2)) => {
                        local.push((x.clone(), y.clone()));
                        let r = go(b1, b2, tenv, local);
                        local.pop();
                        r
                    }
                    _ => false,
                }
            }
            go(a, b, tenv, &mut Vec::new())
        }
        fn go(a: &FTerm, b: &FTerm, env: &mut Vec<(Name, Name)>, tenv: &mut Vec<(Name, Name)>) -> bool {
            match (a, b) {
                (FTerm::Var { name: x, ty: t1 }, FTerm::Var { name: y, ty: t2 }) => {
                    let names_match = {
                        let mut decided = None;
                        for (l, r) in env.iter().rev() {
                            if l == x || r == y {
                                decided = Some(l == x && r == y);
                                break;
                            }
                        }
                        decided.unwrap_or(x == y)
                    };
                    // occurrence annotations are derived from binders (which
                    // are compared at Abs nodes); compare them only when both
                    // sides carry one, so raw and elaborated terms agree
                    let tys_match = match (t1, t2) {
                        (Some(t1), Some(t2)) => ty_eq(t1, t2, tenv),
                        _ => true,
                    };
                    names_match && tys_match
                }
                (FTerm::Abs { name: x, ty: t1, body: b1 }, FTerm::Abs { name: y, ty: t2, body: b2 }) => {
                    if !ty_eq(t1, t2, tenv) {
                        return false;
                    }
                    env.push((x.clone(), y.clone()));
                    let r = go(b1, b2, env, tenv);
                    env.pop();
                    r
                }
                (FTerm::App { fun: f1, arg: a1 }, FTerm::App { fun: f2, arg: a2 }) => {
                    go(f1, f2, env, tenv) && go(a1, a2, env, tenv)
                }
                (FTerm::TyAbs { name: x, body: b1 }, FTerm::TyAbs { name: y, body: b2 }) => {
                    tenv.push((x.clone(), y.clone()));
                    let r = go(b1, b2, env, tenv);
                    tenv.pop();
                    r
                }
                (FTerm::TyApp { fun: f1, arg: t1 }, FTerm::TyApp { fun: f2, arg: t2 }) => {
                    go(f1, f2, env, tenv) && ty_eq(t1, t2, tenv)
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

/// One child-selector in a path from the root of a term to a subterm.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Step {
    AbsBody,
    AppFun,
    AppArg,
    TyAbsBody,
    TyAppFun,
    DoorBody,
}

impl Step {
    fn letter(self) -> char {
        match self {
            Step::AbsBody => 'B',
            Step::AppFun => 'F',
            Step::AppArg => 'A',
            Step::TyAbsBody => 'T',
            Step::TyAppFun => 'U',
            Step::DoorBody => 'D',
        }
    }
}

/// The occurrence of a subterm, as the path of child-selectors from the
/// root. Paths order lexicographically, which gives the stable ordering used
/// by the constraint dump.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Path(Vec<Step>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, s: Step) -> Self {
        let mut v = self.0.clone();
        v.push(s);
        Path(v)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when `self` is a prefix of `other` (including equality).
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// True when `other` lies strictly below `self`.
    pub fn is_strict_prefix_of(&self, other: &Path) -> bool {
        other.0.len() > self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let s: String = self.0.iter().map(|s| s.letter()).collect();
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_subst_avoids_capture() {
        // (forall b. a -> b)[b/a] must not capture the bound b
        let ty = FType::forall("b", FType::arrow(FType::var("a"), FType::var("b")));
        let mut supply = NameSupply::new();
        let out = ty.subst(&Name::new("a"), &FType::var("b"), &mut supply);
        let expect = FType::forall("c", FType::arrow(FType::var("b"), FType::var("c")));
        assert!(out.alpha_eq(&expect), "got {out:?}");
    }

    #[test]
    fn alpha_eq_renames_binders() {
        let a = FType::forall("a", FType::arrow(FType::var("a"), FType::var("a")));
        let b = FType::forall("b", FType::arrow(FType::var("b"), FType::var("b")));
        assert!(a.alpha_eq(&b));
        let c = FType::forall("b", FType::arrow(FType::var("b"), FType::var("c")));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn path_ordering_is_lexicographic() {
        let root = Path::root();
        let f = root.child(Step::AppFun);
        let fa = f.child(Step::AppArg);
        assert!(root < f && f < fa);
        assert!(f.is_prefix_of(&fa) && !fa.is_prefix_of(&f));
    }
}
