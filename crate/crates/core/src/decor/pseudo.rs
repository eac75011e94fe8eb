use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::fterm::{FTerm, FType, Name, NameSupply, Path, Step};

/// A concrete DLAL★ type: either linear or a bang type `!A`. Bang types may
/// only appear at arrow domains and variable declarations; the grammar has
/// no `A -o !B`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum StarType {
    Lin(StarLin),
    Bang(StarLin),
}

/// A linear DLAL★ type in door-normal form: `§^doors F`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StarLin {
    pub doors: u32,
    pub skel: StarSkel,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum StarSkel {
    Var(Name),
    Arrow(Box<StarType>, Box<StarLin>),
    Forall(Name, Box<StarLin>),
}

impl StarLin {
    pub fn var(n: impl Into<String>) -> Self {
        StarLin { doors: 0, skel: StarSkel::Var(Name::new(n)) }
    }

    pub fn sect(self) -> Self {
        StarLin { doors: self.doors + 1, skel: self.skel }
    }

    pub fn arrow(dom: StarType, cod: StarLin) -> Self {
        StarLin { doors: 0, skel: StarSkel::Arrow(Box::new(dom), Box::new(cod)) }
    }

    pub fn forall(n: impl Into<String>, body: StarLin) -> Self {
        StarLin { doors: 0, skel: StarSkel::Forall(Name::new(n), Box::new(body)) }
    }

    pub fn alpha_eq(&self, other: &StarLin) -> bool {
        fn skel_eq(a: &StarSkel, b: &StarSkel, env: &mut Vec<(Name, Name)>) -> bool {
            match (a, b) {
                (StarSkel::Var(x), StarSkel::Var(y)) => {
                    for (l, r) in env.iter().rev() {
                        if l == x || r == y {
                            return l == x && r == y;
                        }
                    }
                    x == y
                }
                (StarSkel::Arrow(d1, c1), StarSkel::Arrow(d2, c2)) => {
                    let dom = match (d1.as_ref(), d2.as_ref()) {
                        (StarType::Lin(a), StarType::Lin(b))
                        | (StarType::Bang(a), StarType::Bang(b)) => {
                            a.doors == b.doors && skel_eq(&a.skel, &b.skel, env)
                        }
                        _ => false,
                    };
                    dom && c1.doors == c2.doors && skel_eq(&c1.skel, &c2.skel, env)
                }
                (StarSkel::Forall(x, b1), StarSkel::Forall(y, b2)) => {
                    env.push((x.clone(), y.clone()));
                    let r = b1.doors == b2.doors && skel_eq(&b1.skel, &b2.skel, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        self.doors == other.doors && skel_eq(&self.skel, &other.skel, &mut Vec::new())
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn go(s: &StarSkel, bound: &mut Vec<Name>, acc: &mut BTreeSet<Name>) {
            match s {
                StarSkel::Var(n) => {
                    if !bound.contains(n) {
                        acc.insert(n.clone());
                    }
                }
                StarSkel::Arrow(d, c) => {
                    go(&d.lin().skel, bound, acc);
                    go(&c.skel, bound, acc);
                }
                StarSkel::Forall(n, b) => {
                    bound.push(n.clone());
                    go(&b.skel, bound, acc);
                    bound.pop();
                }
            }
        }
        let mut acc = BTreeSet::new();
        go(&self.skel, &mut Vec::new(), &mut acc);
        acc
    }

    /// `self[rep/var]`, door counts adding at variable nodes. Forall binders
    /// that would capture are freshened.
    pub fn subst(&self, var: &Name, rep: &StarLin, supply: &mut NameSupply) -> StarLin {
        match &self.skel {
            StarSkel::Var(n) => {
                if n == var {
                    StarLin { doors: self.doors + rep.doors, skel: rep.skel.clone() }
                } else {
                    self.clone()
                }
            }
            StarSkel::Arrow(d, c) => {
                let dom = match d.as_ref() {
                    StarType::Lin(a) => StarType::Lin(a.subst(var, rep, supply)),
                    StarType::Bang(a) => StarType::Bang(a.subst(var, rep, supply)),
                };
                StarLin {
                    doors: self.doors,
                    skel: StarSkel::Arrow(Box::new(dom), Box::new(c.subst(var, rep, supply))),
                }
            }
            StarSkel::Forall(n, body) => {
                if n == var {
                    self.clone()
                } else if rep.free_vars().contains(n) {
                    let fresh = supply.fresh(n.base());
                    let renamed = body.subst(n, &StarLin::var_name(fresh.clone()), supply);
                    StarLin {
                        doors: self.doors,
                        skel: StarSkel::Forall(fresh, Box::new(renamed.subst(var, rep, supply))),
                    }
                } else {
                    StarLin {
                        doors: self.doors,
                        skel: StarSkel::Forall(n.clone(), Box::new(body.subst(var, rep, supply))),
                    }
                }
            }
        }
    }

    fn var_name(n: Name) -> StarLin {
        StarLin { doors: 0, skel: StarSkel::Var(n) }
    }

    pub fn erase(&self) -> FType {
        match &self.skel {
            StarSkel::Var(n) => FType::Var(n.clone()),
            StarSkel::Arrow(d, c) => {
                FType::Arrow(Box::new(d.lin().erase()), Box::new(c.erase()))
            }
            StarSkel::Forall(n, b) => FType::Forall(n.clone(), Box::new(b.erase())),
        }
    }
}

impl StarType {
    pub fn lin(&self) -> &StarLin {
        match self {
            StarType::Lin(a) | StarType::Bang(a) => a,
        }
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, StarType::Bang(_))
    }

    /// The output type of a variable declared at this type:
    /// `(!A)° = §A`, `A° = A`.
    pub fn demote(&self) -> StarLin {
        match self {
            StarType::Lin(a) => a.clone(),
            StarType::Bang(a) => StarLin { doors: a.doors + 1, skel: a.skel.clone() },
        }
    }

    pub fn alpha_eq(&self, other: &StarType) -> bool {
        match (self, other) {
            (StarType::Lin(a), StarType::Lin(b)) | (StarType::Bang(a), StarType::Bang(b)) => {
                a.alpha_eq(b)
            }
            _ => false,
        }
    }

    pub fn erase(&self) -> FType {
        self.lin().erase()
    }
}

/// A concrete decorated pseudo-term over the doors `§` (main) and `§-`
/// (auxiliary).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PseudoTerm {
    Var { name: Name, ty: StarType },
    Abs { name: Name, ty: StarType, body: Box<PseudoTerm> },
    App { fun: Box<PseudoTerm>, arg: Box<PseudoTerm> },
    TyAbs { name: Name, body: Box<PseudoTerm> },
    TyApp { fun: Box<PseudoTerm>, arg: StarLin },
    Door { main: bool, body: Box<PseudoTerm> },
}

impl PseudoTerm {
    pub fn var(n: impl Into<String>, ty: StarType) -> Self {
        PseudoTerm::Var { name: Name::new(n), ty }
    }

    pub fn abs(n: impl Into<String>, ty: StarType, body: PseudoTerm) -> Self {
        PseudoTerm::Abs { name: Name::new(n), ty, body: Box::new(body) }
    }

    pub fn app(fun: PseudoTerm, arg: PseudoTerm) -> Self {
        PseudoTerm::App { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn ty_abs(n: impl Into<String>, body: PseudoTerm) -> Self {
        PseudoTerm::TyAbs { name: Name::new(n), body: Box::new(body) }
    }

    pub fn ty_app(fun: PseudoTerm, arg: StarLin) -> Self {
        PseudoTerm::TyApp { fun: Box::new(fun), arg }
    }

    /// Wrap in `k` main doors (k > 0) or `-k` auxiliary doors (k < 0).
    pub fn doors(k: i64, body: PseudoTerm) -> Self {
        let mut t = body;
        for _ in 0..k.unsigned_abs() {
            t = PseudoTerm::Door { main: k > 0, body: Box::new(t) };
        }
        t
    }

    pub fn child(&self, step: Step) -> Option<&PseudoTerm> {
        match (self, step) {
            (PseudoTerm::Abs { body, .. }, Step::AbsBody) => Some(body),
            (PseudoTerm::App { fun, .. }, Step::AppFun) => Some(fun),
            (PseudoTerm::App { arg, .. }, Step::AppArg) => Some(arg),
            (PseudoTerm::TyAbs { body, .. }, Step::TyAbsBody) => Some(body),
            (PseudoTerm::TyApp { fun, .. }, Step::TyAppFun) => Some(fun),
            (PseudoTerm::Door { body, .. }, Step::DoorBody) => Some(body),
            _ => None,
        }
    }

    pub fn at_path(&self, path: &Path) -> Option<&PseudoTerm> {
        let mut cur = self;
        for s in path.steps() {
            cur = cur.child(*s)?;
        }
        Some(cur)
    }

    /// All subterm occurrences in preorder.
    pub fn occurrences(&self) -> Vec<(Path, &PseudoTerm)> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a PseudoTerm, path: Path, out: &mut Vec<(Path, &'a PseudoTerm)>) {
            out.push((path.clone(), t));
            match t {
                PseudoTerm::Var { .. } => {}
                PseudoTerm::Abs { body, .. } => go(body, path.child(Step::AbsBody), out),
                PseudoTerm::App { fun, arg } => {
                    go(fun, path.child(Step::AppFun), out);
                    go(arg, path.child(Step::AppArg), out);
                }
                PseudoTerm::TyAbs { body, .. } => go(body, path.child(Step::TyAbsBody), out),
                PseudoTerm::TyApp { fun, .. } => go(fun, path.child(Step::TyAppFun), out),
                PseudoTerm::Door { body, .. } => go(body, path.child(Step::DoorBody), out),
            }
        }
        go(self, Path::root(), &mut out);
        out
    }

    /// Erase doors and modalities, recovering the System F term.
    pub fn erase(&self) -> FTerm {
        match self {
            PseudoTerm::Var { name, ty } => {
                FTerm::Var { name: name.clone(), ty: Some(ty.erase()) }
            }
            PseudoTerm::Abs { name, ty, body } => {
                FTerm::Abs { name: name.clone(), ty: ty.erase(), body: Box::new(body.erase()) }
            }
            PseudoTerm::App { fun, arg } => {
                FTerm::App { fun: Box::new(fun.erase()), arg: Box::new(arg.erase()) }
            }
            PseudoTerm::TyAbs { name, body } => {
                FTerm::TyAbs { name: name.clone(), body: Box::new(body.erase()) }
            }
            PseudoTerm::TyApp { fun, arg } => {
                FTerm::TyApp { fun: Box::new(fun.erase()), arg: arg.erase() }
            }
            PseudoTerm::Door { body, .. } => body.erase(),
        }
    }
}

/// Print a DLAL★ type: `!`, `§`, `-o`, `forall a.`.
pub fn print_star_type(t: &StarType) -> String {
    let mut out = String::new();
    star_type(t, 1, &mut out);
    out
}

/// Print a linear DLAL★ type.
pub fn print_star_lin(t: &StarLin) -> String {
    let mut out = String::new();
    star_lin(t, 0, &mut out);
    out
}

// precedence: 0 = top, 1 = arrow domain, 2 = under a prefix (§ / !)
fn star_lin(t: &StarLin, prec: u8, out: &mut String) {
    if t.doors > 0 {
        for _ in 0..t.doors {
            out.push('§');
        }
        star_skel(&t.skel, 2, out);
    } else {
        star_skel(&t.skel, prec, out);
    }
}

fn star_type(t: &StarType, prec: u8, out: &mut String) {
    match t {
        StarType::Lin(a) => star_lin(a, prec, out),
        StarType::Bang(a) => {
            out.push('!');
            star_lin(a, 2, out);
        }
    }
}

fn star_skel(s: &StarSkel, prec: u8, out: &mut String) {
    match s {
        StarSkel::Var(n) => out.push_str(&n.to_string()),
        StarSkel::Arrow(d, c) => {
            let parens = prec > 0;
            if parens {
                out.push('(');
            }
            star_type(d, 1, out);
            out.push_str(" -o ");
            star_lin(c, 0, out);
            if parens {
                out.push(')');
            }
        }
        StarSkel::Forall(n, b) => {
            let parens = prec > 0;
            if parens {
                out.push('(');
            }
            out.push_str("forall ");
            out.push_str(&n.to_string());
            out.push_str(". ");
            star_lin(b, 0, out);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Print a pseudo-term; doors print as `§` / `§-`.
pub fn print_pseudo_term(t: &PseudoTerm) -> String {
    let mut out = String::new();
    pseudo(t, 0, &mut out);
    out
}

// precedence: 0 = top, 1 = function position, 2 = argument/door position
fn pseudo(t: &PseudoTerm, prec: u8, out: &mut String) {
    match t {
        PseudoTerm::Var { name, .. } => out.push_str(&name.to_string()),
        PseudoTerm::Abs { name, ty, body } => {
            let parens = prec > 0;
            if parens {
                out.push('(');
            }
            out.push('\\');
            out.push_str(&name.to_string());
            out.push(':');
            star_type(ty, 0, out);
            out.push_str(". ");
            pseudo(body, 0, out);
            if parens {
                out.push(')');
            }
        }
        PseudoTerm::App { fun, arg } => {
            let parens = prec > 1;
            if parens {
                out.push('(');
            }
            pseudo(fun, 1, out);
            out.push(' ');
            pseudo(arg, 2, out);
            if parens {
                out.push(')');
            }
        }
        PseudoTerm::TyAbs { name, body } => {
            let parens = prec > 0;
            if parens {
                out.push('(');
            }
            out.push_str("/\\");
            out.push_str(&name.to_string());
            out.push_str(". ");
            pseudo(body, 0, out);
            if parens {
                out.push(')');
            }
        }
        PseudoTerm::TyApp { fun, arg } => {
            let parens = prec > 1;
            if parens {
                out.push('(');
            }
            pseudo(fun, 1, out);
            out.push_str(" [");
            star_lin(arg, 0, out);
            out.push(']');
            if parens {
                out.push(')');
            }
        }
        PseudoTerm::Door { main, body } => {
            out.push_str(if *main { "§" } else { "§-" });
            pseudo(body, 2, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demote_adds_a_door_to_bang_types() {
        let a = StarLin::var("a");
        assert_eq!(StarType::Bang(a.clone()).demote(), a.clone().sect());
        assert_eq!(StarType::Lin(a.clone()).demote(), a);
    }

    #[test]
    fn star_printing() {
        // !(a -o a) -o §(a -o a)
        let aa = StarLin::arrow(StarType::Lin(StarLin::var("a")), StarLin::var("a"));
        let t = StarLin::arrow(StarType::Bang(aa.clone()), aa.clone().sect());
        assert_eq!(print_star_lin(&t), "!(a -o a) -o §(a -o a)");
    }

    #[test]
    fn pseudo_printing_uses_door_marks() {
        let a = StarType::Lin(StarLin::var("a").sect());
        let t = PseudoTerm::abs(
            "x",
            a.clone(),
            PseudoTerm::Door {
                main: false,
                body: Box::new(PseudoTerm::var("x", a)),
            },
        );
        assert_eq!(print_pseudo_term(&t), "\\x:§a. §-x");
    }

    #[test]
    fn type_subst_adds_doors() {
        let t = StarLin::var("a").sect(); // §a
        let rep = StarLin::var("b").sect(); // §b
        let mut supply = NameSupply::new();
        let out = t.subst(&Name::new("a"), &rep, &mut supply);
        assert_eq!(out, StarLin::var("b").sect().sect());
    }
}
