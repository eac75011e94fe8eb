use std::collections::BTreeSet;
use std::fmt;

use crate::fterm::{FType, Name, NameSupply};

use super::params::{BoolParam, LinComb, ParamSupply};

/// Skeleton of a p-type: the parameter-free tree shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PSkel {
    Var(Name),
    Arrow(Box<BangPType>, Box<LinPType>),
    Forall(Name, Box<LinPType>),
}

/// A linear p-type `§^c F`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinPType {
    pub c: LinComb,
    pub skel: PSkel,
}

/// A bang p-type `§^{b,c} F`: `c` counts the modalities ahead of the type
/// and `b` decides whether the first one is `!`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BangPType {
    pub b: BoolParam,
    pub c: LinComb,
    pub skel: PSkel,
}

impl BangPType {
    /// Forget the bang flag: `D° = §^c F`.
    pub fn demote(&self) -> LinPType {
        LinPType { c: self.c.clone(), skel: self.skel.clone() }
    }
}

/// Build a bang free decoration of a System F type: every linear combination
/// is one fresh parameter and all parameters are mutually distinct. Forall
/// binders are freshened so later substitutions stay capture-free.
pub fn bang_free_decoration(
    ty: &FType,
    params: &mut ParamSupply,
    names: &mut NameSupply,
) -> BangPType {
    BangPType {
        b: params.fresh_bool(),
        c: LinComb::single(params.fresh_int()),
        skel: decorate_skel(ty, params, names, &mut Vec::new()),
    }
}

/// Build a linear free decoration of a System F type.
pub fn lin_free_decoration(
    ty: &FType,
    params: &mut ParamSupply,
    names: &mut NameSupply,
) -> LinPType {
    LinPType {
        c: LinComb::single(params.fresh_int()),
        skel: decorate_skel(ty, params, names, &mut Vec::new()),
    }
}

fn decorate_skel(
    ty: &FType,
    params: &mut ParamSupply,
    names: &mut NameSupply,
    renames: &mut Vec<(Name, Name)>,
) -> PSkel {
    match ty {
        FType::Var(n) => {
            let n = renames
                .iter()
                .rev()
                .find(|(orig, _)| orig == n)
                .map(|(_, new)| new.clone())
                .unwrap_or_else(|| n.clone());
            PSkel::Var(n)
        }
        FType::Arrow(d, c) => {
            let dom = BangPType {
                b: params.fresh_bool(),
                c: LinComb::single(params.fresh_int()),
                skel: decorate_skel(d, params, names, renames),
            };
            let cod = LinPType {
                c: LinComb::single(params.fresh_int()),
                skel: decorate_skel(c, params, names, renames),
            };
            PSkel::Arrow(Box::new(dom), Box::new(cod))
        }
        FType::Forall(n, body) => {
            let fresh = names.fresh(n.base());
            renames.push((n.clone(), fresh.clone()));
            let body = LinPType {
                c: LinComb::single(params.fresh_int()),
                skel: decorate_skel(body, params, names, renames),
            };
            renames.pop();
            PSkel::Forall(fresh, Box::new(body))
        }
    }
}

/// `B[A/α]`: replace each `§^{c'} α` with `§^{c'+c} F` and each
/// `§^{b,c'} α` with `§^{b,c'+c} F`, where `A = §^c F`. Capture-free because
/// forall binders inside decorations are globally fresh.
pub fn ptype_subst(b: &LinPType, var: &Name, a: &LinPType) -> LinPType {
    lin_subst(b, var, a)
}

impl LinPType {
    /// Free type variables of the skeleton.
    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        skel_free_vars(&self.skel, &mut Vec::new(), &mut acc);
        acc
    }

    /// Every linear combination occurring in the p-type, own `c` included.
    pub fn combinations(&self) -> Vec<LinComb> {
        let mut out = vec![self.c.clone()];
        skel_combinations(&self.skel, &mut out);
        out
    }

    /// Every `(b, c)` pair at a bang node.
    pub fn bang_pairs(&self) -> Vec<(BoolParam, LinComb)> {
        let mut out = Vec::new();
        skel_bang_pairs(&self.skel, &mut out);
        out
    }
}

impl BangPType {
    pub fn combinations(&self) -> Vec<LinComb> {
        let mut out = vec![self.c.clone()];
        skel_combinations(&self.skel, &mut out);
        out
    }

    pub fn bang_pairs(&self) -> Vec<(BoolParam, LinComb)> {
        let mut out = vec![(self.b, self.c.clone())];
        skel_bang_pairs(&self.skel, &mut out);
        out
    }
}

fn subst_skel(skel: &PSkel, var: &Name, a: &LinPType) -> PSkel {
    match skel {
        PSkel::Var(_) => skel.clone(),
        PSkel::Arrow(d, cod) => {
            let d = match &d.skel {
                PSkel::Var(n) if n == var => BangPType {
                    b: d.b,
                    c: d.c.add(&a.c),
                    skel: a.skel.clone(),
                },
                _ => BangPType { b: d.b, c: d.c.clone(), skel: subst_skel(&d.skel, var, a) },
            };
            let cod = lin_subst(cod, var, a);
            PSkel::Arrow(Box::new(d), Box::new(cod))
        }
        PSkel::Forall(n, body) => {
            if n == var {
                skel.clone()
            } else {
                PSkel::Forall(n.clone(), Box::new(lin_subst(body, var, a)))
            }
        }
    }
}

fn lin_subst(b: &LinPType, var: &Name, a: &LinPType) -> LinPType {
    match &b.skel {
        PSkel::Var(n) if n == var => LinPType { c: b.c.add(&a.c), skel: a.skel.clone() },
        _ => LinPType { c: b.c.clone(), skel: subst_skel(&b.skel, var, a) },
    }
}

fn skel_free_vars(skel: &PSkel, bound: &mut Vec<Name>, acc: &mut BTreeSet<Name>) {
    match skel {
        PSkel::Var(n) => {
            if !bound.contains(n) {
                acc.insert(n.clone());
            }
        }
        PSkel::Arrow(d, c) => {
            skel_free_vars(&d.skel, bound, acc);
            skel_free_vars(&c.skel, bound, acc);
        }
        PSkel::Forall(n, body) => {
            bound.push(n.clone());
            skel_free_vars(&body.skel, bound, acc);
            bound.pop();
        }
    }
}

fn skel_combinations(skel: &PSkel, out: &mut Vec<LinComb>) {
    match skel {
        PSkel::Var(_) => {}
        PSkel::Arrow(d, c) => {
            out.push(d.c.clone());
            skel_combinations(&d.skel, out);
            out.push(c.c.clone());
            skel_combinations(&c.skel, out);
        }
        PSkel::Forall(_, body) => {
            out.push(body.c.clone());
            skel_combinations(&body.skel, out);
        }
    }
}

fn skel_bang_pairs(skel: &PSkel, out: &mut Vec<(BoolParam, LinComb)>) {
    match skel {
        PSkel::Var(_) => {}
        PSkel::Arrow(d, c) => {
            out.push((d.b, d.c.clone()));
            skel_bang_pairs(&d.skel, out);
            skel_bang_pairs(&c.skel, out);
        }
        PSkel::Forall(_, body) => skel_bang_pairs(&body.skel, out),
    }
}

/// Erase a linear p-type back to the System F type.
pub fn erase_lin(t: &LinPType) -> FType {
    erase_skel(&t.skel)
}

/// Erase a bang p-type back to the System F type.
pub fn erase_bang(t: &BangPType) -> FType {
    erase_skel(&t.skel)
}

fn erase_skel(skel: &PSkel) -> FType {
    match skel {
        PSkel::Var(n) => FType::Var(n.clone()),
        PSkel::Arrow(d, c) => {
            FType::Arrow(Box::new(erase_skel(&d.skel)), Box::new(erase_skel(&c.skel)))
        }
        PSkel::Forall(n, body) => FType::Forall(n.clone(), Box::new(erase_skel(&body.skel))),
    }
}

impl fmt::Display for LinPType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "§^[{}]{}", self.c, DisplaySkel(&self.skel))
    }
}

impl fmt::Display for BangPType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "§^[{},{}]{}", self.b, self.c, DisplaySkel(&self.skel))
    }
}

struct DisplaySkel<'a>(&'a PSkel);

impl fmt::Display for DisplaySkel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            PSkel::Var(n) => write!(f, "{n}"),
            PSkel::Arrow(d, c) => write!(f, "({} -o {})", d, c),
            PSkel::Forall(n, body) => write!(f, "(forall {n}. {body})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fterm::parse_type;

    fn decorate(src: &str) -> LinPType {
        let ty = parse_type(src).unwrap();
        let mut params = ParamSupply::new();
        let mut names = NameSupply::new();
        lin_free_decoration(&ty, &mut params, &mut names)
    }

    #[test]
    fn decoration_erases_back() {
        for src in ["a", "a -> b", "forall a. (a -> a) -> (a -> a) -> a -> a"] {
            let ty = parse_type(src).unwrap();
            let dec = decorate(src);
            assert!(erase_lin(&dec).alpha_eq(&ty), "{src}");
        }
    }

    #[test]
    fn decoration_parameters_are_distinct_singletons() {
        let dec = decorate("(a -> a) -> a -> a");
        let combos = dec.combinations();
        let mut seen = BTreeSet::new();
        for c in &combos {
            let terms: Vec<_> = c.terms().collect();
            assert_eq!(terms.len(), 1);
            assert_eq!(terms[0].1, 1);
            assert!(seen.insert(terms[0].0), "parameter reused");
        }
        // arrows: top, left (a->a), plus vars: a, a, a, a — one combination each
        assert_eq!(combos.len(), 7);
    }

    #[test]
    fn subst_adds_combinations_at_var_nodes() {
        // B = §^{c0} (b1,c1,α) ⊸ §^{c2} α ;  A = §^{ca} (β ⊸ β)-ish
        let b = decorate("a -> a");
        let a = decorate("x -> y");
        let out = ptype_subst(&b, &Name::new("a"), &a);
        match &out.skel {
            PSkel::Arrow(d, cod) => {
                assert_eq!(d.skel, a.skel);
                assert_eq!(cod.skel, a.skel);
                // combinations summed: c1 + ca at the bang node
                let dom_terms: Vec<_> = d.c.params().collect();
                assert_eq!(dom_terms.len(), 2);
                assert!(d.c.params().any(|p| a.c.params().any(|q| q == p)));
            }
            other => panic!("unexpected {other:?}"),
        }
        // the commutation with erasure
        let erased = erase_lin(&out);
        let mut supply = NameSupply::new();
        let expect =
            erase_lin(&b).subst(&Name::new("a"), &erase_lin(&a), &mut supply);
        assert!(erased.alpha_eq(&expect));
    }

    #[test]
    fn subst_respects_forall_shadowing() {
        let b = decorate("forall a. a");
        let a = decorate("x");
        let out = ptype_subst(&b, &Name::new("a"), &a);
        // the bound a (freshened at decoration) shadows nothing named "a",
        // and the substitution target does not occur free
        assert!(erase_lin(&out).alpha_eq(&parse_type("forall a. a").unwrap()));
    }
}
