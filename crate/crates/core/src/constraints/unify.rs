use thiserror::Error;

use crate::decor::{BangPType, LinPType, PSkel};
use crate::fterm::Name;

use super::atom::Atom;

/// Two p-types whose skeletons disagree cannot be unified. On decorations of
/// a typechecked term this never happens at application sites.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("p-type skeletons do not match: {left} vs {right}")]
pub struct UnifyMismatch {
    pub left: String,
    pub right: String,
}

/// Unification constraints for two linear p-types: `{c1 = c2}` at every
/// linear node, `{b1 = b2, c1 = c2}` at every bang node, descending
/// structurally with forall binders aligned by renaming.
pub fn unify(e1: &LinPType, e2: &LinPType) -> Result<Vec<Atom>, UnifyMismatch> {
    let mut out = Vec::new();
    unify_lin(e1, e2, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Unification of two bang p-types (adds the top-level `b1 = b2`).
pub fn unify_bang_types(
    e1: &BangPType,
    e2: &BangPType,
) -> Result<Vec<Atom>, UnifyMismatch> {
    let mut out = Vec::new();
    unify_bang(e1, e2, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn unify_lin(
    a: &LinPType,
    b: &LinPType,
    env: &mut Vec<(Name, Name)>,
    out: &mut Vec<Atom>,
) -> Result<(), UnifyMismatch> {
    if a.c != b.c {
        out.push(Atom::LinEq(a.c.clone(), b.c.clone()));
    }
    unify_skel(&a.skel, &b.skel, env, out)
}

fn unify_bang(
    a: &BangPType,
    b: &BangPType,
    env: &mut Vec<(Name, Name)>,
    out: &mut Vec<Atom>,
) -> Result<(), UnifyMismatch> {
    if a.b != b.b {
        out.push(Atom::BoolEq(a.b, b.b));
    }
    if a.c != b.c {
        out.push(Atom::LinEq(a.c.clone(), b.c.clone()));
    }
    unify_skel(&a.skel, &b.skel, env, out)
}

fn unify_skel(
    a: &PSkel,
    b: &PSkel,
    env: &mut Vec<(Name, Name)>,
    out: &mut Vec<Atom>,
) -> Result<(), UnifyMismatch> {
    match (a, b) {
        (PSkel::Var(x), PSkel::Var(y)) => {
            let matched = env
                .iter()
                .rev()
                .find(|(l, r)| l == x || r == y)
                .map(|(l, r)| l == x && r == y)
                .unwrap_or(x == y);
            if matched {
                Ok(())
            } else {
                Err(mismatch(a, b))
            }
        }
        (PSkel::Arrow(d1, c1), PSkel::Arrow(d2, c2)) => {
            unify_bang(d1, d2, env, out)?;
            unify_lin(c1, c2, env, out)
        }
        (PSkel::Forall(x, b1), PSkel::Forall(y, b2)) => {
            env.push((x.clone(), y.clone()));
            let r = unify_lin(b1, b2, env, out);
            env.pop();
            r
        }
        _ => Err(mismatch(a, b)),
    }
}

fn mismatch(a: &PSkel, b: &PSkel) -> UnifyMismatch {
    let show = |s: &PSkel| match s {
        PSkel::Var(n) => n.to_string(),
        PSkel::Arrow(..) => "an arrow".to_string(),
        PSkel::Forall(..) => "a quantifier".to_string(),
    };
    UnifyMismatch { left: show(a), right: show(b) }
}
