use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::decor::{print_star_lin, print_star_type, PseudoTerm, StarLin, StarSkel, StarType};
use crate::fterm::{Name, NameSupply, Path, Step};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckKind {
    Regular,
    LocalTyping,
    Bracketing,
    Bang,
    Scope,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckKind::Regular => "regularity",
            CheckKind::LocalTyping => "local typing",
            CheckKind::Bracketing => "bracketing",
            CheckKind::Bang => "bang",
            CheckKind::Scope => "scope",
        };
        write!(f, "{s}")
    }
}

/// A failed condition: which check, which clause, where, and why.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{check} ({clause}) at {path}: {detail}")]
pub struct Violation {
    pub check: CheckKind,
    pub clause: &'static str,
    pub path: Path,
    pub detail: String,
}

fn violation(check: CheckKind, clause: &'static str, path: &Path, detail: String) -> Violation {
    Violation { check, clause, path: path.clone(), detail }
}

/// No `§ §- u` or `§- § u` anywhere.
pub fn check_regular(t: &PseudoTerm) -> Result<(), Violation> {
    for (path, node) in t.occurrences() {
        if let PseudoTerm::Door { main, body } = node {
            if let PseudoTerm::Door { main: inner, .. } = body.as_ref() {
                if main != inner {
                    return Err(violation(
                        CheckKind::Regular,
                        "adjacency",
                        &path,
                        "adjacent opposite doors".to_string(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Occurrence resolution: binder path (None for free) per variable
/// occurrence, respecting shadowing.
fn resolve_occurrences(t: &PseudoTerm) -> Vec<(Path, Name, StarType, Option<Path>)> {
    let mut out = Vec::new();
    fn go<'a>(
        t: &'a PseudoTerm,
        path: Path,
        scope: &mut Vec<(Name, Path)>,
        out: &mut Vec<(Path, Name, StarType, Option<Path>)>,
    ) {
        match t {
            PseudoTerm::Var { name, ty } => {
                let binder =
                    scope.iter().rev().find(|(n, _)| n == name).map(|(_, p)| p.clone());
                out.push((path, name.clone(), ty.clone(), binder));
            }
            PseudoTerm::Abs { name, body, .. } => {
                scope.push((name.clone(), path.clone()));
                go(body, path.child(Step::AbsBody), scope, out);
                scope.pop();
            }
            PseudoTerm::App { fun, arg } => {
                go(fun, path.child(Step::AppFun), scope, out);
                go(arg, path.child(Step::AppArg), scope, out);
            }
            PseudoTerm::TyAbs { body, .. } => go(body, path.child(Step::TyAbsBody), scope, out),
            PseudoTerm::TyApp { fun, .. } => go(fun, path.child(Step::TyAppFun), scope, out),
            PseudoTerm::Door { body, .. } => go(body, path.child(Step::DoorBody), scope, out),
        }
    }
    go(t, Path::root(), &mut Vec::new(), &mut out);
    out
}

/// Inductively assign a linear output type to every subterm per the seven
/// schemata, with the bang-demotion allowance at variables and applications;
/// check that multiply-occurring variables are bang-typed (ii) and the
/// eigenvariable condition (iii).
pub fn check_local_typing(t: &PseudoTerm) -> Result<BTreeMap<Path, StarLin>, Violation> {
    let mut types = BTreeMap::new();
    let mut supply = NameSupply::new();
    assign(t, Path::root(), &mut Vec::new(), &mut types, &mut supply)?;

    // (ii): a variable with several occurrences must be declared !-typed
    let occs = resolve_occurrences(t);
    let mut per_binding: BTreeMap<(Option<Path>, Name), Vec<(Path, StarType)>> = BTreeMap::new();
    for (path, name, ty, binder) in occs {
        per_binding.entry((binder, name)).or_default().push((path, ty));
    }
    for ((_, name), occs) in per_binding {
        if occs.len() > 1 {
            if let Some((path, ty)) = occs.iter().find(|(_, ty)| !ty.is_bang()) {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "ii",
                    path,
                    format!("'{name}' occurs {} times but is typed {}", occs.len(),
                        print_star_type(ty)),
                ));
            }
        }
    }
    Ok(types)
}

fn assign(
    t: &PseudoTerm,
    path: Path,
    env: &mut Vec<(Name, StarType)>,
    types: &mut BTreeMap<Path, StarLin>,
    supply: &mut NameSupply,
) -> Result<StarLin, Violation> {
    let ty = match t {
        PseudoTerm::Var { name, ty } => {
            if let Some((_, declared)) = env.iter().rev().find(|(n, _)| n == name) {
                if !declared.alpha_eq(ty) {
                    return Err(violation(
                        CheckKind::LocalTyping,
                        "i",
                        &path,
                        format!(
                            "occurrence of '{name}' typed {} but its binder declares {}",
                            print_star_type(ty),
                            print_star_type(declared)
                        ),
                    ));
                }
            }
            ty.demote()
        }
        PseudoTerm::Door { main, body } => {
            let inner = assign(body, path.child(Step::DoorBody), env, types, supply)?;
            if *main {
                StarLin { doors: inner.doors + 1, skel: inner.skel }
            } else if inner.doors >= 1 {
                StarLin { doors: inner.doors - 1, skel: inner.skel }
            } else {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!(
                        "auxiliary door applied to {} which has no leading §",
                        print_star_lin(&inner)
                    ),
                ));
            }
        }
        PseudoTerm::Abs { name, ty, body } => {
            env.push((name.clone(), ty.clone()));
            let cod = assign(body, path.child(Step::AbsBody), env, types, supply)?;
            env.pop();
            StarLin { doors: 0, skel: StarSkel::Arrow(Box::new(ty.clone()), Box::new(cod)) }
        }
        PseudoTerm::App { fun, arg } => {
            let fun_ty = assign(fun, path.child(Step::AppFun), env, types, supply)?;
            let arg_ty = assign(arg, path.child(Step::AppArg), env, types, supply)?;
            if fun_ty.doors != 0 {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!("operator typed {} has leading §", print_star_lin(&fun_ty)),
                ));
            }
            let StarSkel::Arrow(dom, cod) = &fun_ty.skel else {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!("operator typed {} is not an arrow", print_star_lin(&fun_ty)),
                ));
            };
            let expected = dom.demote();
            if !expected.alpha_eq(&arg_ty) {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!(
                        "operand typed {} against domain {}",
                        print_star_lin(&arg_ty),
                        print_star_type(dom)
                    ),
                ));
            }
            (**cod).clone()
        }
        PseudoTerm::TyAbs { name, body } => {
            // (iii) eigenvariable: the bound variable must not occur free in
            // the declared types of the body's free variables
            for (occ, var, ty, binder) in resolve_occurrences(body) {
                let bound_inside = binder.is_some();
                if !bound_inside && ty.lin().free_vars().contains(name) {
                    return Err(violation(
                        CheckKind::LocalTyping,
                        "iii",
                        &path.child(Step::TyAbsBody).clone(),
                        format!(
                            "'{name}' occurs in the type of free variable '{var}' at {occ}"
                        ),
                    ));
                }
            }
            let body_ty = assign(body, path.child(Step::TyAbsBody), env, types, supply)?;
            StarLin { doors: 0, skel: StarSkel::Forall(name.clone(), Box::new(body_ty)) }
        }
        PseudoTerm::TyApp { fun, arg } => {
            let fun_ty = assign(fun, path.child(Step::TyAppFun), env, types, supply)?;
            if fun_ty.doors != 0 {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!("type-application head typed {} has leading §", print_star_lin(&fun_ty)),
                ));
            }
            let StarSkel::Forall(alpha, body) = &fun_ty.skel else {
                return Err(violation(
                    CheckKind::LocalTyping,
                    "i",
                    &path,
                    format!(
                        "type-application head typed {} is not a quantifier",
                        print_star_lin(&fun_ty)
                    ),
                ));
            };
            body.subst(alpha, arg, supply)
        }
    };
    types.insert(path, ty.clone());
    Ok(ty)
}

/// Door words as ±1 sequences from an ancestor to a descendant occurrence.
fn door_word(t: &PseudoTerm, from: &Path, to: &Path) -> Vec<i64> {
    let mut word = Vec::new();
    let mut cur = t.at_path(from).expect("valid ancestor path");
    for step in &to.steps()[from.len()..] {
        if let PseudoTerm::Door { main, .. } = cur {
            word.push(if *main { 1 } else { -1 });
        }
        cur = cur.child(*step).expect("valid descendant path");
    }
    word
}

fn prefix_sums_nonnegative(word: &[i64]) -> Result<(), (usize, i64)> {
    let mut s = 0;
    for (i, d) in word.iter().enumerate() {
        s += d;
        if s < 0 {
            return Err((i + 1, s));
        }
    }
    Ok(())
}

fn weakly_bracketed(word: &[i64]) -> Result<(), String> {
    prefix_sums_nonnegative(word)
        .map_err(|(i, s)| format!("prefix of length {i} sums to {s}"))
}

fn well_bracketed(word: &[i64]) -> Result<(), String> {
    weakly_bracketed(word)?;
    let total: i64 = word.iter().sum();
    if total != 0 {
        return Err(format!("total door sum is {total}, not 0"));
    }
    Ok(())
}

/// Bracketing condition: (i) free-variable occurrences well-bracketed from
/// the root, (ii) abstraction occurrences weakly well-bracketed from the
/// root, (iii) bound occurrences well-bracketed from their binder's body.
pub fn check_bracketing(t: &PseudoTerm) -> Result<(), Violation> {
    let occs = resolve_occurrences(t);
    for (occ, name, _, binder) in &occs {
        if binder.is_none() {
            well_bracketed(&door_word(t, &Path::root(), occ)).map_err(|e| {
                violation(CheckKind::Bracketing, "i", occ, format!("free '{name}': {e}"))
            })?;
        }
    }
    for (path, node) in t.occurrences() {
        if let PseudoTerm::Abs { name, .. } = node {
            weakly_bracketed(&door_word(t, &Path::root(), &path)).map_err(|e| {
                violation(CheckKind::Bracketing, "ii", &path, format!("\\{name}: {e}"))
            })?;
            let body = path.child(Step::AbsBody);
            for (occ, occ_name, _, binder) in &occs {
                if occ_name == name && binder.as_ref() == Some(&path) {
                    well_bracketed(&door_word(t, &body, occ)).map_err(|e| {
                        violation(
                            CheckKind::Bracketing,
                            "iii",
                            occ,
                            format!("'{occ_name}' from its binder's body: {e}"),
                        )
                    })?;
                }
            }
        }
    }
    Ok(())
}

/// Bang subterms: operands of applications whose operator type is
/// `!A -o B`. Requires the local typing assignment.
fn bang_subterms<'a>(
    t: &'a PseudoTerm,
    types: &BTreeMap<Path, StarLin>,
) -> Vec<Path> {
    let mut out = Vec::new();
    for (path, node) in t.occurrences() {
        if let PseudoTerm::App { .. } = node {
            let fun_ty = &types[&path.child(Step::AppFun)];
            if let StarSkel::Arrow(dom, _) = &fun_ty.skel {
                if dom.is_bang() {
                    out.push(path.child(Step::AppArg));
                }
            }
        }
    }
    out
}

/// Bang condition: (i) a bang subterm contains at most one free-variable
/// occurrence, which must be bang-typed; (ii) every other proper subterm
/// occurrence sits at door depth at least 1.
pub fn check_bang(
    t: &PseudoTerm,
    types: &BTreeMap<Path, StarLin>,
) -> Result<(), Violation> {
    let occs = resolve_occurrences(t);
    for u in bang_subterms(t, types) {
        let free_in_u: Vec<_> = occs
            .iter()
            .filter(|(occ, _, _, binder)| {
                u.is_prefix_of(occ)
                    && !binder.as_ref().is_some_and(|b| u.is_prefix_of(b))
            })
            .collect();
        let distinguished = match free_in_u.as_slice() {
            [] => None,
            [(occ, name, ty, _)] => {
                if !ty.is_bang() {
                    return Err(violation(
                        CheckKind::Bang,
                        "i",
                        occ,
                        format!(
                            "free variable '{name}' of a bang subterm typed {} (linear)",
                            print_star_type(ty)
                        ),
                    ));
                }
                Some(occ.clone())
            }
            many => {
                return Err(violation(
                    CheckKind::Bang,
                    "i",
                    &u,
                    format!("bang subterm contains {} free-variable occurrences", many.len()),
                ));
            }
        };
        let sub = t.at_path(&u).expect("bang subterm path");
        for (rel, _) in sub.occurrences() {
            if rel.is_empty() {
                continue;
            }
            let v = join(&u, &rel);
            if Some(&v) == distinguished.as_ref() {
                continue;
            }
            let s: i64 = door_word(t, &u, &v).iter().sum();
            if s < 1 {
                return Err(violation(
                    CheckKind::Bang,
                    "ii",
                    &v,
                    format!("subterm at door depth {s} inside a bang subterm"),
                ));
            }
        }
    }
    Ok(())
}

fn join(base: &Path, rel: &Path) -> Path {
    let mut p = base.clone();
    for s in rel.steps() {
        p = p.child(*s);
    }
    p
}

/// Scope condition: inside every `/\a. u`, every subterm occurrence whose
/// assigned type mentions `a` freely lies at weakly well-bracketed doors
/// from `u`.
pub fn check_scope(
    t: &PseudoTerm,
    types: &BTreeMap<Path, StarLin>,
) -> Result<(), Violation> {
    for (path, node) in t.occurrences() {
        if let PseudoTerm::TyAbs { name, .. } = node {
            let u = path.child(Step::TyAbsBody);
            let sub = t.at_path(&u).expect("tyabs body path");
            for (rel, _) in sub.occurrences() {
                let v = join(&u, &rel);
                if types[&v].free_vars().contains(name) {
                    weakly_bracketed(&door_word(t, &u, &v)).map_err(|e| {
                        violation(
                            CheckKind::Scope,
                            "Λ",
                            &v,
                            format!("occurrence depending on '{name}': {e}"),
                        )
                    })?;
                }
            }
        }
    }
    Ok(())
}

/// All five checks, in presentation order; reports the first violation.
pub fn verify_all(t: &PseudoTerm) -> Result<BTreeMap<Path, StarLin>, Violation> {
    check_regular(t)?;
    let types = check_local_typing(t)?;
    check_bracketing(t)?;
    check_bang(t, &types)?;
    check_scope(t, &types)?;
    Ok(types)
}
