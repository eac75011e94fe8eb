use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::decor::{
    free_decoration, BangPType, BoolParam, IntParam, LinComb, LinPType, PSkel, PTerm, ptype_subst,
};
use crate::fterm::{FTerm, Name, Path, Step, typecheck, TypeError};

use super::atom::{Atom, Constraint, Rule};
use super::store::ConstraintStore;
use super::unify::unify;

#[derive(Debug, Clone, Error)]
pub enum GenError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("internal constraint generation error: {0}")]
    Internal(String),
}

/// The decorated term with the linear output p-type assigned to every
/// subterm occurrence.
#[derive(Debug, Clone)]
pub struct TypedPTerm {
    pub term: PTerm,
    pub types: BTreeMap<Path, LinPType>,
}

impl TypedPTerm {
    pub fn conclusion(&self) -> &LinPType {
        &self.types[&Path::root()]
    }
}

/// Everything the solver and the reports need about one term.
#[derive(Debug, Clone)]
pub struct GenOutput {
    pub typed: TypedPTerm,
    pub store: ConstraintStore,
}

/// Admissibility atoms `M(E)` for a linear p-type: one `c >= 0` per
/// combination and one `b = 1 => c >= 1` per bang node.
pub fn admissibility_lin(ty: &LinPType) -> Vec<Atom> {
    let mut out: Vec<Atom> =
        ty.combinations().into_iter().map(|c| Atom::LinGeq(c, 0)).collect();
    out.extend(ty.bang_pairs().into_iter().map(|(b, c)| Atom::Mixed(b, c)));
    out
}

/// Admissibility atoms `M(D)` for a bang p-type.
pub fn admissibility_bang(ty: &BangPType) -> Vec<Atom> {
    let mut out: Vec<Atom> =
        ty.combinations().into_iter().map(|c| Atom::LinGeq(c, 0)).collect();
    out.extend(ty.bang_pairs().into_iter().map(|(b, c)| Atom::Mixed(b, c)));
    out
}

/// The word of door parameters on the path from the root of `t` to the
/// occurrence `u` (door nodes strictly above `u`, outermost first).
pub fn doors(t: &PTerm, u: &Path) -> Option<Vec<IntParam>> {
    let mut out = Vec::new();
    let mut cur = t;
    for step in u.steps() {
        if let PTerm::Door { m, .. } = cur {
            out.push(*m);
        }
        cur = cur.child(*step)?;
    }
    Some(out)
}

/// Sum of a door-parameter word as a linear combination.
pub fn lsum(word: &[IntParam]) -> LinComb {
    LinComb::sum_of(word.iter().copied())
}

/// Assign output p-types to every subterm of a free decoration and collect
/// the local typing constraints (admissibility, door positivity, application
/// unification, zero combinations at elimination heads, shared-variable
/// flags).
pub fn local_typing(term: &PTerm) -> Result<(TypedPTerm, Vec<Constraint>), GenError> {
    let mut types = BTreeMap::new();
    let mut atoms = Vec::new();
    assign(term, Path::root(), &mut types, &mut atoms)?;

    // b = 1 for every variable with more than one occurrence
    let mut occurrences: BTreeMap<Name, Vec<(Path, BoolParam)>> = BTreeMap::new();
    for (path, node) in term.occurrences() {
        if let PTerm::Var { name, ty } = node {
            occurrences.entry(name.clone()).or_default().push((path, ty.b));
        }
    }
    for occs in occurrences.values() {
        if occs.len() > 1 {
            let (path, b) = &occs[0];
            atoms.push(Constraint {
                atom: Atom::BoolConst(*b, true),
                rule: Rule::LtypeShared,
                path: path.clone(),
            });
        }
    }

    Ok((TypedPTerm { term: term.clone(), types }, atoms))
}

fn assign(
    t: &PTerm,
    path: Path,
    types: &mut BTreeMap<Path, LinPType>,
    atoms: &mut Vec<Constraint>,
) -> Result<LinPType, GenError> {
    let emit = |atoms: &mut Vec<Constraint>, list: Vec<Atom>, rule: Rule, path: &Path| {
        for atom in list {
            atoms.push(Constraint { atom, rule, path: path.clone() });
        }
    };
    let ty = match t {
        PTerm::Var { ty, .. } => {
            emit(atoms, admissibility_bang(ty), Rule::LtypeVar, &path);
            ty.demote()
        }
        PTerm::Door { m, body } => {
            let inner = assign(body, path.child(Step::DoorBody), types, atoms)?;
            let mut c = inner.c.clone();
            c.add_param(*m);
            emit(atoms, vec![Atom::LinGeq(c.clone(), 0)], Rule::LtypeDoor, &path);
            LinPType { c, skel: inner.skel }
        }
        PTerm::Abs { ty, body, .. } => {
            emit(atoms, admissibility_bang(ty), Rule::LtypeAbs, &path);
            let cod = assign(body, path.child(Step::AbsBody), types, atoms)?;
            LinPType {
                c: LinComb::zero(),
                skel: PSkel::Arrow(Box::new(ty.clone()), Box::new(cod)),
            }
        }
        PTerm::App { fun, arg } => {
            let fun_ty = assign(fun, path.child(Step::AppFun), types, atoms)?;
            let arg_ty = assign(arg, path.child(Step::AppArg), types, atoms)?;
            let PSkel::Arrow(dom, cod) = &fun_ty.skel else {
                return Err(GenError::Internal(format!(
                    "operator at {path} has non-arrow p-type"
                )));
            };
            emit(atoms, vec![Atom::LinEqZero(fun_ty.c.clone())], Rule::LtypeAppZero, &path);
            let unified = unify(&dom.demote(), &arg_ty)
                .map_err(|e| GenError::Internal(format!("unification at {path}: {e}")))?;
            emit(atoms, unified, Rule::LtypeUnify, &path);
            (**cod).clone()
        }
        PTerm::TyAbs { name, body } => {
            let body_ty = assign(body, path.child(Step::TyAbsBody), types, atoms)?;
            LinPType {
                c: LinComb::zero(),
                skel: PSkel::Forall(name.clone(), Box::new(body_ty)),
            }
        }
        PTerm::TyApp { fun, arg } => {
            let fun_ty = assign(fun, path.child(Step::TyAppFun), types, atoms)?;
            let PSkel::Forall(alpha, body) = &fun_ty.skel else {
                return Err(GenError::Internal(format!(
                    "type-application head at {path} has non-forall p-type"
                )));
            };
            emit(atoms, vec![Atom::LinEqZero(fun_ty.c.clone())], Rule::LtypeTyAppZero, &path);
            emit(atoms, admissibility_lin(arg), Rule::LtypeTyArg, &path);
            ptype_subst(body, alpha, arg)
        }
    };
    types.insert(path, ty.clone());
    Ok(ty)
}

/// Per-occurrence facts gathered in one pass, shared by the three boxing
/// generators.
struct TermInfo {
    /// door word from the root, per path
    words: BTreeMap<Path, Vec<IntParam>>,
    /// every occurrence path, preorder
    all_paths: Vec<Path>,
    var_occs: Vec<(Path, Name, BoolParam)>,
    abs_nodes: Vec<(Path, Name)>,
    tyabs_nodes: Vec<(Path, Name)>,
    app_nodes: Vec<Path>,
    binder_of: BTreeMap<Name, Path>,
}

impl TermInfo {
    fn gather(term: &PTerm) -> Self {
        let mut info = TermInfo {
            words: BTreeMap::new(),
            all_paths: Vec::new(),
            var_occs: Vec::new(),
            abs_nodes: Vec::new(),
            tyabs_nodes: Vec::new(),
            app_nodes: Vec::new(),
            binder_of: BTreeMap::new(),
        };
        let mut stack = Vec::new();
        info.walk(term, Path::root(), &mut stack);
        info
    }

    fn walk(&mut self, t: &PTerm, path: Path, doors_above: &mut Vec<IntParam>) {
        self.words.insert(path.clone(), doors_above.clone());
        self.all_paths.push(path.clone());
        match t {
            PTerm::Var { name, ty } => {
                self.var_occs.push((path, name.clone(), ty.b));
            }
            PTerm::Abs { name, body, .. } => {
                self.abs_nodes.push((path.clone(), name.clone()));
                self.binder_of.insert(name.clone(), path.clone());
                self.walk(body, path.child(Step::AbsBody), doors_above);
            }
            PTerm::App { fun, arg } => {
                self.app_nodes.push(path.clone());
                self.walk(fun, path.child(Step::AppFun), doors_above);
                self.walk(arg, path.child(Step::AppArg), doors_above);
            }
            PTerm::TyAbs { name, body } => {
                self.tyabs_nodes.push((path.clone(), name.clone()));
                self.walk(body, path.child(Step::TyAbsBody), doors_above);
            }
            PTerm::TyApp { fun, .. } => {
                self.walk(fun, path.child(Step::TyAppFun), doors_above);
            }
            PTerm::Door { m, body } => {
                doors_above.push(*m);
                self.walk(body, path.child(Step::DoorBody), doors_above);
                doors_above.pop();
            }
        }
    }

    /// Door word from the occurrence `from` to a descendant `to` (includes
    /// `from`'s own door if `from` is a door node).
    fn word_between(&self, from: &Path, to: &Path) -> Vec<IntParam> {
        let upper = self.words[from].len();
        self.words[to][upper..].to_vec()
    }

    /// True when the variable occurrence at `occ` (named `name`) is bound by
    /// an abstraction inside the subterm rooted at `scope`.
    fn bound_within(&self, name: &Name, scope: &Path) -> bool {
        self.binder_of.get(name).is_some_and(|binder| scope.is_prefix_of(binder))
    }
}

fn wbracket_atoms(word: &[IntParam]) -> Vec<Atom> {
    // one `s(l') >= 0` per nonempty prefix; the empty prefix is vacuous
    (1..=word.len())
        .map(|k| Atom::LinGeq(lsum(&word[..k]), 0))
        .collect()
}

fn bracket_atoms(word: &[IntParam]) -> Vec<Atom> {
    let mut out = wbracket_atoms(word);
    out.push(Atom::LinEqZero(lsum(word)));
    out
}

/// Bracketing constraints: (i) free-variable occurrences are well-bracketed
/// from the root; (ii) abstraction occurrences are weakly well-bracketed
/// from the root; (iii) bound occurrences are well-bracketed from their
/// binder's body.
pub fn gen_bracketing(typed: &TypedPTerm) -> Vec<Constraint> {
    let info = TermInfo::gather(&typed.term);
    let mut out = Vec::new();
    for (occ, name, _) in &info.var_occs {
        if !info.bound_within(name, &Path::root()) {
            for atom in bracket_atoms(&info.words[occ]) {
                out.push(Constraint { atom, rule: Rule::BracketFree, path: occ.clone() });
            }
        }
    }
    for (abs_path, name) in &info.abs_nodes {
        for atom in wbracket_atoms(&info.words[abs_path]) {
            out.push(Constraint { atom, rule: Rule::BracketAbs, path: abs_path.clone() });
        }
        let body = abs_path.child(Step::AbsBody);
        for (occ, occ_name, _) in &info.var_occs {
            if occ_name == name && body.is_prefix_of(occ) {
                for atom in bracket_atoms(&info.word_between(&body, occ)) {
                    out.push(Constraint { atom, rule: Rule::BracketBound, path: occ.clone() });
                }
            }
        }
    }
    out
}

/// Bang constraints. Every application operand is a potential bang subterm
/// whose critical parameter is the bang flag of the operator's domain:
/// (i) censuses the operand's free-variable occurrences, (ii) requires every
/// proper subterm occurrence other than the distinguished variable to sit at
/// door depth at least 1.
pub fn gen_bang(typed: &TypedPTerm) -> Vec<Constraint> {
    let info = TermInfo::gather(&typed.term);
    let mut out = Vec::new();
    for app in &info.app_nodes {
        let fun_ty = &typed.types[&app.child(Step::AppFun)];
        let PSkel::Arrow(dom, _) = &fun_ty.skel else { continue };
        let critical = dom.b;
        let operand = app.child(Step::AppArg);

        let free_occs: Vec<&(Path, Name, BoolParam)> = info
            .var_occs
            .iter()
            .filter(|(occ, name, _)| {
                operand.is_prefix_of(occ) && !info.bound_within(name, &operand)
            })
            .collect();

        let distinguished = match free_occs.as_slice() {
            [] => None,
            [(occ, _, b_prime)] => {
                out.push(Constraint {
                    atom: Atom::BoolImpl(critical, *b_prime),
                    rule: Rule::BangFree,
                    path: occ.clone(),
                });
                Some(occ.clone())
            }
            _ => {
                out.push(Constraint {
                    atom: Atom::BoolConst(critical, false),
                    rule: Rule::BangFree,
                    path: operand.clone(),
                });
                None
            }
        };

        for v in &info.all_paths {
            if !operand.is_strict_prefix_of(v) || Some(v) == distinguished.as_ref() {
                continue;
            }
            out.push(Constraint {
                atom: Atom::Mixed(critical, lsum(&info.word_between(&operand, v))),
                rule: Rule::BangInner,
                path: v.clone(),
            });
        }
    }
    out
}

/// Scope constraints: for every type abstraction and every subterm
/// occurrence of its body whose assigned output p-type mentions the bound
/// variable, the doors word from the body is weakly well-bracketed.
pub fn gen_scope(typed: &TypedPTerm) -> Vec<Constraint> {
    let info = TermInfo::gather(&typed.term);
    let mut out = Vec::new();
    for (tyabs_path, alpha) in &info.tyabs_nodes {
        let body = tyabs_path.child(Step::TyAbsBody);
        for v in &info.all_paths {
            if !body.is_prefix_of(v) {
                continue;
            }
            if typed.types[v].free_type_vars().contains(alpha) {
                for atom in wbracket_atoms(&info.word_between(&body, v)) {
                    out.push(Constraint { atom, rule: Rule::Scope, path: v.clone() });
                }
            }
        }
    }
    out
}

/// Run the whole front end on a System F term: typecheck, build the free
/// decoration, assign output p-types, and generate the partitioned
/// constraint store with provenance.
pub fn gen_all(m: &FTerm) -> Result<GenOutput, GenError> {
    typecheck(m)?;
    let pterm = free_decoration(m);
    let (typed, ltype) = local_typing(&pterm)?;
    let mut store = ConstraintStore::new(&pterm);
    for c in ltype {
        store.push(c);
    }
    for c in gen_bracketing(&typed) {
        store.push(c);
    }
    for c in gen_bang(&typed) {
        store.push(c);
    }
    for c in gen_scope(&typed) {
        store.push(c);
    }
    Ok(GenOutput { typed, store })
}

/// Every combination occurring in the declared p-types of a term; the
/// optional minimization objective sums these.
pub fn type_combinations(term: &PTerm) -> Vec<LinComb> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (_, node) in term.occurrences() {
        match node {
            // binder types cover their occurrences (shared decoration)
            PTerm::Abs { ty, .. } => {
                for c in ty.combinations() {
                    if seen.insert(c.clone()) {
                        out.push(c);
                    }
                }
            }
            PTerm::Var { name, ty } => {
                // free variables have no binder node; collect on first sight
                let _ = name;
                for c in ty.combinations() {
                    if seen.insert(c.clone()) {
                        out.push(c);
                    }
                }
            }
            PTerm::TyApp { arg, .. } => {
                for c in arg.combinations() {
                    if seen.insert(c.clone()) {
                        out.push(c);
                    }
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fterm::parse_term;

    fn gen(src: &str) -> GenOutput {
        gen_all(&parse_term(src).unwrap()).unwrap()
    }

    #[test]
    fn identity_constraints_match_hand_derivation() {
        // ⟨\x:a. x⟩ = §^{m_out} \x^{(b1,n1,a)}. §^{m_in} x
        let out = gen(r"\x:a. x");
        let dump = out.store.dump();
        // conclusion p-type: (m_out, (b1,n1,a) ⊸ (m_in+n1, a))
        let conclusion = out.typed.conclusion();
        match &conclusion.skel {
            PSkel::Arrow(dom, cod) => {
                assert_eq!(dom.c.terms().count(), 1);
                assert_eq!(cod.c.terms().count(), 2, "m_in + n1");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(conclusion.c.terms().count(), 1, "the outer door");

        // hand-derived distinct atoms:
        //   ltype: m_out >= 0, m_in + n1 >= 0, n1 >= 0, b1=1 => n1 >= 1
        //   bracket (ii): m_out >= 0 (dup), (iii): m_in >= 0, m_in = 0
        let (b, l, m) = out.store.class_counts();
        assert_eq!((b, l, m), (0, 5, 1), "distinct atoms by class\n{dump}");
        assert!(out.store.constraints.iter().any(|c| c.rule == Rule::BracketBound
            && matches!(c.atom, Atom::LinEqZero(_))));
    }

    #[test]
    fn shared_variables_get_bang_flags() {
        let out = gen(r"\f:a -> a. \x:a. f (f x)");
        let shared: Vec<_> = out
            .store
            .constraints
            .iter()
            .filter(|c| c.rule == Rule::LtypeShared)
            .collect();
        assert_eq!(shared.len(), 1, "only f occurs twice");
        assert!(matches!(shared[0].atom, Atom::BoolConst(_, true)));
    }

    #[test]
    fn type_application_emits_zero_and_admissibility() {
        let out = gen(r"(/\a. \z:a. z) [b]");
        assert!(out
            .store
            .constraints
            .iter()
            .any(|c| c.rule == Rule::LtypeTyAppZero && matches!(c.atom, Atom::LinEqZero(_))));
        assert!(out.store.constraints.iter().any(|c| c.rule == Rule::LtypeTyArg));
    }

    #[test]
    fn scope_covers_alpha_dependent_subterms() {
        // ⟨/\a. \z:a. z⟩: the abstraction node and both z occurrences depend
        // on a; their doors words from the /\-body must be weakly bracketed
        let out = gen(r"/\a. \z:a. z");
        let scope: Vec<_> =
            out.store.constraints.iter().filter(|c| c.rule == Rule::Scope).collect();
        assert!(!scope.is_empty());
        for c in &scope {
            assert!(matches!(c.atom, Atom::LinGeq(..)));
        }
    }

    #[test]
    fn closed_terms_have_no_free_bracketing() {
        let out = gen(r"\x:a. x");
        assert!(!out.store.constraints.iter().any(|c| c.rule == Rule::BracketFree));
    }

    #[test]
    fn operand_inner_atoms_cover_door_nodes() {
        // (f) x: the operand ⟨x⟩ = §^m x has no proper non-variable subterm,
        // so bang (ii) emits nothing for it; (i) links the two bang flags
        let out = gen(r"\f:a -> a. \x:a. f x");
        let bang_i: Vec<_> =
            out.store.constraints.iter().filter(|c| c.rule == Rule::BangFree).collect();
        assert_eq!(bang_i.len(), 1);
        assert!(matches!(bang_i[0].atom, Atom::BoolImpl(..)));
        let bang_ii: Vec<_> =
            out.store.constraints.iter().filter(|c| c.rule == Rule::BangInner).collect();
        assert!(bang_ii.is_empty());
    }

    #[test]
    fn operand_with_structure_gets_inner_atoms() {
        // (f) (g x): operand ⟨(g) x⟩ = §^m ((§^m1 g) (§^m2 x)) has proper
        // subterms at depths m1-relative; two free occurrences force b = 0
        let out = gen(r"\f:a -> a. \g:a -> a. \x:a. f (g x)");
        assert!(out
            .store
            .constraints
            .iter()
            .any(|c| c.rule == Rule::BangFree && matches!(c.atom, Atom::BoolConst(_, false))));
        assert!(out.store.constraints.iter().any(|c| c.rule == Rule::BangInner));
    }

    #[test]
    fn generation_is_deterministic() {
        let t = parse_term(r"\f:a -> a. \x:a. f (f x)").unwrap();
        let a = gen_all(&t).unwrap().store.dump();
        let b = gen_all(&t).unwrap().store.dump();
        assert_eq!(a, b);
    }
}
