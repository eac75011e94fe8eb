//! Independent verification of decoration conditions on concrete
//! pseudo-terms: regularity, local typing, bracketing, bang and Λ-scope.
//! This is the oracle the constraint pipeline is validated against, and the
//! implementation behind `--verify`.

mod check;
mod search;

pub use check::{
    check_bang, check_bracketing, check_local_typing, check_regular, check_scope, verify_all,
    CheckKind, Violation,
};
pub use search::{bounded_search, bounded_search_pruned, SearchCapExceeded};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decor::{PseudoTerm, StarLin, StarType};

    fn lin(t: StarLin) -> StarType {
        StarType::Lin(t)
    }

    fn bang(t: StarLin) -> StarType {
        StarType::Bang(t)
    }

    fn main_door(t: PseudoTerm) -> PseudoTerm {
        PseudoTerm::Door { main: true, body: Box::new(t) }
    }

    fn aux_door(t: PseudoTerm) -> PseudoTerm {
        PseudoTerm::Door { main: false, body: Box::new(t) }
    }

    #[test]
    fn regularity_catches_adjacent_opposite_doors() {
        let x = PseudoTerm::var("x", lin(StarLin::var("a").sect()));
        assert!(check_regular(&main_door(aux_door(x.clone()))).is_err());
        assert!(check_regular(&main_door(main_door(x.clone()))).is_ok());
        assert!(check_regular(&x).is_ok());
    }

    #[test]
    fn identity_decoration_types() {
        let a = lin(StarLin::var("a"));
        let t = PseudoTerm::abs("x", a.clone(), PseudoTerm::var("x", a));
        let types = verify_all(&t).unwrap();
        let conclusion = &types[&crate::fterm::Path::root()];
        assert_eq!(crate::decor::print_star_lin(conclusion), "a -o a");
    }

    #[test]
    fn dereliction_fails_bracketing_iii() {
        // \x:§a. §-x
        let sa = lin(StarLin::var("a").sect());
        let t = PseudoTerm::abs("x", sa.clone(), aux_door(PseudoTerm::var("x", sa)));
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Bracketing);
        assert_eq!(v.clause, "iii");
    }

    #[test]
    fn digging_fails_bracketing_iii() {
        // \x:§a. §x — prefixes fine, total sum 1 ≠ 0
        let sa = lin(StarLin::var("a").sect());
        let t = PseudoTerm::abs("x", sa.clone(), main_door(PseudoTerm::var("x", sa)));
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Bracketing);
        assert_eq!(v.clause, "iii");
    }

    #[test]
    fn monoidalness_fails_bang_i_on_two_free_variables() {
        // \x:!(a -o b). \y:!b -o c. \z:!a. (y) §((§-x) (§-z))
        let a = StarLin::var("a");
        let b = StarLin::var("b");
        let c = StarLin::var("c");
        let ab = StarLin::arrow(lin(a.clone()), b.clone());
        let x_ty = bang(ab.clone());
        let y_ty = lin(StarLin::arrow(bang(b.clone()), c.clone()));
        let z_ty = bang(a.clone());
        let operand = main_door(PseudoTerm::app(
            aux_door(PseudoTerm::var("x", x_ty.clone())),
            aux_door(PseudoTerm::var("z", z_ty.clone())),
        ));
        let t = PseudoTerm::abs(
            "x",
            x_ty,
            PseudoTerm::abs(
                "y",
                y_ty.clone(),
                PseudoTerm::abs(
                    "z",
                    z_ty,
                    PseudoTerm::app(PseudoTerm::var("y", y_ty), operand),
                ),
            ),
        );
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Bang);
        assert_eq!(v.clause, "i");
        assert!(v.detail.contains("2 free-variable occurrences"), "{v}");
    }

    #[test]
    fn promotion_of_linear_variable_fails_bang_i() {
        // The textbook term \x:§a. \y:!a -o b. (y) §(§-x) has adjacent
        // opposite doors, so regularity rejects it before the bang check:
        let a = StarLin::var("a");
        let b = StarLin::var("b");
        let x_ty = lin(a.clone().sect());
        let y_ty = lin(StarLin::arrow(bang(a.clone()), b.clone()));
        let literal = PseudoTerm::abs(
            "x",
            x_ty.clone(),
            PseudoTerm::abs(
                "y",
                y_ty.clone(),
                PseudoTerm::app(
                    PseudoTerm::var("y", y_ty.clone()),
                    main_door(aux_door(PseudoTerm::var("x", x_ty.clone()))),
                ),
            ),
        );
        let v = verify_all(&literal).unwrap_err();
        assert_eq!(v.check, CheckKind::Regular);

        // the regular variant with an identity separator isolates the same
        // defect: a bang subterm whose single free variable is linear-typed
        // \x:§a. \y:!a -o b. (y) §((\q:a. q) (§-x))
        let q_ty = lin(a.clone());
        let operand = main_door(PseudoTerm::app(
            PseudoTerm::abs("q", q_ty.clone(), PseudoTerm::var("q", q_ty)),
            aux_door(PseudoTerm::var("x", x_ty.clone())),
        ));
        let t = PseudoTerm::abs(
            "x",
            x_ty,
            PseudoTerm::abs(
                "y",
                y_ty.clone(),
                PseudoTerm::app(PseudoTerm::var("y", y_ty), operand),
            ),
        );
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Bang);
        assert_eq!(v.clause, "i");
        assert!(v.detail.contains("linear"), "{v}");
    }

    #[test]
    fn barcan_shape_fails_scope() {
        // t2 = \x:forall a. §a. §(/\a. §-((x)[a]))
        let x_ty = lin(StarLin::forall("a", StarLin::var("a").sect()));
        let t = PseudoTerm::abs(
            "x",
            x_ty.clone(),
            main_door(PseudoTerm::ty_abs(
                "a",
                aux_door(PseudoTerm::ty_app(PseudoTerm::var("x", x_ty), StarLin::var("a"))),
            )),
        );
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Scope);
    }

    #[test]
    fn converse_barcan_shape_passes() {
        // t1 = \x:§(forall a. a). /\a. §((§-x)[a])
        let x_ty = lin(StarLin::forall("a", StarLin::var("a")).sect());
        let t = PseudoTerm::abs(
            "x",
            x_ty.clone(),
            PseudoTerm::ty_abs(
                "a",
                main_door(PseudoTerm::ty_app(
                    aux_door(PseudoTerm::var("x", x_ty)),
                    StarLin::var("a"),
                )),
            ),
        );
        verify_all(&t).unwrap();
    }

    #[test]
    fn duplicated_linear_variable_fails_local_typing_ii() {
        // \f:(a -o a). \x:a. (f) ((f) x) with f linear
        let a = StarLin::var("a");
        let f_ty = lin(StarLin::arrow(lin(a.clone()), a.clone()));
        let x_ty = lin(a.clone());
        let t = PseudoTerm::abs(
            "f",
            f_ty.clone(),
            PseudoTerm::abs(
                "x",
                x_ty.clone(),
                PseudoTerm::app(
                    PseudoTerm::var("f", f_ty.clone()),
                    PseudoTerm::app(PseudoTerm::var("f", f_ty), PseudoTerm::var("x", x_ty)),
                ),
            ),
        );
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::LocalTyping);
        assert_eq!(v.clause, "ii");
    }

    #[test]
    fn application_type_mismatch_fails_local_typing() {
        // (\x:a. x) applied to a §a-typed argument
        let a = StarLin::var("a");
        let id = PseudoTerm::abs("x", lin(a.clone()), PseudoTerm::var("x", lin(a.clone())));
        let arg = main_door(PseudoTerm::var("y", lin(a.clone())));
        let t = PseudoTerm::app(id, arg);
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::LocalTyping);
        assert_eq!(v.clause, "i");
    }

    #[test]
    fn bang_mismatch_allowance_at_applications() {
        // (\f:!a. ...) expects operand typed §a: x^{!a} demotes to §a
        let a = StarLin::var("a");
        let f_ty = bang(a.clone());
        let body_ty = lin(a.clone().sect());
        let fun =
            PseudoTerm::abs("f", f_ty.clone(), PseudoTerm::var("f", f_ty.clone()));
        let _ = body_ty;
        let arg = PseudoTerm::var("y", bang(a.clone()));
        let t = PseudoTerm::app(fun, arg);
        // operand typed §a against domain !a: accepted by the demotion rule
        let types = verify_all(&t).unwrap();
        let conclusion = &types[&crate::fterm::Path::root()];
        assert_eq!(crate::decor::print_star_lin(conclusion), "§a");
    }

    #[test]
    fn bang_ii_depth_requirement() {
        // \y:!b -o c. \z:!b. (y)((\q:§b. q) z)
        // The operand (\q:§b. q) z types as §b against the domain !b, so it
        // is a bang subterm; it is doorless, so bracketing holds vacuously,
        // but the inner abstraction sits at door depth 0.
        let b = StarLin::var("b");
        let c = StarLin::var("c");
        let y_ty = lin(StarLin::arrow(bang(b.clone()), c.clone()));
        let z_ty = bang(b.clone());
        let q_ty = lin(b.clone().sect());
        let operand = PseudoTerm::app(
            PseudoTerm::abs("q", q_ty.clone(), PseudoTerm::var("q", q_ty)),
            PseudoTerm::var("z", z_ty.clone()),
        );
        let t = PseudoTerm::abs(
            "y",
            y_ty.clone(),
            PseudoTerm::abs(
                "z",
                z_ty,
                PseudoTerm::app(PseudoTerm::var("y", y_ty), operand),
            ),
        );
        let v = verify_all(&t).unwrap_err();
        assert_eq!(v.check, CheckKind::Bang);
        assert_eq!(v.clause, "ii");

        // the well-boxed variant passes: single free bang variable at door
        // depth exactly 1, everything else deeper or equal
        let a = StarLin::var("a");
        let dom = StarLin::arrow(lin(a.clone()), a.clone());
        let y2_ty = lin(StarLin::arrow(bang(dom.clone()), c));
        let operand =
            main_door(PseudoTerm::abs("w", lin(a.clone()), PseudoTerm::var("w", lin(a))));
        let ok = PseudoTerm::app(PseudoTerm::var("y", y2_ty), operand);
        verify_all(&ok).unwrap();
    }

    #[test]
    fn doorless_closed_term_passes_bracketing() {
        let a = lin(StarLin::var("a"));
        let t = PseudoTerm::abs(
            "f",
            lin(StarLin::arrow(a.clone(), StarLin::var("a"))),
            PseudoTerm::abs(
                "x",
                a.clone(),
                PseudoTerm::app(
                    PseudoTerm::var("f", lin(StarLin::arrow(a.clone(), StarLin::var("a")))),
                    PseudoTerm::var("x", a),
                ),
            ),
        );
        check_bracketing(&t).unwrap();
    }
}
