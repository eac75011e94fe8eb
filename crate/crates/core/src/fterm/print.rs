use std::collections::BTreeSet;

use super::ast::{FTerm, FType, Name};

/// Pretty-print a term in the surface grammar. Binder displays are kept
/// collision-free so the output reparses to an alpha-equivalent term.
pub fn print_term(t: &FTerm) -> String {
    let mut pr = Printer::for_term(t);
    let mut out = String::new();
    pr.term(t, 0, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Pretty-print a type in the surface grammar.
pub fn print_type(ty: &FType) -> String {
    let mut pr = Printer { used: ty.free_vars().iter().map(Name::to_string).collect() };
    let mut out = String::new();
    pr.ty(ty, 0, &mut Vec::new(), &mut out);
    out
}

struct Printer {
    used: BTreeSet<String>,
}

impl Printer {
    fn for_term(t: &FTerm) -> Self {
        let mut used: BTreeSet<String> = t.free_term_vars().iter().map(Name::to_string).collect();
        used.extend(t.free_type_vars().iter().map(Name::to_string));
        Printer { used }
    }

    fn display(&mut self, n: &Name) -> String {
        let mut d = n.to_string();
        while self.used.contains(&d) {
            d.push('\'');
        }
        self.used.insert(d.clone());
        d
    }

    fn lookup(env: &[(Name, String)], n: &Name) -> Option<String> {
        env.iter().rev().find(|(k, _)| k == n).map(|(_, v)| v.clone())
    }

    // precedence: 0 = top, 1 = argument of an arrow's domain / app operand
    fn ty(&mut self, ty: &FType, prec: u8, tenv: &mut Vec<(Name, String)>, out: &mut String) {
        match ty {
            FType::Var(n) => {
                out.push_str(&Self::lookup(tenv, n).unwrap_or_else(|| n.to_string()));
            }
            FType::Arrow(d, c) => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                self.ty(d, 1, tenv, out);
                out.push_str(" -> ");
                self.ty(c, 0, tenv, out);
                if parens {
                    out.push(')');
                }
            }
            FType::Forall(n, body) => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                let d = self.display(n);
                out.push_str("forall ");
                out.push_str(&d);
                out.push_str(". ");
                tenv.push((n.clone(), d));
                self.ty(body, 0, tenv, out);
                tenv.pop();
                if parens {
                    out.push(')');
                }
            }
        }
    }

    // precedence: 0 = top, 1 = function position, 2 = argument position
    fn term(
        &mut self,
        t: &FTerm,
        prec: u8,
        env: &mut Vec<(Name, String)>,
        tenv: &mut Vec<(Name, String)>,
        out: &mut String,
    ) {
        match t {
            FTerm::Var { name, .. } => {
                out.push_str(&Self::lookup(env, name).unwrap_or_else(|| name.to_string()));
            }
            FTerm::Abs { name, ty, body } => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                let d = self.display(name);
                out.push('\\');
                out.push_str(&d);
                out.push(':');
                self.ty(ty, 0, tenv, out);
                out.push_str(". ");
                env.push((name.clone(), d));
                self.term(body, 0, env, tenv, out);
                env.pop();
                if parens {
                    out.push(')');
                }
            }
            FTerm::App { fun, arg } => {
                let parens = prec > 1;
                if parens {
                    out.push('(');
                }
                self.term(fun, 1, env, tenv, out);
                out.push(' ');
                self.term(arg, 2, env, tenv, out);
                if parens {
                    out.push(')');
                }
            }
            FTerm::TyAbs { name, body } => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                let d = self.display(name);
                out.push_str("/\\");
                out.push_str(&d);
                out.push_str(". ");
                tenv.push((name.clone(), d));
                self.term(body, 0, env, tenv, out);
                tenv.pop();
                if parens {
                    out.push(')');
                }
            }
            FTerm::TyApp { fun, arg } => {
                let parens = prec > 1;
                if parens {
                    out.push('(');
                }
                self.term(fun, 1, env, tenv, out);
                out.push_str(" [");
                self.ty(arg, 0, tenv, out);
                out.push(']');
                if parens {
                    out.push(')');
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_term, parse_type};
    use super::*;

    #[test]
    fn round_trips_identity() {
        let t = parse_term(r"/\a. \x:a. x").unwrap();
        let s = print_term(&t);
        assert_eq!(s, r"/\a. \x:a. x");
        assert!(parse_term(&s).unwrap().alpha_eq(&t));
    }

    #[test]
    fn round_trips_types() {
        for src in ["forall a. (a -> a) -> (a -> a) -> a -> a", "a -> b -> c", "(a -> b) -> c"] {
            let ty = parse_type(src).unwrap();
            let s = print_type(&ty);
            assert!(parse_type(&s).unwrap().alpha_eq(&ty), "{src} printed as {s}");
        }
    }

    #[test]
    fn application_parenthesization() {
        let t = parse_term(r"\f:a -> a. \x:a. f (f x)").unwrap();
        let s = print_term(&t);
        assert!(parse_term(&s).unwrap().alpha_eq(&t), "printed as {s}");
        assert!(s.contains("f (f x)"));
    }
}
