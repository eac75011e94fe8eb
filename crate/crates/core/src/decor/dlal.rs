use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fterm::Name;

use super::pseudo::{StarLin, StarSkel, StarType};

/// A DLAL type in the surface `=>` form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DlalType {
    Var(Name),
    Lolli(Box<DlalType>, Box<DlalType>),
    Imp(Box<DlalType>, Box<DlalType>),
    Sect(Box<DlalType>),
    Forall(Name, Box<DlalType>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("bang type outside an arrow domain: {0}")]
pub struct StarInverseError(pub String);

/// Rewrite `!A -o B` to `A => B`, recursively; door counts become nested
/// `§`. Errors when a bang type sits anywhere but an arrow domain.
pub fn star_inverse(t: &StarType) -> Result<DlalType, StarInverseError> {
    match t {
        StarType::Lin(a) => inverse_lin(a),
        StarType::Bang(a) => Err(StarInverseError(super::pseudo::print_star_lin(a))),
    }
}

fn inverse_lin(a: &StarLin) -> Result<DlalType, StarInverseError> {
    let mut out = match &a.skel {
        StarSkel::Var(n) => DlalType::Var(n.clone()),
        StarSkel::Arrow(d, c) => match d.as_ref() {
            StarType::Lin(dom) => {
                DlalType::Lolli(Box::new(inverse_lin(dom)?), Box::new(inverse_lin(c)?))
            }
            StarType::Bang(dom) => {
                DlalType::Imp(Box::new(inverse_lin(dom)?), Box::new(inverse_lin(c)?))
            }
        },
        StarSkel::Forall(n, b) => DlalType::Forall(n.clone(), Box::new(inverse_lin(b)?)),
    };
    for _ in 0..a.doors {
        out = DlalType::Sect(Box::new(out));
    }
    Ok(out)
}

/// The star map: `(A => B)★ = !A★ -o B★`, commuting with everything else.
pub fn dlal_to_star(t: &DlalType) -> StarLin {
    match t {
        DlalType::Var(n) => StarLin { doors: 0, skel: StarSkel::Var(n.clone()) },
        DlalType::Lolli(a, b) => StarLin {
            doors: 0,
            skel: StarSkel::Arrow(
                Box::new(StarType::Lin(dlal_to_star(a))),
                Box::new(dlal_to_star(b)),
            ),
        },
        DlalType::Imp(a, b) => StarLin {
            doors: 0,
            skel: StarSkel::Arrow(
                Box::new(StarType::Bang(dlal_to_star(a))),
                Box::new(dlal_to_star(b)),
            ),
        },
        DlalType::Sect(a) => dlal_to_star(a).sect(),
        DlalType::Forall(n, b) => {
            StarLin { doors: 0, skel: StarSkel::Forall(n.clone(), Box::new(dlal_to_star(b))) }
        }
    }
}

/// The depth `d(A)` of a DLAL type.
pub fn depth(t: &DlalType) -> u32 {
    match t {
        DlalType::Var(_) => 0,
        DlalType::Forall(_, b) => depth(b),
        DlalType::Lolli(a, b) => depth(a).max(depth(b)),
        DlalType::Sect(a) => depth(a) + 1,
        DlalType::Imp(a, b) => (depth(a) + 1).max(depth(b)),
    }
}

/// True when the type has no negative occurrence of `forall`.
pub fn is_pi1(t: &DlalType) -> bool {
    fn go(t: &DlalType, positive: bool) -> bool {
        match t {
            DlalType::Var(_) => true,
            DlalType::Forall(_, b) => positive && go(b, positive),
            DlalType::Lolli(a, b) | DlalType::Imp(a, b) => go(a, !positive) && go(b, positive),
            DlalType::Sect(a) => go(a, positive),
        }
    }
    go(t, true)
}

/// Print a DLAL type: `§`, `-o`, `=>`, `forall a.`.
pub fn print_dlal_type(t: &DlalType) -> String {
    // precedence: 0 = top, 1 = arrow domain, 2 = under §
    fn go(t: &DlalType, prec: u8, out: &mut String) {
        match t {
            DlalType::Var(n) => out.push_str(&n.to_string()),
            DlalType::Lolli(a, b) | DlalType::Imp(a, b) => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                go(a, 1, out);
                out.push_str(if matches!(t, DlalType::Lolli(..)) { " -o " } else { " => " });
                go(b, 0, out);
                if parens {
                    out.push(')');
                }
            }
            DlalType::Sect(a) => {
                out.push('§');
                go(a, 2, out);
            }
            DlalType::Forall(n, b) => {
                let parens = prec > 0;
                if parens {
                    out.push('(');
                }
                out.push_str("forall ");
                out.push_str(&n.to_string());
                out.push_str(". ");
                go(b, 0, out);
                if parens {
                    out.push(')');
                }
            }
        }
    }
    let mut out = String::new();
    go(t, 0, &mut out);
    out
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("DLAL type syntax error at offset {offset}: {message}")]
pub struct DlalParseError {
    pub offset: usize,
    pub message: String,
}

/// Parse the DLAL surface syntax used by `--goal`:
/// `forall a. T`, `T -o U`, `T => U`, `§T` (ASCII alias `$T`), variables,
/// parentheses. Arrows associate to the right.
pub fn parse_dlal_type(src: &str) -> Result<DlalType, DlalParseError> {
    let mut p = DlalParser { src: src.as_bytes(), pos: 0 };
    let t = p.ty()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct DlalParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl DlalParser<'_> {
    fn err(&self, message: &str) -> DlalParseError {
        DlalParseError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == b'_') {
            return None;
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'')
        {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn ty(&mut self) -> Result<DlalType, DlalParseError> {
        self.skip_ws();
        let kw_forall = self.src[self.pos..].starts_with(b"forall")
            && !self
                .src
                .get(self.pos + 6)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'');
        if kw_forall {
            let save = self.pos;
            self.pos += 6;
            if let Some(n) = self.ident() {
                if self.eat(".") {
                    let body = self.ty()?;
                    return Ok(DlalType::Forall(Name::new(n), Box::new(body)));
                }
            }
            self.pos = save;
            return Err(self.err("expected 'forall a. T'"));
        }
        let lhs = self.prefix()?;
        if self.eat("-o") {
            let rhs = self.ty()?;
            Ok(DlalType::Lolli(Box::new(lhs), Box::new(rhs)))
        } else if self.eat("=>") {
            let rhs = self.ty()?;
            Ok(DlalType::Imp(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn prefix(&mut self) -> Result<DlalType, DlalParseError> {
        self.skip_ws();
        if self.eat("§") || self.eat("$") {
            return Ok(DlalType::Sect(Box::new(self.prefix()?)));
        }
        if self.eat("(") {
            let t = self.ty()?;
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            return Ok(t);
        }
        match self.ident() {
            Some(n) if n != "forall" => Ok(DlalType::Var(Name::new(n))),
            _ => Err(self.err("expected a type")),
        }
    }
}

impl fmt::Display for DlalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_dlal_type(self))
    }
}

/// `forall a. (a -o a) => (a -o a) => §(a -o a)` — the DLAL type of Church
/// words.
pub fn word_dlal_type() -> DlalType {
    parse_dlal_type("forall a. (a -o a) => (a -o a) => §(a -o a)").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_of_base_cases() {
        assert_eq!(depth(&DlalType::Var(Name::new("a"))), 0);
        let w = word_dlal_type();
        assert_eq!(depth(&w), 1);
        // W -o §W has depth 2
        let t = DlalType::Lolli(
            Box::new(w.clone()),
            Box::new(DlalType::Sect(Box::new(w.clone()))),
        );
        assert_eq!(depth(&t), 2);
    }

    #[test]
    fn pi1_polarity() {
        let w = word_dlal_type();
        assert!(is_pi1(&w));
        // W in domain position puts its forall at negative polarity
        let t = DlalType::Lolli(Box::new(w.clone()), Box::new(DlalType::Sect(Box::new(w))));
        assert!(!is_pi1(&t));
        let plain = parse_dlal_type("a -o a").unwrap();
        assert!(is_pi1(&plain));
    }

    #[test]
    fn star_round_trip() {
        let w = word_dlal_type();
        let star = dlal_to_star(&w);
        let back = star_inverse(&StarType::Lin(star.clone())).unwrap();
        assert_eq!(back, w);
        assert_eq!(depth(&back), 1);
    }

    #[test]
    fn star_inverse_single_rewrite() {
        // !(a -o a) -o §(a -o a)  →  (a -o a) => §(a -o a)
        let aa = StarLin::arrow(StarType::Lin(StarLin::var("a")), StarLin::var("a"));
        let t = StarLin::arrow(StarType::Bang(aa.clone()), aa.clone().sect());
        let inv = star_inverse(&StarType::Lin(t)).unwrap();
        assert_eq!(print_dlal_type(&inv), "(a -o a) => §(a -o a)");
    }

    #[test]
    fn star_inverse_no_bang_is_identity_shaped() {
        let aa = StarLin::arrow(StarType::Lin(StarLin::var("a")), StarLin::var("a"));
        let inv = star_inverse(&StarType::Lin(aa)).unwrap();
        assert_eq!(print_dlal_type(&inv), "a -o a");
    }

    #[test]
    fn parse_and_print_are_inverse_on_goals() {
        for src in [
            "forall a. (a -o a) => (a -o a) => §(a -o a)",
            "a -o a",
            "§§a",
            "(a => b) -o §c",
        ] {
            let t = parse_dlal_type(src).unwrap();
            assert_eq!(print_dlal_type(&t), src);
        }
        // the ASCII alias for §
        assert_eq!(parse_dlal_type("$a").unwrap(), parse_dlal_type("§a").unwrap());
    }

    #[test]
    fn word_type_erases_to_word_f_type() {
        let star = dlal_to_star(&word_dlal_type());
        assert!(star.erase().alpha_eq(&crate::fterm::word_type()));
    }
}
