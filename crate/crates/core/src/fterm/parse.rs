use std::fmt;

use thiserror::Error;

use super::alpha::alpha_normalize;
use super::ast::{FTerm, FType, Name};

/// Syntax error with source position and the tokens that would have been
/// accepted.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: found {}, expected {}",
            self.line,
            self.col,
            self.found,
            self.expected.join(" or ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    TyLambda,
    Forall,
    Ident(String),
    Dot,
    Colon,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "'\\'".into(),
            Tok::TyLambda => "'/\\'".into(),
            Tok::Forall => "'forall'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, found: String, expected: Vec<&'static str>) -> ParseError {
        ParseError { line: self.line, col: self.col, found, expected }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and `--` comments
            loop {
                match self.peek() {
                    Some(c) if c.is_ascii_whitespace() => {
                        self.bump();
                    }
                    Some(b'-') if self.src.get(self.pos + 1) == Some(&b'-') => {
                        while let Some(c) = self.peek() {
                            if c == b'\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    _ => break,
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                b'\\' => {
                    self.bump();
                    Tok::Lambda
                }
                b'/' => {
                    self.bump();
                    if self.peek() == Some(b'\\') {
                        self.bump();
                        Tok::TyLambda
                    } else {
                        return Err(self.error("'/'".into(), vec!["'/\\'"]));
                    }
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b':' => {
                    self.bump();
                    Tok::Colon
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.error("'-'".into(), vec!["'->'", "'--'"]));
                    }
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    if word == "forall" {
                        Tok::Forall
                    } else {
                        Tok::Ident(word.to_string())
                    }
                }
                other => {
                    return Err(self.error(
                        format!("'{}'", (other as char).escape_default()),
                        vec!["a term"],
                    ))
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, line, col) = &self.toks[self.pos];
        ParseError { line: *line, col: *col, found: tok.describe(), expected }
    }

    fn expect(&mut self, want: Tok, desc: &'static str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![desc]))
        }
    }

    fn ident(&mut self, what: &'static str) -> Result<Name, ParseError> {
        if let Tok::Ident(s) = self.peek().clone() {
            self.bump();
            Ok(Name::new(s))
        } else {
            Err(self.error(vec![what]))
        }
    }

    fn ty(&mut self) -> Result<FType, ParseError> {
        if *self.peek() == Tok::Forall {
            self.bump();
            let n = self.ident("a type variable")?;
            self.expect(Tok::Dot, "'.'")?;
            let body = self.ty()?;
            return Ok(FType::Forall(n, Box::new(body)));
        }
        let lhs = self.aty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            Ok(FType::Arrow(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn aty(&mut self) -> Result<FType, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(FType::Var(Name::new(s)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.error(vec!["a type variable", "'('", "'forall'"])),
        }
    }

    fn term(&mut self) -> Result<FTerm, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let n = self.ident("a variable")?;
                self.expect(Tok::Colon, "':'")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "'.'")?;
                let body = self.term()?;
                Ok(FTerm::Abs { name: n, ty, body: Box::new(body) })
            }
            Tok::TyLambda => {
                self.bump();
                let n = self.ident("a type variable")?;
                self.expect(Tok::Dot, "'.'")?;
                let body = self.term()?;
                Ok(FTerm::TyAbs { name: n, body: Box::new(body) })
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<FTerm, ParseError> {
        let mut head = self.atom()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::LParen => {
                    let arg = self.atom()?;
                    head = FTerm::App { fun: Box::new(head), arg: Box::new(arg) };
                }
                Tok::LBracket => {
                    self.bump();
                    let ty = self.ty()?;
                    self.expect(Tok::RBracket, "']'")?;
                    head = FTerm::TyApp { fun: Box::new(head), arg: ty };
                }
                _ => return Ok(head),
            }
        }
    }

    fn atom(&mut self) -> Result<FTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(FTerm::Var { name: Name::new(s), ty: None })
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.error(vec!["a variable", "'('"])),
        }
    }
}

/// Parse a term and alpha-normalize it. The parser itself is type-agnostic:
/// ill-typed but grammatical input parses fine and is rejected later by the
/// typechecker.
pub fn parse_term(src: &str) -> Result<FTerm, ParseError> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(alpha_normalize(&t))
}

/// Parse a System F type.
pub fn parse_type(src: &str) -> Result<FType, ParseError> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.ty()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polymorphic_identity() {
        let t = parse_term(r"/\a. \x:a. x").unwrap();
        match &t {
            FTerm::TyAbs { body, .. } => match body.as_ref() {
                FTerm::Abs { body, .. } => {
                    assert!(matches!(body.as_ref(), FTerm::Var { .. }));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parser_is_type_agnostic() {
        // self-application parses; the typechecker rejects it later
        let t = parse_term(r"\x:a. x x").unwrap();
        assert!(matches!(t, FTerm::Abs { .. }));
    }

    #[test]
    fn application_associates_left_arrows_right() {
        let t = parse_term(r"\f:a -> a -> a. \x:a. f x x").unwrap();
        if let FTerm::Abs { ty, body, .. } = &t {
            assert_eq!(
                ty,
                &FType::arrow(FType::var("a"), FType::arrow(FType::var("a"), FType::var("a")))
            );
            if let FTerm::Abs { body, .. } = body.as_ref() {
                assert!(matches!(body.as_ref(), FTerm::App { fun, .. }
                    if matches!(fun.as_ref(), FTerm::App { .. })));
            } else {
                panic!("expected inner abs");
            }
        } else {
            panic!("expected abs");
        }
    }

    #[test]
    fn reports_position_and_expectations() {
        let err = parse_term("\\x:a").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.expected.contains(&"'.'"), "{err}");
        let err = parse_term("\\x:a. (x").unwrap_err();
        assert!(err.expected.contains(&"')'"), "{err}");
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_term("-- identity\n\\x:a. x -- trailing\n").unwrap();
        assert!(matches!(t, FTerm::Abs { .. }));
    }

    #[test]
    fn type_application_brackets() {
        let t = parse_term(r"(/\a. \x:a. x) [b -> b]").unwrap();
        assert!(matches!(t, FTerm::TyApp { .. }));
    }
}
