use std::fmt;

use crate::decor::{BoolParam, Instantiation, LinComb};
use crate::fterm::Path;

/// One constraint atom over decoration parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// `b1 = b2`
    BoolEq(BoolParam, BoolParam),
    /// `b = 0` or `b = 1`
    BoolConst(BoolParam, bool),
    /// `b = 1 => b' = 1`
    BoolImpl(BoolParam, BoolParam),
    /// `c1 = c2`
    LinEq(LinComb, LinComb),
    /// `c >= k` with k in {0, 1}
    LinGeq(LinComb, u8),
    /// `c = 0`
    LinEqZero(LinComb),
    /// `b = 1 => c >= 1`
    Mixed(BoolParam, LinComb),
}

/// The three disjoint constraint classes: boolean atoms, linear atoms over
/// integer parameters, and guarded (mixed) atoms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ConstraintClass {
    Boolean,
    Linear,
    Mixed,
}

impl ConstraintClass {
    pub fn letter(self) -> char {
        match self {
            ConstraintClass::Boolean => 'B',
            ConstraintClass::Linear => 'L',
            ConstraintClass::Mixed => 'M',
        }
    }
}

impl Atom {
    pub fn class(&self) -> ConstraintClass {
        match self {
            Atom::BoolEq(..) | Atom::BoolConst(..) | Atom::BoolImpl(..) => {
                ConstraintClass::Boolean
            }
            Atom::LinEq(..) | Atom::LinGeq(..) | Atom::LinEqZero(..) => ConstraintClass::Linear,
            Atom::Mixed(..) => ConstraintClass::Mixed,
        }
    }

    /// Parameter-free atoms that hold vacuously (`0 >= 0`, `0 = 0`); these
    /// are never stored.
    pub fn is_trivially_true(&self) -> bool {
        match self {
            Atom::LinGeq(c, 0) => c.is_zero(),
            Atom::LinEqZero(c) => c.is_zero(),
            Atom::LinEq(c1, c2) => c1.is_zero() && c2.is_zero(),
            _ => false,
        }
    }

    pub fn is_satisfied(&self, phi: &Instantiation) -> bool {
        match self {
            Atom::BoolEq(b1, b2) => phi.bool_value(*b1) == phi.bool_value(*b2),
            Atom::BoolConst(b, v) => phi.bool_value(*b) == *v,
            Atom::BoolImpl(b, b2) => !phi.bool_value(*b) || phi.bool_value(*b2),
            Atom::LinEq(c1, c2) => phi.eval(c1) == phi.eval(c2),
            Atom::LinGeq(c, k) => phi.eval(c) >= *k as i64,
            Atom::LinEqZero(c) => phi.eval(c) == 0,
            Atom::Mixed(b, c) => !phi.bool_value(*b) || phi.eval(c) >= 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::BoolEq(b1, b2) => write!(f, "{b1} = {b2}"),
            Atom::BoolConst(b, v) => write!(f, "{b} = {}", *v as u8),
            Atom::BoolImpl(b, b2) => write!(f, "{b} = 1 => {b2} = 1"),
            Atom::LinEq(c1, c2) => write!(f, "{c1} = {c2}"),
            Atom::LinGeq(c, k) => write!(f, "{c} >= {k}"),
            Atom::LinEqZero(c) => write!(f, "{c} = 0"),
            Atom::Mixed(b, c) => write!(f, "{b} = 1 => {c} >= 1"),
        }
    }
}

/// The generating rule of an atom, for provenance and diagnostics.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Rule {
    /// admissibility of a variable occurrence's declared p-type
    LtypeVar,
    /// admissibility of a binder's declared p-type
    LtypeAbs,
    /// `m + c >= 0` at a door node
    LtypeDoor,
    /// `c = 0` on the operator of an application
    LtypeAppZero,
    /// unification of domain against operand type
    LtypeUnify,
    /// `c = 0` on the operator of a type application
    LtypeTyAppZero,
    /// admissibility of a type-application argument
    LtypeTyArg,
    /// `b = 1` for a variable with several occurrences
    LtypeShared,
    /// well-bracketing of a free variable occurrence
    BracketFree,
    /// weak well-bracketing of an abstraction occurrence
    BracketAbs,
    /// well-bracketing of a bound occurrence from its binder's body
    BracketBound,
    /// bang condition (i): free-variable census of an operand
    BangFree,
    /// bang condition (ii): depth of proper subterms of an operand
    BangInner,
    /// scope condition on subterms depending on a quantified variable
    Scope,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::LtypeVar => "ltype.var",
            Rule::LtypeAbs => "ltype.abs",
            Rule::LtypeDoor => "ltype.door",
            Rule::LtypeAppZero => "ltype.app0",
            Rule::LtypeUnify => "ltype.unify",
            Rule::LtypeTyAppZero => "ltype.tyapp0",
            Rule::LtypeTyArg => "ltype.tyarg",
            Rule::LtypeShared => "ltype.shared",
            Rule::BracketFree => "bracket.i",
            Rule::BracketAbs => "bracket.ii",
            Rule::BracketBound => "bracket.iii",
            Rule::BangFree => "bang.i",
            Rule::BangInner => "bang.ii",
            Rule::Scope => "scope",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// An atom with its provenance: the generating rule and the occurrence it
/// was emitted at.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Constraint {
    pub atom: Atom,
    pub rule: Rule,
    pub path: Path,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {} | {}", self.atom.class().letter(), self.atom, self.rule, self.path)
    }
}
