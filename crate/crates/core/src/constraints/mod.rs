//! Constraint generation: assign output p-types to every subterm of a free
//! decoration and emit the boolean, linear and mixed atoms whose solutions
//! are exactly the valid decorations.
//!
//! The store partitions into three classes. Boolean atoms come from shared
//! variables and the bang census; linear atoms from door positivity,
//! bracketing and scope words, and unification; mixed atoms guard a `c >= 1`
//! behind a bang flag. Every atom carries the generating rule and the
//! occurrence path it sprang from.

mod atom;
mod gen;
mod store;
mod unify;

pub use atom::{Atom, Constraint, ConstraintClass, Rule};
pub use gen::{
    admissibility_bang, admissibility_lin, doors, gen_all, gen_bang, gen_bracketing, gen_scope,
    local_typing, lsum, type_combinations, GenError, GenOutput, TypedPTerm,
};
pub use store::ConstraintStore;
pub use unify::{unify, unify_bang_types, UnifyMismatch};
