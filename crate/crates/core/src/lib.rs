//! Static certification of polynomial-step normalization for System F terms.
//!
//! Given a Church-typed System F term, this crate decides whether the term
//! admits a Dual Light Affine Logic (DLAL) decoration. A decoration enriches
//! the term and its type with `§` modalities and `!`/`=>` bang structure;
//! its existence certifies that the term normalizes in `O(|M|^(2^d))`
//! beta-reduction steps, where `d` is the depth of the decorated type.
//!
//! The pipeline:
//!
//! 1. [`fterm`] — parse and typecheck the System F input.
//! 2. [`decor`] — build the free decoration: a parameterized term carrying a
//!    fresh boolean/integer parameter at every potential modality site.
//! 3. [`constraints`] — walk the decorated term and emit the boolean, linear
//!    and mixed constraints that characterize valid decorations.
//! 4. [`solver`] — compute the minimal boolean solution by saturation,
//!    substitute it into the mixed constraints, and decide the remaining
//!    linear system by exact-rational simplex; scale back to integers.
//! 5. [`verify`] — an independent checker for the decoration conditions on
//!    concrete decorated terms, used as an oracle against the constraint
//!    pipeline and exposed for `--verify`.
//!
//! The [`cli`] module ties the phases into a report suitable for both human
//! and scripted consumption; the `dlal` binary is a thin wrapper over it.

pub mod cli;
pub mod constraints;
pub mod decor;


pub mod fterm;
pub mod solver;
pub mod verify;


