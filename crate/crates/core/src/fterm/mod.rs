//! System F types and Church-annotated terms.
//!
//! Terms are parsed from a small surface syntax (see [`parse`]), then
//! alpha-normalized so that every term-level binder (both `\` and `/\`) is
//! globally unique within the term. Downstream phases rely on that
//! uniqueness for capture-free substitution and for counting variable
//! occurrences.

mod alpha;
mod ast;
mod encodings;
mod parse;
mod print;
mod reduce;
mod typecheck;

pub use alpha::alpha_normalize;
pub use ast::{FTerm, FType, Name, NameSupply, Path, Step};
pub use encodings::{church_nat, corpus, nat_type, word, word_type, CorpusEntry};
pub use parse::{parse_term, parse_type, ParseError};
pub use print::{print_term, print_type};
pub use reduce::{beta_normalize, term_size, FuelExhausted, NormalForm};
pub use typecheck::{typecheck, TypeError};
