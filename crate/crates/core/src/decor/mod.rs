//! Parameterized DLAL★ types and terms.
//!
//! The free decoration of a typechecked System F term places one fresh
//! integer parameter at every door site and a fresh `(bool, int)` parameter
//! pair at every modality site of every type, sharing one decoration across
//! all occurrences of the same variable. An instantiation assigns values to
//! the parameters; an admissible instantiation materializes the p-term into
//! a concrete decorated pseudo-term with DLAL★ types.

mod dlal;
mod instantiate;
mod params;
mod pseudo;
mod pterm;
mod ptype;

pub use dlal::{
    word_dlal_type,
    depth, dlal_to_star, is_pi1, parse_dlal_type, print_dlal_type, star_inverse, DlalParseError,
    DlalType, StarInverseError,
};
pub use instantiate::{check_admissible, instantiate, AdmissibilityError, Instantiation};
pub use params::{BoolParam, IntParam, LinComb, ParamSupply};
pub use pseudo::{print_pseudo_term, print_star_lin, print_star_type, PseudoTerm, StarLin, StarSkel, StarType};
pub use pterm::{free_decoration, PTerm};
pub use ptype::{bang_free_decoration, lin_free_decoration, ptype_subst, BangPType, LinPType, PSkel};
