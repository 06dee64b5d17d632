//! The second-order lambda-mu calculus: syntax, substitution, typing, printing.

mod print;
mod subst;
mod syntax;
mod typing;

pub use subst::MixedMode;
pub use syntax::{Command, MuTerm, MuType};
pub use typing::{typecheck_mu, MuContext, MuJudgement, MuTypeError};


