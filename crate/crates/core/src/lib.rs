//! A kernel for the second-order lambda-mu calculus and its call-by-name CPS
//! translation into the `{∃, ∧, ¬}` fragment of System F.

pub mod mu;
pub mod names;
pub mod target;
pub mod cps;
pub mod normalizer;
pub mod inverse;
pub mod encodings;
pub mod theory;
pub mod focality;
pub mod freethm;
pub mod parse;
pub mod suite;
