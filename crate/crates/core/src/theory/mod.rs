//! λμ2 equality through the CPS oracle, axiom schemas at concrete
//! instances, and a generator of well-typed terms.

mod axioms;
mod generate;

use serde::Serialize;
use thiserror::Error;

pub use axioms::{additional_axioms, core_axioms, named_term_equations, AdditionalAxiom, Equation};
pub use generate::{gen_judgement, gen_typed_term, GenError};

use crate::cps::{cps_judgement, CpsError};
use crate::mu::{typecheck_mu, MuContext, MuTerm, MuTypeError};
use crate::normalizer::{eq_target_traced, EqReport, EqVerdict, NormError};
use crate::target::Mode;

/// Which target theory decides λμ2 equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theory {
    /// Plain βη in the target.
    BetaEta,
    /// βη plus terminality of `∃X.X` in the target.
    LambdaMu2P,
}

impl Theory {
    pub fn mode(self) -> Mode {
        match self {
            Theory::BetaEta => Mode::Plain,
            Theory::LambdaMu2P => Mode::Parametric,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theory::BetaEta => "beta-eta",
            Theory::LambdaMu2P => "p",
        }
    }
}

impl std::str::FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "beta-eta" | "betaeta" | "be" => Ok(Theory::BetaEta),
            "p" | "parametric" | "lambdamu2p" => Ok(Theory::LambdaMu2P),
            _ => Err(format!("unknown theory `{s}` (expected beta-eta or p)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error(transparent)]
    IllTyped(#[from] MuTypeError),
    #[error("sides have different types: {left} and {right}")]
    TypeMismatch { left: String, right: String },
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Decides `Γ ⊢ M = N : σ | Δ` by comparing canonical CPS images.
pub fn eq_mu_traced(ctx: &MuContext, m: &MuTerm, n: &MuTerm, theory: Theory) -> Result<EqReport, TheoryError> {
    let tm = typecheck_mu(ctx, m)?;
    let tn = typecheck_mu(ctx, n)?;
    if tm != tn {
        return Err(TheoryError::TypeMismatch {
            left: tm.to_string(),
            right: tn.to_string(),
        });
    }
    let l = cps_judgement(ctx, m)?;
    let r = cps_judgement(ctx, n)?;
    Ok(eq_target_traced(&l.ctx, &l.term, &r.term, theory.mode())?)
}

pub fn eq_mu(ctx: &MuContext, m: &MuTerm, n: &MuTerm, theory: Theory) -> Result<EqVerdict, TheoryError> {
    eq_mu_traced(ctx, m, n, theory).map(|r| r.verdict)
}

#[cfg(test)]
mod tests;
