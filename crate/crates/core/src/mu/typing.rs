//! Syntax-directed type synthesis for lambda-mu terms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::syntax::{MuTerm, MuType};
use crate::names::fresh;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuTypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("type mismatch in {rule} rule: expected {expected}, found {found}")]
    TypeMismatch {
        rule: &'static str,
        expected: String,
        found: String,
    },
    #[error("context lists `{0}` twice")]
    DuplicateIdentifier(String),
}

fn mismatch(rule: &'static str, expected: impl ToString, found: &MuType) -> MuTypeError {
    MuTypeError::TypeMismatch {
        rule,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Variable context `Γ` and name context `Δ`. Later entries shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MuContext {
    pub gamma: Vec<(String, MuType)>,
    pub delta: Vec<(String, MuType)>,
}

impl MuContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var(mut self, x: impl Into<String>, t: MuType) -> Self {
        self.gamma.push((x.into(), t));
        self
    }

    pub fn with_name(mut self, a: impl Into<String>, t: MuType) -> Self {
        self.delta.push((a.into(), t));
        self
    }

    pub fn lookup_var(&self, x: &str) -> Option<&MuType> {
        self.gamma.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn lookup_name(&self, a: &str) -> Option<&MuType> {
        self.delta.iter().rev().find(|(b, _)| b == a).map(|(_, t)| t)
    }

    pub fn free_type_vars(&self) -> BTreeSet<String> {
        self.gamma
            .iter()
            .chain(self.delta.iter())
            .flat_map(|(_, t)| t.free_type_vars())
            .collect()
    }

    /// Rejects contexts that list an identifier twice in one zone.
    pub fn check_well_formed(&self) -> Result<(), MuTypeError> {
        for zone in [&self.gamma, &self.delta] {
            let mut seen = BTreeSet::new();
            for (x, _) in zone {
                if !seen.insert(x) {
                    return Err(MuTypeError::DuplicateIdentifier(x.clone()));
                }
            }
        }
        Ok(())
    }
}

/// `Γ ⊢ M : σ | Δ`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuJudgement {
    pub ctx: MuContext,
    pub subject: MuTerm,
    pub ty: MuType,
}

impl MuJudgement {
    /// Synthesises the type of `subject` and packages the judgement.
    pub fn derive(ctx: MuContext, subject: MuTerm) -> Result<Self, MuTypeError> {
        let ty = typecheck_mu(&ctx, &subject)?;
        Ok(MuJudgement { ctx, subject, ty })
    }
}

/// Returns the unique `σ` with `Γ ⊢ M : σ | Δ`.
///
/// A type abstraction whose bound variable clashes with a free type variable
/// of the context is checked after alpha-renaming the binder.
pub fn typecheck_mu(ctx: &MuContext, m: &MuTerm) -> Result<MuType, MuTypeError> {
    ctx.check_well_formed()?;
    let mut ctx = ctx.clone();
    synth(&mut ctx, m)
}

fn synth(ctx: &mut MuContext, m: &MuTerm) -> Result<MuType, MuTypeError> {
    match m {
        MuTerm::Var(x) => ctx
            .lookup_var(x)
            .cloned()
            .ok_or_else(|| MuTypeError::UnboundVariable(x.clone())),
        MuTerm::Lam(x, t, body) => {
            ctx.gamma.push((x.clone(), t.clone()));
            let r = synth(ctx, body);
            ctx.gamma.pop();
            Ok(MuType::arrow(t.clone(), r?))
        }
        MuTerm::App(f, a) => {
            let tf = synth(ctx, f)?;
            let ta = synth(ctx, a)?;
            match tf {
                MuType::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(mismatch("application", &dom, &ta))
                    }
                }
                other => Err(mismatch("application", "a function type", &other)),
            }
        }
        MuTerm::TyLam(x, body) => {
            let ftv = ctx.free_type_vars();
            if ftv.contains(x) {
                let taken: BTreeSet<String> = ftv.into_iter().chain(body.all_identifiers()).collect();
                let x2 = fresh(x, |c| taken.contains(c));
                let body2 = body.subst_type(x, &MuType::Var(x2.clone()));
                let t = synth(ctx, &body2)?;
                Ok(MuType::forall(x2, t))
            } else {
                Ok(MuType::forall(x.clone(), synth(ctx, body)?))
            }
        }
        MuTerm::TyApp(f, s) => match synth(ctx, f)? {
            MuType::Forall(x, body) => Ok(body.subst(&x, s)),
            other => Err(mismatch("type application", "a universal type", &other)),
        },
        MuTerm::Mu(a, t, b, body) => {
            ctx.delta.push((a.clone(), t.clone()));
            let r = (|| {
                let tb = synth(ctx, body)?;
                let target = ctx
                    .lookup_name(b)
                    .cloned()
                    .ok_or_else(|| MuTypeError::UnboundName(b.clone()))?;
                if target == tb {
                    Ok(())
                } else {
                    Err(mismatch("mu", &target, &tb))
                }
            })();
            ctx.delta.pop();
            r.map(|()| t.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> MuType {
        MuType::var("s")
    }

    #[test]
    fn axiom_rule() {
        let ctx = MuContext::new().with_var("x", s());
        assert_eq!(typecheck_mu(&ctx, &MuTerm::var("x")), Ok(s()));
    }

    #[test]
    fn mu_rule() {
        let ctx = MuContext::new().with_name("b", MuType::var("t")).with_var("m", MuType::var("t"));
        let term = MuTerm::mu("a", s(), "b", MuTerm::var("m"));
        assert_eq!(typecheck_mu(&ctx, &term), Ok(s()));
    }

    #[test]
    fn errors_are_reported() {
        let ctx = MuContext::new();
        assert_eq!(
            typecheck_mu(&ctx, &MuTerm::var("x")),
            Err(MuTypeError::UnboundVariable("x".into()))
        );
        let t = MuTerm::mu("a", s(), "c", MuTerm::lam("x", s(), MuTerm::var("x")));
        assert_eq!(typecheck_mu(&ctx, &t), Err(MuTypeError::UnboundName("c".into())));
        let bad = MuTerm::app(MuTerm::lam("x", s(), MuTerm::var("x")), MuTerm::lam("y", s(), MuTerm::var("y")));
        assert!(matches!(typecheck_mu(&ctx, &bad), Err(MuTypeError::TypeMismatch { rule: "application", .. })));
    }

    #[test]
    fn type_abstraction_renames_clashing_binder() {
        let ctx = MuContext::new().with_var("y", MuType::var("X"));
        let t = MuTerm::ty_lam("X", MuTerm::lam("z", MuType::var("X"), MuTerm::var("y")));
        let ty = typecheck_mu(&ctx, &t).unwrap();
        let expect = MuType::forall("Z", MuType::arrow(MuType::var("Z"), MuType::var("X")));
        assert_eq!(ty, expect);
    }
}
