//! The inverse translation from canonical target forms back to λμ2.
//!
//! Programs invert to terms, answers to terms of type `⊥`, and
//! continuations to one-hole contexts of type `⊥`. A target variable of
//! negated type `¬σ°` becomes a source variable of type `σ`; any other
//! target variable (type `σ°`) becomes a continuation name of type `σ`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cps::{cps_judgement, untranslate_type, CpsError};
use crate::mu::{typecheck_mu, MuContext, MuTerm, MuType, MuTypeError};
use crate::names::fresh;
use crate::normalizer::{eq_target, CanonicalForm, EqVerdict, NormError};
use crate::target::{Mode, TargetContext, TargetTerm, TargetType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error("not a canonical form: {0}")]
    NotCanonical(String),
    #[error("type {0} is not the translation of a source type")]
    NotInImageType(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("round trip expects a program, got a {0}")]
    NotAProgram(&'static str),
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("inverse is ill-typed: {0}")]
    IllTyped(#[from] MuTypeError),
}

/// A λμ2 term of type `⊥` with one hole of type `hole_ty`, represented
/// by a reserved variable. Filling renames binders of the context that
/// would capture free identifiers of the filler.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneHole {
    pub hole: String,
    #[serde(serialize_with = "type_text")]
    pub hole_ty: MuType,
    #[serde(serialize_with = "term_text")]
    pub body: MuTerm,
}

fn type_text<S: serde::Serializer>(t: &MuType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn term_text<S: serde::Serializer>(t: &MuTerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl OneHole {
    pub fn fill(&self, filler: &MuTerm) -> MuTerm {
        self.body.subst_term(&self.hole, filler)
    }

    /// Checks `Γ, − : σ ⊢ C[−] : ⊥ | Δ`.
    pub fn typecheck(&self, ctx: &MuContext) -> Result<MuType, MuTypeError> {
        typecheck_mu(&ctx.clone().with_var(self.hole.clone(), self.hole_ty.clone()), &self.body)
    }
}

impl std::fmt::Display for OneHole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown = self.body.subst_term(&self.hole, &MuTerm::var("□"));
        write!(f, "{shown}  (□ : {})", self.hole_ty)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "category")]
pub enum Inverted {
    Program {
        #[serde(serialize_with = "term_text")]
        term: MuTerm,
    },
    Continuation {
        context: OneHole,
    },
    Answer {
        #[serde(serialize_with = "term_text")]
        term: MuTerm,
    },
}

impl std::fmt::Display for Inverted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inverted::Program { term } | Inverted::Answer { term } => write!(f, "{term}"),
            Inverted::Continuation { context } => write!(f, "{context}"),
        }
    }
}

/// The source context `Γ | Δ` whose translation is `ctx`.
pub fn source_context(ctx: &TargetContext) -> Result<MuContext, InverseError> {
    let mut out = MuContext::new();
    for (x, t) in &ctx.vars {
        match t {
            TargetType::Neg(inner) => out = out.with_var(x.clone(), untr(inner)?),
            _ => out = out.with_name(x.clone(), untr(t)?),
        }
    }
    Ok(out)
}

fn untr(t: &TargetType) -> Result<MuType, InverseError> {
    untranslate_type(t).map_err(|_| InverseError::NotInImageType(t.to_string()))
}

struct Inverter {
    vars: Vec<(String, TargetType)>,
    taken: BTreeSet<String>,
}

impl Inverter {
    fn hole(&mut self, ty: MuType) -> (String, MuType) {
        let h = fresh("hole", |c| self.taken.contains(c));
        self.taken.insert(h.clone());
        (h, ty)
    }

    fn not_canonical(t: &TargetTerm) -> InverseError {
        InverseError::NotCanonical(t.to_string())
    }

    fn program(&mut self, p: &TargetTerm) -> Result<MuTerm, InverseError> {
        match p {
            TargetTerm::Var(x) => Ok(MuTerm::var(x.clone())),
            TargetTerm::Lam(k, t, a) => {
                let sigma = untr(t)?;
                self.vars.push((k.clone(), t.clone()));
                let body = self.answer(a);
                self.vars.pop();
                Ok(MuTerm::bold_mu(k.clone(), sigma, body?))
            }
            _ => Err(Self::not_canonical(p)),
        }
    }

    /// Type of a continuation, needed for the hole and for binders.
    fn cont_type(&self, c: &TargetTerm) -> Result<TargetType, InverseError> {
        let ctx = TargetContext { vars: self.vars.clone() };
        crate::target::typecheck_target(&ctx, c, Mode::Parametric).map_err(|_| Self::not_canonical(c))
    }

    fn continuation(&mut self, c: &TargetTerm) -> Result<OneHole, InverseError> {
        let ty = self.cont_type(c)?;
        let (hole, hole_ty) = self.hole(untr(&ty)?);
        let h = MuTerm::var(hole.clone());
        let body = match c {
            TargetTerm::Var(k) => MuTerm::named(k.clone(), h),
            TargetTerm::Star => h,
            TargetTerm::Pair(p, rest) => {
                let arg = self.program(p)?;
                self.continuation(rest)?.fill(&MuTerm::app(h, arg))
            }
            TargetTerm::Pack(w, rest, _) => {
                let sigma = untr(w)?;
                self.continuation(rest)?.fill(&MuTerm::ty_app(h, sigma))
            }
            TargetTerm::LetPair(..) | TargetTerm::LetPack(..) => {
                let inner = |me: &mut Self, c2: &TargetTerm| -> Result<MuTerm, InverseError> {
                    let ctx2 = me.continuation(c2)?;
                    debug_assert_eq!(ctx2.hole_ty, hole_ty);
                    Ok(ctx2.fill(&h))
                };
                self.binder(c, inner)?
            }
            _ => return Err(Self::not_canonical(c)),
        };
        Ok(OneHole { hole, hole_ty, body })
    }

    fn answer(&mut self, a: &TargetTerm) -> Result<MuTerm, InverseError> {
        match a {
            TargetTerm::App(p, c) => {
                let prog = self.program(p)?;
                Ok(self.continuation(c)?.fill(&prog))
            }
            TargetTerm::LetPair(..) | TargetTerm::LetPack(..) => self.binder(a, |me, body| me.answer(body)),
            _ => Err(Self::not_canonical(a)),
        }
    }

    /// `let ⟨x,k⟩ = C in B` and `let ⟨X,k⟩ = C in B` become
    /// `C⁻¹[λx.𝛍k.B']` and `C⁻¹[ΛX.𝛍k.B']`, where `B'` is the inverse
    /// of the body (already filled when the body is a continuation).
    fn binder(
        &mut self,
        t: &TargetTerm,
        body_inv: impl FnOnce(&mut Self, &TargetTerm) -> Result<MuTerm, InverseError>,
    ) -> Result<MuTerm, InverseError> {
        match t {
            TargetTerm::LetPair(x, k, s, body) => {
                let outer = self.continuation(s)?;
                let TargetType::Conj(tx, tk) = self.cont_type(s)? else {
                    return Err(Self::not_canonical(t));
                };
                let TargetType::Neg(dom) = &*tx else {
                    return Err(Self::not_canonical(t));
                };
                let (dom, cod) = (untr(dom)?, untr(&tk)?);
                self.vars.push((x.clone(), *tx.clone()));
                self.vars.push((k.clone(), *tk.clone()));
                let inner = body_inv(self, body);
                self.vars.truncate(self.vars.len() - 2);
                let grabbed = MuTerm::lam(x.clone(), dom, MuTerm::bold_mu(k.clone(), cod, inner?));
                Ok(outer.fill(&grabbed))
            }
            TargetTerm::LetPack(tv, k, s, body) => {
                let outer = self.continuation(s)?;
                let st = self.cont_type(s)?;
                let opened = st.open_exists(tv).ok_or_else(|| Self::not_canonical(t))?;
                let cod = untr(&opened)?;
                self.vars.push((k.clone(), opened));
                let inner = body_inv(self, body);
                self.vars.pop();
                let grabbed = MuTerm::ty_lam(tv.clone(), MuTerm::bold_mu(k.clone(), cod, inner?));
                Ok(outer.fill(&grabbed))
            }
            _ => Err(Self::not_canonical(t)),
        }
    }
}

/// Inverts a canonical form in the target context `ctx`; the result is
/// checked against the source context [`source_context`]`(ctx)`.
pub fn invert(ctx: &TargetContext, form: &CanonicalForm) -> Result<Inverted, InverseError> {
    let mut taken = form.term().all_identifiers();
    for (x, t) in &ctx.vars {
        taken.insert(x.clone());
        t.identifiers(&mut taken);
    }
    let mut inv = Inverter {
        vars: ctx.vars.clone(),
        taken,
    };
    let sctx = source_context(ctx)?;
    let out = match form {
        CanonicalForm::Program(p) => Inverted::Program { term: inv.program(p)? },
        CanonicalForm::Continuation(c) => Inverted::Continuation {
            context: inv.continuation(c)?,
        },
        CanonicalForm::Answer(a) => Inverted::Answer { term: inv.answer(a)? },
    };
    match &out {
        Inverted::Program { term } | Inverted::Answer { term } => {
            typecheck_mu(&sctx, term)?;
        }
        Inverted::Continuation { context } => {
            context.typecheck(&sctx)?;
        }
    }
    Ok(out)
}

/// Translates the inverse of a program back and compares it with the
/// program itself.
pub fn roundtrip(ctx: &TargetContext, form: &CanonicalForm, mode: Mode) -> Result<EqVerdict, InverseError> {
    let Inverted::Program { term } = invert(ctx, form)? else {
        return Err(InverseError::NotAProgram(form.category()));
    };
    let sctx = source_context(ctx)?;
    let back = cps_judgement(&sctx, &term)?;
    Ok(eq_target(ctx, &back.term, form.term(), mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalizer::canonicalize;

    fn a() -> MuType {
        MuType::var("a")
    }

    fn round(ctx: &MuContext, m: &MuTerm, mode: Mode) -> (Inverted, EqVerdict) {
        let out = cps_judgement(ctx, m).unwrap();
        let c = canonicalize(&out.ctx, &out.term, &out.ty, mode).unwrap();
        let inv = invert(&out.ctx, &c.form).unwrap();
        (inv, roundtrip(&out.ctx, &c.form, mode).unwrap())
    }

    #[test]
    fn variable_inverts_to_itself() {
        let ctx = MuContext::new().with_var("x", a());
        let (inv, v) = round(&ctx, &MuTerm::var("x"), Mode::Plain);
        assert_eq!(inv, Inverted::Program { term: MuTerm::var("x") });
        assert!(v.is_equal());
    }

    #[test]
    fn application_round_trips() {
        let ctx = MuContext::new().with_var("f", MuType::arrow(a(), a())).with_var("v", a());
        let m = MuTerm::app(MuTerm::var("f"), MuTerm::var("v"));
        let (_, v) = round(&ctx, &m, Mode::Plain);
        assert!(v.is_equal());
    }

    #[test]
    fn control_operators_round_trip() {
        let ctx = MuContext::new().with_name("b", a());
        let m = MuTerm::lam("x", a(), MuTerm::mu("c", a(), "b", MuTerm::var("x")));
        let (_, v) = round(&ctx, &m, Mode::Plain);
        assert!(v.is_equal());
    }

    #[test]
    fn polymorphic_identity_round_trips() {
        let m = MuTerm::ty_lam("X", MuTerm::lam("x", MuType::var("X"), MuTerm::var("x")));
        for mode in [Mode::Plain, Mode::Parametric] {
            let (_, v) = round(&MuContext::new(), &m, mode);
            assert!(v.is_equal());
        }
    }

    #[test]
    fn name_continuation_is_a_named_hole() {
        let tctx = TargetContext::new().with("k", TargetType::var("a"));
        let inv = invert(&tctx, &CanonicalForm::Continuation(TargetTerm::var("k"))).unwrap();
        let Inverted::Continuation { context } = inv else { panic!() };
        assert_eq!(context.fill(&MuTerm::var("y")), MuTerm::named("k", MuTerm::var("y")));
    }
}
