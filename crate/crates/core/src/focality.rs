//! Focality of λμ2 maps: certificate extraction through CPS and the
//! repeatable/discardable characterisation.
//!
//! A map `f : σ₁ → σ₂` is certified when the canonical form of `[[f x]]`
//! is `λk.x g` up to lets, with `x` not free in the continuation `g`:
//! then `f` acts on continuations by the transformer `k ↦ g`.

use serde::Serialize;
use thiserror::Error;

use crate::cps::{cps_judgement, cps_type, CpsError};
use crate::encodings::{abort, dne, fold, functorial_action, in_map, peirce, TypeScheme};
use crate::mu::{typecheck_mu, MuContext, MuTerm, MuType, MuTypeError};
use crate::names::fresh;
use crate::normalizer::{canonicalize, eq_target, CanonicalForm, EqVerdict, NormError, Step};
use crate::target::{Mode, TargetContext, TargetTerm};
use crate::theory::{eq_mu, Theory, TheoryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FocalError {
    #[error(transparent)]
    IllTyped(#[from] MuTypeError),
    #[error("map has type {found}, expected {expected}")]
    NotAMap { expected: String, found: String },
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("certificates do not compose: codomain {left} differs from domain {right}")]
    Incompatible { left: String, right: String },
    #[error("composite transformer disagrees with the extracted one")]
    CompositionMismatch,
    #[error("{0}")]
    Encoding(#[from] crate::encodings::EncodingError),
}

/// Evidence that `subject : dom → cod` is focal.
#[derive(Debug, Clone, Serialize)]
pub struct FocalityCertificate {
    #[serde(serialize_with = "mu_text")]
    pub subject: MuTerm,
    #[serde(serialize_with = "ty_text")]
    pub dom: MuType,
    #[serde(serialize_with = "ty_text")]
    pub cod: MuType,
    /// The argument variable `x : ¬dom°`.
    pub arg: String,
    /// The continuation variable `k : cod°`, free in the transformer.
    pub cont: String,
    #[serde(serialize_with = "target_text")]
    pub transformer: TargetTerm,
    pub evidence: CanonicalForm,
    #[serde(serialize_with = "trace_text")]
    pub trace: Vec<Step>,
    #[serde(skip)]
    pub ctx: MuContext,
    #[serde(skip)]
    pub mode: Mode,
}

fn mu_text<S: serde::Serializer>(t: &MuTerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn ty_text<S: serde::Serializer>(t: &MuType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn target_text<S: serde::Serializer>(t: &TargetTerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn trace_text<S: serde::Serializer>(t: &[Step], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|st| st.to_string()))
}

impl FocalityCertificate {
    /// `k : cod°` together with the translated ambient context.
    pub fn transformer_context(&self) -> Result<TargetContext, FocalError> {
        let base = cps_judgement(&self.ctx, &MuTerm::lam("_u", self.dom.clone(), MuTerm::var("_u")))?.ctx;
        Ok(base.with(self.cont.clone(), cps_type(&self.cod)))
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome")]
pub enum FocalOutcome {
    Certified(Box<FocalityCertificate>),
    /// No factorisation was found; this is not a proof of non-focality.
    NoCertificate { evidence: CanonicalForm },
}

impl FocalOutcome {
    pub fn certificate(&self) -> Option<&FocalityCertificate> {
        match self {
            FocalOutcome::Certified(c) => Some(c),
            FocalOutcome::NoCertificate { .. } => None,
        }
    }
}

fn check_map(ctx: &MuContext, f: &MuTerm, dom: &MuType, cod: &MuType) -> Result<(), FocalError> {
    let found = typecheck_mu(ctx, f)?;
    let expected = MuType::arrow(dom.clone(), cod.clone());
    if found != expected {
        return Err(FocalError::NotAMap {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

/// Splits `let … in x g` into the transformer `let … in g`.
fn extract(a: &TargetTerm, x: &str) -> Option<TargetTerm> {
    match a {
        TargetTerm::App(p, c) if matches!(&**p, TargetTerm::Var(y) if y == x) && c.occurrences(x) == 0 => {
            Some((**c).clone())
        }
        TargetTerm::LetPair(a1, b1, s, body) if s.occurrences(x) == 0 && a1 != x && b1 != x => {
            Some(TargetTerm::let_pair(a1.clone(), b1.clone(), (**s).clone(), extract(body, x)?))
        }
        TargetTerm::LetPack(tv, b1, s, body) if s.occurrences(x) == 0 && b1 != x => {
            Some(TargetTerm::let_pack(tv.clone(), b1.clone(), (**s).clone(), extract(body, x)?))
        }
        _ => None,
    }
}

/// Looks for the factorisation `[[f x]] = λk.x g`.
pub fn check_focal(ctx: &MuContext, f: &MuTerm, dom: &MuType, cod: &MuType, theory: Theory) -> Result<FocalOutcome, FocalError> {
    check_map(ctx, f, dom, cod)?;
    let mut taken = f.all_identifiers();
    for (x, _) in ctx.gamma.iter().chain(&ctx.delta) {
        taken.insert(x.clone());
    }
    let x = fresh("x", |c| taken.contains(c));
    let ext = ctx.clone().with_var(x.clone(), dom.clone());
    let applied = MuTerm::app(f.clone(), MuTerm::var(x.clone()));
    let out = cps_judgement(&ext, &applied)?;
    let x_id = out.var_ids.get(&x).cloned().unwrap_or(x);
    let canon = canonicalize(&out.ctx, &out.term, &out.ty, theory.mode())?;
    let cert = match canon.form.term() {
        TargetTerm::Lam(k, _, body) => extract(body, &x_id).map(|g| (k.clone(), g)),
        // `λk.x k` is η-contracted to `x`.
        TargetTerm::Var(y) if *y == x_id => {
            let k = fresh("k", |c| c == x_id || out.ctx.lookup(c).is_some());
            Some((k.clone(), TargetTerm::var(k)))
        }
        _ => None,
    };
    Ok(match cert {
        Some((k, g)) => FocalOutcome::Certified(Box::new(FocalityCertificate {
            subject: f.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
            arg: x_id,
            cont: k,
            transformer: g,
            evidence: canon.form,
            trace: canon.trace,
            ctx: ctx.clone(),
            mode: theory.mode(),
        })),
        None => FocalOutcome::NoCertificate { evidence: canon.form },
    })
}

fn fresh_var(ctx: &MuContext, terms: &[&MuTerm], base: &str) -> String {
    let mut taken = std::collections::BTreeSet::new();
    for t in terms {
        taken.extend(t.all_identifiers());
    }
    for (x, _) in ctx.gamma.iter().chain(&ctx.delta) {
        taken.insert(x.clone());
    }
    fresh(base, |c| taken.contains(c))
}

/// `f ∘ A_σ₁ = A_σ₂`.
pub fn check_discardable(ctx: &MuContext, f: &MuTerm, dom: &MuType, cod: &MuType, theory: Theory) -> Result<EqVerdict, FocalError> {
    check_map(ctx, f, dom, cod)?;
    let lhs = MuTerm::compose(f.clone(), abort(dom), MuType::bottom());
    let y = fresh_var(ctx, &[f], "y");
    let rhs = MuTerm::lam(y.clone(), MuType::bottom(), MuTerm::app(abort(cod), MuTerm::var(y)));
    Ok(eq_mu(ctx, &lhs, &rhs, theory)?)
}

/// `f ∘ P_{σ₁,σ₃} = P_{σ₂,σ₃} ∘ ((f → σ₃) → f)` with `σ₃` a fresh type
/// variable.
pub fn check_repeatable(ctx: &MuContext, f: &MuTerm, dom: &MuType, cod: &MuType, theory: Theory) -> Result<EqVerdict, FocalError> {
    check_map(ctx, f, dom, cod)?;
    let mut tys = ctx.free_type_vars();
    tys.extend(f.free_type_vars());
    tys.extend(dom.free_type_vars());
    tys.extend(cod.free_type_vars());
    let s3 = MuType::var(fresh("r", |c| tys.contains(c)));
    let m = fresh_var(ctx, &[f], "m");
    let h = fresh_var(ctx, &[f, &MuTerm::var(m.clone())], "h");
    let z = fresh_var(ctx, &[f, &MuTerm::var(m.clone()), &MuTerm::var(h.clone())], "z");
    let m_ty = MuType::arrow(MuType::arrow(dom.clone(), s3.clone()), dom.clone());
    let lhs = MuTerm::lam(
        m.clone(),
        m_ty.clone(),
        MuTerm::app(f.clone(), MuTerm::app(peirce(dom, &s3), MuTerm::var(m.clone()))),
    );
    let pushed = MuTerm::lam(
        h.clone(),
        MuType::arrow(cod.clone(), s3.clone()),
        MuTerm::app(
            f.clone(),
            MuTerm::app(
                MuTerm::var(m.clone()),
                MuTerm::lam(
                    z.clone(),
                    dom.clone(),
                    MuTerm::app(MuTerm::var(h), MuTerm::app(f.clone(), MuTerm::var(z))),
                ),
            ),
        ),
    );
    let rhs = MuTerm::lam(m, m_ty, MuTerm::app(peirce(cod, &s3), pushed));
    Ok(eq_mu(ctx, &lhs, &rhs, theory)?)
}

/// Naturality squares a certified map can be tested against.
#[derive(Debug, Clone)]
pub enum Square {
    /// `f ∘ C_σ₁ = C_σ₂ ∘ ¬¬f`.
    DoubleNegation,
    /// `f ∘ P_{σ₁,σ₃} = P_{σ₂,σ₃} ∘ ((f → σ₃) → f)`.
    Peirce,
    /// For the constant scheme `F[X] = σ₀` and `a : σ₀ → σ₁`, the premise
    /// `f ∘ a = b ∘ F[f]` holds with `b = f ∘ a`; the conclusion
    /// `f (fold a x) = fold b x` is checked at `x = in y`.
    Fold { base: MuType, algebra: MuTerm },
}

/// Checks a naturality square for a certified map.
pub fn check_naturality_square(cert: &FocalityCertificate, square: &Square) -> Result<EqVerdict, FocalError> {
    let (ctx, f, dom, cod) = (&cert.ctx, &cert.subject, &cert.dom, &cert.cod);
    let theory = if cert.mode == Mode::Plain { Theory::BetaEta } else { Theory::LambdaMu2P };
    match square {
        Square::DoubleNegation => {
            let k = fresh_var(ctx, &[f], "k");
            let h = fresh_var(ctx, &[f, &MuTerm::var(k.clone())], "h");
            let z = fresh_var(ctx, &[f, &MuTerm::var(k.clone()), &MuTerm::var(h.clone())], "z");
            let nn = crate::encodings::neg_neg(dom);
            let lhs = MuTerm::lam(k.clone(), nn.clone(), MuTerm::app(f.clone(), MuTerm::app(dne(dom), MuTerm::var(k.clone()))));
            let pushed = MuTerm::lam(
                h.clone(),
                cod.clone().neg(),
                MuTerm::app(
                    MuTerm::var(k.clone()),
                    MuTerm::lam(
                        z.clone(),
                        dom.clone(),
                        MuTerm::app(MuTerm::var(h), MuTerm::app(f.clone(), MuTerm::var(z))),
                    ),
                ),
            );
            let rhs = MuTerm::lam(k, nn, MuTerm::app(dne(cod), pushed));
            Ok(eq_mu(ctx, &lhs, &rhs, theory)?)
        }
        Square::Peirce => check_repeatable(ctx, f, dom, cod, theory),
        Square::Fold { base, algebra } => {
            let scheme = TypeScheme::new(fresh("X", |c| base.occurs_free(c) || dom.occurs_free(c) || cod.occurs_free(c)), base.clone());
            let b = MuTerm::compose(f.clone(), algebra.clone(), base.clone());
            let y = fresh_var(ctx, &[f, algebra], "y");
            let ctx2 = ctx.clone().with_var(y.clone(), base.clone());
            let x = MuTerm::app(in_map(&scheme)?, MuTerm::var(y));
            let lhs = MuTerm::app(f.clone(), MuTerm::apps(fold(&scheme, dom), [algebra.clone(), x.clone()]));
            let rhs = MuTerm::apps(fold(&scheme, cod), [b, x]);
            // F[f] is the identity for a constant scheme; make that explicit.
            debug_assert!(functorial_action(&scheme, dom, cod, f).is_ok());
            Ok(eq_mu(&ctx2, &lhs, &rhs, theory)?)
        }
    }
}

/// Certificate of `h ∘ f` from certificates of `f` and `h`: the
/// transformer is `g_f[g_h/k]`. It is cross-checked against the one
/// extracted from the composite directly.
pub fn compose(f: &FocalityCertificate, h: &FocalityCertificate) -> Result<FocalityCertificate, FocalError> {
    if f.cod != h.dom {
        return Err(FocalError::Incompatible {
            left: f.cod.to_string(),
            right: h.dom.to_string(),
        });
    }
    let theory = if f.mode == Mode::Plain { Theory::BetaEta } else { Theory::LambdaMu2P };
    let subject = MuTerm::compose(h.subject.clone(), f.subject.clone(), f.dom.clone());
    let direct = check_focal(&f.ctx, &subject, &f.dom, &h.cod, theory)?;
    let Some(direct) = direct.certificate() else {
        return Err(FocalError::CompositionMismatch);
    };
    let inner = h.transformer.subst_term(&h.cont, &TargetTerm::var(direct.cont.clone()));
    let derived = f.transformer.subst_term(&f.cont, &inner);
    let tctx = direct.transformer_context()?;
    match eq_target(&tctx, &derived, &direct.transformer, f.mode)? {
        EqVerdict::Equal { .. } => Ok(direct.clone()),
        EqVerdict::Distinct { .. } => Err(FocalError::CompositionMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> MuType {
        MuType::var(x)
    }

    fn id(t: MuType) -> MuTerm {
        MuTerm::lam("x", t, MuTerm::var("x"))
    }

    #[test]
    fn identity_is_certified_with_trivial_transformer() {
        let out = check_focal(&MuContext::new(), &id(s("a")), &s("a"), &s("a"), Theory::LambdaMu2P).unwrap();
        let c = out.certificate().expect("certificate");
        assert_eq!(c.transformer, TargetTerm::var(c.cont.clone()));
    }

    #[test]
    fn abort_transformer_packs_the_type() {
        let out = check_focal(&MuContext::new(), &abort(&s("a")), &MuType::bottom(), &s("a"), Theory::BetaEta).unwrap();
        let c = out.certificate().expect("certificate");
        let want = TargetTerm::pack(cps_type(&s("a")), TargetTerm::var(c.cont.clone()), cps_type(&MuType::bottom()));
        assert_eq!(c.transformer, want);
    }

    #[test]
    fn application_map_is_repeatable_and_discardable_only_with_p() {
        let ctx = MuContext::new().with_var("n", s("a"));
        let ab = MuType::arrow(s("a"), s("b"));
        let f = MuTerm::lam("x", ab.clone(), MuTerm::app(MuTerm::var("x"), MuTerm::var("n")));
        assert!(check_repeatable(&ctx, &f, &ab, &s("b"), Theory::BetaEta).unwrap().is_equal());
        assert!(!check_discardable(&ctx, &f, &ab, &s("b"), Theory::BetaEta).unwrap().is_equal());
        assert!(check_discardable(&ctx, &f, &ab, &s("b"), Theory::LambdaMu2P).unwrap().is_equal());
    }

    #[test]
    fn double_negation_square_for_identity() {
        let out = check_focal(&MuContext::new(), &id(s("a")), &s("a"), &s("a"), Theory::LambdaMu2P).unwrap();
        let c = out.certificate().unwrap();
        assert!(check_naturality_square(c, &Square::DoubleNegation).unwrap().is_equal());
    }

    #[test]
    fn composites_are_certified() {
        let ctx = MuContext::new().with_var("n", s("a"));
        let ab = MuType::arrow(s("a"), s("b"));
        let app = MuTerm::lam("x", ab.clone(), MuTerm::app(MuTerm::var("x"), MuTerm::var("n")));
        let f = check_focal(&ctx, &abort(&ab), &MuType::bottom(), &ab, Theory::LambdaMu2P).unwrap();
        let h = check_focal(&ctx, &app, &ab, &s("b"), Theory::LambdaMu2P).unwrap();
        let c = compose(f.certificate().unwrap(), h.certificate().unwrap()).unwrap();
        assert_eq!(c.dom, MuType::bottom());
    }
}
