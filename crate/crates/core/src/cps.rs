//! The call-by-name CPS translation: `(−)°` on types and `[[−]]` on terms.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::mu::{typecheck_mu, MuContext, MuJudgement, MuTerm, MuType, MuTypeError};
use crate::names::fresh;
use crate::target::{typecheck_target, Mode, TargetContext, TargetTerm, TargetType, TargetTypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpsError {
    #[error("ill-typed source: {0}")]
    IllTyped(#[from] MuTypeError),
    #[error("type {0} is not the translation of a source type")]
    NotInImageType(String),
    #[error("translation failed to typecheck: {0}")]
    SoundnessViolation(TargetTypeError),
    #[error("translation has type {found}, expected {expected}")]
    SoundnessMismatch { expected: String, found: String },
}

/// `X° = X`, `(σ₁→σ₂)° = ¬σ₁° ∧ σ₂°`, `(∀X.σ)° = ∃X.σ°`.
pub fn cps_type(t: &MuType) -> TargetType {
    match t {
        MuType::Var(x) => TargetType::var(x.clone()),
        MuType::Arrow(a, b) => TargetType::conj(TargetType::neg(cps_type(a)), cps_type(b)),
        MuType::Forall(x, body) => TargetType::exists(x.clone(), cps_type(body)),
    }
}

/// Inverse of [`cps_type`] on its image.
pub fn untranslate_type(t: &TargetType) -> Result<MuType, CpsError> {
    match t {
        TargetType::Var(x) => Ok(MuType::var(x.clone())),
        TargetType::Conj(a, b) => match &**a {
            TargetType::Neg(a) => Ok(MuType::arrow(untranslate_type(a)?, untranslate_type(b)?)),
            _ => Err(CpsError::NotInImageType(t.to_string())),
        },
        TargetType::Exists(x, body) => Ok(MuType::forall(x.clone(), untranslate_type(body)?)),
        TargetType::R | TargetType::Neg(_) => Err(CpsError::NotInImageType(t.to_string())),
    }
}

/// The translated judgement `¬Γ°, Δ° ⊢ [[M]] : ¬σ°`, with the identifier
/// chosen for each source variable and name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CpsOutput {
    pub term: TargetTerm,
    pub ty: TargetType,
    pub ctx: TargetContext,
    pub source_ty: MuType,
    pub var_ids: BTreeMap<String, String>,
    pub name_ids: BTreeMap<String, String>,
}

struct Translator {
    taken: BTreeSet<String>,
    vars: Vec<(String, String, MuType)>,
    names: Vec<(String, String, MuType)>,
}

impl Translator {
    fn fresh(&mut self, base: &str) -> String {
        let id = fresh(base, |c| self.taken.contains(c));
        self.taken.insert(id.clone());
        id
    }

    /// The target identifier for a newly bound source identifier. The source
    /// spelling is kept unless an identifier of the other namespace that is
    /// currently in scope already uses it.
    fn bind_id(&mut self, x: &str, for_name: bool) -> String {
        let other = if for_name { &self.vars } else { &self.names };
        if other.iter().any(|(_, id, _)| id == x) {
            self.fresh(x)
        } else {
            x.to_string()
        }
    }

    fn type_ctx(&self) -> MuContext {
        MuContext {
            gamma: self.vars.iter().map(|(x, _, t)| (x.clone(), t.clone())).collect(),
            delta: self.names.iter().map(|(a, _, t)| (a.clone(), t.clone())).collect(),
        }
    }

    fn lookup_var(&self, x: &str) -> Result<(String, MuType), CpsError> {
        self.vars
            .iter()
            .rev()
            .find(|(y, _, _)| y == x)
            .map(|(_, id, t)| (id.clone(), t.clone()))
            .ok_or_else(|| MuTypeError::UnboundVariable(x.to_string()).into())
    }

    fn lookup_name(&self, a: &str) -> Result<(String, MuType), CpsError> {
        self.names
            .iter()
            .rev()
            .find(|(b, _, _)| b == a)
            .map(|(_, id, t)| (id.clone(), t.clone()))
            .ok_or_else(|| MuTypeError::UnboundName(a.to_string()).into())
    }

    fn term(&mut self, m: &MuTerm) -> Result<(TargetTerm, MuType), CpsError> {
        match m {
            MuTerm::Var(x) => {
                let (id, t) = self.lookup_var(x)?;
                Ok((TargetTerm::Var(id), t))
            }
            MuTerm::Lam(x, s1, body) => {
                let id = self.bind_id(x, false);
                self.vars.push((x.clone(), id.clone(), s1.clone()));
                let r = self.term(body);
                self.vars.pop();
                let (tb, s2) = r?;
                let z = self.fresh("z");
                let k = self.fresh("k");
                let zt = TargetType::conj(TargetType::neg(cps_type(s1)), cps_type(&s2));
                let out = TargetTerm::lam(
                    z.clone(),
                    zt,
                    TargetTerm::let_pair(id, k.clone(), TargetTerm::Var(z), TargetTerm::app(tb, TargetTerm::Var(k))),
                );
                Ok((out, MuType::arrow(s1.clone(), s2)))
            }
            MuTerm::App(f, a) => {
                let (tf, sf) = self.term(f)?;
                let (ta, sa) = self.term(a)?;
                let s2 = match sf {
                    MuType::Arrow(dom, cod) if *dom == sa => *cod,
                    MuType::Arrow(dom, _) => {
                        return Err(MuTypeError::TypeMismatch {
                            rule: "application",
                            expected: dom.to_string(),
                            found: sa.to_string(),
                        }
                        .into())
                    }
                    other => {
                        return Err(MuTypeError::TypeMismatch {
                            rule: "application",
                            expected: "a function type".into(),
                            found: other.to_string(),
                        }
                        .into())
                    }
                };
                let k = self.fresh("k");
                let out = TargetTerm::lam(
                    k.clone(),
                    cps_type(&s2),
                    TargetTerm::app(tf, TargetTerm::pair(ta, TargetTerm::Var(k))),
                );
                Ok((out, s2))
            }
            MuTerm::TyLam(x, body) => {
                let ftv = self.type_ctx().free_type_vars();
                let (x, body) = if ftv.contains(x) {
                    let x2 = self.fresh(x);
                    (x2.clone(), body.subst_type(x, &MuType::Var(x2)))
                } else {
                    (x.clone(), (**body).clone())
                };
                let (tb, s) = self.term(&body)?;
                let z = self.fresh("z");
                let k = self.fresh("k");
                let out = TargetTerm::lam(
                    z.clone(),
                    TargetType::exists(x.clone(), cps_type(&s)),
                    TargetTerm::let_pack(x.clone(), k.clone(), TargetTerm::Var(z), TargetTerm::app(tb, TargetTerm::Var(k))),
                );
                Ok((out, MuType::forall(x, s)))
            }
            MuTerm::TyApp(f, s2) => {
                let (tf, sf) = self.term(f)?;
                let MuType::Forall(x, s1) = &sf else {
                    return Err(MuTypeError::TypeMismatch {
                        rule: "type application",
                        expected: "a universal type".into(),
                        found: sf.to_string(),
                    }
                    .into());
                };
                let result = s1.subst(x, s2);
                let k = self.fresh("k");
                let pack = TargetTerm::pack(cps_type(s2), TargetTerm::Var(k.clone()), cps_type(&sf));
                let out = TargetTerm::lam(k, cps_type(&result), TargetTerm::app(tf, pack));
                Ok((out, result))
            }
            MuTerm::Mu(a, s1, b, body) => {
                let id = self.bind_id(a, true);
                self.names.push((a.clone(), id.clone(), s1.clone()));
                let r = (|| {
                    let (tb, sb) = self.term(body)?;
                    let (bid, bt) = self.lookup_name(b)?;
                    if bt != sb {
                        return Err(CpsError::from(MuTypeError::TypeMismatch {
                            rule: "mu",
                            expected: bt.to_string(),
                            found: sb.to_string(),
                        }));
                    }
                    Ok(TargetTerm::app(tb, TargetTerm::Var(bid)))
                })();
                self.names.pop();
                Ok((TargetTerm::lam(id, cps_type(s1), r?), s1.clone()))
            }
        }
    }
}

/// Translates a context: `x:σ` becomes `x:¬σ°` and `α:σ` becomes `α:σ°`.
/// A name spelled like a variable is given a fresh identifier.
fn translator_for(ctx: &MuContext, m: &MuTerm) -> Translator {
    let mut taken = m.all_identifiers();
    for (x, t) in ctx.gamma.iter().chain(ctx.delta.iter()) {
        taken.insert(x.clone());
        t.identifiers(&mut taken);
    }
    let mut tr = Translator {
        taken,
        vars: Vec::new(),
        names: Vec::new(),
    };
    for (x, t) in &ctx.gamma {
        tr.vars.push((x.clone(), x.clone(), t.clone()));
    }
    for (a, t) in &ctx.delta {
        let id = if ctx.gamma.iter().any(|(x, _)| x == a) { tr.fresh(a) } else { a.clone() };
        tr.names.push((a.clone(), id, t.clone()));
    }
    tr
}

/// Translates `Γ ⊢ M : σ | Δ`.
pub fn cps_judgement(ctx: &MuContext, m: &MuTerm) -> Result<CpsOutput, CpsError> {
    ctx.check_well_formed()?;
    let mut tr = translator_for(ctx, m);
    let tctx = TargetContext {
        vars: tr
            .vars
            .iter()
            .map(|(_, id, t)| (id.clone(), TargetType::neg(cps_type(t))))
            .chain(tr.names.iter().map(|(_, id, t)| (id.clone(), cps_type(t))))
            .collect(),
    };
    let var_ids = tr.vars.iter().map(|(x, id, _)| (x.clone(), id.clone())).collect();
    let name_ids = tr.names.iter().map(|(a, id, _)| (a.clone(), id.clone())).collect();
    let (term, source_ty) = tr.term(m)?;
    Ok(CpsOutput {
        ty: TargetType::neg(cps_type(&source_ty)),
        term,
        ctx: tctx,
        source_ty,
        var_ids,
        name_ids,
    })
}

/// `[[M]]` for a derivable judgement.
pub fn cps_term(j: &MuJudgement) -> Result<TargetTerm, CpsError> {
    Ok(cps_judgement(&j.ctx, &j.subject)?.term)
}

/// Evidence that a translation typechecks at `¬σ°` in `¬Γ°, Δ°`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub source: MuJudgement,
    pub target: CpsOutput,
}

/// Runs both typecheckers and confirms the translated judgement.
pub fn check_type_soundness(ctx: &MuContext, m: &MuTerm) -> Result<SoundnessReport, CpsError> {
    let source = MuJudgement::derive(ctx.clone(), m.clone())?;
    let target = cps_judgement(ctx, m)?;
    let found = typecheck_target(&target.ctx, &target.term, Mode::Plain).map_err(CpsError::SoundnessViolation)?;
    let expected = TargetType::neg(cps_type(&source.ty));
    if found != expected || target.ty != expected {
        return Err(CpsError::SoundnessMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(SoundnessReport { source, target })
}

/// Outcome of the three substitution commutations, each compared up to
/// alpha-equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstLemmaReport {
    pub type_in_type: bool,
    pub term_in_term: bool,
    pub type_in_term: bool,
}

impl SubstLemmaReport {
    pub fn all_hold(&self) -> bool {
        self.type_in_type && self.term_in_term && self.type_in_term
    }
}

/// `(σ[τ/X])° ≡ σ°[τ°/X]`
pub fn type_subst_commutes(s: &MuType, x: &str, t: &MuType) -> bool {
    cps_type(&s.subst(x, t)) == cps_type(s).subst(x, &cps_type(t))
}

/// `[[M[N/x]]] ≡ [[M]][[[N]]/x]` where `Γ, x:σ ⊢ M` and `Γ ⊢ N : σ`.
pub fn term_subst_commutes(ctx: &MuContext, m: &MuTerm, x: &str, n: &MuTerm) -> Result<bool, CpsError> {
    let nty = typecheck_mu(ctx, n)?;
    let mut ext = ctx.clone();
    ext.gamma.retain(|(y, _)| y != x);
    ext.gamma.push((x.to_string(), nty));
    let lhs = cps_judgement(ctx, &m.subst_term(x, n))?.term;
    let cm = cps_judgement(&ext, m)?;
    let cn = cps_judgement(ctx, n)?;
    let id = cm.var_ids.get(x).cloned().unwrap_or_else(|| x.to_string());
    Ok(lhs == cm.term.subst_term(&id, &cn.term))
}

/// `[[M[σ/X]]] ≡ [[M]][σ°/X]`; the substitution also applies to the
/// context.
pub fn type_in_term_subst_commutes(ctx: &MuContext, m: &MuTerm, x: &str, s: &MuType) -> Result<bool, CpsError> {
    let mut inst = ctx.clone();
    for (_, t) in inst.gamma.iter_mut().chain(inst.delta.iter_mut()) {
        *t = t.subst(x, s);
    }
    let lhs = cps_judgement(&inst, &m.subst_type(x, s))?.term;
    let rhs = cps_judgement(ctx, m)?.term.subst_type(x, &cps_type(s));
    Ok(lhs == rhs)
}

/// Runs all three commutations on one instance.
pub fn check_subst_lemmas(
    ctx: &MuContext,
    m: &MuTerm,
    x: &str,
    n: &MuTerm,
    tx: &str,
    s: &MuType,
) -> Result<SubstLemmaReport, CpsError> {
    let mty = {
        let mut ext = ctx.clone();
        ext.gamma.push((x.to_string(), typecheck_mu(ctx, n)?));
        typecheck_mu(&ext, m)?
    };
    Ok(SubstLemmaReport {
        type_in_type: type_subst_commutes(&mty, tx, s),
        term_in_term: term_subst_commutes(ctx, m, x, n)?,
        type_in_term: type_in_term_subst_commutes(ctx, &m.subst_term(x, n), tx, s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> MuType {
        MuType::var("s")
    }

    #[test]
    fn type_translation_table() {
        assert_eq!(cps_type(&MuType::var("X")), TargetType::var("X"));
        assert_eq!(cps_type(&MuType::bottom()), TargetType::exists_bottom());
        assert_eq!(
            cps_type(&s().neg()),
            TargetType::conj(TargetType::neg(TargetType::var("s")), TargetType::exists_bottom())
        );
        let t = MuType::forall("X", MuType::arrow(s(), MuType::var("X")));
        assert_eq!(untranslate_type(&cps_type(&t)), Ok(t));
        assert!(untranslate_type(&TargetType::R).is_err());
    }

    #[test]
    fn variable_translates_to_itself() {
        let ctx = MuContext::new().with_var("x", s());
        let out = cps_judgement(&ctx, &MuTerm::var("x")).unwrap();
        assert_eq!(out.term, TargetTerm::var("x"));
        assert_eq!(out.ty, TargetType::neg(TargetType::var("s")));
    }

    #[test]
    fn lambda_translation_shape() {
        let ctx = MuContext::new().with_var("m", s());
        let out = cps_judgement(&ctx, &MuTerm::lam("x", s(), MuTerm::var("m"))).unwrap();
        let expect = TargetTerm::lam(
            "z",
            TargetType::conj(TargetType::neg(TargetType::var("s")), TargetType::var("s")),
            TargetTerm::let_pair("x", "k", TargetTerm::var("z"), TargetTerm::app(TargetTerm::var("m"), TargetTerm::var("k"))),
        );
        assert_eq!(out.term, expect);
    }

    #[test]
    fn type_application_packs_continuation() {
        let ctx = MuContext::new().with_var("m", MuType::bottom());
        let out = cps_judgement(&ctx, &MuTerm::ty_app(MuTerm::var("m"), s())).unwrap();
        let expect = TargetTerm::lam(
            "k",
            TargetType::var("s"),
            TargetTerm::app(
                TargetTerm::var("m"),
                TargetTerm::pack(TargetType::var("s"), TargetTerm::var("k"), TargetType::exists_bottom()),
            ),
        );
        assert_eq!(out.term, expect);
    }

    #[test]
    fn name_clashing_with_variable_is_renamed() {
        let ctx = MuContext::new().with_var("a", s()).with_name("a", s());
        let m = MuTerm::mu("b", s(), "a", MuTerm::var("a"));
        let report = check_type_soundness(&ctx, &m).unwrap();
        assert_ne!(report.target.name_ids["a"], "a");
    }

    #[test]
    fn substitution_lemma_on_application() {
        let ctx = MuContext::new().with_var("y", s()).with_var("f", MuType::arrow(s(), s()));
        let m = MuTerm::app(MuTerm::var("x"), MuTerm::var("y"));
        let n = MuTerm::var("f");
        assert!(term_subst_commutes(&ctx, &m, "x", &n).unwrap());
    }
}
