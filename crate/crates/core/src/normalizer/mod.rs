//! Canonical forms and the equality oracle for target terms.
//!
//! Every rewrite goes through [`apply_step`], which checks the side
//! conditions of a single rule. The strategy only chooses steps, and the
//! recorded trace can be replayed independently with [`replay`].

mod kernel;
mod path;
mod strategy;

use serde::Serialize;
use thiserror::Error;

pub use kernel::{apply_step, context_at, KernelError, Rule, Step};
pub use path::Path;

use crate::cps::untranslate_type;
use crate::target::{typecheck_target, Mode, TargetContext, TargetTerm, TargetType, TargetTypeError};
use strategy::Normalizer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("ill-typed input: {0}")]
    IllTyped(#[from] TargetTypeError),
    #[error("type {0} is not the translation of a source type")]
    NotInImageType(String),
    #[error("rewrite step rejected: {0}")]
    Kernel(KernelError),
    #[error("gave up after {0} rewrite steps")]
    StepLimit(usize),
    #[error("result is not in canonical shape: {0}")]
    NotCanonical(String),
    #[error("expected type {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
}

/// Canonical terms, split by syntactic category.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "category", content = "term")]
pub enum CanonicalForm {
    Program(#[serde(serialize_with = "as_text")] TargetTerm),
    Continuation(#[serde(serialize_with = "as_text")] TargetTerm),
    Answer(#[serde(serialize_with = "as_text")] TargetTerm),
}

fn as_text<S: serde::Serializer>(t: &TargetTerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl CanonicalForm {
    pub fn term(&self) -> &TargetTerm {
        match self {
            CanonicalForm::Program(t) | CanonicalForm::Continuation(t) | CanonicalForm::Answer(t) => t,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CanonicalForm::Program(_) => "program",
            CanonicalForm::Continuation(_) => "continuation",
            CanonicalForm::Answer(_) => "answer",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Category {
    Program,
    Continuation,
    Answer,
}

fn category_of(ty: &TargetType) -> Option<Category> {
    match ty {
        TargetType::R => Some(Category::Answer),
        TargetType::Neg(t) if untranslate_type(t).is_ok() => Some(Category::Program),
        _ if untranslate_type(ty).is_ok() => Some(Category::Continuation),
        _ => None,
    }
}

fn is_program(t: &TargetTerm) -> bool {
    match t {
        TargetTerm::Var(_) => true,
        TargetTerm::Lam(_, _, b) => is_answer(b),
        _ => false,
    }
}

fn is_continuation(t: &TargetTerm, mode: Mode) -> bool {
    match t {
        TargetTerm::Var(_) => true,
        TargetTerm::Star => mode == Mode::Parametric,
        TargetTerm::Pair(p, c) => is_program(p) && is_continuation(c, mode),
        TargetTerm::Pack(w, c, _) => untranslate_type(w).is_ok() && is_continuation(c, mode),
        TargetTerm::LetPair(_, _, s, b) | TargetTerm::LetPack(_, _, s, b) => {
            is_continuation(s, mode) && is_continuation(b, mode)
        }
        _ => false,
    }
}

fn is_answer(t: &TargetTerm) -> bool {
    match t {
        TargetTerm::App(p, c) => is_program(p) && is_continuation(c, Mode::Parametric),
        TargetTerm::LetPair(_, _, s, b) | TargetTerm::LetPack(_, _, s, b) => {
            is_continuation(s, Mode::Parametric) && is_answer(b)
        }
        _ => false,
    }
}

fn classify(t: TargetTerm, cat: Category, mode: Mode) -> Result<CanonicalForm, NormError> {
    let ok = match cat {
        Category::Program => is_program(&t),
        Category::Continuation => is_continuation(&t, mode),
        Category::Answer => is_answer(&t),
    };
    if !ok {
        return Err(NormError::NotCanonical(t.to_string()));
    }
    Ok(match cat {
        Category::Program => CanonicalForm::Program(t),
        Category::Continuation => CanonicalForm::Continuation(t),
        Category::Answer => CanonicalForm::Answer(t),
    })
}

/// A canonical form together with the steps that produced it.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub form: CanonicalForm,
    pub trace: Vec<Step>,
}

/// β-normal form (with commuting conversions) and its trace.
pub fn beta_normalize(ctx: &TargetContext, term: &TargetTerm, mode: Mode) -> Result<(TargetTerm, Vec<Step>), NormError> {
    typecheck_target(ctx, term, mode)?;
    let mut n = Normalizer::new(term.clone(), ctx.clone(), mode);
    n.beta_normalize()?;
    Ok((n.term, n.trace))
}

/// Canonical form of `term`, which must have type `ty` under `ctx`.
pub fn canonicalize(ctx: &TargetContext, term: &TargetTerm, ty: &TargetType, mode: Mode) -> Result<Canonical, NormError> {
    let found = typecheck_target(ctx, term, mode)?;
    if found != *ty {
        return Err(NormError::TypeMismatch {
            expected: ty.to_string(),
            found: found.to_string(),
        });
    }
    let cat = category_of(ty).ok_or_else(|| NormError::NotInImageType(ty.to_string()))?;
    let mut n = Normalizer::new(term.clone(), ctx.clone(), mode);
    n.canonicalize()?;
    Ok(Canonical {
        form: classify(n.term, cat, mode)?,
        trace: n.trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum EqVerdict {
    Equal { form: CanonicalForm },
    Distinct { left: CanonicalForm, right: CanonicalForm },
}

impl EqVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqVerdict::Equal { .. })
    }
}

/// Verdict plus the traces of both sides.
#[derive(Debug, Clone)]
pub struct EqReport {
    pub verdict: EqVerdict,
    pub left_trace: Vec<Step>,
    pub right_trace: Vec<Step>,
}

pub fn eq_target_traced(
    ctx: &TargetContext,
    m: &TargetTerm,
    n: &TargetTerm,
    mode: Mode,
) -> Result<EqReport, NormError> {
    let tm = typecheck_target(ctx, m, mode)?;
    let tn = typecheck_target(ctx, n, mode)?;
    if tm != tn {
        return Err(NormError::TypeMismatch {
            expected: tm.to_string(),
            found: tn.to_string(),
        });
    }
    let l = canonicalize(ctx, m, &tm, mode)?;
    let r = canonicalize(ctx, n, &tn, mode)?;
    let verdict = if l.form.term() == r.form.term() {
        EqVerdict::Equal { form: l.form }
    } else {
        EqVerdict::Distinct {
            left: l.form,
            right: r.form,
        }
    };
    Ok(EqReport {
        verdict,
        left_trace: l.trace,
        right_trace: r.trace,
    })
}

/// Decides equality of two target terms of the same type.
pub fn eq_target(ctx: &TargetContext, m: &TargetTerm, n: &TargetTerm, mode: Mode) -> Result<EqVerdict, NormError> {
    eq_target_traced(ctx, m, n, mode).map(|r| r.verdict)
}

/// Re-applies `trace` to `start` step by step, independently of the
/// strategy that produced it.
pub fn replay(ctx: &TargetContext, start: &TargetTerm, mode: Mode, trace: &[Step]) -> Result<TargetTerm, NormError> {
    trace.iter().try_fold(start.clone(), |t, s| apply_step(&t, ctx, mode, s).map_err(NormError::Kernel))
}

/// Parses a trace, one step per line; blank lines and `#` comments are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<Step>, KernelError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests;
