//! Surface syntax for both calculi. Input is ASCII; the UTF-8 output of
//! the printers is accepted as well, so `parse(print(t)) = t`.

mod lexer;
pub mod mu;
pub mod target;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use lexer::Pos;
use lexer::{Cursor, Tok};

use crate::mu::{typecheck_mu, MuContext, MuTerm, MuType};
use crate::target::{typecheck_target, Mode, TargetContext, TargetTerm, TargetType};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(pos: Pos, message: String) -> Self {
        SyntaxError { line: pos.line, col: pos.col, message }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

fn whole<T>(src: &str, p: impl FnOnce(&mut Cursor) -> Result<T, SyntaxError>) -> Result<T, SyntaxError> {
    let mut c = Cursor::new(src)?;
    let out = p(&mut c)?;
    c.finish()?;
    Ok(out)
}

pub fn parse_mu_type(src: &str) -> Result<MuType, SyntaxError> {
    whole(src, mu::parse_type)
}

/// A fully annotated λμ2 term.
pub fn parse_mu_term(src: &str) -> Result<MuTerm, SyntaxError> {
    whole(src, mu::parse_term)?.into_term()
}

pub fn parse_target_type(src: &str) -> Result<TargetType, SyntaxError> {
    whole(src, target::parse_type)
}

/// A fully annotated target term.
pub fn parse_target_term(src: &str) -> Result<TargetTerm, SyntaxError> {
    whole(src, target::parse_term)?.into_term()
}

/// `x : t, y : u | a : s`: variables, then names after the bar.
pub fn parse_mu_context(src: &str) -> Result<MuContext, SyntaxError> {
    whole(src, |c| {
        let mut ctx = MuContext::new();
        let mut names = false;
        while c.peek() != &Tok::Eof {
            if c.eat(&Tok::Bar) {
                names = true;
                continue;
            }
            let x = c.ident(&[])?;
            c.expect(&Tok::Colon)?;
            let t = mu::parse_type(c)?;
            ctx = if names { ctx.with_name(x, t) } else { ctx.with_var(x, t) };
            if !c.eat(&Tok::Comma) && c.peek() != &Tok::Bar {
                break;
            }
        }
        Ok(ctx)
    })
}

/// `x : t, y : u`.
pub fn parse_target_context(src: &str) -> Result<TargetContext, SyntaxError> {
    whole(src, |c| {
        let mut ctx = TargetContext::new();
        while c.peek() != &Tok::Eof {
            let x = c.ident(&[])?;
            c.expect(&Tok::Colon)?;
            ctx = ctx.with(x, target::parse_type(c)?);
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(ctx)
    })
}

/// An elaborated judgement; `ctx` extends the given context with the
/// free variables whose types were inferred.
#[derive(Debug, Clone)]
pub struct Elaborated<C, M, T> {
    pub ctx: C,
    pub term: M,
    pub ty: T,
}

pub type MuElaborated = Elaborated<MuContext, MuTerm, MuType>;
pub type TargetElaborated = Elaborated<TargetContext, TargetTerm, TargetType>;

/// Parses and elaborates a λμ2 term: annotations may be omitted where
/// the expected type determines them.
pub fn elaborate_mu(src: &str, ctx: &MuContext, expected: Option<&MuType>) -> Result<MuElaborated, SyntaxError> {
    let raw = whole(src, mu::parse_term)?;
    let pos = raw.pos;
    let mut el = mu::Elab { ctx: ctx.clone() };
    let (term, ty) = match expected {
        Some(t) => (el.check(&MuContext::new(), &raw, t)?, t.clone()),
        None => el.infer(&MuContext::new(), &raw)?,
    };
    typecheck_mu(&el.ctx, &term).map_err(|e| SyntaxError::new(pos, e.to_string()))?;
    Ok(Elaborated { ctx: el.ctx, term, ty })
}

/// Parses and elaborates a target term.
pub fn elaborate_target(src: &str, ctx: &TargetContext, expected: Option<&TargetType>) -> Result<TargetElaborated, SyntaxError> {
    let raw = whole(src, target::parse_term)?;
    let pos = raw.pos;
    let mut el = target::Elab { ctx: ctx.clone() };
    let (term, ty) = match expected {
        Some(t) => (el.check(&TargetContext::new(), &raw, t)?, t.clone()),
        None => el.infer(&TargetContext::new(), &raw)?,
    };
    typecheck_target(&el.ctx, &term, Mode::Parametric).map_err(|e| SyntaxError::new(pos, e.to_string()))?;
    Ok(Elaborated { ctx: el.ctx, term, ty })
}

#[cfg(test)]
mod tests;
