//! Target-calculus surface syntax.
//!
//! ```text
//! type ::= exists X. type | unary (/\ type)?
//! unary ::= not unary | R | X | ( type )
//! term ::= \x(:type)?. term | let <x, y> = term in term
//!        | let <X | x> = term in term | let <X, x> = term in term | app
//! app  ::= atom atom* binder?
//! atom ::= x | * | ( term ) | <term, term> | <type | term (as type)?>
//! ```
//!
//! In `let <X, x>` an upper-case first component selects the
//! existential elimination.

use super::lexer::{Cursor, Pos, Tok};
use super::SyntaxError;
use crate::target::{TargetContext, TargetTerm, TargetType};

const RESERVED: &[&str] = &["let", "in", "as"];

#[derive(Debug, Clone)]
pub struct RawTarget {
    pub pos: Pos,
    pub kind: RawTargetKind,
}

#[derive(Debug, Clone)]
pub enum RawTargetKind {
    Var(String),
    Star,
    Lam(String, Option<TargetType>, Box<RawTarget>),
    App(Box<RawTarget>, Box<RawTarget>),
    Pair(Box<RawTarget>, Box<RawTarget>),
    Pack(TargetType, Box<RawTarget>, Option<TargetType>),
    LetPair(String, String, Box<RawTarget>, Box<RawTarget>),
    LetPack(String, String, Box<RawTarget>, Box<RawTarget>),
}

pub(crate) fn parse_type(c: &mut Cursor) -> Result<TargetType, SyntaxError> {
    if c.eat(&Tok::Exists) {
        let x = c.ident(&[])?;
        c.expect(&Tok::Dot)?;
        return Ok(TargetType::exists(x, parse_type(c)?));
    }
    let left = parse_unary(c)?;
    if c.eat(&Tok::SlashBack) || c.eat(&Tok::And) {
        Ok(TargetType::conj(left, parse_type(c)?))
    } else {
        Ok(left)
    }
}

fn parse_unary(c: &mut Cursor) -> Result<TargetType, SyntaxError> {
    match c.peek().clone() {
        Tok::Not => {
            c.bump();
            Ok(TargetType::neg(parse_unary(c)?))
        }
        Tok::Ident(x) if x == "R" => {
            c.bump();
            Ok(TargetType::R)
        }
        Tok::Ident(x) if !RESERVED.contains(&x.as_str()) => {
            c.bump();
            Ok(TargetType::Var(x))
        }
        Tok::LParen => {
            c.bump();
            let t = parse_type(c)?;
            c.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::Exists => parse_type(c),
        other => Err(c.error(format!("expected a type, found {}", other.describe()))),
    }
}

pub(crate) fn parse_term(c: &mut Cursor) -> Result<RawTarget, SyntaxError> {
    let pos = c.pos();
    if c.eat(&Tok::Lambda) {
        let x = c.ident(RESERVED)?;
        let t = if c.eat(&Tok::Colon) { Some(parse_type(c)?) } else { None };
        c.expect(&Tok::Dot)?;
        let body = parse_term(c)?;
        return Ok(RawTarget { pos, kind: RawTargetKind::Lam(x, t, Box::new(body)) });
    }
    if c.is_keyword("let") {
        c.bump();
        c.expect(&Tok::LAngle)?;
        let a = c.ident(RESERVED)?;
        let pack = if c.eat(&Tok::Bar) {
            true
        } else {
            c.expect(&Tok::Comma)?;
            a.starts_with(|ch: char| ch.is_ascii_uppercase())
        };
        let b = c.ident(RESERVED)?;
        c.expect(&Tok::RAngle)?;
        c.expect(&Tok::Equals)?;
        let s = parse_term(c)?;
        c.expect_keyword("in")?;
        let body = parse_term(c)?;
        let kind = if pack {
            RawTargetKind::LetPack(a, b, Box::new(s), Box::new(body))
        } else {
            RawTargetKind::LetPair(a, b, Box::new(s), Box::new(body))
        };
        return Ok(RawTarget { pos, kind });
    }
    parse_app(c)
}

fn starts_atom(c: &Cursor) -> bool {
    match c.peek() {
        Tok::Ident(x) => !RESERVED.contains(&x.as_str()),
        Tok::Star | Tok::LParen | Tok::LAngle => true,
        _ => false,
    }
}

fn parse_atom(c: &mut Cursor) -> Result<RawTarget, SyntaxError> {
    let pos = c.pos();
    let kind = match c.peek().clone() {
        Tok::Ident(x) if !RESERVED.contains(&x.as_str()) => {
            c.bump();
            RawTargetKind::Var(x)
        }
        Tok::Star => {
            c.bump();
            RawTargetKind::Star
        }
        Tok::LParen => {
            c.bump();
            let m = parse_term(c)?;
            c.expect(&Tok::RParen)?;
            return Ok(m);
        }
        Tok::LAngle => {
            c.bump();
            let mark = c.mark();
            let witness = parse_type(c).ok().filter(|_| c.peek() == &Tok::Bar);
            match witness {
                Some(w) => {
                    c.bump();
                    let m = parse_term(c)?;
                    let ann = if c.is_keyword("as") {
                        c.bump();
                        Some(parse_type(c)?)
                    } else {
                        None
                    };
                    c.expect(&Tok::RAngle)?;
                    RawTargetKind::Pack(w, Box::new(m), ann)
                }
                None => {
                    c.reset(mark);
                    let a = parse_term(c)?;
                    c.expect(&Tok::Comma)?;
                    let b = parse_term(c)?;
                    c.expect(&Tok::RAngle)?;
                    RawTargetKind::Pair(Box::new(a), Box::new(b))
                }
            }
        }
        other => return Err(c.error(format!("expected a term, found {}", other.describe()))),
    };
    Ok(RawTarget { pos, kind })
}

fn parse_app(c: &mut Cursor) -> Result<RawTarget, SyntaxError> {
    let mut acc = parse_atom(c)?;
    loop {
        let pos = c.pos();
        let arg = if starts_atom(c) {
            parse_atom(c)?
        } else if c.peek() == &Tok::Lambda || c.is_keyword("let") {
            let arg = parse_term(c)?;
            return Ok(RawTarget { pos, kind: RawTargetKind::App(Box::new(acc), Box::new(arg)) });
        } else {
            return Ok(acc);
        };
        acc = RawTarget { pos, kind: RawTargetKind::App(Box::new(acc), Box::new(arg)) };
    }
}

impl RawTarget {
    /// The term itself, when every binder and pack carries its annotation.
    pub fn into_term(self) -> Result<TargetTerm, SyntaxError> {
        let pos = self.pos;
        Ok(match self.kind {
            RawTargetKind::Var(x) => TargetTerm::var(x),
            RawTargetKind::Star => TargetTerm::Star,
            RawTargetKind::Lam(x, Some(t), b) => TargetTerm::lam(x, t, b.into_term()?),
            RawTargetKind::Lam(x, None, _) => {
                return Err(SyntaxError::new(pos, format!("λ-bound `{x}` needs a type annotation here")))
            }
            RawTargetKind::App(f, a) => TargetTerm::app(f.into_term()?, a.into_term()?),
            RawTargetKind::Pair(a, b) => TargetTerm::pair(a.into_term()?, b.into_term()?),
            RawTargetKind::Pack(w, m, Some(t)) => TargetTerm::pack(w, m.into_term()?, t),
            RawTargetKind::Pack(_, _, None) => {
                return Err(SyntaxError::new(pos, "pack needs an `as` annotation here".into()))
            }
            RawTargetKind::LetPair(x, y, s, b) => TargetTerm::let_pair(x, y, s.into_term()?, b.into_term()?),
            RawTargetKind::LetPack(x, y, s, b) => TargetTerm::let_pack(x, y, s.into_term()?, b.into_term()?),
        })
    }
}

/// Bidirectional elaboration for target terms; see the λμ2 elaborator.
pub(crate) struct Elab {
    pub ctx: TargetContext,
}

fn mismatch(pos: Pos, expected: &TargetType, found: &TargetType) -> SyntaxError {
    SyntaxError::new(pos, format!("expected type {expected}, found {found}"))
}

impl Elab {
    fn bound(&self, scope: &TargetContext, x: &str) -> Option<TargetType> {
        scope.lookup(x).or_else(|| self.ctx.lookup(x)).cloned()
    }

    pub(crate) fn infer(&mut self, scope: &TargetContext, raw: &RawTarget) -> Result<(TargetTerm, TargetType), SyntaxError> {
        let pos = raw.pos;
        match &raw.kind {
            RawTargetKind::Var(x) => match self.bound(scope, x) {
                Some(t) => Ok((TargetTerm::var(x.clone()), t)),
                None => Err(SyntaxError::new(pos, format!("cannot infer the type of free variable `{x}`"))),
            },
            RawTargetKind::Star => Ok((TargetTerm::Star, TargetType::exists_bottom())),
            RawTargetKind::Lam(x, Some(t), b) => {
                let body = self.check(&scope.clone().with(x.clone(), t.clone()), b, &TargetType::R)?;
                Ok((TargetTerm::lam(x.clone(), t.clone(), body), TargetType::neg(t.clone())))
            }
            RawTargetKind::Lam(x, None, _) => Err(SyntaxError::new(pos, format!("cannot infer the type of λ-bound `{x}`"))),
            RawTargetKind::App(f, a) => {
                let (f, ft) = self.infer(scope, f)?;
                let TargetType::Neg(d) = &ft else {
                    return Err(SyntaxError::new(pos, format!("applied a term of type {ft} to an argument")));
                };
                let a = self.check(scope, a, d)?;
                Ok((TargetTerm::app(f, a), TargetType::R))
            }
            RawTargetKind::Pair(a, b) => {
                let (a, at) = self.infer(scope, a)?;
                let (b, bt) = self.infer(scope, b)?;
                Ok((TargetTerm::pair(a, b), TargetType::conj(at, bt)))
            }
            RawTargetKind::Pack(w, m, Some(ann)) => {
                let TargetType::Exists(x, body) = ann else {
                    return Err(SyntaxError::new(pos, format!("pack annotation {ann} is not existential")));
                };
                let m = self.check(scope, m, &body.subst(x, w))?;
                Ok((TargetTerm::pack(w.clone(), m, ann.clone()), ann.clone()))
            }
            RawTargetKind::Pack(_, _, None) => Err(SyntaxError::new(pos, "cannot infer the type of an unannotated pack".into())),
            RawTargetKind::LetPair(..) | RawTargetKind::LetPack(..) => {
                let (inner, rebuild) = self.open_let(scope, raw)?;
                let (body, t) = self.infer(&inner, let_body(raw))?;
                Ok((rebuild(body), t))
            }
        }
    }

    /// Elaborates the scrutinee of a let and extends the scope with its
    /// components.
    #[allow(clippy::type_complexity)]
    fn open_let(
        &mut self,
        scope: &TargetContext,
        raw: &RawTarget,
    ) -> Result<(TargetContext, Box<dyn FnOnce(TargetTerm) -> TargetTerm>), SyntaxError> {
        let pos = raw.pos;
        match &raw.kind {
            RawTargetKind::LetPair(x, y, s, _) => {
                let (s, st) = self.infer(scope, s)?;
                let TargetType::Conj(a, b) = &st else {
                    return Err(SyntaxError::new(pos, format!("cannot split a term of type {st}")));
                };
                let inner = scope.clone().with(x.clone(), (**a).clone()).with(y.clone(), (**b).clone());
                let (x, y) = (x.clone(), y.clone());
                Ok((inner, Box::new(move |body| TargetTerm::let_pair(x, y, s, body))))
            }
            RawTargetKind::LetPack(tx, y, s, _) => {
                let (s, st) = self.infer(scope, s)?;
                let TargetType::Exists(z, body_ty) = &st else {
                    return Err(SyntaxError::new(pos, format!("cannot open a term of type {st}")));
                };
                let inner = scope.clone().with(y.clone(), body_ty.subst(z, &TargetType::Var(tx.clone())));
                let (tx, y) = (tx.clone(), y.clone());
                Ok((inner, Box::new(move |body| TargetTerm::let_pack(tx, y, s, body))))
            }
            _ => unreachable!("only lets are opened"),
        }
    }

    pub(crate) fn check(&mut self, scope: &TargetContext, raw: &RawTarget, goal: &TargetType) -> Result<TargetTerm, SyntaxError> {
        let pos = raw.pos;
        match (&raw.kind, goal) {
            (RawTargetKind::Var(x), _) if self.bound(scope, x).is_none() => {
                self.ctx = self.ctx.clone().with(x.clone(), goal.clone());
                Ok(TargetTerm::var(x.clone()))
            }
            (RawTargetKind::Lam(x, ann, b), TargetType::Neg(d)) => {
                if let Some(t) = ann {
                    if t != &**d {
                        return Err(mismatch(pos, d, t));
                    }
                }
                let body = self.check(&scope.clone().with(x.clone(), (**d).clone()), b, &TargetType::R)?;
                Ok(TargetTerm::lam(x.clone(), (**d).clone(), body))
            }
            (RawTargetKind::Pair(a, b), TargetType::Conj(at, bt)) => {
                let a = self.check(scope, a, at)?;
                let b = self.check(scope, b, bt)?;
                Ok(TargetTerm::pair(a, b))
            }
            (RawTargetKind::Pack(w, m, None), TargetType::Exists(x, body)) => {
                let m = self.check(scope, m, &body.subst(x, w))?;
                Ok(TargetTerm::pack(w.clone(), m, goal.clone()))
            }
            (RawTargetKind::LetPair(..) | RawTargetKind::LetPack(..), _) => {
                let (inner, rebuild) = self.open_let(scope, raw)?;
                let body = self.check(&inner, let_body(raw), goal)?;
                Ok(rebuild(body))
            }
            _ => {
                let (m, t) = self.infer(scope, raw)?;
                if &t == goal {
                    Ok(m)
                } else {
                    Err(mismatch(pos, goal, &t))
                }
            }
        }
    }
}

fn let_body(raw: &RawTarget) -> &RawTarget {
    match &raw.kind {
        RawTargetKind::LetPair(_, _, _, b) | RawTargetKind::LetPack(_, _, _, b) => b,
        _ => unreachable!("only lets have bodies"),
    }
}
