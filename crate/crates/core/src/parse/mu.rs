//! λμ2 surface syntax.
//!
//! ```text
//! type ::= forall X. type | unary (-> type)?
//! unary ::= not unary | bot | X | ( type )
//! term ::= \x(:type)?. term | /\X. term | mu a(:type)?. [b] term
//!        | bmu a(:type)?. term | [b] term | app
//! app  ::= atom (atom | [type])* binder?
//! atom ::= x | ( term )
//! ```

use super::lexer::{Cursor, Pos, Tok};
use super::SyntaxError;
use crate::encodings::{mk_combinator, CATALOG};
use crate::mu::{typecheck_mu, MuContext, MuTerm, MuType};

/// Parsed term before annotations are filled in.
#[derive(Debug, Clone)]
pub struct RawMu {
    pub pos: Pos,
    pub kind: RawMuKind,
}

#[derive(Debug, Clone)]
pub enum RawMuKind {
    Var(String),
    Lam(String, Option<MuType>, Box<RawMu>),
    TyLam(String, Box<RawMu>),
    App(Box<RawMu>, Box<RawMu>),
    TyApp(Box<RawMu>, MuType),
    Mu(String, Option<MuType>, String, Box<RawMu>),
    Named(String, Box<RawMu>),
    BoldMu(String, Option<MuType>, Box<RawMu>),
}

pub(crate) fn parse_type(c: &mut Cursor) -> Result<MuType, SyntaxError> {
    if c.eat(&Tok::Forall) {
        let x = c.ident(&[])?;
        c.expect(&Tok::Dot)?;
        return Ok(MuType::forall(x, parse_type(c)?));
    }
    let dom = parse_unary(c)?;
    if c.eat(&Tok::Arrow) {
        Ok(MuType::arrow(dom, parse_type(c)?))
    } else {
        Ok(dom)
    }
}

fn parse_unary(c: &mut Cursor) -> Result<MuType, SyntaxError> {
    match c.peek().clone() {
        Tok::Not => {
            c.bump();
            Ok(parse_unary(c)?.neg())
        }
        Tok::Bot => {
            c.bump();
            Ok(MuType::bottom())
        }
        Tok::Ident(x) => {
            c.bump();
            Ok(MuType::var(x))
        }
        Tok::LParen => {
            c.bump();
            let t = parse_type(c)?;
            c.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::Forall => parse_type(c),
        other => Err(c.error(format!("expected a type, found {}", other.describe()))),
    }
}

fn annotation(c: &mut Cursor) -> Result<Option<MuType>, SyntaxError> {
    if c.eat(&Tok::Colon) {
        Ok(Some(parse_type(c)?))
    } else {
        Ok(None)
    }
}

fn starts_binder(t: &Tok) -> bool {
    matches!(t, Tok::Lambda | Tok::SlashBack | Tok::BigLambda | Tok::Mu | Tok::BoldMu)
}

pub(crate) fn parse_term(c: &mut Cursor) -> Result<RawMu, SyntaxError> {
    let pos = c.pos();
    let kind = match c.peek() {
        Tok::Lambda => {
            c.bump();
            let x = c.ident(&[])?;
            let t = annotation(c)?;
            c.expect(&Tok::Dot)?;
            RawMuKind::Lam(x, t, Box::new(parse_term(c)?))
        }
        Tok::SlashBack | Tok::BigLambda => {
            c.bump();
            let x = c.ident(&[])?;
            c.expect(&Tok::Dot)?;
            RawMuKind::TyLam(x, Box::new(parse_term(c)?))
        }
        Tok::Mu => {
            c.bump();
            let a = c.ident(&[])?;
            let t = annotation(c)?;
            c.expect(&Tok::Dot)?;
            c.expect(&Tok::LBrack)?;
            let b = c.ident(&[])?;
            c.expect(&Tok::RBrack)?;
            RawMuKind::Mu(a, t, b, Box::new(parse_term(c)?))
        }
        Tok::BoldMu => {
            c.bump();
            let a = c.ident(&[])?;
            let t = annotation(c)?;
            c.expect(&Tok::Dot)?;
            RawMuKind::BoldMu(a, t, Box::new(parse_term(c)?))
        }
        Tok::LBrack => {
            c.bump();
            let b = c.ident(&[])?;
            c.expect(&Tok::RBrack)?;
            RawMuKind::Named(b, Box::new(parse_term(c)?))
        }
        _ => return parse_app(c),
    };
    Ok(RawMu { pos, kind })
}

fn parse_atom(c: &mut Cursor) -> Result<RawMu, SyntaxError> {
    let pos = c.pos();
    match c.peek().clone() {
        Tok::Ident(x) => {
            c.bump();
            Ok(RawMu { pos, kind: RawMuKind::Var(x) })
        }
        Tok::LParen => {
            c.bump();
            let m = parse_term(c)?;
            c.expect(&Tok::RParen)?;
            Ok(m)
        }
        other => Err(c.error(format!("expected a term, found {}", other.describe()))),
    }
}

fn parse_app(c: &mut Cursor) -> Result<RawMu, SyntaxError> {
    let mut acc = parse_atom(c)?;
    loop {
        let pos = c.pos();
        let kind = match c.peek() {
            Tok::Ident(_) | Tok::LParen => RawMuKind::App(Box::new(acc), Box::new(parse_atom(c)?)),
            Tok::LBrack => {
                c.bump();
                let t = parse_type(c)?;
                c.expect(&Tok::RBrack)?;
                RawMuKind::TyApp(Box::new(acc), t)
            }
            t if starts_binder(t) => {
                let arg = parse_term(c)?;
                return Ok(RawMu { pos, kind: RawMuKind::App(Box::new(acc), Box::new(arg)) });
            }
            _ => return Ok(acc),
        };
        acc = RawMu { pos, kind };
    }
}

impl RawMu {
    /// The term itself, when every binder carries its annotation.
    pub fn into_term(self) -> Result<MuTerm, SyntaxError> {
        let missing = |what: &str| SyntaxError::new(self.pos, format!("{what} needs a type annotation here"));
        Ok(match self.kind {
            RawMuKind::Var(x) => MuTerm::var(x),
            RawMuKind::Lam(x, Some(t), b) => MuTerm::lam(x, t, b.into_term()?),
            RawMuKind::Lam(x, None, _) => return Err(missing(&format!("λ-bound `{x}`"))),
            RawMuKind::TyLam(x, b) => MuTerm::ty_lam(x, b.into_term()?),
            RawMuKind::App(f, a) => MuTerm::app(f.into_term()?, a.into_term()?),
            RawMuKind::TyApp(f, t) => MuTerm::ty_app(f.into_term()?, t),
            RawMuKind::Mu(a, Some(t), b, m) => MuTerm::mu(a, t, b, m.into_term()?),
            RawMuKind::Mu(a, None, _, _) => return Err(missing(&format!("μ-bound `{a}`"))),
            RawMuKind::Named(b, m) => MuTerm::named(b, m.into_term()?),
            RawMuKind::BoldMu(a, Some(t), m) => MuTerm::bold_mu(a, t, m.into_term()?),
            RawMuKind::BoldMu(a, None, _) => return Err(missing(&format!("𝛍-bound `{a}`"))),
        })
    }
}

/// Bidirectional elaboration against a context. Unknown free variables
/// met in checking position are added to the context with the expected
/// type; catalog names resolve to combinators, consuming their type
/// arguments.
pub(crate) struct Elab {
    pub ctx: MuContext,
}

enum SpineArg {
    Term(RawMu),
    Type(MuType),
}

fn mismatch(pos: Pos, expected: &MuType, found: &MuType) -> SyntaxError {
    SyntaxError::new(pos, format!("expected type {expected}, found {found}"))
}

impl Elab {
    fn bound(&self, scope: &MuContext, x: &str) -> Option<MuType> {
        scope.lookup_var(x).or_else(|| self.ctx.lookup_var(x)).cloned()
    }

    fn bound_name(&self, scope: &MuContext, a: &str) -> Option<MuType> {
        scope.lookup_name(a).or_else(|| self.ctx.lookup_name(a)).cloned()
    }

    fn combinator(&self, pos: Pos, name: &str, tys: &[MuType]) -> Result<(MuTerm, MuType), SyntaxError> {
        let m = mk_combinator(name, tys).map_err(|e| SyntaxError::new(pos, e.to_string()))?;
        let t = typecheck_mu(&MuContext::new(), &m).map_err(|e| SyntaxError::new(pos, e.to_string()))?;
        Ok((m, t))
    }

    pub(crate) fn infer(&mut self, scope: &MuContext, raw: &RawMu) -> Result<(MuTerm, MuType), SyntaxError> {
        let pos = raw.pos;
        match &raw.kind {
            RawMuKind::Var(x) => match self.bound(scope, x) {
                Some(t) => Ok((MuTerm::var(x.clone()), t)),
                None if CATALOG.iter().any(|e| e.name == x) => self.combinator(pos, x, &[]),
                None => Err(SyntaxError::new(pos, format!("cannot infer the type of free variable `{x}`"))),
            },
            RawMuKind::Lam(x, Some(t), b) => {
                let (body, bt) = self.infer(&scope.clone().with_var(x.clone(), t.clone()), b)?;
                Ok((MuTerm::lam(x.clone(), t.clone(), body), MuType::arrow(t.clone(), bt)))
            }
            RawMuKind::TyLam(x, b) => {
                let (body, bt) = self.infer(scope, b)?;
                Ok((MuTerm::ty_lam(x.clone(), body), MuType::forall(x.clone(), bt)))
            }
            RawMuKind::App(..) | RawMuKind::TyApp(..) => self.infer_spine(scope, raw),
            RawMuKind::Mu(a, Some(t), b, m) => {
                let inner = scope.clone().with_name(a.clone(), t.clone());
                let body = self.command(&inner, b, m)?;
                Ok((MuTerm::mu(a.clone(), t.clone(), b.clone(), body), t.clone()))
            }
            RawMuKind::Named(b, m) => {
                let body = self.command(scope, b, m)?;
                Ok((MuTerm::named(b.clone(), body), MuType::bottom()))
            }
            RawMuKind::BoldMu(a, Some(t), m) => {
                let body = self.check(&scope.clone().with_name(a.clone(), t.clone()), m, &MuType::bottom())?;
                Ok((MuTerm::bold_mu(a.clone(), t.clone(), body), t.clone()))
            }
            RawMuKind::Lam(x, None, _) => Err(SyntaxError::new(pos, format!("cannot infer the type of λ-bound `{x}`"))),
            RawMuKind::Mu(a, None, ..) | RawMuKind::BoldMu(a, None, _) => {
                Err(SyntaxError::new(pos, format!("cannot infer the type of μ-bound `{a}`")))
            }
        }
    }

    /// `[b] M`: checks `M` against `b`'s type, or records `b` as a free
    /// name of `M`'s type.
    fn command(&mut self, scope: &MuContext, b: &str, m: &RawMu) -> Result<MuTerm, SyntaxError> {
        match self.bound_name(scope, b) {
            Some(t) => self.check(scope, m, &t),
            None => {
                let (body, t) = self.infer(scope, m)?;
                self.ctx = self.ctx.clone().with_name(b.to_string(), t);
                Ok(body)
            }
        }
    }

    fn infer_spine(&mut self, scope: &MuContext, raw: &RawMu) -> Result<(MuTerm, MuType), SyntaxError> {
        let mut args = Vec::new();
        let mut head = raw;
        loop {
            match &head.kind {
                RawMuKind::App(f, a) => {
                    args.push((a.pos, SpineArg::Term((**a).clone())));
                    head = f;
                }
                RawMuKind::TyApp(f, t) => {
                    args.push((head.pos, SpineArg::Type(t.clone())));
                    head = f;
                }
                _ => break,
            }
        }
        args.reverse();
        let mut args = args.into_iter().peekable();
        let (mut acc, mut ty) = match &head.kind {
            RawMuKind::Var(x) if self.bound(scope, x).is_none() => {
                let Some(entry) = CATALOG.iter().find(|e| e.name == x) else {
                    return Err(SyntaxError::new(head.pos, format!("cannot infer the type of free variable `{x}`")));
                };
                let mut tys = Vec::new();
                while tys.len() < entry.params.len() {
                    match args.next() {
                        Some((_, SpineArg::Type(t))) => tys.push(t),
                        _ => {
                            return Err(SyntaxError::new(
                                head.pos,
                                format!("`{x}` takes {} type argument(s)", entry.params.len()),
                            ))
                        }
                    }
                }
                self.combinator(head.pos, x, &tys)?
            }
            _ => self.infer(scope, head)?,
        };
        for (pos, arg) in args {
            match (arg, &ty) {
                (SpineArg::Term(a), MuType::Arrow(d, c)) => {
                    let a = self.check(scope, &a, d)?;
                    let c = (**c).clone();
                    acc = MuTerm::app(acc, a);
                    ty = c;
                }
                (SpineArg::Type(s), MuType::Forall(x, b)) => {
                    let b = b.subst(x, &s);
                    acc = MuTerm::ty_app(acc, s);
                    ty = b;
                }
                (SpineArg::Term(_), t) => return Err(SyntaxError::new(pos, format!("applied a term of type {t} to an argument"))),
                (SpineArg::Type(_), t) => {
                    return Err(SyntaxError::new(pos, format!("applied a term of type {t} to a type")))
                }
            }
        }
        Ok((acc, ty))
    }

    pub(crate) fn check(&mut self, scope: &MuContext, raw: &RawMu, goal: &MuType) -> Result<MuTerm, SyntaxError> {
        let pos = raw.pos;
        match (&raw.kind, goal) {
            (RawMuKind::Var(x), _) if self.bound(scope, x).is_none() && !CATALOG.iter().any(|e| e.name == x) => {
                self.ctx = self.ctx.clone().with_var(x.clone(), goal.clone());
                Ok(MuTerm::var(x.clone()))
            }
            (RawMuKind::Lam(x, ann, b), MuType::Arrow(d, c)) => {
                if let Some(t) = ann {
                    if t != &**d {
                        return Err(mismatch(pos, d, t));
                    }
                }
                let body = self.check(&scope.clone().with_var(x.clone(), (**d).clone()), b, c)?;
                Ok(MuTerm::lam(x.clone(), (**d).clone(), body))
            }
            (RawMuKind::TyLam(x, b), MuType::Forall(y, body_ty)) if !goal.occurs_free(x) && !scope.free_type_vars().contains(x) => {
                let body = self.check(scope, b, &body_ty.subst(y, &MuType::var(x.clone())))?;
                Ok(MuTerm::ty_lam(x.clone(), body))
            }
            (RawMuKind::Mu(a, None, b, m), _) => {
                let inner = scope.clone().with_name(a.clone(), goal.clone());
                let body = self.command(&inner, b, m)?;
                Ok(MuTerm::mu(a.clone(), goal.clone(), b.clone(), body))
            }
            (RawMuKind::BoldMu(a, None, m), _) => {
                let body = self.check(&scope.clone().with_name(a.clone(), goal.clone()), m, &MuType::bottom())?;
                Ok(MuTerm::bold_mu(a.clone(), goal.clone(), body))
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
