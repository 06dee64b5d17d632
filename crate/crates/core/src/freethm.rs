//! Relational parametricity as data: admissible relations over target
//! types, focal relations over λμ2 types, free theorems, and their
//! instantiation at graphs of focal maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::encodings::{in_sharp, TypeScheme};
use crate::focality::FocalityCertificate;
use crate::mu::{MuContext, MuTerm, MuType};
use crate::names::fresh;
use crate::normalizer::EqVerdict;
use crate::target::{TargetTerm, TargetType};
use crate::theory::{eq_mu, Equation, Theory, TheoryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeThmError {
    #[error("type variable {0} has no relation in the environment")]
    UnboundRelVar(String),
    #[error("free theorems need a closed type; {0} has free type variables")]
    OpenType(String),
    #[error("graph of {0} needs a focality certificate")]
    NotFocal(String),
    #[error("certificate is for {found}, not {expected}")]
    CertificateMismatch { expected: String, found: String },
    #[error("formula has no relation quantifier to instantiate")]
    NoRelationQuantifier,
}

/// A term of either calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Mu(MuTerm),
    Target(TargetTerm),
}

/// A type of either calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Mu(MuType),
    Target(TargetType),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Mu(m) => m.fmt(f),
            Expr::Target(t) => t.fmt(f),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Mu(m) => m.fmt(f),
            Ty::Target(t) => t.fmt(f),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Ty {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelKind {
    Admissible,
    Focal,
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelKind::Admissible => "admissible",
            RelKind::Focal => "focal",
        })
    }
}

/// Formulas about relations between terms. `RelVar`, `GraphRef` and
/// `IdentityRef` denote relations and appear as the `rel` of an atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "node")]
pub enum RelFormula {
    RelAtom { rel: Box<RelFormula>, left: Expr, right: Expr },
    Implies { premise: Box<RelFormula>, conclusion: Box<RelFormula> },
    And { left: Box<RelFormula>, right: Box<RelFormula> },
    ForallTerm { var: String, ty: Ty, body: Box<RelFormula> },
    ForallType { var: String, body: Box<RelFormula> },
    ForallRel { var: String, kind: RelKind, left: Ty, right: Ty, body: Box<RelFormula> },
    GraphRef { map: Expr, dom: Ty, cod: Ty, focality_required: bool },
    IdentityRef { ty: Ty },
    RelVar { name: String },
    Eq { left: Expr, right: Expr },
    ExistsTerm { var: String, ty: Ty, body: Box<RelFormula> },
    ExistsType { var: String, body: Box<RelFormula> },
    ExistsRel { var: String, kind: RelKind, left: Ty, right: Ty, body: Box<RelFormula> },
}

impl RelFormula {
    pub fn atom(rel: RelFormula, left: Expr, right: Expr) -> Self {
        RelFormula::RelAtom { rel: Box::new(rel), left, right }
    }

    pub fn implies(premise: RelFormula, conclusion: RelFormula) -> Self {
        RelFormula::Implies { premise: Box::new(premise), conclusion: Box::new(conclusion) }
    }

    pub fn and(left: RelFormula, right: RelFormula) -> Self {
        RelFormula::And { left: Box::new(left), right: Box::new(right) }
    }

    pub fn and_all(parts: impl IntoIterator<Item = RelFormula>) -> Self {
        let mut parts: Vec<RelFormula> = parts.into_iter().collect();
        let last = parts.pop().expect("nonempty conjunction");
        parts.into_iter().rev().fold(last, |acc, p| RelFormula::and(p, acc))
    }

    pub fn forall_term(var: impl Into<String>, ty: Ty, body: RelFormula) -> Self {
        RelFormula::ForallTerm { var: var.into(), ty, body: Box::new(body) }
    }

    pub fn forall_type(var: impl Into<String>, body: RelFormula) -> Self {
        RelFormula::ForallType { var: var.into(), body: Box::new(body) }
    }

    pub fn exists_term(var: impl Into<String>, ty: Ty, body: RelFormula) -> Self {
        RelFormula::ExistsTerm { var: var.into(), ty, body: Box::new(body) }
    }

    pub fn exists_type(var: impl Into<String>, body: RelFormula) -> Self {
        RelFormula::ExistsType { var: var.into(), body: Box::new(body) }
    }

    pub fn rel_var(name: impl Into<String>) -> Self {
        RelFormula::RelVar { name: name.into() }
    }

    pub fn eq(left: Expr, right: Expr) -> Self {
        RelFormula::Eq { left, right }
    }

    /// Relation variables used but not bound.
    pub fn free_rel_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_rels(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_rels(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        use RelFormula::*;
        match self {
            RelVar { name } => {
                if !bound.contains(name) {
                    out.insert(name.clone());
                }
            }
            RelAtom { rel, .. } => rel.collect_free_rels(bound, out),
            Implies { premise: a, conclusion: b } | And { left: a, right: b } => {
                a.collect_free_rels(bound, out);
                b.collect_free_rels(bound, out);
            }
            ForallTerm { body, .. } | ForallType { body, .. } | ExistsTerm { body, .. } | ExistsType { body, .. } => {
                body.collect_free_rels(bound, out)
            }
            ForallRel { var, body, .. } | ExistsRel { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free_rels(bound, out);
                bound.pop();
            }
            GraphRef { .. } | IdentityRef { .. } | Eq { .. } => {}
        }
    }

    fn map_exprs(&self, f: &dyn Fn(&Expr) -> Expr, g: &dyn Fn(&Ty) -> Ty) -> RelFormula {
        use RelFormula::*;
        let b = |x: &RelFormula| Box::new(x.map_exprs(f, g));
        match self {
            RelAtom { rel, left, right } => RelAtom { rel: b(rel), left: f(left), right: f(right) },
            Implies { premise, conclusion } => Implies { premise: b(premise), conclusion: b(conclusion) },
            And { left, right } => And { left: b(left), right: b(right) },
            ForallTerm { var, ty, body } => ForallTerm { var: var.clone(), ty: g(ty), body: b(body) },
            ExistsTerm { var, ty, body } => ExistsTerm { var: var.clone(), ty: g(ty), body: b(body) },
            ForallType { var, body } => ForallType { var: var.clone(), body: b(body) },
            ExistsType { var, body } => ExistsType { var: var.clone(), body: b(body) },
            ForallRel { var, kind, left, right, body } => ForallRel {
                var: var.clone(),
                kind: *kind,
                left: g(left),
                right: g(right),
                body: b(body),
            },
            ExistsRel { var, kind, left, right, body } => ExistsRel {
                var: var.clone(),
                kind: *kind,
                left: g(left),
                right: g(right),
                body: b(body),
            },
            GraphRef { map, dom, cod, focality_required } => GraphRef {
                map: f(map),
                dom: g(dom),
                cod: g(cod),
                focality_required: *focality_required,
            },
            IdentityRef { ty } => IdentityRef { ty: g(ty) },
            RelVar { name } => RelVar { name: name.clone() },
            Eq { left, right } => Eq { left: f(left), right: f(right) },
        }
    }

    /// Substitutes a λμ2 type for a type variable; binder names are
    /// fresh by construction, so no capture can occur.
    fn subst_mu_type(&self, x: &str, s: &MuType) -> RelFormula {
        self.map_exprs(
            &|e| match e {
                Expr::Mu(m) => Expr::Mu(m.subst_type(x, s)),
                other => other.clone(),
            },
            &|t| match t {
                Ty::Mu(m) => Ty::Mu(m.subst(x, s)),
                other => other.clone(),
            },
        )
    }

    fn subst_mu_term(&self, x: &str, n: &MuTerm) -> RelFormula {
        self.map_exprs(
            &|e| match e {
                Expr::Mu(m) => Expr::Mu(m.subst_term(x, n)),
                other => other.clone(),
            },
            &|t| t.clone(),
        )
    }

    fn subst_rel(&self, r: &str, rel: &RelFormula) -> RelFormula {
        use RelFormula::*;
        let b = |x: &RelFormula| Box::new(x.subst_rel(r, rel));
        match self {
            RelVar { name } if name == r => rel.clone(),
            RelAtom { rel: q, left, right } => RelAtom { rel: b(q), left: left.clone(), right: right.clone() },
            Implies { premise, conclusion } => Implies { premise: b(premise), conclusion: b(conclusion) },
            And { left, right } => And { left: b(left), right: b(right) },
            ForallTerm { var, ty, body } => ForallTerm { var: var.clone(), ty: ty.clone(), body: b(body) },
            ExistsTerm { var, ty, body } => ExistsTerm { var: var.clone(), ty: ty.clone(), body: b(body) },
            ForallType { var, body } => ForallType { var: var.clone(), body: b(body) },
            ExistsType { var, body } => ExistsType { var: var.clone(), body: b(body) },
            ForallRel { var, .. } | ExistsRel { var, .. } if var == r => self.clone(),
            ForallRel { var, kind, left, right, body } => ForallRel {
                var: var.clone(),
                kind: *kind,
                left: left.clone(),
                right: right.clone(),
                body: b(body),
            },
            ExistsRel { var, kind, left, right, body } => ExistsRel {
                var: var.clone(),
                kind: *kind,
                left: left.clone(),
                right: right.clone(),
                body: b(body),
            },
            other => other.clone(),
        }
    }
}

/// Binder annotations parenthesise quantified types.
fn annot(t: &Ty) -> String {
    match t {
        Ty::Mu(m @ MuType::Forall(..)) if !m.is_bottom() => format!("({t})"),
        Ty::Target(TargetType::Exists(..)) => format!("({t})"),
        _ => t.to_string(),
    }
}

// Formula precedence: 0 = anywhere, 1 = operand of ∧ or left of ⇒.
fn write_formula(out: &mut String, f: &RelFormula, prec: u8) {
    use RelFormula::*;
    let open = |out: &mut String| {
        if prec > 0 {
            out.push('(');
        }
    };
    let close = |out: &mut String| {
        if prec > 0 {
            out.push(')');
        }
    };
    match f {
        RelAtom { rel, left, right } => match &**rel {
            IdentityRef { ty } => out.push_str(&format!("id[{ty}]({left}, {right})")),
            r => {
                write_formula(out, r, 1);
                out.push_str(&format!("({left}, {right})"));
            }
        },
        RelVar { name } => out.push_str(name),
        GraphRef { map, .. } => out.push_str(&format!("⟨{map}⟩")),
        IdentityRef { ty } => out.push_str(&format!("id[{ty}]")),
        Eq { left, right } => out.push_str(&format!("{left} = {right}")),
        Implies { premise, conclusion } => {
            open(out);
            write_formula(out, premise, 1);
            out.push_str(" ⇒ ");
            write_formula(out, conclusion, 0);
            close(out);
        }
        And { left, right } => {
            open(out);
            write_formula(out, left, 1);
            out.push_str(" ∧ ");
            write_formula(out, right, if matches!(**right, And { .. }) { 0 } else { 1 });
            close(out);
        }
        ForallTerm { var, ty, body } | ExistsTerm { var, ty, body } => {
            open(out);
            let q = if matches!(f, ForallTerm { .. }) { '∀' } else { '∃' };
            out.push_str(&format!("{q}{var}:{}. ", annot(ty)));
            write_formula(out, body, 0);
            close(out);
        }
        ForallType { var, body } | ExistsType { var, body } => {
            open(out);
            let q = if matches!(f, ForallType { .. }) { '∀' } else { '∃' };
            out.push_str(&format!("{q}{var}. "));
            write_formula(out, body, 0);
            close(out);
        }
        ForallRel { var, kind, left, right, body } | ExistsRel { var, kind, left, right, body } => {
            open(out);
            let q = if matches!(f, ForallRel { .. }) { '∀' } else { '∃' };
            out.push_str(&format!("{q}{kind} {var}:{} ↔ {}. ", annot(left), annot(right)));
            write_formula(out, body, 0);
            close(out);
        }
    }
}

impl fmt::Display for RelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_formula(&mut out, self, 0);
        f.write_str(&out)
    }
}

/// The relation assigned to a type variable, with its two endpoints.
#[derive(Debug, Clone)]
pub struct RelBinding<T> {
    pub rel: RelFormula,
    pub left: T,
    pub right: T,
}

pub type TargetRelEnv = BTreeMap<String, RelBinding<TargetType>>;
pub type MuRelEnv = BTreeMap<String, RelBinding<MuType>>;

/// Deterministic supply of names avoiding everything seen so far.
struct Names {
    taken: BTreeSet<String>,
}

impl Names {
    fn fresh(&mut self, base: &str) -> String {
        let x = fresh(&format!("{base}1"), |c| self.taken.contains(c));
        self.taken.insert(x.clone());
        x
    }
}

fn target_sides(t: &TargetType, env: &TargetRelEnv) -> (TargetType, TargetType) {
    let mut l = t.clone();
    let mut r = t.clone();
    for (x, b) in env {
        l = l.subst(x, &b.left);
        r = r.subst(x, &b.right);
    }
    (l, r)
}

fn mu_sides(t: &MuType, env: &MuRelEnv) -> (MuType, MuType) {
    let mut l = t.clone();
    let mut r = t.clone();
    for (x, b) in env {
        l = l.subst(x, &b.left);
        r = r.subst(x, &b.right);
    }
    (l, r)
}

fn target_names(ty: &TargetType, env: &TargetRelEnv, u: &TargetTerm, v: &TargetTerm) -> Names {
    let mut taken = BTreeSet::new();
    ty.identifiers(&mut taken);
    u.identifiers(&mut taken);
    v.identifiers(&mut taken);
    for (x, b) in env {
        taken.insert(x.clone());
        b.left.identifiers(&mut taken);
        b.right.identifiers(&mut taken);
        taken.extend(b.rel.free_rel_vars());
    }
    Names { taken }
}

/// `u τ* v` for the admissible relation `τ*` determined by `env`.
pub fn target_relation(ty: &TargetType, env: &TargetRelEnv, u: &TargetTerm, v: &TargetTerm) -> Result<RelFormula, FreeThmError> {
    let mut names = target_names(ty, env, u, v);
    target_rel(ty, env, u, v, &mut names)
}

fn target_rel(ty: &TargetType, env: &TargetRelEnv, u: &TargetTerm, v: &TargetTerm, names: &mut Names) -> Result<RelFormula, FreeThmError> {
    let at = |e: &TargetTerm| Expr::Target(e.clone());
    match ty {
        TargetType::Var(x) => {
            let b = env.get(x).ok_or_else(|| FreeThmError::UnboundRelVar(x.clone()))?;
            Ok(RelFormula::atom(b.rel.clone(), at(u), at(v)))
        }
        TargetType::R => Ok(RelFormula::atom(
            RelFormula::IdentityRef { ty: Ty::Target(TargetType::R) },
            at(u),
            at(v),
        )),
        TargetType::Neg(t) => {
            let (l, r) = target_sides(t, env);
            let x = names.fresh("x");
            let y = names.fresh("y");
            let (tx, ty_) = (TargetTerm::var(x.clone()), TargetTerm::var(y.clone()));
            let hyp = target_rel(t, env, &tx, &ty_, names)?;
            let concl = RelFormula::atom(
                RelFormula::IdentityRef { ty: Ty::Target(TargetType::R) },
                Expr::Target(TargetTerm::app(u.clone(), tx)),
                Expr::Target(TargetTerm::app(v.clone(), ty_)),
            );
            Ok(RelFormula::forall_term(
                x,
                Ty::Target(l),
                RelFormula::forall_term(y, Ty::Target(r), RelFormula::implies(hyp, concl)),
            ))
        }
        TargetType::Conj(a, b) => {
            let (al, ar) = target_sides(a, env);
            let (bl, br) = target_sides(b, env);
            let x = names.fresh("x");
            let x2 = names.fresh("x");
            let y = names.fresh("y");
            let y2 = names.fresh("y");
            let vx = TargetTerm::var(x.clone());
            let vx2 = TargetTerm::var(x2.clone());
            let vy = TargetTerm::var(y.clone());
            let vy2 = TargetTerm::var(y2.clone());
            let body = RelFormula::and_all([
                RelFormula::eq(at(u), Expr::Target(TargetTerm::pair(vx.clone(), vx2.clone()))),
                RelFormula::eq(at(v), Expr::Target(TargetTerm::pair(vy.clone(), vy2.clone()))),
                target_rel(a, env, &vx, &vy, names)?,
                target_rel(b, env, &vx2, &vy2, names)?,
            ]);
            Ok(RelFormula::exists_term(
                x,
                Ty::Target(al),
                RelFormula::exists_term(
                    x2,
                    Ty::Target(bl),
                    RelFormula::exists_term(y, Ty::Target(ar), RelFormula::exists_term(y2, Ty::Target(br), body)),
                ),
            ))
        }
        TargetType::Exists(z, body_ty) => {
            let whole = target_sides(ty, env);
            let yl = names.fresh("Y");
            let yr = names.fresh("Z");
            let r = names.fresh("r");
            let (tl, tr) = (TargetType::Var(yl.clone()), TargetType::Var(yr.clone()));
            let mut inner = env.clone();
            inner.insert(
                z.clone(),
                RelBinding { rel: RelFormula::rel_var(r.clone()), left: tl.clone(), right: tr.clone() },
            );
            let (pl, pr) = target_sides(body_ty, &inner);
            let x = names.fresh("x");
            let y = names.fresh("y");
            let (vx, vy) = (TargetTerm::var(x.clone()), TargetTerm::var(y.clone()));
            let related = target_rel(body_ty, &inner, &vx, &vy, names)?;
            let body = RelFormula::and_all([
                RelFormula::eq(at(u), Expr::Target(TargetTerm::pack(tl.clone(), vx, whole.0))),
                RelFormula::eq(at(v), Expr::Target(TargetTerm::pack(tr.clone(), vy, whole.1))),
                RelFormula::ExistsRel {
                    var: r,
                    kind: RelKind::Admissible,
                    left: Ty::Target(tl),
                    right: Ty::Target(tr),
                    body: Box::new(related),
                },
            ]);
            Ok(RelFormula::exists_type(
                yl,
                RelFormula::exists_type(
                    yr,
                    RelFormula::exists_term(x, Ty::Target(pl), RelFormula::exists_term(y, Ty::Target(pr), body)),
                ),
            ))
        }
    }
}

/// `¬r`: the relation on negations induced by `r : τ ↔ τ'`.
pub fn neg_rel(rel: &RelFormula, left: &TargetType, right: &TargetType, u: &TargetTerm, v: &TargetTerm) -> RelFormula {
    let env = single("X", rel, left, right);
    target_relation(&TargetType::neg(TargetType::Var("X".into())), &env, u, v).expect("X is bound")
}

/// `r ∧ s` on pairs.
pub fn conj_rel(
    r: (&RelFormula, &TargetType, &TargetType),
    s: (&RelFormula, &TargetType, &TargetType),
    u: &TargetTerm,
    v: &TargetTerm,
) -> RelFormula {
    let mut env = single("X", r.0, r.1, r.2);
    env.insert("Y".into(), RelBinding { rel: s.0.clone(), left: s.1.clone(), right: s.2.clone() });
    let ty = TargetType::conj(TargetType::Var("X".into()), TargetType::Var("Y".into()));
    target_relation(&ty, &env, u, v).expect("X and Y are bound")
}

fn single(x: &str, rel: &RelFormula, left: &TargetType, right: &TargetType) -> TargetRelEnv {
    BTreeMap::from([(x.to_string(), RelBinding { rel: rel.clone(), left: left.clone(), right: right.clone() })])
}

/// `u σ* v` for the focal relation `σ*` determined by `env`.
pub fn mu_relation(ty: &MuType, env: &MuRelEnv, u: &MuTerm, v: &MuTerm) -> Result<RelFormula, FreeThmError> {
    let mut taken = BTreeSet::new();
    ty.identifiers(&mut taken);
    u.identifiers(&mut taken);
    v.identifiers(&mut taken);
    for (x, b) in env {
        taken.insert(x.clone());
        b.left.identifiers(&mut taken);
        b.right.identifiers(&mut taken);
        taken.extend(b.rel.free_rel_vars());
    }
    mu_rel(ty, env, u, v, &mut Names { taken })
}

fn mu_rel(ty: &MuType, env: &MuRelEnv, u: &MuTerm, v: &MuTerm, names: &mut Names) -> Result<RelFormula, FreeThmError> {
    match ty {
        MuType::Var(x) => {
            let b = env.get(x).ok_or_else(|| FreeThmError::UnboundRelVar(x.clone()))?;
            Ok(RelFormula::atom(b.rel.clone(), Expr::Mu(u.clone()), Expr::Mu(v.clone())))
        }
        MuType::Arrow(a, b) => {
            let (l, r) = mu_sides(a, env);
            let x = names.fresh("x");
            let y = names.fresh("y");
            let (vx, vy) = (MuTerm::var(x.clone()), MuTerm::var(y.clone()));
            let hyp = mu_rel(a, env, &vx, &vy, names)?;
            let concl = mu_rel(b, env, &MuTerm::app(u.clone(), vx), &MuTerm::app(v.clone(), vy), names)?;
            Ok(RelFormula::forall_term(
                x,
                Ty::Mu(l),
                RelFormula::forall_term(y, Ty::Mu(r), RelFormula::implies(hyp, concl)),
            ))
        }
        MuType::Forall(z, body) => {
            let yl = names.fresh("Y");
            let yr = names.fresh("Z");
            let r = names.fresh("r");
            let (tl, tr) = (MuType::var(yl.clone()), MuType::var(yr.clone()));
            let mut inner = env.clone();
            inner.insert(
                z.clone(),
                RelBinding { rel: RelFormula::rel_var(r.clone()), left: tl.clone(), right: tr.clone() },
            );
            let related = mu_rel(
                body,
                &inner,
                &MuTerm::ty_app(u.clone(), tl.clone()),
                &MuTerm::ty_app(v.clone(), tr.clone()),
                names,
            )?;
            Ok(RelFormula::forall_type(
                yl,
                RelFormula::forall_type(
                    yr,
                    RelFormula::ForallRel {
                        var: r,
                        kind: RelKind::Focal,
                        left: Ty::Mu(tl),
                        right: Ty::Mu(tr),
                        body: Box::new(related),
                    },
                ),
            ))
        }
    }
}

/// `∀x:σ. x σ* x` for closed `σ`, fully unfolded.
pub fn free_theorem(ty: &MuType) -> Result<RelFormula, FreeThmError> {
    if !ty.free_type_vars().is_empty() {
        return Err(FreeThmError::OpenType(ty.to_string()));
    }
    let mut taken = BTreeSet::new();
    ty.identifiers(&mut taken);
    let x = fresh("x", |c| taken.contains(c));
    let vx = MuTerm::var(x.clone());
    let body = mu_relation(ty, &BTreeMap::new(), &vx, &vx)?;
    Ok(RelFormula::forall_term(x, Ty::Mu(ty.clone()), body))
}

/// A conditional equation produced by graph instantiation.
#[derive(Debug, Clone, Serialize)]
pub struct GraphObligation {
    pub hypotheses: Vec<RelFormula>,
    pub conclusion: RelFormula,
    /// Present when the conclusion is an equation between λμ2 terms.
    pub equation: Option<Equation>,
}

/// Instantiates the leading focal relation quantifier with the graph
/// `⟨f⟩ : dom ↔ cod` and reduces graph atoms to equations.
pub fn instantiate_graph(
    formula: &RelFormula,
    f: &MuTerm,
    dom: &MuType,
    cod: &MuType,
    certificate: Option<&FocalityCertificate>,
) -> Result<Vec<GraphObligation>, FreeThmError> {
    let mut ctx = MuContext::new();
    let mut cur = formula;
    while let RelFormula::ForallTerm { var, ty: Ty::Mu(t), body } = cur {
        ctx = ctx.with_var(var.clone(), t.clone());
        cur = body;
    }
    let RelFormula::ForallType { var: yl, body } = cur else {
        return Err(FreeThmError::NoRelationQuantifier);
    };
    let RelFormula::ForallType { var: yr, body } = &**body else {
        return Err(FreeThmError::NoRelationQuantifier);
    };
    let RelFormula::ForallRel { var: r, kind, body, .. } = &**body else {
        return Err(FreeThmError::NoRelationQuantifier);
    };
    let required = *kind == RelKind::Focal;
    match certificate {
        None if required => return Err(FreeThmError::NotFocal(f.to_string())),
        Some(c) if c.subject != *f || c.dom != *dom || c.cod != *cod => {
            return Err(FreeThmError::CertificateMismatch {
                expected: format!("{f} : {dom} → {cod}"),
                found: format!("{} : {} → {}", c.subject, c.dom, c.cod),
            })
        }
        _ => {}
    }
    let graph = RelFormula::GraphRef {
        map: Expr::Mu(f.clone()),
        dom: Ty::Mu(dom.clone()),
        cod: Ty::Mu(cod.clone()),
        focality_required: required,
    };
    let body = body.subst_mu_type(yl, dom).subst_mu_type(yr, cod).subst_rel(r, &graph);
    let reduced = reduce_graphs(&body);
    let mut out = Vec::new();
    split(&reduced, ctx, Vec::new(), &mut out);
    Ok(out)
}

/// `u ⟨f⟩ v` becomes `f u = v`; `∀y. f u = y ⇒ B` becomes `B[f u/y]`.
fn reduce_graphs(f: &RelFormula) -> RelFormula {
    use RelFormula::*;
    match f {
        RelAtom { rel, left: Expr::Mu(u), right } if matches!(**rel, GraphRef { map: Expr::Mu(_), .. }) => {
            let GraphRef { map: Expr::Mu(m), .. } = &**rel else { unreachable!() };
            Eq { left: Expr::Mu(MuTerm::app(m.clone(), u.clone())), right: right.clone() }
        }
        ForallTerm { var, ty, body } => {
            let body = reduce_graphs(body);
            if let Implies { premise, conclusion } = &body {
                if let Eq { left: Expr::Mu(t), right: Expr::Mu(MuTerm::Var(y)) } = &**premise {
                    if y == var && !t.free_vars().contains(var) {
                        return conclusion.subst_mu_term(var, t);
                    }
                }
            }
            ForallTerm { var: var.clone(), ty: ty.clone(), body: Box::new(body) }
        }
        Implies { premise, conclusion } => RelFormula::implies(reduce_graphs(premise), reduce_graphs(conclusion)),
        And { left, right } => RelFormula::and(reduce_graphs(left), reduce_graphs(right)),
        ForallType { var, body } => RelFormula::forall_type(var.clone(), reduce_graphs(body)),
        ForallRel { var, kind, left, right, body } => ForallRel {
            var: var.clone(),
            kind: *kind,
            left: left.clone(),
            right: right.clone(),
            body: Box::new(reduce_graphs(body)),
        },
        other => other.clone(),
    }
}

fn split(f: &RelFormula, ctx: MuContext, hyps: Vec<RelFormula>, out: &mut Vec<GraphObligation>) {
    match f {
        RelFormula::ForallTerm { var, ty: Ty::Mu(t), body } => split(body, ctx.with_var(var.clone(), t.clone()), hyps, out),
        RelFormula::Implies { premise, conclusion } => {
            let mut hyps = hyps;
            hyps.push((**premise).clone());
            split(conclusion, ctx, hyps, out)
        }
        RelFormula::And { left, right } => {
            split(left, ctx.clone(), hyps.clone(), out);
            split(right, ctx, hyps, out)
        }
        RelFormula::Eq { left: Expr::Mu(l), right: Expr::Mu(r) } => out.push(GraphObligation {
            hypotheses: hyps,
            conclusion: f.clone(),
            equation: Some(Equation {
                name: format!("{l} = {r}"),
                ctx,
                lhs: l.clone(),
                rhs: r.clone(),
            }),
        }),
        other => out.push(GraphObligation { hypotheses: hyps, conclusion: other.clone(), equation: None }),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DischargeStatus {
    /// The oracle proves the equation outright.
    Confirmed,
    /// The equation stays an open obligation.
    Open { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Discharge {
    pub obligation: GraphObligation,
    #[serde(flatten)]
    pub status: DischargeStatus,
}

/// Runs each equation through `eq_mu`; anything unconfirmed stays open.
pub fn discharge(obligations: Vec<GraphObligation>, theory: Theory) -> Result<Vec<Discharge>, TheoryError> {
    obligations
        .into_iter()
        .map(|ob| {
            let status = match &ob.equation {
                None => DischargeStatus::Open { reason: "not an equation between λμ2 terms".into() },
                Some(eq) => match eq_mu(&eq.ctx, &eq.lhs, &eq.rhs, theory)? {
                    EqVerdict::Equal { .. } => DischargeStatus::Confirmed,
                    EqVerdict::Distinct { .. } if ob.hypotheses.is_empty() => DischargeStatus::Open {
                        reason: "sides have distinct canonical forms".into(),
                    },
                    EqVerdict::Distinct { .. } => DischargeStatus::Open {
                        reason: "holds only under its hypotheses".into(),
                    },
                },
            };
            Ok(Discharge { obligation: ob, status })
        })
        .collect()
}

/// A consequence of parametricity that the equality oracle does not decide.
#[derive(Debug, Clone, Serialize)]
pub struct ParametricityObligation {
    pub tag: &'static str,
    pub statement: String,
    pub formula: Option<RelFormula>,
    /// What the oracle says about the parts it can evaluate.
    pub probe: Option<String>,
}

fn verdict_word(v: &Result<EqVerdict, TheoryError>) -> &'static str {
    match v {
        Ok(EqVerdict::Equal { .. }) => "Equal",
        Ok(EqVerdict::Distinct { .. }) => "Distinct",
        Err(_) => "error",
    }
}

/// Parametricity-only facts, always emitted open.
pub fn parametricity_obligations() -> Vec<ParametricityObligation> {
    let a = MuType::var("a");
    let tx = TargetType::Var("X".into());
    let tau = TargetType::Var("t".into());
    let coalg = TargetType::exists(
        "X",
        TargetType::conj(TargetType::neg(TargetType::conj(tau.clone(), tx.clone())), tx),
    );
    let const_scheme = TypeScheme::new("X", a.clone());
    let mu = const_scheme.inductive();
    let mut out = vec![
        ParametricityObligation {
            tag: "final-coalgebra",
            statement: format!("{coalg} is a final coalgebra νX.¬t of ΛX.¬t when X occurs only negatively in t"),
            formula: None,
            probe: None,
        },
        ParametricityObligation {
            tag: "negation-isomorphism",
            statement: format!("{coalg} ≅ ¬t when X is not free in t; in particular (σ → ⊥)° ≅ ¬σ°"),
            formula: None,
            probe: None,
        },
        ParametricityObligation {
            tag: "bottom-focally-initial",
            statement: "A_σ is the unique focal map from ⊥ to σ".into(),
            formula: free_theorem(&MuType::bottom()).ok(),
            probe: None,
        },
        ParametricityObligation {
            tag: "inductive-initiality",
            statement: "in♯ : ¬¬F[μX.F[X]] → μX.F[X] is an initial F-algebra for positive F".into(),
            formula: free_theorem(&MuType::forall(
                "X",
                MuType::arrow(MuType::arrow(top(), MuType::var("X")), MuType::var("X")),
            ))
            .ok(),
            probe: None,
        },
        ParametricityObligation {
            tag: "continuation-monad-isomorphism",
            statement: "L σ ≅ ¬¬σ as monads".into(),
            formula: None,
            probe: None,
        },
        ParametricityObligation {
            tag: "fold-naturality",
            statement: "h ∘ fold a = fold b whenever h is focal and h ∘ a = b ∘ F[h]".into(),
            formula: None,
            probe: None,
        },
    ];
    // λn.n⊥ and in♯ for the constant scheme F[X] = a.
    let n = "n";
    let to_nn = MuTerm::lam(n, mu.clone(), MuTerm::ty_app(MuTerm::var(n), MuType::bottom()));
    let probe = in_sharp(&const_scheme).ok().map(|ins| {
        let nn = crate::encodings::neg_neg(&a);
        let ctx = MuContext::new();
        let back = MuTerm::compose(to_nn.clone(), ins.clone(), nn.clone());
        let id_nn = MuTerm::lam("m", nn.clone(), MuTerm::var("m"));
        let forth = MuTerm::compose(ins, to_nn.clone(), mu.clone());
        let id_mu = MuTerm::lam("m", mu.clone(), MuTerm::var("m"));
        let first = eq_mu(&ctx, &back, &id_nn, Theory::LambdaMu2P);
        let second = eq_mu(&ctx, &forth, &id_mu, Theory::LambdaMu2P);
        format!(
            "(λn.n ⊥) ∘ in♯ = id: {}; in♯ ∘ (λn.n ⊥) = id: {}",
            verdict_word(&first),
            verdict_word(&second)
        )
    });
    out.push(ParametricityObligation {
        tag: "church-encoding-inverse",
        statement: format!("λn.n ⊥ : {mu} → ¬¬a and in♯ are mutually inverse"),
        formula: None,
        probe,
    });
    out
}

/// `⊤ = ∀X.X → X`.
pub fn top() -> MuType {
    MuType::forall("X", MuType::arrow(MuType::var("X"), MuType::var("X")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::abort;
    use crate::focality::check_focal;

    #[test]
    fn bottom_theorem_text() {
        let f = free_theorem(&MuType::bottom()).unwrap();
        assert_eq!(f.to_string(), "∀x:⊥. ∀Y1. ∀Z1. ∀focal r1:Y1 ↔ Z1. r1(x [Y1], x [Z1])");
    }

    #[test]
    fn open_types_are_rejected() {
        assert!(matches!(free_theorem(&MuType::var("a")), Err(FreeThmError::OpenType(_))));
    }

    #[test]
    fn negation_clause_relates_applications() {
        let env = single("X", &RelFormula::rel_var("r"), &TargetType::R, &TargetType::R);
        let f = target_relation(&TargetType::neg(TargetType::Var("X".into())), &env, &TargetTerm::var("f"), &TargetTerm::var("g")).unwrap();
        assert_eq!(f.to_string(), "∀x1:R. ∀y1:R. r(x1, y1) ⇒ id[R](f x1, g y1)");
        assert!(matches!(
            target_relation(&TargetType::Var("W".into()), &env, &TargetTerm::var("f"), &TargetTerm::var("g")),
            Err(FreeThmError::UnboundRelVar(_))
        ));
    }

    #[test]
    fn abort_instance_is_confirmed() {
        let s = MuType::var("a");
        let cert = check_focal(&MuContext::new(), &abort(&s), &MuType::bottom(), &s, Theory::LambdaMu2P).unwrap();
        let obs = instantiate_graph(
            &free_theorem(&MuType::bottom()).unwrap(),
            &abort(&s),
            &MuType::bottom(),
            &s,
            cert.certificate(),
        )
        .unwrap();
        assert_eq!(obs.len(), 1);
        let eq = obs[0].equation.as_ref().unwrap();
        assert_eq!(eq.rhs, MuTerm::ty_app(MuTerm::var("x"), s.clone()));
        let done = discharge(obs, Theory::LambdaMu2P).unwrap();
        assert!(matches!(done[0].status, DischargeStatus::Confirmed));
    }

    #[test]
    fn graphs_of_focal_relations_need_certificates() {
        let s = MuType::var("a");
        let r = instantiate_graph(&free_theorem(&MuType::bottom()).unwrap(), &abort(&s), &MuType::bottom(), &s, None);
        assert!(matches!(r, Err(FreeThmError::NotFocal(_))));
    }

    #[test]
    fn obligations_stay_open() {
        let obs = parametricity_obligations();
        assert!(obs.len() >= 6);
        let tags: BTreeSet<_> = obs.iter().map(|o| o.tag).collect();
        assert_eq!(tags.len(), obs.len());
    }
}
