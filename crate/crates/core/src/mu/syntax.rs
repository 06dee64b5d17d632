//! Abstract syntax of second-order lambda-mu terms and types.
//!
//! Binders are named. Equality (`PartialEq`) is alpha-equivalence, so two
//! terms that differ only in the choice of bound identifiers compare equal.
//! Variables, names (continuation variables) and type variables live in
//! three separate namespaces.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::names::{bound_match, fresh};

/// `σ ::= X | σ → σ | ∀X.σ`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum MuType {
    Var(String),
    Arrow(Box<MuType>, Box<MuType>),
    Forall(String, Box<MuType>),
}

/// Core term grammar. `Mu(α, σ, β, M)` is `μα^σ.[β]M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum MuTerm {
    Var(String),
    Lam(String, MuType, Box<MuTerm>),
    App(Box<MuTerm>, Box<MuTerm>),
    TyLam(String, Box<MuTerm>),
    TyApp(Box<MuTerm>, MuType),
    Mu(String, MuType, String, Box<MuTerm>),
}

/// A named term `[β]M`, the body of a mu-abstraction.
#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub name: String,
    pub body: MuTerm,
}

impl MuType {
    pub fn var(x: impl Into<String>) -> Self {
        MuType::Var(x.into())
    }

    pub fn arrow(dom: MuType, cod: MuType) -> Self {
        MuType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn forall(x: impl Into<String>, body: MuType) -> Self {
        MuType::Forall(x.into(), Box::new(body))
    }

    /// `⊥ = ∀X.X`
    pub fn bottom() -> Self {
        MuType::forall("X", MuType::var("X"))
    }

    /// `¬σ = σ → ⊥`
    pub fn neg(self) -> Self {
        MuType::arrow(self, MuType::bottom())
    }

    pub fn is_bottom(&self) -> bool {
        *self == MuType::bottom()
    }

    /// Matches `σ → ⊥` and returns `σ`.
    pub fn as_neg(&self) -> Option<&MuType> {
        match self {
            MuType::Arrow(d, c) if c.is_bottom() => Some(d),
            _ => None,
        }
    }

    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            MuType::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            MuType::Arrow(a, b) => {
                a.collect_ftv(bound, out);
                b.collect_ftv(bound, out);
            }
            MuType::Forall(x, body) => {
                bound.push(x.clone());
                body.collect_ftv(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        self.free_type_vars().contains(x)
    }

    /// Every identifier mentioned, bound or free.
    pub fn identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            MuType::Var(x) => {
                out.insert(x.clone());
            }
            MuType::Arrow(a, b) => {
                a.identifiers(out);
                b.identifiers(out);
            }
            MuType::Forall(x, body) => {
                out.insert(x.clone());
                body.identifiers(out);
            }
        }
    }

    /// Capture-avoiding `self[σ/X]`.
    pub fn subst(&self, x: &str, s: &MuType) -> MuType {
        let fv = s.free_type_vars();
        self.subst_with(x, s, &fv)
    }

    fn subst_with(&self, x: &str, s: &MuType, fv: &BTreeSet<String>) -> MuType {
        match self {
            MuType::Var(y) if y == x => s.clone(),
            MuType::Var(_) => self.clone(),
            MuType::Arrow(a, b) => MuType::arrow(a.subst_with(x, s, fv), b.subst_with(x, s, fv)),
            MuType::Forall(y, _) if y == x => self.clone(),
            MuType::Forall(y, body) => {
                if !body.occurs_free(x) {
                    return self.clone();
                }
                if fv.contains(y) {
                    let mut taken = fv.clone();
                    body.identifiers(&mut taken);
                    taken.insert(x.to_string());
                    let y2 = fresh(y, |c| taken.contains(c));
                    let body2 = body.subst(y, &MuType::Var(y2.clone()));
                    MuType::forall(y2, body2.subst_with(x, s, fv))
                } else {
                    MuType::forall(y.clone(), body.subst_with(x, s, fv))
                }
            }
        }
    }

    pub(crate) fn alpha_eq_in(&self, other: &MuType, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (MuType::Var(a), MuType::Var(b)) => bound_match(env, a, b),
            (MuType::Arrow(a1, b1), MuType::Arrow(a2, b2)) => {
                a1.alpha_eq_in(a2, env) && b1.alpha_eq_in(b2, env)
            }
            (MuType::Forall(x, b1), MuType::Forall(y, b2)) => {
                env.push((x.clone(), y.clone()));
                let r = b1.alpha_eq_in(b2, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            MuType::Var(_) => 1,
            MuType::Arrow(a, b) => 1 + a.size() + b.size(),
            MuType::Forall(_, b) => 1 + b.size(),
        }
    }
}

impl PartialEq for MuType {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq_in(other, &mut Vec::new())
    }
}

impl Eq for MuType {}

/// Binder environments for alpha-comparison of terms.
#[derive(Default)]
struct AlphaEnv {
    vars: Vec<(String, String)>,
    names: Vec<(String, String)>,
    tys: Vec<(String, String)>,
}

impl MuTerm {
    pub fn var(x: impl Into<String>) -> Self {
        MuTerm::Var(x.into())
    }

    pub fn lam(x: impl Into<String>, ty: MuType, body: MuTerm) -> Self {
        MuTerm::Lam(x.into(), ty, Box::new(body))
    }

    pub fn app(f: MuTerm, a: MuTerm) -> Self {
        MuTerm::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: MuTerm, args: impl IntoIterator<Item = MuTerm>) -> Self {
        args.into_iter().fold(f, MuTerm::app)
    }

    pub fn ty_lam(x: impl Into<String>, body: MuTerm) -> Self {
        MuTerm::TyLam(x.into(), Box::new(body))
    }

    pub fn ty_app(f: MuTerm, ty: MuType) -> Self {
        MuTerm::TyApp(Box::new(f), ty)
    }

    pub fn mu(alpha: impl Into<String>, ty: MuType, beta: impl Into<String>, body: MuTerm) -> Self {
        MuTerm::Mu(alpha.into(), ty, beta.into(), Box::new(body))
    }

    /// The named term `⟦β⟧M ≡ μγ^⊥.[β]M` with `γ` fresh.
    pub fn named(beta: impl Into<String>, m: MuTerm) -> Self {
        let beta = beta.into();
        let fnames = m.free_names();
        let gamma = fresh("g", |c| c == beta || fnames.contains(c));
        MuTerm::mu(gamma, MuType::bottom(), beta, m)
    }

    /// The bold mu-abstraction `𝛍α^σ.M ≡ μα^σ.[α](M σ)` for `M : ⊥`.
    pub fn bold_mu(alpha: impl Into<String>, ty: MuType, m: MuTerm) -> Self {
        let alpha = alpha.into();
        MuTerm::mu(alpha.clone(), ty.clone(), alpha, MuTerm::ty_app(m, ty))
    }

    /// Composition `g ∘ f = λx^σ.g (f x)` where `f : σ → _`.
    pub fn compose(g: MuTerm, f: MuTerm, dom: MuType) -> Self {
        let mut taken = g.free_vars();
        taken.extend(f.free_vars());
        let x = fresh("x", |c| taken.contains(c));
        MuTerm::lam(x.clone(), dom, MuTerm::app(g, MuTerm::app(f, MuTerm::var(x))))
    }

    /// Recognises `μγ^⊥.[β]M` with `γ ∉ FN(M)`, returning `(β, M)`.
    pub fn as_named(&self) -> Option<(&str, &MuTerm)> {
        match self {
            MuTerm::Mu(g, ty, b, m) if ty.is_bottom() && g != b && !m.free_names().contains(g) => {
                Some((b, m))
            }
            _ => None,
        }
    }

    /// Recognises `μα^σ.[α](M σ)`, returning `(α, σ, M)`.
    pub fn as_bold_mu(&self) -> Option<(&str, &MuType, &MuTerm)> {
        match self {
            MuTerm::Mu(a, ty, b, body) if a == b => match &**body {
                MuTerm::TyApp(m, t) if t == ty => Some((a, ty, m)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            MuTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            MuTerm::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_fv(bound, out);
                bound.pop();
            }
            MuTerm::App(f, a) => {
                f.collect_fv(bound, out);
                a.collect_fv(bound, out);
            }
            MuTerm::TyLam(_, b) | MuTerm::TyApp(b, _) | MuTerm::Mu(_, _, _, b) => b.collect_fv(bound, out),
        }
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_fn(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fn(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            MuTerm::Var(_) => {}
            MuTerm::Lam(_, _, b) | MuTerm::TyLam(_, b) | MuTerm::TyApp(b, _) => b.collect_fn(bound, out),
            MuTerm::App(f, a) => {
                f.collect_fn(bound, out);
                a.collect_fn(bound, out);
            }
            MuTerm::Mu(a, _, b, body) => {
                bound.push(a.clone());
                if !bound.contains(b) {
                    out.insert(b.clone());
                }
                body.collect_fn(bound, out);
                bound.pop();
            }
        }
    }

    /// Free type variables, including those of binder annotations.
    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add = |t: &MuType, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for x in t.free_type_vars() {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        };
        match self {
            MuTerm::Var(_) => {}
            MuTerm::Lam(_, t, b) | MuTerm::Mu(_, t, _, b) => {
                add(t, bound, out);
                b.collect_ftv(bound, out);
            }
            MuTerm::TyApp(b, t) => {
                b.collect_ftv(bound, out);
                add(t, bound, out);
            }
            MuTerm::App(f, a) => {
                f.collect_ftv(bound, out);
                a.collect_ftv(bound, out);
            }
            MuTerm::TyLam(x, b) => {
                bound.push(x.clone());
                b.collect_ftv(bound, out);
                bound.pop();
            }
        }
    }

    /// Every identifier in any namespace, bound or free.
    pub fn identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            MuTerm::Var(x) => {
                out.insert(x.clone());
            }
            MuTerm::Lam(x, t, b) => {
                out.insert(x.clone());
                t.identifiers(out);
                b.identifiers(out);
            }
            MuTerm::App(f, a) => {
                f.identifiers(out);
                a.identifiers(out);
            }
            MuTerm::TyLam(x, b) => {
                out.insert(x.clone());
                b.identifiers(out);
            }
            MuTerm::TyApp(b, t) => {
                b.identifiers(out);
                t.identifiers(out);
            }
            MuTerm::Mu(a, t, b, body) => {
                out.insert(a.clone());
                out.insert(b.clone());
                t.identifiers(out);
                body.identifiers(out);
            }
        }
    }

    pub fn all_identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.identifiers(&mut out);
        out
    }

    fn alpha_eq_in(&self, other: &MuTerm, env: &mut AlphaEnv) -> bool {
        match (self, other) {
            (MuTerm::Var(a), MuTerm::Var(b)) => bound_match(&env.vars, a, b),
            (MuTerm::Lam(x, t1, b1), MuTerm::Lam(y, t2, b2)) => {
                if !t1.alpha_eq_in(t2, &mut env.tys) {
                    return false;
                }
                env.vars.push((x.clone(), y.clone()));
                let r = b1.alpha_eq_in(b2, env);
                env.vars.pop();
                r
            }
            (MuTerm::App(f1, a1), MuTerm::App(f2, a2)) => f1.alpha_eq_in(f2, env) && a1.alpha_eq_in(a2, env),
            (MuTerm::TyLam(x, b1), MuTerm::TyLam(y, b2)) => {
                env.tys.push((x.clone(), y.clone()));
                let r = b1.alpha_eq_in(b2, env);
                env.tys.pop();
                r
            }
            (MuTerm::TyApp(b1, t1), MuTerm::TyApp(b2, t2)) => {
                t1.alpha_eq_in(t2, &mut env.tys) && b1.alpha_eq_in(b2, env)
            }
            (MuTerm::Mu(a1, t1, n1, b1), MuTerm::Mu(a2, t2, n2, b2)) => {
                if !t1.alpha_eq_in(t2, &mut env.tys) {
                    return false;
                }
                env.names.push((a1.clone(), a2.clone()));
                let r = bound_match(&env.names, n1, n2) && b1.alpha_eq_in(b2, env);
                env.names.pop();
                r
            }
            _ => false,
        }
    }

    /// Number of term constructors (types not counted).
    pub fn size(&self) -> usize {
        match self {
            MuTerm::Var(_) => 1,
            MuTerm::Lam(_, _, b) | MuTerm::TyLam(_, b) | MuTerm::TyApp(b, _) | MuTerm::Mu(_, _, _, b) => {
                1 + b.size()
            }
            MuTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }
}

impl PartialEq for MuTerm {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq_in(other, &mut AlphaEnv::default())
    }
}

impl Eq for MuTerm {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalent_types_are_equal() {
        let a = MuType::forall("X", MuType::arrow(MuType::var("X"), MuType::var("Y")));
        let b = MuType::forall("Z", MuType::arrow(MuType::var("Z"), MuType::var("Y")));
        let c = MuType::forall("Y", MuType::arrow(MuType::var("Y"), MuType::var("Y")));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn bottom_and_negation_sugar() {
        assert_eq!(MuType::bottom(), MuType::forall("Q", MuType::var("Q")));
        let s = MuType::var("s");
        assert_eq!(s.clone().neg(), MuType::arrow(s.clone(), MuType::bottom()));
        assert_eq!(s.clone().neg().as_neg(), Some(&s));
    }

    #[test]
    fn type_subst_avoids_capture() {
        // (∀Y. X → Y)[Y/X] = ∀Y'. Y → Y'
        let t = MuType::forall("Y", MuType::arrow(MuType::var("X"), MuType::var("Y")));
        let r = t.subst("X", &MuType::var("Y"));
        let expect = MuType::forall("Z", MuType::arrow(MuType::var("Y"), MuType::var("Z")));
        assert_eq!(r, expect);
    }

    #[test]
    fn alpha_equivalence_distinguishes_namespaces() {
        let s = MuType::var("s");
        let t1 = MuTerm::mu("a", s.clone(), "a", MuTerm::var("x"));
        let t2 = MuTerm::mu("b", s.clone(), "b", MuTerm::var("x"));
        let t3 = MuTerm::mu("b", s, "a", MuTerm::var("x"));
        assert_eq!(t1, t2);
        assert_ne!(t1, t3);
    }

    #[test]
    fn sugar_recognisers() {
        let n = MuTerm::named("b", MuTerm::var("x"));
        assert_eq!(n.as_named().map(|(b, _)| b), Some("b"));
        let bm = MuTerm::bold_mu("a", MuType::var("s"), MuTerm::var("m"));
        assert!(bm.as_bold_mu().is_some());
    }
}
