//! Capture-avoiding substitution for all three namespaces, and mixed
//! substitution `M[[β](− N)/[α](−)]`.

use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{MuTerm, MuType};
use crate::names::fresh;

/// What each `[α]L` becomes under mixed substitution.
#[derive(Clone, Debug, PartialEq)]
pub enum MixedMode {
    /// `[β](L N)`
    AppArg(MuTerm),
    /// `[β](L σ)`
    TyArg(MuType),
    /// `[β]L`
    Rename,
}

impl MuType {
    /// Simultaneous capture-avoiding substitution of type variables.
    pub fn subst_map(&self, map: &BTreeMap<String, MuType>) -> MuType {
        if map.is_empty() {
            return self.clone();
        }
        let mut avoid = BTreeSet::new();
        for t in map.values() {
            avoid.extend(t.free_type_vars());
        }
        subst_type_in(self, map, &avoid)
    }
}

fn subst_type_in(t: &MuType, map: &BTreeMap<String, MuType>, avoid: &BTreeSet<String>) -> MuType {
    match t {
        MuType::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        MuType::Arrow(a, b) => MuType::arrow(subst_type_in(a, map, avoid), subst_type_in(b, map, avoid)),
        MuType::Forall(x, body) => {
            let mut inner = map.clone();
            let x2 = if avoid.contains(x) {
                let mut taken = avoid.clone();
                body.identifiers(&mut taken);
                taken.extend(map.keys().cloned());
                let x2 = fresh(x, |c| taken.contains(c));
                inner.insert(x.clone(), MuType::Var(x2.clone()));
                x2
            } else {
                inner.remove(x);
                x.clone()
            };
            if inner.is_empty() {
                return MuType::forall(x2, (**body).clone());
            }
            let mut avoid2 = avoid.clone();
            avoid2.insert(x2.clone());
            MuType::forall(x2, subst_type_in(body, &inner, &avoid2))
        }
    }
}

/// A simultaneous substitution on terms. Binders that would capture a free
/// identifier of the range are renamed on the way down.
#[derive(Clone, Default)]
struct Subst {
    vars: BTreeMap<String, MuTerm>,
    tys: BTreeMap<String, MuType>,
    names: BTreeMap<String, String>,
    mixed: Option<(String, String, MixedMode)>,
    avoid_vars: BTreeSet<String>,
    avoid_tys: BTreeSet<String>,
    avoid_names: BTreeSet<String>,
}

impl Subst {
    fn finish(mut self) -> Self {
        for n in self.vars.values() {
            self.avoid_vars.extend(n.free_vars());
            self.avoid_tys.extend(n.free_type_vars());
            self.avoid_names.extend(n.free_names());
        }
        for t in self.tys.values() {
            self.avoid_tys.extend(t.free_type_vars());
        }
        self.avoid_names.extend(self.names.values().cloned());
        if let Some((_, beta, mode)) = &self.mixed {
            self.avoid_names.insert(beta.clone());
            match mode {
                MixedMode::AppArg(n) => {
                    self.avoid_vars.extend(n.free_vars());
                    self.avoid_tys.extend(n.free_type_vars());
                    self.avoid_names.extend(n.free_names());
                }
                MixedMode::TyArg(t) => self.avoid_tys.extend(t.free_type_vars()),
                MixedMode::Rename => {}
            }
        }
        self
    }

    fn is_identity(&self) -> bool {
        self.vars.is_empty() && self.tys.is_empty() && self.names.is_empty() && self.mixed.is_none()
    }

    fn ty(&self, t: &MuType) -> MuType {
        if self.tys.is_empty() {
            t.clone()
        } else {
            subst_type_in(t, &self.tys, &self.avoid_tys)
        }
    }

    fn taken(&self, body: &MuTerm, avoid: &BTreeSet<String>) -> BTreeSet<String> {
        let mut taken = avoid.clone();
        body.identifiers(&mut taken);
        taken.extend(self.vars.keys().cloned());
        taken.extend(self.tys.keys().cloned());
        taken.extend(self.names.keys().cloned());
        taken
    }

    fn bind_var(&self, x: &str, body: &MuTerm) -> (String, Subst) {
        let mut inner = self.clone();
        if self.avoid_vars.contains(x) {
            let taken = self.taken(body, &self.avoid_vars);
            let x2 = fresh(x, |c| taken.contains(c));
            inner.vars.insert(x.to_string(), MuTerm::Var(x2.clone()));
            inner.avoid_vars.insert(x2.clone());
            (x2, inner)
        } else {
            inner.vars.remove(x);
            (x.to_string(), inner)
        }
    }

    fn bind_ty(&self, x: &str, body: &MuTerm) -> (String, Subst) {
        let mut inner = self.clone();
        if self.avoid_tys.contains(x) {
            let taken = self.taken(body, &self.avoid_tys);
            let x2 = fresh(x, |c| taken.contains(c));
            inner.tys.insert(x.to_string(), MuType::Var(x2.clone()));
            inner.avoid_tys.insert(x2.clone());
            (x2, inner)
        } else {
            inner.tys.remove(x);
            (x.to_string(), inner)
        }
    }

    fn bind_name(&self, a: &str, body: &MuTerm) -> (String, Subst) {
        let mut inner = self.clone();
        if matches!(&inner.mixed, Some((alpha, _, _)) if alpha == a) {
            inner.mixed = None;
        }
        if self.avoid_names.contains(a) {
            let taken = self.taken(body, &self.avoid_names);
            let a2 = fresh(a, |c| taken.contains(c));
            inner.names.insert(a.to_string(), a2.clone());
            inner.avoid_names.insert(a2.clone());
            (a2, inner)
        } else {
            inner.names.remove(a);
            (a.to_string(), inner)
        }
    }

    fn term(&self, m: &MuTerm) -> MuTerm {
        if self.is_identity() {
            return m.clone();
        }
        match m {
            MuTerm::Var(x) => self.vars.get(x).cloned().unwrap_or_else(|| m.clone()),
            MuTerm::Lam(x, t, body) => {
                let t2 = self.ty(t);
                let (x2, inner) = self.bind_var(x, body);
                MuTerm::lam(x2, t2, inner.term(body))
            }
            MuTerm::App(f, a) => MuTerm::app(self.term(f), self.term(a)),
            MuTerm::TyLam(x, body) => {
                let (x2, inner) = self.bind_ty(x, body);
                MuTerm::ty_lam(x2, inner.term(body))
            }
            MuTerm::TyApp(f, t) => MuTerm::ty_app(self.term(f), self.ty(t)),
            MuTerm::Mu(a, t, b, body) => {
                let t2 = self.ty(t);
                let (a2, inner) = self.bind_name(a, body);
                let body2 = inner.term(body);
                match &inner.mixed {
                    Some((alpha, beta, mode)) if alpha == b => {
                        let body3 = match mode {
                            MixedMode::AppArg(n) => MuTerm::app(body2, n.clone()),
                            MixedMode::TyArg(s) => MuTerm::ty_app(body2, s.clone()),
                            MixedMode::Rename => body2,
                        };
                        MuTerm::mu(a2, t2, beta.clone(), body3)
                    }
                    _ => {
                        let b2 = inner.names.get(b).cloned().unwrap_or_else(|| b.clone());
                        MuTerm::mu(a2, t2, b2, body2)
                    }
                }
            }
        }
    }
}

impl MuTerm {
    /// Capture-avoiding `self[n/x]`.
    pub fn subst_term(&self, x: &str, n: &MuTerm) -> MuTerm {
        let mut s = Subst::default();
        s.vars.insert(x.to_string(), n.clone());
        s.finish().term(self)
    }

    /// Capture-avoiding `self[σ/X]` on every annotation.
    pub fn subst_type(&self, x: &str, ty: &MuType) -> MuTerm {
        let mut s = Subst::default();
        s.tys.insert(x.to_string(), ty.clone());
        s.finish().term(self)
    }

    /// Simultaneous substitution of variables and type variables.
    pub fn subst_many(&self, vars: &BTreeMap<String, MuTerm>, tys: &BTreeMap<String, MuType>) -> MuTerm {
        let s = Subst {
            vars: vars.clone(),
            tys: tys.clone(),
            ..Subst::default()
        };
        s.finish().term(self)
    }

    /// `self[β/α]` on free occurrences of the name `α`.
    pub fn rename_name(&self, alpha: &str, beta: &str) -> MuTerm {
        let mut s = Subst::default();
        s.names.insert(alpha.to_string(), beta.to_string());
        s.finish().term(self)
    }

    /// Mixed substitution: every `[α]L` with `α` free becomes `[β](L′ N)`,
    /// `[β](L′ σ)` or `[β]L′`, where `L′` is `L` after the same substitution.
    pub fn mixed_subst(&self, alpha: &str, beta: &str, mode: MixedMode) -> MuTerm {
        let s = Subst {
            mixed: Some((alpha.to_string(), beta.to_string(), mode)),
            ..Subst::default()
        };
        s.finish().term(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> MuTerm {
        MuTerm::var(x)
    }

    fn s() -> MuType {
        MuType::var("s")
    }

    #[test]
    fn subst_replaces_free_occurrence() {
        assert_eq!(v("x").subst_term("x", &v("n")), v("n"));
        let m = MuTerm::lam("y", s(), v("x"));
        assert_eq!(m.subst_term("x", &v("n")), MuTerm::lam("y", s(), v("n")));
    }

    #[test]
    fn subst_avoids_variable_capture() {
        let m = MuTerm::lam("y", s(), MuTerm::app(v("x"), v("y")));
        let r = m.subst_term("x", &v("y"));
        match &r {
            MuTerm::Lam(z, _, body) => {
                assert_ne!(z, "y");
                assert_eq!(**body, MuTerm::app(v("y"), v(z)));
            }
            _ => panic!("expected lambda"),
        }
    }

    #[test]
    fn subst_avoids_name_and_type_capture() {
        let n = MuTerm::named("a", MuTerm::ty_app(v("z"), MuType::var("X")));
        let m = MuTerm::ty_lam("X", MuTerm::mu("a", s(), "a", v("x")));
        let r = m.subst_term("x", &n);
        assert_eq!(r.free_names(), ["a".to_string()].into_iter().collect());
        assert!(r.free_type_vars().contains("X"));
    }

    #[test]
    fn bound_occurrences_untouched() {
        let m = MuTerm::lam("x", s(), v("x"));
        assert_eq!(m.subst_term("x", &v("n")), m);
    }

    #[test]
    fn mixed_subst_basic() {
        let m = MuTerm::mu("g", MuType::bottom(), "a", v("x"));
        let r = m.mixed_subst("a", "b", MixedMode::AppArg(v("n")));
        assert_eq!(r, MuTerm::mu("g", MuType::bottom(), "b", MuTerm::app(v("x"), v("n"))));
    }

    #[test]
    fn mixed_subst_nested_inside_first() {
        // [a](f (mu g.[a]y)) ↦ [b]((f (mu g.[b](y n))) n)
        let inner = MuTerm::mu("g", s(), "a", v("y"));
        let m = MuTerm::mu("h", s(), "a", MuTerm::app(v("f"), inner));
        let r = m.mixed_subst("a", "b", MixedMode::AppArg(v("n")));
        let inner2 = MuTerm::mu("g", s(), "b", MuTerm::app(v("y"), v("n")));
        let expect = MuTerm::mu("h", s(), "b", MuTerm::app(MuTerm::app(v("f"), inner2), v("n")));
        assert_eq!(r, expect);
    }

    #[test]
    fn mixed_subst_respects_shadowing() {
        let m = MuTerm::mu("a", s(), "a", v("x"));
        assert_eq!(m.mixed_subst("a", "b", MixedMode::Rename), m);
    }

    #[test]
    fn mixed_subst_noop_when_absent() {
        let m = MuTerm::mu("c", s(), "c", v("x"));
        assert_eq!(m.mixed_subst("a", "b", MixedMode::TyArg(s())), m);
    }
}
