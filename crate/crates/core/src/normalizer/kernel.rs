//! The rewrite kernel. Every change the normalizer makes to a term goes
//! through [`apply_step`], which checks the side conditions of one axiom
//! instance. A trace of steps can therefore be replayed independently of
//! the strategy that produced it.
//!
//! Rules (each an instance of a βη axiom, its reverse, or a consequence):
//!
//! | rule        | rewrite                                                        |
//! |-------------|----------------------------------------------------------------|
//! | `beta`      | `(λx.M) N → M[N/x]`                                            |
//! | `beta-pair` | `let ⟨x,y⟩ = ⟨L,M⟩ in N → N[L/x, M/y]`                          |
//! | `beta-pack` | `let ⟨X,x⟩ = ⟨τ,M⟩ in N → N[τ/X, M/x]`                          |
//! | `comm-app`  | `(let p = M in N) P → let p = M in N P`                         |
//! | `comm-let`  | `let p = (let q = M in N) in L → let q = M in let p = N in L`   |
//! | `eta`       | `λx.M x → M` (`x ∉ FV(M)`)                                      |
//! | `eta-exp x` | `M → λx.M x` for `M : ¬τ`                                       |
//! | `split v a b` | `M → let ⟨a,b⟩ = v in M[⟨a,b⟩/v]`                             |
//! | `split-pack v X a` | `M → let ⟨X,a⟩ = v in M[⟨X,a⟩/v]`                      |
//! | `join`      | `let ⟨x,y⟩ = M in N[⟨x,y⟩/z] → N[M/z]`                          |
//! | `join-pack` | `let ⟨X,x⟩ = M in N[⟨X,x⟩/z] → N[M/z]`                          |
//! | `star`      | `M → ⋆` for `M : ∃X.X` (parametric mode)                        |
//! | `unstar v`  | `⋆ → v` for `v : ∃X.X` (parametric mode)                        |
//!
//! The commuting conversions are derivable from the η-axioms for `∧` and
//! `∃` together with β.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::path::{self, Path};
use crate::names::fresh;
use crate::target::{typecheck_target, Mode, TargetContext, TargetTerm, TargetType, TargetTypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Beta,
    BetaPair,
    BetaPack,
    CommApp,
    CommLet,
    Eta,
    EtaExp,
    Split,
    SplitPack,
    Join,
    JoinPack,
    Star,
    Unstar,
}

const RULES: [(Rule, &str, usize); 13] = [
    (Rule::Beta, "beta", 0),
    (Rule::BetaPair, "beta-pair", 0),
    (Rule::BetaPack, "beta-pack", 0),
    (Rule::CommApp, "comm-app", 0),
    (Rule::CommLet, "comm-let", 0),
    (Rule::Eta, "eta", 0),
    (Rule::EtaExp, "eta-exp", 1),
    (Rule::Split, "split", 3),
    (Rule::SplitPack, "split-pack", 3),
    (Rule::Join, "join", 0),
    (Rule::JoinPack, "join-pack", 0),
    (Rule::Star, "star", 0),
    (Rule::Unstar, "unstar", 1),
];

impl Rule {
    pub fn name(self) -> &'static str {
        RULES.iter().find(|(r, _, _)| *r == self).map(|(_, n, _)| *n).expect("every rule is listed")
    }

    pub fn arity(self) -> usize {
        RULES.iter().find(|(r, _, _)| *r == self).map(|(_, _, a)| *a).expect("every rule is listed")
    }
}

impl FromStr for Rule {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RULES
            .iter()
            .find(|(_, n, _)| *n == s)
            .map(|(r, _, _)| *r)
            .ok_or_else(|| KernelError::UnknownRule(s.to_string()))
    }
}

/// One rewrite: a rule applied at a position, with the fresh identifiers it
/// introduces (if any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub path: Path,
    pub args: Vec<String>,
}

impl Step {
    pub fn new(rule: Rule, path: Path) -> Self {
        Step {
            rule,
            path,
            args: Vec::new(),
        }
    }

    pub fn with_args(rule: Rule, path: Path, args: &[&str]) -> Self {
        Step {
            rule,
            path,
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rule.name(), self.path)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

impl FromStr for Step {
    type Err = KernelError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut words = line.split_whitespace();
        let rule: Rule = words.next().ok_or_else(|| KernelError::Malformed(line.to_string()))?.parse()?;
        let path = words
            .next()
            .and_then(Path::parse)
            .ok_or_else(|| KernelError::Malformed(line.to_string()))?;
        let args: Vec<String> = words.map(str::to_string).collect();
        if args.len() != rule.arity() {
            return Err(KernelError::Malformed(line.to_string()));
        }
        Ok(Step { rule, path, args })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("malformed step `{0}`")]
    Malformed(String),
    #[error("no subterm at position {0}")]
    BadPath(String),
    #[error("{rule} does not apply at {path}: {reason}")]
    NotApplicable {
        rule: &'static str,
        path: String,
        reason: String,
    },
    #[error(transparent)]
    Typing(#[from] TargetTypeError),
}

/// The typing context in force at `path` inside `root`.
pub fn context_at(root: &TargetTerm, ctx: &TargetContext, mode: Mode, at: &Path) -> Result<TargetContext, KernelError> {
    let mut ctx = ctx.clone();
    let mut t = root;
    for &i in &at.0 {
        match (t, i) {
            (TargetTerm::Lam(x, ty, _), 0) => ctx.vars.push((x.clone(), ty.clone())),
            (TargetTerm::LetPair(x, y, s, _), 1) => match typecheck_target(&ctx, s, mode)? {
                TargetType::Conj(a, b) => {
                    ctx.vars.push((x.clone(), *a));
                    ctx.vars.push((y.clone(), *b));
                }
                other => {
                    return Err(TargetTypeError::TypeMismatch {
                        rule: "pair elimination",
                        expected: "a conjunction".into(),
                        found: other.to_string(),
                    }
                    .into())
                }
            },
            (TargetTerm::LetPack(tx, x, s, _), 1) => {
                let ts = typecheck_target(&ctx, s, mode)?;
                let opened = ts.open_exists(tx).ok_or_else(|| TargetTypeError::TypeMismatch {
                    rule: "unpack",
                    expected: "an existential".into(),
                    found: ts.to_string(),
                })?;
                ctx.vars.push((x.clone(), opened));
            }
            _ => {}
        }
        t = path::child(t, i).ok_or_else(|| KernelError::BadPath(at.to_string()))?;
    }
    Ok(ctx)
}

fn not_applicable(rule: Rule, at: &Path, reason: impl Into<String>) -> KernelError {
    KernelError::NotApplicable {
        rule: rule.name(),
        path: at.to_string(),
        reason: reason.into(),
    }
}

/// Renames the binders of a `let` so that they avoid `avoid` (term
/// variables) and `avoid_tys` (type variables).
fn freshen_let(t: &TargetTerm, avoid: &BTreeSet<String>, avoid_tys: &BTreeSet<String>) -> TargetTerm {
    let mut taken: BTreeSet<String> = avoid.iter().chain(avoid_tys.iter()).cloned().collect();
    t.identifiers(&mut taken);
    match t {
        TargetTerm::LetPair(x, y, s, b) => {
            let mut b = (**b).clone();
            let mut names = [x.clone(), y.clone()];
            for n in names.iter_mut() {
                if avoid.contains(n) {
                    let n2 = fresh(n, |c| taken.contains(c));
                    taken.insert(n2.clone());
                    b = b.subst_term(n, &TargetTerm::Var(n2.clone()));
                    *n = n2;
                }
            }
            let [x, y] = names;
            TargetTerm::let_pair(x, y, (**s).clone(), b)
        }
        TargetTerm::LetPack(tx, x, s, b) => {
            let mut b = (**b).clone();
            let mut tx = tx.clone();
            let mut x = x.clone();
            if avoid_tys.contains(&tx) {
                let t2 = fresh(&tx, |c| taken.contains(c));
                taken.insert(t2.clone());
                b = b.subst_type(&tx, &TargetType::Var(t2.clone()));
                tx = t2;
            }
            if avoid.contains(&x) {
                let x2 = fresh(&x, |c| taken.contains(c));
                b = b.subst_term(&x, &TargetTerm::Var(x2.clone()));
                x = x2;
            }
            TargetTerm::let_pack(tx, x, (**s).clone(), b)
        }
        _ => t.clone(),
    }
}

fn let_parts(t: &TargetTerm) -> Option<(&TargetTerm, &TargetTerm)> {
    match t {
        TargetTerm::LetPair(_, _, s, b) | TargetTerm::LetPack(_, _, s, b) => Some((s, b)),
        _ => None,
    }
}

fn rebuild_let(t: &TargetTerm, s: TargetTerm, b: TargetTerm) -> TargetTerm {
    match t {
        TargetTerm::LetPair(x, y, _, _) => TargetTerm::let_pair(x.clone(), y.clone(), s, b),
        TargetTerm::LetPack(tx, x, _, _) => TargetTerm::let_pack(tx.clone(), x.clone(), s, b),
        _ => unreachable!("rebuild_let on a non-let"),
    }
}

/// Replaces every occurrence of `target` that refers to the binders `bound`
/// (term variables) and `bound_tys` (type variables) by `Var(z)`.
fn abstract_literal(
    t: &TargetTerm,
    target: &TargetTerm,
    bound: &[&str],
    bound_tys: &[&str],
    z: &str,
) -> TargetTerm {
    if t == target {
        return TargetTerm::var(z);
    }
    let shadows = |names: &[&String]| names.iter().any(|n| bound.contains(&n.as_str()));
    let rec = |u: &TargetTerm| abstract_literal(u, target, bound, bound_tys, z);
    match t {
        TargetTerm::Var(_) | TargetTerm::Star => t.clone(),
        TargetTerm::Lam(x, ty, b) => {
            if shadows(&[x]) {
                t.clone()
            } else {
                TargetTerm::lam(x.clone(), ty.clone(), rec(b))
            }
        }
        TargetTerm::App(a, b) => TargetTerm::app(rec(a), rec(b)),
        TargetTerm::Pair(a, b) => TargetTerm::pair(rec(a), rec(b)),
        TargetTerm::Pack(w, m, ty) => TargetTerm::pack(w.clone(), rec(m), ty.clone()),
        TargetTerm::LetPair(x, y, s, b) => {
            let b2 = if shadows(&[x, y]) { (**b).clone() } else { rec(b) };
            TargetTerm::let_pair(x.clone(), y.clone(), rec(s), b2)
        }
        TargetTerm::LetPack(tx, x, s, b) => {
            let b2 = if shadows(&[x]) || bound_tys.contains(&tx.as_str()) {
                (**b).clone()
            } else {
                rec(b)
            };
            TargetTerm::let_pack(tx.clone(), x.clone(), rec(s), b2)
        }
    }
}

/// Applies one step to `root` (typed in `ctx`) and returns the new term.
pub fn apply_step(root: &TargetTerm, ctx: &TargetContext, mode: Mode, step: &Step) -> Result<TargetTerm, KernelError> {
    let at = &step.path;
    let rule = step.rule;
    if step.args.len() != rule.arity() {
        return Err(KernelError::Malformed(step.to_string()));
    }
    let sub = path::get(root, at).ok_or_else(|| KernelError::BadPath(at.to_string()))?;
    let replacement = rewrite(root, ctx, mode, step, sub).map_err(|e| match e {
        KernelError::NotApplicable { reason, .. } => not_applicable(rule, at, reason),
        other => other,
    })?;
    let mut out = root.clone();
    *path::get_mut(&mut out, at).expect("path checked above") = replacement;
    Ok(out)
}

fn rewrite(root: &TargetTerm, ctx: &TargetContext, mode: Mode, step: &Step, sub: &TargetTerm) -> Result<TargetTerm, KernelError> {
    let at = &step.path;
    let rule = step.rule;
    let na = |reason: &str| not_applicable(rule, at, reason);
    match rule {
        Rule::Beta => match sub {
            TargetTerm::App(f, n) => match &**f {
                TargetTerm::Lam(x, _, b) => Ok(b.subst_term(x, n)),
                _ => Err(na("function is not an abstraction")),
            },
            _ => Err(na("not an application")),
        },
        Rule::BetaPair => match sub {
            TargetTerm::LetPair(x, y, s, n) => match &**s {
                TargetTerm::Pair(l, m) => {
                    let vars = BTreeMap::from([(x.clone(), (**l).clone()), (y.clone(), (**m).clone())]);
                    Ok(n.subst_many(&vars, &BTreeMap::new()))
                }
                _ => Err(na("scrutinee is not a pair")),
            },
            _ => Err(na("not a pair elimination")),
        },
        Rule::BetaPack => match sub {
            TargetTerm::LetPack(tx, x, s, n) => match &**s {
                TargetTerm::Pack(w, m, _) => {
                    let vars = BTreeMap::from([(x.clone(), (**m).clone())]);
                    let tys = BTreeMap::from([(tx.clone(), w.clone())]);
                    Ok(n.subst_many(&vars, &tys))
                }
                _ => Err(na("scrutinee is not a pack")),
            },
            _ => Err(na("not an unpacking")),
        },
        Rule::CommApp => match sub {
            TargetTerm::App(f, p) if let_parts(f).is_some() => {
                let f = freshen_let(f, &p.free_vars(), &p.free_type_vars());
                let (s, b) = let_parts(&f).expect("still a let");
                Ok(rebuild_let(&f, s.clone(), TargetTerm::app(b.clone(), (**p).clone())))
            }
            _ => Err(na("not an application of a let")),
        },
        Rule::CommLet => {
            let (s, b1) = let_parts(sub).ok_or_else(|| na("not a let"))?;
            if let_parts(s).is_none() {
                return Err(na("scrutinee is not a let"));
            }
            let inner = freshen_let(s, &b1.free_vars(), &b1.free_type_vars());
            let (s2, b2) = let_parts(&inner).expect("still a let");
            Ok(rebuild_let(&inner, s2.clone(), rebuild_let(sub, b2.clone(), b1.clone())))
        }
        Rule::Eta => match sub {
            TargetTerm::Lam(x, _, b) => match &**b {
                TargetTerm::App(m, arg) if matches!(&**arg, TargetTerm::Var(y) if y == x) => {
                    if m.free_vars().contains(x) {
                        Err(na("bound variable occurs in the function"))
                    } else {
                        Ok((**m).clone())
                    }
                }
                _ => Err(na("body is not an application to the bound variable")),
            },
            _ => Err(na("not an abstraction")),
        },
        Rule::EtaExp => {
            let x = &step.args[0];
            let lctx = context_at(root, ctx, mode, at)?;
            match typecheck_target(&lctx, sub, mode)? {
                TargetType::Neg(t) => {
                    if sub.free_vars().contains(x) {
                        return Err(na("variable is not fresh"));
                    }
                    Ok(TargetTerm::lam(x.clone(), *t, TargetTerm::app(sub.clone(), TargetTerm::var(x.clone()))))
                }
                _ => Err(na("subterm is not of negated type")),
            }
        }
        Rule::Split => {
            let (v, a, b) = (&step.args[0], &step.args[1], &step.args[2]);
            let lctx = context_at(root, ctx, mode, at)?;
            match lctx.lookup(v) {
                Some(TargetType::Conj(..)) => {}
                _ => return Err(na("variable is not of conjunction type")),
            }
            let fv = sub.free_vars();
            if a == b || a == v || b == v || fv.contains(a) || fv.contains(b) {
                return Err(na("component names are not fresh"));
            }
            let pair = TargetTerm::pair(TargetTerm::var(a.clone()), TargetTerm::var(b.clone()));
            Ok(TargetTerm::let_pair(a.clone(), b.clone(), TargetTerm::var(v.clone()), sub.subst_term(v, &pair)))
        }
        Rule::SplitPack => {
            let (v, tx, a) = (&step.args[0], &step.args[1], &step.args[2]);
            let lctx = context_at(root, ctx, mode, at)?;
            let vt = match lctx.lookup(v) {
                Some(t @ TargetType::Exists(..)) => t.clone(),
                _ => return Err(na("variable is not of existential type")),
            };
            let sub_ty = typecheck_target(&lctx, sub, mode)?;
            if a == v || sub.free_vars().contains(a) {
                return Err(na("component name is not fresh"));
            }
            if lctx.free_type_vars().contains(tx) || sub.free_type_vars().contains(tx) || sub_ty.free_type_vars().contains(tx) {
                return Err(na("type variable is not fresh"));
            }
            let pack = TargetTerm::pack(TargetType::var(tx.clone()), TargetTerm::var(a.clone()), vt);
            Ok(TargetTerm::let_pack(tx.clone(), a.clone(), TargetTerm::var(v.clone()), sub.subst_term(v, &pack)))
        }
        Rule::Join => match sub {
            TargetTerm::LetPair(x, y, m, n) => {
                let mut taken = n.all_identifiers();
                taken.extend(m.free_vars());
                let z = fresh("z", |c| taken.contains(c));
                let lit = TargetTerm::pair(TargetTerm::var(x.clone()), TargetTerm::var(y.clone()));
                let abs = abstract_literal(n, &lit, &[x, y], &[], &z);
                if abs.free_vars().contains(x) || abs.free_vars().contains(y) {
                    return Err(na("components are used outside the pair"));
                }
                Ok(abs.subst_term(&z, m))
            }
            _ => Err(na("not a pair elimination")),
        },
        Rule::JoinPack => match sub {
            TargetTerm::LetPack(tx, x, m, n) => {
                let lctx = context_at(root, ctx, mode, at)?;
                let mt = typecheck_target(&lctx, m, mode)?;
                let mut taken = n.all_identifiers();
                taken.extend(m.free_vars());
                let z = fresh("z", |c| taken.contains(c));
                let lit = TargetTerm::pack(TargetType::var(tx.clone()), TargetTerm::var(x.clone()), mt);
                let abs = abstract_literal(n, &lit, &[x], &[tx], &z);
                if abs.free_vars().contains(x) || abs.free_type_vars().contains(tx) {
                    return Err(na("components are used outside the pack"));
                }
                Ok(abs.subst_term(&z, m))
            }
            _ => Err(na("not an unpacking")),
        },
        Rule::Star => {
            if mode != Mode::Parametric {
                return Err(na("requires parametric mode"));
            }
            let lctx = context_at(root, ctx, mode, at)?;
            if typecheck_target(&lctx, sub, mode)?.is_exists_bottom() {
                Ok(TargetTerm::Star)
            } else {
                Err(na("subterm is not of type ∃X.X"))
            }
        }
        Rule::Unstar => {
            if mode != Mode::Parametric {
                return Err(na("requires parametric mode"));
            }
            if *sub != TargetTerm::Star {
                return Err(na("subterm is not ⋆"));
            }
            let v = &step.args[0];
            let lctx = context_at(root, ctx, mode, at)?;
            match lctx.lookup(v) {
                Some(t) if t.is_exists_bottom() => Ok(TargetTerm::var(v.clone())),
                _ => Err(na("variable is not of type ∃X.X")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> TargetTerm {
        TargetTerm::var(x)
    }

    fn tv(x: &str) -> TargetType {
        TargetType::var(x)
    }

    #[test]
    fn step_text_round_trip() {
        let s = Step::with_args(Rule::Split, Path(vec![0, 1]), &["k", "a", "b"]);
        assert_eq!(s.to_string(), "split 0.1 k a b");
        assert_eq!("split 0.1 k a b".parse::<Step>(), Ok(s));
        assert_eq!("beta ε".parse::<Step>(), Ok(Step::new(Rule::Beta, Path::root())));
        assert!("beta".parse::<Step>().is_err());
        assert!("split ε k".parse::<Step>().is_err());
    }

    #[test]
    fn beta_pair_contracts() {
        let t = TargetTerm::let_pair("x", "y", TargetTerm::pair(v("l"), v("m")), TargetTerm::app(v("x"), v("y")));
        let ctx = TargetContext::new();
        let r = apply_step(&t, &ctx, Mode::Plain, &Step::new(Rule::BetaPair, Path::root())).unwrap();
        assert_eq!(r, TargetTerm::app(v("l"), v("m")));
    }

    #[test]
    fn split_then_join_is_identity() {
        let ctx = TargetContext::new()
            .with("f", TargetType::neg(TargetType::conj(tv("a"), tv("b"))))
            .with("p", TargetType::conj(tv("a"), tv("b")));
        let t = TargetTerm::app(v("f"), v("p"));
        let split = apply_step(&t, &ctx, Mode::Plain, &Step::with_args(Rule::Split, Path::root(), &["p", "a1", "b1"])).unwrap();
        assert_eq!(
            split,
            TargetTerm::let_pair("a1", "b1", v("p"), TargetTerm::app(v("f"), TargetTerm::pair(v("a1"), v("b1"))))
        );
        let back = apply_step(&split, &ctx, Mode::Plain, &Step::new(Rule::Join, Path::root())).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn join_refuses_when_components_escape() {
        let ctx = TargetContext::new().with("p", TargetType::conj(TargetType::neg(tv("a")), tv("a")));
        let t = TargetTerm::let_pair("x", "y", v("p"), TargetTerm::app(v("x"), v("y")));
        assert!(apply_step(&t, &ctx, Mode::Plain, &Step::new(Rule::Join, Path::root())).is_err());
    }

    #[test]
    fn eta_side_condition() {
        let ctx = TargetContext::new().with("m", TargetType::neg(tv("a")));
        let ok = TargetTerm::lam("x", tv("a"), TargetTerm::app(v("m"), v("x")));
        assert_eq!(apply_step(&ok, &ctx, Mode::Plain, &Step::new(Rule::Eta, Path::root())), Ok(v("m")));
        let exp = apply_step(&v("m"), &ctx, Mode::Plain, &Step::with_args(Rule::EtaExp, Path::root(), &["x"])).unwrap();
        assert_eq!(exp, ok);
    }

    #[test]
    fn star_only_in_parametric_mode() {
        let ctx = TargetContext::new().with("u", TargetType::exists_bottom());
        let t = v("u");
        assert!(apply_step(&t, &ctx, Mode::Plain, &Step::new(Rule::Star, Path::root())).is_err());
        let s = apply_step(&t, &ctx, Mode::Parametric, &Step::new(Rule::Star, Path::root())).unwrap();
        assert_eq!(s, TargetTerm::Star);
        let back = apply_step(&s, &ctx, Mode::Parametric, &Step::with_args(Rule::Unstar, Path::root(), &["u"])).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn commuting_conversion_renames_apart() {
        let ctx = TargetContext::new()
            .with("p", TargetType::conj(TargetType::neg(tv("a")), tv("b")))
            .with("x", tv("a"));
        let t = TargetTerm::app(TargetTerm::let_pair("x", "y", v("p"), v("x")), v("x"));
        let r = apply_step(&t, &ctx, Mode::Plain, &Step::new(Rule::CommApp, Path::root())).unwrap();
        match &r {
            TargetTerm::LetPair(x2, _, _, body) => {
                assert_ne!(x2, "x");
                assert_eq!(**body, TargetTerm::app(v(x2), v("x")));
            }
            _ => panic!("expected let"),
        }
    }
}
