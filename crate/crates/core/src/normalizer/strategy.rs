//! The canonicalization strategy. It decides which kernel step to take
//! next; it never edits terms itself.
//!
//! Outline:
//! 1. a root of negated type that is not an abstraction is η-expanded;
//! 2. repeat until nothing changes: normal-order β (with commuting
//!    conversions), `⋆`-collapse in parametric mode, removal of unused
//!    lets, and one split that brings a variable of product or existential
//!    type into canonical position (destructured once, right where it is
//!    bound, components depth-first in binding order);
//! 3. η-contract every abstraction that, after re-joining its splits, is
//!    `λx.M x`; then go back to 2 until stable.

use std::collections::BTreeSet;

use super::kernel::{apply_step, context_at, Rule, Step};
use super::path::{self, Path};
use super::NormError;
use crate::names::fresh;
use crate::target::{typecheck_target, Mode, TargetContext, TargetTerm, TargetType, TargetTypeError};

const STEP_LIMIT: usize = 200_000;

#[derive(Clone)]
pub(crate) struct Normalizer {
    pub term: TargetTerm,
    pub ctx: TargetContext,
    pub mode: Mode,
    pub trace: Vec<Step>,
}

fn splittable(t: &TargetType, mode: Mode) -> bool {
    match t {
        TargetType::Conj(..) => true,
        TargetType::Exists(..) => !(mode == Mode::Parametric && t.is_exists_bottom()),
        _ => false,
    }
}

/// Types of every subterm, in pre-order.
pub(crate) fn subterm_types(
    root: &TargetTerm,
    ctx: &TargetContext,
    mode: Mode,
) -> Result<Vec<(Path, TargetType)>, TargetTypeError> {
    fn go(
        t: &TargetTerm,
        ctx: &mut TargetContext,
        mode: Mode,
        at: Path,
        out: &mut Vec<(Path, TargetType)>,
    ) -> Result<TargetType, TargetTypeError> {
        let slot = out.len();
        out.push((at.clone(), TargetType::R));
        let ty = match t {
            TargetTerm::Var(_) | TargetTerm::Star => typecheck_target(ctx, t, mode)?,
            TargetTerm::Lam(x, ty, b) => {
                ctx.vars.push((x.clone(), ty.clone()));
                let r = go(b, ctx, mode, at.child(0), out);
                ctx.vars.pop();
                r?;
                TargetType::neg(ty.clone())
            }
            TargetTerm::App(f, a) => {
                go(f, ctx, mode, at.child(0), out)?;
                go(a, ctx, mode, at.child(1), out)?;
                TargetType::R
            }
            TargetTerm::Pair(a, b) => {
                let ta = go(a, ctx, mode, at.child(0), out)?;
                let tb = go(b, ctx, mode, at.child(1), out)?;
                TargetType::conj(ta, tb)
            }
            TargetTerm::Pack(_, m, ann) => {
                go(m, ctx, mode, at.child(0), out)?;
                ann.clone()
            }
            TargetTerm::LetPair(x, y, s, b) => {
                let ts = go(s, ctx, mode, at.child(0), out)?;
                let TargetType::Conj(t1, t2) = ts else {
                    return Err(TargetTypeError::TypeMismatch {
                        rule: "pair elimination",
                        expected: "a conjunction".into(),
                        found: ts.to_string(),
                    });
                };
                ctx.vars.push((x.clone(), *t1));
                ctx.vars.push((y.clone(), *t2));
                let r = go(b, ctx, mode, at.child(1), out);
                ctx.vars.pop();
                ctx.vars.pop();
                r?
            }
            TargetTerm::LetPack(tx, x, s, b) => {
                let ts = go(s, ctx, mode, at.child(0), out)?;
                let opened = ts.open_exists(tx).ok_or_else(|| TargetTypeError::TypeMismatch {
                    rule: "unpack",
                    expected: "an existential".into(),
                    found: ts.to_string(),
                })?;
                ctx.vars.push((x.clone(), opened));
                let r = go(b, ctx, mode, at.child(1), out);
                ctx.vars.pop();
                r?
            }
        };
        out[slot].1 = ty.clone();
        Ok(ty)
    }
    let mut out = Vec::new();
    go(root, &mut ctx.clone(), mode, Path::root(), &mut out)?;
    Ok(out)
}

fn redex_rule(t: &TargetTerm) -> Option<Rule> {
    match t {
        TargetTerm::App(f, _) => match &**f {
            TargetTerm::Lam(..) => Some(Rule::Beta),
            TargetTerm::LetPair(..) | TargetTerm::LetPack(..) => Some(Rule::CommApp),
            _ => None,
        },
        TargetTerm::LetPair(_, _, s, _) => match &**s {
            TargetTerm::Pair(..) => Some(Rule::BetaPair),
            TargetTerm::LetPair(..) | TargetTerm::LetPack(..) => Some(Rule::CommLet),
            _ => None,
        },
        TargetTerm::LetPack(_, _, s, _) => match &**s {
            TargetTerm::Pack(..) => Some(Rule::BetaPack),
            TargetTerm::LetPair(..) | TargetTerm::LetPack(..) => Some(Rule::CommLet),
            _ => None,
        },
        _ => None,
    }
}

impl Normalizer {
    pub fn new(term: TargetTerm, ctx: TargetContext, mode: Mode) -> Self {
        Normalizer {
            term,
            ctx,
            mode,
            trace: Vec::new(),
        }
    }

    pub fn step(&mut self, step: Step) -> Result<(), NormError> {
        if self.trace.len() >= STEP_LIMIT {
            return Err(NormError::StepLimit(STEP_LIMIT));
        }
        self.term = apply_step(&self.term, &self.ctx, self.mode, &step).map_err(NormError::Kernel)?;
        self.trace.push(step);
        Ok(())
    }

    fn taken(&self) -> BTreeSet<String> {
        let mut taken = self.term.all_identifiers();
        for (x, t) in &self.ctx.vars {
            taken.insert(x.clone());
            t.identifiers(&mut taken);
        }
        taken
    }

    fn fresh(&self, base: &str, extra: &[&str]) -> String {
        let taken = self.taken();
        fresh(base, |c| taken.contains(c) || extra.contains(&c))
    }

    /// Normal-order β with commuting conversions.
    pub fn beta_normalize(&mut self) -> Result<bool, NormError> {
        let mut changed = false;
        loop {
            let found = path::preorder(&self.term)
                .into_iter()
                .find_map(|p| redex_rule(path::get(&self.term, &p).expect("preorder path")).map(|r| (p, r)));
            match found {
                Some((p, r)) => {
                    self.step(Step::new(r, p))?;
                    changed = true;
                }
                None => return Ok(changed),
            }
        }
    }

    /// Replaces the outermost subterms of type `∃X.X` by `⋆`.
    fn star_pass(&mut self) -> Result<bool, NormError> {
        if self.mode != Mode::Parametric {
            return Ok(false);
        }
        let mut changed = false;
        loop {
            let types = subterm_types(&self.term, &self.ctx, self.mode)?;
            let found = types.into_iter().find(|(p, t)| {
                t.is_exists_bottom() && !matches!(path::get(&self.term, p), Some(TargetTerm::Star))
            });
            match found {
                Some((p, _)) => {
                    self.step(Step::new(Rule::Star, p))?;
                    changed = true;
                }
                None => return Ok(changed),
            }
        }
    }

    /// Removes lets none of whose bound variables are used.
    fn cleanup_pass(&mut self) -> Result<bool, NormError> {
        let mut changed = false;
        loop {
            let found = path::preorder(&self.term).into_iter().rev().find(|p| {
                match path::get(&self.term, p).expect("preorder path") {
                    TargetTerm::LetPair(x, y, _, b) => b.occurrences(x) == 0 && b.occurrences(y) == 0,
                    TargetTerm::LetPack(tx, x, _, b) => b.occurrences(x) == 0 && !b.free_type_vars().contains(tx),
                    _ => false,
                }
            });
            match found {
                Some(p) => {
                    let rule = match path::get(&self.term, &p) {
                        Some(TargetTerm::LetPair(..)) => Rule::Join,
                        _ => Rule::JoinPack,
                    };
                    self.step(Step::new(rule, p))?;
                    changed = true;
                }
                None => return Ok(changed),
            }
        }
    }

    /// Scope groups: where each bound variable's splits belong.
    fn groups(&self) -> Vec<(Path, Vec<String>)> {
        let mut out = Vec::new();
        let mut root_vars: Vec<String> = Vec::new();
        for (x, _) in &self.ctx.vars {
            root_vars.retain(|y| y != x);
            root_vars.push(x.clone());
        }
        let root_is_lam = matches!(self.term, TargetTerm::Lam(..));
        if let TargetTerm::Lam(x, _, _) = &self.term {
            root_vars.retain(|y| y != x);
            root_vars.push(x.clone());
        }
        let start = if root_is_lam { Path(vec![0]) } else { Path::root() };
        out.push((start, root_vars));
        for p in path::preorder(&self.term) {
            match path::get(&self.term, &p).expect("preorder path") {
                TargetTerm::Lam(x, _, _) if !p.0.is_empty() => out.push((p.child(0), vec![x.clone()])),
                TargetTerm::LetPair(x, y, _, _) => out.push((p.child(1), vec![x.clone(), y.clone()])),
                TargetTerm::LetPack(_, x, _, _) => out.push((p.child(1), vec![x.clone()])),
                _ => {}
            }
        }
        out
    }

    /// Checks that `v` is destructured at `cur` (and its components after
    /// it); returns the end of the chain, or the split that is needed.
    fn layout(&self, v: &str, cur: Path) -> Result<Result<Path, Step>, NormError> {
        let node = path::get(&self.term, &cur).expect("layout position exists");
        if node.occurrences(v) == 0 {
            return Ok(Ok(cur));
        }
        let lctx = context_at(&self.term, &self.ctx, self.mode, &cur).map_err(NormError::Kernel)?;
        let Some(ty) = lctx.lookup(v).cloned() else {
            return Ok(Ok(cur));
        };
        if !splittable(&ty, self.mode) {
            return Ok(Ok(cur));
        }
        let at_cur = match (node, &ty) {
            (TargetTerm::LetPair(a, b, s, _), TargetType::Conj(..)) if matches!(&**s, TargetTerm::Var(w) if w == v) => {
                Some(vec![a.clone(), b.clone()])
            }
            (TargetTerm::LetPack(_, a, s, _), TargetType::Exists(..)) if matches!(&**s, TargetTerm::Var(w) if w == v) => {
                Some(vec![a.clone()])
            }
            _ => None,
        };
        if let Some(components) = at_cur {
            if node.occurrences(v) == 1 {
                let mut c = cur.child(1);
                for comp in components {
                    match self.layout(&comp, c)? {
                        Ok(next) => c = next,
                        Err(step) => return Ok(Err(step)),
                    }
                }
                return Ok(Ok(c));
            }
        }
        let base = |t: &TargetType| if matches!(t, TargetType::Neg(_)) { "x" } else { "k" };
        let step = match &ty {
            TargetType::Conj(t1, t2) => {
                let a = self.fresh(base(t1), &[]);
                let b = self.fresh(base(t2), &[&a]);
                Step::with_args(Rule::Split, cur, &[v, &a, &b])
            }
            TargetType::Exists(_, body) => {
                let tx = self.fresh("X", &[]);
                let a = self.fresh(base(body), &[&tx]);
                Step::with_args(Rule::SplitPack, cur, &[v, &tx, &a])
            }
            _ => unreachable!("splittable types are conjunctions or existentials"),
        };
        Ok(Err(step))
    }

    fn split_pass(&mut self) -> Result<bool, NormError> {
        for (start, vars) in self.groups() {
            let mut c = start;
            for v in vars {
                match self.layout(&v, c)? {
                    Ok(next) => c = next,
                    Err(step) => {
                        self.step(step)?;
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// Steps 2 of the outline: iterate to a fixpoint.
    fn settle(&mut self) -> Result<bool, NormError> {
        let mut changed = false;
        loop {
            let mut round = self.beta_normalize()?;
            round |= self.star_pass()?;
            round |= self.cleanup_pass()?;
            if !round {
                round = self.split_pass()?;
            }
            if !round {
                return Ok(changed);
            }
            changed = true;
        }
    }

    /// Unstar patterns that rebuild a bound variable of type `∃X.X`.
    fn unstar_candidate(&self, lam: &Path) -> Option<Step> {
        let TargetTerm::Lam(x, xt, _) = path::get(&self.term, lam)? else {
            return None;
        };
        let body = lam.child(0);
        let mut cur = body.clone();
        let mut chain = Vec::new();
        while let Some(t @ (TargetTerm::LetPair(..) | TargetTerm::LetPack(..))) = path::get(&self.term, &cur) {
            chain.push((cur.clone(), t));
            cur = cur.child(1);
        }
        if xt.is_exists_bottom() {
            for (p, t) in &chain {
                if let TargetTerm::LetPair(_, _, s, _) | TargetTerm::LetPack(_, _, s, _) = t {
                    if **s == TargetTerm::Star {
                        return Some(Step::with_args(Rule::Unstar, p.child(0), &[x]));
                    }
                }
            }
            if let Some(TargetTerm::App(_, a)) = path::get(&self.term, &cur) {
                if **a == TargetTerm::Star {
                    return Some(Step::with_args(Rule::Unstar, cur.child(1), &[x]));
                }
            }
        }
        let lctx_of = |p: &Path| context_at(&self.term, &self.ctx, self.mode, p).ok();
        for (p, t) in &chain {
            let inner = p.child(1);
            let Some(lctx) = lctx_of(&inner) else { continue };
            let is_bot = |v: &str| lctx.lookup(v).is_some_and(|t| t.is_exists_bottom());
            let scope = path::get(&self.term, &inner)?;
            for rel in path::preorder(scope) {
                let q = inner.join(&rel);
                match (t, path::get(&self.term, &q)?) {
                    (TargetTerm::LetPair(a, b, _, _), TargetTerm::Pair(l, r)) => {
                        let ok_l = matches!(&**l, TargetTerm::Var(w) if w == a) || (**l == TargetTerm::Star && is_bot(a));
                        let ok_r = matches!(&**r, TargetTerm::Var(w) if w == b) || (**r == TargetTerm::Star && is_bot(b));
                        if ok_l && ok_r {
                            if **l == TargetTerm::Star {
                                return Some(Step::with_args(Rule::Unstar, q.child(0), &[a]));
                            }
                            if **r == TargetTerm::Star {
                                return Some(Step::with_args(Rule::Unstar, q.child(1), &[b]));
                            }
                        }
                    }
                    (TargetTerm::LetPack(tx, a, _, _), TargetTerm::Pack(w, m, _))
                        if **m == TargetTerm::Star && *w == TargetType::var(tx.clone()) && is_bot(a) =>
                    {
                        return Some(Step::with_args(Rule::Unstar, q.child(0), &[a]));
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// Tries to η-contract the abstraction at `lam`; on success the
    /// normalizer is updated, otherwise it is left untouched.
    fn try_contract(&mut self, lam: &Path) -> Result<bool, NormError> {
        let mut scratch = self.clone();
        loop {
            let TargetTerm::Lam(x, _, _) = path::get(&scratch.term, lam).expect("abstraction position").clone() else {
                return Ok(false);
            };
            let body = lam.child(0);
            if let TargetTerm::App(m, a) = path::get(&scratch.term, &body).expect("body exists") {
                if matches!(&**a, TargetTerm::Var(w) if *w == x) && m.occurrences(&x) == 0 {
                    scratch.step(Step::new(Rule::Eta, lam.clone()))?;
                    *self = scratch;
                    return Ok(true);
                }
            }
            if self.mode == Mode::Parametric {
                if let Some(step) = scratch.unstar_candidate(lam) {
                    scratch.step(step)?;
                    continue;
                }
            }
            let mut chain = Vec::new();
            let mut cur = body;
            while let Some(t @ (TargetTerm::LetPair(..) | TargetTerm::LetPack(..))) = path::get(&scratch.term, &cur) {
                chain.push((cur.clone(), matches!(t, TargetTerm::LetPair(..))));
                cur = cur.child(1);
            }
            let mut joined = false;
            for (p, is_pair) in chain.iter().rev() {
                let rule = if *is_pair { Rule::Join } else { Rule::JoinPack };
                let candidate = Step::new(rule, p.clone());
                if apply_step(&scratch.term, &scratch.ctx, scratch.mode, &candidate).is_ok() {
                    scratch.step(candidate)?;
                    joined = true;
                    break;
                }
            }
            if !joined {
                return Ok(false);
            }
        }
    }

    fn contract_pass(&mut self) -> Result<bool, NormError> {
        let lams: Vec<Path> = path::preorder(&self.term)
            .into_iter()
            .rev()
            .filter(|p| matches!(path::get(&self.term, p), Some(TargetTerm::Lam(..))))
            .collect();
        for p in lams {
            if self.try_contract(&p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Runs the whole outline.
    pub fn canonicalize(&mut self) -> Result<(), NormError> {
        let ty = typecheck_target(&self.ctx, &self.term, self.mode)?;
        if matches!(ty, TargetType::Neg(_)) && !matches!(self.term, TargetTerm::Lam(..)) {
            let k = self.fresh("k", &[]);
            self.step(Step::with_args(Rule::EtaExp, Path::root(), &[&k]))?;
        }
        loop {
            self.settle()?;
            let mut changed = false;
            while self.cleanup_pass()? | self.contract_pass()? {
                changed = true;
            }
            if !changed {
                return Ok(());
            }
        }
    }
}
