//! Seeded, goal-directed generation of well-typed λμ2 terms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mu::{MuContext, MuTerm, MuType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("size budget must be at least 1")]
    EmptyBudget,
    #[error("no inhabitant of {0} found within the budget")]
    GaveUp(String),
}

const NODE_FUEL: usize = 300;
const SPINE_DEPTH: usize = 4;
const MAX_TYPE_SIZE: usize = 24;

#[derive(Clone, Copy)]
enum Former {
    Var,
    Intro,
    Spine,
    Mu,
    Cut,
}

struct Gen {
    rng: ChaCha8Rng,
    fuel: usize,
    counter: usize,
    taken: BTreeSet<String>,
}

/// Arguments consumed by an elimination spine.
enum Arg {
    Term(MuType),
    Type(MuType),
}

impl Gen {
    /// Identifiers unique within one generated term: the bare base first,
    /// then numbered variants.
    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let cand = if self.counter == 1 { base.to_string() } else { format!("{base}{}", self.counter) };
            if !self.taken.contains(&cand) {
                return cand;
            }
        }
    }

    /// Types worth trying as instantiations or cut formulas.
    fn pool(&self, goal: &MuType, ctx: &MuContext) -> Vec<MuType> {
        let mut out = vec![goal.clone()];
        for (_, t) in ctx.gamma.iter().chain(&ctx.delta) {
            out.push(t.clone());
            if let MuType::Arrow(a, _) = t {
                out.push((**a).clone());
            }
        }
        for x in ctx.free_type_vars().into_iter().chain(goal.free_type_vars()) {
            out.push(MuType::var(x));
        }
        out.retain(|t| t.size() <= MAX_TYPE_SIZE);
        out.dedup();
        out
    }

    /// Arguments that turn a head of type `ty` into one of type `goal`.
    fn spine(&mut self, ty: &MuType, goal: &MuType, pool: &[MuType], depth: usize) -> Option<Vec<Arg>> {
        if ty == goal {
            return Some(Vec::new());
        }
        if depth == 0 {
            return None;
        }
        match ty {
            MuType::Arrow(a, b) => {
                let mut rest = self.spine(b, goal, pool, depth - 1)?;
                rest.insert(0, Arg::Term((**a).clone()));
                Some(rest)
            }
            MuType::Forall(x, b) => {
                let mut cands = pool.to_vec();
                cands.shuffle(&mut self.rng);
                for s in cands.into_iter().take(3) {
                    let inst = b.subst(x, &s);
                    if inst.size() > MAX_TYPE_SIZE {
                        continue;
                    }
                    if let Some(mut rest) = self.spine(&inst, goal, pool, depth - 1) {
                        rest.insert(0, Arg::Type(s));
                        return Some(rest);
                    }
                }
                None
            }
            MuType::Var(_) => None,
        }
    }

    fn term(&mut self, goal: &MuType, ctx: &MuContext, budget: usize) -> Option<MuTerm> {
        if budget == 0 || self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let mut formers = vec![
            (Former::Var, 4),
            (Former::Intro, 4),
            (Former::Spine, 3),
            (Former::Mu, 1),
            (Former::Cut, 1),
        ];
        let mut order = Vec::new();
        while !formers.is_empty() {
            let total: u32 = formers.iter().map(|(_, w)| w).sum();
            let mut pick = self.rng.gen_range(0..total);
            let i = formers
                .iter()
                .position(|(_, w)| {
                    if pick < *w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .expect("weights cover the range");
            order.push(formers.remove(i).0);
        }
        for former in order {
            let found = match former {
                Former::Var => {
                    let hits: Vec<&String> = visible(&ctx.gamma).filter(|(_, t)| t == goal).map(|(x, _)| x).collect();
                    hits.choose(&mut self.rng).map(|x| MuTerm::var((*x).clone()))
                }
                Former::Intro => self.intro(goal, ctx, budget),
                Former::Spine => self.elim(goal, ctx, budget),
                Former::Mu => self.mu(goal, ctx, budget),
                Former::Cut => self.cut(goal, ctx, budget),
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn intro(&mut self, goal: &MuType, ctx: &MuContext, budget: usize) -> Option<MuTerm> {
        match goal {
            MuType::Arrow(a, b) => {
                let x = self.fresh("x");
                let body = self.term(b, &ctx.clone().with_var(x.clone(), (**a).clone()), budget - 1)?;
                Some(MuTerm::lam(x, (**a).clone(), body))
            }
            MuType::Forall(x, b) => {
                let avoid = ctx.free_type_vars();
                let mut y = x.clone();
                while avoid.contains(&y) || self.taken.contains(&y) {
                    y = self.fresh(x);
                }
                let body = self.term(&b.subst(x, &MuType::var(y.clone())), ctx, budget - 1)?;
                Some(MuTerm::ty_lam(y, body))
            }
            MuType::Var(_) => None,
        }
    }

    fn elim(&mut self, goal: &MuType, ctx: &MuContext, budget: usize) -> Option<MuTerm> {
        let pool = self.pool(goal, ctx);
        let mut heads: Vec<(String, MuType)> = visible(&ctx.gamma).map(|(x, t)| (x.clone(), t.clone())).collect();
        heads.shuffle(&mut self.rng);
        for (x, t) in heads {
            let Some(args) = self.spine(&t, goal, &pool, SPINE_DEPTH) else { continue };
            if args.is_empty() || args.len() + 1 > budget {
                continue;
            }
            let share = (budget - 1) / args.len();
            let mut acc = Some(MuTerm::var(x));
            for arg in args {
                acc = match (acc, arg) {
                    (Some(f), Arg::Type(s)) => Some(MuTerm::ty_app(f, s)),
                    (Some(f), Arg::Term(s)) => self.term(&s, ctx, share).map(|a| MuTerm::app(f, a)),
                    (None, _) => None,
                };
            }
            if acc.is_some() {
                return acc;
            }
        }
        None
    }

    fn mu(&mut self, goal: &MuType, ctx: &MuContext, budget: usize) -> Option<MuTerm> {
        let alpha = self.fresh("al");
        let inner = ctx.clone().with_name(alpha.clone(), goal.clone());
        let mut targets: Vec<(String, MuType)> = visible(&inner.delta).map(|(b, t)| (b.clone(), t.clone())).collect();
        targets.shuffle(&mut self.rng);
        for (beta, t) in targets.into_iter().take(2) {
            if let Some(body) = self.term(&t, &inner, budget - 1) {
                return Some(MuTerm::mu(alpha, goal.clone(), beta, body));
            }
        }
        None
    }

    fn cut(&mut self, goal: &MuType, ctx: &MuContext, budget: usize) -> Option<MuTerm> {
        if budget < 3 {
            return None;
        }
        let pool = self.pool(goal, ctx);
        let s = pool.choose(&mut self.rng)?.clone();
        let half = (budget - 1) / 2;
        let f = self.term(&MuType::arrow(s.clone(), goal.clone()), ctx, half)?;
        let a = self.term(&s, ctx, half)?;
        Some(MuTerm::app(f, a))
    }
}

/// Innermost binding of each identifier.
fn visible(entries: &[(String, MuType)]) -> impl Iterator<Item = &(String, MuType)> {
    entries
        .iter()
        .enumerate()
        .filter(move |(i, (x, _))| !entries[i + 1..].iter().any(|(y, _)| y == x))
        .map(|(_, e)| e)
}

/// A term of type `goal` in `ctx` with at most `budget` nodes; the same
/// seed always yields the same term.
pub fn gen_typed_term(seed: u64, budget: usize, ctx: &MuContext, goal: &MuType) -> Result<MuTerm, GenError> {
    if budget == 0 {
        return Err(GenError::EmptyBudget);
    }
    let mut taken = BTreeSet::new();
    for (x, t) in ctx.gamma.iter().chain(&ctx.delta) {
        taken.insert(x.clone());
        t.identifiers(&mut taken);
    }
    goal.identifiers(&mut taken);
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        fuel: NODE_FUEL,
        counter: 0,
        taken,
    };
    for _ in 0..3 {
        g.fuel = NODE_FUEL;
        g.counter = 0;
        if let Some(m) = g.term(goal, ctx, budget) {
            return Ok(m);
        }
    }
    Err(GenError::GaveUp(goal.to_string()))
}

fn random_type(rng: &mut ChaCha8Rng, depth: usize, bound: &mut Vec<String>) -> MuType {
    let atoms = ["a", "b"];
    let roll = if depth == 0 { 0 } else { rng.gen_range(0..6) };
    match roll {
        0..=2 => {
            if !bound.is_empty() && rng.gen_bool(0.5) {
                MuType::var(bound.choose(rng).expect("nonempty").clone())
            } else {
                MuType::var(*atoms.choose(rng).expect("nonempty"))
            }
        }
        3 | 4 => {
            let a = random_type(rng, depth - 1, bound);
            let b = random_type(rng, depth - 1, bound);
            MuType::arrow(a, b)
        }
        _ => {
            let x = format!("X{}", bound.len());
            bound.push(x.clone());
            let body = random_type(rng, depth - 1, bound);
            bound.pop();
            MuType::forall(x, body)
        }
    }
}

/// A random judgement `Γ ⊢ M : σ | Δ` (context, term, type).
pub fn gen_judgement(seed: u64, budget: usize) -> Result<(MuContext, MuTerm, MuType), GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ctx = MuContext::new();
    for i in 0..rng.gen_range(0..3) {
        ctx = ctx.with_var(format!("v{i}"), random_type(&mut rng, 2, &mut Vec::new()));
    }
    for i in 0..rng.gen_range(0..2) {
        ctx = ctx.with_name(format!("n{i}"), random_type(&mut rng, 2, &mut Vec::new()));
    }
    let mut last = None;
    for _ in 0..5 {
        let goal = random_type(&mut rng, 3, &mut Vec::new());
        match gen_typed_term(rng.gen(), budget, &ctx, &goal) {
            Ok(m) => return Ok((ctx, m, goal)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
