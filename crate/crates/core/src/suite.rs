//! The acceptance corpus: thirteen criteria, each checked by an
//! independent oracle. Randomized criteria draw their instances from a
//! seed, so a run is deterministic given the seed.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cps::{check_type_soundness, cps_judgement, term_subst_commutes, type_in_term_subst_commutes, type_subst_commutes};
use crate::encodings::*;
use crate::focality::{check_discardable, check_focal, check_repeatable, compose, FocalityCertificate};
use crate::freethm::{discharge, free_theorem, instantiate_graph, parametricity_obligations, top, DischargeStatus};
use crate::inverse::roundtrip;
use crate::mu::{MuContext, MuTerm, MuType};
use crate::normalizer::canonicalize;
use crate::target::Mode;
use crate::theory::{additional_axioms, core_axioms, eq_mu, gen_judgement, gen_typed_term, named_term_equations, Theory};

type Outcome = Result<(), Vec<String>>;

fn a() -> MuType {
    MuType::var("a")
}

fn b() -> MuType {
    MuType::var("b")
}

fn arrow(x: MuType, y: MuType) -> MuType {
    MuType::arrow(x, y)
}

fn v(x: &str) -> MuTerm {
    MuTerm::var(x)
}

fn expect_equal(fails: &mut Vec<String>, label: &str, ctx: &MuContext, l: &MuTerm, r: &MuTerm, theory: Theory) {
    match eq_mu(ctx, l, r, theory) {
        Ok(verdict) if verdict.is_equal() => {}
        Ok(_) => fails.push(format!("{label}: Distinct")),
        Err(e) => fails.push(format!("{label}: {e}")),
    }
}

fn done(fails: Vec<String>) -> Outcome {
    if fails.is_empty() {
        Ok(())
    } else {
        Err(fails)
    }
}

fn catalog_terms() -> Vec<(String, MuTerm)> {
    CATALOG
        .iter()
        .map(|e| {
            let tys: Vec<MuType> = e
                .params
                .iter()
                .enumerate()
                .map(|(i, p)| if p.starts_with('F') { arrow(a(), MuType::var("X")) } else { MuType::var(format!("s{i}")) })
                .collect();
            (e.name.to_string(), mk_combinator(e.name, &tys).expect("catalog entry builds"))
        })
        .collect()
}

fn type_soundness(start: u64) -> Outcome {
    let mut fails = Vec::new();
    for (name, m) in catalog_terms() {
        if let Err(e) = check_type_soundness(&MuContext::new(), &m) {
            fails.push(format!("{name}: {e}"));
        }
    }
    let mut found = 0;
    let mut seed = start;
    while found < 1000 {
        if let Ok((ctx, m, _)) = gen_judgement(seed, 10) {
            found += 1;
            if let Err(e) = check_type_soundness(&ctx, &m) {
                fails.push(format!("seed {seed}: {e}"));
            }
        }
        seed += 1;
    }
    done(fails)
}

fn equational_soundness() -> Outcome {
    let mut fails = Vec::new();
    for eq in core_axioms() {
        match eq.check(Theory::BetaEta) {
            Ok(v) if v.is_equal() => {}
            other => fails.push(format!("{}: {other:?}", eq.name)),
        }
    }
    for ax in additional_axioms() {
        for eq in ax.presentations() {
            match (eq.check(Theory::LambdaMu2P), eq.check(Theory::BetaEta)) {
                (Ok(p), Ok(be)) if p.is_equal() && !be.is_equal() => {}
                other => fails.push(format!("{}: {other:?}", eq.name)),
            }
        }
    }
    done(fails)
}

fn fullness() -> Outcome {
    let mut fails = Vec::new();
    for (name, m) in catalog_terms() {
        let out = cps_judgement(&MuContext::new(), &m).expect("catalog terms translate");
        let result = canonicalize(&out.ctx, &out.term, &out.ty, Mode::Parametric)
            .map_err(|e| e.to_string())
            .and_then(|c| roundtrip(&out.ctx, &c.form, Mode::Parametric).map_err(|e| e.to_string()));
        match result {
            Ok(v) if v.is_equal() => {}
            Ok(_) => fails.push(format!("{name}: Distinct")),
            Err(e) => fails.push(format!("{name}: {e}")),
        }
    }
    done(fails)
}

fn substitution_lemmas(start: u64) -> Outcome {
    let mut fails = Vec::new();
    let (mut term_cases, mut type_cases, mut seed) = (0, 0, start);
    while term_cases < 200 || type_cases < 200 {
        seed += 1;
        let Ok((ctx, m, ty)) = gen_judgement(seed, 10) else { continue };
        if type_cases < 200 {
            type_cases += 1;
            let s = arrow(ty.clone(), b());
            if !type_subst_commutes(&ty, "a", &s) {
                fails.push(format!("type in type, seed {seed}"));
            }
            if !type_in_term_subst_commutes(&ctx, &m, "a", &s).unwrap_or(false) {
                fails.push(format!("type in term, seed {seed}"));
            }
        }
        if term_cases < 200 {
            let Some((x, t)) = ctx.gamma.first().cloned() else { continue };
            let Ok(n) = gen_typed_term(seed ^ 0x5eed, 6, &ctx, &t) else { continue };
            term_cases += 1;
            if !term_subst_commutes(&ctx, &m, &x, &n).unwrap_or(false) {
                fails.push(format!("term in term, seed {seed}"));
            }
        }
    }
    done(fails)
}

fn named_equations() -> Outcome {
    let mut fails = Vec::new();
    for eq in named_term_equations() {
        match eq.check(Theory::LambdaMu2P) {
            Ok(v) if v.is_equal() => {}
            other => fails.push(format!("{}: {other:?}", eq.name)),
        }
    }
    done(fails)
}

fn double_negation() -> Outcome {
    let mut fails = Vec::new();
    for s in [a(), arrow(a(), b()), MuType::bottom()] {
        let ctx = MuContext::new().with_var("m", s.clone());
        let lhs = MuTerm::app(dne(&s), MuTerm::lam("k", s.clone().neg(), MuTerm::app(v("k"), v("m"))));
        expect_equal(&mut fails, &format!("C at {s}"), &ctx, &lhs, &v("m"), Theory::LambdaMu2P);
    }
    done(fails)
}

fn focal_decomposition() -> Outcome {
    let mut fails = Vec::new();
    let samples: Vec<(MuContext, MuTerm, MuType, MuType)> = vec![
        (MuContext::new().with_var("g", arrow(a(), b())), v("g"), a(), b()),
        (MuContext::new(), MuTerm::lam("x", a(), v("x")), a(), a()),
        (MuContext::new().with_var("n", b()), MuTerm::lam("x", a(), v("n")), a(), b()),
        (MuContext::new(), abort(&a()), MuType::bottom(), a()),
        (MuContext::new(), MuTerm::lam("x", arrow(a(), b()), MuTerm::lam("y", a(), MuTerm::app(v("x"), v("y")))), arrow(a(), b()), arrow(a(), b())),
    ];
    for (ctx, g, s1, s2) in &samples {
        let round = flat(s1, &sharp(s1, s2, g));
        expect_equal(&mut fails, &format!("(g♯)♭ for {g}"), ctx, &round, g, Theory::LambdaMu2P);
    }
    let nn = |s: &MuType| neg_neg(s);
    let focal_maps: Vec<(MuContext, MuTerm, MuType, MuType)> = vec![
        (MuContext::new(), dne(&a()), nn(&a()), a()),
        (MuContext::new().with_var("g", arrow(a(), b())), sharp(&a(), &b(), &v("g")), nn(&a()), b()),
        (MuContext::new(), sharp(&a(), &a(), &MuTerm::lam("x", a(), v("x"))), nn(&a()), a()),
    ];
    for (ctx, f, dom, cod) in &focal_maps {
        match check_focal(ctx, f, dom, cod, Theory::LambdaMu2P) {
            Ok(out) if out.certificate().is_some() => {}
            other => fails.push(format!("{f} not certified: {other:?}")),
        }
        let s1 = dom.as_neg().and_then(|t| t.as_neg()).expect("¬¬σ").clone();
        let round = sharp(&s1, cod, &flat(&s1, f));
        expect_equal(&mut fails, &format!("(f♭)♯ for {f}"), ctx, &round, f, Theory::LambdaMu2P);
    }
    done(fails)
}

fn weak_initiality() -> Outcome {
    let mut fails = Vec::new();
    let x = || MuType::var("X");
    let s = MuType::var("s");
    for body in [x(), a(), arrow(a(), x())] {
        let scheme = TypeScheme::new("X", body.clone());
        let mu = scheme.inductive();
        let ctx = MuContext::new().with_var("alg", arrow(scheme.apply(&s), s.clone()));
        let fold_a = MuTerm::app(fold(&scheme, &s), v("alg"));
        let Ok(inn) = in_map(&scheme) else {
            fails.push(format!("in for {body}"));
            continue;
        };
        let Ok(fmap) = functorial_action(&scheme, &mu, &s, &fold_a) else {
            fails.push(format!("F[fold] for {body}"));
            continue;
        };
        let dom = scheme.apply(&mu);
        let lhs = MuTerm::compose(fold_a.clone(), inn, dom.clone());
        let rhs = MuTerm::compose(v("alg"), fmap, dom);
        expect_equal(&mut fails, &format!("F[X] = {body}"), &ctx, &lhs, &rhs, Theory::BetaEta);
    }
    done(fails)
}

fn church_numerals() -> Outcome {
    let mut fails = Vec::new();
    let s = a();
    let ctx = MuContext::new().with_var("z", s.clone()).with_var("f", arrow(s.clone(), s.clone()));
    let p = phi(&s, &v("z"), &v("f"));
    expect_equal(&mut fails, "(φ)ₒ = a", &ctx, &g_zero(&s, &p), &v("z"), Theory::LambdaMu2P);
    expect_equal(&mut fails, "(φ)ₛ = f", &ctx, &g_succ(&s, &p), &v("f"), Theory::LambdaMu2P);
    let empty = MuContext::new();
    for n in 0..4 {
        match eq_mu(&empty, &exotic_numeral(), &church(n), Theory::LambdaMu2P) {
            Ok(verdict) if !verdict.is_equal() => {}
            other => fails.push(format!("exotic vs church({n}): {other:?}")),
        }
    }
    expect_equal(&mut fails, "exotic unfolded", &empty, &exotic_numeral(), &exotic_numeral_unfolded(), Theory::LambdaMu2P);
    done(fails)
}

fn l_monad() -> Outcome {
    let mut fails = Vec::new();
    for s in [a(), arrow(a(), b())] {
        let ls = l_type(&s);
        let lls = l_type(&ls);
        let ctx = MuContext::new();
        let id = |t: &MuType| MuTerm::lam("y", t.clone(), v("y"));
        let c = |g: MuTerm, f: MuTerm, d: &MuType| MuTerm::compose(g, f, d.clone());
        expect_equal(&mut fails, &format!("μ∘η_L at {s}"), &ctx, &c(l_mu(&s), l_eta(&ls), &ls), &id(&ls), Theory::LambdaMu2P);
        expect_equal(
            &mut fails,
            &format!("μ∘L(η) at {s}"),
            &ctx,
            &c(l_mu(&s), l_map(&s, &ls, &l_eta(&s)), &ls),
            &id(&ls),
            Theory::LambdaMu2P,
        );
        let lll = l_type(&lls);
        expect_equal(
            &mut fails,
            &format!("μ∘L(μ) = μ∘μ at {s}"),
            &ctx,
            &c(l_mu(&s), l_map(&lls, &ls, &l_mu(&s)), &lll),
            &c(l_mu(&s), l_mu(&ls), &lll),
            Theory::LambdaMu2P,
        );
        expect_equal(&mut fails, &format!("α∘η at {s}"), &ctx, &c(l_alpha(&s), l_eta(&s), &s), &id(&s), Theory::LambdaMu2P);
        expect_equal(
            &mut fails,
            &format!("α∘μ = α∘L(α) at {s}"),
            &ctx,
            &c(l_alpha(&s), l_mu(&s), &lls),
            &c(l_alpha(&s), l_map(&ls, &s, &l_alpha(&s)), &lls),
            Theory::LambdaMu2P,
        );
    }
    done(fails)
}

/// Criterion 11. Returns the failures and whether the only failure is
/// the Peirce clause.
fn focality() -> (Outcome, bool) {
    let mut fails = Vec::new();
    let ab = arrow(a(), b());
    let ctx = MuContext::new().with_var("n", a());
    let inst_dom = MuType::forall("X", arrow(a(), MuType::var("X")));
    let maps: Vec<(&str, MuTerm, MuType, MuType)> = vec![
        ("identity", MuTerm::lam("x", ab.clone(), v("x")), ab.clone(), ab.clone()),
        ("abort", abort(&ab), MuType::bottom(), ab.clone()),
        ("application", MuTerm::lam("x", ab.clone(), MuTerm::app(v("x"), v("n"))), ab.clone(), b()),
        ("instantiation", MuTerm::lam("x", inst_dom.clone(), MuTerm::ty_app(v("x"), b())), inst_dom, ab.clone()),
    ];
    let mut certs: Vec<(String, FocalityCertificate)> = Vec::new();
    for (name, f, dom, cod) in &maps {
        match check_focal(&ctx, f, dom, cod, Theory::LambdaMu2P) {
            Ok(out) => match out.certificate() {
                Some(c) => certs.push((name.to_string(), c.clone())),
                None => fails.push(format!("{name}: no certificate")),
            },
            Err(e) => fails.push(format!("{name}: {e}")),
        }
    }
    let base = certs.clone();
    for (fname, f) in &base {
        for (hname, h) in &base {
            if f.cod != h.dom {
                continue;
            }
            match compose(f, h) {
                Ok(c) => certs.push((format!("{hname} ∘ {fname}"), c)),
                Err(e) => fails.push(format!("{hname} ∘ {fname}: {e}")),
            }
        }
    }
    for (name, c) in &certs {
        let rep = check_repeatable(&c.ctx, &c.subject, &c.dom, &c.cod, Theory::LambdaMu2P);
        let dis = check_discardable(&c.ctx, &c.subject, &c.dom, &c.cod, Theory::LambdaMu2P);
        match (rep, dis) {
            (Ok(r), Ok(d)) if r.is_equal() && d.is_equal() => {}
            other => fails.push(format!("{name}: repeatable/discardable {other:?}")),
        }
    }
    let others_ok = fails.is_empty();
    let pdom = arrow(arrow(a(), b()), a());
    match check_focal(&MuContext::new(), &peirce(&a(), &b()), &pdom, &a(), Theory::LambdaMu2P) {
        Ok(out) if out.certificate().is_none() => {}
        Ok(out) => fails.push(format!(
            "Peirce yields a certificate with transformer {}",
            out.certificate().map(|c| c.transformer.to_string()).unwrap_or_default()
        )),
        Err(e) => fails.push(format!("Peirce: {e}")),
    }
    let only_peirce = others_ok && !fails.is_empty();
    (done(fails), only_peirce)
}

/// `MU2FORGE_GOLDEN` if set, otherwise the `golden` directory of this
/// source tree.
pub fn default_golden_dir() -> PathBuf {
    std::env::var_os("MU2FORGE_GOLDEN")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden"))
}

/// Golden files holding the free theorem of each named closed type.
pub fn golden_types() -> Vec<(&'static str, MuType)> {
    let constant = MuType::forall("X", arrow(arrow(top(), MuType::var("X")), MuType::var("X")));
    vec![("bottom", MuType::bottom()), ("top", top()), ("nat", nat_type()), ("constant_inductive", constant)]
}

fn free_theorem_goldens(golden_dir: &Path) -> Outcome {
    let mut fails = Vec::new();
    for (name, ty) in golden_types() {
        let path = golden_dir.join(format!("free_theorem_{name}.txt"));
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        match free_theorem(&ty) {
            Ok(f) if format!("{f}\n") == want => {}
            Ok(f) => fails.push(format!("{name}: emitted `{f}` differs from {}", path.display())),
            Err(e) => fails.push(format!("{name}: {e}")),
        }
    }
    let s = a();
    let bottom_thm = free_theorem(&MuType::bottom()).expect("closed");
    let cert = check_focal(&MuContext::new(), &abort(&s), &MuType::bottom(), &s, Theory::LambdaMu2P).expect("abort checks");
    match instantiate_graph(&bottom_thm, &abort(&s), &MuType::bottom(), &s, cert.certificate()) {
        Ok(obs) => {
            let want_lhs = MuTerm::app(abort(&s), MuTerm::ty_app(v("x"), MuType::bottom()));
            let want_rhs = MuTerm::ty_app(v("x"), s.clone());
            let shape = obs.len() == 1
                && obs[0].equation.as_ref().is_some_and(|e| e.lhs == want_lhs && e.rhs == want_rhs);
            if !shape {
                fails.push("graph of A_σ does not reduce to A_σ(x ⊥) = x σ".into());
            }
            match discharge(obs, Theory::LambdaMu2P) {
                Ok(d) if d.iter().all(|d| matches!(d.status, DischargeStatus::Confirmed)) => {}
                other => fails.push(format!("A_σ(x ⊥) = x σ not confirmed: {other:?}")),
            }
        }
        Err(e) => fails.push(format!("instantiate at A_σ: {e}")),
    }
    let ctx = MuContext::new().with_var("x", MuType::bottom());
    expect_equal(&mut fails, "x ⊥ = x", &ctx, &MuTerm::ty_app(v("x"), MuType::bottom()), &v("x"), Theory::LambdaMu2P);
    done(fails)
}

fn disclosure() -> Outcome {
    let mut fails = Vec::new();
    let obs = parametricity_obligations();
    for tag in ["final-coalgebra", "negation-isomorphism", "inductive-initiality", "continuation-monad-isomorphism"] {
        if !obs.iter().any(|o| o.tag == tag) {
            fails.push(format!("missing obligation {tag}"));
        }
    }
    for o in &obs {
        if o.statement.is_empty() {
            fails.push(format!("{}: empty statement", o.tag));
        }
    }
    done(fails)
}


#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub golden_dir: PathBuf,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, golden_dir: default_golden_dir() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
    /// The failure is a defect of the criterion itself, not of the
    /// implementation.
    pub known_defect: bool,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            write!(f, "PASS {}: {}", self.index, self.name)
        } else {
            write!(f, "FAIL {}: {}: {}", self.index, self.name, self.failures.join("; "))
        }
    }
}

pub const CRITERIA: [&str; 13] = [
    "type soundness of the translation",
    "equational soundness",
    "fullness round trip",
    "substitution lemmas",
    "equations on named terms",
    "double-negation elimination",
    "focal decomposition",
    "weak initiality",
    "Church numerals",
    "L monad",
    "focality",
    "free-theorem goldens",
    "parametricity obligations stay open",
];

/// Runs criterion `index` (1-based).
pub fn run_criterion(index: usize, config: &SuiteConfig) -> CriterionResult {
    let plain = |o: Outcome| (o, false);
    let (outcome, defect) = match index {
        1 => plain(type_soundness(config.seed)),
        2 => plain(equational_soundness()),
        3 => plain(fullness()),
        4 => plain(substitution_lemmas(config.seed)),
        5 => plain(named_equations()),
        6 => plain(double_negation()),
        7 => plain(focal_decomposition()),
        8 => plain(weak_initiality()),
        9 => plain(church_numerals()),
        10 => plain(l_monad()),
        11 => focality(),
        12 => plain(free_theorem_goldens(&config.golden_dir)),
        13 => plain(disclosure()),
        _ => (Err(vec![format!("no criterion {index}")]), false),
    };
    let failures = outcome.err().unwrap_or_default();
    CriterionResult {
        index,
        name: CRITERIA.get(index.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: failures.is_empty(),
        known_defect: defect && !failures.is_empty(),
        failures,
    }
}

/// Runs every criterion in order.
pub fn run(config: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|i| run_criterion(i, config)).collect()
}
