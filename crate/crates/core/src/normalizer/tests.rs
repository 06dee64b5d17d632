use super::*;
use crate::cps::cps_judgement;
use crate::mu::{MuContext, MuTerm, MuType};

fn a() -> MuType {
    MuType::var("a")
}

fn eq_mu_via_cps(ctx: &MuContext, m: &MuTerm, n: &MuTerm, mode: Mode) -> EqReport {
    let l = cps_judgement(ctx, m).unwrap();
    let r = cps_judgement(ctx, n).unwrap();
    eq_target_traced(&l.ctx, &l.term, &r.term, mode).unwrap()
}

#[test]
fn eta_expanded_identity_is_equal() {
    let f = MuType::arrow(a(), a());
    let m = MuTerm::lam("f", f.clone(), MuTerm::var("f"));
    let n = MuTerm::lam(
        "f",
        f,
        MuTerm::lam("y", a(), MuTerm::app(MuTerm::var("f"), MuTerm::var("y"))),
    );
    let r = eq_mu_via_cps(&MuContext::new(), &m, &n, Mode::Plain);
    assert!(r.verdict.is_equal(), "{:?}", r.verdict);
}

#[test]
fn projections_are_distinct() {
    let k = MuTerm::lam("x", a(), MuTerm::lam("y", a(), MuTerm::var("x")));
    let kk = MuTerm::lam("x", a(), MuTerm::lam("y", a(), MuTerm::var("y")));
    let r = eq_mu_via_cps(&MuContext::new(), &k, &kk, Mode::Plain);
    assert!(!r.verdict.is_equal());
}

#[test]
fn beta_redex_equals_contractum() {
    let id = MuTerm::lam("x", a(), MuTerm::var("x"));
    let ctx = MuContext::new().with_var("v", a());
    let m = MuTerm::app(id, MuTerm::var("v"));
    let r = eq_mu_via_cps(&ctx, &m, &MuTerm::var("v"), Mode::Plain);
    assert!(r.verdict.is_equal());
}

#[test]
fn traces_replay_to_the_canonical_form() {
    let ctx = MuContext::new().with_var("g", MuType::arrow(a(), MuType::arrow(a(), a())));
    let m = MuTerm::lam("x", a(), MuTerm::apps(MuTerm::var("g"), [MuTerm::var("x"), MuTerm::var("x")]));
    let out = cps_judgement(&ctx, &m).unwrap();
    let c = canonicalize(&out.ctx, &out.term, &out.ty, Mode::Plain).unwrap();
    let replayed = replay(&out.ctx, &out.term, Mode::Plain, &c.trace).unwrap();
    assert_eq!(&replayed, c.form.term());
    let text: String = c.trace.iter().map(|s| format!("{s}\n")).collect();
    assert_eq!(parse_trace(&text).unwrap(), c.trace);
}

#[test]
fn canonicalization_is_idempotent() {
    let ctx = MuContext::new().with_var("g", MuType::arrow(a(), MuType::arrow(a(), a())));
    let m = MuTerm::lam("x", a(), MuTerm::apps(MuTerm::var("g"), [MuTerm::var("x"), MuTerm::var("x")]));
    let out = cps_judgement(&ctx, &m).unwrap();
    for mode in [Mode::Plain, Mode::Parametric] {
        let once = canonicalize(&out.ctx, &out.term, &out.ty, mode).unwrap();
        let twice = canonicalize(&out.ctx, once.form.term(), &out.ty, mode).unwrap();
        assert_eq!(once.form, twice.form);
    }
}

#[test]
fn categories_follow_the_type() {
    let ctx = MuContext::new().with_var("v", a());
    let out = cps_judgement(&ctx, &MuTerm::var("v")).unwrap();
    let c = canonicalize(&out.ctx, &out.term, &out.ty, Mode::Plain).unwrap();
    assert_eq!(c.form.category(), "program");
}
