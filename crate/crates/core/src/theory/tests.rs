use super::*;
use crate::encodings::dne;
use crate::mu::MuType;

fn a() -> MuType {
    MuType::var("a")
}

#[test]
fn core_axioms_hold_in_beta_eta() {
    for eq in core_axioms() {
        let v = eq.check(Theory::BetaEta).unwrap_or_else(|e| panic!("{}: {e}", eq.name));
        assert!(v.is_equal(), "{eq}: {v:?}");
    }
}

#[test]
fn named_term_equations_hold_with_terminal_falsity() {
    for eq in named_term_equations() {
        let v = eq.check(Theory::LambdaMu2P).unwrap_or_else(|e| panic!("{}: {e}", eq.name));
        assert!(v.is_equal(), "{eq}: {v:?}");
    }
}

#[test]
fn additional_axioms_need_terminal_falsity() {
    for ax in additional_axioms() {
        for eq in ax.presentations() {
            let p = eq.check(Theory::LambdaMu2P).unwrap_or_else(|e| panic!("{}: {e}", eq.name));
            assert!(p.is_equal(), "{eq} under p");
            let be = eq.check(Theory::BetaEta).unwrap();
            assert!(!be.is_equal(), "{eq} under beta-eta");
        }
    }
}

#[test]
fn double_negation_elimination_cancels() {
    let ctx = MuContext::new().with_var("m", a());
    let lhs = MuTerm::app(
        dne(&a()),
        MuTerm::lam("k", a().neg(), MuTerm::app(MuTerm::var("k"), MuTerm::var("m"))),
    );
    assert!(eq_mu(&ctx, &lhs, &MuTerm::var("m"), Theory::LambdaMu2P).unwrap().is_equal());
}

#[test]
fn mu_eta_example() {
    let ctx = MuContext::new().with_var("m", a());
    let lhs = MuTerm::mu("al", a(), "al", MuTerm::var("m"));
    assert!(eq_mu(&ctx, &lhs, &MuTerm::var("m"), Theory::BetaEta).unwrap().is_equal());
}

#[test]
fn mismatched_types_are_rejected() {
    let ctx = MuContext::new().with_var("m", a()).with_var("n", MuType::var("b"));
    assert!(matches!(
        eq_mu(&ctx, &MuTerm::var("m"), &MuTerm::var("n"), Theory::BetaEta),
        Err(TheoryError::TypeMismatch { .. })
    ));
}

#[test]
fn generator_small_goals() {
    let id = MuType::arrow(a(), a());
    let m = gen_typed_term(0, 2, &MuContext::new(), &id).unwrap();
    assert_eq!(m, MuTerm::lam("x", a(), MuTerm::var("x")));
    let ab = MuType::arrow(MuType::bottom(), a());
    let found = (0..50).any(|seed| {
        gen_typed_term(seed, 3, &MuContext::new(), &ab)
            .is_ok_and(|m| m == MuTerm::lam("x", MuType::bottom(), MuTerm::ty_app(MuTerm::var("x"), a())))
    });
    assert!(found);
    assert_eq!(gen_typed_term(1, 0, &MuContext::new(), &id), Err(GenError::EmptyBudget));
}

#[test]
fn generator_is_deterministic_and_well_typed() {
    for seed in 0..200 {
        let Ok((ctx, m, ty)) = gen_judgement(seed, 12) else { continue };
        assert_eq!(crate::mu::typecheck_mu(&ctx, &m).unwrap(), ty, "{m}");
        assert_eq!(gen_judgement(seed, 12).unwrap().1, m);
    }
}
