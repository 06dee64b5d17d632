//! Property tests over seeded, well-typed generated terms.

use mu2forge::cps::{check_type_soundness, cps_judgement, term_subst_commutes, type_in_term_subst_commutes, type_subst_commutes};
use mu2forge::mu::{typecheck_mu, MuContext, MuTerm, MuType};
use mu2forge::normalizer::{canonicalize, eq_target};
use mu2forge::parse::{parse_mu_term, parse_mu_type, parse_target_term};
use mu2forge::target::Mode;
use mu2forge::theory::{eq_mu, gen_judgement, gen_typed_term, Theory};
use proptest::prelude::*;

const BUDGET: usize = 10;

fn judgement(seed: u64) -> Option<(MuContext, MuTerm, MuType)> {
    gen_judgement(seed, BUDGET).ok()
}

/// A context variable and a generated term of its type.
fn substitution_instance(seed: u64) -> Option<(MuContext, MuTerm, String, MuTerm)> {
    let (ctx, m, _) = judgement(seed)?;
    let (x, t) = ctx.gamma.first()?.clone();
    let n = gen_typed_term(seed.wrapping_add(1), 6, &ctx, &t).ok()?;
    Some((ctx, m, x, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parser_round_trips_mu(seed in any::<u64>()) {
        let Some((_, m, ty)) = judgement(seed) else { return Ok(()) };
        prop_assert_eq!(parse_mu_term(&m.to_string()).unwrap(), m.clone());
        prop_assert_eq!(parse_mu_term(&m.to_ascii()).unwrap(), m);
        prop_assert_eq!(parse_mu_type(&ty.to_string()).unwrap(), ty.clone());
        prop_assert_eq!(parse_mu_type(&ty.to_ascii()).unwrap(), ty);
    }

    #[test]
    fn parser_round_trips_target(seed in any::<u64>()) {
        let Some((ctx, m, _)) = judgement(seed) else { return Ok(()) };
        let out = cps_judgement(&ctx, &m).unwrap();
        prop_assert_eq!(parse_target_term(&out.term.to_string()).unwrap(), out.term.clone());
        prop_assert_eq!(parse_target_term(&out.term.to_ascii()).unwrap(), out.term);
    }

    #[test]
    fn relabeling_is_an_idempotent_alpha_renaming(seed in any::<u64>()) {
        let Some((ctx, m, _)) = judgement(seed) else { return Ok(()) };
        let t = cps_judgement(&ctx, &m).unwrap().term;
        let r = t.relabel_bound();
        prop_assert_eq!(&r, &t);
        prop_assert_eq!(r.relabel_bound().to_string(), r.to_string());
    }

    #[test]
    fn cps_preserves_typing(seed in any::<u64>()) {
        let Some((ctx, m, _)) = judgement(seed) else { return Ok(()) };
        let report = check_type_soundness(&ctx, &m);
        prop_assert!(report.is_ok(), "{}: {:?}", m, report.err());
    }

    #[test]
    fn substitution_preserves_types(seed in any::<u64>()) {
        let Some((ctx, m, x, n)) = substitution_instance(seed) else { return Ok(()) };
        let before = typecheck_mu(&ctx, &m).unwrap();
        prop_assert_eq!(typecheck_mu(&ctx, &m.subst_term(&x, &n)).unwrap(), before);
    }

    #[test]
    fn term_substitution_commutes_with_cps(seed in any::<u64>()) {
        let Some((ctx, m, x, n)) = substitution_instance(seed) else { return Ok(()) };
        prop_assert!(term_subst_commutes(&ctx, &m, &x, &n).unwrap(), "{}[{}/{}]", m, n, x);
    }

    #[test]
    fn type_substitution_commutes_with_cps(seed in any::<u64>()) {
        let Some((ctx, m, ty)) = judgement(seed) else { return Ok(()) };
        let s = MuType::arrow(ty.clone(), MuType::var("b"));
        prop_assert!(type_subst_commutes(&ty, "a", &s));
        prop_assert!(type_in_term_subst_commutes(&ctx, &m, "a", &s).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let Some((ctx, m, _)) = judgement(seed) else { return Ok(()) };
        let out = cps_judgement(&ctx, &m).unwrap();
        for mode in [Mode::Plain, Mode::Parametric] {
            let once = canonicalize(&out.ctx, &out.term, &out.ty, mode).unwrap();
            let twice = canonicalize(&out.ctx, once.form.term(), &out.ty, mode).unwrap();
            prop_assert_eq!(once.form.term(), twice.form.term());
            prop_assert!(twice.trace.is_empty() || eq_target(&out.ctx, once.form.term(), twice.form.term(), mode).unwrap().is_equal());
        }
    }

    #[test]
    fn equality_is_invariant_under_renaming_and_beta(seed in any::<u64>()) {
        let Some((ctx, m, ty)) = judgement(seed) else { return Ok(()) };
        let taken = m.all_identifiers();
        let z = mu2forge::names::fresh("z", |c| taken.contains(c));
        let w = mu2forge::names::fresh("w", |c| taken.contains(c) || c == z);
        let redex = MuTerm::app(MuTerm::lam(z.clone(), ty.clone(), MuTerm::var(z)), m.clone());
        prop_assert!(eq_mu(&ctx, &redex, &m, Theory::BetaEta).unwrap().is_equal());
        let renamed = MuTerm::app(MuTerm::lam(w.clone(), ty, MuTerm::var(w)), m.clone());
        prop_assert!(eq_mu(&ctx, &redex, &renamed, Theory::BetaEta).unwrap().is_equal());
    }
}
