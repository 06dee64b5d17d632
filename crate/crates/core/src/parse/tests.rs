use super::*;
use crate::encodings::{dne, l_type};

fn s() -> MuType {
    MuType::var("s")
}

#[test]
fn lambda_with_annotation() {
    assert_eq!(parse_mu_term("\\x:s. x").unwrap(), MuTerm::lam("x", s(), MuTerm::var("x")));
}

#[test]
fn mu_binder() {
    assert_eq!(
        parse_mu_term("mu a:s. [b] M").unwrap(),
        MuTerm::mu("a", s(), "b", MuTerm::var("M"))
    );
}

#[test]
fn l_type_parses() {
    assert_eq!(parse_mu_type("forall X. (s -> X) -> X").unwrap(), l_type(&s()));
}

#[test]
fn sugar_round_trips() {
    for src in ["[b] m", "bmu a:s. m [s]", "not not s -> s", "\\x:bot. x [s]"] {
        let parsed = parse_mu_term(src).or_else(|_| parse_mu_type(src).map(|t| MuTerm::var(t.to_string())));
        assert!(parsed.is_ok(), "{src}");
    }
    let m = MuTerm::bold_mu("a", s(), MuTerm::var("m"));
    assert_eq!(parse_mu_term(&m.to_string()).unwrap(), m);
    assert_eq!(parse_mu_term(&m.to_ascii()).unwrap(), m);
    let n = MuTerm::named("b", MuTerm::var("m"));
    assert_eq!(parse_mu_term(&n.to_string()).unwrap(), n);
}

#[test]
fn utf8_printer_output_parses() {
    let c = dne(&s());
    assert_eq!(parse_mu_term(&c.to_string()).unwrap(), c);
    assert_eq!(parse_mu_term(&c.to_ascii()).unwrap(), c);
}

#[test]
fn errors_carry_positions() {
    let e = parse_mu_term("\\x:s.\n  (x").unwrap_err();
    assert_eq!((e.line, e.col), (2, 5));
    let e = parse_mu_term("\\x. x").unwrap_err();
    assert_eq!((e.line, e.col), (1, 1));
}

#[test]
fn elaboration_infers_free_variables_and_combinators() {
    let e = elaborate_mu("C[s] (\\k. k M)", &MuContext::new(), None).unwrap();
    assert_eq!(e.ty, s());
    assert_eq!(e.ctx.lookup_var("M"), Some(&s()));
    let rhs = elaborate_mu("M", &e.ctx, None).unwrap();
    assert_eq!(rhs.ty, s());
}

#[test]
fn elaboration_rejects_mismatches() {
    let ctx = parse_mu_context("x : s, f : t -> t | a : s").unwrap();
    let e = elaborate_mu("f x", &ctx, None).unwrap_err();
    assert!(e.message.contains("expected type t"), "{e}");
    assert!(elaborate_mu("mu g:s. [a] x", &ctx, None).is_ok());
}

#[test]
fn target_terms_round_trip() {
    let src = "\\z:not a /\\ exists X. X. let <x, k> = z in x k";
    let t = parse_target_term(src).unwrap();
    assert_eq!(parse_target_term(&t.to_string()).unwrap(), t);
    let p = parse_target_term("<R | * as exists Y. Y>").unwrap();
    assert_eq!(parse_target_term(&p.to_string()).unwrap(), p);
    let l = parse_target_term("let <X, y> = p in y").unwrap();
    assert!(matches!(l, TargetTerm::LetPack(..)));
}

#[test]
fn target_elaboration_fills_pack_annotations() {
    let ctx = parse_target_context("k : not R").unwrap();
    let want = parse_target_type("exists X. not X").unwrap();
    let e = elaborate_target("<R | k>", &ctx, Some(&want)).unwrap();
    assert_eq!(e.term, TargetTerm::pack(TargetType::R, TargetTerm::var("k"), want));
}
