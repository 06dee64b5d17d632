//! Printers for lambda-mu types and terms. `Display` produces UTF-8 with
//! sugar restored (`⊥`, `¬σ`, `[β]M`, `𝛍α.M`); `to_ascii` produces the
//! surface syntax accepted by the parser.

use std::fmt;

use super::syntax::{MuTerm, MuType};

pub(crate) struct Style {
    pub bottom: &'static str,
    pub not: &'static str,
    pub arrow: &'static str,
    pub forall: &'static str,
    pub lam: &'static str,
    pub tylam: &'static str,
    pub mu: &'static str,
    pub bold_mu: &'static str,
}

pub(crate) const UNICODE: Style = Style {
    bottom: "⊥",
    not: "¬",
    arrow: " → ",
    forall: "∀",
    lam: "λ",
    tylam: "Λ",
    mu: "μ",
    bold_mu: "𝛍",
};

pub(crate) const ASCII: Style = Style {
    bottom: "bot",
    not: "not ",
    arrow: " -> ",
    forall: "forall ",
    lam: "\\",
    tylam: "/\\",
    mu: "mu ",
    bold_mu: "bmu ",
};

// Type precedence: 0 = anywhere, 1 = left of an arrow, 2 = operand of negation.
pub(crate) fn write_type(out: &mut String, t: &MuType, prec: u8, st: &Style) {
    if t.is_bottom() {
        out.push_str(st.bottom);
        return;
    }
    match t {
        MuType::Var(x) => out.push_str(x),
        MuType::Arrow(a, _) if t.as_neg().is_some() => {
            out.push_str(st.not);
            write_type(out, a, 2, st);
        }
        MuType::Arrow(a, b) => {
            if prec > 0 {
                out.push('(');
            }
            write_type(out, a, 1, st);
            out.push_str(st.arrow);
            write_type(out, b, 0, st);
            if prec > 0 {
                out.push(')');
            }
        }
        MuType::Forall(x, body) => {
            if prec > 0 {
                out.push('(');
            }
            out.push_str(st.forall);
            out.push_str(x);
            out.push_str(". ");
            write_type(out, body, 0, st);
            if prec > 0 {
                out.push(')');
            }
        }
    }
}

// Term precedence: 0 = anywhere, 1 = function position, 2 = argument.
fn write_term(out: &mut String, m: &MuTerm, prec: u8, st: &Style) {
    let binder = |out: &mut String, f: &dyn Fn(&mut String)| {
        if prec > 0 {
            out.push('(');
        }
        f(out);
        if prec > 0 {
            out.push(')');
        }
    };
    if let Some((alpha, ty, body)) = m.as_bold_mu() {
        binder(out, &|out| {
            out.push_str(st.bold_mu);
            out.push_str(alpha);
            out.push(':');
            write_type(out, ty, 0, st);
            out.push_str(". ");
            write_term(out, body, 0, st);
        });
        return;
    }
    if let Some((beta, body)) = m.as_named() {
        binder(out, &|out| {
            out.push('[');
            out.push_str(beta);
            out.push_str("] ");
            write_term(out, body, 0, st);
        });
        return;
    }
    match m {
        MuTerm::Var(x) => out.push_str(x),
        MuTerm::Lam(x, t, body) => binder(out, &|out| {
            out.push_str(st.lam);
            out.push_str(x);
            out.push(':');
            write_type(out, t, 0, st);
            out.push_str(". ");
            write_term(out, body, 0, st);
        }),
        MuTerm::TyLam(x, body) => binder(out, &|out| {
            out.push_str(st.tylam);
            out.push_str(x);
            out.push_str(". ");
            write_term(out, body, 0, st);
        }),
        MuTerm::Mu(a, t, b, body) => binder(out, &|out| {
            out.push_str(st.mu);
            out.push_str(a);
            out.push(':');
            write_type(out, t, 0, st);
            out.push_str(". [");
            out.push_str(b);
            out.push_str("] ");
            write_term(out, body, 0, st);
        }),
        MuTerm::App(f, a) => {
            if prec > 1 {
                out.push('(');
            }
            write_term(out, f, 1, st);
            out.push(' ');
            write_term(out, a, 2, st);
            if prec > 1 {
                out.push(')');
            }
        }
        MuTerm::TyApp(f, t) => {
            if prec > 1 {
                out.push('(');
            }
            write_term(out, f, 1, st);
            out.push_str(" [");
            write_type(out, t, 0, st);
            out.push(']');
            if prec > 1 {
                out.push(')');
            }
        }
    }
}

impl MuType {
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        write_type(&mut s, self, 0, &ASCII);
        s
    }
}

impl MuTerm {
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        write_term(&mut s, self, 0, &ASCII);
        s
    }
}

impl fmt::Display for MuType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_type(&mut s, self, 0, &UNICODE);
        f.write_str(&s)
    }
}

impl fmt::Display for MuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self, 0, &UNICODE);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resugars_types() {
        let s = MuType::var("s");
        assert_eq!(s.clone().neg().neg().to_string(), "¬¬s");
        assert_eq!(MuType::arrow(s.clone().neg(), s.clone()).to_ascii(), "not s -> s");
        let t = MuType::arrow(MuType::arrow(s.clone(), s.clone()), s.clone());
        assert_eq!(t.to_string(), "(s → s) → s");
        assert_eq!(MuType::bottom().to_string(), "⊥");
    }

    #[test]
    fn resugars_terms() {
        let m = MuTerm::bold_mu("a", MuType::var("s"), MuTerm::named("b", MuTerm::var("x")));
        assert_eq!(m.to_string(), "𝛍a:s. [b] x");
        let app = MuTerm::app(MuTerm::lam("x", MuType::var("s"), MuTerm::var("x")), MuTerm::var("y"));
        assert_eq!(app.to_ascii(), "(\\x:s. x) y");
    }
}
