//! Equation schemas instantiated with fresh constants: schematic types
//! become type variables, schematic terms become typed variables of `Γ`,
//! schematic names become names of `Δ`.

use serde::Serialize;

use super::{eq_mu, Theory, TheoryError};
use crate::encodings::abort;
use crate::mu::{MixedMode, MuContext, MuTerm, MuType};
use crate::normalizer::EqVerdict;

/// A closed instance `Γ ⊢ lhs = rhs | Δ` of an equation schema.
#[derive(Debug, Clone, Serialize)]
pub struct Equation {
    pub name: String,
    #[serde(skip)]
    pub ctx: MuContext,
    #[serde(serialize_with = "term_text")]
    pub lhs: MuTerm,
    #[serde(serialize_with = "term_text")]
    pub rhs: MuTerm,
}

fn term_text<S: serde::Serializer>(t: &MuTerm, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl Equation {
    pub fn new(name: impl Into<String>, ctx: MuContext, lhs: MuTerm, rhs: MuTerm) -> Self {
        Equation {
            name: name.into(),
            ctx,
            lhs,
            rhs,
        }
    }

    pub fn check(&self, theory: Theory) -> Result<EqVerdict, TheoryError> {
        eq_mu(&self.ctx, &self.lhs, &self.rhs, theory)
    }
}

impl std::fmt::Display for Equation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}

fn v(x: &str) -> MuTerm {
    MuTerm::var(x)
}

fn t(x: &str) -> MuType {
    MuType::var(x)
}

fn arr(a: MuType, b: MuType) -> MuType {
    MuType::arrow(a, b)
}

/// `μα.[head]body` after the mixed substitution `[β'](− arg)/[α](−)`,
/// including the head position itself.
fn mixed_command(alpha: &str, head: &str, body: &MuTerm, new: &str, mode: MixedMode) -> (String, MuTerm) {
    let body2 = body.mixed_subst(alpha, new, mode.clone());
    if head == alpha {
        let wrapped = match mode {
            MixedMode::AppArg(n) => MuTerm::app(body2, n),
            MixedMode::TyArg(s) => MuTerm::ty_app(body2, s),
            MixedMode::Rename => body2,
        };
        (new.to_string(), wrapped)
    } else {
        (head.to_string(), body2)
    }
}

/// The eight βη and μ axioms of λμ2.
pub fn core_axioms() -> Vec<Equation> {
    let mut out = Vec::new();

    let ctx = MuContext::new()
        .with_var("f", arr(t("a"), arr(t("a"), t("b"))))
        .with_var("g", arr(t("c"), t("a")))
        .with_var("w", t("c"));
    let m = MuTerm::apps(v("f"), [v("x"), v("x")]);
    let n = MuTerm::app(v("g"), v("w"));
    out.push(Equation::new(
        "beta",
        ctx,
        MuTerm::app(MuTerm::lam("x", t("a"), m.clone()), n.clone()),
        m.subst_term("x", &n),
    ));

    let ctx = MuContext::new().with_var("m", arr(t("a"), t("b")));
    out.push(Equation::new(
        "eta",
        ctx,
        MuTerm::lam("x", t("a"), MuTerm::app(v("m"), v("x"))),
        v("m"),
    ));

    let body = MuTerm::lam(
        "x",
        t("X"),
        MuTerm::lam("y", arr(t("X"), t("b")), MuTerm::app(v("y"), v("x"))),
    );
    let s = arr(t("a"), t("c"));
    out.push(Equation::new(
        "type beta",
        MuContext::new(),
        MuTerm::ty_app(MuTerm::ty_lam("X", body.clone()), s.clone()),
        body.subst_type("X", &s),
    ));

    let ctx = MuContext::new().with_var("m", MuType::forall("X", arr(arr(t("X"), t("X")), t("b"))));
    out.push(Equation::new(
        "type eta",
        ctx,
        MuTerm::ty_lam("X", MuTerm::ty_app(v("m"), t("X"))),
        v("m"),
    ));

    // μα.[β](μγ.[δ]L) = μα.[δ]L[β/γ], with L mentioning α and γ.
    let ctx = MuContext::new()
        .with_var("k", arr(t("a"), arr(t("a"), t("c"))))
        .with_var("w", t("b"))
        .with_var("u", t("a"))
        .with_name("be", t("b"))
        .with_name("de", t("c"));
    let l = MuTerm::apps(
        v("k"),
        [MuTerm::mu("e", t("a"), "ga", v("w")), MuTerm::mu("z", t("a"), "al", v("u"))],
    );
    out.push(Equation::new(
        "mu rename",
        ctx,
        MuTerm::mu("al", t("a"), "be", MuTerm::mu("ga", t("b"), "de", l.clone())),
        MuTerm::mu("al", t("a"), "de", l.rename_name("ga", "be")),
    ));

    let ctx = MuContext::new()
        .with_var("f", arr(t("b"), t("a")))
        .with_var("w", t("c"))
        .with_name("de", t("c"));
    let m = MuTerm::app(v("f"), MuTerm::mu("e", t("b"), "de", v("w")));
    out.push(Equation::new("mu eta", ctx, MuTerm::mu("al", t("a"), "al", m.clone()), m));

    // (μα^{a→b}.[α]M) N = μβ^b.([α]M)[[β](− N)/[α](−)].
    let ctx = MuContext::new()
        .with_var("f", arr(t("c"), arr(t("a"), t("b"))))
        .with_var("g", arr(t("a"), t("b")))
        .with_var("n", t("a"));
    let m = MuTerm::app(v("f"), MuTerm::mu("e", t("c"), "al", v("g")));
    let (head, body) = mixed_command("al", "al", &m, "be", MixedMode::AppArg(v("n")));
    out.push(Equation::new(
        "mu app",
        ctx,
        MuTerm::app(MuTerm::mu("al", arr(t("a"), t("b")), "al", m), v("n")),
        MuTerm::mu("be", t("b"), head, body),
    ));

    // (μα^{∀X.X→b}.[α]M) c = μβ^{c→b}.([α]M)[[β](− c)/[α](−)].
    let poly = MuType::forall("X", arr(t("X"), t("b")));
    let ctx = MuContext::new()
        .with_var("f", arr(t("c"), poly.clone()))
        .with_var("g", poly.clone());
    let m = MuTerm::app(v("f"), MuTerm::mu("e", t("c"), "al", v("g")));
    let (head, body) = mixed_command("al", "al", &m, "be", MixedMode::TyArg(t("c")));
    out.push(Equation::new(
        "mu type app",
        ctx,
        MuTerm::ty_app(MuTerm::mu("al", poly, "al", m), t("c")),
        MuTerm::mu("be", arr(t("c"), t("b")), head, body),
    ));

    out
}

/// A `⊥`-typed term using the name `alpha` at type `ty`:
/// `q (λy^c.⟦α⟧(g y))` with `q : ¬¬c`, `g : c → ty`.
fn bottom_body(ctx: MuContext, alpha: &str, ty: MuType) -> (MuContext, MuTerm) {
    let ctx = ctx
        .with_var("q", t("c").neg().neg())
        .with_var("g", arr(t("c"), ty));
    let m = MuTerm::app(
        v("q"),
        MuTerm::lam("y", t("c"), MuTerm::named(alpha, MuTerm::app(v("g"), v("y")))),
    );
    (ctx, m)
}

/// The four equations on named terms and bold μ-abstractions that hold
/// once `∃X.X` is terminal in the target.
pub fn named_term_equations() -> Vec<Equation> {
    let mut out = Vec::new();
    let (ctx, m) = bottom_body(MuContext::new().with_var("n", t("a")), "al", arr(t("a"), t("b")));
    out.push(Equation::new(
        "bold mu app",
        ctx,
        MuTerm::app(MuTerm::bold_mu("al", arr(t("a"), t("b")), m.clone()), v("n")),
        MuTerm::bold_mu("be", t("b"), m.mixed_subst("al", "be", MixedMode::AppArg(v("n")))),
    ));

    let poly = MuType::forall("X", arr(t("X"), t("b")));
    let (ctx, m) = bottom_body(MuContext::new(), "al", poly.clone());
    out.push(Equation::new(
        "bold mu type app",
        ctx,
        MuTerm::ty_app(MuTerm::bold_mu("al", poly, m.clone()), t("a")),
        MuTerm::bold_mu(
            "be",
            arr(t("a"), t("b")),
            m.mixed_subst("al", "be", MixedMode::TyArg(t("a"))),
        ),
    ));

    let (ctx, m) = bottom_body(MuContext::new().with_name("al2", t("a")), "al", t("a"));
    out.push(Equation::new(
        "named bold mu",
        ctx,
        MuTerm::named("al2", MuTerm::bold_mu("al", t("a"), m.clone())),
        m.rename_name("al", "al2"),
    ));

    let (ctx, m) = bottom_body(MuContext::new().with_name("de", t("a")), "de", t("a"));
    let ctx = ctx.with_name("al", MuType::bottom());
    out.push(Equation::new("named at bottom", ctx, MuTerm::named("al", m.clone()), m));
    out
}

/// One additional axiom in its three equivalent presentations.
#[derive(Debug, Clone, Serialize)]
pub struct AdditionalAxiom {
    pub name: &'static str,
    /// The map is discardable: `f ∘ A_σ₁ = A_σ₂`.
    pub discardable: Equation,
    /// The corresponding equation on an arbitrary `M : ⊥`.
    pub bottom: Equation,
    /// The corresponding structural equation on bold μ-abstractions.
    pub bold_mu: Equation,
}

impl AdditionalAxiom {
    pub fn presentations(&self) -> [&Equation; 3] {
        [&self.discardable, &self.bottom, &self.bold_mu]
    }
}

/// `λy^⊥.f (A_σ₁ y) = λy^⊥.A_σ₂ y`, both sides η-expanded.
fn discardable(name: &str, ctx: MuContext, f: MuTerm, s1: &MuType, s2: &MuType) -> Equation {
    let y = || v("y0");
    let bot = MuType::bottom;
    Equation::new(
        name,
        ctx,
        MuTerm::lam("y0", bot(), MuTerm::app(f, MuTerm::app(abort(s1), y()))),
        MuTerm::lam("y0", bot(), MuTerm::app(abort(s2), y())),
    )
}

/// The instantiation maps `λx.x N`, `λx.x σ₁` and the throw `λx.⟦α⟧x`.
pub fn additional_axioms() -> Vec<AdditionalAxiom> {
    let named = named_term_equations();
    let bot = MuType::bottom;
    let mut out = Vec::new();

    let ab = arr(t("a"), t("b"));
    let ctx = MuContext::new().with_var("n", t("a"));
    let app_n = MuTerm::lam("x", ab.clone(), MuTerm::app(v("x"), v("n")));
    out.push(AdditionalAxiom {
        name: "application to an argument",
        discardable: discardable("discard app", ctx.clone(), app_n, &ab, &t("b")),
        bottom: Equation::new(
            "bottom app",
            ctx.with_var("m", bot()),
            MuTerm::app(MuTerm::ty_app(v("m"), ab), v("n")),
            MuTerm::ty_app(v("m"), t("b")),
        ),
        bold_mu: named[0].clone(),
    });

    let poly = MuType::forall("X", arr(t("X"), t("b")));
    let inst = arr(t("a"), t("b"));
    let ty_app = MuTerm::lam("x", poly.clone(), MuTerm::ty_app(v("x"), t("a")));
    out.push(AdditionalAxiom {
        name: "instantiation at a type",
        discardable: discardable("discard type app", MuContext::new(), ty_app, &poly, &inst),
        bottom: Equation::new(
            "bottom type app",
            MuContext::new().with_var("m", bot()),
            MuTerm::ty_app(MuTerm::ty_app(v("m"), poly), t("a")),
            MuTerm::ty_app(v("m"), inst),
        ),
        bold_mu: named[1].clone(),
    });

    let ctx = MuContext::new().with_name("al", t("a"));
    let throw = MuTerm::lam("x", t("a"), MuTerm::named("al", v("x")));
    out.push(AdditionalAxiom {
        name: "throw to a name",
        discardable: discardable("discard throw", ctx.clone(), throw, &t("a"), &bot()),
        bottom: Equation::new(
            "bottom throw",
            ctx.with_var("m", bot()),
            MuTerm::named("al", MuTerm::ty_app(v("m"), t("a"))),
            v("m"),
        ),
        bold_mu: named[2].clone(),
    });
    out
}
