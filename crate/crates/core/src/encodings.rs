//! Classical and impredicative encodings: double-negation elimination,
//! Peirce, abort, the `L` monad, focal decomposition, inductive types
//! `μX.F[X]` with fold/in, and Church numerals.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::mu::{MuTerm, MuType};
use crate::names::fresh;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("unknown combinator `{0}`")]
    UnknownCombinator(String),
    #[error("`{name}` takes {expected} type parameter(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{var}` occurs negatively in {scheme}")]
    NegativeOccurrence { var: String, scheme: String },
}

fn v(x: &str) -> MuTerm {
    MuTerm::var(x)
}

fn tv(x: &str) -> MuType {
    MuType::var(x)
}

fn arrow(a: MuType, b: MuType) -> MuType {
    MuType::arrow(a, b)
}

fn taken_by(tys: &[&MuType]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in tys {
        t.identifiers(&mut out);
    }
    out
}

/// A type variable named like `base` that is free in none of `tys`.
fn fresh_tyvar(base: &str, tys: &[&MuType]) -> String {
    let taken = taken_by(tys);
    fresh(base, |c| taken.contains(c))
}

/// `¬¬σ = (σ → ⊥) → ⊥`.
pub fn neg_neg(s: &MuType) -> MuType {
    s.clone().neg().neg()
}

/// Double-negation elimination `C_σ = λm^{¬¬σ}.𝛍α^σ.m (λx^σ.⟦α⟧x)`.
pub fn dne(s: &MuType) -> MuTerm {
    MuTerm::lam(
        "m",
        neg_neg(s),
        MuTerm::bold_mu(
            "a",
            s.clone(),
            MuTerm::app(v("m"), MuTerm::lam("x", s.clone(), MuTerm::named("a", v("x")))),
        ),
    )
}

/// Peirce's law `P = λm.μα^{σ1}.[α](m (λx^{σ1}.μβ^{σ2}.[α]x))`.
pub fn peirce(s1: &MuType, s2: &MuType) -> MuTerm {
    let m_ty = arrow(arrow(s1.clone(), s2.clone()), s1.clone());
    MuTerm::lam(
        "m",
        m_ty,
        MuTerm::mu(
            "a",
            s1.clone(),
            "a",
            MuTerm::app(
                v("m"),
                MuTerm::lam("x", s1.clone(), MuTerm::mu("b", s2.clone(), "a", v("x"))),
            ),
        ),
    )
}

/// Ex falso `A_σ = λx^⊥.x σ`.
pub fn abort(s: &MuType) -> MuTerm {
    MuTerm::lam("x", MuType::bottom(), MuTerm::ty_app(v("x"), s.clone()))
}

/// `L σ = ∀X.(σ → X) → X`.
pub fn l_type(s: &MuType) -> MuType {
    let x = fresh_tyvar("X", &[s]);
    MuType::forall(x.clone(), arrow(arrow(s.clone(), tv(&x)), tv(&x)))
}

/// Unit `η = λx^σ.ΛX.λk^{σ→X}.k x`.
pub fn l_eta(s: &MuType) -> MuTerm {
    let x = fresh_tyvar("X", &[s]);
    MuTerm::lam(
        "x",
        s.clone(),
        MuTerm::ty_lam(x.clone(), MuTerm::lam("k", arrow(s.clone(), tv(&x)), MuTerm::app(v("k"), v("x")))),
    )
}

/// Multiplication `μ = λz^{L²σ}.ΛX.λk^{σ→X}.z X (λy^{Lσ}.y X k)`.
pub fn l_mu(s: &MuType) -> MuTerm {
    let ls = l_type(s);
    let x = fresh_tyvar("X", &[s, &ls]);
    let body = MuTerm::apps(
        MuTerm::ty_app(v("z"), tv(&x)),
        [MuTerm::lam("y", ls.clone(), MuTerm::app(MuTerm::ty_app(v("y"), tv(&x)), v("k")))],
    );
    MuTerm::lam(
        "z",
        l_type(&ls),
        MuTerm::ty_lam(x.clone(), MuTerm::lam("k", arrow(s.clone(), tv(&x)), body)),
    )
}

/// Functorial action `L(f) = λy^{Lσ1}.ΛX.λh^{σ2→X}.y X (h ∘ f)`.
pub fn l_map(s1: &MuType, s2: &MuType, f: &MuTerm) -> MuTerm {
    let x = fresh_tyvar("X", &[s1, s2]);
    let taken: BTreeSet<String> = f.free_vars();
    let y = fresh("y", |c| taken.contains(c));
    let h = fresh("h", |c| taken.contains(c) || c == y);
    MuTerm::lam(
        y.clone(),
        l_type(s1),
        MuTerm::ty_lam(
            x.clone(),
            MuTerm::lam(
                h.clone(),
                arrow(s2.clone(), tv(&x)),
                MuTerm::app(MuTerm::ty_app(v(&y), tv(&x)), MuTerm::compose(v(&h), f.clone(), s1.clone())),
            ),
        ),
    )
}

/// The canonical algebra `α_σ = λy^{Lσ}.y σ (λx^σ.x)`.
pub fn l_alpha(s: &MuType) -> MuTerm {
    MuTerm::lam(
        "y",
        l_type(s),
        MuTerm::app(MuTerm::ty_app(v("y"), s.clone()), MuTerm::lam("x", s.clone(), v("x"))),
    )
}

/// `g♯ = λm.𝛍β^{σ2}.m (λx^{σ1}.⟦β⟧(g x))` for `g : σ1 → σ2`.
pub fn sharp(s1: &MuType, s2: &MuType, g: &MuTerm) -> MuTerm {
    let taken = g.free_vars();
    let m = fresh("m", |c| taken.contains(c));
    let x = fresh("x", |c| taken.contains(c) || c == m);
    let fnames = g.free_names();
    let b = fresh("b", |c| fnames.contains(c));
    MuTerm::lam(
        m.clone(),
        neg_neg(s1),
        MuTerm::bold_mu(
            b.clone(),
            s2.clone(),
            MuTerm::app(
                v(&m),
                MuTerm::lam(x.clone(), s1.clone(), MuTerm::named(b, MuTerm::app(g.clone(), v(&x)))),
            ),
        ),
    )
}

/// `f♭ = λx^{σ1}.f (λk.k x)` for `f : ¬¬σ1 → σ2`.
pub fn flat(s1: &MuType, f: &MuTerm) -> MuTerm {
    let taken = f.free_vars();
    let x = fresh("x", |c| taken.contains(c));
    let k = fresh("k", |c| taken.contains(c) || c == x);
    MuTerm::lam(
        x.clone(),
        s1.clone(),
        MuTerm::app(f.clone(), MuTerm::lam(k.clone(), s1.clone().neg(), MuTerm::app(v(&k), v(&x)))),
    )
}

/// A type with one distinguished variable, `F[X]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeScheme {
    pub var: String,
    #[serde(serialize_with = "type_text")]
    pub body: MuType,
}

fn type_text<S: serde::Serializer>(t: &MuType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

/// Polarity of the occurrences of a type variable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Variance {
    pub positive: bool,
    pub negative: bool,
}

impl TypeScheme {
    pub fn new(var: impl Into<String>, body: MuType) -> Self {
        TypeScheme { var: var.into(), body }
    }

    /// `F[σ]`.
    pub fn apply(&self, s: &MuType) -> MuType {
        self.body.subst(&self.var, s)
    }

    pub fn variance(&self) -> Variance {
        fn go(t: &MuType, x: &str, pos: bool, out: &mut Variance) {
            match t {
                MuType::Var(y) if y == x => {
                    if pos {
                        out.positive = true
                    } else {
                        out.negative = true
                    }
                }
                MuType::Var(_) => {}
                MuType::Arrow(a, b) => {
                    go(a, x, !pos, out);
                    go(b, x, pos, out);
                }
                MuType::Forall(y, b) if y != x => go(b, x, pos, out),
                MuType::Forall(..) => {}
            }
        }
        let mut out = Variance::default();
        go(&self.body, &self.var, true, &mut out);
        out
    }

    pub fn is_positive(&self) -> bool {
        !self.variance().negative
    }

    /// `μX.F[X] = ∀X.(F[X] → X) → X`.
    pub fn inductive(&self) -> MuType {
        let x = &self.var;
        MuType::forall(x.clone(), arrow(arrow(self.body.clone(), tv(x)), tv(x)))
    }
}

struct Action<'a> {
    var: &'a str,
    src: &'a MuType,
    dst: &'a MuType,
    fwd: &'a MuTerm,
    bwd: Option<&'a MuTerm>,
    taken: BTreeSet<String>,
}

impl Action<'_> {
    fn fresh(&mut self, base: &str) -> String {
        let n = fresh(base, |c| self.taken.contains(c));
        self.taken.insert(n.clone());
        n
    }

    /// Instance of `t` at the source (positive) or target type.
    fn inst(&self, t: &MuType, at_src: bool) -> MuType {
        t.subst(self.var, if at_src { self.src } else { self.dst })
    }

    /// A map `t[src] → t[dst]` when `pos`, `t[dst] → t[src]` otherwise;
    /// `None` stands for the identity.
    fn act(&mut self, t: &MuType, pos: bool) -> Result<Option<MuTerm>, EncodingError> {
        if !t.occurs_free(self.var) {
            return Ok(None);
        }
        match t {
            MuType::Var(_) => {
                if pos {
                    Ok(Some(self.fwd.clone()))
                } else {
                    self.bwd.cloned().map(Some).ok_or_else(|| EncodingError::NegativeOccurrence {
                        var: self.var.to_string(),
                        scheme: t.to_string(),
                    })
                }
            }
            MuType::Arrow(a, b) => {
                let h = self.fresh("h");
                let z = self.fresh("z");
                let arg_map = self.act(a, !pos)?;
                let res_map = self.act(b, pos)?;
                let arg = apply_opt(arg_map, v(&z));
                let body = apply_opt(res_map, MuTerm::app(v(&h), arg));
                Ok(Some(MuTerm::lam(
                    h,
                    self.inst(t, pos),
                    MuTerm::lam(z, self.inst(a, !pos), body),
                )))
            }
            MuType::Forall(y, body) => {
                let y2 = if self.src.occurs_free(y) || self.dst.occurs_free(y) {
                    let mut avoid = taken_by(&[self.src, self.dst, body]);
                    avoid.insert(self.var.to_string());
                    fresh(y, |c| avoid.contains(c))
                } else {
                    y.clone()
                };
                let body2 = body.subst(y, &tv(&y2));
                let h = self.fresh("h");
                let inner = self.act(&body2, pos)?;
                let whole = MuType::forall(y2.clone(), body2);
                Ok(Some(MuTerm::lam(
                    h.clone(),
                    self.inst(&whole, pos),
                    MuTerm::ty_lam(y2.clone(), apply_opt(inner, MuTerm::ty_app(v(&h), tv(&y2)))),
                )))
            }
        }
    }
}

fn apply_opt(f: Option<MuTerm>, a: MuTerm) -> MuTerm {
    match f {
        Some(f) => MuTerm::app(f, a),
        None => a,
    }
}

fn action(
    f_scheme: &TypeScheme,
    src: &MuType,
    dst: &MuType,
    fwd: &MuTerm,
    bwd: Option<&MuTerm>,
) -> Result<MuTerm, EncodingError> {
    let mut taken = fwd.all_identifiers();
    if let Some(b) = bwd {
        taken.extend(b.all_identifiers());
    }
    let mut act = Action {
        var: &f_scheme.var,
        src,
        dst,
        fwd,
        bwd,
        taken,
    };
    let map = act.act(&f_scheme.body, true)?;
    Ok(map.unwrap_or_else(|| {
        let y = act.fresh("y");
        MuTerm::lam(y.clone(), f_scheme.apply(src), v(&y))
    }))
}

/// `F[f] : F[A] → F[B]` for `f : A → B`; `X` must occur only positively.
pub fn functorial_action(f_scheme: &TypeScheme, src: &MuType, dst: &MuType, f: &MuTerm) -> Result<MuTerm, EncodingError> {
    action(f_scheme, src, dst, f, None)
}

/// `F[f, g] : F[A] → F[B]` using `f : A → B` at positive and `g : B → A`
/// at negative occurrences.
pub fn functorial_action_mixed(
    f_scheme: &TypeScheme,
    src: &MuType,
    dst: &MuType,
    f: &MuTerm,
    g: &MuTerm,
) -> Result<MuTerm, EncodingError> {
    action(f_scheme, src, dst, f, Some(g))
}

/// `fold_σ = λa^{F[σ]→σ}.λx^{μX.F[X]}.x σ a`.
pub fn fold(f_scheme: &TypeScheme, s: &MuType) -> MuTerm {
    MuTerm::lam(
        "a",
        arrow(f_scheme.apply(s), s.clone()),
        MuTerm::lam(
            "x",
            f_scheme.inductive(),
            MuTerm::app(MuTerm::ty_app(v("x"), s.clone()), v("a")),
        ),
    )
}

/// `in = λy.ΛX.λk^{F[X]→X}.k (F[fold_X k] y)`.
pub fn in_map(f_scheme: &TypeScheme) -> Result<MuTerm, EncodingError> {
    let mu = f_scheme.inductive();
    let x = fresh_tyvar(&f_scheme.var, &[&mu]);
    let xt = tv(&x);
    let fold_k = MuTerm::app(fold(f_scheme, &xt), v("k"));
    let fmap = functorial_action(f_scheme, &mu, &xt, &fold_k)?;
    Ok(MuTerm::lam(
        "y",
        f_scheme.apply(&mu),
        MuTerm::ty_lam(
            x.clone(),
            MuTerm::lam("k", arrow(f_scheme.apply(&xt), xt.clone()), MuTerm::app(v("k"), MuTerm::app(fmap, v("y")))),
        ),
    ))
}

/// `in♯ : ¬¬F[μX.F[X]] → μX.F[X]`.
pub fn in_sharp(f_scheme: &TypeScheme) -> Result<MuTerm, EncodingError> {
    Ok(sharp(&f_scheme.apply(&f_scheme.inductive()), &f_scheme.inductive(), &in_map(f_scheme)?))
}

/// Church numerals `N = ∀X.X → (X → X) → X`.
pub fn nat_type() -> MuType {
    MuType::forall("X", arrow(tv("X"), arrow(arrow(tv("X"), tv("X")), tv("X"))))
}

/// `ΛX.λx^X f^{X→X}.fⁿ x`.
pub fn church(n: usize) -> MuTerm {
    let body = (0..n).fold(v("x"), |acc, _| MuTerm::app(v("f"), acc));
    MuTerm::ty_lam(
        "X",
        MuTerm::lam("x", tv("X"), MuTerm::lam("f", arrow(tv("X"), tv("X")), body)),
    )
}

/// Successor `S = λn.ΛX.λx f.f (n X x f)`.
pub fn succ() -> MuTerm {
    MuTerm::lam(
        "n",
        nat_type(),
        MuTerm::ty_lam(
            "X",
            MuTerm::lam(
                "x",
                tv("X"),
                MuTerm::lam(
                    "f",
                    arrow(tv("X"), tv("X")),
                    MuTerm::app(v("f"), MuTerm::apps(MuTerm::ty_app(v("n"), tv("X")), [v("x"), v("f")])),
                ),
            ),
        ),
    )
}

/// The non-standard numeral `μα^N.[α](S (μβ^N.[α]O))`.
pub fn exotic_numeral() -> MuTerm {
    MuTerm::mu(
        "a",
        nat_type(),
        "a",
        MuTerm::app(succ(), MuTerm::mu("b", nat_type(), "a", church(0))),
    )
}

/// Its η-long form `ΛX.λx f.μα^X.[α](f (μβ^X.[α]x))`.
pub fn exotic_numeral_unfolded() -> MuTerm {
    MuTerm::ty_lam(
        "X",
        MuTerm::lam(
            "x",
            tv("X"),
            MuTerm::lam(
                "f",
                arrow(tv("X"), tv("X")),
                MuTerm::mu("a", tv("X"), "a", MuTerm::app(v("f"), MuTerm::mu("b", tv("X"), "a", v("x")))),
            ),
        ),
    )
}

/// `⊥ → (σ → ⊥) → ⊥`, the classical numeral signature at `σ`.
pub fn nat_signature(s: &MuType) -> MuType {
    arrow(MuType::bottom(), arrow(s.clone().neg(), MuType::bottom()))
}

/// `φ_{a,f} = λm.μα^σ.[α](m ⟦α⟧a (λy^σ.⟦α⟧(f y)) σ)`, i.e. the displayed
/// `μα.m (⟦α⟧a) (λy.⟦α⟧(f y))` with its `⊥`-typed body thrown at `α`.
pub fn phi(s: &MuType, a: &MuTerm, f: &MuTerm) -> MuTerm {
    let mut taken = a.free_vars();
    taken.extend(f.free_vars());
    let m = fresh("m", |c| taken.contains(c));
    let y = fresh("y", |c| taken.contains(c) || c == m);
    let mut names = a.free_names();
    names.extend(f.free_names());
    let al = fresh("a", |c| names.contains(c));
    MuTerm::lam(
        m.clone(),
        nat_signature(s),
        MuTerm::bold_mu(
            al.clone(),
            s.clone(),
            MuTerm::apps(
                v(&m),
                [
                    MuTerm::named(al.clone(), a.clone()),
                    MuTerm::lam(y.clone(), s.clone(), MuTerm::named(al.clone(), MuTerm::app(f.clone(), v(&y)))),
                ],
            ),
        ),
    )
}

/// `g_o = g (λx^⊥ k^{σ→⊥}.x)`.
pub fn g_zero(s: &MuType, g: &MuTerm) -> MuTerm {
    MuTerm::app(
        g.clone(),
        MuTerm::lam("x", MuType::bottom(), MuTerm::lam("k", s.clone().neg(), v("x"))),
    )
}

/// `g_s = λy^σ.g (λx^⊥ k^{σ→⊥}.k y)`.
pub fn g_succ(s: &MuType, g: &MuTerm) -> MuTerm {
    let taken = g.free_vars();
    let y = fresh("y", |c| taken.contains(c));
    MuTerm::lam(
        y.clone(),
        s.clone(),
        MuTerm::app(
            g.clone(),
            MuTerm::lam("x", MuType::bottom(), MuTerm::lam("k", s.clone().neg(), MuTerm::app(v("k"), v(&y)))),
        ),
    )
}

/// `fold_σ g = λn^N.n σ g_o g_s`.
pub fn fold_nat(s: &MuType, g: &MuTerm) -> MuTerm {
    let taken = g.free_vars();
    let n = fresh("n", |c| taken.contains(c));
    MuTerm::lam(
        n.clone(),
        nat_type(),
        MuTerm::apps(MuTerm::ty_app(v(&n), s.clone()), [g_zero(s, g), g_succ(s, g)]),
    )
}

/// One row of the combinator catalog.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "C", params: &["s"], description: "double-negation elimination ¬¬s → s" },
    CatalogEntry { name: "Peirce", params: &["s1", "s2"], description: "Peirce's law ((s1 → s2) → s1) → s1" },
    CatalogEntry { name: "Abort", params: &["s"], description: "ex falso ⊥ → s" },
    CatalogEntry { name: "L-eta", params: &["s"], description: "unit of the L monad, s → L s" },
    CatalogEntry { name: "L-mu", params: &["s"], description: "multiplication of the L monad, L L s → L s" },
    CatalogEntry { name: "L-map", params: &["s1", "s2"], description: "λf.L(f) : (s1 → s2) → L s1 → L s2" },
    CatalogEntry { name: "L-alpha", params: &["s"], description: "canonical L-algebra L s → s" },
    CatalogEntry { name: "sharp", params: &["s1", "s2"], description: "λg.g♯ : (s1 → s2) → ¬¬s1 → s2" },
    CatalogEntry { name: "flat", params: &["s1", "s2"], description: "λf.f♭ : (¬¬s1 → s2) → s1 → s2" },
    CatalogEntry { name: "in", params: &["F[X]"], description: "constructor F[μX.F[X]] → μX.F[X]" },
    CatalogEntry { name: "fold", params: &["F[X]", "s"], description: "iterator (F[s] → s) → μX.F[X] → s" },
    CatalogEntry { name: "in-sharp", params: &["F[X]"], description: "focal constructor ¬¬F[μX.F[X]] → μX.F[X]" },
    CatalogEntry { name: "O", params: &[], description: "Church zero" },
    CatalogEntry { name: "S", params: &[], description: "Church successor" },
    CatalogEntry { name: "phi", params: &["s"], description: "λa f.φ_{a,f} : s → (s → s) → (⊥ → ¬s → ⊥) → s" },
    CatalogEntry { name: "g_o", params: &["s"], description: "λg.g_o : ((⊥ → ¬s → ⊥) → s) → s" },
    CatalogEntry { name: "g_s", params: &["s"], description: "λg.g_s : ((⊥ → ¬s → ⊥) → s) → s → s" },
    CatalogEntry { name: "fold_N", params: &["s"], description: "λg.fold g : ((⊥ → ¬s → ⊥) → s) → N → s" },
    CatalogEntry { name: "exotic-numeral", params: &[], description: "a closed numeral equal to no Church numeral" },
];

/// Builds a catalog combinator. Term parameters of the displayed
/// definitions (such as `f` in `L(f)`) are λ-abstracted. Schemes `F[X]`
/// use the type variable `X` as the distinguished variable.
pub fn mk_combinator(name: &str, tys: &[MuType]) -> Result<MuTerm, EncodingError> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| EncodingError::UnknownCombinator(name.to_string()))?;
    if tys.len() != entry.params.len() {
        return Err(EncodingError::ArityMismatch {
            name: name.to_string(),
            expected: entry.params.len(),
            found: tys.len(),
        });
    }
    let scheme = || TypeScheme::new("X", tys[0].clone());
    let abstracted = |x: &str, ty: MuType, body: MuTerm| MuTerm::lam(x, ty, body);
    Ok(match name {
        "C" => dne(&tys[0]),
        "Peirce" => peirce(&tys[0], &tys[1]),
        "Abort" => abort(&tys[0]),
        "L-eta" => l_eta(&tys[0]),
        "L-mu" => l_mu(&tys[0]),
        "L-map" => abstracted("f", arrow(tys[0].clone(), tys[1].clone()), l_map(&tys[0], &tys[1], &v("f"))),
        "L-alpha" => l_alpha(&tys[0]),
        "sharp" => abstracted("g", arrow(tys[0].clone(), tys[1].clone()), sharp(&tys[0], &tys[1], &v("g"))),
        "flat" => abstracted("f", arrow(neg_neg(&tys[0]), tys[1].clone()), flat(&tys[0], &v("f"))),
        "in" => in_map(&scheme())?,
        "fold" => fold(&scheme(), &tys[1]),
        "in-sharp" => in_sharp(&scheme())?,
        "O" => church(0),
        "S" => succ(),
        "phi" => abstracted(
            "a0",
            tys[0].clone(),
            abstracted("f0", arrow(tys[0].clone(), tys[0].clone()), phi(&tys[0], &v("a0"), &v("f0"))),
        ),
        "g_o" => abstracted("g", arrow(nat_signature(&tys[0]), tys[0].clone()), g_zero(&tys[0], &v("g"))),
        "g_s" => abstracted("g", arrow(nat_signature(&tys[0]), tys[0].clone()), g_succ(&tys[0], &v("g"))),
        "fold_N" => abstracted("g", arrow(nat_signature(&tys[0]), tys[0].clone()), fold_nat(&tys[0], &v("g"))),
        "exotic-numeral" => exotic_numeral(),
        _ => unreachable!("catalog names are exhaustive"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mu::{typecheck_mu, MuContext};

    fn s() -> MuType {
        tv("s")
    }

    #[test]
    fn every_catalog_entry_typechecks() {
        for e in CATALOG {
            let tys: Vec<MuType> = e
                .params
                .iter()
                .enumerate()
                .map(|(i, p)| if p.starts_with('F') { arrow(tv("s"), tv("X")) } else { tv(&format!("s{i}")) })
                .collect();
            let m = mk_combinator(e.name, &tys).unwrap();
            typecheck_mu(&MuContext::new(), &m).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn displayed_types() {
        let ctx = MuContext::new();
        assert_eq!(typecheck_mu(&ctx, &abort(&s())).unwrap(), arrow(MuType::bottom(), s()));
        assert_eq!(typecheck_mu(&ctx, &dne(&s())).unwrap(), arrow(neg_neg(&s()), s()));
        assert_eq!(typecheck_mu(&ctx, &l_eta(&s())).unwrap(), arrow(s(), l_type(&s())));
        assert_eq!(typecheck_mu(&ctx, &exotic_numeral()).unwrap(), nat_type());
        assert_eq!(typecheck_mu(&ctx, &exotic_numeral_unfolded()).unwrap(), nat_type());
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(mk_combinator("Peirce", &[s()]), Err(EncodingError::ArityMismatch { .. })));
        assert!(matches!(mk_combinator("nope", &[]), Err(EncodingError::UnknownCombinator(_))));
    }

    #[test]
    fn variance_and_negative_schemes() {
        let pos = TypeScheme::new("X", arrow(arrow(tv("X"), MuType::bottom()), MuType::bottom()));
        assert!(pos.is_positive());
        let neg = TypeScheme::new("X", arrow(tv("X"), s()));
        assert!(!neg.is_positive());
        let f = MuTerm::lam("z", tv("a"), v("z"));
        assert!(matches!(
            functorial_action(&neg, &tv("a"), &tv("a"), &f),
            Err(EncodingError::NegativeOccurrence { .. })
        ));
        assert!(functorial_action_mixed(&neg, &tv("a"), &tv("a"), &f, &f).is_ok());
    }

    #[test]
    fn functorial_action_typechecks() {
        let ctx = MuContext::new().with_var("f", arrow(tv("a"), tv("b")));
        for body in [
            tv("X"),
            s(),
            arrow(s(), tv("X")),
            arrow(arrow(tv("X"), MuType::bottom()), MuType::bottom()),
            MuType::forall("Y", arrow(arrow(tv("X"), tv("Y")), tv("Y"))),
        ] {
            let sch = TypeScheme::new("X", body);
            let m = functorial_action(&sch, &tv("a"), &tv("b"), &v("f")).unwrap();
            let want = arrow(sch.apply(&tv("a")), sch.apply(&tv("b")));
            assert_eq!(typecheck_mu(&ctx, &m).unwrap(), want, "{}", sch.body);
        }
    }
}
