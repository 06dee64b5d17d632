//! Browser demo bindings. Each export takes surface syntax and returns a
//! JSON report; errors come back as strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use mu2forge::cps::cps_judgement;
use mu2forge::freethm::free_theorem as free_theorem_of;
use mu2forge::normalizer::{canonicalize, EqVerdict};
use mu2forge::parse::{elaborate_mu, parse_mu_context, parse_mu_type};
use mu2forge::target::Mode;
use mu2forge::theory::{eq_mu, Theory};

#[derive(Debug, Serialize)]
pub struct CpsReport {
    pub term: String,
    pub ty: String,
    pub image_ty: String,
    pub category: &'static str,
    pub canonical: String,
}

#[derive(Debug, Serialize)]
pub struct EqReport {
    pub equal: bool,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Serialize)]
pub struct FreeTheoremReport {
    pub text: String,
    pub formula: mu2forge::freethm::RelFormula,
}

/// Typechecks a λμ2 term and translates it to its canonical CPS image.
pub fn cps_report(src: &str, ctx: &str) -> Result<CpsReport, String> {
    let ctx = parse_mu_context(ctx).map_err(|e| e.to_string())?;
    let e = elaborate_mu(src, &ctx, None).map_err(|e| e.to_string())?;
    let image = cps_judgement(&e.ctx, &e.term).map_err(|e| e.to_string())?;
    let c = canonicalize(&image.ctx, &image.term, &image.ty, Mode::Parametric).map_err(|e| e.to_string())?;
    Ok(CpsReport {
        term: e.term.to_string(),
        ty: e.ty.to_string(),
        image_ty: image.ty.to_string(),
        category: c.form.category(),
        canonical: c.form.term().relabel_bound().to_string(),
    })
}

/// Decides `left = right`; `theory` is `p` or `beta-eta`.
pub fn eq_report(left: &str, right: &str, ctx: &str, theory: &str) -> Result<EqReport, String> {
    let theory = match theory {
        "p" => Theory::LambdaMu2P,
        "beta-eta" => Theory::BetaEta,
        other => return Err(format!("unknown theory `{other}`; use `p` or `beta-eta`")),
    };
    let ctx = parse_mu_context(ctx).map_err(|e| e.to_string())?;
    let l = elaborate_mu(left, &ctx, None).map_err(|e| e.to_string())?;
    let r = elaborate_mu(right, &l.ctx, Some(&l.ty)).map_err(|e| e.to_string())?;
    let verdict = eq_mu(&r.ctx, &l.term, &r.term, theory).map_err(|e| e.to_string())?;
    Ok(match verdict {
        EqVerdict::Equal { form } => {
            let t = form.term().relabel_bound().to_string();
            EqReport { equal: true, left: t.clone(), right: t }
        }
        EqVerdict::Distinct { left, right } => EqReport {
            equal: false,
            left: left.term().relabel_bound().to_string(),
            right: right.term().relabel_bound().to_string(),
        },
    })
}

/// The free theorem of a closed λμ2 type.
pub fn free_theorem_report(ty: &str) -> Result<FreeTheoremReport, String> {
    let ty = parse_mu_type(ty).map_err(|e| e.to_string())?;
    let formula = free_theorem_of(&ty).map_err(|e| e.to_string())?;
    Ok(FreeTheoremReport { text: formula.to_string(), formula })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.map(|v| serde_json::to_string(&v).expect("serializable")).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cps(term: &str, ctx: &str) -> Result<String, JsValue> {
    to_js(cps_report(term, ctx))
}

#[wasm_bindgen]
pub fn eq(left: &str, right: &str, ctx: &str, theory: &str) -> Result<String, JsValue> {
    to_js(eq_report(left, right, ctx, theory))
}

#[wasm_bindgen]
pub fn free_theorem(ty: &str) -> Result<String, JsValue> {
    to_js(free_theorem_report(ty))
}
