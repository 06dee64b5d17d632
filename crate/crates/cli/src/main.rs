//! Command-line front end for the mu2forge kernel.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mu2forge::cps::cps_judgement;
use mu2forge::encodings::CATALOG;
use mu2forge::focality::{check_focal, FocalOutcome};
use mu2forge::freethm::{discharge, free_theorem, instantiate_graph, DischargeStatus};
use mu2forge::inverse::invert;
use mu2forge::mu::{MuContext, MuType};
use mu2forge::normalizer::{canonicalize, eq_target_traced, EqReport, EqVerdict, Step};
use mu2forge::parse::{
    elaborate_mu, elaborate_target, parse_mu_context, parse_mu_type, parse_target_context, MuElaborated,
};
use mu2forge::suite::{self, SuiteConfig};
use mu2forge::target::{Mode, TargetContext};
use mu2forge::theory::{eq_mu_traced, Theory};

#[derive(Parser)]
#[command(name = "mu2forge", version, about = "Second-order λμ-calculus kernel and CPS toolkit")]
struct Cli {
    /// Equality theory for λμ2 terms.
    #[arg(long, global = true, value_enum, default_value = "p")]
    theory: TheoryArg,
    /// Normalizer mode for target terms.
    #[arg(long, global = true, value_enum, default_value = "parametric")]
    mode: ModeArg,
    /// Print rewrite traces after the result.
    #[arg(long, global = true)]
    trace: bool,
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    BetaEta,
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Parametric,
}

#[derive(Subcommand)]
enum Command {
    /// Infer the type of a term.
    Typecheck {
        term: String,
        /// `x : t, y : u | a : s`; free variables not listed are inferred.
        #[arg(long, default_value = "")]
        ctx: String,
        /// Read a target term instead of a λμ2 term.
        #[arg(long)]
        target: bool,
    },
    /// Translate a λμ2 term and print the canonical form of its image.
    Cps {
        term: String,
        #[arg(long, default_value = "")]
        ctx: String,
        /// Print the translation before normalization.
        #[arg(long)]
        raw: bool,
    },
    /// Invert the canonical form of a target term back to λμ2.
    Uncps {
        term: String,
        /// Target context `x : t, y : u`.
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Canonical form of a target term.
    Normalize {
        term: String,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Decide an equation; exits 1 when the sides are distinct.
    Eq {
        left: String,
        right: String,
        #[arg(long, default_value = "")]
        ctx: String,
        /// Compare target terms under `--mode` instead.
        #[arg(long)]
        target: bool,
    },
    /// Search for a focality certificate; exits 1 when none is found.
    FocalCheck {
        map: String,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Free theorem of a closed λμ2 type.
    FreeTheorem {
        ty: String,
        /// Instantiate the relation with the graph of this focal map and
        /// discharge the resulting equations; exits 1 if any stays open.
        #[arg(long)]
        graph: Option<String>,
    },
    /// List the combinator catalog.
    Catalog,
    /// Run the acceptance corpus.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to MU2FORGE_GOLDEN, then the source tree's golden files.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

/// Exit status of a completed command, or an input error.
type Outcome = Result<bool, String>;

struct Out {
    trace: bool,
    json: bool,
}

impl Out {
    /// Prints `text` or, with `--json`, the serialized value.
    fn emit<T: Serialize>(&self, text: impl FnOnce() -> String, value: &T) {
        if self.json {
            line(&serde_json::to_string_pretty(value).expect("serializable"));
        } else {
            line(&text());
        }
    }

    fn steps(&self, label: &str, trace: &[Step]) {
        if self.trace && !self.json {
            line(&format!("# {label}"));
            for s in trace {
                line(&s.to_string());
            }
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn line(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn theory(t: TheoryArg) -> Theory {
    match t {
        TheoryArg::BetaEta => Theory::BetaEta,
        TheoryArg::P => Theory::LambdaMu2P,
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Plain => Mode::Plain,
        ModeArg::Parametric => Mode::Parametric,
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn show_mu_ctx(ctx: &MuContext) -> String {
    let zone = |z: &[(String, MuType)]| z.iter().map(|(x, t)| format!("{x} : {t}")).collect::<Vec<_>>().join(", ");
    match (ctx.gamma.is_empty(), ctx.delta.is_empty()) {
        (_, true) => zone(&ctx.gamma),
        (true, false) => format!("| {}", zone(&ctx.delta)),
        (false, false) => format!("{} | {}", zone(&ctx.gamma), zone(&ctx.delta)),
    }
}

fn show_target_ctx(ctx: &TargetContext) -> String {
    ctx.vars.iter().map(|(x, t)| format!("{x} : {t}")).collect::<Vec<_>>().join(", ")
}

fn judgement(ctx: String, term: String, ty: String) -> String {
    if ctx.is_empty() {
        format!("{term} : {ty}")
    } else {
        format!("{ctx} ⊢ {term} : {ty}")
    }
}

fn mu_input(src: &str, ctx: &str) -> Result<MuElaborated, String> {
    let ctx = parse_mu_context(ctx).map_err(err)?;
    elaborate_mu(src, &ctx, None).map_err(err)
}

#[derive(Serialize)]
struct JudgementReport<C, M, T> {
    ctx: C,
    term: M,
    ty: T,
}

fn typecheck(out: &Out, src: &str, ctx: &str, target: bool) -> Outcome {
    if target {
        let ctx = parse_target_context(ctx).map_err(err)?;
        let e = elaborate_target(src, &ctx, None).map_err(err)?;
        out.emit(
            || judgement(show_target_ctx(&e.ctx), e.term.to_string(), e.ty.to_string()),
            &JudgementReport { ctx: &e.ctx, term: &e.term, ty: &e.ty },
        );
    } else {
        let e = mu_input(src, ctx)?;
        out.emit(
            || judgement(show_mu_ctx(&e.ctx), e.term.to_string(), e.ty.to_string()),
            &JudgementReport { ctx: &e.ctx, term: &e.term, ty: &e.ty },
        );
    }
    Ok(true)
}

fn cps(out: &Out, src: &str, ctx: &str, raw: bool, mode: Mode) -> Outcome {
    let e = mu_input(src, ctx)?;
    let image = cps_judgement(&e.ctx, &e.term).map_err(err)?;
    if raw {
        out.emit(|| image.term.to_string(), &image);
        return Ok(true);
    }
    let c = canonicalize(&image.ctx, &image.term, &image.ty, mode).map_err(err)?;
    out.emit(|| c.form.term().relabel_bound().to_string(), &c.form);
    out.steps("canonicalization", &c.trace);
    Ok(true)
}

fn uncps(out: &Out, src: &str, ctx: &str, mode: Mode) -> Outcome {
    let ctx = parse_target_context(ctx).map_err(err)?;
    let e = elaborate_target(src, &ctx, None).map_err(err)?;
    let c = canonicalize(&e.ctx, &e.term, &e.ty, mode).map_err(err)?;
    let inverted = invert(&e.ctx, &c.form).map_err(err)?;
    out.emit(|| inverted.to_string(), &inverted);
    out.steps("canonicalization", &c.trace);
    Ok(true)
}

fn normalize(out: &Out, src: &str, ctx: &str, mode: Mode) -> Outcome {
    let ctx = parse_target_context(ctx).map_err(err)?;
    let e = elaborate_target(src, &ctx, None).map_err(err)?;
    let c = canonicalize(&e.ctx, &e.term, &e.ty, mode).map_err(err)?;
    out.emit(|| c.form.term().relabel_bound().to_string(), &c.form);
    out.steps("canonicalization", &c.trace);
    Ok(true)
}

fn eq(out: &Out, left: &str, right: &str, ctx: &str, target: bool, theory: Theory, mode: Mode) -> Outcome {
    let report: EqReport = if target {
        let ctx = parse_target_context(ctx).map_err(err)?;
        let l = elaborate_target(left, &ctx, None).map_err(err)?;
        let r = elaborate_target(right, &l.ctx, Some(&l.ty)).map_err(err)?;
        eq_target_traced(&r.ctx, &l.term, &r.term, mode).map_err(err)?
    } else {
        let l = mu_input(left, ctx)?;
        let r = elaborate_mu(right, &l.ctx, Some(&l.ty)).map_err(err)?;
        eq_mu_traced(&r.ctx, &l.term, &r.term, theory).map_err(err)?
    };
    out.emit(
        || match &report.verdict {
            EqVerdict::Equal { form } => format!("Equal\n{}", form.term().relabel_bound()),
            EqVerdict::Distinct { left, right } => {
                format!("Distinct\n{}\n{}", left.term().relabel_bound(), right.term().relabel_bound())
            }
        },
        &report.verdict,
    );
    out.steps("left", &report.left_trace);
    out.steps("right", &report.right_trace);
    Ok(report.verdict.is_equal())
}

fn arrow_parts(ty: &MuType) -> Result<(MuType, MuType), String> {
    match ty {
        MuType::Arrow(d, c) => Ok(((**d).clone(), (**c).clone())),
        other => Err(format!("expected a map, found a term of type {other}")),
    }
}

fn focal_check(out: &Out, src: &str, ctx: &str, theory: Theory) -> Outcome {
    let e = mu_input(src, ctx)?;
    let (dom, cod) = arrow_parts(&e.ty)?;
    let outcome = check_focal(&e.ctx, &e.term, &dom, &cod, theory).map_err(err)?;
    out.emit(
        || match &outcome {
            FocalOutcome::Certified(c) => format!("Certified\n{} : {} ⊢ {}", c.cont, mu2forge::cps::cps_type(&c.cod), c.transformer),
            FocalOutcome::NoCertificate { evidence } => format!("NoCertificate\n{}", evidence.term()),
        },
        &outcome,
    );
    if let FocalOutcome::Certified(c) = &outcome {
        out.steps("canonicalization", &c.trace);
    }
    Ok(outcome.certificate().is_some())
}

fn free_thm(out: &Out, ty: &str, graph: Option<&str>, theory: Theory) -> Outcome {
    let ty = parse_mu_type(ty).map_err(err)?;
    let formula = free_theorem(&ty).map_err(err)?;
    let Some(map) = graph else {
        out.emit(|| formula.to_string(), &formula);
        return Ok(true);
    };
    let e = mu_input(map, "")?;
    let (dom, cod) = arrow_parts(&e.ty)?;
    let focal = check_focal(&e.ctx, &e.term, &dom, &cod, theory).map_err(err)?;
    let obligations = instantiate_graph(&formula, &e.term, &dom, &cod, focal.certificate()).map_err(err)?;
    let discharged = discharge(obligations, theory).map_err(err)?;
    out.emit(
        || {
            let mut text = formula.to_string();
            for d in &discharged {
                let status = match &d.status {
                    DischargeStatus::Confirmed => "confirmed".to_string(),
                    DischargeStatus::Open { reason } => format!("open: {reason}"),
                };
                let body = match &d.obligation.equation {
                    Some(eq) => format!("{} = {}", eq.lhs, eq.rhs),
                    None => d.obligation.conclusion.to_string(),
                };
                text.push_str(&format!("\n{body}  [{status}]"));
            }
            text
        },
        &discharged,
    );
    Ok(discharged.iter().all(|d| matches!(d.status, DischargeStatus::Confirmed)))
}

fn catalog(out: &Out) -> Outcome {
    out.emit(
        || {
            CATALOG
                .iter()
                .map(|e| {
                    let head = if e.params.is_empty() { e.name.to_string() } else { format!("{}[{}]", e.name, e.params.join(", ")) };
                    format!("{head:<20} {}", e.description)
                })
                .collect::<Vec<_>>()
                .join("\n")
        },
        &CATALOG,
    );
    Ok(true)
}

fn run_suite(out: &Out, config: SuiteConfig, only: Option<usize>) -> Outcome {
    let indices: Vec<usize> = match only {
        Some(i) if (1..=suite::CRITERIA.len()).contains(&i) => vec![i],
        Some(i) => return Err(format!("no criterion {i}; criteria are 1 to {}", suite::CRITERIA.len())),
        None => (1..=suite::CRITERIA.len()).collect(),
    };
    let results: Vec<_> = std::thread::scope(|s| {
        let config = &config;
        let handles: Vec<_> = indices.iter().map(|&i| s.spawn(move || suite::run_criterion(i, config))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    out.emit(|| results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"), &results);
    Ok(results.iter().all(|r| r.passed || r.known_defect))
}

fn run(cli: Cli) -> Outcome {
    let out = Out { trace: cli.trace, json: cli.json };
    let (theory, mode) = (theory(cli.theory), mode(cli.mode));
    match cli.command {
        Command::Typecheck { term, ctx, target } => typecheck(&out, &term, &ctx, target),
        Command::Cps { term, ctx, raw } => cps(&out, &term, &ctx, raw, mode),
        Command::Uncps { term, ctx } => uncps(&out, &term, &ctx, mode),
        Command::Normalize { term, ctx } => normalize(&out, &term, &ctx, mode),
        Command::Eq { left, right, ctx, target } => eq(&out, &left, &right, &ctx, target, theory, mode),
        Command::FocalCheck { map, ctx } => focal_check(&out, &map, &ctx, theory),
        Command::FreeTheorem { ty, graph } => free_thm(&out, &ty, graph.as_deref(), theory),
        Command::Catalog => catalog(&out),
        Command::Suite { seed, golden_dir, criterion } => {
            let golden_dir = golden_dir.unwrap_or_else(suite::default_golden_dir);
            run_suite(&out, SuiteConfig { seed, golden_dir }, criterion)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
