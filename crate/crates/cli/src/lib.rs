//! Command line front end: argument handling, dispatch and output.
//!
//! Exit codes: `0` success, `1` mathematical failure (a precondition or a certificate
//! failed), `2` usage error (bad flags or unparsable input).

pub mod json;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfilt::groebner::{self, GroebnerOptions, InvolutiveVerdict};
use dfilt::localcohom::{self, FunctionalEquation, PresentationCheck, QuasiHomogeneousInput};
use dfilt::resolution::{self, FreeComplex};
use dfilt::restriction::{self, BFunction};
use dfilt::weyl::{format_rat, AlgebraKind, Operator, Signature};
use dfilt::{ModuleElement, OrderKind, OrderSpec, PositionStrategy, ShiftedFreeModule};
use serde::Serialize;
use thiserror::Error;

use crate::json::*;
use crate::parse::{parse_elements, parse_integers, parse_operator, parse_rationals, parse_univariate, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Math(#[from] dfilt::Error),
    #[error("{0}")]
    Failed(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Math(_) | CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dfilt", version, about = "Filtered free resolutions and restrictions of D-modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Weyl,
    Homogenized,
    Commutative,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    F,
    V,
    Fv,
    Vf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PositionArg {
    Top,
    Pot,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Number of x-variables.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Number of t-variables.
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Weyl)]
    pub kind: KindArg,
    #[arg(long, value_enum, ignore_case = true, default_value_t = OrderArg::F)]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value_t = PositionArg::Top)]
    pub position: PositionArg,
    /// Comma-separated F-shifts of the target free module.
    #[arg(long = "shifts-f", allow_hyphen_values = true)]
    pub shifts_f: Option<String>,
    /// Comma-separated V-shifts of the target free module.
    #[arg(long = "shifts-v", allow_hyphen_values = true)]
    pub shifts_v: Option<String>,
    /// Write a JSON document here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Relations {
    #[command(flatten)]
    pub common: Common,
    /// Relations separated by ';', each an expression or a bracketed vector.
    #[arg(long, allow_hyphen_values = true)]
    pub rows: String,
}

#[derive(Debug, Clone, Args)]
pub struct Singularity {
    /// Quasi-homogeneous polynomial in x1..xn.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Comma-separated positive rational weights.
    #[arg(long)]
    pub weights: String,
    /// Number of variables; defaults to the number of weights.
    #[arg(long)]
    pub n: Option<usize>,
    /// Use this b-function (a polynomial in s) instead of the closed form; it is certified.
    #[arg(long, allow_hyphen_values = true)]
    pub bfun: Option<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two operators.
    Mul {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
    },
    /// Reduced Gröbner basis of a submodule.
    Gb(Relations),
    /// Generators of the relations among the given elements.
    Syz(Relations),
    /// Free resolution adapted to the chosen order.
    Res {
        #[command(flatten)]
        rel: Relations,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Minimal F-filtered resolution (input over the Weyl algebra).
    Minres {
        #[command(flatten)]
        rel: Relations,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Betti table of a complex read from JSON, or of the minimal resolution of --rows.
    Betti {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        rows: Option<String>,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Bernstein-Sato polynomial of a quasi-homogeneous f, with a certificate.
    Bfun(Singularity),
    /// Annihilator of f^s and of 1/f^k'.
    Annfs(Singularity),
    /// Restriction along t = 0 of a module over D_{x,t}.
    Restrict {
        #[command(flatten)]
        rel: Relations,
        /// b-function of the module in s (checked against the module).
        #[arg(long, allow_hyphen_values = true)]
        bfun: Option<String>,
        /// Truncation index; may only raise the one implied by --bfun.
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<i64>,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Injectivity of t on gr^F and of h on gr^V of the Rees module.
    Strict(Relations),
    /// Presentations of O[1/f] and O[1/f]/O for a quasi-homogeneous isolated singularity.
    Lc(Singularity),
}

fn signature(c: &Common) -> Result<Arc<Signature>> {
    let kind = match c.kind {
        KindArg::Weyl => AlgebraKind::Weyl,
        KindArg::Homogenized => AlgebraKind::Homogenized,
        KindArg::Commutative => AlgebraKind::Commutative,
    };
    Signature::new(c.n, c.p, kind).map_err(|e| CliError::Usage(e.to_string()))
}

fn order(c: &Common) -> Result<OrderSpec> {
    let kind = match c.order {
        OrderArg::F => OrderKind::F,
        OrderArg::V => OrderKind::V,
        OrderArg::Fv => OrderKind::FV,
        OrderArg::Vf => OrderKind::VF,
    };
    if kind.uses_v() && c.p == 0 {
        return Err(CliError::Usage("V-type orders need --p at least 1".into()));
    }
    let position = match c.position {
        PositionArg::Top => PositionStrategy::Top,
        PositionArg::Pot => PositionStrategy::Pot,
    };
    Ok(OrderSpec::new(kind, position))
}

fn target_module(c: &Common, rank: usize) -> Result<ShiftedFreeModule> {
    let f = match &c.shifts_f {
        Some(s) => parse_integers(s)?,
        None => vec![0; rank],
    };
    let v = match &c.shifts_v {
        Some(s) => parse_integers(s)?,
        None => vec![0; rank],
    };
    if f.len() != rank || v.len() != rank {
        return Err(CliError::Usage(format!("shifts must have {rank} entries")));
    }
    Ok(ShiftedFreeModule { f_shifts: f, v_shifts: v })
}

fn relations(r: &Relations) -> Result<(Arc<Signature>, Vec<ModuleElement>, ShiftedFreeModule)> {
    let sig = signature(&r.common)?;
    let rows = parse_elements(&r.rows, &sig)?;
    let rank = rows.first().map_or(1, |e| e.rank());
    let module = target_module(&r.common, rank)?;
    Ok((sig, rows, module))
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
        text.push('\n');
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn print_complex(out: &mut dyn Write, c: &FreeComplex) -> Result<()> {
    writeln!(out, "ranks: {:?}", c.ranks())?;
    for (i, m) in c.modules.iter().enumerate() {
        writeln!(out, "L{i} shifts F {:?} V {:?}", m.f_shifts, m.v_shifts)?;
    }
    for (i, d) in c.maps.iter().enumerate() {
        writeln!(out, "d{}:", i + 1)?;
        for row in d {
            writeln!(out, "  {row}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ElementsJson {
    schema: &'static str,
    signature: SignatureJson,
    elements: Vec<Vec<String>>,
}

fn elements_json(sig: &Signature, els: &[ModuleElement]) -> ElementsJson {
    ElementsJson {
        schema: SCHEMA,
        signature: SignatureJson::of(sig),
        elements: els.iter().map(|e| e.coords.iter().map(|o| o.to_string()).collect()).collect(),
    }
}

fn singularity(s: &Singularity) -> Result<QuasiHomogeneousInput> {
    let weights = parse_rationals(&s.weights)?;
    let n = s.n.unwrap_or(weights.len());
    let sig = Signature::new(n, 0, AlgebraKind::Commutative).map_err(|e| CliError::Usage(e.to_string()))?;
    let f = parse_operator(&s.f, &sig)?;
    Ok(QuasiHomogeneousInput::new(&f, weights)?)
}

/// `b_f` from the closed form or the user, certified by a functional equation.
fn certified_b(q: &QuasiHomogeneousInput, s: &Singularity) -> Result<(localcohom::QuasiHomogeneousB, FunctionalEquation)> {
    let mut b = localcohom::bernstein_sato_qh(q)?;
    if let Some(text) = &s.bfun {
        let user = parse_univariate(text)?;
        if user.is_zero() {
            return Err(CliError::Failed("the supplied b-function is zero".into()));
        }
        let roots = user.rational_roots()?;
        let least = roots
            .iter()
            .filter(|(r, _)| r.is_integer())
            .filter_map(|(r, _)| num_traits::ToPrimitive::to_i64(&r.to_integer()))
            .min()
            .ok_or_else(|| CliError::Failed("the supplied b-function has no integral root".into()))?;
        b = localcohom::QuasiHomogeneousB {
            b_m: BFunction::new(restriction::reflect(&user))?,
            b_f: user,
            k_prime: -least,
        };
    }
    let fe = FunctionalEquation::solve(q, &b.b_f)?
        .ok_or_else(|| CliError::Failed(format!("no operator P(s) with b(s) f^s = P(s) f^(s+1) for b = {}", b.b_f)))?;
    Ok((b, fe))
}

fn presentation_json(
    p: &localcohom::Presentation,
    check: &PresentationCheck,
    betti: &resolution::BettiTable,
) -> PresentationJson {
    PresentationJson {
        relations: p.rows.iter().map(|r| r.coords[0].to_string()).collect(),
        names: p.names.clone(),
        f_shifts: p.source.f_shifts.clone(),
        annihilates_generator: check.annihilates,
        involutive: match &check.involutive.verdict {
            InvolutiveVerdict::Involutive => "involutive".into(),
            InvolutiveVerdict::NotInvolutive { witness } => format!("not involutive: {witness}"),
            InvolutiveVerdict::Inconclusive { degree } => format!("inconclusive at degree {degree}"),
        },
        lifts_exact: check.lifts.exact.iter().all(|&b| b),
        lift_symbols_are_relations: check.lifts.symbols_are_relations.iter().all(|&b| b),
        lift_symbols_generate: check.lifts.generate,
        betti: betti_json(betti),
    }
}

/// Runs one command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Mul { common, a, b } => {
            let sig = signature(&common)?;
            let pa = parse_operator(&a, &sig)?;
            let pb = parse_operator(&b, &sig)?;
            let prod = &pa * &pb;
            writeln!(out, "{prod}")?;
            write_json(&common.json, &elements_json(&sig, &[ModuleElement::scalar(prod)]))?;
        }
        Command::Gb(r) => {
            let (sig, rows, module) = relations(&r)?;
            let basis = groebner::buchberger_over(&sig, &rows, &module, order(&r.common)?, &GroebnerOptions::default())?;
            for g in basis.generators() {
                writeln!(out, "{g}")?;
            }
            write_json(&r.common.json, &elements_json(&sig, basis.generators()))?;
        }
        Command::Syz(r) => {
            let (sig, rows, module) = relations(&r)?;
            let (_, rel) = groebner::syzygies_of(&sig, &rows, &module)?;
            for z in &rel {
                writeln!(out, "{z}")?;
            }
            write_json(&r.common.json, &elements_json(&sig, &rel))?;
        }
        Command::Res { rel, length } => {
            let (sig, rows, module) = relations(&rel)?;
            let c = resolution::free_resolution(&sig, &rows, &module, order(&rel.common)?, length)?;
            print_complex(out, &c)?;
            write_json(&rel.common.json, &ComplexJson::of(&c, None))?;
        }
        Command::Minres { rel, length } => {
            let (_, rows, module) = relations(&rel)?;
            let m = resolution::minimal_filtered_resolution(&rows, &module, order(&rel.common)?, length)?;
            let betti = resolution::betti(&m.complex)?;
            print_complex(out, &m.complex.dehomogenize())?;
            write!(out, "betti:\n{betti}")?;
            write_json(&rel.common.json, &ComplexJson::of(&m.complex, None))?;
        }
        Command::Betti { common, rows, complex, length } => {
            let c = match (rows, complex) {
                (Some(rows), None) => {
                    let r = Relations { common: common.clone(), rows };
                    let (_, rows, module) = relations(&r)?;
                    resolution::minimal_filtered_resolution(&rows, &module, order(&common)?, length)?.complex
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    let j: ComplexJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    j.to_complex().map_err(CliError::Usage)?
                }
                _ => return Err(CliError::Usage("give exactly one of --rows and --complex".into())),
            };
            let betti = resolution::betti(&c)?;
            write!(out, "{betti}")?;
            write_json(&common.json, &serde_json::json!({ "schema": SCHEMA, "betti": betti_json(&betti) }))?;
        }
        Command::Bfun(s) => {
            let q = singularity(&s)?;
            let (b, fe) = certified_b(&q, &s)?;
            writeln!(out, "{}", b.b_f)?;
            writeln!(out, "k' = {}, k1 = {}", b.k_prime, b.k1())?;
            for (j, p) in &fe.p {
                writeln!(out, "P_{j} = {p}")?;
            }
            write_json(
                &s.json,
                &serde_json::json!({
                    "schema": SCHEMA,
                    "b_f": b.b_f.to_string(),
                    "k_prime": b.k_prime,
                    "k1": b.k1(),
                    "functional_equation": fe_json(&fe),
                }),
            )?;
        }
        Command::Annfs(s) => {
            let q = singularity(&s)?;
            let (b, _) = certified_b(&q, &s)?;
            let d = Signature::weyl(q.n(), 0);
            let theta = &q.theta(&d) + &Operator::constant(&d, dfilt::weyl::int(b.k_prime));
            let s_ops: Vec<String> = q.s_operators().into_iter().map(|(_, s)| s.to_string()).collect();
            writeln!(out, "Ann f^s:")?;
            for s in &s_ops {
                writeln!(out, "  {s}")?;
            }
            writeln!(out, "Ann 1/f^{}: additionally {theta}", b.k_prime)?;
            write_json(
                &s.json,
                &serde_json::json!({ "schema": SCHEMA, "ann_fs": s_ops, "euler": theta.to_string(), "k_prime": b.k_prime }),
            )?;
        }
        Command::Restrict { rel, bfun, k1, length } => {
            if bfun.is_none() && k1.is_none() {
                return Err(CliError::Usage("restrict needs --bfun or --k1".into()));
            }
            let (sig, rows, module) = relations(&rel)?;
            if sig.p != 1 {
                return Err(CliError::Usage("restrict needs --p 1".into()));
            }
            let mut k = None;
            if let Some(text) = bfun {
                let poly = parse_univariate(&text)?;
                if !restriction::verify_bfunction(&rows, &module, &poly)? {
                    return Err(CliError::Failed(format!("b(t*dt) = {poly} does not kill gr^V_0 of the module")));
                }
                k = BFunction::new(poly)?.k1;
            }
            if let Some(user) = k1 {
                if k.is_some_and(|k| k > user) {
                    return Err(CliError::Failed(format!("--k1 {user} is below the largest integral root {}", k.unwrap())));
                }
                k = Some(user);
            }
            let (restricted, min) = restriction::restrict_presentation(&rows, &module, k, length)?;
            writeln!(out, "k1 = {}", k.map_or("none".into(), |k| k.to_string()))?;
            writeln!(out, "restricted ranks: {:?}", restricted.ranks())?;
            writeln!(out, "minimal:")?;
            print_complex(out, &min.complex.dehomogenize())?;
            write_json(&rel.common.json, &ComplexJson::of(&restricted.complex, Some(restricted.labels.clone())))?;
        }
        Command::Strict(r) => {
            let (_, rows, module) = relations(&r)?;
            let rep = resolution::strictness_prop10(&rows, &module)?;
            writeln!(out, "t injective on gr^F: {}", rep.t_injective)?;
            writeln!(out, "h injective on gr^V: {}", rep.h_injective)?;
            write_json(&r.common.json, &serde_json::json!({ "schema": SCHEMA, "t_injective": rep.t_injective, "h_injective": rep.h_injective }))?;
        }
        Command::Lc(s) => {
            let q = singularity(&s)?;
            let report = lc_report(&q, &s)?;
            writeln!(out, "b_f(s) = {}", report.b_f)?;
            writeln!(out, "k' = {}, k1 = {}, Milnor number {}", report.k_prime, report.k1, report.milnor_number)?;
            for (title, p) in [("O[1/f]", &report.local_cohomology_full), ("O[1/f]/O", &report.local_cohomology)] {
                writeln!(out, "{title} generated by 1/f^{} with relations ({}):", report.k_prime, p.involutive)?;
                for (r, sh) in p.relations.iter().zip(&p.f_shifts) {
                    writeln!(out, "  [{sh}] {r}")?;
                }
            }
            writeln!(out, "strictness for f^s: t {}, h {}", report.strictness.0, report.strictness.1)?;
            let r = &report.restriction;
            writeln!(out, "restriction along t = 0 (k1 = {}): ranks {:?}", r.k1, r.restricted_ranks)?;
            let c = r.presentation.to_complex().map_err(CliError::Failed)?;
            print_complex(out, &c)?;
            writeln!(
                out,
                "agrees with the closed form: relations {}, ranks {}, shifts {}",
                r.same_relations, r.ranks_match, r.shifts_match
            )?;
            write_json(&s.json, &report)?;
        }
    }
    Ok(())
}

fn fe_json(fe: &FunctionalEquation) -> FunctionalEquationJson {
    FunctionalEquationJson { b: fe.b.to_string(), p: fe.p.iter().map(|(j, p)| (*j, p.to_string())).collect() }
}

/// Everything `lc` computes, in JSON form.
pub fn lc_report(q: &QuasiHomogeneousInput, s: &Singularity) -> Result<LcReport> {
    let (b, fe) = certified_b(q, s)?;
    let kp = b.k_prime;
    let milnor = q.milnor()?;
    let p1 = localcohom::presentation_prop1(q, kp);
    let c1 = localcohom::check_presentation(q, kp, &p1, false)?;
    let b1 = resolution::betti(&resolution::minimal_filtered_resolution(&p1.rows, &p1.target, OrderSpec::f(), 2)?.complex)?;
    let p2 = localcohom::presentation_prop2(q, kp);
    let c2 = localcohom::check_presentation(q, kp, &p2, true)?;
    let b2 = resolution::betti(&resolution::minimal_filtered_resolution(&p2.rows, &p2.target, OrderSpec::f(), 2)?.complex)?;
    let strict = localcohom::m_strictness(q)?;
    let r = localcohom::presentation_prop4_with(q, &b)?;
    Ok(LcReport {
        schema: SCHEMA.into(),
        f: q.f.to_string(),
        weights: q.weights.iter().map(format_rat).collect(),
        milnor_number: milnor.mu,
        b_f: b.b_f.to_string(),
        k_prime: kp,
        k1: b.k1(),
        functional_equation: fe_json(&fe),
        ann_fs: q.s_operators().into_iter().map(|(_, s)| s.to_string()).collect(),
        local_cohomology_full: presentation_json(&p1, &c1, &b1),
        local_cohomology: presentation_json(&p2, &c2, &b2),
        strictness: (strict.t_injective, strict.h_injective),
        restriction: RestrictionJson {
            k1: b.k1(),
            restricted_ranks: r.restricted_ranks.clone(),
            presentation: ComplexJson::of(&r.presentation, None),
            expected_relations: r.expected.rows.iter().map(|e| e.to_string()).collect(),
            expected_f_shifts: r.expected.source.f_shifts.clone(),
            same_relations: r.same_relations,
            ranks_match: r.ranks_match,
            shifts_match: r.shifts_match,
        },
    })
}

/// Parses arguments, runs, prints errors and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
