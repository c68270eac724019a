//! Command-line front end. Exit codes: 0 success, 1 domain failure,
//! 2 usage or parse failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dot;
use crate::germ::{self, germ_compose, germ_eq, germ_inv};
use crate::invsemi;
use crate::io::{element_json, germ_json, parse_element, parse_germ, parse_path, parse_point, point_json, SystemFile};
use crate::props::{report, ScopeMode};
use crate::twist::{extend_bowtie, omega, validate_twist, verify_omega_cocycle, Twist};
use crate::{Error, System};

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Self-similar groupoid actions on finite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Truncation length for brute-force verifications.
    #[arg(long, global = true, default_value_t = 3)]
    pub bound: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Scope {
    Model,
    Strict,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every validator; exit 1 on any violation.
    Validate { file: PathBuf },
    /// Condition and theorem report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Scope::Model)]
        scope: Scope,
    },
    /// Arithmetic in S(G,E); elements are JSON triples.
    #[command(subcommand)]
    Semigroup(SemigroupCmd),
    /// Germ calculus; germs are JSON triples with an `xi` point.
    #[command(subcommand)]
    Germ(GermCmd),
    /// Twist checks and the induced cocycle.
    #[command(subcommand)]
    Twist(TwistCmd),
    /// Nucleus of a contracting explicit action.
    Nucleus { file: PathBuf },
    /// Kernel N and tight kernel K.
    Kernel { file: PathBuf },
    /// (Hum) for the isotropy at a point.
    Hum { file: PathBuf, point: String },
    /// Graphviz output.
    ExportDot {
        file: PathBuf,
        /// graph, restriction, or fixing:<element>
        #[arg(long, default_value = "graph")]
        what: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SemigroupCmd {
    Mul { file: PathBuf, s: String, t: String },
    Star { file: PathBuf, s: String },
    Leq { file: PathBuf, s: String, t: String },
    /// t f_γ t*
    Conj { file: PathBuf, t: String, gamma: String },
    /// Whether t fixes f_γ.
    Fixed { file: PathBuf, t: String, gamma: String },
    Length { file: PathBuf, s: String },
}

#[derive(Subcommand, Debug)]
pub enum GermCmd {
    Eq { file: PathBuf, x: String, y: String },
    Compose { file: PathBuf, x: String, y: String },
    Inv { file: PathBuf, x: String },
    Classify { file: PathBuf, x: String },
    InCore { file: PathBuf, x: String },
    Xbar { file: PathBuf, point: String },
    Hum { file: PathBuf, point: String },
}

#[derive(Subcommand, Debug)]
pub enum TwistCmd {
    Validate { file: PathBuf },
    /// Extended σ_⋈ on (g, path).
    Extend { file: PathBuf, g: String, path: String },
    Omega { file: PathBuf, s: String, t: String },
    /// Brute-force cocycle check of ω up to --bound.
    Verify { file: PathBuf },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Out = std::result::Result<String, Failure>;

fn arg_json(s: &str) -> std::result::Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("argument is not JSON: {e}")))
}

fn load(path: &std::path::Path) -> std::result::Result<System, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let file = SystemFile::parse(&text)?;
    Ok(System::from_file(file)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn require_twist(s: &System) -> std::result::Result<Twist, Failure> {
    Ok(s.twist.clone().unwrap_or_else(|| Twist::trivial(&s.action)))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Command::Validate { file } = &cli.command {
        return validate(file, out, err);
    }
    match dispatch(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn validate(path: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    };
    let file = match SystemFile::parse(&text) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let v = file.validate();
    if v.is_ok() {
        let _ = writeln!(out, "ok");
        0
    } else {
        for m in &v.violations {
            let _ = writeln!(out, "violation: {m}");
        }
        1
    }
}

fn dispatch(cli: &Cli) -> Out {
    match &cli.command {
        Command::Validate { .. } => unreachable!("handled in run"),
        Command::Report { file, format, scope } => {
            let s = load(file)?;
            let mode = match scope {
                Scope::Model => ScopeMode::Model,
                Scope::Strict => ScopeMode::Strict,
            };
            let r = report(&s.action, s.twist.as_ref(), mode, s.name());
            Ok(match format {
                Format::Json => r.to_json() + "\n",
                Format::Text => r.to_text(),
            })
        }
        Command::Semigroup(c) => semigroup(c),
        Command::Germ(c) => germ_cmd(c),
        Command::Twist(c) => twist_cmd(c, cli.bound),
        Command::Nucleus { file } => {
            let s = load(file)?;
            let a = &s.action;
            let n = a.nucleus()?;
            Ok(pretty(&json!(n.iter().map(|&g| a.model.name(g)).collect::<Vec<_>>())))
        }
        Command::Kernel { file } => {
            let s = load(file)?;
            let a = &s.action;
            let names = |v: Vec<usize>| v.into_iter().map(|g| a.model.name(g).to_string()).collect::<Vec<_>>();
            Ok(pretty(&json!({ "N": names(a.kernel_n()?), "K": names(a.tight_kernel_k()?) })))
        }
        Command::Hum { file, point } => hum(file, point),
        Command::ExportDot { file, what } => {
            let s = load(file)?;
            let a = &s.action;
            match what.as_str() {
                "graph" => Ok(dot::graph_dot(a)),
                "restriction" => Ok(dot::restriction_dot(a)),
                w => match w.strip_prefix("fixing:") {
                    Some(g) => Ok(dot::fixing_dot(a, a.model.element(g)?)),
                    None => Err(Failure::Usage(format!("unknown export target `{w}`"))),
                },
            }
        }
    }
}

fn hum(file: &std::path::Path, point: &str) -> Out {
    let s = load(file)?;
    let mu = parse_point(&s.action.graph, &arg_json(point)?)?;
    let h = germ::hum_at_point(&s.action, &mu)?;
    Ok(pretty(&serde_json::to_value(h).expect("json")))
}

fn semigroup(c: &SemigroupCmd) -> Out {
    let one = |file: &std::path::Path, s: &str| -> std::result::Result<(System, invsemi::SemigroupElement), Failure> {
        let sys = load(file)?;
        let e = parse_element(&sys.action, &arg_json(s)?)?;
        Ok((sys, e))
    };
    match c {
        SemigroupCmd::Mul { file, s, t } => {
            let (sys, s) = one(file, s)?;
            let a = &sys.action;
            let t = parse_element(a, &arg_json(t)?)?;
            Ok(pretty(&element_json(a, &invsemi::mul(a, &s, &t)?)))
        }
        SemigroupCmd::Star { file, s } => {
            let (sys, s) = one(file, s)?;
            Ok(pretty(&element_json(&sys.action, &invsemi::star(&sys.action, &s)?)))
        }
        SemigroupCmd::Leq { file, s, t } => {
            let (sys, s) = one(file, s)?;
            let t = parse_element(&sys.action, &arg_json(t)?)?;
            Ok(pretty(&json!(invsemi::leq(&sys.action, &s, &t)?)))
        }
        SemigroupCmd::Conj { file, t, gamma } => {
            let (sys, t) = one(file, t)?;
            let g = parse_path(&sys.action.graph, &arg_json(gamma)?)?;
            Ok(pretty(&element_json(&sys.action, &invsemi::conj_idem(&sys.action, &t, &g)?)))
        }
        SemigroupCmd::Fixed { file, t, gamma } => {
            let (sys, t) = one(file, t)?;
            let g = parse_path(&sys.action.graph, &arg_json(gamma)?)?;
            Ok(pretty(&json!(invsemi::fixed_by(&sys.action, &t, &g)?)))
        }
        SemigroupCmd::Length { file, s } => {
            let (sys, s) = one(file, s)?;
            Ok(pretty(&json!({
                "length": invsemi::length(&s)?,
                "in_S0": invsemi::in_s0(&s),
                "in_S00": invsemi::in_s00(&sys.action, &s).ok(),
            })))
        }
    }
}

fn germ_cmd(c: &GermCmd) -> Out {
    let one = |file: &std::path::Path, x: &str| -> std::result::Result<(System, germ::Germ), Failure> {
        let sys = load(file)?;
        let g = parse_germ(&sys.action, &arg_json(x)?)?;
        Ok((sys, g))
    };
    match c {
        GermCmd::Eq { file, x, y } => {
            let (sys, x) = one(file, x)?;
            let y = parse_germ(&sys.action, &arg_json(y)?)?;
            Ok(pretty(&json!(germ_eq(&sys.action, &x, &y)?)))
        }
        GermCmd::Compose { file, x, y } => {
            let (sys, x) = one(file, x)?;
            let y = parse_germ(&sys.action, &arg_json(y)?)?;
            Ok(pretty(&germ_json(&sys.action, &germ_compose(&sys.action, &x, &y)?)))
        }
        GermCmd::Inv { file, x } => {
            let (sys, x) = one(file, x)?;
            Ok(pretty(&germ_json(&sys.action, &germ_inv(&sys.action, &x)?)))
        }
        GermCmd::Classify { file, x } => {
            let (sys, x) = one(file, x)?;
            Ok(pretty(&serde_json::to_value(germ::classify(&sys.action, &x)?).expect("json")))
        }
        GermCmd::InCore { file, x } => {
            let (sys, x) = one(file, x)?;
            Ok(pretty(&json!(germ::in_core(&sys.action, &x)?)))
        }
        GermCmd::Xbar { file, point } => {
            let sys = load(file)?;
            let a = &sys.action;
            let mu = parse_point(&a.graph, &arg_json(point)?)?;
            let gs = germ::xbar(a, &mu)?;
            Ok(pretty(&json!({
                "point": point_json(&a.graph, &mu),
                "germs": gs.iter().map(|x| germ_json(a, x)).collect::<Vec<_>>(),
            })))
        }
        GermCmd::Hum { file, point } => hum(file, point),
    }
}

fn twist_cmd(c: &TwistCmd, bound: usize) -> Out {
    match c {
        TwistCmd::Validate { file } => {
            let s = load(file)?;
            let t = require_twist(&s)?;
            let v = validate_twist(&s.action, &t)?;
            if v.is_ok() {
                Ok("ok\n".into())
            } else {
                Err(Failure::Domain(v.violations.join("; ")))
            }
        }
        TwistCmd::Extend { file, g, path } => {
            let s = load(file)?;
            let t = require_twist(&s)?;
            let a = &s.action;
            let p = parse_path(&a.graph, &arg_json(path)?)?;
            Ok(pretty(&json!(extend_bowtie(a, &t, a.model.element(g)?, &p)?.to_string())))
        }
        TwistCmd::Omega { file, s: x, t: y } => {
            let s = load(file)?;
            let t = require_twist(&s)?;
            let a = &s.action;
            let x = parse_element(a, &arg_json(x)?)?;
            let y = parse_element(a, &arg_json(y)?)?;
            Ok(pretty(&json!(omega(a, &t, &x, &y)?.to_string())))
        }
        TwistCmd::Verify { file } => {
            let s = load(file)?;
            let t = require_twist(&s)?;
            let r = verify_omega_cocycle(&s.action, &t, bound)?;
            let text = pretty(&serde_json::to_value(&r).expect("json"));
            if r.passed() {
                Ok(text)
            } else {
                Err(Failure::Domain(text))
            }
        }
    }
}
