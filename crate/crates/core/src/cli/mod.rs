//! The `cdr-engine` command line.

mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coordinate::{
    verify_tilde_ope, verify_virasoro_invariance, CoordTransform1, FieldRule, OpeReport,
    VirasoroReport,
};
use crate::invariant_character::compare;
use crate::log_monoid::{
    format_pullback, log_differentials, parse_vectors, FinGenMonoid, MonoidError, MonoidHom,
};
use crate::modes::{parse_state, Gamma0Cutoff};
use crate::series::Series1;
use crate::vertex::ope_singular;

pub use selftest::{run_selftest, CheckResult, SelftestConfig, SelftestReport, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CDR_ENGINE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "cdr-engine",
    version,
    about = "Exact computations in the beta-gamma/bc vertex algebra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Length formula against the generator-count oracle.
    Char {
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "r-max")]
        r_max: u32,
        /// gamma_0 cutoff; the default depends on N and r-max.
        #[arg(long)]
        cutoff: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Singular part of the OPE of two states.
    Ope {
        a: String,
        b: String,
        #[arg(long)]
        cutoff: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Transformed fields under a coordinate change of the disc.
    Transform {
        /// Polynomial in g, e.g. "g + g^2".
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
        #[arg(long, default_value = "log-second-derivative", value_parser = parse_rule)]
        rule: FieldRule,
        #[command(flatten)]
        output: Output,
    },
    /// Monoid calculus.
    Monoid {
        #[command(subcommand)]
        action: MonoidAction,
    },
    /// Runs the invariant suite of every module.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "log-second-derivative", value_parser = parse_rule)]
        rule: FieldRule,
        /// Negative control: checks a deliberately wrong relation.
        #[arg(long, hide = true)]
        corrupt_relation: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MonoidArgs {
    /// Generators, e.g. "(3,0);(0,3);(1,1)" or "gens=(3,0);(0,3);(1,1)".
    #[arg(long)]
    pub gens: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Subcommand, Debug)]
pub enum MonoidAction {
    Groupify {
        #[command(flatten)]
        monoid: MonoidArgs,
    },
    Member {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[arg(long)]
        vector: String,
    },
    Saturation {
        #[command(flatten)]
        monoid: MonoidArgs,
    },
    Smooth {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Relations for a quotient model, e.g. "(4)".
        #[arg(long)]
        relations: Option<String>,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    Etale {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Target monoid: "N2" for the free monoid N^2, or a generator list.
        #[arg(long)]
        into: String,
        /// Rows of the lattice map; the identity when omitted.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    Differentials {
        #[command(flatten)]
        monoid: MonoidArgs,
    },
}

fn parse_rule(s: &str) -> Result<FieldRule, String> {
    FieldRule::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = FieldRule::ALL.iter().map(|r| r.name()).collect();
        format!("unknown rule {s:?}; expected one of {}", names.join(", "))
    })
}

/// Result of one subcommand before it is written out.
pub struct Rendered {
    pub body: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn no_csv(format: Format, what: &str) -> Result<(), UsageError> {
    if format == Format::Csv {
        Err(UsageError(format!(
            "csv output is not available for {what}"
        )))
    } else {
        Ok(())
    }
}

fn cutoff_of(c: Option<u32>) -> Gamma0Cutoff {
    c.map_or(Gamma0Cutoff::UNBOUNDED, Gamma0Cutoff::at)
}

pub fn cmd_char(
    n: u32,
    r_max: u32,
    cutoff: Option<u32>,
    format: Format,
) -> Result<Rendered, UsageError> {
    if n < 2 {
        return Err(UsageError("--N must be at least 2".into()));
    }
    if r_max < 1 {
        return Err(UsageError("--r-max must be at least 1".into()));
    }
    let report = compare(n, r_max, cutoff);
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    let code = if report.all_stable() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok(Rendered { body, code })
}

pub fn cmd_ope(
    a: &str,
    b: &str,
    cutoff: Option<u32>,
    format: Format,
) -> Result<Rendered, UsageError> {
    no_csv(format, "ope")?;
    let sa = parse_state(a)?;
    let sb = parse_state(b)?;
    let ope = ope_singular(&sa, &sb, cutoff_of(cutoff));
    let poles: Vec<_> = ope
        .poles()
        .into_iter()
        .map(|(order, s)| json!({ "pole_order": order, "state": s.to_string() }))
        .collect();
    let body = match format {
        Format::Text => {
            let mut out = String::new();
            if poles.is_empty() {
                out.push_str("regular\n");
            }
            for (order, s) in ope.poles() {
                out.push_str(&format!("(z-w)^-{order}: {s}\n"));
            }
            if ope.truncated {
                out.push_str("(truncated at the gamma_0 cutoff)\n");
            }
            out
        }
        _ => to_json(&json!({
            "a": sa.to_string(),
            "b": sb.to_string(),
            "poles": poles,
            "truncated": ope.truncated,
        })),
    };
    Ok(Rendered {
        body,
        code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct TransformOutput {
    f: String,
    rule: FieldRule,
    order: usize,
    cutoff: u32,
    ope: OpeReport,
    virasoro: VirasoroReport,
    pass: bool,
}

pub fn cmd_transform(
    f: &str,
    order: usize,
    cutoff: u32,
    rule: FieldRule,
    format: Format,
) -> Result<Rendered, UsageError> {
    no_csv(format, "transform")?;
    let series = Series1::parse_polynomial(f, order)?;
    let t = CoordTransform1::new(series)?;
    let cut = Gamma0Cutoff::at(cutoff);
    let ope = verify_tilde_ope(&t, rule, cut)?;
    let virasoro = verify_virasoro_invariance(&t, rule, cut)?;
    let pass = ope.pass && virasoro.pass;
    let out = TransformOutput {
        f: t.f().to_string(),
        rule,
        order,
        cutoff,
        ope,
        virasoro,
        pass,
    };
    let body = match format {
        Format::Text => {
            let mut s = format!("f = {}, rule {}\n", out.f, rule.name());
            for p in &out.ope.pairs {
                let mismatch = p.checks.iter().find_map(|c| c.mismatch.clone());
                s.push_str(&format!(
                    "  {}~ {}~: {}{}\n",
                    p.left,
                    p.right,
                    if p.pass { "ok" } else { "FAIL" },
                    mismatch.map(|m| format!(" ({m})")).unwrap_or_default()
                ));
            }
            s.push_str(&format!(
                "  L~ = L: {}{}\n",
                if out.virasoro.pass { "ok" } else { "FAIL" },
                out.virasoro
                    .check
                    .mismatch
                    .as_ref()
                    .map(|m| format!(" ({m})"))
                    .unwrap_or_default()
            ));
            s
        }
        _ => to_json(&out),
    };
    Ok(Rendered {
        body,
        code: if pass { EXIT_OK } else { EXIT_FAILURE },
    })
}

/// `N2` (or `N^2`) for the free monoid, otherwise a generator list.
pub fn parse_target(into: &str) -> Result<FinGenMonoid, MonoidError> {
    let t = into.trim();
    let free = t.strip_prefix("N^").or_else(|| t.strip_prefix('N'));
    if let Some(rank) = free.and_then(|r| r.parse::<usize>().ok()) {
        if rank == 0 {
            return Err(MonoidError::Parse("free monoid needs positive rank".into()));
        }
        return Ok(FinGenMonoid::free(rank));
    }
    FinGenMonoid::parse(t)
}

fn verdict(format: Format, value: serde_json::Value, text: String, ok: bool) -> Rendered {
    let body = match format {
        Format::Text => text + "\n",
        _ => to_json(&value),
    };
    Rendered {
        body,
        code: if ok { EXIT_OK } else { EXIT_FAILURE },
    }
}

pub fn cmd_monoid(action: &MonoidAction) -> Result<Rendered, UsageError> {
    let args = match action {
        MonoidAction::Groupify { monoid }
        | MonoidAction::Member { monoid, .. }
        | MonoidAction::Saturation { monoid }
        | MonoidAction::Smooth { monoid, .. }
        | MonoidAction::Etale { monoid, .. }
        | MonoidAction::Differentials { monoid } => monoid,
    };
    let format = args.output.format;
    no_csv(format, "monoid")?;
    let q = FinGenMonoid::parse(&args.gens)?;
    let out = match action {
        MonoidAction::Groupify { .. } => {
            let g = q.groupify();
            let text = format!(
                "Q^gp = {}; Z^d / Q^gp = {}; basis {:?}",
                g.group,
                g.cokernel_in_ambient
                    .as_ref()
                    .map_or("-".to_string(), |c| c.to_string()),
                g.basis
            );
            verdict(format, json!(g), text, true)
        }
        MonoidAction::Member { vector, .. } => {
            let v = parse_vectors(vector)?
                .pop()
                .ok_or_else(|| UsageError("empty vector".into()))?;
            let m = q.membership(&v)?;
            let text = match &m.witness {
                Some(w) => format!("{v:?} in Q, multiplicities {w:?}"),
                None => format!("{v:?} not in Q"),
            };
            verdict(format, json!({ "vector": v, "membership": m }), text, true)
        }
        MonoidAction::Saturation { .. } => {
            let s = q.saturation()?;
            let text = match &s.counterexample {
                None => "saturated".to_string(),
                Some((v, m)) => format!("not saturated: {m} * {v:?} in Q but {v:?} not in Q"),
            };
            let ok = s.saturated && s.stable;
            verdict(format, json!(s), text, ok)
        }
        MonoidAction::Smooth {
            relations,
            characteristic,
            ..
        } => {
            let q = match relations {
                Some(r) => {
                    FinGenMonoid::with_relations(q.generators().to_vec(), parse_vectors(r)?)?
                }
                None => q,
            };
            let v = q.smoothness(*characteristic)?;
            let text = format!(
                "{} in characteristic {} (torsion order {})",
                if v.smooth { "smooth" } else { "not smooth" },
                v.characteristic,
                v.torsion_order
            );
            let ok = v.smooth;
            verdict(format, json!(v), text, ok)
        }
        MonoidAction::Etale {
            into,
            matrix,
            characteristic,
            ..
        } => {
            let target = parse_target(into)?;
            let m = match matrix {
                Some(rows) => parse_vectors(rows)?,
                None => crate::log_monoid::snf::identity(q.rank()),
            };
            let hom = MonoidHom::new(q, target, m)?;
            let v = hom.etale(*characteristic)?;
            let text = format!(
                "{}: kernel {}, cokernel {}",
                if v.etale { "etale" } else { "not etale" },
                v.kernel,
                v.cokernel
            );
            let ok = v.etale;
            verdict(format, json!(v), text, ok)
        }
        MonoidAction::Differentials { .. } => {
            let p = log_differentials(&q)?;
            let mut text = format!("basis {:?}", p.basis);
            for (g, row) in &p.pullback {
                text.push_str(&format!("\n  d{g:?} -> {}", format_pullback(row)));
            }
            if let Some(pq) = &p.pq_check {
                text.push_str(&format!(
                    "\n  (1,1), (-1,1) generate Q^gp: {}",
                    pq.pq_generates_group
                ));
            }
            verdict(format, json!(p), text, true)
        }
    };
    Ok(out)
}

pub fn cmd_selftest(config: &SelftestConfig, format: Format) -> Result<Rendered, UsageError> {
    let report = run_selftest(config);
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Ok(Rendered {
        body,
        code: if report.pass { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn dispatch(cli: &Cli) -> (Result<Rendered, UsageError>, Option<PathBuf>) {
    match &cli.command {
        Command::Char {
            n,
            r_max,
            cutoff,
            output,
        } => (
            cmd_char(*n, *r_max, *cutoff, output.format),
            output.out.clone(),
        ),
        Command::Ope {
            a,
            b,
            cutoff,
            output,
        } => (cmd_ope(a, b, *cutoff, output.format), output.out.clone()),
        Command::Transform {
            f,
            order,
            cutoff,
            rule,
            output,
        } => (
            cmd_transform(f, *order, *cutoff, *rule, output.format),
            output.out.clone(),
        ),
        Command::Monoid { action } => {
            let out = match action {
                MonoidAction::Groupify { monoid }
                | MonoidAction::Member { monoid, .. }
                | MonoidAction::Saturation { monoid }
                | MonoidAction::Smooth { monoid, .. }
                | MonoidAction::Etale { monoid, .. }
                | MonoidAction::Differentials { monoid } => monoid.output.out.clone(),
            };
            (cmd_monoid(action), out)
        }
        Command::Selftest {
            seed,
            rule,
            corrupt_relation,
            output,
        } => {
            let config = SelftestConfig {
                seed: *seed,
                rule: *rule,
                corrupt_relation: *corrupt_relation,
            };
            (cmd_selftest(&config, output.format), output.out.clone())
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Parses arguments, runs one subcommand and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    let (result, out) = dispatch(&cli);
    match result {
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Ok(rendered) => {
            let written = match out {
                Some(path) => std::fs::write(&path, &rendered.body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout
                    .write_all(rendered.body.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => rendered.code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_FAILURE
                }
            }
        }
    }
}
