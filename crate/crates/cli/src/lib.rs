//! Command-line front end: parses a manifold description, runs the
//! classifier and prints a text or JSON report.

use std::ffi::OsString;
use std::io::Write;

use clap::builder::PossibleValuesParser;
use clap::Parser;
use serde::Serialize;

use s4embed::classifier::{full_report, Options, Report, Status, OBSTRUCTION_NAMES};
use s4embed::obstructions::{Certificate, Verdict, DEFAULT_BUDGET};
use s4embed::plumbing::{first_homology, Manifold};

pub mod parse;

pub use parse::{parse_manifold, ParseError};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "s4embed", version, about = "Decide or obstruct smooth embeddings of 3-manifolds in S^4")]
pub struct Args {
    /// Manifold description, e.g. "lens(3,1)+lens(3,2)" or "pretzel(3,-3,3)".
    #[arg(value_name = "MANIFOLD", conflicts_with = "manifold")]
    pub positional: Option<String>,
    #[arg(long, short = 'm', value_name = "EXPR")]
    pub manifold: Option<String>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Include subset matrices and other certificates.
    #[arg(long)]
    pub certificates: bool,
    /// Search-node budget for each obstruction.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Run only the named obstruction (repeatable).
    #[arg(long = "obstruction", value_name = "NAME", value_parser = PossibleValuesParser::new(OBSTRUCTION_NAMES))]
    pub obstructions: Vec<String>,
    /// Print only the status.
    #[arg(long, short)]
    pub quiet: bool,
    /// Accepted for harness compatibility; every computation is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Embeds => 0,
        Status::Obstructed => 1,
        Status::Unknown => 2,
    }
}

#[derive(Debug, Serialize)]
pub struct Invariants {
    pub b1: usize,
    pub torsion_factors: Vec<serde_json::Value>,
    pub euler: Option<String>,
    pub spin_count: u64,
}

#[derive(Debug, Serialize)]
pub struct ObstructionLine<'a> {
    pub name: &'a str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<&'a Certificate>,
    pub notes: &'a str,
}

#[derive(Debug, Serialize)]
pub struct JsonReport<'a> {
    pub input: &'a str,
    pub canonical_form: String,
    pub invariants: Invariants,
    pub obstructions: Vec<ObstructionLine<'a>>,
    pub status: Status,
    pub reason: &'a str,
}

fn number(text: String) -> serde_json::Value {
    match text.parse::<i64>() {
        Ok(v) => v.into(),
        Err(_) => text.into(),
    }
}

pub fn invariants(m: &Manifold) -> Invariants {
    let h = first_homology(m);
    let factors = h.torsion.invariant_factors();
    let even = factors.iter().filter(|f| !f.bit(0)).count();
    Invariants {
        b1: h.b1,
        torsion_factors: factors.iter().map(|f| number(f.to_string())).collect(),
        euler: m.euler().map(|e| e.to_string()),
        spin_count: 1u64 << (h.b1 + even),
    }
}

pub fn json_report<'a>(input: &'a str, m: &Manifold, report: &'a Report, certificates: bool) -> JsonReport<'a> {
    JsonReport {
        input,
        canonical_form: m.to_string(),
        invariants: invariants(m),
        obstructions: report
            .obstructions
            .iter()
            .map(|o| ObstructionLine {
                name: o.name,
                verdict: o.verdict,
                certificate: if certificates { o.certificate.as_ref() } else { None },
                notes: &o.notes,
            })
            .collect(),
        status: report.status,
        reason: &report.reason,
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Obstructed => "obstructed",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn write_text(out: &mut dyn Write, r: &JsonReport<'_>) -> std::io::Result<()> {
    writeln!(out, "manifold:   {}", r.canonical_form)?;
    let torsion: Vec<String> = r.invariants.torsion_factors.iter().map(|v| v.to_string()).collect();
    write!(out, "H1:         Z^{} + torsion [{}]", r.invariants.b1, torsion.join(", "))?;
    if let Some(e) = &r.invariants.euler {
        write!(out, ", e = {e}")?;
    }
    writeln!(out, ", {} spin structures", r.invariants.spin_count)?;
    for o in &r.obstructions {
        write!(out, "  {:<28}{}", o.name, verdict_word(o.verdict))?;
        if !o.notes.is_empty() {
            write!(out, "  ({})", o.notes)?;
        }
        writeln!(out)?;
        if let Some(c) = o.certificate {
            writeln!(out, "    {}", serde_json::to_string(c).expect("certificate serializes"))?;
        }
    }
    writeln!(out, "status:     {} ({})", r.status, r.reason)
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let Some(input) = args.manifold.as_deref().or(args.positional.as_deref()) else {
        let _ = writeln!(err, "error: no manifold given (use --manifold or a positional argument)");
        return EXIT_USAGE;
    };
    let m = match parse_manifold(input) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(err, "  {input}");
            let _ = writeln!(err, "  {}^", " ".repeat(e.column.saturating_sub(1)));
            return EXIT_USAGE;
        }
    };
    let opts = Options { budget: Some(args.budget), only: args.obstructions.clone() };
    let report = match full_report(&m, &opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let j = json_report(input, &m, &report, args.certificates);
    let written = if args.quiet {
        writeln!(out, "{}", report.status)
    } else if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&j).expect("report serializes"))
    } else {
        write_text(out, &j)
    };
    if written.is_err() {
        return EXIT_INTERNAL;
    }
    exit_code(report.status)
}
