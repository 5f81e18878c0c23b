//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hk4_core::classifier::classify_with;
use hk4_core::fujiki::{bundled_betti_data, BettiEntry};
use hk4_core::ledger::{
    bott_p2, chi_table, k3_exceptional_checks, koszul_counts, mukai_solve, segre_certificate,
    VanishingSource,
};
use serde_json::json;

use crate::checks::parse_selection;
use crate::display::{case_report, value};
use crate::error::CliError;
use crate::expectations::Expectations;
use crate::report::{canonical_json, classification_check, run_checks, Report};
use crate::scenario::{load_betti, Scenario};

#[derive(Debug, Parser)]
#[command(name = "hk4", version, about = "Exact certification suite for hyper-Kähler fourfolds of K3^[2] type")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Write canonical JSON here (`-` for stdout instead of the text view).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Betti data file replacing the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    pub betti_data: Option<PathBuf>,
    /// Worker threads for the certificate pool (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Add approximate decimals to the text view.
    #[arg(long, global = true)]
    pub decimal: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the polarization degree a.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
    },
    /// Run a named certificate, or `all`.
    Verify { name: String },
    /// Ingest a scenario file and run the relevant suite.
    Scenario { path: PathBuf },
    /// Dump the Euler characteristic ledger.
    Ledger,
    /// Full report: every certificate, classifications for a = 1..8, the ledger.
    Report,
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let exp = Expectations::bundled();
    let g = &cli.global;
    let betti = match &g.betti_data {
        Some(p) => Some(load_betti(p)?),
        None => None,
    };
    match &cli.command {
        Command::Classify { a } => cmd_classify(*a, betti, g),
        Command::Verify { name } => cmd_verify(name, &exp, g),
        Command::Scenario { path } => cmd_scenario(path, betti.as_deref(), &exp, g),
        Command::Ledger => cmd_ledger(g),
        Command::Report => cmd_report(betti, &exp, g),
    }
}

/// Writes JSON to the requested sink; true when stdout was used.
fn emit_json(g: &Global, body: &str) -> Result<bool, CliError> {
    match &g.json {
        Some(p) if p == Path::new("-") => {
            print!("{body}");
            Ok(true)
        }
        Some(p) => {
            std::fs::write(p, body).map_err(|source| CliError::Write { path: p.clone(), source })?;
            Ok(false)
        }
        None => Ok(false),
    }
}

fn print_text(g: &Global, text: &str) {
    if g.json.as_deref() != Some(Path::new("-")) {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(text.as_bytes());
    }
}

fn cmd_classify(a: u64, betti: Option<Vec<BettiEntry>>, g: &Global) -> Result<i32, CliError> {
    let data = betti.unwrap_or_else(bundled_betti_data);
    let r = classify_with(a, &data)?;
    emit_json(g, &canonical_json(&r))?;
    print_text(g, &case_report(&r, g.decimal));
    Ok(0)
}

fn check_lines(report: &Report, decimal: bool) -> String {
    let mut out = String::new();
    for (name, c) in &report.checks {
        let _ = writeln!(out, "{:<18} {}", c.status.label(), name);
        if let Some(obj) = c.values.as_object() {
            for (k, v) in obj {
                if k == "certificate" || k == "ledger" {
                    continue;
                }
                let _ = writeln!(out, "    {k} = {}", value(v, decimal));
            }
        }
        for d in &c.diffs {
            let _ = writeln!(out, "    DIFF {d}");
        }
    }
    out
}

fn cmd_verify(name: &str, exp: &Expectations, g: &Global) -> Result<i32, CliError> {
    let ids = parse_selection(name)?;
    let (report, elapsed) = run_checks(&ids, exp, g.jobs)?;
    emit_json(g, &report.to_json())?;
    let mut text = check_lines(&report, g.decimal);
    let _ = writeln!(
        text,
        "{} checks, {} failed, {:.1} ms",
        report.checks.len(),
        report.failures(),
        elapsed.as_secs_f64() * 1e3
    );
    print_text(g, &text);
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn cmd_scenario(
    path: &Path,
    betti: Option<&[BettiEntry]>,
    exp: &Expectations,
    g: &Global,
) -> Result<i32, CliError> {
    let s = Scenario::load(path)?;
    let outcome = crate::scenario::run(&s, betti, exp, g.jobs)?;
    let report = &outcome.report;
    emit_json(g, &report.to_json())?;
    let mut text = String::new();
    if let Some(sc) = &report.scenario {
        let _ = writeln!(
            text,
            "scenario {}: n = {}, q(l,m) = {}, gamma = {}, a = {}",
            sc["name"].as_str().unwrap_or("(unnamed)"),
            sc["n"],
            sc["q_lm"],
            value(&sc["normalization"]["gamma"], g.decimal),
            sc["a"]
        );
        for block in sc["matched"].as_array().into_iter().flatten() {
            let _ = writeln!(text, "  matched: {}", value(block, g.decimal));
        }
        for form in sc["rr_forms"].as_array().into_iter().flatten() {
            let _ = writeln!(text, "  P_RR: {}", value(form, g.decimal));
        }
        if !outcome.consistent {
            let _ = writeln!(text, "  no classifier solution matches the scenario data");
        }
    }
    for r in report.classifications.values() {
        text.push_str(&case_report(r, g.decimal));
    }
    text.push_str(&check_lines(report, g.decimal));
    print_text(g, &text);
    Ok(if report.all_passed() && outcome.consistent { 0 } else { 1 })
}

fn vanishing_label(v: VanishingSource) -> &'static str {
    match v {
        VanishingSource::Kodaira => "Kodaira",
        VanishingSource::KawamataViehweg => "Kawamata-Viehweg",
        VanishingSource::Pushforward => "pushforward",
        VanishingSource::EulerOnly => "Euler characteristic only",
    }
}

fn cmd_ledger(g: &Global) -> Result<i32, CliError> {
    let t = chi_table();
    let k = koszul_counts(2);
    let mukai = mukai_solve()?;
    let bott: Vec<_> = (0..=2)
        .flat_map(|q| (-2..=2).map(move |d| (q, d)))
        .map(|(q, d)| bott_p2(q, d).map(|h| json!({"q": q, "d": d, "h": [h.0, h.1, h.2]})))
        .collect::<Result<_, _>>()?;
    let body = json!({
        "chi_table": t,
        "koszul": k,
        "segre": segre_certificate(),
        "mukai": mukai,
        "k3_checks": k3_exceptional_checks(),
        "bott_p2": bott,
    });
    emit_json(g, &canonical_json(&body))?;
    let mut md = String::new();
    let _ = writeln!(md, "| p | q | q_X(pl+qm) | chi | h0 justification |");
    let _ = writeln!(md, "|---|---|---|---|---|");
    for e in &t.entries {
        let _ = writeln!(md, "| {} | {} | {} | {} | {} |", e.p, e.q, e.bbf_value, e.chi, vanishing_label(e.vanishing));
    }
    let _ = writeln!(md, "\nk_L = {}\n", t.k_l);
    let _ = writeln!(md, "| count | value |");
    let _ = writeln!(md, "|---|---|");
    for (name, v) in [
        ("h0(I(L+M))", k.ideal_lm),
        ("h0(I(2L+2M))", k.ideal_2l2m),
        ("h0(L^2 M^2)", k.h0_2l2m),
        ("restricted sections of L^2 M^2", k.restricted_2l2m),
        ("rank of restriction", k.restriction_rank),
        ("independent quadrics (lower bound)", k.quadrics_lower_bound),
        ("Castelnuovo maximum", k.castelnuovo_max),
    ] {
        let _ = writeln!(md, "| {name} | {v} |");
    }
    let v = &mukai.vector;
    let _ = writeln!(md, "\nMukai vector ({}, {}H, {}), self-pairing {}", v.rank, v.c1_coeff, v.s, mukai.self_pairing);
    print_text(g, &md);
    Ok(0)
}

fn cmd_report(betti: Option<Vec<BettiEntry>>, exp: &Expectations, g: &Global) -> Result<i32, CliError> {
    let data = betti.unwrap_or_else(bundled_betti_data);
    let (mut report, elapsed) = run_checks(crate::checks::CheckId::ALL, exp, g.jobs)?;
    for a in 1..=8 {
        let r = classify_with(a, &data)?;
        report.checks.insert(format!("classify-{a}"), classification_check(&r, exp));
        report.classifications.insert(a, r);
    }
    report.ledger = Some(chi_table());
    emit_json(g, &report.to_json())?;
    let mut text = String::new();
    for (name, c) in &report.checks {
        let _ = writeln!(text, "{:<18} {}", c.status.label(), name);
        for d in &c.diffs {
            let _ = writeln!(text, "    DIFF {d}");
        }
    }
    let _ = writeln!(
        text,
        "{} checks, {} failed, {:.1} ms",
        report.checks.len(),
        report.failures(),
        elapsed.as_secs_f64() * 1e3
    );
    print_text(g, &text);
    Ok(if report.all_passed() { 0 } else { 1 })
}
