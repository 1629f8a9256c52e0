//! Command-line front end: argument schema, dispatch, and report rendering.
//!
//! Every command writes one JSON document (or a plain-text table) to the
//! output stream. Diagnostics go to the error stream. [`run`] returns the
//! process exit status:
//!
//! | status | meaning                                   |
//! |--------|-------------------------------------------|
//! | 0      | success                                   |
//! | 1      | formula and enumeration disagree          |
//! | 2      | invalid input or arguments                |
//! | 3      | a search or scan exceeded its budget      |

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use vqs::classify::{self, Kind};
use vqs::embedding;
use vqs::io::{self, ClassificationJson, DecompositionJson, GroupOrderJson, ParseError, ParsedForm, VirtualSummary};
use vqs::iso_groups::{self, FormulaFn, GroupOrderReport, Semantics, VerifyStatus};
use vqs::{Budget, Error, VirtualQuadraticSpace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const BUDGET_ENV: &str = "VQS_BUDGET_NODES";

#[derive(Debug, Clone, Parser)]
#[command(name = "vqs", version, about = "Virtual quadratic spaces over finite fields")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    /// Seed for the randomized group-axiom checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Cap on backtracking nodes per isometry search (overrides VQS_BUDGET_NODES).
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Largest ambient dimension an isometry search may run in.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest field order an isometry search may run over.
    #[arg(long, global = true)]
    pub max_q: Option<u32>,
    /// Largest number of vectors or forms a linear scan may visit.
    #[arg(long, global = true)]
    pub max_scan: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Canonical form, type and Witt index of a form.
    Classify(InputArgs),
    /// Minimal ambient space of a form.
    Embed(InputArgs),
    /// Minimal virtual space equivalent to the input.
    Minimalize(InputArgs),
    /// Isometry group order from the closed formula.
    Order(GroupArgs),
    /// Formula value compared with an exhaustive enumeration.
    Enumerate(GroupArgs),
    /// Isometry classes among all forms of a given size.
    Census(CensusArgs),
    /// Formula against enumeration over a grid of field orders and dimensions.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Form JSON file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TypeArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

#[derive(Debug, Clone, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub dim: usize,
    /// Type of an even-dimensional space.
    #[arg(long = "type", value_enum, allow_hyphen_values = true)]
    pub kind: Option<TypeArg>,
    /// Iso(U) of the space itself (default).
    #[arg(long, conflicts_with = "virtual_")]
    pub classical: bool,
    /// Iso(V, U) of the minimal virtual space.
    #[arg(long = "virtual")]
    pub virtual_: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub qmax: u64,
    #[arg(long)]
    pub dimmax: usize,
    #[arg(long, default_value_t = 1)]
    pub dimmin: usize,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { status, message: e.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure { status: EXIT_INPUT, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { status: EXIT_INPUT, message: message.into() }
}

/// A rendered command result.
pub struct Report {
    pub json: Value,
    pub table: String,
    pub status: i32,
}

/// Budget from the defaults, `VQS_BUDGET_NODES` and the command-line caps,
/// in increasing precedence.
pub fn budget_for(cli: &Cli, env_nodes: Option<&str>) -> Result<Budget, Failure> {
    let mut b = Budget::default();
    if let Some(v) = env_nodes {
        b.max_nodes = v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{BUDGET_ENV}: expected a non-negative integer, found {v:?}")))?;
    }
    if let Some(n) = cli.max_nodes {
        b.max_nodes = n;
    }
    if let Some(d) = cli.max_dim {
        b.max_ambient_dim = d;
    }
    if let Some(q) = cli.max_q {
        b.max_q = q;
    }
    if let Some(s) = cli.max_scan {
        b.max_scan = s;
    }
    Ok(b)
}

/// Runs one command and writes its report. The process environment is only
/// read for `VQS_BUDGET_NODES`.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let env = std::env::var(BUDGET_ENV).ok();
    run_with(cli, env.as_deref(), &iso_groups::order_formula, stdin, out, err)
}

/// [`run`] with an explicit node-cap override and order formula.
pub fn run_with(
    cli: &Cli,
    env_nodes: Option<&str>,
    formula: FormulaFn<'_>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut warnings = Vec::new();
    let result = budget_for(cli, env_nodes).and_then(|budget| dispatch(cli, &budget, formula, stdin, &mut warnings));
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(report) => {
            let text = match cli.output {
                OutputFormat::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
                OutputFormat::Table => report.table,
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            report.status
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn read_input(args: &InputArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    match &args.input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(|e| invalid(format!("standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn parse_input(args: &InputArgs, stdin: &mut dyn Read, warnings: &mut Vec<String>) -> Result<ParsedForm, Failure> {
    let parsed = io::parse_form(&read_input(args, stdin)?)?;
    warnings.extend(parsed.warnings.iter().cloned());
    Ok(parsed.form)
}

fn dispatch(
    cli: &Cli,
    budget: &Budget,
    formula: FormulaFn<'_>,
    stdin: &mut dyn Read,
    warnings: &mut Vec<String>,
) -> Result<Report, Failure> {
    match &cli.command {
        Command::Classify(a) => {
            let form = parse_input(a, stdin, warnings)?;
            classify_cmd(&form, budget, warnings)
        }
        Command::Embed(a) => {
            let form = parse_input(a, stdin, warnings)?;
            embed_cmd(&form, warnings)
        }
        Command::Minimalize(a) => {
            let form = parse_input(a, stdin, warnings)?;
            minimalize_cmd(&form, warnings)
        }
        Command::Order(a) => order_cmd(a, formula),
        Command::Enumerate(a) => enumerate_cmd(a, formula, budget, cli.seed),
        Command::Census(a) => census_cmd(a, budget),
        Command::Verify(a) => verify_cmd(a, formula, budget),
    }
}

fn classify_cmd(form: &ParsedForm, budget: &Budget, warnings: &[String]) -> Result<Report, Failure> {
    let qs = match form {
        ParsedForm::Plain(q) => q.clone(),
        ParsedForm::Virtual(v) => v.restricted_form(),
    };
    let report = classify::canonical_form(&qs, budget)?;
    let body = ClassificationJson::from(&report);
    let mut t = Table::new(&["field", "dim", "type", "witt index", "e", "square class"]);
    t.row(vec![
        report.field.to_string(),
        report.dim.to_string(),
        report.kind.to_string(),
        report.witt_index.to_string(),
        report.e_used.map(|e| report.field.format(e)).unwrap_or_else(|| "-".into()),
        report.square_class.map(|c| format!("{c:?}").to_lowercase()).unwrap_or_else(|| "-".into()),
    ]);
    let mut table = t.render();
    table.push_str("canonical form:\n");
    table.push_str(&render_matrix(report.canonical.coeffs()));
    Ok(Report { json: with_warnings(to_value(&body), warnings), table, status: EXIT_OK })
}

fn embed_cmd(form: &ParsedForm, warnings: &[String]) -> Result<Report, Failure> {
    let qs = match form {
        ParsedForm::Plain(q) => q.clone(),
        ParsedForm::Virtual(v) => v.restricted_form(),
    };
    let vqs = embedding::embed_ambient(&qs)?;
    let summary = VirtualSummary::new(&vqs);
    let table = virtual_table(&vqs);
    Ok(Report { json: with_warnings(to_value(&summary), warnings), table, status: EXIT_OK })
}

fn minimalize_cmd(form: &ParsedForm, warnings: &[String]) -> Result<Report, Failure> {
    let vqs = match form {
        ParsedForm::Plain(q) => VirtualQuadraticSpace::whole(q.clone())?,
        ParsedForm::Virtual(v) => v.clone(),
    };
    let (minimal, decomposition) = embedding::minimalize(&vqs)?;
    let body = json!({
        "input": VirtualSummary::new(&vqs),
        "minimal": VirtualSummary::new(&minimal),
        "decomposition": DecompositionJson::new(&decomposition, vqs.dim()),
    });
    let mut table = String::from("input:\n");
    table.push_str(&virtual_table(&vqs));
    table.push_str("minimal:\n");
    table.push_str(&virtual_table(&minimal));
    Ok(Report { json: with_warnings(body, warnings), table, status: EXIT_OK })
}

fn group_cell(a: &GroupArgs) -> Result<(Kind, Semantics), Failure> {
    let kind = match (a.dim % 2, a.kind) {
        (_, _) if a.dim == 0 => return Err(invalid("--dim must be positive")),
        (1, None) => Kind::OddDim,
        (1, Some(_)) => return Err(invalid("--type applies to even dimensions only")),
        (_, Some(TypeArg::Plus)) => Kind::Plus,
        (_, Some(TypeArg::Minus)) => Kind::Minus,
        (_, None) => return Err(invalid("--type + or - is required for even dimensions")),
    };
    let semantics = if a.virtual_ { Semantics::Virtual } else { Semantics::Classical };
    if semantics == Semantics::Virtual && kind != Kind::OddDim {
        return Err(invalid("--virtual applies to odd dimensions only"));
    }
    if vqs::field::prime_power(a.q).is_none() {
        return Err(invalid(format!("--q {} is not a prime power", a.q)));
    }
    Ok((kind, semantics))
}

fn order_cmd(a: &GroupArgs, formula: FormulaFn<'_>) -> Result<Report, Failure> {
    let (kind, semantics) = group_cell(a)?;
    let value = formula(a.q, a.dim, kind, semantics)?;
    let body = json!({
        "q": a.q,
        "dim": a.dim,
        "k": a.dim / 2,
        "epsilon": kind.epsilon(),
        "kind": kind,
        "semantics": semantics,
        "formula_value": value.to_string(),
    });
    let mut t = Table::new(&["q", "dim", "type", "semantics", "order"]);
    t.row(vec![
        a.q.to_string(),
        a.dim.to_string(),
        kind.to_string(),
        semantics_name(semantics).into(),
        value.to_string(),
    ]);
    Ok(Report { json: body, table: t.render(), status: EXIT_OK })
}

fn enumerate_cmd(a: &GroupArgs, formula: FormulaFn<'_>, budget: &Budget, seed: u64) -> Result<Report, Failure> {
    let (kind, semantics) = group_cell(a)?;
    let value = formula(a.q, a.dim, kind, semantics)?;
    let field = iso_groups::field_of_order(a.q)?;
    let form = classify::standard_form(&field, a.dim, kind, classify::SquareClass::Square)?;
    let set = match semantics {
        Semantics::Classical => iso_groups::enumerate_isometries(&form, budget)?,
        Semantics::Virtual => iso_groups::enumerate_virtual_isometries(&embedding::embed_ambient(&form)?, budget)?,
    };
    let matched = BigUint::from(set.order) == value;
    let axioms = set.check_group_axioms(seed);
    let report = GroupOrderReport {
        q: a.q,
        dim: a.dim,
        k: a.dim / 2,
        kind,
        semantics,
        formula_value: value,
        enumerated_value: Some(set.order),
        status: if matched { VerifyStatus::Matched } else { VerifyStatus::Mismatched },
    };
    let mut body = to_value(&GroupOrderJson::from(&report));
    body["nodes"] = json!(set.nodes.to_string());
    body["seed"] = json!(seed);
    body["group_axioms"] = json!(axioms.is_ok());
    if let Err(e) = &axioms {
        body["group_axioms_error"] = json!(e);
    }
    let mut t = order_table(std::slice::from_ref(&report));
    let _ = writeln!(t, "nodes: {}  group axioms: {}", set.nodes, if axioms.is_ok() { "ok" } else { "FAILED" });
    let status = if matched && axioms.is_ok() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Report { json: body, table: t, status })
}

fn census_cmd(a: &CensusArgs, budget: &Budget) -> Result<Report, Failure> {
    let field = iso_groups::field_of_order(a.q)?;
    let report = classify::class_census(&field, a.n, budget)?;
    let body = io::CensusJson::from(&report);
    let mut t = Table::new(&["type", "witt index", "forms", "representative"]);
    for c in &report.classes {
        t.row(vec![
            c.kind.to_string(),
            c.witt_index.to_string(),
            c.forms.to_string(),
            render_matrix(c.representative.coeffs()).trim_end().replace('\n', " / "),
        ]);
    }
    let mut table = format!(
        "{} n={}: {} forms, {} with trivial radical\n",
        report.field, report.dim, report.total_forms, report.trivial_radical_forms
    );
    table.push_str(&t.render());
    let _ = writeln!(table, "classes: {} (expected {})", report.classes.len(), report.expected_classes);
    let status = if report.classes.len() == report.expected_classes { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Report { json: to_value(&body), table, status })
}

fn verify_cmd(a: &VerifyArgs, formula: FormulaFn<'_>, budget: &Budget) -> Result<Report, Failure> {
    if a.qmax < 2 {
        return Err(invalid("--qmax must be at least 2"));
    }
    if a.dimmin == 0 || a.dimmin > a.dimmax {
        return Err(invalid("need 1 <= --dimmin <= --dimmax"));
    }
    let reports = iso_groups::verify_orders_with(a.qmax, a.dimmin, a.dimmax, budget, formula);
    let mismatches = reports.iter().filter(|r| r.matches() == Some(false)).count();
    let skipped = reports.iter().filter(|r| r.matches().is_none()).count();
    let cells: Vec<GroupOrderJson> = reports.iter().map(GroupOrderJson::from).collect();
    let body = json!({
        "qmax": a.qmax,
        "dimmin": a.dimmin,
        "dimmax": a.dimmax,
        "cells": cells,
        "matched": reports.len() - mismatches - skipped,
        "mismatched": mismatches,
        "skipped": skipped,
        "all_match": mismatches == 0,
    });
    let mut table = order_table(&reports);
    let _ = writeln!(
        table,
        "matched {}, mismatched {}, skipped {}",
        reports.len() - mismatches - skipped,
        mismatches,
        skipped
    );
    let status = if mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK };
    Ok(Report { json: body, table, status })
}

fn semantics_name(s: Semantics) -> &'static str {
    match s {
        Semantics::Classical => "classical",
        Semantics::Virtual => "virtual",
    }
}

fn order_table(reports: &[GroupOrderReport]) -> String {
    let mut t = Table::new(&["q", "dim", "type", "semantics", "formula", "enumerated", "status"]);
    for r in reports {
        t.row(vec![
            r.q.to_string(),
            r.dim.to_string(),
            r.kind.to_string(),
            semantics_name(r.semantics).into(),
            r.formula_value.to_string(),
            r.enumerated_value.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            match &r.status {
                VerifyStatus::Matched => "match".into(),
                VerifyStatus::Mismatched => "MISMATCH".into(),
                VerifyStatus::Skipped(why) => format!("skipped ({why})"),
            },
        ]);
    }
    t.render()
}

fn virtual_table(vqs: &VirtualQuadraticSpace) -> String {
    let mut t = Table::new(&["dim V", "dim U", "dim U∩U^⊥", "minimal", "non-degenerate"]);
    t.row(vec![
        vqs.ambient().dim().to_string(),
        vqs.dim().to_string(),
        vqs.isotropic_part().dim().to_string(),
        vqs.is_minimal().to_string(),
        vqs.is_nondegenerate().to_string(),
    ]);
    let mut s = t.render();
    s.push_str("ambient form:\n");
    s.push_str(&render_matrix(vqs.ambient().coeffs()));
    s.push_str("U basis:\n");
    s.push_str(&render_matrix(vqs.subspace().basis()));
    s
}

fn render_matrix(m: &vqs::Matrix) -> String {
    let f = m.field();
    let mut t = Table::bare();
    for r in 0..m.rows() {
        t.row(m.row(r).iter().map(|&x| f.format(x)).collect());
    }
    t.render()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn with_warnings(mut v: Value, warnings: &[String]) -> Value {
    if !warnings.is_empty() {
        v["warnings"] = json!(warnings);
    }
    v
}

/// Left-aligned text table.
struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: Some(header.iter().map(|s| s.to_string()).collect()), rows: Vec::new() }
    }

    fn bare() -> Self {
        Table { header: None, rows: Vec::new() }
    }

    fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }

    fn render(&self) -> String {
        let all: Vec<&Vec<String>> = self.header.iter().chain(self.rows.iter()).collect();
        let cols = all.iter().map(|r| r.len()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| all.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let line = |r: &Vec<String>| {
            let cells: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
                .collect();
            cells.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if let Some(h) = &self.header {
            out.push_str(&line(h));
            out.push_str(&(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ") + "\n"));
        }
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

/// Shorthand used by tests and the binary.
pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}
