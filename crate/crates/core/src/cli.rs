//! Command-line front end. Every command produces a [`Table`]; the binary
//! only parses arguments and prints. Output is a pure function of the
//! arguments, with rows in a fixed order.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cycles::big_to_json;
use crate::error::{Error, Result};
use crate::field_arith::FieldDatum;
use crate::galois_points::{match_weights, InertialDatum};
use crate::groth_solver::{build_decomp_matrix, solve_n};
use crate::jh::{jh_factors, p_tau};
use crate::tame_types::{enumerate_tame_types, TameType};
use crate::verify::{Suite, Verifier};
use crate::weights::{enumerate_weights, SerreWeight};

pub const SCHEMA: &str = "bmweights/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bmweights", version, about = "Serre weights, tame types and cycle identities for GL2")]
pub struct Cli {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Residue characteristic (odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    /// Residue degree.
    #[arg(long, global = true, default_value_t = 1)]
    pub f: u32,
    /// Ramification index.
    #[arg(long, global = true, default_value_t = 1)]
    pub e: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List the Serre weights, Steinberg ones included.
    Weights,
    /// List tame types up to isomorphism.
    Types,
    /// Jordan-Hoelder factors of the reduction of a tame type.
    Jh {
        #[arg(long = "type", value_name = "SPEC")]
        tau: String,
    },
    /// Integers n_tau(sigma) with sum n_tau m_sigma'(tau) = delta.
    SolveN {
        #[arg(long, value_name = "SPEC")]
        weight: String,
    },
    /// Serre weights predicted for an inertial datum.
    Match {
        #[arg(long, value_name = "SPEC")]
        datum: String,
    },
    /// Run verification suites and report the first counterexample.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Resolved configuration of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub field: FieldDatum,
    pub command: Command,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        Ok(RunConfig {
            field: FieldDatum::new(cli.field.p, cli.field.f, cli.field.e)?,
            command: cli.command,
            format: cli.field.format,
            jobs: cli.field.jobs,
        })
    }
}

/// Named columns and rows of JSON cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub field: FieldDatum,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(command: &'static str, field: FieldDatum, columns: &[&'static str]) -> Self {
        Table { command, field, columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect::<Map<_, _>>()))
            .collect();
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "field": {"p": self.field.p(), "f": self.field.f(), "e": self.field.e()},
            "rows": rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn joined(digits: &[u32]) -> String {
    digits.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn weight_cells(w: &SerreWeight) -> [Value; 4] {
    [json!(w.key()), json!(joined(w.s())), json!(w.twist().value()), json!(w.dim())]
}

fn type_cells(tau: &TameType) -> Vec<Value> {
    vec![
        json!(tau.key()),
        json!(tau.kind().name()),
        json!(tau.eta().value()),
        json!(tau.eta_prime().value()),
        json!(joined(tau.gamma().digits())),
        json!(tau.expected_dim()),
        json!(p_tau(tau).len()),
    ]
}

pub fn cmd_weights(cfg: &RunConfig) -> Table {
    let mut t = Table::new("weights", cfg.field, &["weight", "s", "twist", "dim", "steinberg"]);
    for w in enumerate_weights(&cfg.field, true) {
        let mut row = weight_cells(&w).to_vec();
        row.push(json!(w.is_steinberg()));
        t.push(row);
    }
    t
}

pub fn cmd_types(cfg: &RunConfig) -> Table {
    let mut t = Table::new("types", cfg.field, &["type", "kind", "eta", "eta_prime", "gamma", "dim", "shapes"]);
    for tau in enumerate_tame_types(&cfg.field) {
        t.push(type_cells(&tau));
    }
    t
}

pub fn cmd_jh(cfg: &RunConfig, spec: &str) -> Result<Table> {
    let tau = TameType::parse(&cfg.field, spec)?;
    let mut t = Table::new("jh", cfg.field, &["type", "shape", "weight", "s", "twist", "dim"]);
    for x in jh_factors(&tau)? {
        let mut row = vec![json!(tau.key()), json!(x.shape.to_string())];
        row.extend(weight_cells(&x.weight));
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_solve_n(cfg: &RunConfig, spec: &str) -> Result<Table> {
    let w = SerreWeight::parse(&cfg.field, spec)?;
    if w.is_steinberg() {
        return Err(Error::SteinbergInput(w.key()));
    }
    let m = build_decomp_matrix(&cfg.field)?;
    let sol = solve_n(&m, &w)?;
    let mut t = Table::new("solve-n", cfg.field, &["weight", "type", "coeff"]);
    for (tau, k) in sol.terms() {
        t.push(vec![json!(w.key()), json!(tau.key()), Value::Number(big_to_json(k))]);
    }
    Ok(t)
}

pub fn cmd_match(cfg: &RunConfig, spec: &str) -> Result<Table> {
    let d = InertialDatum::parse(&cfg.field, spec)?;
    let mut t = Table::new("match", cfg.field, &["datum", "weight", "s", "twist", "dim"]);
    for w in match_weights(&cfg.field, &d)? {
        let mut row = vec![json!(d.key())];
        row.extend(weight_cells(&w));
        t.push(row);
    }
    Ok(t)
}

/// One row per suite; the counterexample columns are empty when it passed.
pub fn cmd_verify(cfg: &RunConfig, suite: &str) -> Result<(Table, bool)> {
    let suites = Suite::parse_list(suite)?;
    let reports = Verifier::new(cfg.field).run_all(&suites);
    let mut t = Table::new(
        "verify",
        cfg.field,
        &["suite", "passed", "checks", "check", "type", "weight", "shape", "lhs", "rhs"],
    );
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        let cx = r.counterexample.as_ref();
        let opt = |v: Option<&String>| v.map_or(Value::Null, |s| json!(s));
        t.push(vec![
            json!(r.suite.name()),
            json!(r.passed()),
            json!(r.checks),
            opt(cx.map(|c| &c.check)),
            opt(cx.and_then(|c| c.tau.as_ref())),
            opt(cx.and_then(|c| c.weight.as_ref())),
            opt(cx.and_then(|c| c.shape.as_ref())),
            opt(cx.map(|c| &c.lhs)),
            opt(cx.map(|c| &c.rhs)),
        ]);
    }
    Ok((t, ok))
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn execute(cfg: &RunConfig) -> Output {
    let result = match &cfg.command {
        Command::Weights => Ok((cmd_weights(cfg), true)),
        Command::Types => Ok((cmd_types(cfg), true)),
        Command::Jh { tau } => cmd_jh(cfg, tau).map(|t| (t, true)),
        Command::SolveN { weight } => cmd_solve_n(cfg, weight).map(|t| (t, true)),
        Command::Match { datum } => cmd_match(cfg, datum).map(|t| (t, true)),
        Command::Verify { suite } => cmd_verify(cfg, suite),
    };
    match result {
        Ok((table, ok)) => {
            let mut stderr = String::new();
            if !ok {
                for row in &table.rows {
                    if row[1] == json!(false) {
                        let text: Vec<String> = table.columns.iter().zip(row).skip(3).map(|(c, v)| format!("{c}={}", cell(v))).collect();
                        let _ = writeln!(stderr, "counterexample in suite {}: {}", cell(&row[0]), text.join(" "));
                        break;
                    }
                }
            }
            Output { stdout: table.render(cfg.format), stderr, code: if ok { EXIT_OK } else { EXIT_VERIFY_FAILED } }
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn usage_error(msg: &str) -> Output {
    Output { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_USAGE }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(&e.to_string()),
    };
    match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cfg)),
            Err(e) => usage_error(&e.to_string()),
        },
        None => execute(&cfg),
    }
}
