//! `starcone`: load a JSON workspace and run one operation on it.
//!
//! Reports go to stdout as JSON (or a flat text rendering), diagnostics to
//! stderr. Exit status is 0 on success, 1 on a domain error, 2 on usage or
//! parse errors.

pub mod commands;
pub mod error;
pub mod workspace;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};
use starcone_core::TolerancePolicy;

pub use error::{CliError, CliResult};
pub use workspace::{parse_workspace, Workspace, WorkspaceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "starcone", version, about = "Positive functionals, GNS representations and kernel cones on finite *-algebras")]
pub struct Args {
    /// Workspace JSON file.
    #[arg(short, long)]
    pub workspace: PathBuf,
    #[arg(long, default_value_t = TolerancePolicy::default().rel_rank_tol)]
    pub tol_rank: f64,
    #[arg(long, default_value_t = TolerancePolicy::default().psd_tol)]
    pub tol_psd: f64,
    #[arg(long, default_value_t = TolerancePolicy::default().match_tol)]
    pub tol_match: f64,
    /// Seed for the randomized commutant splitting in `decompose`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Geometric ratio for `chain`.
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: usize,
    /// Diagonal ceiling for increasing chains.
    #[arg(long, default_value_t = 1e12)]
    pub growth_ceiling: f64,
    /// One of: validate gns kernel functional cone-sum cone-scale cone-leq cone-diff exclude
    /// min-scale subrep chain weighted-sum decompose equiv pullback audit roundtrip
    pub verb: String,
    pub args: Vec<String>,
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(&args)
}

pub fn run(args: &Args) -> Outcome {
    let pol = match TolerancePolicy::new(args.tol_rank, args.tol_psd, args.tol_match) {
        Ok(p) => p,
        Err(e) => return failure(&CliError::Usage(format!("invalid tolerances: {e}")), None, args),
    };
    if !commands::VERBS.contains(&args.verb.as_str()) {
        return failure(&CliError::UnknownVerb(args.verb.clone()), None, args);
    }
    let ws = match parse_workspace(&args.workspace, &pol) {
        Ok(ws) => ws,
        Err(e) => return failure(&e, None, args),
    };
    let cx = commands::Context {
        ws: &ws,
        pol,
        opts: commands::CommandOptions {
            seed: args.seed,
            ratio: args.ratio,
            max_steps: args.max_steps,
            growth_ceiling: args.growth_ceiling,
        },
    };
    let mut report = envelope(args, &pol, &ws);
    match commands::run(&args.verb, &args.args, &cx) {
        Ok(result) => {
            report["status"] = json!("ok");
            report["result"] = result;
            Outcome {
                code: 0,
                stdout: render(&report, args.output),
                stderr: String::new(),
            }
        }
        Err(e) => failure(&e, Some(report), args),
    }
}

fn envelope(args: &Args, pol: &TolerancePolicy, ws: &Workspace) -> Value {
    let mut entities = serde_json::Map::new();
    for name in &args.args {
        let f = &ws.file;
        let v = if let Some(x) = f.functionals.get(name) {
            json!({ "functional": x })
        } else if let Some(x) = f.kernels.get(name) {
            json!({ "kernel": x })
        } else if let Some(x) = f.homomorphisms.get(name) {
            json!({ "homomorphism": x })
        } else if let Some(x) = f.algebras.get(name) {
            json!({ "algebra": { "dim": x.dim(), "labels": x.labels() } })
        } else {
            continue;
        };
        entities.insert(name.clone(), v);
    }
    json!({
        "verb": args.verb,
        "args": args.args,
        "workspace": args.workspace.display().to_string(),
        "inputs": entities,
        "tolerances": pol,
        "seed": args.seed,
    })
}

fn failure(e: &CliError, report: Option<Value>, args: &Args) -> Outcome {
    let stderr = format!("starcone: {}: {e}\n", e.name());
    // domain errors still get a report; load and usage errors only a diagnostic
    let stdout = match report {
        Some(mut r) if e.exit_code() == 1 => {
            r["status"] = json!("error");
            r["error"] = json!({ "name": e.name(), "message": e.to_string() });
            render(&r, args.output)
        }
        _ => String::new(),
    };
    Outcome {
        code: e.exit_code(),
        stdout,
        stderr,
    }
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = workspace::inline_json(v);
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut out = String::new();
            flatten("", v, &mut out);
            out
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

/// `a.b.c = value`, one leaf per line; numeric arrays stay on one line.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if is_leaf(v) {
        out.push_str(&format!("{prefix} = {v}\n"));
        return;
    }
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        _ => unreachable!(),
    }
}
