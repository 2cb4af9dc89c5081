//! Command-line workbench over the library: validation, composition,
//! conformance and acceptance checks, utraces membership, diagnosis, DOT
//! export, and the randomized property harness.
//!
//! Exit codes: 0 = pass/holds/valid, 1 = fail/violated, 2 = usage, parse,
//! or precondition error.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use compo_mbt::acceptance::{check_accepts, check_mutual, AcceptanceVerdict};
use compo_mbt::compose::compose;
use compo_mbt::diagnosis::diagnose;
use compo_mbt::format::{export_dot, parse, parse_raw, serialize};
use compo_mbt::generate::GenConfig;
use compo_mbt::lts::{Lts, Trace};
use compo_mbt::properties::run_property;
use compo_mbt::suspension::{check_uioco, utraces_contains, UiocoVerdict};

const SEED_ENV: &str = "COMPO_MBT_SEED";

#[derive(Parser)]
#[command(
    name = "compo-mbt",
    about = "Compositional model-based testing workbench for labelled transition systems",
    version
)]
struct Cli {
    /// Emit verdicts as stable JSON objects instead of human text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every model block in a file against the structural invariants.
    Validate {
        /// Path to a model file.
        file: String,
    },
    /// Compose two models and print (or write) the result.
    Compose {
        /// Left component (FILE::NAME, or FILE with a single block).
        left: String,
        /// Right component.
        right: String,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Check uioco conformance of an implementation against a specification.
    CheckUioco {
        #[arg(long = "impl")]
        implementation: String,
        #[arg(long = "spec")]
        specification: String,
    },
    /// Check whether the left model accepts the right one.
    CheckAccepts { left: String, right: String },
    /// Check mutual acceptance in both directions.
    CheckMutual { left: String, right: String },
    /// Decide membership of a trace in a model's utraces set.
    Utraces {
        model: String,
        /// Dot-separated labels, `delta` for quiescence; empty for ε.
        #[arg(long, allow_hyphen_values = true)]
        trace: String,
    },
    /// Attribute a system-level counterexample to component(s).
    Diagnose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, allow_hyphen_values = true)]
        trace: String,
        #[arg(long)]
        offending: String,
        #[arg(long = "impl-left")]
        impl_left: Option<String>,
        #[arg(long = "impl-right")]
        impl_right: Option<String>,
    },
    /// Export a model to DOT, optionally overlaying a second model's
    /// extra edges as dashed.
    ExportDot {
        model: String,
        #[arg(long)]
        overlay: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Run a randomized property of the harness.
    Fuzz {
        /// One of: commutativity, associativity, utraces-projection,
        /// trace-projection, compositionality, diagnosis-soundness,
        /// det-vs-brute.
        property: String,
        /// Base seed; defaults to $COMPO_MBT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Hypothesis-satisfying samples to evaluate.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Trace-enumeration depth for the projection/oracle properties.
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
}

/// A failure that maps to exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Loads `FILE::NAME`; a bare `FILE` works when it has exactly one block.
fn load_ref(reference: &str) -> Result<(String, Lts), UsageError> {
    let (path, name) = match reference.split_once("::") {
        Some((path, name)) => (path, Some(name)),
        None => (reference, None),
    };
    let text =
        fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{path}`: {e}")))?;
    let mut models = parse(&text).map_err(|e| UsageError(format!("{path}: {e}")))?;
    match name {
        Some(name) => models
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(n, m)| (n, m))
            .ok_or_else(|| UsageError(format!("`{path}` has no model named `{name}`"))),
        None => {
            if models.len() == 1 {
                Ok(models.remove(0))
            } else {
                Err(UsageError(format!(
                    "`{path}` contains {} models; select one with `{path}::NAME`",
                    models.len()
                )))
            }
        }
    }
}

fn parse_trace(text: &str) -> Result<Trace, UsageError> {
    text.parse::<Trace>()
        .map_err(|e| UsageError(format!("bad trace `{text}`: {e}")))
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("verdicts serialize")
        );
    } else {
        println!("{text}");
    }
}

fn write_out(out: &Option<String>, content: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| UsageError(format!("cannot write `{path}`: {e}")))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn accepts_text(who: &str, verdict: &AcceptanceVerdict) -> String {
    match verdict {
        AcceptanceVerdict::Holds => format!("{who}: holds"),
        AcceptanceVerdict::Violated {
            trace, pair, label, ..
        } => format!(
            "{who}: violated at trace {trace}, pair ({}, {}), label {label}",
            pair.0, pair.1
        ),
    }
}

fn uioco_text(verdict: &UiocoVerdict) -> String {
    match verdict {
        UiocoVerdict::Pass => "pass".to_string(),
        UiocoVerdict::Fail {
            trace,
            offending,
            impl_outs,
            spec_outs,
        } => {
            let fmt = |set: &std::collections::BTreeSet<String>| {
                set.iter().cloned().collect::<Vec<_>>().join(", ")
            };
            format!(
                "fail: after trace {trace} the implementation can produce {offending}, \
                 which the specification does not allow\n  impl outs: {{{}}}\n  spec outs: {{{}}}",
                fmt(impl_outs),
                fmt(spec_outs)
            )
        }
    }
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    match cli.command {
        Command::Validate { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| UsageError(format!("cannot read `{file}`: {e}")))?;
            let blocks = parse_raw(&text).map_err(|e| UsageError(format!("{file}: {e}")))?;
            let reports: Vec<(String, compo_mbt::ValidationReport)> = blocks
                .into_iter()
                .map(|(name, raw)| (name, raw.validate()))
                .collect();
            let all_valid = reports.iter().all(|(_, r)| r.is_valid());
            emit(
                cli.json,
                json!(reports
                    .iter()
                    .map(|(name, r)| json!({ "name": name, "violations": r.violations }))
                    .collect::<Vec<_>>()),
                reports
                    .iter()
                    .map(|(name, r)| format!("{name}: {r}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            );
            Ok(if all_valid { 0 } else { 1 })
        }
        Command::Compose { left, right, out } => {
            let (left_name, s) = load_ref(&left)?;
            let (right_name, e) = load_ref(&right)?;
            let composed = compose(&s, &e)?;
            let bundle = vec![(format!("{left_name}_{right_name}"), composed)];
            write_out(&out, &serialize(&bundle))?;
            Ok(0)
        }
        Command::CheckUioco {
            implementation,
            specification,
        } => {
            let (_, imp) = load_ref(&implementation)?;
            let (_, spec) = load_ref(&specification)?;
            let verdict = check_uioco(&imp, &spec)?;
            emit(
                cli.json,
                serde_json::to_value(&verdict).expect("verdict serializes"),
                uioco_text(&verdict),
            );
            Ok(if verdict.is_pass() { 0 } else { 1 })
        }
        Command::CheckAccepts { left, right } => {
            let (left_name, s) = load_ref(&left)?;
            let (right_name, e) = load_ref(&right)?;
            let verdict = check_accepts(&s, &e)?;
            emit(
                cli.json,
                serde_json::to_value(&verdict).expect("verdict serializes"),
                accepts_text(&format!("{left_name} accepts {right_name}"), &verdict),
            );
            Ok(if verdict.holds() { 0 } else { 1 })
        }
        Command::CheckMutual { left, right } => {
            let (left_name, s) = load_ref(&left)?;
            let (right_name, e) = load_ref(&right)?;
            let (forward, backward) = check_mutual(&s, &e)?;
            let ok = forward.holds() && backward.holds();
            emit(
                cli.json,
                json!({
                    "mutually_accepting": ok,
                    "left_accepts_right": forward,
                    "right_accepts_left": backward,
                }),
                format!(
                    "{}\n{}\nmutually accepting: {}",
                    accepts_text(&format!("{left_name} accepts {right_name}"), &forward),
                    accepts_text(&format!("{right_name} accepts {left_name}"), &backward),
                    if ok { "yes" } else { "no" }
                ),
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::Utraces { model, trace } => {
            let (name, m) = load_ref(&model)?;
            let sigma = parse_trace(&trace)?;
            let member = utraces_contains(&m, &sigma)?;
            emit(
                cli.json,
                json!({ "model": name, "trace": sigma, "member": member }),
                format!(
                    "{sigma} is {}a utrace of {name}",
                    if member { "" } else { "not " }
                ),
            );
            Ok(if member { 0 } else { 1 })
        }
        Command::Diagnose {
            left,
            right,
            trace,
            offending,
            impl_left,
            impl_right,
        } => {
            let (_, s) = load_ref(&left)?;
            let (_, e) = load_ref(&right)?;
            let impl_s = impl_left.as_deref().map(load_ref).transpose()?;
            let impl_e = impl_right.as_deref().map(load_ref).transpose()?;
            let sigma = parse_trace(&trace)?;
            let report = diagnose(
                &s,
                &e,
                &sigma,
                &offending,
                impl_s.as_ref().map(|(_, m)| m),
                impl_e.as_ref().map(|(_, m)| m),
            )?;
            let text = {
                let mut lines = vec![format!(
                    "offending `{}` after {} ({:?})",
                    report.offending, report.system_trace, report.method
                )];
                for a in &report.attributed {
                    lines.push(format!(
                        "  {:?} component, projected trace {}: {:?}",
                        a.component, a.projected, a.verdict
                    ));
                }
                lines.join("\n")
            };
            emit(
                cli.json,
                serde_json::to_value(&report).expect("report serializes"),
                text,
            );
            Ok(0)
        }
        Command::ExportDot {
            model,
            overlay,
            out,
        } => {
            let (_, m) = load_ref(&model)?;
            let overlay = overlay.as_deref().map(load_ref).transpose()?;
            let dot = export_dot(&m, overlay.as_ref().map(|(_, o)| o))?;
            write_out(&out, &dot)?;
            Ok(0)
        }
        Command::Fuzz {
            property,
            seed,
            count,
            depth,
        } => {
            let seed = match seed {
                Some(seed) => seed,
                None => std::env::var(SEED_ENV)
                    .ok()
                    .map(|s| {
                        s.parse::<u64>()
                            .map_err(|_| UsageError(format!("bad {SEED_ENV} value `{s}`")))
                    })
                    .transpose()?
                    .unwrap_or(0),
            };
            let cfg = GenConfig {
                seed,
                ..GenConfig::default()
            };
            let report = run_property(&property, &cfg, count, depth)?;
            emit(
                cli.json,
                serde_json::to_value(&report).expect("report serializes"),
                report.to_string(),
            );
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
