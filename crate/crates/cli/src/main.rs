// SPDX-License-Identifier: Apache-2.0

//! `aibom`: validation, coverage, model cards and hub ingestion from the shell.
//!
//! Exit status is 0 on success, 1 when a document fails validation or a
//! coverage threshold, and 2 for usage, IO and parse errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use aibom_core::catalog::{Catalog, Profile};
use aibom_core::compliance::{
    builtin_matrix, coverage_report, default_mapping, generate_model_card, load_mapping, load_matrix, CoverageMatrix,
    BUILTIN_MATRICES,
};
use aibom_core::conformance::{default_policy, load_policy, validate_read, ConformancePolicy, Verdict};
use aibom_core::hub::{
    automation_rate, default_rules, fetch_hub_record, hub_record_from_json, load_rules, map_hub_record,
    parse_hub_record, Origin,
};
use aibom_core::io::{canonicalize, read_document, write_document, ReadOutcome};
use aibom_core::model::Timestamp;
use aibom_core::rate::Rate;
use aibom_core::syntax::{self, Value};

#[derive(Parser)]
#[command(name = "aibom", version, about = "Validate and analyze AI bills of materials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Base,
    Ai,
    Dataset,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Base => Profile::Base,
            ProfileArg::Ai => Profile::Ai,
            ProfileArg::Dataset => Profile::Dataset,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check documents against a conformance policy.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Policy file; the bundled default policy otherwise.
        #[arg(long)]
        policy: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Report which regulatory obligations a document covers.
    Coverage {
        file: PathBuf,
        /// A bundled matrix name or the path of a matrix file.
        #[arg(long)]
        matrix: String,
        /// Fail unless satisfied/total reaches this rate (`a/b` or a decimal).
        #[arg(long)]
        min_satisfied: Option<Rate>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Render a model card for one AI package.
    Modelcard {
        file: PathBuf,
        /// Element id of the model; may be omitted when there is only one.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Build a partial document from model-hub metadata.
    #[command(group(ArgGroup::new("input").required(true).args(["record", "fetch"])))]
    Ingest {
        /// An intake record file.
        #[arg(long)]
        record: Option<PathBuf>,
        /// Fetch `<BASE_URL>/<MODEL_ID>` as JSON.
        #[arg(long, num_args = 2, value_names = ["BASE_URL", "MODEL_ID"])]
        fetch: Option<Vec<String>>,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Fetch timeout in seconds.
        #[arg(long, default_value_t = 30)]
        timeout: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List the field catalog.
    Fields {
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
    /// Rewrite a document in canonical form.
    Canonicalize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure that ends the command with exit status 2.
struct Fatal(String);

impl<E: Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<u8, Fatal>;

fn read(path: &Path) -> Result<Vec<u8>, Fatal> {
    std::fs::read(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Fatal> {
    std::fs::write(path, bytes).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<ReadOutcome, Fatal> {
    read_document(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { files, policy, format } => cmd_validate(&files, policy.as_deref(), format),
        Command::Coverage { file, matrix, min_satisfied, format } => {
            cmd_coverage(&file, &matrix, min_satisfied, format)
        }
        Command::Modelcard { file, model, mapping } => cmd_modelcard(&file, model.as_deref(), mapping.as_deref()),
        Command::Ingest { record, fetch, rules, out, timeout, format } => {
            cmd_ingest(record.as_deref(), fetch.as_deref(), rules.as_deref(), &out, timeout, format)
        }
        Command::Fields { profile } => cmd_fields(profile.map(Profile::from)),
        Command::Canonicalize { file, out } => cmd_canonicalize(&file, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fatal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn cmd_validate(files: &[PathBuf], policy: Option<&Path>, format: Format) -> Outcome {
    let policy = match policy {
        Some(p) => load_policy(&read(p)?).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => default_policy(),
    };
    let results: Vec<Result<(String, u8), Fatal>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| {
                let policy = &policy;
                scope.spawn(move || validate_one(f, policy, format, files.len() > 1))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Fatal("validation thread panicked".into()))))
            .collect()
    });
    let mut status = 0;
    for result in results {
        match result {
            Ok((output, code)) => {
                print!("{output}");
                status = status.max(code);
            }
            Err(Fatal(message)) => {
                eprintln!("error: {message}");
                status = 2;
            }
        }
    }
    Ok(status)
}

fn validate_one(path: &Path, policy: &ConformancePolicy, format: Format, several: bool) -> Result<(String, u8), Fatal> {
    let outcome = read_doc(path)?;
    let report = validate_read(&outcome, policy);
    let code = u8::from(report.verdict == Verdict::Fail);
    let output = match format {
        Format::Text if several => format!("== {}\n{}", path.display(), report.to_text()),
        Format::Text => report.to_text(),
        Format::Machine => {
            let mut value = report.to_value();
            if several {
                if let Value::Map(entries) = &mut value {
                    entries.insert(0, ("file".into(), Value::scalar(path.display().to_string())));
                }
            }
            let mut text = syntax::render(&value);
            if several {
                text.push_str("---\n");
            }
            text
        }
    };
    Ok((output, code))
}

fn resolve_matrix(name: &str) -> Result<CoverageMatrix, Fatal> {
    if let Some(m) = builtin_matrix(name) {
        return Ok(m);
    }
    let path = Path::new(name);
    if path.is_file() {
        return load_matrix(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())));
    }
    let names: Vec<&str> = BUILTIN_MATRICES.iter().map(|(n, _)| *n).collect();
    Err(Fatal(format!("unknown matrix '{name}' (built in: {})", names.join(", "))))
}

fn cmd_coverage(file: &Path, matrix: &str, min: Option<Rate>, format: Format) -> Outcome {
    let matrix = resolve_matrix(matrix)?;
    let outcome = read_doc(file)?;
    let report = coverage_report(&outcome.document, &matrix);
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Machine => print!("{}", syntax::render(&report.to_value())),
    }
    Ok(match min {
        Some(threshold) if report.satisfied_rate() < threshold => {
            eprintln!("coverage {} is below the required {threshold}", report.satisfied_rate());
            1
        }
        _ => 0,
    })
}

fn cmd_modelcard(file: &Path, model: Option<&str>, mapping: Option<&Path>) -> Outcome {
    let mapping = match mapping {
        Some(p) => load_mapping(&read(p)?).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => default_mapping(),
    };
    let doc = read_doc(file)?.document;
    let model = match model {
        Some(m) => m.to_string(),
        None => {
            let models: Vec<_> = doc.elements().filter(|e| e.as_ai().is_some()).collect();
            match models.as_slice() {
                [only] => only.id().to_string(),
                [] => return Err(Fatal("the document has no AI package".into())),
                _ => return Err(Fatal("the document has several AI packages; choose one with --model".into())),
            }
        }
    };
    let card = generate_model_card(&doc, &model, &mapping)?;
    print!("{}", card.text);
    println!("\nextraction-rate: {}", card.extraction_rate);
    Ok(0)
}

fn cmd_ingest(
    record: Option<&Path>,
    fetch: Option<&[String]>,
    rules: Option<&Path>,
    out: &Path,
    timeout: u64,
    format: Format,
) -> Outcome {
    let rules = match rules {
        Some(p) => load_rules(&read(p)?).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => default_rules(),
    };
    let record = match (record, fetch) {
        (Some(path), None) => parse_hub_record(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))?,
        (None, Some([base, model])) => {
            let body = fetch_hub_record(base, model, Duration::from_secs(timeout))?;
            let source = format!("{}/{}", base.trim_end_matches('/'), model);
            hub_record_from_json(&source, Timestamp::now(), &body)?
        }
        _ => return Err(Fatal("give exactly one of --record or --fetch".into())),
    };
    let mapping = map_hub_record(&record, &rules);
    let bytes = write_document(&mapping.document)?;
    write(out, &bytes)?;
    for finding in &mapping.findings {
        eprintln!("{finding}");
    }
    let rate = automation_rate(&mapping.document, Profile::Ai).ok();
    match format {
        Format::Text => {
            match rate {
                Some(r) => println!("automation-rate: {r} ({})", r.decimal(2)),
                None => println!("automation-rate: none (no AI package was populated)"),
            }
            let automated = mapping.notes.iter().filter(|n| n.origin == Origin::HubAutomated).count();
            println!("provenance: {} notes, {automated} hub-automated", mapping.notes.len());
            if mapping.unmapped_keys.is_empty() {
                println!("unmapped: none");
            } else {
                println!("unmapped:");
                for key in &mapping.unmapped_keys {
                    println!("  - {key}");
                }
            }
        }
        Format::Machine => {
            let mut top = vec![(
                "automationRate".to_string(),
                Value::scalar(rate.map(|r| r.to_string()).unwrap_or_else(|| "none".into())),
            )];
            top.push(("unmapped".into(), Value::List(mapping.unmapped_keys.iter().map(Value::scalar).collect())));
            if let Value::Map(notes) = mapping.notes_value() {
                top.extend(notes);
            }
            print!("{}", syntax::render(&Value::Map(top)));
        }
    }
    Ok(0)
}

fn cmd_fields(profile: Option<Profile>) -> Outcome {
    let catalog = Catalog::bundled();
    let mut rows: Vec<_> = catalog.all().iter().filter(|d| profile.is_none_or(|p| d.profile == p)).collect();
    rows.sort_by(|a, b| (a.profile, &a.name).cmp(&(b.profile, &b.name)));
    for d in rows {
        let aliases = if d.aliases.is_empty() { String::new() } else { format!("  (alias {})", d.aliases.join(", ")) };
        println!(
            "{:<8} {:<32} {:<19} {}{aliases}",
            d.profile.as_str(),
            d.name,
            d.value_kind.as_str(),
            d.cardinality.as_str()
        );
    }
    Ok(0)
}

fn cmd_canonicalize(file: &Path, out: Option<&Path>) -> Outcome {
    let bytes = canonicalize(&read(file)?).map_err(|e| Fatal(format!("{}: {e}", file.display())))?;
    match out {
        Some(path) => write(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(0)
}
