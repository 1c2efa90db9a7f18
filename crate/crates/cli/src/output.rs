use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use qsv_core::format::round_sig;
use qsv_core::QsvError;
use serde_json::{json, Value};

pub const INFEASIBLE: u8 = 1;
pub const INPUT: u8 = 2;

pub enum Failure {
    Core(QsvError),
    Input(String),
}

impl Failure {
    pub fn report(self) -> ExitCode {
        let (code, body) = match self {
            Failure::Core(e) => (
                exit_code(&e),
                json!({"error": error_kind(&e), "message": e.to_string()}),
            ),
            Failure::Input(message) => (INPUT, json!({"error": "input", "message": message})),
        };
        eprintln!("{}", serde_json::to_string_pretty(&body).expect("json"));
        ExitCode::from(code)
    }
}

pub type CliResult = std::result::Result<ExitCode, Failure>;

fn exit_code(e: &QsvError) -> u8 {
    match e {
        QsvError::NoLocalHomogeneous { .. }
        | QsvError::CompletenessViolation { .. }
        | QsvError::CannotRevise(_)
        | QsvError::NegativeEntries(_)
        | QsvError::NoProtocol
        | QsvError::AlreadyComplete(_) => INFEASIBLE,
        _ => INPUT,
    }
}

fn error_kind(e: &QsvError) -> &'static str {
    match e {
        QsvError::NonHermitian { .. } => "non_hermitian",
        QsvError::BadDimension(_) => "bad_dimension",
        QsvError::DimensionMismatch { .. } => "dimension_mismatch",
        QsvError::QubitRange { .. } => "qubit_range",
        QsvError::InvalidParameter(_) => "invalid_parameter",
        QsvError::ZeroVector => "zero_vector",
        QsvError::InvalidSubset(_) => "invalid_subset",
        QsvError::NotInvolution(_) => "not_involution",
        QsvError::InvalidProtocol(_) => "invalid_protocol",
        QsvError::MalformedProtocol(_) => "malformed_protocol",
        QsvError::NonCommuting(..) => "non_commuting",
        QsvError::DependentGenerators => "dependent_generators",
        QsvError::GeneratorCount { .. } => "generator_count",
        QsvError::InvalidAdjacency(_) => "invalid_adjacency",
        QsvError::NoLocalHomogeneous { .. } => "no_local_homogeneous",
        QsvError::CompletenessViolation { .. } => "completeness_violation",
        QsvError::CannotRevise(_) => "cannot_revise",
        QsvError::NegativeEntries(_) => "negative_entries",
        QsvError::NoProtocol => "no_protocol",
        QsvError::DegenerateTopEigenvalue => "degenerate_top_eigenvalue",
        QsvError::AlreadyComplete(_) => "already_complete",
        QsvError::NotHomogeneous(_) => "not_homogeneous",
        QsvError::MalformedTree(_) => "malformed_tree",
        QsvError::Parse { .. } => "parse",
    }
}

/// Rounds every number to the export precision.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = round_sig(n.as_f64().expect("finite"));
            if x.fract() == 0.0 && x.abs() < 1e15 {
                json!(x as i64)
            } else {
                json!(x)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(dir.join(name), contents))
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", dir.join(name).display())))
}

/// Prints the report and writes it, plus any extra files, under `out`.
pub fn emit(
    report: Value,
    out: Option<&Path>,
    name: &str,
    extra: &[(&str, String)],
    code: u8,
) -> CliResult {
    let text = serde_json::to_string_pretty(&rounded(report)).expect("json");
    print_out(&(text.clone() + "\n"));
    if let Some(dir) = out {
        write(dir, &format!("{name}.json"), &(text + "\n"))?;
        for (file, contents) in extra {
            write(dir, file, contents)?;
        }
    }
    Ok(ExitCode::from(code))
}

/// Pretty JSON of a document at export precision.
pub fn document<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(&rounded(to_value(x))).expect("json") + "\n"
}

/// Writes to stdout, ignoring a closed pipe.
pub fn print_out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}
