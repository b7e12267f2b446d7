//! Report rendering. Reports are deterministic by construction: object keys
//! serialize in sorted order and every number is either an integer or an
//! exact "p/q" string, so a fixed scenario always produces identical bytes.

use serde_json::{Map, Value, json};

use flexload::rational::{Rational, format_rational};

/// Integers stay JSON numbers; anything else becomes an exact "p/q" string.
pub fn rational_value(q: Rational) -> Value {
    if *q.denom() == 1 {
        json!(*q.numer())
    } else {
        Value::String(format_rational(q))
    }
}

pub fn rational_list(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(|&q| rational_value(q)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Assemble the full report envelope around a subcommand's result.
pub fn report(command: &str, digest: &str, seed: Option<u64>, result: Value) -> Value {
    let mut envelope = Map::new();
    envelope.insert("command".into(), json!(command));
    envelope.insert("library_version".into(), json!(flexload::VERSION));
    envelope.insert("scenario_digest".into(), json!(digest));
    if let Some(seed) = seed {
        envelope.insert("seed".into(), json!(seed));
    }
    envelope.insert("result".into(), result);
    Value::Object(envelope)
}

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        OutputFormat::Csv => render_csv(report),
    }
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("value serializes"),
    }
}

/// Key/value rows; the result object contributes one `result.<field>` row
/// per field, with nested structures compactly JSON-encoded in the cell.
fn render_csv(report: &Value) -> String {
    let mut out = String::from("key,value\n");
    let Value::Object(envelope) = report else {
        unreachable!("reports are always objects");
    };
    for (key, value) in envelope {
        if key == "result"
            && let Value::Object(fields) = value
        {
            for (field, inner) in fields {
                out.push_str(&format!(
                    "result.{field},{}\n",
                    csv_cell(&scalar_text(inner))
                ));
            }
            continue;
        }
        out.push_str(&format!("{key},{}\n", csv_cell(&scalar_text(value))));
    }
    out
}
