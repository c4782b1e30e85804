use std::fs;

use serde_json::Value;

use crate::commands::Output;
use crate::{Cli, CliError, Format};

/// `key: value` lines with dotted paths, arrays indexed.
fn text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text(x, &key, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = xs.iter().map(scalar).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(cli: &Cli, out: &Output) -> Result<(), CliError> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.record).expect("json") + "\n",
        Format::Text => {
            let mut s = String::new();
            text(&out.record, "", &mut s);
            s
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
