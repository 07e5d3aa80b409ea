use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::cli::Format;

pub fn render<T: Serialize>(report: &T, format: Format) -> Result<String> {
    let value = serde_json::to_value(report)?;
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value)?;
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut out = String::new();
            flatten("", &value, &mut out);
            out
        }
    })
}

/// One `path<TAB>value` line per scalar, paths joined with dots.
fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
        other => out.push_str(&format!("{prefix}\t{other}\n")),
    }
}

/// Print to stdout, or write `<dir>/<name>.<ext>` when `out_dir` is set.
pub fn emit<T: Serialize>(
    report: &T,
    format: Format,
    out_dir: Option<&Path>,
    name: &str,
) -> Result<()> {
    let text = render(report, format)?;
    match out_dir {
        Some(dir) => write_file(dir, &format!("{name}.{}", format.extension()), &text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn write_file(dir: &Path, file: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(file);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
