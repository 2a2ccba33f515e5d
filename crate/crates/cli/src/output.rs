use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::CliError;

pub use alexandrov::convergence::format_significant as sig;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes `contents` to `out` and a manifest with everything needed to
/// re-run the command beside it.
pub fn write_with_manifest(
    out: &Path,
    contents: &str,
    verb: &str,
    options: &impl Serialize,
    argv: &[String],
    extra: serde_json::Value,
) -> Result<(), CliError> {
    write_atomic(out, contents)?;
    let manifest = json!({
        "verb": verb,
        "options": options,
        "argv": argv,
        "library": format!("alexandrov {}", env!("CARGO_PKG_VERSION")),
        "output": out.file_name().map(|n| n.to_string_lossy().into_owned()),
        "details": extra,
    });
    write_atomic(&manifest_path(out), &(serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n"))
}

/// Recursively rounds floats in a JSON value to nine significant digits.
pub fn rounded(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => sig(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Number(n)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn json_text(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    serde_json::to_string_pretty(&rounded(v)).expect("json serializes") + "\n"
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_floats(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            parse_number(t).ok_or_else(|| usage(format!("'{t}' is not a number")))
        })
        .collect()
}

/// A float, `pi`-multiple or simple fraction such as `1/16` or `3pi/2`.
pub fn parse_number(t: &str) -> Option<f64> {
    let t = t.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), parse_number(d)?),
        None => (t.clone(), 1.0),
    };
    let value = if let Some(c) = num.strip_suffix("pi") {
        let c = c.trim_end_matches('*');
        if c.is_empty() {
            std::f64::consts::PI
        } else {
            c.parse::<f64>().ok()? * std::f64::consts::PI
        }
    } else {
        num.parse::<f64>().ok()?
    };
    Some(value / den)
}

/// `name=a..b` (geometric ladder by factor 2 toward `b`) or `name=a,b,c`.
pub fn parse_ladder(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let body = text
        .strip_prefix(&format!("{name}="))
        .ok_or_else(|| usage(format!("ladder '{text}' must start with '{name}='")))?;
    if let Some((a, b)) = body.split_once("..") {
        let (a, b) = (
            parse_number(a).ok_or_else(|| usage(format!("bad ladder start '{a}'")))?,
            parse_number(b).ok_or_else(|| usage(format!("bad ladder end '{b}'")))?,
        );
        if !(a > 0.0 && b > 0.0) {
            return Err(usage("ladder ends must be positive"));
        }
        let factor = if b >= a { 2.0 } else { 0.5 };
        let mut out = vec![a];
        let mut x = a;
        while out.len() < 64 {
            x *= factor;
            if (factor > 1.0 && x > b * (1.0 + 1e-12)) || (factor < 1.0 && x < b * (1.0 - 1e-12)) {
                break;
            }
            out.push(x);
        }
        Ok(out)
    } else {
        parse_floats(body)
    }
}
