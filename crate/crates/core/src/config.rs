//! TOML run configuration.
//!
//! ```toml
//! n = 1
//! fstar = "exp(x1)*(y1^2 + y2^2)"
//! points = [[0.1, 0.2, 1.0, 0.5], { x = [0.0, 0.0], y = [0.3, -1.0] }]
//! N.1.2 = "0.5*y2"          # N^1_2
//! S.1.1.2 = "0.25"          # S^1_{12}, only i < j
//!
//! [T]
//! "2.1.2" = "x1*y2"
//! ```
//!
//! Index keys are 1-based and may be written as dotted keys, nested tables
//! or quoted flat keys.

use std::collections::BTreeMap;
use std::path::Path;

use toml::{Table, Value};

use crate::calculus::ChartPoint;
use crate::error::{Error, Result};
use crate::expr::FieldSetSource;

/// A parsed configuration file: field sources plus explicit points.
#[derive(Debug, Clone)]
pub struct Config {
    pub source: FieldSetSource,
    pub points: Vec<ChartPoint>,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Config> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| err(e.to_string()))?;
    for key in table.keys() {
        if !matches!(key.as_str(), "n" | "fstar" | "N" | "S" | "T" | "points") {
            return Err(err(format!("unknown key `{key}`")));
        }
    }
    let n = match table.get("n") {
        Some(Value::Integer(v)) if *v >= 1 => *v as usize,
        Some(other) => {
            return Err(err(format!(
                "key `n` must be a positive integer, found {other}"
            )))
        }
        None => return Err(err("missing key `n`")),
    };
    let fstar = match table.get("fstar") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(err(format!("key `fstar` must be a string, found {other}"))),
        None => return Err(err("missing key `fstar`")),
    };
    let mut source = FieldSetSource::new(n, fstar);
    if let Some(v) = table.get("N") {
        let mut map = BTreeMap::new();
        for (idx, expr) in indexed_entries("N", v, 2)? {
            map.insert((idx[0], idx[1]), expr);
        }
        source.n_coeffs = Some(map);
    }
    for (name, slot) in [("S", &mut source.s_coeffs), ("T", &mut source.t_coeffs)] {
        if let Some(v) = table.get(name) {
            for (idx, expr) in indexed_entries(name, v, 3)? {
                slot.insert((idx[0], idx[1], idx[2]), expr);
            }
        }
    }
    let points = match table.get("points") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, item)| parse_point(n, i, item))
            .collect::<Result<_>>()?,
        Some(other) => return Err(err(format!("key `points` must be an array, found {other}"))),
    };
    Ok(Config { source, points })
}

/// Flattens `[N]`/`[S]`/`[T]` tables into `(indices, expression)` pairs.
fn indexed_entries(name: &str, value: &Value, arity: usize) -> Result<Vec<(Vec<usize>, String)>> {
    let mut out = Vec::new();
    collect(name, value, &mut Vec::new(), &mut out)?;
    out.into_iter()
        .map(|(path, expr)| {
            let key = format!("{name}.{}", path.join("."));
            let idx: Vec<usize> = path
                .iter()
                .map(|s| s.parse::<usize>().ok().filter(|v| *v >= 1))
                .collect::<Option<_>>()
                .ok_or_else(|| err(format!("key `{key}`: indices must be positive integers")))?;
            if idx.len() != arity {
                return Err(err(format!(
                    "key `{key}`: expected {arity} indices, found {}",
                    idx.len()
                )));
            }
            Ok((idx, expr))
        })
        .collect()
}

fn collect(
    name: &str,
    value: &Value,
    path: &mut Vec<String>,
    out: &mut Vec<(Vec<String>, String)>,
) -> Result<()> {
    match value {
        Value::Table(t) => {
            for (k, v) in t {
                let depth = path.len();
                path.extend(k.split('.').map(str::to_string));
                collect(name, v, path, out)?;
                path.truncate(depth);
            }
            Ok(())
        }
        Value::String(s) => {
            out.push((path.clone(), s.clone()));
            Ok(())
        }
        Value::Integer(i) => {
            out.push((path.clone(), i.to_string()));
            Ok(())
        }
        Value::Float(f) => {
            out.push((path.clone(), f.to_string()));
            Ok(())
        }
        other => Err(err(format!(
            "key `{name}.{}`: expected an expression string, found {other}",
            path.join(".")
        ))),
    }
}

fn numbers(key: &str, v: &Value) -> Result<Vec<f64>> {
    let items = v
        .as_array()
        .ok_or_else(|| err(format!("`{key}` must be an array of numbers")))?;
    items
        .iter()
        .map(|c| match c {
            Value::Float(f) => Ok(*f),
            Value::Integer(i) => Ok(*i as f64),
            other => Err(err(format!("`{key}` contains non-number {other}"))),
        })
        .collect()
}

fn parse_point(n: usize, i: usize, item: &Value) -> Result<ChartPoint> {
    let key = format!("points[{i}]");
    let point = match item {
        Value::Array(_) => ChartPoint::from_coords(n, &numbers(&key, item)?),
        Value::Table(t) => {
            let get = |c: &str| {
                t.get(c)
                    .ok_or_else(|| err(format!("`{key}` is missing `{c}`")))
                    .and_then(|v| numbers(&format!("{key}.{c}"), v))
            };
            let (x, y) = (get("x")?, get("y")?);
            if x.len() != 2 * n || y.len() != 2 * n {
                return Err(err(format!("`{key}`: x and y need {} entries each", 2 * n)));
            }
            ChartPoint::new(x, y)
        }
        other => {
            return Err(err(format!(
                "`{key}` must be an array or a table, found {other}"
            )))
        }
    };
    point.map_err(|e| err(format!("`{key}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_key_styles_parse() {
        let text = r#"
n = 1
fstar = "y1^2 + y2^2"
points = [[0.0, 0.0, 1.0, 0.0], { x = [0.5, 0.5], y = [0.0, 2.0] }]
N.1.2 = "0.5*y2"
S.1.1.2 = 0.25

[N.2]
1 = "y1"

[T]
"2.1.2" = "x1*y2"
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.points.len(), 2);
        assert_eq!(cfg.points[1].y, vec![0.0, 2.0]);
        let nmap = cfg.source.n_coeffs.unwrap();
        assert_eq!(nmap[&(1, 2)], "0.5*y2");
        assert_eq!(nmap[&(2, 1)], "y1");
        assert_eq!(cfg.source.s_coeffs[&(1, 1, 2)], "0.25");
        assert_eq!(cfg.source.t_coeffs[&(2, 1, 2)], "x1*y2");
    }

    #[test]
    fn errors_name_the_key() {
        let bad = [
            ("fstar = \"y1\"", "`n`"),
            ("n = 1\nfstar = \"y1\"\nbogus = 1", "bogus"),
            ("n = 1\nfstar = \"y1\"\nS.1.2 = \"1\"", "S.1.2"),
            ("n = 1\nfstar = \"y1\"\nN.a.1 = \"1\"", "N.a.1"),
            ("n = 1\nfstar = \"y1\"\npoints = [[0, 0, 1]]", "points[0]"),
            (
                "n = 1\nfstar = \"y1\"\npoints = [[0, 0, 0, 0]]",
                "points[0]",
            ),
        ];
        for (text, needle) in bad {
            let msg = parse_config(text).unwrap_err().to_string();
            assert!(msg.contains(needle), "{msg} should mention {needle}");
        }
    }
}
