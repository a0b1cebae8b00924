//! Verification records and their human and line-oriented machine renderings.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::tensor::Tensor3;

/// Default tolerance per check family.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("quaternion", 0.0),
    ("homogeneity", 1e-9),
    ("signature", 0.0),
    ("uniqueness", 1e-8),
    ("c_symmetry", 0.0),
    ("cartan", 1e-9),
    ("metricity", 1e-8),
    ("torsion_vertical", 1e-8),
    ("torsion_horizontal", 1e-8),
    ("torsion_skew", 0.0),
    ("parallel", 1e-10),
];

/// Tolerances keyed by check family (the part of a check name before `.`).
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    map: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            map: DEFAULT_TOLERANCES
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }
}

impl Tolerances {
    /// Overrides one family. Fails on an unknown family name.
    pub fn set(&mut self, family: &str, value: f64) -> Result<(), String> {
        match self.map.get_mut(family) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(format!(
                "unknown check `{family}` (known: {})",
                self.map.keys().cloned().collect::<Vec<_>>().join(", ")
            )),
        }
    }

    pub fn get(&self, family: &str) -> f64 {
        self.map[family]
    }
}

/// One check outcome. `tol = None` marks an informational record that is
/// reported but never fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub point: Option<usize>,
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    /// Passes iff `residual <= tol` (and the residual is finite).
    pub fn measured(
        check: impl Into<String>,
        point: Option<usize>,
        residual: f64,
        tol: f64,
    ) -> Self {
        CheckRecord {
            check: check.into(),
            point,
            residual: Some(residual),
            tol: Some(tol),
            pass: residual.is_finite() && residual <= tol,
            detail: None,
        }
    }

    pub fn info(check: impl Into<String>, point: Option<usize>, residual: f64) -> Self {
        CheckRecord {
            check: check.into(),
            point,
            residual: Some(residual),
            tol: None,
            pass: true,
            detail: None,
        }
    }

    pub fn failed(
        check: impl Into<String>,
        point: Option<usize>,
        tol: f64,
        why: impl Into<String>,
    ) -> Self {
        CheckRecord {
            check: check.into(),
            point,
            residual: None,
            tol: Some(tol),
            pass: false,
            detail: Some(why.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn family(&self) -> &str {
        self.check.split('.').next().unwrap_or(&self.check)
    }

    pub fn informational(&self) -> bool {
        self.tol.is_none()
    }
}

/// Coefficients of one connection at one point, kept for `--dump-coeffs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffDump {
    pub point: usize,
    pub a: usize,
    pub route: &'static str,
    pub f: Tensor3,
    pub c: Tensor3,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
    pub dumps: Vec<CoeffDump>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
}

impl VerificationReport {
    /// Orders records by (point, check name); global records come first.
    pub fn sort(&mut self) {
        self.records
            .sort_by(|a, b| (a.point, &a.check).cmp(&(b.point, &b.check)));
        self.dumps
            .sort_by(|a, b| (a.point, a.a, a.route).cmp(&(b.point, b.a, b.route)));
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Records whose check name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records
            .iter()
            .filter(move |r| r.check.starts_with(prefix))
    }

    /// Largest residual among records whose name starts with `prefix`.
    pub fn max_residual(&self, prefix: &str) -> Option<f64> {
        self.matching(prefix)
            .filter_map(|r| r.residual)
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }

    pub fn summary(&self) -> Summary {
        let informational = self.records.iter().filter(|r| r.informational()).count();
        let failed = self.records.iter().filter(|r| !r.pass).count();
        Summary {
            checks: self.records.len(),
            passed: self.records.len() - failed - informational,
            failed,
            informational,
        }
    }

    pub fn write_human(&self, w: &mut impl Write) -> io::Result<()> {
        for r in &self.records {
            let point = r.point.map_or_else(|| "-".to_string(), |p| p.to_string());
            let residual = r
                .residual
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
            let (status, tol) = match r.tol {
                None => ("INFO", "-".to_string()),
                Some(t) => (if r.pass { "PASS" } else { "FAIL" }, format!("{t:.1e}")),
            };
            write!(
                w,
                "{status} {:<28} point {point:>4}  residual {residual:>10}  tol {tol:>8}",
                r.check
            )?;
            if let Some(d) = &r.detail {
                write!(w, "  {d}")?;
            }
            writeln!(w)?;
        }
        for d in &self.dumps {
            writeln!(w, "coefficients point {} a={} ({})", d.point, d.a, d.route)?;
            write_tensor_human(w, if d.a == 3 { "F~" } else { "F" }, &d.f)?;
            write_tensor_human(w, "C", &d.c)?;
        }
        let s = self.summary();
        writeln!(
            w,
            "summary: {} checks, {} passed, {} failed, {} informational",
            s.checks, s.passed, s.failed, s.informational
        )
    }

    /// One JSON object per line: every record, then every dump, then a
    /// summary line.
    pub fn write_machine(&self, w: &mut impl Write) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut *w, r)?;
            writeln!(w)?;
        }
        for d in &self.dumps {
            let value = serde_json::json!({
                "dump": "coefficients",
                "point": d.point,
                "a": d.a,
                "route": d.route,
                "F": nested(&d.f),
                "C": nested(&d.c),
            });
            serde_json::to_writer(&mut *w, &value)?;
            writeln!(w)?;
        }
        let s = self.summary();
        serde_json::to_writer(
            &mut *w,
            &serde_json::json!({ "summary": s, "pass": self.all_passed() }),
        )?;
        writeln!(w)
    }
}

/// `[k][i][j]` nested arrays, zero-based positions.
fn nested(t: &Tensor3) -> Vec<Vec<Vec<f64>>> {
    let m = t.dim();
    (0..m)
        .map(|k| {
            (0..m)
                .map(|i| (0..m).map(|j| t[(k, i, j)]).collect())
                .collect()
        })
        .collect()
}

fn write_tensor_human(w: &mut impl Write, name: &str, t: &Tensor3) -> io::Result<()> {
    let m = t.dim();
    for k in 0..m {
        for i in 0..m {
            let row: Vec<String> = (0..m).map(|j| format!("{:>12.6}", t[(k, i, j)])).collect();
            writeln!(w, "  {name}^{}_{}j: {}", k + 1, i + 1, row.join(" "))?;
        }
    }
    Ok(())
}
