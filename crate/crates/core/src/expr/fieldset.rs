use std::collections::BTreeMap;

use super::{parse_expression, Expr};
use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// Unvalidated field definitions, with the 1-based indices used in config
/// files. `n_coeffs[(i, j)]` is the source of `N^i_j`; `s_coeffs[(k, i, j)]`
/// is the source of `S^k_{ij}`.
#[derive(Debug, Clone, Default)]
pub struct FieldSetSource {
    pub n: usize,
    pub fstar: String,
    pub n_coeffs: Option<BTreeMap<(usize, usize), String>>,
    pub s_coeffs: BTreeMap<(usize, usize, usize), String>,
    pub t_coeffs: BTreeMap<(usize, usize, usize), String>,
}

impl FieldSetSource {
    pub fn new(n: usize, fstar: impl Into<String>) -> Self {
        FieldSetSource {
            n,
            fstar: fstar.into(),
            ..Default::default()
        }
    }
}

/// A skew-symmetric `(1,2)` tensor field. Only `i < j` entries are stored
/// (zero-based keys `(k, i, j)`); the rest follow from skew-symmetry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SkewField {
    entries: BTreeMap<(usize, usize, usize), Expr>,
}

impl SkewField {
    /// Builds a field from zero-based `(k, i, j)` keys. Panics unless `i < j`.
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize, usize), Expr)>) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().collect();
        assert!(entries.keys().all(|&(_, i, j)| i < j));
        SkewField { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Expr)> {
        self.entries.iter()
    }

    /// Full component array `A^k_{ij}` at `(x, y)`, skew in `(i, j)`.
    pub fn eval(&self, m: usize, x: &[f64], y: &[f64]) -> Result<Tensor3> {
        let mut out = Tensor3::zeros(m);
        for (&(k, i, j), e) in &self.entries {
            let v = e.eval(x, y)?;
            out[(k, i, j)] = v;
            out[(k, j, i)] = -v;
        }
        Ok(out)
    }
}

/// Validated field definitions on a chart of a `2n`-dimensional manifold.
#[derive(Debug, Clone)]
pub struct FieldSet {
    pub n: usize,
    pub fstar: Expr,
    /// User-supplied nonlinear connection, `n_coeffs[i][j] = N^i_j`.
    pub n_coeffs: Option<Vec<Vec<Expr>>>,
    pub s_coeffs: SkewField,
    pub t_coeffs: SkewField,
}

impl FieldSet {
    /// Dimension of the base manifold, `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }
}

fn skew_field(
    n: usize,
    table: &str,
    src: &BTreeMap<(usize, usize, usize), String>,
) -> Result<SkewField> {
    let m = 2 * n;
    let mut entries = BTreeMap::new();
    for (&(k, i, j), text) in src {
        let field = format!("{table}.{k}.{i}.{j}");
        for idx in [k, i, j] {
            if idx == 0 || idx > m {
                return Err(Error::InvalidField {
                    field,
                    reason: format!("index {idx} out of range 1..={m}"),
                });
            }
        }
        if i >= j {
            return Err(Error::InvalidField {
                field,
                reason: "only i<j entries are stored for a skew-symmetric tensor".into(),
            });
        }
        let e = parse_expression(text, n).map_err(|e| Error::parse(field, e))?;
        entries.insert((k - 1, i - 1, j - 1), e);
    }
    Ok(SkewField { entries })
}

/// Parses every expression and checks every index against `n`.
pub fn validate_fieldset(src: &FieldSetSource) -> Result<FieldSet> {
    let n = src.n;
    if n == 0 {
        return Err(Error::InvalidField {
            field: "n".into(),
            reason: "must be a positive integer".into(),
        });
    }
    let m = 2 * n;
    let fstar = parse_expression(&src.fstar, n).map_err(|e| Error::parse("fstar", e))?;
    let n_coeffs = match &src.n_coeffs {
        None => None,
        Some(table) => {
            let mut rows = vec![vec![Expr::zero(); m]; m];
            for (&(i, j), text) in table {
                let field = format!("N.{i}.{j}");
                if i == 0 || i > m || j == 0 || j > m {
                    return Err(Error::InvalidField {
                        field,
                        reason: format!("index out of range 1..={m}"),
                    });
                }
                rows[i - 1][j - 1] =
                    parse_expression(text, n).map_err(|e| Error::parse(field, e))?;
            }
            Some(rows)
        }
    };
    Ok(FieldSet {
        n,
        fstar,
        n_coeffs,
        s_coeffs: skew_field(n, "S", &src.s_coeffs)?,
        t_coeffs: skew_field(n, "T", &src.t_coeffs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind;

    #[test]
    fn flat_fieldset_is_valid() {
        let fs = validate_fieldset(&FieldSetSource::new(1, "y1^2+y2^2")).unwrap();
        assert_eq!(fs.dim(), 2);
        assert!(fs.n_coeffs.is_none());
        assert!(fs.s_coeffs.is_empty() && fs.t_coeffs.is_empty());
    }

    #[test]
    fn fstar_index_out_of_range_names_field() {
        let err = validate_fieldset(&FieldSetSource::new(1, "y1^2+y3^2")).unwrap_err();
        match err {
            Error::Parse { field, source } => {
                assert_eq!(field, "fstar");
                assert!(matches!(
                    source.kind,
                    ParseErrorKind::IndexOutOfRange { .. }
                ));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn skew_entries_must_have_i_below_j() {
        let mut src = FieldSetSource::new(1, "y1^2+y2^2");
        src.s_coeffs.insert((1, 2, 1), "1".into());
        let err = validate_fieldset(&src).unwrap_err();
        assert!(err.to_string().contains("S.1.2.1"), "{err}");
        let mut src = FieldSetSource::new(1, "y1^2+y2^2");
        src.t_coeffs.insert((1, 1, 1), "1".into());
        assert!(validate_fieldset(&src).is_err());
    }

    #[test]
    fn bad_expression_in_table_names_key() {
        let mut src = FieldSetSource::new(1, "y1^2+y2^2");
        src.n_coeffs = Some([((1, 2), "y1 +".to_string())].into());
        let err = validate_fieldset(&src).unwrap_err();
        assert!(err.to_string().contains("N.1.2"), "{err}");
    }

    #[test]
    fn skew_field_evaluates_antisymmetrically() {
        let mut src = FieldSetSource::new(1, "y1^2+y2^2");
        src.s_coeffs.insert((2, 1, 2), "x1 + 2*y2".into());
        let fs = validate_fieldset(&src).unwrap();
        let s = fs.s_coeffs.eval(2, &[1.0, 0.0], &[0.0, 3.0]).unwrap();
        assert_eq!(s[(1, 0, 1)], 7.0);
        assert_eq!(s[(1, 1, 0)], -7.0);
        assert_eq!(s[(0, 0, 1)], 0.0);
        assert_eq!(s[(1, 0, 0)], 0.0);
    }
}
