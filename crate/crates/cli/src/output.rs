//! Table rendering: CSV (header row, comma-separated, LF endings, no
//! quoting) and JSON (one object with `params`, `rows`, `meta`). Cells are
//! strings in both formats so the two encodings carry identical values.

use fmdist::numerics::{floor_log10, rat, sig_decimal_string, ten_pow, HighPrecision, Rational};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
pub struct Table {
    pub params: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra key/value diagnostics: JSON puts them in `meta`, CSV prints
    /// them on standard error so the data stream stays single-schema.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            params: Vec::new(),
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<String>) {
        self.params.push((key.to_string(), value.into()));
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: u32) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    debug_assert!(row.iter().all(|cell| !cell.contains([',', '"', '\n'])));
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let params: Map<String, Value> = self
                    .params
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut meta = Map::new();
                meta.insert("precision".to_string(), json!(precision));
                meta.insert("version".to_string(), json!(env!("CARGO_PKG_VERSION")));
                for (k, v) in &self.notes {
                    meta.insert(k.clone(), Value::String(v.clone()));
                }
                let doc = json!({
                    "params": Value::Object(params),
                    "rows": rows,
                    "meta": Value::Object(meta),
                });
                let mut out = serde_json::to_string_pretty(&doc).expect("table serializes");
                out.push('\n');
                out
            }
        }
    }
}

/// Render an error-bounded value with `digits` significant digits,
/// verifying first that the certified error bound permits correct rounding:
/// below `10^-digits / 2` absolutely, and below half an ulp of the printed
/// significand.
pub fn render_hp(hp: &HighPrecision, digits: u32) -> Result<String, String> {
    if !hp.is_exact() {
        let absolute_gate = ten_pow(-(digits as i64)) / rat(2);
        if *hp.error_bound() > absolute_gate {
            return Err(format!(
                "certified error {} exceeds the 10^-{digits}/2 printing gate",
                hp.error_bound()
            ));
        }
        if !hp.value().is_zero() {
            let exponent = floor_log10(&hp.value().abs());
            let half_ulp = ten_pow(exponent - digits as i64 + 1) / rat(2);
            if *hp.error_bound() > half_ulp {
                return Err(format!(
                    "certified error {} exceeds half an ulp at {digits} significant digits",
                    hp.error_bound()
                ));
            }
        }
    }
    Ok(sig_decimal_string(hp.value(), digits))
}

/// Exact rational cell: `num/den` (or plain integer) for the exactness
/// audit columns.
pub fn render_exact(r: &Rational) -> String {
    r.to_string()
}

/// Decimal cell for an exactly-known rational.
pub fn render_rat(r: &Rational, digits: u32) -> String {
    sig_decimal_string(r, digits)
}
