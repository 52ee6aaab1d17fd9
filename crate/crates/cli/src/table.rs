use crate::error::CliResult;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

/// A named table of rows plus scalar metadata. JSON is canonical; CSV flattens
/// nested objects into `col_key` columns and drops the metadata.
pub struct Table {
    pub kind: &'static str,
    pub meta: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(kind: &'static str, columns: Vec<&'static str>) -> Self {
        Table { kind, meta: Map::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, v: impl Into<Value>) {
        self.meta.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "meta": self.meta,
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["schema_version".to_string()];
        // widen nested columns using the first row that has an object there
        let mut expand: Vec<Option<Vec<String>>> = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            let keys = self.rows.iter().find_map(|r| match &r[i] {
                Value::Object(m) => Some(m.keys().cloned().collect::<Vec<_>>()),
                _ => None,
            });
            match &keys {
                Some(ks) => header.extend(ks.iter().map(|k| format!("{c}_{k}"))),
                None => header.push(c.to_string()),
            }
            expand.push(keys);
        }
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![SCHEMA_VERSION.to_string()];
            for (v, keys) in r.iter().zip(&expand) {
                match keys {
                    Some(ks) => rec.extend(ks.iter().map(|k| cell(v.get(k).unwrap_or(&Value::Null)))),
                    None => rec.push(cell(v)),
                }
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// f64 to JSON, with non-finite values as null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}
