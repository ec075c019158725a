//! Tabular output: CSV with one `#`-prefixed JSON header line, or a JSON
//! document carrying the same header next to the rows.

use crate::ensemble::{EigenvalueSample, EnsembleParams};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Value, columns: &[&str]) -> Self {
        Table { header, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.header, self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Io("empty CSV".into()))?;
        let header_text =
            first.strip_prefix('#').ok_or_else(|| Error::Io("CSV must start with a `#` JSON header line".into()))?;
        let header: Value = serde_json::from_str(header_text.trim())?;
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Io("CSV has no column line".into()))?
            .split(',')
            .map(|c| c.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Io(format!("row {}: {e}", k + 1))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != columns.len() {
                return Err(Error::Io(format!("row {} has {} cells, expected {}", k + 1, row.len(), columns.len())));
            }
            rows.push(row);
        }
        Ok(Table { header, columns, rows })
    }
}

/// Samples as rows `(trial, re, im)`; the header must carry `params` and `seed`.
pub fn samples_table(header: Value, samples: &[EigenvalueSample]) -> Table {
    let mut t = Table::new(header, &["trial", "re", "im"]);
    for (i, s) in samples.iter().enumerate() {
        for z in &s.z {
            t.push(vec![i as f64, z.re, z.im]);
        }
    }
    t
}

/// Inverse of [`samples_table`].
pub fn samples_from_table(t: &Table) -> Result<Vec<EigenvalueSample>> {
    let params: EnsembleParams = serde_json::from_value(
        t.header.get("params").cloned().ok_or_else(|| Error::Io("header has no `params`".into()))?,
    )?;
    let seed = t.header.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let col = |name: &str| {
        t.columns.iter().position(|c| c == name).ok_or_else(|| Error::Io(format!("missing column `{name}`")))
    };
    let (ct, cr, ci) = (col("trial")?, col("re")?, col("im")?);
    let mut out: Vec<EigenvalueSample> = Vec::new();
    for row in &t.rows {
        let trial = row[ct] as usize;
        while out.len() <= trial {
            out.push(EigenvalueSample { params, seed, z: Vec::new() });
        }
        out[trial].z.push(Complex64::new(row[cr], row[ci]));
    }
    Ok(out)
}
