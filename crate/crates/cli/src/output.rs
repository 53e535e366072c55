//! Deterministic table output: headered CSV with `#` metadata lines, or the
//! same content as JSON. Floats are written with 17 significant digits so a
//! given sweep specification always produces byte-identical files.

use std::io::Write;

use serde_json::json;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (key, value) in &self.metadata {
            writeln!(w, "# {key}: {value}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Num(x) => format!("{x:.16e}"),
                    Cell::Int(n) => n.to_string(),
                })
                .collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn write_json<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let metadata: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| match cell {
                        Cell::Num(x) => json!(x),
                        Cell::Int(n) => json!(n),
                    })
                    .collect()
            })
            .collect();
        let doc = json!({
            "metadata": metadata,
            "columns": self.columns,
            "rows": rows,
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
    }

    /// Write to `--out` or stdout.
    pub fn emit(&self, out: Option<&std::path::Path>, format: Format) -> Result<(), CliError> {
        let io_err = |e: std::io::Error| CliError::Numerical(format!("cannot write output: {e}"));
        match out {
            Some(path) => {
                let mut file = std::io::BufWriter::new(
                    std::fs::File::create(path)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                );
                match format {
                    Format::Csv => self.write_csv(&mut file).map_err(io_err)?,
                    Format::Json => self.write_json(&mut file).map_err(io_err)?,
                }
                file.flush().map_err(io_err)
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                match format {
                    Format::Csv => self.write_csv(&mut lock).map_err(io_err),
                    Format::Json => self.write_json(&mut lock).map_err(io_err),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_stable() {
        let mut table = Table::new(vec!["a", "b"]);
        table.meta("tool", "qregress 0.1.0");
        table.rows.push(vec![Cell::Num(0.5), Cell::Int(3)]);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# tool: qregress 0.1.0\na,b\n5.0000000000000000e-1,3\n"
        );
    }

    #[test]
    fn json_has_columns_and_rows() {
        let mut table = Table::new(vec!["x"]);
        table.rows.push(vec![Cell::Num(1.25)]);
        let mut buf = Vec::new();
        table.write_json(&mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["columns"][0], "x");
        assert_eq!(doc["rows"][0][0], 1.25);
    }
}
