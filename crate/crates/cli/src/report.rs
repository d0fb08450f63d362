use serde_json::{json, Value};

/// One experiment's tabular output plus its self-describing header.
pub struct Report {
    /// Resolved configuration, embedded verbatim in every output file.
    pub config: Value,
    /// Derived scalars (probabilities, located roots, window metadata).
    pub metadata: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Report {
    /// CSV payload: a '#'-prefixed JSON header line, a column-name line,
    /// then one row per line. No timestamps; identical configs produce
    /// byte-identical files.
    pub fn to_csv(&self) -> String {
        let header = json!({ "config": self.config, "metadata": self.metadata });
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&header.to_string());
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON payload mirroring the CSV schema.
    pub fn to_json(&self) -> String {
        let doc = json!({
            "config": self.config,
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serialization");
        s.push('\n');
        s
    }
}
