//! Deterministic CSV output.
//!
//! Layout: `#`-prefixed comment lines, one column-name row, then data rows.
//! Numbers use scientific notation with 12 significant digits, missing
//! values are empty fields, and a trailing `flags` column names any
//! condition that emptied a field. Lines end in `\n`.

use std::io::{self, Write};

/// Comment line carrying the name and version of the producing library.
pub fn version_comment() -> String {
    format!("su11-core {}", env!("CARGO_PKG_VERSION"))
}

/// 12 significant digits, locale independent.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub values: Vec<Option<f64>>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            comments: vec![version_comment()],
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn parameter(&mut self, name: &str, value: f64) {
        self.comments
            .push(format!("{name} = {}", format_value(value)));
    }

    pub fn push(&mut self, values: Vec<Option<f64>>, flags: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(TableRow { values, flags });
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, `None` where the field is empty.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{},flags", self.columns.join(","))?;
        for row in &self.rows {
            let mut fields: Vec<String> = row
                .values
                .iter()
                .map(|v| v.map(format_value).unwrap_or_default())
                .collect();
            fields.push(row.flags.join(";"));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["phi".into(), "dphi".into()]);
        t.parameter("g", 1.0);
        t.push(vec![Some(0.0), Some(3.7315e-3)], vec![]);
        t.push(vec![Some(-0.5), None], vec!["blind_phase".into()]);
        let s = t.to_csv_string();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# su11-core "));
        assert_eq!(lines[1], "# g = 1.00000000000e0");
        assert_eq!(lines[2], "phi,dphi,flags");
        assert_eq!(lines[3], "0.00000000000e0,3.73150000000e-3,");
        assert_eq!(lines[4], "-5.00000000000e-1,,blind_phase");
        assert!(!s.contains('\r'));
    }
}
