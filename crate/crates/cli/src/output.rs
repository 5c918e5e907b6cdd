use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

/// A named table with a fixed column order.
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Table {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width for {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).unwrap();
        for row in &self.rows {
            w.write_record(row).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    /// Space-aligned columns, numbers right-aligned.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap())
            .collect();
        // numeric columns are right-aligned, header included
        let numeric: Vec<bool> = (0..self.header.len())
            .map(|c| !self.rows.is_empty() && self.rows.iter().all(|r| r[c].is_empty() || r[c].parse::<f64>().is_ok()))
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(widths.iter().zip(&numeric))
                .map(|(c, (&w, &right))| {
                    if right {
                        format!("{c:>w$}")
                    } else {
                        format!("{c:<w$}")
                    }
                })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(self.header.clone(), &mut out);
        for row in &self.rows {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_text(),
        }
    }
}

/// Writes each table to `<out>/<name>.csv` (or `.txt`), or to stdout one
/// after another when no directory is given.
pub fn emit(tables: &[&Table], format: Format, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for t in tables {
                let ext = if format == Format::Csv { "csv" } else { "txt" };
                fs::write(dir.join(format!("{}.{ext}", t.name)), t.render(format))?;
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(stdout)?;
                }
                if format == Format::Table && tables.len() > 1 {
                    writeln!(stdout, "[{}]", t.name)?;
                }
                stdout.write_all(t.render(format).as_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Ratios and means, fixed to six decimals.
pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// 1-indexed, space separated, as in the instance files.
pub fn members(set: &mingc::Subset) -> String {
    set.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}
