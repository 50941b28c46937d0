//! Record encodings: JSON lines, CSV and an aligned table.

use std::io::{self, Write};

use wci_core::FilterId;

use crate::args::Format;
use crate::record::OutputRecord;

fn cell(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes records as they arrive. Tables need every row for the column
/// widths, so they are held until [`RecordWriter::finish`].
pub struct RecordWriter<W: Write> {
    format: Format,
    columns: Vec<FilterId>,
    csv: Option<csv::Writer<W>>,
    out: Option<W>,
    rows: Vec<OutputRecord>,
}

impl<W: Write> RecordWriter<W> {
    /// `columns`: the profile filters, one verdict column each in CSV.
    pub fn new(out: W, format: Format, columns: &[FilterId]) -> io::Result<Self> {
        let mut w = RecordWriter {
            format,
            columns: columns.to_vec(),
            csv: None,
            out: None,
            rows: Vec::new(),
        };
        if format == Format::Csv {
            let mut csv = csv::Writer::from_writer(out);
            let mut header = vec!["weights", "degrees", "dim", "codim", "fano_index"];
            header.extend(columns.iter().map(|id| id.name()));
            csv.write_record(&header)?;
            w.csv = Some(csv);
        } else {
            w.out = Some(out);
        }
        Ok(w)
    }

    pub fn write(&mut self, r: &OutputRecord) -> io::Result<()> {
        match self.format {
            Format::Jsonl => {
                let out = self.out.as_mut().expect("jsonl writer");
                writeln!(out, "{}", r.to_json_line())
            }
            Format::Csv => {
                let mut row = vec![
                    cell(&r.weights),
                    cell(&r.degrees),
                    r.dim.to_string(),
                    r.codim.to_string(),
                    r.fano_index.to_string(),
                ];
                row.extend(
                    self.columns
                        .iter()
                        .map(|id| r.verdicts.get(id).map_or(String::new(), |p| p.to_string())),
                );
                self.csv.as_mut().expect("csv writer").write_record(&row)?;
                Ok(())
            }
            Format::Table => {
                self.rows.push(r.clone());
                Ok(())
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        if let Some(mut csv) = self.csv.take() {
            return csv.flush();
        }
        let mut out = self.out.take().expect("plain writer");
        if self.format == Format::Table {
            write_table(&mut out, &self.rows)?;
        }
        out.flush()
    }
}

fn write_table<W: Write>(out: &mut W, rows: &[OutputRecord]) -> io::Result<()> {
    let header = ["weights", "degrees", "n", "k", "i", "status"];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let failed: Vec<&str> = r.failed_filters().map(|id| id.name()).collect();
            let status = if failed.is_empty() {
                "pass".to_string()
            } else {
                format!("fail: {}", failed.join(" "))
            };
            [
                r.weights.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                r.degrees.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                r.dim.to_string(),
                r.codim.to_string(),
                r.fano_index.to_string(),
                status,
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &body {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[&str]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&header))?;
    for row in &body {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        writeln!(out, "{}", line(&cells))?;
    }
    Ok(())
}
