//! CSV and JSON writers. Floats use the shortest representation that parses
//! back to the same `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub struct CsvOut<'a> {
    path: &'a Path,
    writer: csv::Writer<BufWriter<File>>,
}

impl<'a> CsvOut<'a> {
    pub fn create(path: &'a Path, header: &[&str]) -> CliResult<Self> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut out = Self { path, writer: csv::Writer::from_writer(BufWriter::new(file)) };
        out.record(header.iter().map(|s| s.to_string()))?;
        Ok(out)
    }

    pub fn record(&mut self, fields: impl IntoIterator<Item = String>) -> CliResult<()> {
        let fields: Vec<String> = fields.into_iter().collect();
        self.writer.write_record(&fields).map_err(|e| CliError::csv(self.path, e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|e| CliError::io(self.path, e))
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::invalid(format!("cannot serialize report: {e}")))?;
    let mut file = File::create(path).map_err(|e| CliError::io(path, e))?;
    writeln!(file, "{text}").map_err(|e| CliError::io(path, e))
}
