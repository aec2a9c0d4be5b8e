//! CSV emission: comma-separated, '.' decimal, header row, LF endings,
//! numeric fields at 17 significant digits.

use std::io::Write;
use std::path::PathBuf;

pub enum Field {
    Int(usize),
    Num(f64),
    Text(&'static str),
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&'static str> for Field {
    fn from(v: &'static str) -> Self {
        Field::Text(v)
    }
}

pub struct CsvWriter {
    sink: Box<dyn Write>,
}

impl CsvWriter {
    /// Opens `path` for writing, or stdout when no path is given.
    pub fn create(path: Option<&PathBuf>) -> Result<Self, String> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?,
            ),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Self { sink })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<(), String> {
        writeln!(self.sink, "{}", columns.join(",")).map_err(|e| e.to_string())
    }

    pub fn row(&mut self, fields: &[Field]) -> Result<(), String> {
        let mut line = String::new();
        for (i, field) in fields.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            match field {
                Field::Int(v) => line.push_str(&v.to_string()),
                Field::Num(v) => line.push_str(&format!("{v:.16e}")),
                Field::Text(v) => line.push_str(v),
            }
        }
        writeln!(self.sink, "{line}").map_err(|e| e.to_string())
    }
}
