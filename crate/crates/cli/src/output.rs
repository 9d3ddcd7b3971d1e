use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use zeta_resonance::report::to_json;
use zeta_resonance::Error;

use crate::error::CliError;

/// Where and how a command's result is written.
pub struct Sink {
    pub out: Option<PathBuf>,
    pub pretty: bool,
}

impl Sink {
    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        match &self.out {
            Some(path) => Ok(Box::new(create(path)?)),
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    fn io_err(&self, source: io::Error) -> CliError {
        CliError::Io {
            path: self.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>")),
            source,
        }
    }

    /// One JSON document, checked to survive a parse/serialize round trip.
    pub fn json<T: Serialize + DeserializeOwned>(&self, value: &T) -> Result<(), CliError> {
        let text = round_trip(value, self.pretty)?;
        let mut w = self.open()?;
        writeln!(w, "{text}").map_err(|e| self.io_err(e))?;
        w.flush().map_err(|e| self.io_err(e))
    }

    /// One compact JSON document per line.
    pub fn json_lines<T: Serialize + DeserializeOwned>(&self, values: &[T]) -> Result<(), CliError> {
        let mut w = self.open()?;
        for v in values {
            let text = round_trip(v, false)?;
            writeln!(w, "{text}").map_err(|e| self.io_err(e))?;
        }
        w.flush().map_err(|e| self.io_err(e))
    }

    pub fn csv(&self, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_csv(path, header, rows),
            None => write_csv_to(io::stdout().lock(), header, rows).map_err(|e| self.io_err(e)),
        }
    }
}

fn round_trip<T: Serialize + DeserializeOwned>(value: &T, pretty: bool) -> Result<String, CliError> {
    let text = to_json(value, pretty).map_err(|e| Error::InvariantViolation(format!("serialization failed: {e}")))?;
    let back: T = serde_json::from_str(&text)
        .map_err(|e| Error::InvariantViolation(format!("emitted JSON does not re-parse: {e}")))?;
    let again = to_json(&back, pretty).map_err(|e| Error::InvariantViolation(e.to_string()))?;
    if again != text {
        return Err(Error::InvariantViolation("emitted JSON does not round-trip".into()).into());
    }
    Ok(text)
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    write_csv_to(create(path)?, header, rows).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_csv_to<W: Write>(w: W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    wtr.write_record(header)?;
    for row in rows {
        wtr.write_record(row)?;
    }
    wtr.flush()
}
