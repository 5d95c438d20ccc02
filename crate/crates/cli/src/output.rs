//! Result bundles: CSV tables, JSON-lines logs, SVG plots and `summary.json`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    pub version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub config: Value,
    pub results: Value,
    pub files: Vec<String>,
}

/// Output directory of one command run; remembers what it wrote.
pub struct Bundle {
    root: PathBuf,
    files: Vec<String>,
}

impl Bundle {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn open(&mut self, name: &str) -> CliResult<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.root.join(name))?))
    }

    /// Writes a CSV table; the header is written even when there are no rows.
    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> CliResult<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(self.open(name)?);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn jsonl<S: Serialize>(
        &mut self,
        name: &str,
        items: impl IntoIterator<Item = S>,
    ) -> CliResult<()> {
        let mut w = self.open(name)?;
        for item in items {
            serde_json::to_writer(&mut w, &item)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, content: &str) -> CliResult<()> {
        let mut w = self.open(name)?;
        w.write_all(content.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn finish<C: Serialize, R: Serialize>(
        mut self,
        command: &str,
        seed: u64,
        config: &C,
        results: &R,
    ) -> CliResult<Summary> {
        self.files.push(SUMMARY_FILE.to_string());
        let summary = Summary {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config: serde_json::to_value(config)?,
            results: serde_json::to_value(results)?,
            files: self.files,
        };
        let mut w = BufWriter::new(File::create(self.root.join(SUMMARY_FILE))?);
        serde_json::to_writer_pretty(&mut w, &summary)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(summary)
    }
}

/// Shortest decimal that round-trips.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
