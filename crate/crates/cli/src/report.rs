//! Machine-readable output: CSV profile rows and JSON reports.

use std::io::Write;

use anyhow::Result;
use coarsemap_core::sample::Mode;
use coarsemap_core::Profile;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, Settings};

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRecord {
    pub kind: String,
    pub window: usize,
    pub classification: String,
    pub rows: Vec<RowRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowRecord {
    pub kind: String,
    pub radius: usize,
    pub set_size: usize,
    pub max_norm: u64,
    pub mode: &'static str,
}

impl From<&Profile> for ProfileRecord {
    fn from(p: &Profile) -> Self {
        let kind = p.kind.to_string();
        ProfileRecord {
            kind: kind.clone(),
            window: p.window,
            classification: p.classification.to_string(),
            rows: p
                .rows
                .iter()
                .map(|r| RowRecord {
                    kind: kind.clone(),
                    radius: r.radius,
                    set_size: r.set_size,
                    max_norm: r.max_norm,
                    mode: r.mode.as_str(),
                })
                .collect(),
        }
    }
}

/// Result of one subcommand. `ok` is false when an asserted property failed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    pub config: Settings,
    pub mode: &'static str,
    pub results: Value,
    pub witnesses: Value,
    #[serde(skip)]
    pub profiles: Vec<ProfileRecord>,
}

impl Report {
    pub fn new(command: &str, config: &Settings) -> Self {
        Report {
            command: command.to_string(),
            ok: true,
            config: config.clone(),
            mode: Mode::Exact.as_str(),
            results: json!({}),
            witnesses: json!({}),
            profiles: Vec::new(),
        }
    }

    pub fn add_profile(&mut self, p: &Profile) {
        if p.mode() == Mode::Sampled {
            self.mode = Mode::Sampled.as_str();
        }
        self.profiles.push(p.into());
    }

    pub fn set_mode(&mut self, m: Mode) {
        if m == Mode::Sampled {
            self.mode = m.as_str();
        }
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results[key] = serde_json::to_value(v).expect("plain data serializes");
    }

    pub fn witness(&mut self, key: &str, v: impl Serialize) {
        self.witnesses[key] = serde_json::to_value(v).expect("plain data serializes");
    }

    /// Writes the report. CSV holds profile rows when there are any and a
    /// `key,value` listing of the results otherwise.
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                let mut v = serde_json::to_value(self)?;
                if !self.profiles.is_empty() {
                    v["results"]["profiles"] = serde_json::to_value(&self.profiles)?;
                }
                serde_json::to_writer_pretty(&mut *out, &v)?;
                writeln!(out)?;
            }
            Format::Csv if !self.profiles.is_empty() => {
                let mut w = csv::Writer::from_writer(out);
                for p in &self.profiles {
                    for r in &p.rows {
                        w.serialize(r)?;
                    }
                }
                w.flush()?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["key", "value"])?;
                w.write_record(["ok", &self.ok.to_string()])?;
                w.write_record(["mode", self.mode])?;
                for (prefix, obj) in [("", &self.results), ("witness.", &self.witnesses)] {
                    if let Value::Object(m) = obj {
                        for (k, v) in m {
                            let text = match v {
                                Value::String(s) => s.clone(),
                                other => other.to_string(),
                            };
                            w.write_record([format!("{prefix}{k}"), text])?;
                        }
                    }
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
