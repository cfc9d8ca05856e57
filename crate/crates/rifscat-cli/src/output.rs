//! Output files: metadata header, CSV and JSON bodies.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const LEGEND: &[(&str, &str)] = &[
    ("u", "positive-norm branch above the UV resonance"),
    ("uo", "upper positive-norm optical mode"),
    ("mo", "middle positive-norm optical mode (exists only inside a subluminal interval)"),
    ("lo", "lower positive-norm optical mode"),
    ("l", "positive-norm branch below the IR resonance"),
    ("nl", "negative-norm partner of l"),
    ("no", "negative-norm optical mode"),
    ("nu", "negative-norm partner of u"),
    ("c", "complex (evanescent) mode; suffix d decaying, g growing away from the front"),
    ("L/R", "side of the front: L behind (index n + delta_n), R ahead"),
    ("scenario", "a..e kinematic case of the front-frame frequency (b white hole, d black hole)"),
];

pub fn config_hash(canonical: &str) -> String {
    Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Fixed-width scientific format so reruns are byte-identical.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.15e}")
    } else {
        "nan".into()
    }
}

#[derive(Debug, Clone)]
pub struct Metadata {
    pub command: String,
    pub config_hash: String,
    pub config: Vec<(String, String)>,
    pub derived: Vec<(String, Value)>,
    pub units: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, canonical: &str, config: Vec<(String, String)>) -> Self {
        Self {
            command: command.into(),
            config_hash: config_hash(canonical),
            config,
            derived: Vec::new(),
            units: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn derived(mut self, key: &str, v: Value) -> Self {
        self.derived.push((key.into(), v));
        self
    }

    pub fn unit(mut self, key: &str, unit: &str) -> Self {
        self.units.push((key.into(), unit.into()));
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let obj = |v: &[(String, String)]| Value::Object(v.iter().map(|(k, x)| (k.clone(), json!(x))).collect());
        let mut derived = Map::new();
        for (k, v) in &self.derived {
            derived.insert(k.clone(), v.clone());
        }
        json!({
            "tool": "rifscat",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config_hash": self.config_hash,
            "config": obj(&self.config),
            "derived": derived,
            "units": obj(&self.units),
            "legend": Value::Object(LEGEND.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
            "notes": self.notes,
        })
    }

    fn csv_header(&self) -> String {
        let join = |v: &[(String, String)]| v.iter().map(|(k, x)| format!("{k}={x}")).collect::<Vec<_>>().join("; ");
        let mut s = format!("# rifscat {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        s.push_str(&format!("# config_hash: {}\n", self.config_hash));
        s.push_str(&format!("# config: {}\n", join(&self.config)));
        if !self.derived.is_empty() {
            let d: Vec<String> = self.derived.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!("# derived: {}\n", d.join("; ")));
        }
        s.push_str(&format!("# units: {}\n", join(&self.units)));
        let legend: Vec<String> = LEGEND.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        s.push_str(&format!("# legend: {}\n", legend.join("; ")));
        for n in &self.notes {
            s.push_str(&format!("# note: {n}\n"));
        }
        s
    }
}

/// Where one artifact goes: stdout (`-`) or a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    pub fn resolve(output: Option<&str>, out_dir: &Path, default_name: &str) -> Self {
        match output {
            Some("-") => Target::Stdout,
            Some(p) => Target::File(PathBuf::from(p)),
            None => Target::File(out_dir.join(default_name)),
        }
    }

    /// Sibling file with another extension; stdout stays stdout.
    pub fn with_extension(&self, ext: &str) -> Self {
        match self {
            Target::Stdout => Target::Stdout,
            Target::File(p) => Target::File(p.with_extension(ext)),
        }
    }

    fn label(&self) -> String {
        match self {
            Target::Stdout => "<stdout>".into(),
            Target::File(p) => p.display().to_string(),
        }
    }

    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        let io = |source| CliError::Io { path: self.label(), source };
        Ok(match self {
            Target::Stdout => Box::new(std::io::stdout().lock()),
            Target::File(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(io)?;
                }
                Box::new(BufWriter::new(File::create(p).map_err(io)?))
            }
        })
    }
}

pub fn write_json(target: &Target, meta: &Metadata, data: Value) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: target.label(), source };
    let mut w = target.open()?;
    let doc = json!({ "metadata": meta.to_json(), "data": data });
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| io(e.into()))?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

pub fn write_csv(target: &Target, meta: &Metadata, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: target.label(), source };
    let mut w = target.open()?;
    w.write_all(meta.csv_header().as_bytes()).map_err(io)?;
    let mut c = csv::Writer::from_writer(w);
    c.write_record(header).map_err(|e| io(e.into()))?;
    for r in rows {
        c.write_record(r).map_err(|e| io(e.into()))?;
    }
    c.flush().map_err(io)
}
