//! Configuration files, trajectory CSVs and run manifests.
//!
//! Data files carry no timestamps, so identical inputs give byte-identical
//! output; wall-clock information lives only in the manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SimulationConfig;
use crate::dynamics::Simulation;
use crate::error::{Diagnostic, Error, Result};

pub const CSV_HEADER: &str = "t,coherence_abs,pg,pe,gamma1,gamma2,gamma3,Gamma,Gamma_tilde,singular";

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seventeen significant digits, enough to round-trip any `f64`. Negative
/// zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        x.to_string()
    }
}

/// Parse a JSON configuration. Missing fields take their defaults; an
/// unknown or mistyped field is reported with its dotted path.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::InvalidConfig(vec![Diagnostic {
            path: if path == "." { "<root>".into() } else { path },
            message: e.into_inner().to_string(),
        }])
    })
}

pub fn load_config(path: &Path) -> Result<SimulationConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn config_to_json(config: &SimulationConfig) -> String {
    serde_json::to_string_pretty(config).expect("configuration serializes")
}

/// Rows for every grid sample of `sim`, each prefixed with `prefix`
/// (which, when non-empty, must end in a comma).
pub fn write_trajectory_rows(out: &mut String, sim: &Simulation, prefix: &str) {
    let traj = &sim.trajectory;
    let rates = &sim.rates;
    let deph = &sim.dephasing;
    for i in 0..traj.times.len() {
        let pg = traj.pg[i];
        let _ = writeln!(
            out,
            "{prefix}{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(traj.times[i]),
            fmt_f64(traj.coherence_abs[i]),
            fmt_f64(pg),
            fmt_f64(1.0 - pg),
            fmt_f64(rates.gamma1[i]),
            fmt_f64(rates.gamma2[i]),
            fmt_f64(deph.gamma3[i]),
            fmt_f64(rates.big_gamma[i]),
            fmt_f64(deph.gamma_tilde[i]),
            u8::from(rates.singular_mask[i]),
        );
    }
}

pub fn trajectory_csv(sim: &Simulation) -> String {
    let mut out = String::with_capacity(256 * (sim.trajectory.times.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    write_trajectory_rows(&mut out, sim, "");
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    /// Relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescription {
    pub t_max: f64,
    pub n_samples: usize,
    pub step: f64,
}

impl GridDescription {
    pub fn of(config: &SimulationConfig) -> Self {
        GridDescription {
            t_max: config.t_max,
            n_samples: config.n_samples,
            step: config.t_max / (config.n_samples.max(2) - 1) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRun {
    pub label: String,
    pub config: SimulationConfig,
    pub grid: GridDescription,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub started_unix_seconds: f64,
    pub wall_clock_seconds: f64,
    pub runs: Vec<ManifestRun>,
    pub files: Vec<FileDigest>,
}

/// Writes data files into one directory and remembers their digests for
/// the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileDigest>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(contents),
            bytes: contents.len() as u64,
        });
        Ok(path)
    }

    pub fn files(&self) -> &[FileDigest] {
        &self.files
    }

    /// Write `manifest.json` listing every file written so far.
    pub fn finish(
        self,
        command: &str,
        runs: Vec<ManifestRun>,
        started_unix_seconds: f64,
        wall_clock_seconds: f64,
    ) -> Result<RunManifest> {
        let manifest = RunManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool: "fmq".into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            started_unix_seconds,
            wall_clock_seconds,
            runs,
            files: self.files,
        };
        let path = self.root.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}
