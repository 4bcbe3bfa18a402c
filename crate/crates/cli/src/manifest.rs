//! Run manifests: enough to re-run a command with identical output.

use std::fs;
use std::path::Path;
use std::time::Duration;

use diophant::{Exec, Precision};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Settings;
use crate::Failure;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    pub box_points: String,
    pub grid_points: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub diophant: String,
    pub manifest_format: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments after the program name, without `--manifest`.
    pub argv: Vec<String>,
    pub precision_start_bits: u32,
    pub precision_cap_bits: u32,
    pub guards: Guards,
    pub decimals: Option<u32>,
    pub sequential: bool,
    pub versions: Versions,
    /// The input vector or matrix in canonical text form.
    pub input: Option<String>,
    pub duration_ms: u64,
    pub output_sha256: String,
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Drop `--manifest FILE` / `--manifest=FILE` from the argument list.
pub fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

impl RunManifest {
    pub fn new(
        argv: Vec<String>,
        s: &Settings,
        input: Option<String>,
        elapsed: Duration,
        output: &str,
    ) -> Self {
        RunManifest {
            argv,
            precision_start_bits: s.prec.start_bits,
            precision_cap_bits: s.prec.cap_bits,
            guards: Guards {
                box_points: s.box_guard.to_string(),
                grid_points: s.grid_guard.to_string(),
            },
            decimals: s.decimals,
            sequential: s.exec == Exec::Sequential,
            versions: Versions {
                diophant: env!("CARGO_PKG_VERSION").to_string(),
                manifest_format: FORMAT_VERSION,
            },
            input,
            duration_ms: elapsed.as_millis() as u64,
            output_sha256: digest(output),
        }
    }

    pub fn settings(&self) -> Result<Settings, Failure> {
        let guard = |x: &str| {
            x.parse::<u128>()
                .map_err(|_| Failure::usage(format!("bad guard in manifest: {x:?}")))
        };
        Ok(Settings {
            prec: Precision {
                start_bits: self.precision_start_bits,
                cap_bits: self.precision_cap_bits,
            },
            box_guard: guard(&self.guards.box_points)?,
            grid_guard: guard(&self.guards.grid_points)?,
            decimals: self.decimals,
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let m: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: not a run manifest: {e}", path.display())))?;
        if m.versions.manifest_format != FORMAT_VERSION {
            return Err(Failure::usage(format!(
                "manifest format {} is not supported",
                m.versions.manifest_format
            )));
        }
        Ok(m)
    }
}
