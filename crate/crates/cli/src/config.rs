//! Run settings: built-in defaults, then `DIOPHANT_PRECISION_CAP`, then the
//! config file, then flags.

use std::fs;
use std::path::Path;

use diophant::census::GRID_GUARD;
use diophant::dirichlet::BOX_GUARD;
use diophant::{Exec, Precision};

use crate::args::Global;
use crate::Failure;

pub const PRECISION_ENV: &str = "DIOPHANT_PRECISION_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub prec: Precision,
    pub box_guard: u128,
    pub grid_guard: u128,
    pub decimals: Option<u32>,
    pub exec: Exec,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            prec: Precision::default(),
            box_guard: BOX_GUARD,
            grid_guard: GRID_GUARD,
            decimals: None,
            exec: Exec::Parallel,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::usage(format!("bad value for {key}: {value:?}")))
}

impl Settings {
    pub fn resolve(global: &Global) -> Result<Self, Failure> {
        let mut s = Settings::default();
        if let Ok(v) = std::env::var(PRECISION_ENV) {
            s.prec.cap_bits = parse(PRECISION_ENV, v.trim())?;
        }
        if let Some(path) = &global.config {
            s.apply_file(path)?;
        }
        if let Some(b) = global.precision_cap {
            s.prec.cap_bits = b;
        }
        if let Some(b) = global.precision_start {
            s.prec.start_bits = b;
        }
        if let Some(g) = global.box_guard {
            s.box_guard = g;
        }
        if let Some(g) = global.grid_guard {
            s.grid_guard = g;
        }
        if global.decimals.is_some() {
            s.decimals = global.decimals;
        }
        if global.sequential {
            s.exec = Exec::Sequential;
        }
        s.validate()?;
        Ok(s)
    }

    fn apply_file(&mut self, path: &Path) -> Result<(), Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!("{}:{}: expected key = value", path.display(), no + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "precision_cap" => self.prec.cap_bits = parse(key, value)?,
                "precision_start" => self.prec.start_bits = parse(key, value)?,
                "box_guard" => self.box_guard = parse(key, value)?,
                "grid_guard" => self.grid_guard = parse(key, value)?,
                "decimals" => self.decimals = Some(parse(key, value)?),
                "sequential" => {
                    if parse::<bool>(key, value)? {
                        self.exec = Exec::Sequential;
                    }
                }
                _ => {
                    return Err(Failure::usage(format!(
                        "{}:{}: unknown key {key:?}",
                        path.display(),
                        no + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.prec.start_bits == 0 || self.prec.cap_bits < self.prec.start_bits {
            return Err(Failure::usage(
                "precision: need 0 < start bits <= cap bits".to_string(),
            ));
        }
        // the library limits are hard ceilings
        if self.box_guard > BOX_GUARD || self.grid_guard > GRID_GUARD {
            return Err(Failure::usage(format!(
                "guards cannot exceed the built-in limits ({BOX_GUARD} box, {GRID_GUARD} grid)"
            )));
        }
        Ok(())
    }
}
