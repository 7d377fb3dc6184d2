//! Run configuration: flat `key=value` files plus command-line overrides.

use std::path::{Path, PathBuf};

use splitwave::{SchemeVariant, TestCase};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SPLITWAVE_OUT";

/// Reference time step of the conservation runs; the low-accuracy split
/// scheme uses this value divided by 200.
pub const PAPER_DT: f64 = 6.3102e-4;

/// How the time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtChoice {
    /// Largest step with the CFL number at 90% of the scheme limit.
    Auto,
    /// The preset reference step (scaled down for the low-accuracy scheme).
    Paper,
    /// Explicit step in seconds.
    Seconds(f64),
}

impl DtChoice {
    /// Parses `auto`, `paper`, or a float literal.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "auto" => Ok(DtChoice::Auto),
            "paper" => Ok(DtChoice::Paper),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0)
                .map(DtChoice::Seconds)
                .ok_or_else(|| CliError::Config(format!("invalid dt value: {other}"))),
        }
    }
}

/// One simulation run: scheme, resolution, initial data, and step control.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Scheme variant to run.
    pub scheme: SchemeVariant,
    /// Number of mesh elements.
    pub n: usize,
    /// Initial-condition family.
    pub testcase: TestCase,
    /// Integration time in cycles (domain traversals).
    pub cycles: f64,
    /// Time step selection.
    pub dt: DtChoice,
    /// Fixed-point stopping tolerance; `None` for the scale-aware default.
    pub epsilon: Option<f64>,
    /// Directory CSV files are written into.
    pub out_dir: PathBuf,
    /// Observation stride in steps; 0 observes every step.
    pub stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeVariant::Gp1Gp0,
            n: 64,
            testcase: TestCase::Tc1,
            cycles: 1.0,
            dt: DtChoice::Auto,
            epsilon: None,
            out_dir: std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
            stride: 10,
        }
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "scheme" => {
                self.scheme = value.parse().map_err(CliError::Config)?;
            }
            "n" => {
                self.n = value
                    .parse()
                    .ok()
                    .filter(|v| *v >= 3)
                    .ok_or_else(|| CliError::Config(format!("invalid n: {value}")))?;
            }
            "testcase" => {
                self.testcase = value.parse().map_err(CliError::Config)?;
            }
            "cycles" => {
                self.cycles = value
                    .parse()
                    .ok()
                    .filter(|v: &f64| *v >= 0.0)
                    .ok_or_else(|| CliError::Config(format!("invalid cycles: {value}")))?;
            }
            "dt" => {
                self.dt = DtChoice::parse(value)?;
            }
            "epsilon" => {
                self.epsilon = Some(
                    value
                        .parse()
                        .ok()
                        .filter(|v: &f64| *v > 0.0)
                        .ok_or_else(|| CliError::Config(format!("invalid epsilon: {value}")))?,
                );
            }
            "out_dir" => {
                self.out_dir = PathBuf::from(value);
            }
            "stride" => {
                self.stride = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid stride: {value}")))?;
            }
            other => {
                return Err(CliError::Config(format!("unknown config key: {other}")));
            }
        }
        Ok(())
    }

    /// Reads a flat `key=value` file (`#` comments, blank lines allowed)
    /// on top of the current values.
    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}
