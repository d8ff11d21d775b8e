//! Run configuration.
//!
//! Values are resolved in three layers, later layers winning:
//! built-in defaults, then the JSON file given by `--config`, then
//! individual command-line flags. The JSON file uses flat keys that mirror
//! the flag names (`"L"`, `"k_max"`, `"theta"`, ...).

use std::fs;
use std::path::{Path, PathBuf};

use catalytic_core::{ShiftConvention, TwoLevelUnitary64};
use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Largest accepted `k_max`.
pub const MAX_SYSTEMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Standard,
    Mirrored,
}

impl From<Convention> for ShiftConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Standard => ShiftConvention::Standard,
            Convention::Mirrored => ShiftConvention::Mirrored,
        }
    }
}

/// `"hadamard"`, or the eight numbers `re00, im00, re01, im01, re10, im10,
/// re11, im11` of a custom 2×2 unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitarySpec {
    Named(String),
    Entries([f64; 8]),
}

impl UnitarySpec {
    pub fn parse_flag(s: &str) -> CliResult<Self> {
        let s = s.trim();
        if !s.contains(',') {
            return Ok(UnitarySpec::Named(s.to_ascii_lowercase()));
        }
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(format!("unitary entries: {e}")))?;
        let entries: [f64; 8] = values
            .try_into()
            .map_err(|v: Vec<f64>| CliError::Config(format!("custom unitary needs 8 numbers, got {}", v.len())))?;
        Ok(UnitarySpec::Entries(entries))
    }

    pub fn build(&self) -> CliResult<TwoLevelUnitary64> {
        match self {
            UnitarySpec::Named(name) if name == "hadamard" => Ok(TwoLevelUnitary64::hadamard()),
            UnitarySpec::Named(name) => Err(CliError::Config(format!("unknown unitary {name:?}"))),
            UnitarySpec::Entries(e) => {
                let c = |i: usize| Complex64::new(e[2 * i], e[2 * i + 1]);
                TwoLevelUnitary64::new(c(0), c(1), c(2), c(3)).map_err(|err| CliError::Config(err.to_string()))
            }
        }
    }

    /// True when the first column is `(1, 1)/√2`, i.e. the unitary turns
    /// `|ψ_0⟩` into the target `|ψ(0)⟩`.
    pub fn prepares_target(&self) -> bool {
        match self.build() {
            Ok(u) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (u.entry(0, 0) - Complex64::new(h, 0.0)).norm() < 1e-10
                    && (u.entry(1, 0) - Complex64::new(h, 0.0)).norm() < 1e-10
            }
            Err(_) => false,
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(rename = "L")]
    pub levels: Vec<usize>,
    pub k_max: usize,
    pub l0: i64,
    pub theta: f64,
    pub phi: f64,
    pub unitary: UnitarySpec,
    pub shift_convention: Convention,
    pub temperature: f64,
    pub energy_spacing: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub parallel: usize,
    pub compare: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            levels: vec![16, 64, 256],
            k_max: 8,
            l0: 0,
            theta: 0.0,
            phi: std::f64::consts::FRAC_PI_3,
            unitary: UnitarySpec::Named("hadamard".into()),
            shift_convention: Convention::Standard,
            temperature: 1.0,
            energy_spacing: 1.0,
            out: None,
            format: OutputFormat::Csv,
            parallel: 0,
            compare: false,
        }
    }
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "L")]
    pub levels: Option<Vec<usize>>,
    pub k_max: Option<usize>,
    pub l0: Option<i64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub unitary: Option<UnitarySpec>,
    pub shift_convention: Option<Convention>,
    pub temperature: Option<f64>,
    pub energy_spacing: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub parallel: Option<usize>,
    pub compare: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Ladder sizes, comma separated
    #[arg(long = "L", value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    /// Largest number of systems
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Lowest reservoir level
    #[arg(long, allow_negative_numbers = true)]
    pub l0: Option<i64>,
    /// Reservoir phase (radians)
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Second reservoir phase for discrimination (radians)
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// "hadamard" or eight comma-separated numbers re00,im00,re01,im01,re10,im10,re11,im11
    #[arg(long)]
    pub unitary: Option<String>,
    #[arg(long, value_enum)]
    pub shift_convention: Option<Convention>,
    /// Temperature in units of the level spacing (k_B = 1)
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Level spacing s; scales reported energies only
    #[arg(long)]
    pub energy_spacing: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = one per core)
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Zero the runtime column so repeated runs compare byte for byte
    #[arg(long)]
    pub compare: bool,
    /// JSON file with flat keys mirroring these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let mut cfg = RunConfig::default();
        cfg.apply_file(file);

        if let Some(v) = &self.levels {
            cfg.levels = v.clone();
        }
        if let Some(v) = self.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = self.l0 {
            cfg.l0 = v;
        }
        if let Some(v) = self.theta {
            cfg.theta = v;
        }
        if let Some(v) = self.phi {
            cfg.phi = v;
        }
        if let Some(v) = &self.unitary {
            cfg.unitary = UnitarySpec::parse_flag(v)?;
        }
        if let Some(v) = self.shift_convention {
            cfg.shift_convention = v;
        }
        if let Some(v) = self.temperature {
            cfg.temperature = v;
        }
        if let Some(v) = self.energy_spacing {
            cfg.energy_spacing = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.parallel {
            cfg.parallel = v;
        }
        cfg.compare |= self.compare;

        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    fn apply_file(&mut self, f: FileConfig) {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = f.$field { self.$field = v; } )* };
        }
        take!(
            levels,
            k_max,
            l0,
            theta,
            phi,
            unitary,
            shift_convention,
            temperature,
            energy_spacing,
            format,
            parallel,
            compare
        );
        if f.out.is_some() {
            self.out = f.out;
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.levels.is_empty() {
            return Err(CliError::Config("L list is empty".into()));
        }
        if self.levels.contains(&0) {
            return Err(CliError::Config("every L must be at least 1".into()));
        }
        for (name, v) in [
            ("theta", self.theta),
            ("phi", self.phi),
            ("temperature", self.temperature),
            ("energy_spacing", self.energy_spacing),
        ] {
            if !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        if self.temperature < 0.0 {
            return Err(CliError::Config("temperature must be non-negative".into()));
        }
        if self.energy_spacing <= 0.0 {
            return Err(CliError::Config("energy_spacing must be positive".into()));
        }
        // The reduced system state is a dense 2^k × 2^k matrix.
        if self.k_max > MAX_SYSTEMS {
            return Err(CliError::Config(format!(
                "k_max = {} exceeds the supported {MAX_SYSTEMS}",
                self.k_max
            )));
        }
        self.unitary.build()?;
        Ok(())
    }

    pub fn sorted_levels(&self) -> Vec<usize> {
        let mut v = self.levels.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn thread_pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallel)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))
    }
}
