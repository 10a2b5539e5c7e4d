use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use szego_core::{NumericConfig, PointPair, QuarticCurve, VerifyOptions};

/// A rejected configuration, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl fmt::Display) -> Self {
        Self {
            field: field.into(),
            reason: reason.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error in {}: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    KernelSlice,
    SigmaHeatmap,
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveParams {
    pub p: f64,
    pub q: f64,
}

impl Default for CurveParams {
    fn default() -> Self {
        Self { p: -1.0, q: 0.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputOptions {
    /// Defaults to CSV for tables and JSON for `verify`.
    pub format: Option<Format>,
    /// Standard output when absent.
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LegendreOptions {
    pub eta_min: f64,
    pub eta_max: f64,
    pub step: f64,
    /// Emit `b_star_star_of_half_sum`, the hull evaluated at each row's abscissa.
    pub hull: bool,
}

impl Default for LegendreOptions {
    fn default() -> Self {
        Self {
            eta_min: -5.0,
            eta_max: 5.0,
            step: 0.1,
            hull: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for StepGrid {
    fn default() -> Self {
        Self {
            min: -2.0,
            max: 2.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyOptions {
    /// Used when `points` is empty.
    pub grid: StepGrid,
    /// Explicit boundary pairs `[x, r]`.
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointInput {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub h: f64,
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub k: f64,
}

impl PointInput {
    pub fn to_pair(self) -> szego_core::Result<PointPair> {
        PointPair::new(self.x, self.y, self.t, self.h, self.r, self.s, self.u, self.k)
    }

    pub fn values(&self) -> [f64; 8] {
        [self.x, self.y, self.t, self.h, self.r, self.s, self.u, self.k]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub points: Vec<PointInput>,
    /// `[i1, j1, i2, j2]`.
    pub derivative: [u32; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyRun {
    pub suites: Vec<String>,
    #[serde(flatten)]
    pub options: VerifyOptions,
}

impl Default for VerifyRun {
    fn default() -> Self {
        Self {
            suites: szego_core::Suite::ALL.iter().map(|s| s.name().to_string()).collect(),
            options: VerifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for CountGrid {
    fn default() -> Self {
        Self {
            min: -2.0,
            max: 2.0,
            points: 201,
        }
    }
}

/// `z1` runs along `x` in `[x_min, x_max]`; every other coordinate is taken from `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SliceOptions {
    pub base: PointInput,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for SliceOptions {
    fn default() -> Self {
        Self {
            base: PointInput {
                x: 0.0,
                y: 0.0,
                t: 0.0,
                h: 0.0,
                r: 0.0,
                s: 0.0,
                u: 0.0,
                k: 0.0,
            },
            x_min: -0.9,
            x_max: 0.9,
            points: 19,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeOptions {
    pub x: f64,
    pub r: f64,
    pub deltas: Vec<f64>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            x: 2.0,
            r: 2.0,
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotOptions {
    pub kind: PlotKind,
    /// Also render a static SVG here.
    pub svg: Option<PathBuf>,
    pub heatmap: CountGrid,
    pub slice: SliceOptions,
    pub probe: ProbeOptions,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            kind: PlotKind::SigmaHeatmap,
            svg: None,
            heatmap: CountGrid::default(),
            slice: SliceOptions::default(),
            probe: ProbeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveParams,
    pub numeric: NumericConfig,
    pub output: OutputOptions,
    pub legendre: LegendreOptions,
    pub classify: ClassifyOptions,
    pub eval: EvalOptions,
    pub verify: VerifyRun,
    pub plotdata: PlotOptions,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e))
    }

    pub fn curve(&self) -> Result<QuarticCurve, ConfigError> {
        let CurveParams { p, q } = self.curve;
        if !(p < 0.0 && p.is_finite()) {
            return Err(ConfigError::new(
                "curve.p",
                format!("must be negative and finite, got {p}"),
            ));
        }
        if !q.is_finite() {
            return Err(ConfigError::new("curve.q", format!("must be finite, got {q}")));
        }
        QuarticCurve::new(p, q).map_err(|e| ConfigError::new("curve", e))
    }

    /// Checks shared by every command.
    pub fn validate_common(&self) -> Result<QuarticCurve, ConfigError> {
        self.numeric.validate().map_err(core_config_error)?;
        self.curve()
    }
}

/// Maps a core config error to one naming its field.
pub fn core_config_error(e: szego_core::Error) -> ConfigError {
    match e {
        szego_core::Error::InvalidConfig { field, reason } => ConfigError::new(field, reason),
        other => ConfigError::new("config", other),
    }
}

/// `min, min + step, ...` up to `max` inclusive, empty when `max < min`.
pub fn stepped(field: &str, min: f64, max: f64, step: f64) -> Result<Vec<f64>, ConfigError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(ConfigError::new(
            format!("{field}.step"),
            format!("must be positive, got {step}"),
        ));
    }
    if !min.is_finite() || !max.is_finite() {
        return Err(ConfigError::new(field, "range bounds must be finite"));
    }
    if max < min {
        return Ok(Vec::new());
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    if n > 10_000_000 {
        return Err(ConfigError::new(
            format!("{field}.step"),
            "range has more than 1e7 points",
        ));
    }
    Ok((0..n).map(|i| min + step * i as f64).collect())
}

/// `points` evenly spaced values over `[min, max]`.
pub fn spaced(field: &str, min: f64, max: f64, points: usize) -> Result<Vec<f64>, ConfigError> {
    if !min.is_finite() || !max.is_finite() || max < min {
        return Err(ConfigError::new(field, "range must be finite with min <= max"));
    }
    Ok(match points {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect(),
    })
}
