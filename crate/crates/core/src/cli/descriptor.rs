use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::cross_section::CrossSection;
use crate::effective_model::TubeKind;
use crate::geometry::{HelixParams, PerturbationProfile};
use crate::straightened_tube::{TailPolicy, TubeConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: OutputFormat::Csv,
        }
    }
}

/// One batch run: a command with its parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDescriptor {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub output: OutputSpec,
    /// Worker threads; all logical cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    Frenet(FrenetParams),
    CrossSpectrum(CrossSpectrumParams),
    TubeBind(TubeBindParams),
    Effective(EffectiveParams),
    CriticalPitch(CriticalPitchParams),
    PhaseDiagram(PhaseDiagramParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Frenet(_) => "frenet",
            Command::CrossSpectrum(_) => "cross-spectrum",
            Command::TubeBind(_) => "tube-bind",
            Command::Effective(_) => "effective",
            Command::CriticalPitch(_) => "critical-pitch",
            Command::PhaseDiagram(_) => "phase-diagram",
        }
    }

    /// Desk-scale wall-clock budget in seconds, recorded in the manifest.
    pub fn budget_seconds(&self) -> f64 {
        match self {
            Command::CrossSpectrum(_) => 10.0,
            Command::TubeBind(_) => 600.0,
            Command::PhaseDiagram(_) => 300.0,
            _ => 30.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Command::Frenet(p) => p.validate(),
            Command::CrossSpectrum(p) => p.validate(),
            Command::TubeBind(p) => p.validate(),
            Command::Effective(p) => p.validate(),
            Command::CriticalPitch(p) => p.validate(),
            Command::PhaseDiagram(p) => p.validate(),
        }
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(what.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrenetParams {
    pub helix: HelixParams,
    #[serde(default)]
    pub perturbation: PerturbationProfile,
    #[serde(default)]
    pub s_min: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_s_max() -> f64 {
    10.0
}

fn default_samples() -> usize {
    201
}

impl FrenetParams {
    pub fn validate(&self) -> Result<()> {
        self.helix.validate()?;
        self.perturbation.validate()?;
        check(self.s_max > self.s_min, "frenet: s_max must exceed s_min")?;
        check(self.samples >= 2, "frenet: samples must be >= 2")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossSpectrumParams {
    pub cross_section: CrossSection,
    pub beta0: f64,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// Number of eigenvalues of `h(1)` listed.
    #[serde(default = "default_count")]
    pub count: usize,
}

fn default_alphas() -> Vec<f64> {
    vec![0.9, 0.95, 1.0, 1.05, 1.1]
}

fn default_count() -> usize {
    4
}

impl CrossSpectrumParams {
    pub fn validate(&self) -> Result<()> {
        self.cross_section.validate()?;
        check(self.beta0.is_finite(), "cross-spectrum: beta0 must be finite")?;
        check(
            !self.alphas.is_empty() && self.alphas.iter().all(|a| *a > 0.0 && a.is_finite()),
            "cross-spectrum: alphas must be positive",
        )?;
        check(self.count >= 1, "cross-spectrum: count must be >= 1")
    }
}

/// Trial-function sweep over the tent strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSweep {
    pub s0: f64,
    pub epsilons: Vec<f64>,
    /// `δ = ε^delta_power`.
    #[serde(default = "default_delta_power")]
    pub delta_power: f64,
    #[serde(default)]
    pub tail: TailPolicy,
}

fn default_delta_power() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeBindParams {
    pub tube: TubeConfig,
    #[serde(default = "default_bound_count")]
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_sweep: Option<GapSweep>,
}

fn default_bound_count() -> usize {
    2
}

impl TubeBindParams {
    pub fn validate(&self) -> Result<()> {
        self.tube.validate()?;
        check(self.count >= 1, "tube-bind: count must be >= 1")?;
        if let Some(g) = &self.gap_sweep {
            check(g.s0 > 0.0, "tube-bind: gap_sweep.s0 must be positive")?;
            check(
                !g.epsilons.is_empty() && g.epsilons.iter().all(|e| *e > 0.0),
                "tube-bind: gap_sweep.epsilons must be positive",
            )?;
            check(g.delta_power > 0.0, "tube-bind: gap_sweep.delta_power must be positive")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveParams {
    pub kind: TubeKind,
    pub helix: HelixParams,
    pub perturbation: PerturbationProfile,
    #[serde(default = "default_half_length")]
    pub half_length: f64,
    #[serde(default = "default_potential_samples")]
    pub samples: usize,
    /// Confirms a binding verdict with the 1D eigenvalue.
    #[serde(default = "default_true")]
    pub confirm: bool,
}

fn default_half_length() -> f64 {
    12.0
}

fn default_potential_samples() -> usize {
    480
}

fn default_true() -> bool {
    true
}

impl EffectiveParams {
    pub fn validate(&self) -> Result<()> {
        self.helix.validate()?;
        self.perturbation.validate()?;
        check(self.half_length > 0.0, "effective: half_length must be positive")?;
        check(self.samples >= 2, "effective: samples must be >= 2")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalPitchParams {
    /// Both kinds when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TubeKind>,
    #[serde(default = "default_r0")]
    pub r0: f64,
    #[serde(default = "default_crossover_eps")]
    pub epsilon: f64,
}

fn default_r0() -> f64 {
    1.0
}

fn default_crossover_eps() -> f64 {
    crate::effective_model::CROSSOVER_EPSILON
}

impl Default for CriticalPitchParams {
    fn default() -> Self {
        Self {
            kind: None,
            r0: default_r0(),
            epsilon: default_crossover_eps(),
        }
    }
}

impl CriticalPitchParams {
    pub fn validate(&self) -> Result<()> {
        check(self.r0 > 0.0 && self.r0.is_finite(), "critical-pitch: r0 must be positive")?;
        check(self.epsilon > 0.0 && self.epsilon < self.r0, "critical-pitch: need 0 < epsilon < r0")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiagramParams {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<TubeKind>,
    #[serde(default = "default_pitches")]
    pub pitches: Vec<f64>,
    #[serde(default = "default_crossover_eps")]
    pub epsilon: f64,
    #[serde(default)]
    pub confirm: bool,
}

fn default_kinds() -> Vec<TubeKind> {
    TubeKind::ALL.to_vec()
}

fn default_pitches() -> Vec<f64> {
    (1..=16).map(|i| 0.25 * i as f64).collect()
}

impl Default for PhaseDiagramParams {
    fn default() -> Self {
        Self {
            kinds: default_kinds(),
            pitches: default_pitches(),
            epsilon: default_crossover_eps(),
            confirm: false,
        }
    }
}

impl PhaseDiagramParams {
    pub fn validate(&self) -> Result<()> {
        check(!self.kinds.is_empty(), "phase-diagram: kinds must not be empty")?;
        check(
            !self.pitches.is_empty() && self.pitches.iter().all(|p| *p > 0.0 && p.is_finite()),
            "phase-diagram: pitches must be positive",
        )?;
        check(self.epsilon > 0.0 && self.epsilon < 1.0, "phase-diagram: need 0 < epsilon < 1")
    }
}

impl RunDescriptor {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.threads {
            check(t >= 1, "threads must be >= 1")?;
        }
        self.command.validate()
    }

    /// Parses a descriptor, or the `descriptor` field of a run manifest.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = match value.get("descriptor") {
            Some(d) => d.clone(),
            None => value,
        };
        Ok(serde_json::from_value(inner)?)
    }
}
