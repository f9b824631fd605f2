use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::PacketParams;
use crate::error::{Error, Result};
use crate::fields::{Drive, FieldProfile, FluxProfile};
use crate::lattice::{LatticeKind, LatticeSpec, TimeGrid};
use crate::numeric::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    BlochOscillation,
    BlochTranslation,
    SuperBloch,
    DynamicLocalization,
    PulseTrain,
    RingChainEquivalence,
    ShakingSweep,
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::BlochOscillation,
        ScenarioKind::BlochTranslation,
        ScenarioKind::SuperBloch,
        ScenarioKind::DynamicLocalization,
        ScenarioKind::PulseTrain,
        ScenarioKind::RingChainEquivalence,
        ScenarioKind::ShakingSweep,
        ScenarioKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BlochOscillation => "bloch_oscillation",
            ScenarioKind::BlochTranslation => "bloch_translation",
            ScenarioKind::SuperBloch => "super_bloch",
            ScenarioKind::DynamicLocalization => "dynamic_localization",
            ScenarioKind::PulseTrain => "pulse_train",
            ScenarioKind::RingChainEquivalence => "ring_chain_equivalence",
            ScenarioKind::ShakingSweep => "shaking_sweep",
            ScenarioKind::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{name}`")))
    }

    /// Whether the scenario evolves a state numerically.
    pub fn is_numeric(self) -> bool {
        self != ScenarioKind::ShakingSweep
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    pub eps: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default)]
    pub method: Method,
}

fn default_sample_every() -> usize {
    10
}

impl GridBlock {
    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::with_step(self.t_start, self.t_end, self.eps)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub directory: Option<PathBuf>,
    /// Significant digits for floats in CSV files (1..=17).
    pub precision: Option<usize>,
}

pub const DEFAULT_PRECISION: usize = 17;

/// Frequency grid and parameter lists of a shaking sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub n: Vec<i32>,
    pub amplitudes: Vec<f64>,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
}

/// One scenario, as read from a config file: every block is optional and
/// fills in from the scenario's preset.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<ScenarioKind>,
    pub lattice: Option<LatticeSpec>,
    pub field: Option<FieldProfile>,
    pub flux: Option<FluxProfile>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flux_from_field: bool,
    pub packet: Option<PacketParams>,
    pub grid: Option<GridBlock>,
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub output: OutputBlock,
    /// Per-row tolerance overrides, keyed by report quantity.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn kind(&self) -> ScenarioKind {
        self.scenario.unwrap_or(ScenarioKind::Custom)
    }

    /// Fill every missing block from `base`; keys present here win.
    pub fn over(self, base: ScenarioConfig) -> ScenarioConfig {
        let mut tolerances = base.tolerances;
        tolerances.extend(self.tolerances);
        let explicit_drive = self.field.is_some() || self.flux.is_some();
        ScenarioConfig {
            scenario: self.scenario.or(base.scenario),
            lattice: self.lattice.or(base.lattice),
            field: self.field.or(if explicit_drive { None } else { base.field }),
            flux: self.flux.or(if explicit_drive { None } else { base.flux }),
            flux_from_field: if explicit_drive { self.flux_from_field } else { self.flux_from_field || base.flux_from_field },
            packet: self.packet.or(base.packet),
            grid: self.grid.or(base.grid),
            sweep: self.sweep.or(base.sweep),
            output: OutputBlock {
                directory: self.output.directory.or(base.output.directory),
                precision: self.output.precision.or(base.output.precision),
            },
            tolerances,
        }
    }

    pub fn precision(&self) -> usize {
        self.output.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        self.lattice.ok_or_else(|| missing("lattice"))
    }

    pub fn packet(&self) -> Result<PacketParams> {
        self.packet.ok_or_else(|| missing("packet"))
    }

    pub fn grid(&self) -> Result<&GridBlock> {
        self.grid.as_ref().ok_or_else(|| missing("grid"))
    }

    pub fn field(&self) -> Result<&FieldProfile> {
        self.field.as_ref().ok_or_else(|| missing("field"))
    }

    /// The drive matching the lattice: the field on a chain; on a ring the
    /// explicit flux, or the field's flux image with `flux_from_field`.
    pub fn drive_for(&self, kind: LatticeKind) -> Result<Drive> {
        match kind {
            LatticeKind::Chain => Ok(Drive::Field(self.field()?.clone())),
            LatticeKind::Ring => match (&self.flux, self.flux_from_field) {
                (Some(_), true) => Err(Error::Config("give either `flux` or `flux_from_field`, not both".into())),
                (Some(f), false) => Ok(Drive::Flux(f.clone())),
                (None, true) => Ok(Drive::Flux(FluxProfile::from_field(self.field()?.clone()))),
                (None, false) => Err(missing("flux (or flux_from_field: true)")),
            },
        }
    }

    pub fn tolerance(&self, quantity: &str, default: f64) -> f64 {
        self.tolerances.get(quantity).copied().unwrap_or(default)
    }

    /// Check that every block the scenario needs is present and valid.
    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        };
        let p = self.precision();
        if !(1..=17).contains(&p) {
            return Err(Error::Config(format!("output precision must be 1..=17, got {p}")));
        }
        if self.tolerances.values().any(|t| !(*t >= 0.0)) {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        let kind = self.kind();
        if kind == ScenarioKind::ShakingSweep {
            let s = self.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
            if !(s.omega_min > 0.0 && s.omega_max > s.omega_min && s.omega_points >= 2) {
                return Err(Error::Config("sweep needs 0 < omega_min < omega_max and ≥ 2 points".into()));
            }
            if s.n.is_empty() || s.amplitudes.is_empty() {
                return Err(Error::Config("sweep needs at least one n and one amplitude".into()));
            }
            self.packet()?;
            return self.lattice().map(|_| ());
        }
        let lattice = self.lattice()?;
        lattice.validate().map_err(cfg)?;
        self.packet()?.validate().map_err(cfg)?;
        let grid = self.grid()?;
        grid.time_grid().map_err(cfg)?;
        if grid.sample_every == 0 {
            return Err(Error::Config("grid.sample_every must be at least 1".into()));
        }
        self.drive_for(lattice.kind)?.validate().map_err(cfg)?;
        match kind {
            ScenarioKind::RingChainEquivalence => {
                self.field()?;
                if lattice.kind != LatticeKind::Chain {
                    return Err(Error::Config("ring_chain_equivalence takes the chain lattice; the ring is derived".into()));
                }
            }
            ScenarioKind::PulseTrain if self.field()?.pulse_impulses().is_none() => {
                return Err(Error::Config("pulse_train needs a gaussian_train or sawtooth_train field".into()));
            }
            ScenarioKind::BlochOscillation if !matches!(self.field()?, FieldProfile::Constant { .. }) => {
                return Err(Error::Config("bloch_oscillation needs a constant field".into()));
            }
            ScenarioKind::BlochTranslation | ScenarioKind::SuperBloch | ScenarioKind::DynamicLocalization
                if !matches!(self.field()?, FieldProfile::AcDc { .. }) =>
            {
                return Err(Error::Config(format!("{kind} needs an ac_dc field")));
            }
            _ => {}
        }
        Ok(())
    }
}

fn missing(block: &str) -> Error {
    Error::Config(format!("missing `{block}` block"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = r#"{
            "scenario": "bloch_translation",
            "lattice": {"kind": "chain", "sites": 200},
            "field": {"type": "ac_dc", "n": 1, "f_a": 1.0, "omega": 1.0},
            "packet": {"k0": 1.5707963267948966, "n_a": 100, "alpha": 0.1},
            "grid": {"t_end": 31.4, "eps": 0.01, "sample_every": 20, "method": "split_step"},
            "output": {"directory": "out", "precision": 12},
            "tolerances": {"drift_velocity": 0.05}
        }"#;
        let c = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(c.kind(), ScenarioKind::BlochTranslation);
        assert_eq!(c.lattice.unwrap().position_offset, 100);
        assert_eq!(c.grid.as_ref().unwrap().method, Method::SplitStep);
        assert_eq!(c.precision(), 12);
        assert_eq!(c.tolerance("drift_velocity", 0.02), 0.05);
        c.validate().unwrap();
        let again = ScenarioConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn ring_drive_resolution() {
        let mut c = ScenarioConfig::from_json(
            r#"{"lattice": {"kind": "ring", "sites": 8}, "field": {"type": "constant", "f0": 0.5}, "flux_from_field": true}"#,
        )
        .unwrap();
        assert!(matches!(c.drive_for(LatticeKind::Ring).unwrap(), Drive::Flux(FluxProfile::FromField(_))));
        c.flux_from_field = false;
        assert!(c.drive_for(LatticeKind::Ring).is_err());
        let direct = ScenarioConfig::from_json(
            r#"{"flux": {"source": "direct", "profile": {"type": "constant", "f0": 0.3}}}"#,
        )
        .unwrap();
        assert!(matches!(direct.drive_for(LatticeKind::Ring).unwrap(), Drive::Flux(FluxProfile::Direct(_))));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_blocks() {
        assert!(ScenarioConfig::from_json(r#"{"scenaro": "custom"}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"lattice": {"kind": "chain", "sites": 1}}"#).is_err());
        let c = ScenarioConfig::from_json(r#"{"scenario": "custom"}"#).unwrap();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn overlay_keeps_explicit_keys() {
        let base = ScenarioConfig::from_json(
            r#"{"scenario": "custom", "field": {"type": "constant", "f0": 0.1}, "tolerances": {"a": 1.0, "b": 2.0}}"#,
        )
        .unwrap();
        let top = ScenarioConfig::from_json(r#"{"flux_from_field": true, "tolerances": {"b": 3.0}}"#).unwrap();
        let merged = top.over(base);
        assert_eq!(merged.field, Some(FieldProfile::constant(0.1)));
        assert!(merged.flux_from_field);
        assert_eq!(merged.tolerance("a", 0.0), 1.0);
        assert_eq!(merged.tolerance("b", 0.0), 3.0);
    }

    #[test]
    fn scenario_names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(ScenarioKind::from_name(k.name()).unwrap(), k);
        }
        assert!(ScenarioKind::from_name("nope").is_err());
    }
}
