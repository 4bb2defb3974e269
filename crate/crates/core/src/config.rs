//! Scenario configuration files.
//!
//! A scenario is one TOML document holding the directional reference model,
//! the antenna pair, the tap table, the distance grid and the numeric knobs.
//! Validation collects every violation (with the offending key path) instead
//! of stopping at the first, so `check` can report them all at once.

use crate::antenna::AntennaPattern;
use crate::pdp::{extract_clusters, load_pdp, scale_normalized_taps, ClusterSet, PowerDelayProfile};
use crate::synthesis::{free_space_pl, CiModel, DistanceGrid, SynthesisScenario};
use serde::Deserialize;
use std::fmt;
use std::path::{Path, PathBuf};

pub const DEFAULT_AZIMUTH_BINS: usize = 3600;
pub const DEFAULT_SCATTERERS_PER_ELLIPSE: usize = 360;
pub const DEFAULT_POWER_FLOOR_DB: f64 = -40.0;
pub const DEFAULT_REF_DISTANCE_M: f64 = 1.0;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid configuration:\n{}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// One validation finding, pointing at the key that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub frequency_ghz: f64,
    pub distance: DistanceConfig,
    pub directional: DirectionalConfig,
    pub antenna: AntennaPairConfig,
    pub pdp: PdpConfig,
    /// Von Mises concentration of the local scattering (0 = uniform).
    pub gamma: f64,
    #[serde(default)]
    pub numerics: NumericsConfig,
    /// Optional omnidirectional reference model for RMSE/MAE comparison.
    pub reference: Option<ReferenceConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceConfig {
    pub min_m: f64,
    pub max_m: f64,
    pub step_m: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionalConfig {
    /// Path-loss exponent of the directional reference model.
    pub ple_n: f64,
    #[serde(default = "default_ref_distance")]
    pub ref_distance_d0_m: f64,
    /// Anchor path loss at D0; free-space at D0 when omitted.
    pub pl_at_d0_db: Option<f64>,
    #[serde(default)]
    pub sigma_db: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaPairConfig {
    pub tx: AntennaConfig,
    pub rx: AntennaConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaConfig {
    pub kind: AntennaKind,
    pub hpbw_deg: Option<f64>,
    #[serde(default)]
    pub gain_dbi: f64,
    #[serde(default)]
    pub boresight_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntennaKind {
    Isotropic,
    Sinc,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PdpConfig {
    pub label: Option<String>,
    /// Inline taps as `[delay_ns, power_db]` rows.
    pub taps: Option<Vec<[f64; 2]>>,
    /// Normalized tapped-delay-line form, scaled by the delay spread below.
    pub normalized_delays: Option<Vec<f64>>,
    pub powers_db: Option<Vec<f64>>,
    pub rms_delay_spread_ns: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "default_azimuth_bins")]
    pub azimuth_bins: usize,
    #[serde(default = "default_scatterers")]
    pub scatterers_per_ellipse: usize,
    #[serde(default = "default_power_floor")]
    pub power_floor_db: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    pub ple_n: f64,
    #[serde(default = "default_ref_distance")]
    pub ref_distance_d0_m: f64,
    pub pl_at_d0_db: Option<f64>,
}

fn default_ref_distance() -> f64 {
    DEFAULT_REF_DISTANCE_M
}

fn default_azimuth_bins() -> usize {
    DEFAULT_AZIMUTH_BINS
}

fn default_scatterers() -> usize {
    DEFAULT_SCATTERERS_PER_ELLIPSE
}

fn default_power_floor() -> f64 {
    DEFAULT_POWER_FLOOR_DB
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            azimuth_bins: DEFAULT_AZIMUTH_BINS,
            scatterers_per_ellipse: DEFAULT_SCATTERERS_PER_ELLIPSE,
            power_floor_db: DEFAULT_POWER_FLOOR_DB,
        }
    }
}

/// A validated scenario ready to run, plus the optional reference model.
#[derive(Debug, Clone)]
pub struct BuiltScenario {
    pub name: String,
    pub scenario: SynthesisScenario,
    pub reference: Option<CiModel>,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<ScenarioConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source: Box::new(source),
        })
    }

    /// Collects every validation violation; an empty list means the config
    /// can be built.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let mut push = |key: &str, message: String| {
            diags.push(Diagnostic { key: key.to_owned(), message });
        };

        if !(self.frequency_ghz > 0.0) {
            push("frequency_ghz", format!("must be positive, got {}", self.frequency_ghz));
        }
        if !(self.distance.min_m > 0.0) {
            push("distance.min_m", format!("must be positive, got {}", self.distance.min_m));
        }
        if !(self.distance.step_m > 0.0) {
            push("distance.step_m", format!("must be positive, got {}", self.distance.step_m));
        } else if self.distance.min_m > 0.0 {
            match DistanceGrid::from_range(
                self.distance.min_m,
                self.distance.max_m,
                self.distance.step_m,
            ) {
                Ok(_) => {}
                Err(e) => push("distance", e.to_string()),
            }
        }
        if !self.directional.ple_n.is_finite() {
            push("directional.ple_n", "must be finite".to_owned());
        }
        if !(self.directional.ref_distance_d0_m > 0.0) {
            push(
                "directional.ref_distance_d0_m",
                format!("must be positive, got {}", self.directional.ref_distance_d0_m),
            );
        }
        if self.directional.sigma_db < 0.0 {
            push(
                "directional.sigma_db",
                format!("must be non-negative, got {}", self.directional.sigma_db),
            );
        }

        validate_antenna(&self.antenna.tx, "antenna.tx", &mut diags);
        validate_antenna(&self.antenna.rx, "antenna.rx", &mut diags);
        self.validate_pdp(&mut diags);

        if !(self.gamma >= 0.0) {
            diags.push(Diagnostic {
                key: "gamma".to_owned(),
                message: format!("must be non-negative, got {}", self.gamma),
            });
        }
        if self.numerics.azimuth_bins == 0 {
            diags.push(Diagnostic {
                key: "numerics.azimuth_bins".to_owned(),
                message: "must be at least 1".to_owned(),
            });
        }
        if self.numerics.scatterers_per_ellipse == 0 {
            diags.push(Diagnostic {
                key: "numerics.scatterers_per_ellipse".to_owned(),
                message: "must be at least 1".to_owned(),
            });
        }
        if let Some(reference) = &self.reference {
            if !reference.ple_n.is_finite() {
                diags.push(Diagnostic {
                    key: "reference.ple_n".to_owned(),
                    message: "must be finite".to_owned(),
                });
            }
            if !(reference.ref_distance_d0_m > 0.0) {
                diags.push(Diagnostic {
                    key: "reference.ref_distance_d0_m".to_owned(),
                    message: format!("must be positive, got {}", reference.ref_distance_d0_m),
                });
            }
        }
        diags
    }

    fn validate_pdp(&self, diags: &mut Vec<Diagnostic>) {
        let inline = self.pdp.taps.is_some();
        let normalized = self.pdp.normalized_delays.is_some()
            || self.pdp.powers_db.is_some()
            || self.pdp.rms_delay_spread_ns.is_some();
        if inline && normalized {
            diags.push(Diagnostic {
                key: "pdp".to_owned(),
                message: "inline taps and normalized taps are mutually exclusive".to_owned(),
            });
            return;
        }
        if !inline && !normalized {
            diags.push(Diagnostic {
                key: "pdp".to_owned(),
                message: "either `taps` or `normalized_delays`/`powers_db`/`rms_delay_spread_ns` is required"
                    .to_owned(),
            });
            return;
        }
        match self.build_pdp() {
            Ok(_) => {}
            Err(message) => diags.push(Diagnostic { key: "pdp".to_owned(), message }),
        }
    }

    fn build_pdp(&self) -> Result<PowerDelayProfile, String> {
        let label = self.pdp.label.clone().unwrap_or_else(|| self.name.clone());
        if let Some(taps) = &self.pdp.taps {
            let rows: Vec<(f64, f64)> = taps.iter().map(|t| (t[0] * 1e-9, t[1])).collect();
            return load_pdp(&rows, &label).map_err(|e| e.to_string());
        }
        let delays = self
            .pdp
            .normalized_delays
            .as_ref()
            .ok_or("`normalized_delays` is required")?;
        let powers = self.pdp.powers_db.as_ref().ok_or("`powers_db` is required")?;
        let spread_ns = self
            .pdp
            .rms_delay_spread_ns
            .ok_or("`rms_delay_spread_ns` is required")?;
        scale_normalized_taps(delays, powers, spread_ns * 1e-9, &label).map_err(|e| e.to_string())
    }

    /// The cluster set after the power floor: weak taps are dropped relative
    /// to the strongest one.
    pub fn build_clusters(&self) -> Result<ClusterSet, String> {
        let pdp = self.build_pdp()?;
        Ok(extract_clusters(&pdp.with_floor(self.numerics.power_floor_db)))
    }

    /// Validates and assembles the scenario; all diagnostics are raised as
    /// one [`ConfigError::Invalid`].
    pub fn build(&self) -> Result<BuiltScenario, ConfigError> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(ConfigError::Invalid(diags));
        }
        let frequency = self.frequency_ghz * 1e9;
        let d0 = self.directional.ref_distance_d0_m;
        let pl_at_d0 = match self.directional.pl_at_d0_db {
            Some(v) => v,
            None => free_space_pl(frequency, d0).expect("validated"),
        };
        let directional_model = CiModel {
            ref_distance_d0: d0,
            pl_at_d0,
            ple_n: self.directional.ple_n,
            sigma: self.directional.sigma_db,
            frequency,
        };
        let reference = self.reference.map(|r| {
            let pl = match r.pl_at_d0_db {
                Some(v) => v,
                None => free_space_pl(frequency, r.ref_distance_d0_m).expect("validated"),
            };
            CiModel {
                ref_distance_d0: r.ref_distance_d0_m,
                pl_at_d0: pl,
                ple_n: r.ple_n,
                sigma: 0.0,
                frequency,
            }
        });
        let scenario = SynthesisScenario {
            frequency,
            distances: DistanceGrid::from_range(
                self.distance.min_m,
                self.distance.max_m,
                self.distance.step_m,
            )
            .expect("validated"),
            directional_model,
            tx_pattern: build_pattern(&self.antenna.tx),
            rx_pattern: build_pattern(&self.antenna.rx),
            clusters: self.build_clusters().expect("validated"),
            gamma: self.gamma,
            azimuth_bins: self.numerics.azimuth_bins,
            scatterers_per_ellipse: self.numerics.scatterers_per_ellipse,
        };
        Ok(BuiltScenario { name: self.name.clone(), scenario, reference })
    }
}

fn validate_antenna(antenna: &AntennaConfig, key: &str, diags: &mut Vec<Diagnostic>) {
    if antenna.kind == AntennaKind::Sinc {
        match antenna.hpbw_deg {
            None => diags.push(Diagnostic {
                key: format!("{key}.hpbw_deg"),
                message: "required for the sinc pattern".to_owned(),
            }),
            Some(h) if !(h > 0.0 && h < 180.0) => diags.push(Diagnostic {
                key: format!("{key}.hpbw_deg"),
                message: format!("must lie in (0, 180) degrees, got {h}"),
            }),
            Some(_) => {}
        }
    }
}

fn build_pattern(antenna: &AntennaConfig) -> AntennaPattern {
    match antenna.kind {
        AntennaKind::Isotropic => AntennaPattern::isotropic(),
        AntennaKind::Sinc => AntennaPattern::sinc(
            antenna.hpbw_deg.expect("validated").to_radians(),
            antenna.gain_dbi,
            antenna.boresight_deg.to_radians(),
        )
        .expect("validated"),
    }
}
