//! CSV and summary exports.
//!
//! Output is deterministic: identical configs produce byte-identical files.
//! dB columns use 4 decimal places with '.' separators; the omni column is
//! the decimal sum of the rounded direct and correction columns, so the row
//! identity `pl_omni = pl_direct + correction` survives the rounding.

use mpm_core::config::{ScenarioConfig, BuiltScenario};
use mpm_core::metrics::ErrorReport;
use mpm_core::synthesis::SynthesisResult;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

pub fn write_points_csv(path: &Path, result: &SynthesisResult) -> std::io::Result<()> {
    let mut out = String::with_capacity(64 * result.rows.len());
    out.push_str("d_m,pl_direct_db,correction_db,pl_omni_db\n");
    for row in &result.rows {
        let direct = round4(row.pl_direct_db);
        let correction = round4(row.correction_db());
        out.push_str(&format!(
            "{:.4},{:.4},{:.4},{:.4}\n",
            row.distance_m,
            direct,
            correction,
            direct + correction
        ));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())
}

#[derive(Serialize)]
pub struct Summary {
    scenario: ScenarioEcho,
    directional: ModelEcho,
    omni_fit: FitEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonEcho>,
}

#[derive(Serialize)]
struct ScenarioEcho {
    name: String,
    frequency_ghz: f64,
    distance_min_m: f64,
    distance_max_m: f64,
    distance_step_m: f64,
    distances: usize,
    gamma: f64,
    tx: AntennaEcho,
    rx: AntennaEcho,
    pdp_label: String,
    pdp_taps: usize,
    azimuth_bins: usize,
    scatterers_per_ellipse: usize,
    power_floor_db: f64,
}

#[derive(Serialize)]
struct AntennaEcho {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    hpbw_deg: Option<f64>,
    gain_dbi: f64,
    boresight_deg: f64,
}

#[derive(Serialize)]
struct ModelEcho {
    ple_n: f64,
    ref_distance_d0_m: f64,
    pl_at_d0_db: f64,
}

#[derive(Serialize)]
struct FitEcho {
    ple_n: f64,
    sigma_db: f64,
    ref_distance_d0_m: f64,
    pl_at_d0_db: f64,
}

#[derive(Serialize)]
struct ComparisonEcho {
    reference_ple_n: f64,
    reference_pl_at_d0_db: f64,
    mae_db: f64,
    rmse_db: f64,
    m: usize,
}

impl Summary {
    pub fn new(
        config: &ScenarioConfig,
        built: &BuiltScenario,
        result: &SynthesisResult,
        comparison: Option<&ErrorReport>,
    ) -> Summary {
        let scenario = &built.scenario;
        let antenna_echo = |a: &mpm_core::config::AntennaConfig| AntennaEcho {
            kind: match a.kind {
                mpm_core::config::AntennaKind::Isotropic => "isotropic".to_owned(),
                mpm_core::config::AntennaKind::Sinc => "sinc".to_owned(),
            },
            hpbw_deg: a.hpbw_deg,
            gain_dbi: a.gain_dbi,
            boresight_deg: a.boresight_deg,
        };
        Summary {
            scenario: ScenarioEcho {
                name: built.name.clone(),
                frequency_ghz: config.frequency_ghz,
                distance_min_m: config.distance.min_m,
                distance_max_m: config.distance.max_m,
                distance_step_m: config.distance.step_m,
                distances: result.rows.len(),
                gamma: scenario.gamma,
                tx: antenna_echo(&config.antenna.tx),
                rx: antenna_echo(&config.antenna.rx),
                pdp_label: config
                    .pdp
                    .label
                    .clone()
                    .unwrap_or_else(|| built.name.clone()),
                pdp_taps: scenario.clusters.clusters().len()
                    + usize::from(scenario.clusters.p0() > 0.0),
                azimuth_bins: scenario.azimuth_bins,
                scatterers_per_ellipse: scenario.scatterers_per_ellipse,
                power_floor_db: config.numerics.power_floor_db,
            },
            directional: ModelEcho {
                ple_n: scenario.directional_model.ple_n,
                ref_distance_d0_m: scenario.directional_model.ref_distance_d0,
                pl_at_d0_db: scenario.directional_model.pl_at_d0,
            },
            omni_fit: FitEcho {
                ple_n: result.omni_model.ple_n,
                sigma_db: result.omni_model.sigma,
                ref_distance_d0_m: result.omni_model.ref_distance_d0,
                pl_at_d0_db: result.omni_model.pl_at_d0,
            },
            comparison: comparison.map(|report| ComparisonEcho {
                reference_ple_n: built.reference.as_ref().expect("present").ple_n,
                reference_pl_at_d0_db: built.reference.as_ref().expect("present").pl_at_d0,
                mae_db: report.mae_db,
                rmse_db: report.rmse_db,
                m: report.m,
            }),
        }
    }
}

pub fn write_summary(path: &Path, summary: &Summary) -> anyhow::Result<()> {
    let text = toml::to_string_pretty(summary)?;
    std::fs::write(path, text)?;
    Ok(())
}
