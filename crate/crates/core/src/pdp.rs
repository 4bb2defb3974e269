//! Power delay profiles and cluster extraction.
//!
//! A profile is an ordered list of taps `(delay, linear power)`. The tap at
//! zero delay carries the local-scattering power `p0`; every positive-delay
//! tap becomes one delay cluster and later one ellipse of the scattering
//! geometry. Powers are stored linear; dB is an I/O convenience only.

use crate::{Error, Result};

/// One tap of a power delay profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    /// Excess delay relative to the direct path, seconds.
    pub delay_s: f64,
    /// Linear power in relative units.
    pub power: f64,
}

/// A validated power delay profile: at least one tap, delays strictly
/// increasing, at most one tap at zero delay.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    taps: Vec<Tap>,
    label: String,
}

impl PowerDelayProfile {
    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sum of the linear tap powers.
    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.power).sum()
    }

    /// Drops taps weaker than `floor_db` relative to the strongest tap.
    ///
    /// The strongest tap always survives, so the result is never empty.
    pub fn with_floor(&self, floor_db: f64) -> PowerDelayProfile {
        let strongest = self
            .taps
            .iter()
            .map(|t| t.power)
            .fold(f64::NEG_INFINITY, f64::max);
        let threshold = strongest * 10f64.powf(floor_db / 10.0);
        let kept: Vec<Tap> = self
            .taps
            .iter()
            .copied()
            .filter(|t| t.power >= threshold)
            .collect();
        let dropped = self.taps.len() - kept.len();
        if dropped > 0 {
            log::warn!(
                "dropped {dropped} tap(s) below the {floor_db} dB floor of '{}'",
                self.label
            );
        }
        PowerDelayProfile {
            taps: kept,
            label: self.label.clone(),
        }
    }
}

/// Builds a profile from `(delay_s, power_db)` rows.
///
/// Rows may arrive in any order; they are sorted by delay. Rejects empty
/// tables, non-finite values, negative delays and duplicate delays, naming
/// the offending input row.
pub fn load_pdp(rows: &[(f64, f64)], label: &str) -> Result<PowerDelayProfile> {
    if rows.is_empty() {
        return Err(Error::EmptyTapTable);
    }
    let mut taps = Vec::with_capacity(rows.len());
    for (row, &(delay_s, power_db)) in rows.iter().enumerate() {
        if !delay_s.is_finite() {
            return Err(Error::NonFiniteTapValue { row, column: "delay" });
        }
        if !power_db.is_finite() {
            return Err(Error::NonFiniteTapValue { row, column: "power" });
        }
        if delay_s < 0.0 {
            return Err(Error::NegativeDelay { row, delay_s });
        }
        taps.push((row, Tap { delay_s, power: db_to_linear(power_db) }));
    }
    taps.sort_by(|a, b| a.1.delay_s.total_cmp(&b.1.delay_s));
    for pair in taps.windows(2) {
        if pair[0].1.delay_s == pair[1].1.delay_s {
            return Err(Error::DuplicateDelay {
                row: pair[1].0,
                delay_s: pair[1].1.delay_s,
            });
        }
    }
    Ok(PowerDelayProfile {
        taps: taps.into_iter().map(|(_, t)| t).collect(),
        label: label.to_owned(),
    })
}

/// Builds a profile from unit-normalized delays scaled by an RMS delay
/// spread, the convention used by tapped-delay-line tables.
pub fn scale_normalized_taps(
    normalized_delays: &[f64],
    powers_db: &[f64],
    rms_delay_spread_s: f64,
    label: &str,
) -> Result<PowerDelayProfile> {
    if normalized_delays.len() != powers_db.len() {
        return Err(Error::MismatchedTapLists {
            delays: normalized_delays.len(),
            powers: powers_db.len(),
        });
    }
    if !(rms_delay_spread_s > 0.0) {
        return Err(Error::NonPositiveDelaySpread { value: rms_delay_spread_s });
    }
    let rows: Vec<(f64, f64)> = normalized_delays
        .iter()
        .zip(powers_db)
        .map(|(&nd, &p)| (nd * rms_delay_spread_s, p))
        .collect();
    load_pdp(&rows, label)
}

/// One delay cluster: a positive excess delay and its linear power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub tau_s: f64,
    pub power: f64,
}

/// The cluster set feeding the scattering geometry: `N >= 0` clusters with
/// strictly increasing positive delays, plus the zero-delay power `p0`
/// (zero when the profile has no zero-delay tap).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSet {
    clusters: Vec<Cluster>,
    p0: f64,
}

impl ClusterSet {
    pub fn new(clusters: Vec<Cluster>, p0: f64) -> Result<Self> {
        let increasing = clusters.windows(2).all(|w| w[0].tau_s < w[1].tau_s);
        if !increasing || clusters.iter().any(|c| c.tau_s <= 0.0) {
            return Err(Error::InvalidClusterDelays);
        }
        let total = p0 + clusters.iter().map(|c| c.power).sum::<f64>();
        if p0 < 0.0 || total <= 0.0 {
            return Err(Error::PowerlessClusterSet);
        }
        Ok(ClusterSet { clusters, p0 })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// `p0` plus the sum of all cluster powers.
    pub fn total_power(&self) -> f64 {
        self.p0 + self.clusters.iter().map(|c| c.power).sum::<f64>()
    }
}

/// Splits a profile into the zero-delay power `p0` and the delay clusters.
/// Each positive-delay tap maps to one cluster, powers preserved.
pub fn extract_clusters(pdp: &PowerDelayProfile) -> ClusterSet {
    let mut p0 = 0.0;
    let mut clusters = Vec::new();
    for tap in pdp.taps() {
        if tap.delay_s == 0.0 {
            p0 = tap.power;
        } else {
            clusters.push(Cluster { tau_s: tap.delay_s, power: tap.power });
        }
    }
    ClusterSet { clusters, p0 }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
