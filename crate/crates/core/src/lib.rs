//! Numerical synthesis of omnidirectional path-loss models from directional
//! ones via a multi-elliptical scattering geometry.
//!
//! A power delay profile fixes a set of confocal ellipses (one per delay
//! cluster) with the Tx and Rx at the foci. Scatterer paths sampled on the
//! ellipses, weighted by the Tx antenna pattern, build the power angular
//! spectrum at the receiver; a von Mises term adds the local scattering
//! around the Rx. Integrating the spectrum under the directional and the
//! isotropic receive patterns gives a per-distance correction that converts
//! a directional close-in (CI) path-loss model into an omnidirectional one,
//! which is then re-fitted by least squares and validated with RMSE/MAE.
//!
//! Module map:
//!
//! - [`pdp`] — tap tables, delay-spread scaling, cluster extraction
//! - [`geometry`] — confocal ellipses, scatterer sampling, path angles
//! - [`antenna`] — isotropic and sinc-shaped azimuth patterns
//! - [`pas`] — angular power spectrum assembly and received power
//! - [`synthesis`] — the per-distance correction loop and the CI fit
//! - [`metrics`] — RMSE/MAE between path-loss models on a distance grid
//! - [`config`] — scenario files consumed by the CLI

// Validation uses `!(x > 0.0)` so that NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod config;
pub mod geometry;
pub mod metrics;
pub mod pas;
pub mod pdp;
pub mod synthesis;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Errors produced by the modelling pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("tap table is empty")]
    EmptyTapTable,
    #[error("tap row {row}: duplicate delay {delay_s} s")]
    DuplicateDelay { row: usize, delay_s: f64 },
    #[error("tap row {row}: {column} is not finite")]
    NonFiniteTapValue { row: usize, column: &'static str },
    #[error("tap row {row}: negative delay {delay_s} s")]
    NegativeDelay { row: usize, delay_s: f64 },
    #[error("delay list has {delays} entries but power list has {powers}")]
    MismatchedTapLists { delays: usize, powers: usize },
    #[error("rms delay spread must be positive, got {value} s")]
    NonPositiveDelaySpread { value: f64 },
    #[error("cluster delays must be positive and strictly increasing")]
    InvalidClusterDelays,
    #[error("cluster set carries no power")]
    PowerlessClusterSet,
    #[error("Tx-Rx distance must be positive, got {value} m")]
    NonPositiveDistance { value: f64 },
    #[error("position coincides with a focus (zero-length path segment)")]
    PositionAtFocus,
    #[error("at least one scatterer per ellipse is required")]
    ZeroScatterers,
    #[error("half-power beamwidth must lie in (0, pi) rad, got {value}")]
    HpbwOutOfRange { value: f64 },
    #[error("von Mises concentration must be non-negative, got {value}")]
    NegativeGamma { value: f64 },
    #[error("azimuth grid needs at least one bin")]
    ZeroAzimuthBins,
    #[error("angular grids differ: {left} vs {right} bins")]
    GridMismatch { left: usize, right: usize },
    #[error("frequency must be positive, got {value} Hz")]
    NonPositiveFrequency { value: f64 },
    #[error("no directional power received at D = {distance_m} m: geometry fully shadowed by the antenna patterns")]
    FullyShadowed { distance_m: f64 },
    #[error("distance grid needs at least {needed} points, got {count}")]
    DistanceGridTooShort { count: usize, needed: usize },
    #[error("grid step must be positive, got {value} m")]
    NonPositiveStep { value: f64 },
    #[error("step {step} m does not divide the range [{min}, {max}] m evenly")]
    StepDoesNotDivideRange { min: f64, max: f64, step: f64 },
    #[error("CI fit needs at least two points, got {count}")]
    TooFewFitPoints { count: usize },
    #[error("CI fit is degenerate: every distance equals the reference distance")]
    DegenerateFit,
    #[error("distance grid for model comparison is empty")]
    EmptyDistanceGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
