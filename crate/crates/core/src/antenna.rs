//! Azimuth antenna patterns.
//!
//! Two shapes: the isotropic pattern (unit gain everywhere) and a squared-sinc
//! main lobe with a hard zero outside the first nulls. Both are peak
//! normalized to 1 so that directional reception can only remove power
//! relative to isotropic reception; nameplate dBi gains are carried as
//! metadata and never enter the power integrals.

use crate::{Error, Result};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Argument `x` of the unnormalized sinc where `sinc(x)^2 = 1/2`, solved once
/// by bisection on the monotone main lobe.
fn half_power_argument() -> f64 {
    static X_HALF: OnceLock<f64> = OnceLock::new();
    *X_HALF.get_or_init(|| {
        let g = |x: f64| {
            let s = x.sin() / x;
            s * s - 0.5
        };
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// First-null offset `u0` such that the squared-sinc lobe
/// `g(u) = sinc(pi*u/u0)^2` satisfies `g(hpbw/2) = 1/2`.
pub fn solve_first_null(hpbw: f64) -> Result<f64> {
    if !(hpbw > 0.0 && hpbw < PI) {
        return Err(Error::HpbwOutOfRange { value: hpbw });
    }
    Ok(0.5 * hpbw * PI / half_power_argument())
}

/// Wraps an angle into (-pi, pi]. In-range angles pass through unchanged.
pub fn wrap_angle(phi: f64) -> f64 {
    if phi > -PI && phi <= PI {
        return phi;
    }
    let w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Isotropic,
    Sinc { hpbw: f64, first_null: f64 },
}

/// An azimuth power pattern, peak normalized to unit gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    shape: Shape,
    boresight: f64,
    peak_gain_dbi: f64,
}

impl AntennaPattern {
    pub fn isotropic() -> AntennaPattern {
        AntennaPattern {
            shape: Shape::Isotropic,
            boresight: 0.0,
            peak_gain_dbi: 0.0,
        }
    }

    /// Squared-sinc lobe with half-power beamwidth `hpbw` (radians), steered
    /// to `boresight`. `peak_gain_dbi` is informational only.
    pub fn sinc(hpbw: f64, peak_gain_dbi: f64, boresight: f64) -> Result<AntennaPattern> {
        let first_null = solve_first_null(hpbw)?;
        Ok(AntennaPattern {
            shape: Shape::Sinc { hpbw, first_null },
            boresight: wrap_angle(boresight),
            peak_gain_dbi,
        })
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self.shape, Shape::Isotropic)
    }

    pub fn hpbw(&self) -> Option<f64> {
        match self.shape {
            Shape::Isotropic => None,
            Shape::Sinc { hpbw, .. } => Some(hpbw),
        }
    }

    pub fn boresight(&self) -> f64 {
        self.boresight
    }

    pub fn peak_gain_dbi(&self) -> f64 {
        self.peak_gain_dbi
    }

    /// Linear gain at azimuth `phi`. Total over all angles; the sinc shape
    /// is identically zero outside its first nulls.
    pub fn gain(&self, phi: f64) -> f64 {
        match self.shape {
            Shape::Isotropic => 1.0,
            Shape::Sinc { first_null, .. } => {
                let u = wrap_angle(phi - self.boresight);
                if u.abs() >= first_null {
                    return 0.0;
                }
                let x = PI * u / first_null;
                if x == 0.0 {
                    1.0
                } else {
                    let s = x.sin() / x;
                    s * s
                }
            }
        }
    }
}
