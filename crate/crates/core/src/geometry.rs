//! Confocal multi-elliptical scattering geometry.
//!
//! The Tx sits at `(-D/2, 0)` and the Rx at `(+D/2, 0)`. Every delay cluster
//! maps to one ellipse with the two terminals at the foci: a single-bounce
//! path over that ellipse has total length `r1 + r2 = 2a = D + c*tau`, i.e.
//! the locus of scatterers producing excess delay `tau`. Angles follow the
//! boresight-aligned convention: the angle of departure is measured from the
//! Tx->Rx axis and the angle of arrival from the Rx->Tx axis, so `aoa = 0`
//! points at the Tx and a path mirrored across the axis negates both angles.

use crate::pdp::ClusterSet;
use crate::{Error, Result, SPEED_OF_LIGHT};
use std::f64::consts::PI;

/// One scattering ellipse: semi-axes in meters plus the delay cluster it
/// represents. Confocality ties the axes to the Tx-Rx distance `D`:
/// `a^2 - b^2 = (D/2)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    /// Semi-major axis, meters.
    pub a: f64,
    /// Semi-minor axis, meters.
    pub b: f64,
    /// Excess delay of the cluster, seconds.
    pub tau_s: f64,
    /// Linear cluster power.
    pub power: f64,
}

impl Ellipse {
    /// Ellipse for a cluster with excess delay `tau_s` at Tx-Rx distance
    /// `distance_d`: `a = (D + c*tau)/2`, `b = sqrt(c*tau*(c*tau + 2D))/2`.
    pub fn for_delay(distance_d: f64, tau_s: f64, power: f64) -> Result<Ellipse> {
        if !(distance_d > 0.0) {
            return Err(Error::NonPositiveDistance { value: distance_d });
        }
        let excess = SPEED_OF_LIGHT * tau_s;
        Ok(Ellipse {
            a: (distance_d + excess) / 2.0,
            b: (excess * (excess + 2.0 * distance_d)).sqrt() / 2.0,
            tau_s,
            power,
        })
    }

    /// A zero-delay ellipse collapses to the segment between the foci.
    pub fn is_degenerate(&self) -> bool {
        self.b == 0.0
    }
}

/// The full scattering structure for one Tx-Rx distance: ellipses ordered by
/// delay plus the local-scattering power carried through from the profile.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiEllipticalStructure {
    pub distance_d: f64,
    pub ellipses: Vec<Ellipse>,
    pub p0: f64,
}

/// Builds one confocal ellipse per cluster.
pub fn build_ellipses(clusters: &ClusterSet, distance_d: f64) -> Result<MultiEllipticalStructure> {
    if !(distance_d > 0.0) {
        return Err(Error::NonPositiveDistance { value: distance_d });
    }
    let ellipses = clusters
        .clusters()
        .iter()
        .map(|c| Ellipse::for_delay(distance_d, c.tau_s, c.power))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiEllipticalStructure {
        distance_d,
        ellipses,
        p0: clusters.p0(),
    })
}

/// One single-bounce path: scatterer position, departure/arrival angles and
/// the two segment lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererPath {
    /// Scatterer position, meters, in the Tx/Rx focal frame.
    pub position: (f64, f64),
    /// Angle of departure at the Tx, radians in (-pi, pi].
    pub aod: f64,
    /// Angle of arrival at the Rx, radians in (-pi, pi], zero toward the Tx.
    pub aoa: f64,
    /// Tx-to-scatterer length, meters.
    pub r1: f64,
    /// Scatterer-to-Rx length, meters.
    pub r2: f64,
}

/// Departure/arrival angles and segment lengths for a point in the focal
/// frame. Errors when the point coincides with a focus, where the arrival
/// (or departure) direction is undefined.
pub fn path_geometry(position: (f64, f64), distance_d: f64) -> Result<(f64, f64, f64, f64)> {
    if !(distance_d > 0.0) {
        return Err(Error::NonPositiveDistance { value: distance_d });
    }
    let (x, y) = position;
    let half = distance_d / 2.0;
    let (tx_dx, tx_dy) = (x + half, y);
    let (rx_dx, rx_dy) = (x - half, y);
    let r1 = tx_dx.hypot(tx_dy);
    let r2 = rx_dx.hypot(rx_dy);
    if r1 == 0.0 || r2 == 0.0 {
        return Err(Error::PositionAtFocus);
    }
    let aod = tx_dy.atan2(tx_dx);
    // Arrival is measured against the Rx->Tx boresight, hence the sign flip.
    let aoa = rx_dy.atan2(-rx_dx);
    Ok((aod, aoa, r1, r2))
}

/// Samples `k` scatterer paths on an ellipse at uniformly spaced parametric
/// angles `t_j = -pi + (j + 1/2) * 2*pi/k`, position `(a cos t, b sin t)`.
/// The placement is deterministic and symmetric about the Tx-Rx axis.
///
/// A degenerate ellipse (`b = 0`) yields only the two endpoint paths along
/// the axis, regardless of `k`.
pub fn sample_scatterers(
    ellipse: &Ellipse,
    distance_d: f64,
    k: usize,
) -> Result<Vec<ScattererPath>> {
    if k == 0 {
        return Err(Error::ZeroScatterers);
    }
    if !(distance_d > 0.0) {
        return Err(Error::NonPositiveDistance { value: distance_d });
    }
    if ellipse.is_degenerate() {
        log::debug!(
            "degenerate ellipse (tau = {} s) collapsed to the two axis endpoints",
            ellipse.tau_s
        );
        return Ok(degenerate_endpoints(ellipse, distance_d));
    }
    (0..k)
        .map(|j| {
            let t = -PI + (j as f64 + 0.5) * 2.0 * PI / k as f64;
            let position = (ellipse.a * t.cos(), ellipse.b * t.sin());
            let (aod, aoa, r1, r2) = path_geometry(position, distance_d)?;
            Ok(ScattererPath { position, aod, aoa, r1, r2 })
        })
        .collect()
}

// Forward/backward endpoints of the collapsed segment. Segment lengths come
// from the axis arithmetic so they stay defined even when an endpoint sits
// on a focus; r1 + r2 = 2a holds for both.
fn degenerate_endpoints(ellipse: &Ellipse, distance_d: f64) -> Vec<ScattererPath> {
    let half = distance_d / 2.0;
    let a = ellipse.a;
    vec![
        ScattererPath {
            position: (a, 0.0),
            aod: 0.0,
            aoa: PI,
            r1: a + half,
            r2: a - half,
        },
        ScattererPath {
            position: (-a, 0.0),
            aod: PI,
            aoa: 0.0,
            r1: a - half,
            r2: a + half,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdp::{Cluster, ClusterSet};
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    // Independent check of the arrival angle: unsigned angle between the
    // Rx->Tx and Rx->scatterer vectors from the dot product, sign from y.
    fn aoa_oracle(position: (f64, f64), distance_d: f64) -> f64 {
        let half = distance_d / 2.0;
        let (vx, vy) = (-distance_d, 0.0);
        let (wx, wy) = (position.0 - half, position.1);
        let dot = vx * wx + vy * wy;
        let ang = (dot / (distance_d * wx.hypot(wy))).clamp(-1.0, 1.0).acos();
        if position.1 >= 0.0 {
            ang
        } else {
            -ang
        }
    }

    #[test]
    fn ellipse_axes_from_delay() {
        // c*tau = 100 m at D = 100 m.
        let tau = 100.0 / SPEED_OF_LIGHT;
        let e = Ellipse::for_delay(100.0, tau, 1.0).unwrap();
        assert!(rel_close(e.a, 100.0, 1e-12));
        assert!(rel_close(e.b, 86.60254037844386, 1e-12));
        // Confocality: a^2 - b^2 = (D/2)^2.
        assert!(rel_close(e.a * e.a - e.b * e.b, 2500.0, 1e-12));
    }

    #[test]
    fn zero_delay_degenerates_to_axis_segment() {
        let e = Ellipse::for_delay(100.0, 0.0, 1.0).unwrap();
        assert_eq!(e.a, 50.0);
        assert_eq!(e.b, 0.0);
        assert!(e.is_degenerate());
    }

    #[test]
    fn non_positive_distance_is_rejected() {
        assert!(matches!(
            Ellipse::for_delay(0.0, 1e-9, 1.0),
            Err(Error::NonPositiveDistance { .. })
        ));
        let set = ClusterSet::new(vec![Cluster { tau_s: 1e-9, power: 1.0 }], 0.0).unwrap();
        assert!(build_ellipses(&set, -5.0).is_err());
    }

    #[test]
    fn build_orders_and_carries_p0() {
        let set = ClusterSet::new(
            vec![
                Cluster { tau_s: 50e-9, power: 0.5 },
                Cluster { tau_s: 200e-9, power: 0.25 },
            ],
            2.0,
        )
        .unwrap();
        let s = build_ellipses(&set, 80.0).unwrap();
        assert_eq!(s.p0, 2.0);
        assert_eq!(s.ellipses.len(), 2);
        assert!(s.ellipses[0].tau_s < s.ellipses[1].tau_s);
        assert!(s.ellipses[0].a < s.ellipses[1].a);
    }

    #[test]
    fn sampled_paths_close_the_delay_equation() {
        let tau = 230e-9;
        let e = Ellipse::for_delay(120.0, tau, 1.0).unwrap();
        let paths = sample_scatterers(&e, 120.0, 4).unwrap();
        assert_eq!(paths.len(), 4);
        let expected = 120.0 + SPEED_OF_LIGHT * tau;
        for p in &paths {
            assert!(rel_close(p.r1 + p.r2, expected, 1e-6));
        }
    }

    #[test]
    fn top_of_ellipse_path() {
        // D = 100 m, b = 86.6025 m: the apex sees both terminals at 100 m
        // and arrives at pi/3 off the Rx boresight (dot-product oracle).
        let (aod, aoa, r1, r2) = path_geometry((0.0, 86.60254037844386), 100.0).unwrap();
        assert!(rel_close(r1, 100.0, 1e-12));
        assert!(rel_close(r2, 100.0, 1e-12));
        let oracle = aoa_oracle((0.0, 86.60254037844386), 100.0);
        assert!(rel_close(aoa, oracle, 1e-12));
        assert!(rel_close(aoa, std::f64::consts::FRAC_PI_3, 1e-12));
        assert!(rel_close(aod, std::f64::consts::FRAC_PI_3, 1e-12));
    }

    #[test]
    fn single_scatterer_sits_behind_the_rx() {
        let e = Ellipse::for_delay(100.0, 100.0 / SPEED_OF_LIGHT, 1.0).unwrap();
        let paths = sample_scatterers(&e, 100.0, 1).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(rel_close(paths[0].position.0, e.a, 1e-12));
        assert!(paths[0].position.1.abs() < 1e-9);
        assert!(rel_close(paths[0].aoa, PI, 1e-9));
    }

    #[test]
    fn path_geometry_axis_cases() {
        let (aod, aoa, r1, r2) = path_geometry((0.0, 0.0), 100.0).unwrap();
        assert_eq!((aod, aoa), (0.0, 0.0));
        assert_eq!((r1, r2), (50.0, 50.0));

        let (_, aoa, _, r2) = path_geometry((50.0, 50.0), 100.0).unwrap();
        assert_eq!(r2, 50.0);
        assert!(rel_close(aoa, PI / 2.0, 1e-12));

        let (aod, _, r1, _) = path_geometry((-50.0, 10.0), 100.0).unwrap();
        assert_eq!(r1, 10.0);
        assert!(rel_close(aod, PI / 2.0, 1e-12));
    }

    #[test]
    fn focus_position_is_rejected() {
        assert!(matches!(
            path_geometry((50.0, 0.0), 100.0),
            Err(Error::PositionAtFocus)
        ));
        assert!(matches!(
            path_geometry((-50.0, 0.0), 100.0),
            Err(Error::PositionAtFocus)
        ));
    }

    #[test]
    fn degenerate_ellipse_yields_two_endpoint_paths() {
        let e = Ellipse::for_delay(100.0, 0.0, 1.0).unwrap();
        let paths = sample_scatterers(&e, 100.0, 360).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].aod, 0.0);
        assert_eq!(paths[0].aoa, PI);
        assert_eq!(paths[1].aod, PI);
        assert_eq!(paths[1].aoa, 0.0);
        for p in &paths {
            assert!(rel_close(p.r1 + p.r2, 2.0 * e.a, 1e-12));
        }
    }

    #[test]
    fn zero_scatterers_is_rejected() {
        let e = Ellipse::for_delay(100.0, 100e-9, 1.0).unwrap();
        assert!(matches!(
            sample_scatterers(&e, 100.0, 0),
            Err(Error::ZeroScatterers)
        ));
    }

    proptest! {
        // Confocality and the delay equation over random geometries.
        #[test]
        fn confocality_and_closure(
            d in 1.0f64..5000.0,
            ctau in 1e-3f64..5000.0,
            k in 1usize..64,
        ) {
            let e = Ellipse::for_delay(d, ctau / SPEED_OF_LIGHT, 1.0).unwrap();
            let lhs = e.a * e.a - e.b * e.b;
            let rhs = (d / 2.0) * (d / 2.0);
            prop_assert!(rel_close(lhs, rhs, 1e-9));
            let total = d + ctau;
            for p in sample_scatterers(&e, d, k).unwrap() {
                prop_assert!(rel_close(p.r1 + p.r2, total, 1e-6));
                let (x, y) = p.position;
                let on_ellipse = (x / e.a) * (x / e.a) + (y / e.b) * (y / e.b);
                prop_assert!((on_ellipse - 1.0).abs() <= 1e-9);
            }
        }

        // Larger delays give strictly larger ellipses at fixed distance.
        #[test]
        fn axes_grow_with_delay(
            d in 1.0f64..2000.0,
            ctau in 1e-3f64..1000.0,
            factor in 1.01f64..10.0,
        ) {
            let small = Ellipse::for_delay(d, ctau / SPEED_OF_LIGHT, 1.0).unwrap();
            let large = Ellipse::for_delay(d, factor * ctau / SPEED_OF_LIGHT, 1.0).unwrap();
            prop_assert!(large.a > small.a);
            prop_assert!(large.b > small.b);
        }

        // Even symmetric sampling mirrors every path across the axis with
        // negated angles. Coordinates are compared on the scale of the
        // ellipse (positions near x = 0 make relative checks meaningless).
        #[test]
        fn even_sampling_is_mirror_symmetric(
            d in 1.0f64..2000.0,
            ctau in 1e-2f64..1000.0,
            half_k in 1usize..32,
        ) {
            let k = 2 * half_k;
            let e = Ellipse::for_delay(d, ctau / SPEED_OF_LIGHT, 1.0).unwrap();
            let paths = sample_scatterers(&e, d, k).unwrap();
            for j in 0..half_k {
                let p = &paths[j];
                let q = &paths[k - 1 - j];
                prop_assert!((p.position.0 - q.position.0).abs() <= 1e-9 * e.a);
                prop_assert!((p.position.1 + q.position.1).abs() <= 1e-9 * e.a);
                prop_assert!((p.aoa + q.aoa).abs() <= 1e-9);
                prop_assert!((p.aod + q.aod).abs() <= 1e-9);
            }
        }

        // The arrival angle always matches the dot-product oracle.
        #[test]
        fn aoa_matches_oracle(
            d in 1.0f64..2000.0,
            ctau in 1e-2f64..1000.0,
            k in 1usize..48,
        ) {
            let e = Ellipse::for_delay(d, ctau / SPEED_OF_LIGHT, 1.0).unwrap();
            for p in sample_scatterers(&e, d, k).unwrap() {
                let oracle = aoa_oracle(p.position, d);
                prop_assert!((p.aoa - oracle).abs() < 1e-9);
            }
        }
    }
}
