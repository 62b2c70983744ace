//! Great-circle distance and the rail travel model built on it.

use serde::{Deserialize, Serialize};

use crate::dataset::GeoPoint;

/// Mean Earth radius used throughout, in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Haversine distance in kilometres on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let phi1 = a.lat().to_radians();
    let phi2 = b.lat().to_radians();
    let dphi = (b.lat() - a.lat()).to_radians();
    let dlambda = (b.lon() - a.lon()).to_radians();

    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.clamp(0.0, 1.0).sqrt().asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelRates {
    /// km/h
    pub rail_speed: f64,
    /// currency per km
    pub rail_cost_rate: f64,
    /// hours spent getting from the station to the sights on each arrival
    pub local_transfer_time: f64,
}

impl Default for TravelRates {
    fn default() -> Self {
        Self {
            rail_speed: 300.0,
            rail_cost_rate: 0.5,
            local_transfer_time: 1.0,
        }
    }
}

impl TravelRates {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.rail_speed > 0.0 && self.rail_speed.is_finite()) {
            return Err(format!("rail_speed must be > 0, got {}", self.rail_speed));
        }
        if !(self.rail_cost_rate >= 0.0 && self.rail_cost_rate.is_finite()) {
            return Err(format!(
                "rail_cost_rate must be >= 0, got {}",
                self.rail_cost_rate
            ));
        }
        if !(self.local_transfer_time >= 0.0 && self.local_transfer_time.is_finite()) {
            return Err(format!(
                "local_transfer_time must be >= 0, got {}",
                self.local_transfer_time
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RailLeg {
    pub distance_km: f64,
    pub hours: f64,
    pub cost: f64,
}

/// Travel time (rail plus local transfer) and fare between two points.
pub fn rail_leg(a: GeoPoint, b: GeoPoint, rates: &TravelRates) -> RailLeg {
    let distance_km = haversine_km(a, b);
    RailLeg {
        distance_km,
        hours: distance_km / rates.rail_speed + rates.local_transfer_time,
        cost: distance_km * rates.rail_cost_rate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    // Frozen from a 40-digit evaluation of the same formula.
    const MERIDIAN_DEGREE_KM: f64 = 111.194_926_644_558_74;
    const BEIJING_SHANGHAI_KM: f64 = 1_067.310_170_927_129_3;

    #[test]
    fn identical_points() {
        assert_eq!(haversine_km(p(31.2, 121.4), p(31.2, 121.4)), 0.0);
    }

    #[test]
    fn antipodal() {
        let d = haversine_km(p(0.0, 0.0), p(0.0, 180.0));
        assert!((d - std::f64::consts::PI * 6371.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn one_degree_of_meridian() {
        let d = haversine_km(p(0.0, 0.0), p(1.0, 0.0));
        assert!((d - MERIDIAN_DEGREE_KM).abs() < 1e-9, "{d}");
    }

    #[test]
    fn beijing_shanghai() {
        let d = haversine_km(p(39.9042, 116.4074), p(31.2304, 121.4737));
        assert!((d - BEIJING_SHANGHAI_KM).abs() < 1e-6, "{d}");
    }

    #[test]
    fn rail_leg_same_city() {
        let leg = rail_leg(p(30.0, 100.0), p(30.0, 100.0), &TravelRates::default());
        assert_eq!(leg.hours, 1.0);
        assert_eq!(leg.cost, 0.0);
    }

    #[test]
    fn rail_leg_300_km() {
        // 300 km along the equator.
        let dlon = (300.0 / EARTH_RADIUS_KM).to_degrees();
        let leg = rail_leg(p(0.0, 0.0), p(0.0, dlon), &TravelRates::default());
        assert!((leg.distance_km - 300.0).abs() < 1e-9);
        assert!((leg.hours - 2.0).abs() < 1e-12);
        assert!((leg.cost - 150.0).abs() < 1e-9);
    }

    #[test]
    fn rail_leg_beijing_shanghai() {
        let leg = rail_leg(
            p(39.9042, 116.4074),
            p(31.2304, 121.4737),
            &TravelRates::default(),
        );
        assert!((leg.hours - 4.557_700_569_757_098).abs() < 1e-8);
        assert!((leg.cost - 533.655_085_463_564_7).abs() < 1e-6);
    }

    #[test]
    fn rates_validation() {
        assert!(TravelRates::default().validate().is_ok());
        let bad = TravelRates {
            rail_speed: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    fn point() -> impl Strategy<Value = GeoPoint> {
        (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(la, lo)| p(la, lo))
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in point(), b in point()) {
            let ab = haversine_km(a, b);
            prop_assert_eq!(ab, haversine_km(b, a));
            prop_assert!(ab >= 0.0);
            prop_assert!(ab <= std::f64::consts::PI * EARTH_RADIUS_KM + 1e-9);
        }

        #[test]
        fn triangle_inequality(a in point(), b in point(), c in point()) {
            prop_assert!(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-6);
        }

        #[test]
        fn rail_leg_monotone_in_distance(lat in -60.0f64..60.0, d1 in 0.0f64..40.0, d2 in 0.0f64..40.0) {
            let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let rates = TravelRates::default();
            let o = p(lat, 0.0);
            let a = rail_leg(o, p(lat, near), &rates);
            let b = rail_leg(o, p(lat, far), &rates);
            prop_assert!(a.hours <= b.hours);
            prop_assert!(a.cost <= b.cost);
        }
    }
}
