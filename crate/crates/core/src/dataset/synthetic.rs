//! Seeded synthetic datasets with the same schema as the real city data.
//!
//! The generator draws every value from a `ChaCha8` stream
//! (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), converting each 64-bit
//! output to a uniform `f64` in `[0, 1)` from its top 53 bits. Nothing else
//! touches the stream, so a seed yields the same bytes on every platform.
//!
//! Draw order: all cities (lat, lon), then for each city its attractions
//! (rating, price, duration, open, close), then the latent city factor, then
//! per criterion (orientation, loading, one noise value per city).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{Attraction, City, Criterion, DatasetError, GeoPoint, IndicatorMatrix, Orientation};

/// Latitude bounds of generated cities (degrees).
pub const BOUNDS_LAT: (f64, f64) = (18.0, 54.0);
/// Longitude bounds of generated cities (degrees).
pub const BOUNDS_LON: (f64, f64) = (73.0, 135.0);

const CRITERION_NAMES: [&str; 6] = [
    "city_size",
    "ecology",
    "culture_history",
    "accessibility",
    "climate",
    "cuisine",
];

/// Redraws allowed for a criterion column that came out constant.
const MAX_COLUMN_REDRAWS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub cities: Vec<City>,
    pub attractions: Vec<Attraction>,
    pub indicators: IndicatorMatrix,
}

struct Uniform(ChaCha8Rng);

impl Uniform {
    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }

    /// Uniform integer in `0..n`.
    fn below(&mut self, n: u32) -> u32 {
        ((self.next() * n as f64) as u32).min(n - 1)
    }
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

fn width(n: usize) -> usize {
    n.to_string().len().max(3)
}

pub fn generate_synthetic(
    seed: u64,
    n_cities: usize,
    attractions_per_city: usize,
    n_criteria: usize,
) -> Result<SyntheticData, DatasetError> {
    if n_cities == 0 {
        return Err(DatasetError::InvalidParameter(
            "n_cities must be >= 1".into(),
        ));
    }
    if attractions_per_city == 0 {
        return Err(DatasetError::InvalidParameter(
            "attractions_per_city must be >= 1".into(),
        ));
    }
    if n_criteria < 2 {
        return Err(DatasetError::InvalidParameter(format!(
            "n_criteria must be >= 2 (got {n_criteria})"
        )));
    }
    let mut rng = Uniform(ChaCha8Rng::seed_from_u64(seed));
    let cw = width(n_cities);
    let aw = width(attractions_per_city);

    let mut cities = Vec::with_capacity(n_cities);
    for i in 0..n_cities {
        let lat = round_to(rng.range(BOUNDS_LAT.0, BOUNDS_LAT.1), 4);
        let lon = round_to(rng.range(BOUNDS_LON.0, BOUNDS_LON.1), 4);
        cities.push(City {
            id: format!("c{:0cw$}", i + 1),
            name: format!("City {:0cw$}", i + 1),
            location: GeoPoint::new(lat, lon)?,
        });
    }

    let mut attractions = Vec::with_capacity(n_cities * attractions_per_city);
    for city in &cities {
        for j in 0..attractions_per_city {
            let rating = round_to(rng.range(3.0, 5.0), 1);
            let ticket_price = 5.0 * rng.below(61) as f64;
            let visit_duration = 0.5 * (2 + rng.below(9)) as f64;
            let open_hour = (6 + rng.below(6)) as f64;
            let close_hour = (open_hour + (4 + rng.below(9)) as f64).min(24.0);
            attractions.push(Attraction {
                id: format!("{}-a{:0aw$}", city.id, j + 1),
                city_id: city.id.clone(),
                name: format!("Scenic Spot {} {}", &city.id[1..], j + 1),
                rating,
                ticket_price,
                visit_duration,
                open_hour,
                close_hour,
            });
        }
    }

    // One latent "attractiveness" factor shared by all criteria, plus noise.
    let latent: Vec<f64> = (0..n_cities).map(|_| rng.next()).collect();
    let mut criteria = Vec::with_capacity(n_criteria);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n_criteria);
    for j in 0..n_criteria {
        let name = CRITERION_NAMES
            .get(j)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("criterion_{}", j + 1));
        let orientation = if rng.next() < 0.25 {
            Orientation::Cost
        } else {
            Orientation::Benefit
        };
        let mut column = Vec::new();
        for attempt in 0..=MAX_COLUMN_REDRAWS {
            let loading = rng.range(0.4, 0.9);
            column = latent
                .iter()
                .map(|&f| {
                    let noise = rng.next();
                    let v = loading * f + (1.0 - loading) * noise;
                    let v = if orientation == Orientation::Cost {
                        1.0 - v
                    } else {
                        v
                    };
                    round_to(100.0 * v, 2)
                })
                .collect();
            let constant = column.iter().all(|&v| v == column[0]);
            // A single city always gives a constant column; nothing to redraw.
            if !constant || n_cities == 1 {
                break;
            }
            if attempt == MAX_COLUMN_REDRAWS {
                return Err(DatasetError::InvalidParameter(format!(
                    "criterion `{name}` stayed constant after {MAX_COLUMN_REDRAWS} redraws"
                )));
            }
        }
        criteria.push(Criterion::new(name, orientation));
        columns.push(column);
    }
    let values = (0..n_cities)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let indicators = IndicatorMatrix::new(
        cities.iter().map(|c| c.id.clone()).collect(),
        criteria,
        values,
    )?;

    Ok(SyntheticData {
        cities,
        attractions,
        indicators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_counts_rejected() {
        assert!(generate_synthetic(1, 0, 1, 2).is_err());
        assert!(generate_synthetic(1, 1, 0, 2).is_err());
        assert!(matches!(
            generate_synthetic(1, 1, 1, 1),
            Err(DatasetError::InvalidParameter(_))
        ));
    }

    #[test]
    fn same_seed_same_data() {
        let a = generate_synthetic(7, 5, 3, 4).unwrap();
        let b = generate_synthetic(7, 5, 3, 4).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(8, 5, 3, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_scale_shape() {
        let d = generate_synthetic(7, 352, 100, 6).unwrap();
        assert_eq!(d.cities.len(), 352);
        assert_eq!(d.attractions.len(), 35_200);
        assert_eq!(d.indicators.n_rows(), 352);
        assert_eq!(d.indicators.n_cols(), 6);
    }

    #[test]
    fn coordinates_within_bounds() {
        let d = generate_synthetic(3, 200, 1, 2).unwrap();
        for c in &d.cities {
            assert!((BOUNDS_LAT.0..=BOUNDS_LAT.1).contains(&c.location.lat()));
            assert!((BOUNDS_LON.0..=BOUNDS_LON.1).contains(&c.location.lon()));
        }
    }

    #[test]
    fn columns_vary() {
        let d = generate_synthetic(11, 4, 1, 8).unwrap();
        for j in 0..d.indicators.n_cols() {
            let col = d.indicators.column(j);
            assert!(col.iter().any(|&v| v != col[0]));
        }
        assert_eq!(d.indicators.criteria()[6].name, "criterion_7");
    }
}
