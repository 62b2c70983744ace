//! Data model for cities, attractions and the city indicator matrix.

mod csv_io;
mod synthetic;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use csv_io::{
    load_attractions, load_cities, load_indicators, read_attractions, read_cities, read_indicators,
    write_attractions, write_cities, write_criteria, write_indicators, ATTRACTIONS_HEADER,
    CITIES_HEADER, CRITERIA_HEADER,
};
pub use synthetic::{generate_synthetic, SyntheticData, BOUNDS_LAT, BOUNDS_LON};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}: bad header, expected `{expected}`, found `{found}`")]
    Schema {
        source_name: String,
        expected: String,
        found: String,
    },
    #[error("{source_name}: line {line}: {message}")]
    Row {
        source_name: String,
        line: u64,
        message: String,
    },
    #[error("unknown city `{city_id}` at line {line}")]
    UnknownCity { city_id: String, line: u64 },
    #[error("invalid coordinate (lat {lat}, lon {lon})")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A point on the sphere in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    /// Builds a point, rejecting latitudes outside [-90, 90] and folding the
    /// longitude into (-180, 180].
    pub fn new(lat: f64, lon: f64) -> Result<Self, DatasetError> {
        if !lat.is_finite() || !lon.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(DatasetError::InvalidCoordinate { lat, lon });
        }
        let lon = if (-180.0..=180.0).contains(&lon) && lon != -180.0 {
            lon
        } else {
            let folded = (lon + 180.0).rem_euclid(360.0) - 180.0;
            if folded <= -180.0 {
                180.0
            } else {
                folded
            }
        };
        Ok(Self { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct City {
    pub id: String,
    pub name: String,
    pub location: GeoPoint,
}

/// A visitable site inside a city. Hours are hour-of-day values.
#[derive(Debug, Clone, PartialEq)]
pub struct Attraction {
    pub id: String,
    pub city_id: String,
    pub name: String,
    pub rating: f64,
    pub ticket_price: f64,
    pub visit_duration: f64,
    pub open_hour: f64,
    pub close_hour: f64,
}

impl Attraction {
    /// Checks the field ranges, returning a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=5.0).contains(&self.rating) {
            return Err(format!("rating {} outside [0, 5]", self.rating));
        }
        if !(self.ticket_price >= 0.0 && self.ticket_price.is_finite()) {
            return Err(format!("ticket_price {} must be >= 0", self.ticket_price));
        }
        if !(self.visit_duration > 0.0 && self.visit_duration.is_finite()) {
            return Err(format!(
                "visit_duration_h {} must be > 0",
                self.visit_duration
            ));
        }
        if !(0.0..24.0).contains(&self.open_hour) {
            return Err(format!("open_hour {} outside [0, 24)", self.open_hour));
        }
        if !(self.close_hour > self.open_hour && self.close_hour <= 24.0) {
            return Err(format!(
                "close_hour {} must lie in (open_hour {}, 24]",
                self.close_hour, self.open_hour
            ));
        }
        Ok(())
    }

    /// Orders attractions best first: rating descending, then ticket price
    /// ascending, then id ascending.
    pub fn preference_cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .rating
            .total_cmp(&self.rating)
            .then(self.ticket_price.total_cmp(&other.ticket_price))
            .then_with(|| self.id.cmp(&other.id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Benefit,
    Cost,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Benefit => f.write_str("benefit"),
            Orientation::Cost => f.write_str("cost"),
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "benefit" => Ok(Orientation::Benefit),
            "cost" => Ok(Orientation::Cost),
            other => Err(format!(
                "orientation must be `benefit` or `cost`, got `{other}`"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub name: String,
    pub orientation: Orientation,
}

impl Criterion {
    pub fn new(name: impl Into<String>, orientation: Orientation) -> Self {
        Self {
            name: name.into(),
            orientation,
        }
    }

    pub fn benefit(name: impl Into<String>) -> Self {
        Self::new(name, Orientation::Benefit)
    }

    pub fn cost(name: impl Into<String>) -> Self {
        Self::new(name, Orientation::Cost)
    }
}

/// Rows are cities, columns are criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix {
    city_ids: Vec<String>,
    criteria: Vec<Criterion>,
    values: Vec<Vec<f64>>,
}

impl IndicatorMatrix {
    /// Validates shape, finiteness and uniqueness of row and column labels.
    ///
    /// Size requirements (at least two rows and two columns) are enforced by
    /// the MCDA operations themselves so that an empty matrix can still be
    /// represented and reported.
    pub fn new(
        city_ids: Vec<String>,
        criteria: Vec<Criterion>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self, DatasetError> {
        if city_ids.len() != values.len() {
            return Err(DatasetError::InvalidParameter(format!(
                "{} city ids for {} rows",
                city_ids.len(),
                values.len()
            )));
        }
        let mut seen = HashSet::new();
        for id in &city_ids {
            if !seen.insert(id.as_str()) {
                return Err(DatasetError::InvalidParameter(format!(
                    "duplicate city id `{id}` in indicator matrix"
                )));
            }
        }
        let mut names = HashSet::new();
        for c in &criteria {
            if !names.insert(c.name.as_str()) {
                return Err(DatasetError::InvalidParameter(format!(
                    "duplicate criterion `{}`",
                    c.name
                )));
            }
        }
        for (row, id) in values.iter().zip(&city_ids) {
            if row.len() != criteria.len() {
                return Err(DatasetError::InvalidParameter(format!(
                    "row `{id}` has {} values, expected {}",
                    row.len(),
                    criteria.len()
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(DatasetError::InvalidParameter(format!(
                    "row `{id}`, criterion `{}`: non-finite value {v}",
                    criteria[j].name
                )));
            }
        }
        Ok(Self {
            city_ids,
            criteria,
            values,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.values.len()
    }

    pub fn n_cols(&self) -> usize {
        self.criteria.len()
    }

    pub fn city_ids(&self) -> &[String] {
        &self.city_ids
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row][col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[col]).collect()
    }

    /// Returns a copy with the rows reordered by `order` (indices into self).
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self {
            city_ids: order.iter().map(|&i| self.city_ids[i].clone()).collect(),
            criteria: self.criteria.clone(),
            values: order.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    /// Returns a copy with one column multiplied by `factor`.
    pub fn scale_column(&self, col: usize, factor: f64) -> Self {
        let mut out = self.clone();
        for row in &mut out.values {
            row[col] *= factor;
        }
        out
    }
}

/// Cities and attractions with per-city attraction lists sorted best first.
#[derive(Debug, Clone)]
pub struct Dataset {
    cities: Vec<City>,
    attractions: Vec<Attraction>,
    city_index: HashMap<String, usize>,
    by_city: Vec<Vec<usize>>,
}

impl Dataset {
    pub fn new(cities: Vec<City>, attractions: Vec<Attraction>) -> Result<Self, DatasetError> {
        let mut city_index = HashMap::with_capacity(cities.len());
        for (i, c) in cities.iter().enumerate() {
            if c.name.trim().is_empty() {
                return Err(DatasetError::InvalidParameter(format!(
                    "city `{}` has an empty name",
                    c.id
                )));
            }
            if city_index.insert(c.id.clone(), i).is_some() {
                return Err(DatasetError::InvalidParameter(format!(
                    "duplicate city id `{}`",
                    c.id
                )));
            }
        }
        let mut by_city = vec![Vec::new(); cities.len()];
        let mut attraction_ids = HashSet::with_capacity(attractions.len());
        for (k, a) in attractions.iter().enumerate() {
            let Some(&ci) = city_index.get(&a.city_id) else {
                return Err(DatasetError::UnknownCity {
                    city_id: a.city_id.clone(),
                    line: 0,
                });
            };
            if !attraction_ids.insert(a.id.as_str()) {
                return Err(DatasetError::InvalidParameter(format!(
                    "duplicate attraction id `{}`",
                    a.id
                )));
            }
            a.validate().map_err(|m| {
                DatasetError::InvalidParameter(format!("attraction `{}`: {m}", a.id))
            })?;
            by_city[ci].push(k);
        }
        for list in &mut by_city {
            list.sort_by(|&x, &y| attractions[x].preference_cmp(&attractions[y]));
        }
        Ok(Self {
            cities,
            attractions,
            city_index,
            by_city,
        })
    }

    pub fn cities(&self) -> &[City] {
        &self.cities
    }

    pub fn attractions(&self) -> &[Attraction] {
        &self.attractions
    }

    pub fn city(&self, id: &str) -> Option<&City> {
        self.city_index.get(id).map(|&i| &self.cities[i])
    }

    pub fn contains_city(&self, id: &str) -> bool {
        self.city_index.contains_key(id)
    }

    /// Attractions of a city, best first. Empty for unknown ids.
    pub fn attractions_of(&self, city_id: &str) -> Vec<&Attraction> {
        match self.city_index.get(city_id) {
            Some(&i) => self.by_city[i]
                .iter()
                .map(|&k| &self.attractions[k])
                .collect(),
            None => Vec::new(),
        }
    }

    /// The best attraction of a city under [`Attraction::preference_cmp`].
    pub fn top_attraction(&self, city_id: &str) -> Option<&Attraction> {
        let &i = self.city_index.get(city_id)?;
        self.by_city[i].first().map(|&k| &self.attractions[k])
    }
}
