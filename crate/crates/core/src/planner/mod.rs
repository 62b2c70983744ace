//! Itinerary construction under a wall-clock time budget.
//!
//! A plan is a sequence of legs. The first leg visits the entry city with no
//! travel; each later leg takes the train from the previous city, then tours
//! up to `attractions_per_city` of the destination's best attractions. A leg
//! is only valid when at least one attraction fits in the budget.

mod clock;
mod search;
mod verify;

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Attraction, City, Dataset};
use crate::geo::{rail_leg, TravelRates};

pub use clock::{earliest_start, visit_window, Clock};
pub use search::{
    multistart_entries, plan_exhaustive, plan_exhaustive_with_stats, plan_greedy, plan_greedy_from,
    plan_multistart, ExhaustiveStats, MAX_EXHAUSTIVE_CITIES,
};
pub use verify::{verify_plan, TIME_TOLERANCE};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("no candidate city with at least one attraction")]
    EmptyCandidateSet,
    #[error("exhaustive search supports at most {max} cities, got {n}")]
    TooManyCities { n: usize, max: usize },
    #[error("unknown candidate city `{0}`")]
    UnknownCity(String),
    #[error("invalid planner config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Wall-clock hours available for the whole trip.
    pub total_budget: f64,
    pub day_start: f64,
    pub day_end: f64,
    pub rates: TravelRates,
    pub attractions_per_city: usize,
    pub multi_start_k: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            total_budget: 144.0,
            day_start: 8.0,
            day_end: 20.0,
            rates: TravelRates::default(),
            attractions_per_city: 1,
            multi_start_k: 1,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |m: String| Err(PlanError::InvalidConfig(m));
        if !(self.total_budget > 0.0 && self.total_budget.is_finite()) {
            return bad(format!(
                "total_budget must be > 0, got {}",
                self.total_budget
            ));
        }
        if !(0.0..=24.0).contains(&self.day_start)
            || !(0.0..=24.0).contains(&self.day_end)
            || self.day_start >= self.day_end
        {
            return bad(format!(
                "day window [{}, {}] must satisfy 0 <= day_start < day_end <= 24",
                self.day_start, self.day_end
            ));
        }
        if self.attractions_per_city == 0 {
            return bad("attractions_per_city must be >= 1".into());
        }
        if self.multi_start_k == 0 {
            return bad("multi_start_k must be >= 1".into());
        }
        self.rates.validate().map_err(PlanError::InvalidConfig)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Visit {
    pub attraction_id: String,
    pub name: String,
    pub rating: f64,
    pub ticket_price: f64,
    pub visit_hours: f64,
    /// Elapsed trip hours when the visit starts.
    pub start_hours: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub from_city: String,
    pub to_city: String,
    pub distance_km: f64,
    pub travel_hours: f64,
    pub rest_hours: f64,
    pub visit_hours: f64,
    pub rail_cost: f64,
    /// `rail_cost + sum of ticket prices`.
    pub leg_cost: f64,
    /// Elapsed hours when the leg starts.
    pub start_hours: f64,
    /// Elapsed hours when the traveller reaches `to_city`.
    pub arrival_hours: f64,
    pub visits: Vec<Visit>,
}

impl Leg {
    /// Wall-clock duration of the leg.
    pub fn hours(&self) -> f64 {
        self.travel_hours + self.rest_hours + self.visit_hours
    }

    pub fn rating_sum(&self) -> f64 {
        self.visits.iter().fold(0.0, |acc, v| acc + v.rating)
    }

    pub fn ticket_cost(&self) -> f64 {
        self.visits.iter().fold(0.0, |acc, v| acc + v.ticket_price)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItineraryPlan {
    pub entry_city: String,
    pub legs: Vec<Leg>,
    pub visited_cities: Vec<String>,
    pub visited_attractions: Vec<String>,
    pub total_hours: f64,
    pub total_cost: f64,
    pub attraction_count: usize,
    pub rating_sum: f64,
}

impl ItineraryPlan {
    /// Builds a plan and its totals from a leg sequence. With no legs the
    /// traveller only ever stood in `entry_city`.
    pub fn from_legs(entry_city: String, legs: Vec<Leg>) -> Self {
        let visited_cities = if legs.is_empty() {
            vec![entry_city.clone()]
        } else {
            legs.iter().map(|l| l.to_city.clone()).collect()
        };
        let visited_attractions: Vec<String> = legs
            .iter()
            .flat_map(|l| l.visits.iter().map(|v| v.attraction_id.clone()))
            .collect();
        Self {
            total_hours: legs.iter().fold(0.0, |acc, l| acc + l.hours()),
            total_cost: legs.iter().fold(0.0, |acc, l| acc + l.leg_cost),
            rating_sum: legs.iter().fold(0.0, |acc, l| acc + l.rating_sum()),
            attraction_count: visited_attractions.len(),
            entry_city,
            legs,
            visited_cities,
            visited_attractions,
        }
    }
}

/// Total order on plans, best first: more attractions, then lower cost, then
/// higher summed rating, then the lexicographically smaller city sequence.
pub fn objective_cmp(a: &ItineraryPlan, b: &ItineraryPlan) -> Ordering {
    b.attraction_count
        .cmp(&a.attraction_count)
        .then(a.total_cost.total_cmp(&b.total_cost))
        .then(b.rating_sum.total_cmp(&a.rating_sum))
        .then_with(|| a.visited_cities.cmp(&b.visited_cities))
}

/// Resolves candidate ids, drops duplicates and cities without attractions.
pub(crate) fn resolve_candidates<'a, S: AsRef<str>>(
    ds: &'a Dataset,
    candidates: &[S],
) -> Result<Vec<&'a City>, PlanError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for id in candidates {
        let id = id.as_ref();
        let city = ds
            .city(id)
            .ok_or_else(|| PlanError::UnknownCity(id.to_string()))?;
        if seen.insert(id) && ds.top_attraction(id).is_some() {
            out.push(city);
        }
    }
    Ok(out)
}

/// Entry preference between two cities by their best attraction: higher
/// rating, then lower ticket price, then smaller city id.
pub(crate) fn entry_cmp(ds: &Dataset, a: &City, b: &City) -> Ordering {
    let (ta, tb) = (ds.top_attraction(&a.id), ds.top_attraction(&b.id));
    match (ta, tb) {
        (Some(x), Some(y)) => y
            .rating
            .total_cmp(&x.rating)
            .then(x.ticket_price.total_cmp(&y.ticket_price))
            .then_with(|| a.id.cmp(&b.id)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.id.cmp(&b.id),
    }
}

/// The candidate hosting the highest-rated attraction.
pub fn select_entry_city<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
) -> Result<String, PlanError> {
    resolve_candidates(ds, candidates)?
        .into_iter()
        .min_by(|a, b| entry_cmp(ds, a, b))
        .map(|c| c.id.clone())
        .ok_or(PlanError::EmptyCandidateSet)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub visits: Vec<Visit>,
    pub visit_hours: f64,
    pub ticket_cost: f64,
    pub rest_hours: f64,
    /// Clock after the last selected visit.
    pub clock: Clock,
}

/// Tours up to `attractions_per_city` attractions of a city in preference
/// order (rating descending, price ascending, id ascending), skipping any
/// that cannot finish inside its visit window within the budget.
pub fn pick_attractions(
    attractions: &[&Attraction],
    clock: Clock,
    cfg: &PlannerConfig,
) -> Selection {
    let mut clock = clock;
    let mut visits = Vec::new();
    let mut ticket_cost = 0.0;
    for a in attractions {
        if visits.len() == cfg.attractions_per_city {
            break;
        }
        let now = clock.now();
        let Some(start) = earliest_start(now, a, cfg) else {
            continue;
        };
        let mut next = clock;
        next.rest += start - now;
        let start_hours = next.now();
        next.visit += a.visit_duration;
        if next.now() > cfg.total_budget {
            continue;
        }
        clock = next;
        ticket_cost += a.ticket_price;
        visits.push(Visit {
            attraction_id: a.id.clone(),
            name: a.name.clone(),
            rating: a.rating,
            ticket_price: a.ticket_price,
            visit_hours: a.visit_duration,
            start_hours,
        });
    }
    Selection {
        visit_hours: clock.visit,
        rest_hours: clock.rest,
        ticket_cost,
        visits,
        clock,
    }
}

/// Simulates travelling from `from` (or starting at `to` when `None`) at
/// `elapsed` hours and touring `to`. `None` when nothing can be visited.
pub(crate) fn simulate_leg(
    ds: &Dataset,
    from: Option<&City>,
    to: &City,
    elapsed: f64,
    cfg: &PlannerConfig,
) -> Option<Leg> {
    let (distance_km, travel, rail_cost) = match from {
        Some(f) => {
            let r = rail_leg(f.location, to.location, &cfg.rates);
            (r.distance_km, r.hours, r.cost)
        }
        None => (0.0, 0.0, 0.0),
    };
    let mut clock = Clock::at(elapsed);
    clock.travel = travel;
    if clock.now() > cfg.total_budget {
        return None;
    }
    let arrival_hours = clock.now();
    let sel = pick_attractions(&ds.attractions_of(&to.id), clock, cfg);
    if sel.visits.is_empty() {
        return None;
    }
    Some(Leg {
        from_city: from.unwrap_or(to).id.clone(),
        to_city: to.id.clone(),
        distance_km,
        travel_hours: travel,
        rest_hours: sel.rest_hours,
        visit_hours: sel.visit_hours,
        rail_cost,
        leg_cost: rail_cost + sel.ticket_cost,
        start_hours: elapsed,
        arrival_hours,
        visits: sel.visits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::GeoPoint;

    fn city(id: &str, lat: f64, lon: f64) -> City {
        City {
            id: id.into(),
            name: format!("City {id}"),
            location: GeoPoint::new(lat, lon).unwrap(),
        }
    }

    fn attraction(id: &str, city: &str, rating: f64, price: f64) -> Attraction {
        Attraction {
            id: id.into(),
            city_id: city.into(),
            name: id.to_uppercase(),
            rating,
            ticket_price: price,
            visit_duration: 2.0,
            open_hour: 0.0,
            close_hour: 24.0,
        }
    }

    #[test]
    fn entry_single_candidate() {
        let ds = Dataset::new(
            vec![city("a", 30.0, 100.0)],
            vec![attraction("x", "a", 3.0, 10.0)],
        )
        .unwrap();
        assert_eq!(select_entry_city(&ds, &["a"]).unwrap(), "a");
    }

    #[test]
    fn entry_highest_rating() {
        let ds = Dataset::new(
            vec![city("a", 30.0, 100.0), city("b", 31.0, 101.0)],
            vec![
                attraction("x", "a", 4.9, 100.0),
                attraction("y", "b", 4.7, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(select_entry_city(&ds, &["a", "b"]).unwrap(), "a");
    }

    #[test]
    fn entry_tie_breaks() {
        // Both orders of the two candidates give the same answer.
        let ds = Dataset::new(
            vec![
                city("a", 30.0, 100.0),
                city("b", 31.0, 101.0),
                city("c", 32.0, 102.0),
            ],
            vec![
                attraction("x", "a", 4.8, 80.0),
                attraction("y", "b", 4.8, 60.0),
                attraction("z", "c", 4.8, 60.0),
            ],
        )
        .unwrap();
        assert_eq!(select_entry_city(&ds, &["a", "b"]).unwrap(), "b");
        assert_eq!(select_entry_city(&ds, &["b", "a"]).unwrap(), "b");
        assert_eq!(select_entry_city(&ds, &["c", "b"]).unwrap(), "b");
    }

    #[test]
    fn entry_empty_and_unknown() {
        let ds = Dataset::new(vec![city("a", 30.0, 100.0)], vec![]).unwrap();
        let none: [&str; 0] = [];
        assert_eq!(
            select_entry_city(&ds, &none),
            Err(PlanError::EmptyCandidateSet)
        );
        assert_eq!(
            select_entry_city(&ds, &["a"]),
            Err(PlanError::EmptyCandidateSet)
        );
        assert_eq!(
            select_entry_city(&ds, &["q"]),
            Err(PlanError::UnknownCity("q".into()))
        );
    }

    #[test]
    fn pick_open_all_day() {
        let a = attraction("x", "a", 4.0, 10.0);
        let sel = pick_attractions(&[&a], Clock::at(0.0), &PlannerConfig::default());
        assert_eq!(sel.visits.len(), 1);
        assert_eq!(sel.visit_hours, 2.0);
        assert_eq!(sel.rest_hours, 0.0);
        assert_eq!(sel.ticket_cost, 10.0);
    }

    #[test]
    fn pick_closed_and_no_time_to_wait() {
        let mut a = attraction("x", "a", 4.0, 10.0);
        a.open_hour = 9.0;
        a.close_hour = 12.0;
        let cfg = PlannerConfig {
            total_budget: 10.0,
            ..Default::default()
        };
        // arrive 14:00; next opening is tomorrow 09:00 = elapsed 25 > budget
        let sel = pick_attractions(&[&a], Clock::at(6.0), &cfg);
        assert!(sel.visits.is_empty());
        assert_eq!(sel.clock, Clock::at(6.0));
    }

    #[test]
    fn pick_prefers_cheaper_on_equal_rating() {
        let a = attraction("x", "a", 4.8, 100.0);
        let b = attraction("y", "a", 4.8, 50.0);
        let mut list = vec![&a, &b];
        list.sort_by(|p, q| p.preference_cmp(q));
        let cfg = PlannerConfig {
            attractions_per_city: 2,
            ..Default::default()
        };
        let sel = pick_attractions(&list, Clock::at(0.0), &cfg);
        assert_eq!(sel.visits[0].attraction_id, "y");
        assert_eq!(sel.visits[1].attraction_id, "x");
        assert_eq!(sel.visits[1].start_hours, 2.0);
    }

    #[test]
    fn pick_rolls_overnight_as_rest() {
        let a = attraction("x", "a", 4.0, 0.0);
        // 19:00 arrival, 2 h visit cannot finish by 20:00
        let sel = pick_attractions(&[&a], Clock::at(11.0), &PlannerConfig::default());
        assert_eq!(sel.visits[0].start_hours, 24.0);
        assert_eq!(sel.rest_hours, 13.0);
    }

    #[test]
    fn objective_ordering() {
        let base = ItineraryPlan::from_legs("a".into(), vec![]);
        let mut more = base.clone();
        more.attraction_count = 1;
        more.total_cost = 1e9;
        assert_eq!(objective_cmp(&more, &base), Ordering::Less);
        let mut cheaper = base.clone();
        cheaper.total_cost = -1.0;
        assert_eq!(objective_cmp(&cheaper, &base), Ordering::Less);
        let mut b = base.clone();
        b.visited_cities = vec!["b".into()];
        assert_eq!(objective_cmp(&base, &b), Ordering::Less);
    }

    #[test]
    fn config_validation() {
        assert!(PlannerConfig::default().validate().is_ok());
        let bad = PlannerConfig {
            day_start: 20.0,
            day_end: 8.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PlannerConfig {
            total_budget: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
