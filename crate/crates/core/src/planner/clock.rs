//! Wall-clock bookkeeping for one leg of a trip.
//!
//! The trip starts at `day_start` on day 0 and `elapsed` counts wall-clock
//! hours from there, so rest spent waiting for the next visiting window
//! counts against the budget like any other time. Travel may run through the
//! night; visits must fit inside `[day_start, day_end]` and the attraction's
//! opening hours on a single day.

use crate::dataset::Attraction;

use super::PlannerConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clock {
    /// Hours elapsed when the current leg started.
    pub elapsed: f64,
    pub travel: f64,
    pub rest: f64,
    pub visit: f64,
}

impl Clock {
    pub fn at(elapsed: f64) -> Self {
        Self {
            elapsed,
            travel: 0.0,
            rest: 0.0,
            visit: 0.0,
        }
    }

    /// Hours since trip start. The parenthesised sum is the same expression
    /// as [`super::Leg::hours`], so committing a leg reproduces `now` exactly.
    pub fn now(&self) -> f64 {
        self.elapsed + (self.travel + self.rest + self.visit)
    }

    /// Hour of day at `now`.
    pub fn time_of_day(&self, cfg: &PlannerConfig) -> f64 {
        (cfg.day_start + self.now()).rem_euclid(24.0)
    }
}

/// The part of the day an attraction can be visited: its opening hours
/// clipped to the daily activity window.
pub fn visit_window(a: &Attraction, cfg: &PlannerConfig) -> (f64, f64) {
    (
        a.open_hour.max(cfg.day_start),
        a.close_hour.min(cfg.day_end),
    )
}

/// Earliest elapsed time, not before `now`, at which a visit of `a` can start
/// and finish inside its visit window. `None` when the window is shorter than
/// the visit.
pub fn earliest_start(now: f64, a: &Attraction, cfg: &PlannerConfig) -> Option<f64> {
    let (ws, we) = visit_window(a, cfg);
    if we - ws < a.visit_duration {
        return None;
    }
    let abs = cfg.day_start + now;
    let day = (abs / 24.0).floor();
    let tod = abs - day * 24.0;
    if tod > ws && tod + a.visit_duration <= we {
        return Some(now);
    }
    let opening = if tod <= ws { day } else { day + 1.0 } * 24.0 + ws;
    Some((opening - cfg.day_start).max(now))
}
