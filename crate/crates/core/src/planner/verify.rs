use std::collections::HashSet;

use crate::dataset::Dataset;
use crate::geo::rail_leg;

use super::{visit_window, ItineraryPlan, PlannerConfig};

/// Slack allowed when comparing reconstructed visit times with windows.
pub const TIME_TOLERANCE: f64 = 1e-9;

/// Checks every plan invariant against the dataset and config. Returns the
/// list of violations; empty means the plan is valid.
pub fn verify_plan(plan: &ItineraryPlan, ds: &Dataset, cfg: &PlannerConfig) -> Vec<String> {
    let mut errors = Vec::new();

    let hours = plan.legs.iter().fold(0.0, |acc, l| acc + l.hours());
    if hours != plan.total_hours {
        errors.push(format!(
            "total_hours {} != sum of legs {hours}",
            plan.total_hours
        ));
    }
    let cost = plan.legs.iter().fold(0.0, |acc, l| acc + l.leg_cost);
    if cost != plan.total_cost {
        errors.push(format!(
            "total_cost {} != sum of legs {cost}",
            plan.total_cost
        ));
    }
    let count: usize = plan.legs.iter().map(|l| l.visits.len()).sum();
    if count != plan.attraction_count || count != plan.visited_attractions.len() {
        errors.push(format!(
            "attraction_count {} disagrees with {count} visits",
            plan.attraction_count
        ));
    }
    if plan.total_hours > cfg.total_budget {
        errors.push(format!(
            "total_hours {} exceeds budget {}",
            plan.total_hours, cfg.total_budget
        ));
    }
    let mut seen = HashSet::new();
    for c in &plan.visited_cities {
        if !seen.insert(c) {
            errors.push(format!("city {c} visited twice"));
        }
    }
    if plan.visited_cities.first() != Some(&plan.entry_city) {
        errors.push("route does not start at the entry city".into());
    }

    let mut elapsed = 0.0;
    let mut previous: Option<&str> = None;
    for (k, leg) in plan.legs.iter().enumerate() {
        let tag = format!("leg {k} ({} -> {})", leg.from_city, leg.to_city);
        if leg.travel_hours < 0.0
            || leg.rest_hours < 0.0
            || leg.visit_hours < 0.0
            || leg.leg_cost < 0.0
        {
            errors.push(format!("{tag}: negative component"));
        }
        if leg.visits.is_empty() {
            errors.push(format!("{tag}: no attraction visited"));
        }
        let tickets = leg.ticket_cost();
        if leg.leg_cost != leg.rail_cost + tickets {
            errors.push(format!(
                "{tag}: leg_cost {} != rail {} + tickets {tickets}",
                leg.leg_cost, leg.rail_cost
            ));
        }
        let visit_sum = leg.visits.iter().fold(0.0, |acc, v| acc + v.visit_hours);
        if visit_sum != leg.visit_hours {
            errors.push(format!(
                "{tag}: visit_hours {} != {visit_sum}",
                leg.visit_hours
            ));
        }
        if leg.start_hours != elapsed {
            errors.push(format!(
                "{tag}: starts at {} but previous leg ended at {elapsed}",
                leg.start_hours
            ));
        }
        match previous {
            None if leg.from_city != leg.to_city || leg.travel_hours != 0.0 => {
                errors.push(format!(
                    "{tag}: first leg must tour the entry city without travel"
                ));
            }
            Some(p) if p != leg.from_city => {
                errors.push(format!(
                    "{tag}: departs from {} but traveller is in {p}",
                    leg.from_city
                ));
            }
            _ => {}
        }
        if previous.is_some() {
            match (ds.city(&leg.from_city), ds.city(&leg.to_city)) {
                (Some(a), Some(b)) => {
                    let r = rail_leg(a.location, b.location, &cfg.rates);
                    if r.hours != leg.travel_hours || r.cost != leg.rail_cost {
                        errors.push(format!("{tag}: travel does not match the rail model"));
                    }
                }
                _ => errors.push(format!("{tag}: unknown city")),
            }
        }

        let mut cursor = leg.start_hours + leg.travel_hours;
        for v in &leg.visits {
            let Some(a) = ds.attractions().iter().find(|a| a.id == v.attraction_id) else {
                errors.push(format!("{tag}: unknown attraction {}", v.attraction_id));
                continue;
            };
            if a.city_id != leg.to_city {
                errors.push(format!(
                    "{tag}: attraction {} is not in {}",
                    a.id, leg.to_city
                ));
            }
            if v.start_hours + TIME_TOLERANCE < cursor {
                errors.push(format!(
                    "{tag}: visit {} overlaps the previous activity",
                    a.id
                ));
            }
            let (ws, we) = visit_window(a, cfg);
            let abs = cfg.day_start + v.start_hours;
            let day = ((abs + TIME_TOLERANCE) / 24.0).floor();
            let tod = abs - day * 24.0;
            if tod + TIME_TOLERANCE < ws || tod + v.visit_hours > we + TIME_TOLERANCE {
                errors.push(format!(
                    "{tag}: visit {} at {:.4}h of day falls outside [{ws}, {we}]",
                    a.id, tod
                ));
            }
            cursor = v.start_hours + v.visit_hours;
        }
        elapsed += leg.hours();
        if (cursor - elapsed).abs() > TIME_TOLERANCE {
            errors.push(format!(
                "{tag}: last visit ends at {cursor} but leg ends at {elapsed}"
            ));
        }
        previous = Some(&leg.to_city);
    }
    errors
}
