use std::cmp::Ordering;

use rayon::prelude::*;

use crate::dataset::{City, Dataset};

use super::{
    entry_cmp, objective_cmp, resolve_candidates, simulate_leg, ItineraryPlan, Leg, PlanError,
    PlannerConfig,
};

/// Largest candidate set [`plan_exhaustive`] accepts.
pub const MAX_EXHAUSTIVE_CITIES: usize = 8;

/// Greedy next-leg preference: cheaper leg, then higher summed rating, then
/// smaller city id.
fn leg_cmp(a: &Leg, b: &Leg) -> Ordering {
    a.leg_cost
        .total_cmp(&b.leg_cost)
        .then(b.rating_sum().total_cmp(&a.rating_sum()))
        .then_with(|| a.to_city.cmp(&b.to_city))
}

/// Runs the greedy construction from a fixed entry city.
///
/// If not even the entry city can be toured the plan has no legs. Otherwise
/// every unvisited candidate is simulated from the current position and the
/// cheapest feasible leg is taken, until none is feasible.
pub fn plan_greedy_from<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    entry: &str,
    cfg: &PlannerConfig,
) -> Result<ItineraryPlan, PlanError> {
    cfg.validate()?;
    let cities = resolve_candidates(ds, candidates)?;
    let entry = ds
        .city(entry)
        .ok_or_else(|| PlanError::UnknownCity(entry.to_string()))?;
    Ok(greedy_from(ds, &cities, entry, cfg))
}

fn greedy_from(ds: &Dataset, cities: &[&City], entry: &City, cfg: &PlannerConfig) -> ItineraryPlan {
    let Some(first) = simulate_leg(ds, None, entry, 0.0, cfg) else {
        log::debug!("entry city {} cannot be toured within the budget", entry.id);
        return ItineraryPlan::from_legs(entry.id.clone(), Vec::new());
    };
    let mut visited = vec![false; cities.len()];
    if let Some(i) = cities.iter().position(|c| c.id == entry.id) {
        visited[i] = true;
    }
    let mut elapsed = first.hours();
    let mut current = entry;
    let mut legs = vec![first];
    loop {
        let best = cities
            .iter()
            .enumerate()
            .filter(|(i, _)| !visited[*i])
            .filter_map(|(i, c)| simulate_leg(ds, Some(current), c, elapsed, cfg).map(|l| (i, l)))
            .min_by(|(_, a), (_, b)| leg_cmp(a, b));
        let Some((i, leg)) = best else {
            break;
        };
        log::debug!(
            "greedy: {} -> {} cost {:.2} at {:.2} h",
            leg.from_city,
            leg.to_city,
            leg.leg_cost,
            elapsed
        );
        visited[i] = true;
        elapsed += leg.hours();
        current = cities[i];
        legs.push(leg);
    }
    ItineraryPlan::from_legs(entry.id.clone(), legs)
}

/// Greedy itinerary starting from the city with the best attraction.
pub fn plan_greedy<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    cfg: &PlannerConfig,
) -> Result<ItineraryPlan, PlanError> {
    cfg.validate()?;
    let cities = resolve_candidates(ds, candidates)?;
    let entry = cities
        .iter()
        .min_by(|a, b| entry_cmp(ds, a, b))
        .ok_or(PlanError::EmptyCandidateSet)?;
    Ok(greedy_from(ds, &cities, entry, cfg))
}

/// The `k` candidate cities hosting the best attractions, best first.
pub fn multistart_entries<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    k: usize,
) -> Result<Vec<String>, PlanError> {
    let mut cities = resolve_candidates(ds, candidates)?;
    if cities.is_empty() {
        return Err(PlanError::EmptyCandidateSet);
    }
    cities.sort_by(|a, b| entry_cmp(ds, a, b));
    Ok(cities.into_iter().take(k).map(|c| c.id.clone()).collect())
}

/// Best greedy plan over `multi_start_k` entry cities. Entries are planned
/// in parallel; the objective is a total order, so the result does not
/// depend on scheduling.
pub fn plan_multistart<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    cfg: &PlannerConfig,
) -> Result<ItineraryPlan, PlanError> {
    cfg.validate()?;
    let cities = resolve_candidates(ds, candidates)?;
    let entries = multistart_entries(ds, candidates, cfg.multi_start_k)?;
    let plans: Vec<ItineraryPlan> = entries
        .par_iter()
        .map(|id| {
            let entry = ds.city(id).expect("entry resolved from candidates");
            greedy_from(ds, &cities, entry, cfg)
        })
        .collect();
    Ok(plans
        .into_iter()
        .min_by(objective_cmp)
        .expect("at least one entry city"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExhaustiveStats {
    /// Feasible ordered city sequences examined (non-empty ones).
    pub sequences: usize,
}

/// Objective-optimal plan over every ordered subset of the candidates.
pub fn plan_exhaustive<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    cfg: &PlannerConfig,
) -> Result<ItineraryPlan, PlanError> {
    plan_exhaustive_with_stats(ds, candidates, cfg).map(|(p, _)| p)
}

struct Search<'a> {
    ds: &'a Dataset,
    cities: &'a [&'a City],
    cfg: &'a PlannerConfig,
    used: Vec<bool>,
    path: Vec<Leg>,
    best: Option<ItineraryPlan>,
    stats: ExhaustiveStats,
}

impl Search<'_> {
    fn offer(&mut self, plan: ItineraryPlan) {
        let better = match &self.best {
            None => true,
            Some(b) => objective_cmp(&plan, b) == Ordering::Less,
        };
        if better {
            self.best = Some(plan);
        }
    }

    fn extend(&mut self, elapsed: f64) {
        let current = self.path.last().map(|l| l.to_city.clone());
        for i in 0..self.cities.len() {
            if self.used[i] {
                continue;
            }
            let from = current.as_deref().and_then(|id| self.ds.city(id));
            let Some(leg) = simulate_leg(self.ds, from, self.cities[i], elapsed, self.cfg) else {
                if current.is_none() {
                    let entry_only =
                        ItineraryPlan::from_legs(self.cities[i].id.clone(), Vec::new());
                    self.offer(entry_only);
                }
                continue;
            };
            let next = elapsed + leg.hours();
            self.used[i] = true;
            self.path.push(leg);
            self.stats.sequences += 1;
            let entry = self.path[0].to_city.clone();
            self.offer(ItineraryPlan::from_legs(entry, self.path.clone()));
            self.extend(next);
            self.path.pop();
            self.used[i] = false;
        }
    }
}

/// [`plan_exhaustive`] plus the number of sequences it enumerated.
pub fn plan_exhaustive_with_stats<S: AsRef<str>>(
    ds: &Dataset,
    candidates: &[S],
    cfg: &PlannerConfig,
) -> Result<(ItineraryPlan, ExhaustiveStats), PlanError> {
    cfg.validate()?;
    let cities = resolve_candidates(ds, candidates)?;
    if cities.len() > MAX_EXHAUSTIVE_CITIES {
        return Err(PlanError::TooManyCities {
            n: cities.len(),
            max: MAX_EXHAUSTIVE_CITIES,
        });
    }
    if cities.is_empty() {
        return Err(PlanError::EmptyCandidateSet);
    }
    let mut search = Search {
        ds,
        cities: &cities,
        cfg,
        used: vec![false; cities.len()],
        path: Vec::new(),
        best: None,
        stats: ExhaustiveStats::default(),
    };
    search.extend(0.0);
    let best = search
        .best
        .expect("every candidate yields at least an entry-only plan");
    Ok((best, search.stats))
}
