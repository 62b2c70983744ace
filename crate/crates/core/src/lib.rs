//! City evaluation and time-budgeted itinerary planning.
//!
//! The crate is organised as a small pipeline:
//!
//! - [`dataset`]: city / attraction / indicator records, CSV ingestion and a
//!   seeded synthetic generator.
//! - [`mcda`]: correlation, the Kaiser-Meyer-Olkin statistic, PCA, entropy
//!   weights, TOPSIS and the KMO-gated [`mcda::evaluate_cities`] pipeline.
//! - [`geo`]: Haversine distance and the rail travel model.
//! - [`planner`]: greedy, multi-start and exhaustive itinerary construction
//!   under a wall-clock budget with daily visiting windows.
//! - [`report`]: score CSV, plan JSON and GeoJSON exports plus plan
//!   verification.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod geo;
pub mod mcda;
pub mod planner;
pub mod report;

pub use dataset::{Attraction, City, Criterion, Dataset, GeoPoint, IndicatorMatrix, Orientation};
pub use geo::{haversine_km, rail_leg, RailLeg, TravelRates};
pub use mcda::{evaluate_cities, select_top_cities, CityScore, DecisionConfig, Evaluation, Method};
pub use planner::{
    plan_exhaustive, plan_greedy, plan_multistart, ItineraryPlan, Leg, PlannerConfig,
};
