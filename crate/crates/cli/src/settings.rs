//! Run settings: command-line flags over a flat `key = value` config file
//! over built-in defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

use itinerary_core::{DecisionConfig, PlannerConfig, TravelRates};

use crate::Flags;

const KEYS: &[&str] = &[
    "data",
    "cities",
    "attractions",
    "indicators",
    "criteria",
    "scores",
    "out",
    "seed",
    "n-cities",
    "attractions-per-city",
    "n-criteria",
    "top-n",
    "kmo-threshold",
    "variance-target",
    "budget-hours",
    "day-start",
    "day-end",
    "rail-speed",
    "rail-cost-rate",
    "transfer-hours",
    "visits-per-city",
    "multi-start",
    "verify",
];

/// Parsed config file. Keys are normalised to the flag spelling
/// (`budget_hours` and `budget-hours` are the same key).
#[derive(Debug, Default)]
pub struct ConfigFile {
    path: Option<PathBuf>,
    values: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("missing file: {}", path.display()))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = || format!("{}:{}", path.display(), i + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}: expected `key = value`", at()))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("{}: unknown key `{}`", at(), k.trim());
            }
            let value = v.trim().trim_matches('"').to_string();
            if values.insert(key, (i + 1, value)).is_some() {
                bail!("{}: duplicate key `{}`", at(), k.trim());
            }
        }
        Ok(Self {
            path: Some(path.to_path_buf()),
            values,
        })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let Some((line, raw)) = self.values.get(key) else {
            return Ok(None);
        };
        let path = self.path.as_deref().unwrap_or(Path::new("config"));
        raw.parse()
            .map(Some)
            .map_err(|e| anyhow!("{}:{line}: bad value for `{key}`: {e}", path.display()))
    }
}

/// Fully resolved settings for one command.
#[derive(Debug)]
pub struct Settings {
    pub cities: PathBuf,
    pub attractions: PathBuf,
    pub indicators: PathBuf,
    pub criteria: PathBuf,
    pub scores: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub n_cities: usize,
    pub attractions_per_city: usize,
    pub n_criteria: usize,
    pub decision: DecisionConfig,
    pub planner: PlannerConfig,
    pub verify: bool,
}

/// Dataset shape written by `generate` unless overridden: 352 cities with
/// 100 attractions each and six criteria.
const DEFAULT_SHAPE: (usize, usize, usize) = (352, 100, 6);
const DEFAULT_SEED: u64 = 1;

impl Settings {
    pub fn resolve(f: &Flags, c: &ConfigFile) -> Result<Self> {
        fn pick<T: FromStr + Clone>(
            flag: &Option<T>,
            c: &ConfigFile,
            key: &str,
            default: T,
        ) -> Result<T>
        where
            T::Err: Display,
        {
            Ok(match flag {
                Some(v) => v.clone(),
                None => c.get(key)?.unwrap_or(default),
            })
        }

        let data: PathBuf = pick(&f.data, c, "data", PathBuf::from("."))?;
        let file =
            |flag: &Option<PathBuf>, key: &str| pick(flag, c, key, data.join(format!("{key}.csv")));

        let decision_default = DecisionConfig::default();
        let decision = DecisionConfig {
            kmo_threshold: pick(
                &f.kmo_threshold,
                c,
                "kmo-threshold",
                decision_default.kmo_threshold,
            )?,
            pca_variance_target: pick(
                &f.variance_target,
                c,
                "variance-target",
                decision_default.pca_variance_target,
            )?,
            top_n: pick(&f.top_n, c, "top-n", decision_default.top_n)?,
        };
        decision.validate()?;

        let pd = PlannerConfig::default();
        let planner = PlannerConfig {
            total_budget: pick(&f.budget_hours, c, "budget-hours", pd.total_budget)?,
            day_start: pick(&f.day_start, c, "day-start", pd.day_start)?,
            day_end: pick(&f.day_end, c, "day-end", pd.day_end)?,
            rates: TravelRates {
                rail_speed: pick(&f.rail_speed, c, "rail-speed", pd.rates.rail_speed)?,
                rail_cost_rate: pick(
                    &f.rail_cost_rate,
                    c,
                    "rail-cost-rate",
                    pd.rates.rail_cost_rate,
                )?,
                local_transfer_time: pick(
                    &f.transfer_hours,
                    c,
                    "transfer-hours",
                    pd.rates.local_transfer_time,
                )?,
            },
            attractions_per_city: pick(
                &f.visits_per_city,
                c,
                "visits-per-city",
                pd.attractions_per_city,
            )?,
            multi_start_k: pick(&f.multi_start, c, "multi-start", pd.multi_start_k)?,
        };
        planner.validate()?;

        Ok(Self {
            cities: file(&f.cities, "cities")?,
            attractions: file(&f.attractions, "attractions")?,
            indicators: file(&f.indicators, "indicators")?,
            criteria: file(&f.criteria, "criteria")?,
            scores: match &f.scores {
                Some(p) => Some(p.clone()),
                None => c.get("scores")?,
            },
            out: pick(&f.out, c, "out", PathBuf::from("out"))?,
            seed: pick(&f.seed, c, "seed", DEFAULT_SEED)?,
            n_cities: pick(&f.n_cities, c, "n-cities", DEFAULT_SHAPE.0)?,
            attractions_per_city: pick(
                &f.attractions_per_city,
                c,
                "attractions-per-city",
                DEFAULT_SHAPE.1,
            )?,
            n_criteria: pick(&f.n_criteria, c, "n-criteria", DEFAULT_SHAPE.2)?,
            decision,
            planner,
            verify: f.verify || c.get("verify")?.unwrap_or(false),
        })
    }
}
