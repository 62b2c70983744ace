//! `itinerary` command-line tool: synthetic data generation, city
//! evaluation, itinerary planning and a distance helper.

mod settings;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use itinerary_core::dataset::{
    generate_synthetic, load_attractions, load_cities, load_indicators, write_attractions,
    write_cities, write_criteria, write_indicators, Dataset, GeoPoint,
};
use itinerary_core::planner::{plan_multistart, verify_plan};
use itinerary_core::report::{read_score_ids, route_geojson, write_scores, PlanReport};
use itinerary_core::{evaluate_cities, haversine_km, select_top_cities};

use settings::{ConfigFile, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "itinerary",
    version,
    about = "Rank cities and plan time-budgeted rail itineraries"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded synthetic dataset (four CSV files) to --out.
    Generate,
    /// Score cities from indicators.csv + criteria.csv and write scores.csv.
    Evaluate,
    /// Plan an itinerary and write plan.json and route.geojson.
    Plan,
    /// Print the great-circle distance between two coordinates in km.
    Distance {
        #[arg(allow_negative_numbers = true)]
        lat1: f64,
        #[arg(allow_negative_numbers = true)]
        lon1: f64,
        #[arg(allow_negative_numbers = true)]
        lat2: f64,
        #[arg(allow_negative_numbers = true)]
        lon2: f64,
    },
}

/// Every flag may also be set in the `--config` file under the same name.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory holding cities.csv, attractions.csv, indicators.csv, criteria.csv.
    #[arg(long, global = true, value_name = "DIR")]
    pub data: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub cities: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub attractions: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub indicators: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub criteria: Option<PathBuf>,
    /// Candidate cities for `plan`, taken from a scores file.
    #[arg(long, global = true, value_name = "PATH")]
    pub scores: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    pub n_cities: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub attractions_per_city: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub n_criteria: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub top_n: Option<usize>,
    #[arg(long, global = true, value_name = "F")]
    pub kmo_threshold: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub variance_target: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub budget_hours: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub day_start: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub day_end: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub rail_speed: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub rail_cost_rate: Option<f64>,
    #[arg(long, global = true, value_name = "F")]
    pub transfer_hours: Option<f64>,
    /// Attractions visited per city.
    #[arg(long, global = true, value_name = "N")]
    pub visits_per_city: Option<usize>,
    /// Number of entry cities tried by the planner.
    #[arg(long, global = true, value_name = "K")]
    pub multi_start: Option<usize>,
    /// Re-check the written plan and fail on any violated invariant.
    #[arg(long, global = true)]
    pub verify: bool,
}

fn init_logging() -> Result<()> {
    let level = match std::env::var("ITINERARY_LOG").as_deref() {
        Err(_) | Ok("") | Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        Ok(other) => bail!("ITINERARY_LOG must be quiet, info or debug, got `{other}`"),
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::FAILURE
        }
    }
}

fn one_line(e: &anyhow::Error) -> String {
    format!("{e:#}").replace('\n', " ")
}

fn run(cli: Cli) -> Result<()> {
    init_logging()?;
    let file = match &cli.flags.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let s = Settings::resolve(&cli.flags, &file)?;
    match cli.command {
        Command::Generate => generate(&s),
        Command::Evaluate => evaluate(&s),
        Command::Plan => plan(&s),
        Command::Distance {
            lat1,
            lon1,
            lat2,
            lon2,
        } => {
            let a = GeoPoint::new(lat1, lon1)?;
            let b = GeoPoint::new(lat2, lon2)?;
            println!("{:.6} km", haversine_km(a, b));
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn out_dir(s: &Settings) -> Result<&Path> {
    fs::create_dir_all(&s.out).with_context(|| format!("cannot create {}", s.out.display()))?;
    Ok(&s.out)
}

fn generate(s: &Settings) -> Result<()> {
    let data = generate_synthetic(s.seed, s.n_cities, s.attractions_per_city, s.n_criteria)?;
    let dir = out_dir(s)?;
    let path = |name: &str| dir.join(name);
    let io = |p: PathBuf| move |e: std::io::Error| anyhow::anyhow!("writing {}: {e}", p.display());

    let p = path("cities.csv");
    write_cities(create(&p)?, &data.cities).map_err(io(p))?;
    let p = path("attractions.csv");
    write_attractions(create(&p)?, &data.attractions).map_err(io(p))?;
    let p = path("indicators.csv");
    write_indicators(create(&p)?, &data.indicators).map_err(io(p))?;
    let p = path("criteria.csv");
    write_criteria(create(&p)?, data.indicators.criteria()).map_err(io(p))?;

    println!(
        "generated cities={} attractions={} criteria={} seed={} out={}",
        data.cities.len(),
        data.attractions.len(),
        data.indicators.n_cols(),
        s.seed,
        dir.display()
    );
    Ok(())
}

fn evaluate(s: &Settings) -> Result<()> {
    let x = load_indicators(&s.indicators, &s.criteria)?;
    let ev = evaluate_cities(&x, &s.decision)?;
    let top = select_top_cities(&ev.scores, s.decision.top_n);
    let path = out_dir(s)?.join("scores.csv");
    write_scores(create(&path)?, &top, ev.kmo)
        .with_context(|| format!("writing {}", path.display()))?;
    println!(
        "method={} kmo={:.3} cities={} selected={}",
        ev.method,
        ev.kmo,
        x.n_rows(),
        top.len()
    );
    if let Some(best) = top.first() {
        println!("top: {} score={:.4}", best.city_id, best.score);
    }
    Ok(())
}

/// Candidates for planning: an explicit scores file, else the top cities
/// from evaluating the indicators when they exist, else every city.
fn candidates(s: &Settings, ds: &Dataset) -> Result<Vec<String>> {
    if let Some(p) = &s.scores {
        let f = File::open(p).with_context(|| format!("missing file: {}", p.display()))?;
        let ids = read_score_ids(f).with_context(|| format!("reading {}", p.display()))?;
        log::info!("{} candidates from {}", ids.len(), p.display());
        return Ok(ids);
    }
    if s.indicators.exists() && s.criteria.exists() {
        let x = load_indicators(&s.indicators, &s.criteria)?;
        let ev = evaluate_cities(&x, &s.decision)?;
        let top = select_top_cities(&ev.scores, s.decision.top_n);
        log::info!(
            "{} candidates by {} (kmo {:.3})",
            top.len(),
            ev.method,
            ev.kmo
        );
        return Ok(top.into_iter().map(|c| c.city_id).collect());
    }
    log::info!("no indicators found; every city is a candidate");
    Ok(ds.cities().iter().map(|c| c.id.clone()).collect())
}

fn plan(s: &Settings) -> Result<()> {
    let cities = load_cities(&s.cities)?;
    let attractions = load_attractions(&s.attractions, &cities)?;
    let ds = Dataset::new(cities, attractions)?;
    let ids = candidates(s, &ds)?;
    let plan = plan_multistart(&ds, &ids, &s.planner)?;

    let dir = out_dir(s)?;
    let report = PlanReport::from(&plan);
    let plan_path = dir.join("plan.json");
    let mut w = create(&plan_path)?;
    w.write_all(report.to_json().as_bytes())
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", plan_path.display()))?;
    let geo_path = dir.join("route.geojson");
    let mut w = create(&geo_path)?;
    let geo = serde_json::to_string_pretty(&route_geojson(&plan, &ds))?;
    writeln!(w, "{geo}")
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", geo_path.display()))?;

    println!("route: {}", plan.visited_cities.join(" -> "));
    let names: Vec<String> = plan
        .legs
        .iter()
        .flat_map(|l| {
            l.visits
                .iter()
                .map(|v| format!("{} ({})", v.attraction_id, v.name))
        })
        .collect();
    println!(
        "attractions: {}",
        if names.is_empty() {
            "none".into()
        } else {
            names.join(", ")
        }
    );
    println!("total_hours={:.3}", plan.total_hours);
    println!("total_cost={:.2}", plan.total_cost);
    println!("attraction_count={}", plan.attraction_count);

    if s.verify {
        let mut problems = verify_plan(&plan, &ds, &s.planner);
        let text = fs::read_to_string(&plan_path)
            .with_context(|| format!("reading back {}", plan_path.display()))?;
        let back = PlanReport::from_json(&text)
            .with_context(|| format!("parsing {}", plan_path.display()))?;
        problems.extend(back.check_totals());
        if back != report {
            problems.push("plan.json does not read back to the written plan".into());
        }
        if back.total_hours > s.planner.total_budget {
            problems.push(format!(
                "plan.json total_hours exceeds budget {}",
                s.planner.total_budget
            ));
        }
        if !problems.is_empty() {
            bail!("verify failed: {}", problems.join("; "));
        }
        println!("verify: ok");
    }
    Ok(())
}
