use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn itinerary(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itinerary"))
        .current_dir(dir)
        .env_remove("ITINERARY_LOG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: Output) -> String {
    assert!(o.status.success(), "stderr: {}", stderr(&o));
    stdout(&o)
}

fn fails_with(o: Output, needle: &str) {
    assert!(!o.status.success());
    let err = stderr(&o);
    assert_eq!(
        err.lines().count(),
        1,
        "diagnostic should be one line: {err}"
    );
    assert!(err.contains(needle), "`{needle}` not in: {err}");
}

const SMALL: &[&str] = &[
    "--n-cities",
    "12",
    "--attractions-per-city",
    "4",
    "--n-criteria",
    "4",
];

#[test]
fn generate_writes_reloadable_deterministic_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let names = [
        "cities.csv",
        "attractions.csv",
        "indicators.csv",
        "criteria.csv",
    ];
    ok(itinerary(
        dir,
        &[&["generate", "--seed", "9", "--out", "a"], SMALL].concat(),
    ));
    ok(itinerary(
        dir,
        &[&["generate", "--seed", "9", "--out", "b"], SMALL].concat(),
    ));
    for n in names {
        let a = fs::read(dir.join("a").join(n)).unwrap();
        assert_eq!(a, fs::read(dir.join("b").join(n)).unwrap(), "{n}");
    }
    ok(itinerary(dir, &["evaluate", "--data", "a", "--out", "a"]));
    ok(itinerary(
        dir,
        &["plan", "--data", "a", "--out", "a", "--verify"],
    ));
}

#[test]
fn generate_rejects_single_criterion() {
    let tmp = tempfile::tempdir().unwrap();
    fails_with(
        itinerary(tmp.path(), &["generate", "--n-criteria", "1"]),
        "invalid parameter",
    );
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn two_criteria_route_to_topsis() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    // Pearson r between the two columns is exactly 0.9.
    write(
        dir,
        "indicators.csv",
        "city_id,x,y\na,1,2\nb,2,1\nc,3,3\nd,4,4\ne,5,5\n",
    );
    write(
        dir,
        "criteria.csv",
        "name,orientation\nx,benefit\ny,benefit\n",
    );
    let out = ok(itinerary(dir, &["evaluate", "--top-n", "3"]));
    assert!(out.contains("method=entropy_topsis kmo=0.500"), "{out}");
    let scores = fs::read_to_string(dir.join("out/scores.csv")).unwrap();
    let lines: Vec<&str> = scores.lines().collect();
    assert_eq!(lines[0], "city_id,score,method,rank,kmo");
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines[1].starts_with("e,1,entropy_topsis,1,"));

    let out = ok(itinerary(dir, &["evaluate", "--top-n", "50"]));
    assert!(out.contains("selected=5"));
    assert_eq!(
        fs::read_to_string(dir.join("out/scores.csv"))
            .unwrap()
            .lines()
            .count(),
        6
    );
}

#[test]
fn evaluation_errors_name_the_cause() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fails_with(itinerary(dir, &["evaluate"]), "missing file");
    write(dir, "indicators.csv", "city_id,x,y\na,1,2\nb,1,1\nc,1,3\n");
    write(dir, "criteria.csv", "name,orientation\nx,benefit\ny,cost\n");
    fails_with(itinerary(dir, &["evaluate"]), "criterion `x` is constant");
    write(
        dir,
        "indicators.csv",
        "city_id,x,y\na,1,2\nb,oops,1\nc,1,3\n",
    );
    fails_with(itinerary(dir, &["evaluate"]), "line 3");
}

const FIVE_CITIES: &str = "id,name,lat,lon
bj,Beijing,39.9042,116.4074
tj,Tianjin,39.3434,117.3616
jn,Jinan,36.6512,117.1201
zz,Zhengzhou,34.7466,113.6253
sh,Shanghai,31.2304,121.4737
";

const FIVE_SIGHTS: &str =
    "id,city_id,name,rating,ticket_price,visit_duration_h,open_hour,close_hour
bj1,bj,Fragrant Hills,4.6,10,3,6,18
tj1,tj,Panshan,4.7,100,4,7,17
jn1,jn,Thousand Buddha Hill,4.5,30,2,7,18
jn2,jn,Mount Tai,4.9,115,6,6,18
zz1,zz,Songshan,4.8,80,5,8,17.5
sh1,sh,Sheshan,4.2,0,2,8,17
";

#[test]
fn plan_json_totals_resum_from_legs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "cities.csv", FIVE_CITIES);
    write(dir, "attractions.csv", FIVE_SIGHTS);
    let out = ok(itinerary(dir, &["plan", "--verify"]));
    assert!(out.contains("verify: ok"));
    for field in [
        "route:",
        "attractions:",
        "total_hours=",
        "total_cost=",
        "attraction_count=",
    ] {
        assert!(out.contains(field), "{field} missing from {out}");
    }

    let plan: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/plan.json")).unwrap()).unwrap();
    let legs = plan["legs"].as_array().unwrap();
    let mut hours = 0.0;
    let mut cost = 0.0;
    let mut count = 0;
    for leg in legs {
        let sights = leg["attractions"].as_array().unwrap();
        let visit: f64 = sights
            .iter()
            .map(|a| a["visit_hours"].as_f64().unwrap())
            .sum();
        hours +=
            leg["travel_hours"].as_f64().unwrap() + leg["rest_hours"].as_f64().unwrap() + visit;
        cost += leg["leg_cost"].as_f64().unwrap();
        count += sights.len();
    }
    assert!((hours - plan["total_hours"].as_f64().unwrap()).abs() < 1e-9);
    assert!((cost - plan["total_cost"].as_f64().unwrap()).abs() < 1e-9);
    assert_eq!(count as u64, plan["attraction_count"].as_u64().unwrap());
    assert!(plan["total_hours"].as_f64().unwrap() <= 144.0);
    // Mount Tai is the best sight, so Jinan is the entry city.
    assert_eq!(plan["entry_city"], "jn");
    assert_eq!(plan["visited_cities"][0], "jn");

    let printed: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("total_hours="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(printed <= 144.0);

    let geo: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/route.geojson")).unwrap()).unwrap();
    let features = geo["features"].as_array().unwrap();
    let n = plan["visited_cities"].as_array().unwrap().len();
    assert_eq!(features.len(), n + usize::from(n >= 2));
}

#[test]
fn single_city_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "cities.csv", "id,name,lat,lon\nx,Solo,30,110\n");
    write(
        dir,
        "attractions.csv",
        "id,city_id,name,rating,ticket_price,visit_duration_h,open_hour,close_hour\nx1,x,Peak,4.4,20,2,8,18\n",
    );
    let out = ok(itinerary(dir, &["plan", "--verify"]));
    assert!(out.contains("route: x\n"));
    assert!(out.contains("attraction_count=1"));
    let geo: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/route.geojson")).unwrap()).unwrap();
    assert_eq!(geo["type"], "FeatureCollection");
    let features = geo["features"].as_array().unwrap();
    assert_eq!(features.len(), 1);
    assert_eq!(features[0]["geometry"]["type"], "Point");
    assert_eq!(features[0]["properties"]["name"], "Solo");
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "cities.csv", FIVE_CITIES);
    write(dir, "attractions.csv", FIVE_SIGHTS);
    write(dir, "run.cfg", "budget_hours = 7\nout = cfg-out\n");
    // 7 h only fits the Mount Tai visit.
    let out = ok(itinerary(dir, &["plan", "--config", "run.cfg"]));
    assert!(out.contains("attraction_count=1"), "{out}");
    assert!(dir.join("cfg-out/plan.json").exists());
    let out = ok(itinerary(
        dir,
        &["plan", "--config", "run.cfg", "--budget-hours", "144"],
    ));
    assert!(!out.contains("attraction_count=1\n"), "{out}");
}

#[test]
fn unknown_candidates_and_empty_scores() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "cities.csv", FIVE_CITIES);
    write(dir, "attractions.csv", FIVE_SIGHTS);
    write(dir, "scores.csv", "city_id,score,method,rank,kmo\n");
    fails_with(
        itinerary(dir, &["plan", "--scores", "scores.csv"]),
        "no candidate city",
    );
    write(
        dir,
        "scores.csv",
        "city_id,score,method,rank,kmo\nxx,1,pca,1,0.9\n",
    );
    fails_with(
        itinerary(dir, &["plan", "--scores", "scores.csv"]),
        "unknown candidate city `xx`",
    );
}

#[test]
fn distance_and_logging() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ok(itinerary(tmp.path(), &["distance", "0", "0", "1", "0"]));
    assert_eq!(out, "111.194927 km\n");
    let o = Command::new(env!("CARGO_BIN_EXE_itinerary"))
        .env("ITINERARY_LOG", "loud")
        .args(["distance", "0", "0", "0", "0"])
        .output()
        .unwrap();
    fails_with(o, "ITINERARY_LOG");
    let o = Command::new(env!("CARGO_BIN_EXE_itinerary"))
        .env("ITINERARY_LOG", "info")
        .args(["distance", "-10", "-20", "-10", "-20"])
        .output()
        .unwrap();
    assert_eq!(ok(o), "0.000000 km\n");
}
