//! File exports: score CSV, plan JSON and route GeoJSON.

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dataset::Dataset;
use crate::mcda::CityScore;
use crate::planner::ItineraryPlan;

pub const SCORES_HEADER: [&str; 5] = ["city_id", "score", "method", "rank", "kmo"];

pub fn write_scores<W: Write>(out: W, scores: &[CityScore], kmo: f64) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| std::io::Error::other(e.to_string());
    w.write_record(SCORES_HEADER).map_err(io)?;
    for s in scores {
        w.write_record([
            s.city_id.as_str(),
            &s.score.to_string(),
            &s.method.to_string(),
            &s.rank.to_string(),
            &kmo.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
}

/// City ids from a scores file, in file order (best first as written by
/// [`write_scores`]).
pub fn read_score_ids<R: Read>(input: R) -> std::io::Result<Vec<String>> {
    let invalid = |msg: String| std::io::Error::new(std::io::ErrorKind::InvalidData, msg);
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr.headers().map_err(|e| invalid(e.to_string()))?.clone();
    if header.iter().ne(SCORES_HEADER) {
        return Err(invalid(format!(
            "expected header {}, found {}",
            SCORES_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut ids = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| invalid(e.to_string()))?;
        ids.push(record[0].to_string());
    }
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractionReport {
    pub id: String,
    pub name: String,
    pub rating: f64,
    pub ticket_price: f64,
    pub visit_hours: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegReport {
    pub from: String,
    pub to: String,
    pub travel_hours: f64,
    pub rest_hours: f64,
    pub attractions: Vec<AttractionReport>,
    pub leg_cost: f64,
}

impl LegReport {
    pub fn visit_hours(&self) -> f64 {
        self.attractions
            .iter()
            .fold(0.0, |acc, a| acc + a.visit_hours)
    }

    pub fn hours(&self) -> f64 {
        self.travel_hours + self.rest_hours + self.visit_hours()
    }
}

/// The `plan.json` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanReport {
    pub entry_city: String,
    pub legs: Vec<LegReport>,
    pub total_hours: f64,
    pub total_cost: f64,
    pub attraction_count: usize,
    pub visited_cities: Vec<String>,
}

impl From<&ItineraryPlan> for PlanReport {
    fn from(p: &ItineraryPlan) -> Self {
        Self {
            entry_city: p.entry_city.clone(),
            legs: p
                .legs
                .iter()
                .map(|l| LegReport {
                    from: l.from_city.clone(),
                    to: l.to_city.clone(),
                    travel_hours: l.travel_hours,
                    rest_hours: l.rest_hours,
                    attractions: l
                        .visits
                        .iter()
                        .map(|v| AttractionReport {
                            id: v.attraction_id.clone(),
                            name: v.name.clone(),
                            rating: v.rating,
                            ticket_price: v.ticket_price,
                            visit_hours: v.visit_hours,
                        })
                        .collect(),
                    leg_cost: l.leg_cost,
                })
                .collect(),
            total_hours: p.total_hours,
            total_cost: p.total_cost,
            attraction_count: p.attraction_count,
            visited_cities: p.visited_cities.clone(),
        }
    }
}

impl PlanReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Re-derives the totals from the legs array. Empty when consistent.
    pub fn check_totals(&self) -> Vec<String> {
        let mut errors = Vec::new();
        let hours = self.legs.iter().fold(0.0, |acc, l| acc + l.hours());
        if hours != self.total_hours {
            errors.push(format!(
                "total_hours {} != {hours} from legs",
                self.total_hours
            ));
        }
        let cost = self.legs.iter().fold(0.0, |acc, l| acc + l.leg_cost);
        if cost != self.total_cost {
            errors.push(format!(
                "total_cost {} != {cost} from legs",
                self.total_cost
            ));
        }
        let count: usize = self.legs.iter().map(|l| l.attractions.len()).sum();
        if count != self.attraction_count {
            errors.push(format!(
                "attraction_count {} != {count} from legs",
                self.attraction_count
            ));
        }
        let route: Vec<String> = if self.legs.is_empty() {
            vec![self.entry_city.clone()]
        } else {
            self.legs.iter().map(|l| l.to.clone()).collect()
        };
        if route != self.visited_cities {
            errors.push("visited_cities does not match the legs".into());
        }
        let distinct: HashSet<&String> = self.visited_cities.iter().collect();
        if distinct.len() != self.visited_cities.len() {
            errors.push("visited_cities repeats a city".into());
        }
        for l in &self.legs {
            if l.travel_hours < 0.0 || l.rest_hours < 0.0 || l.leg_cost < 0.0 {
                errors.push(format!(
                    "leg {} -> {} has a negative component",
                    l.from, l.to
                ));
            }
        }
        errors
    }
}

/// FeatureCollection with the route as a LineString (when it has at least
/// two cities) and one Point per visited city. Coordinates are `[lon, lat]`.
pub fn route_geojson(plan: &ItineraryPlan, ds: &Dataset) -> Value {
    let mut features = Vec::new();
    let coords: Vec<Value> = plan
        .visited_cities
        .iter()
        .filter_map(|id| ds.city(id))
        .map(|c| json!([c.location.lon(), c.location.lat()]))
        .collect();
    if coords.len() >= 2 {
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": coords },
            "properties": { "kind": "route", "cities": plan.visited_cities.len() },
        }));
    }
    for (order, id) in plan.visited_cities.iter().enumerate() {
        let Some(city) = ds.city(id) else { continue };
        let arrival = plan
            .legs
            .iter()
            .find(|l| &l.to_city == id)
            .map_or(0.0, |l| l.arrival_hours);
        features.push(json!({
            "type": "Feature",
            "geometry": {
                "type": "Point",
                "coordinates": [city.location.lon(), city.location.lat()],
            },
            "properties": {
                "kind": "city",
                "id": city.id,
                "name": city.name,
                "order": order + 1,
                "arrival_elapsed_hours": arrival,
            },
        }));
    }
    json!({ "type": "FeatureCollection", "features": features })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attraction, City, GeoPoint};
    use crate::mcda::Method;
    use crate::planner::{plan_greedy, PlannerConfig};

    fn dataset() -> Dataset {
        let cities = vec![
            City {
                id: "a".into(),
                name: "Alpha".into(),
                location: GeoPoint::new(30.0, 100.0).unwrap(),
            },
            City {
                id: "b".into(),
                name: "Beta".into(),
                location: GeoPoint::new(31.0, 101.0).unwrap(),
            },
        ];
        let attractions = ["a", "b"]
            .iter()
            .enumerate()
            .map(|(i, c)| Attraction {
                id: format!("{c}1"),
                city_id: c.to_string(),
                name: format!("Sight {c}"),
                rating: 4.0 + 0.1 * i as f64,
                ticket_price: 30.0,
                visit_duration: 1.5,
                open_hour: 8.0,
                close_hour: 18.0,
            })
            .collect();
        Dataset::new(cities, attractions).unwrap()
    }

    #[test]
    fn scores_csv_layout() {
        let scores = vec![CityScore {
            city_id: "a".into(),
            score: 0.75,
            method: Method::EntropyTopsis,
            rank: 1,
        }];
        let mut buf = Vec::new();
        write_scores(&mut buf, &scores, 0.5).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "city_id,score,method,rank,kmo\na,0.75,entropy_topsis,1,0.5\n"
        );
    }

    #[test]
    fn scores_read_back_in_order() {
        let text = "city_id,score,method,rank,kmo\nb,1,pca,1,0.7\na,0.5,pca,2,0.7\n";
        assert_eq!(read_score_ids(text.as_bytes()).unwrap(), ["b", "a"]);
        assert!(read_score_ids("id,score\n".as_bytes()).is_err());
    }

    #[test]
    fn plan_json_keys_and_roundtrip() {
        let ds = dataset();
        let plan = plan_greedy(&ds, &["a", "b"], &PlannerConfig::default()).unwrap();
        let report = PlanReport::from(&plan);
        let text = report.to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "attraction_count",
                "entry_city",
                "legs",
                "total_cost",
                "total_hours",
                "visited_cities"
            ]
        );
        let leg = v["legs"][0].as_object().unwrap();
        let mut leg_keys: Vec<_> = leg.keys().cloned().collect();
        leg_keys.sort();
        assert_eq!(
            leg_keys,
            [
                "attractions",
                "from",
                "leg_cost",
                "rest_hours",
                "to",
                "travel_hours"
            ]
        );
        let back = PlanReport::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert!(back.check_totals().is_empty());
    }

    #[test]
    fn tampered_totals_detected() {
        let ds = dataset();
        let plan = plan_greedy(&ds, &["a", "b"], &PlannerConfig::default()).unwrap();
        let mut report = PlanReport::from(&plan);
        report.total_cost += 1.0;
        report.attraction_count += 1;
        assert_eq!(report.check_totals().len(), 2);
    }

    #[test]
    fn geojson_single_city_has_one_point() {
        let ds = dataset();
        let plan = plan_greedy(&ds, &["a"], &PlannerConfig::default()).unwrap();
        let g = route_geojson(&plan, &ds);
        let features = g["features"].as_array().unwrap();
        assert_eq!(features.len(), 1);
        assert_eq!(features[0]["geometry"]["type"], "Point");
        assert_eq!(features[0]["geometry"]["coordinates"], json!([100.0, 30.0]));
    }

    #[test]
    fn geojson_route_line() {
        let ds = dataset();
        let plan = plan_greedy(&ds, &["a", "b"], &PlannerConfig::default()).unwrap();
        assert_eq!(plan.visited_cities.len(), 2);
        let g = route_geojson(&plan, &ds);
        let features = g["features"].as_array().unwrap();
        assert_eq!(features.len(), 3);
        assert_eq!(features[0]["geometry"]["type"], "LineString");
        assert_eq!(
            features[0]["geometry"]["coordinates"]
                .as_array()
                .unwrap()
                .len(),
            2
        );
        assert_eq!(features[2]["properties"]["order"], 2);
    }
}
