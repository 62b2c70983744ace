use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Attraction, City, Criterion, DatasetError, GeoPoint, IndicatorMatrix, Orientation};

pub const CITIES_HEADER: [&str; 4] = ["id", "name", "lat", "lon"];
pub const ATTRACTIONS_HEADER: [&str; 8] = [
    "id",
    "city_id",
    "name",
    "rating",
    "ticket_price",
    "visit_duration_h",
    "open_hour",
    "close_hour",
];
pub const CRITERIA_HEADER: [&str; 2] = ["name", "orientation"];

/// Free-text columns carried by scraped attraction data; accepted and ignored.
const IGNORED_ATTRACTION_COLUMNS: [&str; 2] = ["address", "description"];

fn open(path: &Path) -> Result<File, DatasetError> {
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.to_path_buf()));
    }
    File::open(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input)
}

fn csv_error(source_name: &str, err: csv::Error) -> DatasetError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    DatasetError::Row {
        source_name: source_name.to_string(),
        line,
        message: err.to_string(),
    }
}

fn headers<R: Read>(
    rdr: &mut csv::Reader<R>,
    source_name: &str,
) -> Result<Vec<String>, DatasetError> {
    let h = rdr.headers().map_err(|e| csv_error(source_name, e))?;
    Ok(h.iter().map(|s| s.trim().to_string()).collect())
}

fn schema_error(source_name: &str, expected: &[&str], found: &[String]) -> DatasetError {
    DatasetError::Schema {
        source_name: source_name.to_string(),
        expected: expected.join(","),
        found: found.join(","),
    }
}

struct RowCtx<'a> {
    source_name: &'a str,
    line: u64,
}

impl RowCtx<'_> {
    fn err(&self, message: impl Into<String>) -> DatasetError {
        DatasetError::Row {
            source_name: self.source_name.to_string(),
            line: self.line,
            message: message.into(),
        }
    }

    fn number(&self, field: &str, raw: &str) -> Result<f64, DatasetError> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(self.err(format!("missing value for `{field}`")));
        }
        let v: f64 = raw
            .parse()
            .map_err(|_| self.err(format!("`{field}`: not a number: `{raw}`")))?;
        if !v.is_finite() {
            return Err(self.err(format!("`{field}`: non-finite value `{raw}`")));
        }
        Ok(v)
    }

    fn text(&self, field: &str, raw: &str) -> Result<String, DatasetError> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(self.err(format!("empty `{field}`")));
        }
        Ok(raw.to_string())
    }
}

pub fn load_cities(path: &Path) -> Result<Vec<City>, DatasetError> {
    read_cities(open(path)?, &path.display().to_string())
}

pub fn read_cities<R: Read>(input: R, source_name: &str) -> Result<Vec<City>, DatasetError> {
    let mut rdr = reader(input);
    let found = headers(&mut rdr, source_name)?;
    if found != CITIES_HEADER {
        return Err(schema_error(source_name, &CITIES_HEADER, &found));
    }
    let mut seen = HashSet::new();
    let mut cities = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let ctx = RowCtx {
            source_name,
            line: record.position().map(|p| p.line()).unwrap_or(0),
        };
        let id = ctx.text("id", &record[0])?;
        let name = ctx.text("name", &record[1])?;
        let lat = ctx.number("lat", &record[2])?;
        let lon = ctx.number("lon", &record[3])?;
        let location = GeoPoint::new(lat, lon).map_err(|e| ctx.err(e.to_string()))?;
        if !seen.insert(id.clone()) {
            return Err(ctx.err(format!("duplicate city id `{id}`")));
        }
        cities.push(City { id, name, location });
    }
    Ok(cities)
}

pub fn load_attractions(path: &Path, cities: &[City]) -> Result<Vec<Attraction>, DatasetError> {
    read_attractions(open(path)?, &path.display().to_string(), cities)
}

pub fn read_attractions<R: Read>(
    input: R,
    source_name: &str,
    cities: &[City],
) -> Result<Vec<Attraction>, DatasetError> {
    let mut rdr = reader(input);
    let found = headers(&mut rdr, source_name)?;
    let extras_ok = found.len() >= ATTRACTIONS_HEADER.len()
        && found[..ATTRACTIONS_HEADER.len()] == ATTRACTIONS_HEADER
        && found[ATTRACTIONS_HEADER.len()..]
            .iter()
            .all(|c| IGNORED_ATTRACTION_COLUMNS.contains(&c.as_str()));
    if !extras_ok {
        return Err(schema_error(source_name, &ATTRACTIONS_HEADER, &found));
    }
    let known: HashSet<&str> = cities.iter().map(|c| c.id.as_str()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let ctx = RowCtx {
            source_name,
            line: record.position().map(|p| p.line()).unwrap_or(0),
        };
        let id = ctx.text("id", &record[0])?;
        let city_id = ctx.text("city_id", &record[1])?;
        if !known.contains(city_id.as_str()) {
            return Err(DatasetError::UnknownCity {
                city_id,
                line: ctx.line,
            });
        }
        let a = Attraction {
            name: ctx.text("name", &record[2])?,
            rating: ctx.number("rating", &record[3])?,
            ticket_price: ctx.number("ticket_price", &record[4])?,
            visit_duration: ctx.number("visit_duration_h", &record[5])?,
            open_hour: ctx.number("open_hour", &record[6])?,
            close_hour: ctx.number("close_hour", &record[7])?,
            id,
            city_id,
        };
        a.validate().map_err(|m| ctx.err(m))?;
        if !seen.insert(a.id.clone()) {
            return Err(ctx.err(format!("duplicate attraction id `{}`", a.id)));
        }
        out.push(a);
    }
    Ok(out)
}

pub fn load_indicators(
    indicators: &Path,
    criteria: &Path,
) -> Result<IndicatorMatrix, DatasetError> {
    read_indicators(
        open(indicators)?,
        &indicators.display().to_string(),
        open(criteria)?,
        &criteria.display().to_string(),
    )
}

/// Reads `indicators.csv` (`city_id,<criterion>...`) together with its
/// `criteria.csv` companion. Every indicator column needs exactly one
/// orientation entry and vice versa.
pub fn read_indicators<R1: Read, R2: Read>(
    indicators: R1,
    indicators_name: &str,
    criteria: R2,
    criteria_name: &str,
) -> Result<IndicatorMatrix, DatasetError> {
    let mut crdr = reader(criteria);
    let found = headers(&mut crdr, criteria_name)?;
    if found != CRITERIA_HEADER {
        return Err(schema_error(criteria_name, &CRITERIA_HEADER, &found));
    }
    let mut orientation: HashMap<String, Orientation> = HashMap::new();
    for record in crdr.records() {
        let record = record.map_err(|e| csv_error(criteria_name, e))?;
        let ctx = RowCtx {
            source_name: criteria_name,
            line: record.position().map(|p| p.line()).unwrap_or(0),
        };
        let name = ctx.text("name", &record[0])?;
        let o: Orientation = record[1].parse().map_err(|m: String| ctx.err(m))?;
        if orientation.insert(name.clone(), o).is_some() {
            return Err(ctx.err(format!("duplicate criterion `{name}`")));
        }
    }

    let mut irdr = reader(indicators);
    let found = headers(&mut irdr, indicators_name)?;
    if found.first().map(String::as_str) != Some("city_id") {
        return Err(schema_error(
            indicators_name,
            &["city_id", "<criterion>..."],
            &found,
        ));
    }
    let mut criteria_list = Vec::with_capacity(found.len() - 1);
    for name in &found[1..] {
        let Some(&o) = orientation.get(name) else {
            return Err(DatasetError::Schema {
                source_name: criteria_name.to_string(),
                expected: format!("an orientation entry for criterion `{name}`"),
                found: "none".to_string(),
            });
        };
        criteria_list.push(Criterion::new(name.clone(), o));
    }
    if orientation.len() != criteria_list.len() {
        let used: HashSet<&str> = found[1..].iter().map(String::as_str).collect();
        let mut extra: Vec<&str> = orientation
            .keys()
            .map(String::as_str)
            .filter(|k| !used.contains(k))
            .collect();
        extra.sort_unstable();
        return Err(DatasetError::Schema {
            source_name: criteria_name.to_string(),
            expected: format!("only criteria present in {indicators_name}"),
            found: extra.join(","),
        });
    }

    let mut city_ids = Vec::new();
    let mut values = Vec::new();
    let mut seen = HashSet::new();
    for record in irdr.records() {
        let record = record.map_err(|e| csv_error(indicators_name, e))?;
        let ctx = RowCtx {
            source_name: indicators_name,
            line: record.position().map(|p| p.line()).unwrap_or(0),
        };
        let id = ctx.text("city_id", &record[0])?;
        if !seen.insert(id.clone()) {
            return Err(ctx.err(format!("duplicate city id `{id}`")));
        }
        let row = criteria_list
            .iter()
            .enumerate()
            .map(|(j, c)| ctx.number(&c.name, &record[j + 1]))
            .collect::<Result<Vec<_>, _>>()?;
        city_ids.push(id);
        values.push(row);
    }
    IndicatorMatrix::new(city_ids, criteria_list, values)
}

fn write_err(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

pub fn write_cities<W: Write>(out: W, cities: &[City]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CITIES_HEADER).map_err(write_err)?;
    for c in cities {
        w.write_record([
            c.id.as_str(),
            c.name.as_str(),
            &c.location.lat().to_string(),
            &c.location.lon().to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush()
}

pub fn write_attractions<W: Write>(out: W, attractions: &[Attraction]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ATTRACTIONS_HEADER).map_err(write_err)?;
    for a in attractions {
        w.write_record([
            a.id.as_str(),
            a.city_id.as_str(),
            a.name.as_str(),
            &a.rating.to_string(),
            &a.ticket_price.to_string(),
            &a.visit_duration.to_string(),
            &a.open_hour.to_string(),
            &a.close_hour.to_string(),
        ])
        .map_err(write_err)?;
    }
    w.flush()
}

pub fn write_indicators<W: Write>(out: W, m: &IndicatorMatrix) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["city_id".to_string()];
    header.extend(m.criteria().iter().map(|c| c.name.clone()));
    w.write_record(&header).map_err(write_err)?;
    for (id, row) in m.city_ids().iter().zip(m.rows()) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).map_err(write_err)?;
    }
    w.flush()
}

pub fn write_criteria<W: Write>(out: W, criteria: &[Criterion]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CRITERIA_HEADER).map_err(write_err)?;
    for c in criteria {
        w.write_record([c.name.as_str(), &c.orientation.to_string()])
            .map_err(write_err)?;
    }
    w.flush()
}
