//! `.trip.csv` reader and writer.
//!
//! Header: `day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox`.
//! Fields are written as `T:Monday`, `Y:2020 M:06 D:15` and `H:11 M:02 S:07`;
//! plain `Monday`, `2020-06-15` and `11:02:07` are accepted too. A
//! hemisphere may sit in its own column, trail the coordinate
//! (`48.3069 n`), or be given as a sign. Rows that carry the hemisphere
//! inline may omit the two hemisphere columns.

use std::fmt;
use std::io::Read;

use platoon_core::trace::{Date, TimeOfDay, TraceError, TraceField, TraceRow, TripTrace};
use thiserror::Error;

pub const HEADER: [&str; 11] = [
    "day",
    "date",
    "time",
    "lat",
    "lat_hem",
    "lon",
    "lon_hem",
    "height_m",
    "speed_kmh",
    "heading_deg",
    "vox",
];

/// A rejected input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number in the input, header included.
    pub line: u64,
    pub field: TraceField,
    pub reason: RowProblem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowProblem {
    Unparseable,
    OutOfRange,
    MissingField,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.reason {
            RowProblem::Unparseable => "unparseable",
            RowProblem::OutOfRange => "out of range",
            RowProblem::MissingField => "missing",
        };
        write!(f, "line {}: {} {}", self.line, self.field, what)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trip file header lacks column `{0}`")]
    MissingColumn(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Column positions of the Table-style fields. Hemisphere columns are
/// optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub day: usize,
    pub date: usize,
    pub time: usize,
    pub lat: usize,
    pub lat_hem: Option<usize>,
    pub lon: usize,
    pub lon_hem: Option<usize>,
    pub height: usize,
    pub speed: usize,
    pub heading: usize,
    pub vox: Option<usize>,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            day: 0,
            date: 1,
            time: 2,
            lat: 3,
            lat_hem: Some(4),
            lon: 5,
            lon_hem: Some(6),
            height: 7,
            speed: 8,
            heading: 9,
            vox: Some(10),
        }
    }
}

impl Schema {
    pub fn from_header(header: &csv::StringRecord) -> Result<Self, IngestError> {
        let find = |name: &str| header.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let need = |name: &'static str| find(name).ok_or(IngestError::MissingColumn(name));
        Ok(Self {
            day: need("day")?,
            date: need("date")?,
            time: need("time")?,
            lat: need("lat")?,
            lat_hem: find("lat_hem"),
            lon: need("lon")?,
            lon_hem: find("lon_hem"),
            height: need("height_m")?,
            speed: need("speed_kmh")?,
            heading: need("heading_deg")?,
            vox: find("vox"),
        })
    }

    fn width(&self) -> usize {
        [Some(self.day), Some(self.date), Some(self.time), Some(self.lat), self.lat_hem, Some(self.lon), self.lon_hem]
            .into_iter()
            .chain([Some(self.height), Some(self.speed), Some(self.heading), self.vox])
            .flatten()
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Layout of a row that folds both hemispheres into the coordinates.
    fn inline(&self) -> Option<Self> {
        let (lh, oh) = (self.lat_hem?, self.lon_hem?);
        let shift = |c: usize| c - usize::from(c > lh) - usize::from(c > oh);
        Some(Self {
            day: shift(self.day),
            date: shift(self.date),
            time: shift(self.time),
            lat: shift(self.lat),
            lat_hem: None,
            lon: shift(self.lon),
            lon_hem: None,
            height: shift(self.height),
            speed: shift(self.speed),
            heading: shift(self.heading),
            vox: self.vox.map(shift),
        })
    }
}

/// A parsed trace plus the rows that were turned away.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub trace: TripTrace,
    pub rejected: Vec<RowError>,
}

/// Reads a trip file. Bad rows are collected, not fatal; the call fails only
/// when nothing usable remains.
pub fn parse_trace<R: Read>(input: R, id: &str) -> Result<ParsedTrace, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let schema = Schema::from_header(rdr.headers()?)?;
    parse_records(&mut rdr, &schema, id)
}

/// [`parse_trace`] with an explicit column mapping; the first line is still
/// skipped as a header.
pub fn parse_trace_with<R: Read>(input: R, schema: &Schema, id: &str) -> Result<ParsedTrace, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    parse_records(&mut rdr, schema, id)
}

fn parse_records<R: Read>(rdr: &mut csv::Reader<R>, schema: &Schema, id: &str) -> Result<ParsedTrace, IngestError> {
    let inline = schema.inline();
    let full_width = schema.width();
    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let layout = match &inline {
            Some(compact) if rec.len() < full_width && rec.len() >= compact.width() - usize::from(compact.vox.is_some()) => {
                compact
            }
            _ => schema,
        };
        match parse_row(&rec, layout) {
            Ok(row) => match row.check_ranges() {
                Ok(()) => rows.push(row),
                Err(field) => rejected.push(RowError { line, field, reason: RowProblem::OutOfRange }),
            },
            Err((field, reason)) => rejected.push(RowError { line, field, reason }),
        }
    }
    let trace = TripTrace::new(id, rows)?;
    Ok(ParsedTrace { trace, rejected })
}

type FieldResult<T> = Result<T, (TraceField, RowProblem)>;

fn get(rec: &csv::StringRecord, idx: usize, field: TraceField) -> FieldResult<&str> {
    match rec.get(idx) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err((field, RowProblem::MissingField)),
    }
}

fn parse_row(rec: &csv::StringRecord, sc: &Schema) -> FieldResult<TraceRow> {
    let day = get(rec, sc.day, TraceField::Day)?;
    let day = day.strip_prefix("T:").unwrap_or(day).trim().to_string();
    let date = parse_date(get(rec, sc.date, TraceField::Date)?).ok_or((TraceField::Date, RowProblem::Unparseable))?;
    let time = parse_time(get(rec, sc.time, TraceField::Time)?).ok_or((TraceField::Time, RowProblem::Unparseable))?;
    let hem = |idx: Option<usize>| idx.and_then(|i| rec.get(i)).filter(|s| !s.is_empty());
    let latitude = parse_coord(
        get(rec, sc.lat, TraceField::Latitude)?,
        hem(sc.lat_hem),
        ('n', 's'),
        TraceField::Latitude,
        TraceField::LatitudeHemisphere,
    )?;
    let longitude = parse_coord(
        get(rec, sc.lon, TraceField::Longitude)?,
        hem(sc.lon_hem),
        ('e', 'w'),
        TraceField::Longitude,
        TraceField::LongitudeHemisphere,
    )?;
    let num = |idx, field| -> FieldResult<f64> {
        get(rec, idx, field)?.parse().map_err(|_| (field, RowProblem::Unparseable))
    };
    let vox = sc
        .vox
        .and_then(|i| rec.get(i))
        .filter(|s| !s.is_empty() && *s != "-")
        .map(str::to_string);
    Ok(TraceRow {
        day,
        date,
        time,
        latitude,
        longitude,
        height_m: num(sc.height, TraceField::Height)?,
        speed_kmh: num(sc.speed, TraceField::Speed)?,
        heading_deg: num(sc.heading, TraceField::Heading)?,
        vox,
    })
}

/// `Y:2020 M:06 D:15` or `2020-06-15`.
pub fn parse_date(s: &str) -> Option<Date> {
    let (y, m, d) = if s.contains("Y:") {
        let mut y = None;
        let mut m = None;
        let mut d = None;
        for part in s.split_whitespace() {
            let (k, v) = part.split_once(':')?;
            match k {
                "Y" => y = v.parse().ok(),
                "M" => m = v.parse().ok(),
                "D" => d = v.parse().ok(),
                _ => return None,
            }
        }
        (y?, m?, d?)
    } else {
        let mut it = s.split('-');
        let out = (it.next()?.parse().ok()?, it.next()?.parse().ok()?, it.next()?.parse().ok()?);
        if it.next().is_some() {
            return None;
        }
        out
    };
    Date::new(y, m, d)
}

/// `H:11 M:02 S:07` or `11:02:07`.
pub fn parse_time(s: &str) -> Option<TimeOfDay> {
    let (h, m, sec) = if s.contains("H:") {
        let mut h = None;
        let mut m = None;
        let mut sec = None;
        for part in s.split_whitespace() {
            let (k, v) = part.split_once(':')?;
            match k {
                "H" => h = v.parse().ok(),
                "M" => m = v.parse().ok(),
                "S" => sec = v.parse().ok(),
                _ => return None,
            }
        }
        (h?, m?, sec?)
    } else {
        let mut it = s.split(':');
        let out = (it.next()?.parse().ok()?, it.next()?.parse().ok()?, it.next()?.parse().ok()?);
        if it.next().is_some() {
            return None;
        }
        out
    };
    TimeOfDay::new(h, m, sec)
}

/// Folds a hemisphere letter into the sign. The letter may trail the number
/// or come from its own column.
fn parse_coord(
    value: &str,
    hem_column: Option<&str>,
    (pos, neg): (char, char),
    field: TraceField,
    hem_field: TraceField,
) -> FieldResult<f64> {
    let mut number = value.trim();
    let mut letter = hem_column.map(str::trim);
    if let Some(last) = number.chars().last().filter(|c| c.is_ascii_alphabetic()) {
        let trailing = &number[number.len() - last.len_utf8()..];
        if letter.is_some_and(|l| !l.eq_ignore_ascii_case(trailing)) {
            return Err((hem_field, RowProblem::Unparseable));
        }
        letter = Some(trailing);
        number = number[..number.len() - last.len_utf8()].trim_end();
    }
    let x: f64 = number.parse().map_err(|_| (field, RowProblem::Unparseable))?;
    match letter.map(str::to_ascii_lowercase).as_deref() {
        None => Ok(x),
        Some(l) if x < 0.0 && l.len() == 1 => Err((hem_field, RowProblem::OutOfRange)),
        Some(l) if l.starts_with(pos) && l.len() == 1 => Ok(x),
        Some(l) if l.starts_with(neg) && l.len() == 1 => Ok(-x),
        Some(_) => Err((hem_field, RowProblem::Unparseable)),
    }
}

/// Writes rows in the canonical layout with separate hemisphere columns.
pub fn write_trace(trace: &TripTrace) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in &trace.rows {
        let lat_hem = if r.latitude.is_sign_negative() { "s" } else { "n" };
        let lon_hem = if r.longitude.is_sign_negative() { "w" } else { "e" };
        w.write_record([
            format!("T:{}", r.day),
            r.date.to_string(),
            r.time.to_string(),
            r.latitude.abs().to_string(),
            lat_hem.to_string(),
            r.longitude.abs().to_string(),
            lon_hem.to_string(),
            r.height_m.to_string(),
            r.speed_kmh.to_string(),
            r.heading_deg.to_string(),
            r.vox.clone().unwrap_or_else(|| "-".to_string()),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rejection report, one line per row.
pub fn rejection_report(rejected: &[RowError]) -> String {
    rejected.iter().map(|r| format!("{r}\n")).collect()
}
