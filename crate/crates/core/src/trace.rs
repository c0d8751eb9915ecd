//! GPS delivery-trip traces: row types, great-circle distance and cleaning.
//!
//! Text parsing lives in the companion crate; this module holds the
//! validated in-memory form and the pure cleaning pass.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Mean Earth radius used for all great-circle distances.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Default upper bound on per-second displacement (about 216 km/h).
pub const DEFAULT_MAX_JUMP_M: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub const fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }
}

/// Great-circle distance in meters.
pub fn haversine_m(a: LatLon, b: LatLon) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = (b.lat - a.lat).to_radians();
    let dlambda = (b.lon - a.lon).to_radians();
    let s_phi = libm::sin(dphi / 2.0);
    let s_lambda = libm::sin(dlambda / 2.0);
    let h = s_phi * s_phi + libm::cos(phi1) * libm::cos(phi2) * s_lambda * s_lambda;
    2.0 * EARTH_RADIUS_M * libm::asin(libm::sqrt(h.clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl Date {
    pub fn new(year: i32, month: u8, day: u8) -> Option<Self> {
        let d = Self { year, month, day };
        ((1..=12).contains(&month) && day >= 1 && day <= d.days_in_month()).then_some(d)
    }

    fn days_in_month(&self) -> u8 {
        match self.month {
            1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
            4 | 6 | 9 | 11 => 30,
            2 if is_leap(self.year) => 29,
            2 => 28,
            _ => 0,
        }
    }

    /// Days since 1970-01-01 (proleptic Gregorian).
    pub fn days_since_epoch(&self) -> i64 {
        // Howard Hinnant's days_from_civil.
        let y = i64::from(self.year) - i64::from(self.month <= 2);
        let era = (if y >= 0 { y } else { y - 399 }) / 400;
        let yoe = y - era * 400;
        let m = i64::from(self.month);
        let doy = (153 * (if m > 2 { m - 3 } else { m + 9 }) + 2) / 5 + i64::from(self.day) - 1;
        let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        era * 146_097 + doe - 719_468
    }
}

fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Y:{:04} M:{:02} D:{:02}",
            self.year, self.month, self.day
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay {
    pub hour: u8,
    pub minute: u8,
    pub second: u8,
}

impl TimeOfDay {
    pub fn new(hour: u8, minute: u8, second: u8) -> Option<Self> {
        (hour < 24 && minute < 60 && second < 60).then_some(Self {
            hour,
            minute,
            second,
        })
    }

    pub fn seconds(&self) -> u32 {
        u32::from(self.hour) * 3600 + u32::from(self.minute) * 60 + u32::from(self.second)
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H:{:02} M:{:02} S:{:02}",
            self.hour, self.minute, self.second
        )
    }
}

/// Which field of a row broke a range invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceField {
    Day,
    Date,
    Time,
    Latitude,
    LatitudeHemisphere,
    Longitude,
    LongitudeHemisphere,
    Height,
    Speed,
    Heading,
}

impl TraceField {
    pub fn name(self) -> &'static str {
        match self {
            TraceField::Day => "day",
            TraceField::Date => "date",
            TraceField::Time => "time",
            TraceField::Latitude => "lat",
            TraceField::LatitudeHemisphere => "lat_hem",
            TraceField::Longitude => "lon",
            TraceField::LongitudeHemisphere => "lon_hem",
            TraceField::Height => "height_m",
            TraceField::Speed => "speed_kmh",
            TraceField::Heading => "heading_deg",
        }
    }
}

impl fmt::Display for TraceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One per-second sample of a delivery trip.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub day: String,
    pub date: Date,
    pub time: TimeOfDay,
    /// Degrees, north positive.
    pub latitude: f64,
    /// Degrees, east positive.
    pub longitude: f64,
    pub height_m: f64,
    pub speed_kmh: f64,
    pub heading_deg: f64,
    pub vox: Option<String>,
}

impl TraceRow {
    pub fn position(&self) -> LatLon {
        LatLon::new(self.latitude, self.longitude)
    }

    /// Absolute timestamp in whole seconds since the Unix epoch (local time).
    pub fn timestamp(&self) -> i64 {
        self.date.days_since_epoch() * 86_400 + i64::from(self.time.seconds())
    }

    /// First field that violates its range invariant, if any.
    pub fn check_ranges(&self) -> Result<(), TraceField> {
        if !(-90.0..=90.0).contains(&self.latitude) {
            return Err(TraceField::Latitude);
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            return Err(TraceField::Longitude);
        }
        if !self.height_m.is_finite() {
            return Err(TraceField::Height);
        }
        if !(self.speed_kmh >= 0.0 && self.speed_kmh.is_finite()) {
            return Err(TraceField::Speed);
        }
        if !(0.0..360.0).contains(&self.heading_deg) {
            return Err(TraceField::Heading);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripTrace {
    pub id: String,
    pub rows: Vec<TraceRow>,
    /// Index pairs `(i, i + 1)` whose timestamps are not exactly 1 s apart.
    pub gaps: Vec<(usize, usize)>,
}

impl TripTrace {
    /// Builds a trace and records its time gaps.
    pub fn new(id: impl Into<String>, rows: Vec<TraceRow>) -> Result<Self, TraceError> {
        if rows.is_empty() {
            return Err(TraceError::EmptyTrace);
        }
        let gaps = find_gaps(&rows);
        Ok(Self {
            id: id.into(),
            rows,
            gaps,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sum of haversine legs between consecutive rows.
    pub fn path_length_m(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| haversine_m(w[0].position(), w[1].position()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("trace is empty")]
    EmptyTrace,
}

fn find_gaps(rows: &[TraceRow]) -> Vec<(usize, usize)> {
    rows.windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].timestamp() - w[0].timestamp() != 1)
        .map(|(i, _)| (i, i + 1))
        .collect()
}

/// Drops GPS glitches: any row whose displacement from the last kept row
/// exceeds `max_jump_m` per elapsed second is removed. Gaps are recomputed
/// on the surviving rows.
pub fn clean_trace(trace: TripTrace, max_jump_m: f64) -> Result<TripTrace, TraceError> {
    let TripTrace { id, rows, .. } = trace;
    let mut kept: Vec<TraceRow> = Vec::with_capacity(rows.len());
    for row in rows {
        match kept.last() {
            None => kept.push(row),
            Some(prev) => {
                let elapsed = (row.timestamp() - prev.timestamp()).max(1) as f64;
                let jump = haversine_m(prev.position(), row.position());
                if jump <= max_jump_m * elapsed {
                    kept.push(row);
                }
            }
        }
    }
    TripTrace::new(id, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn row_at(sec: u32, lat: f64, lon: f64) -> TraceRow {
        TraceRow {
            day: "Monday".to_string(),
            date: Date::new(2020, 6, 15).unwrap(),
            time: TimeOfDay::new(11, (sec / 60) as u8, (sec % 60) as u8).unwrap(),
            latitude: lat,
            longitude: lon,
            height_m: 266.0,
            speed_kmh: 54.0,
            heading_deg: 0.0,
            vox: None,
        }
    }

    /// 15 m/s due north, one row per second.
    fn straight(n: u32) -> Vec<TraceRow> {
        let dlat = 15.0 / (EARTH_RADIUS_M * core::f64::consts::PI / 180.0);
        (0..n)
            .map(|i| row_at(i, 48.30 + dlat * f64::from(i), 14.28))
            .collect()
    }

    #[test]
    fn haversine_identity() {
        let p = LatLon::new(48.3069, 14.2858);
        assert_eq!(haversine_m(p, p), 0.0);
    }

    #[test]
    fn haversine_equator_degree() {
        // 2*pi*R/360
        let oracle = 2.0 * core::f64::consts::PI * EARTH_RADIUS_M / 360.0;
        let d = haversine_m(LatLon::new(0.0, 0.0), LatLon::new(0.0, 1.0));
        assert!((d - oracle).abs() < 1e-6);
        assert!((d - 111_194.9).abs() < 1.0);
    }

    #[test]
    fn haversine_meridian_hundredth() {
        let oracle = 2.0 * core::f64::consts::PI * EARTH_RADIUS_M / 360.0 * 0.01;
        let d = haversine_m(LatLon::new(48.30, 14.28), LatLon::new(48.31, 14.28));
        assert!((d - oracle).abs() < 1e-3);
        assert!((d - 1_111.9).abs() < 1.0);
    }

    #[test]
    fn dates_and_times() {
        assert!(Date::new(2020, 2, 29).is_some());
        assert!(Date::new(2021, 2, 29).is_none());
        assert!(Date::new(2020, 13, 1).is_none());
        assert!(TimeOfDay::new(24, 0, 0).is_none());
        assert_eq!(Date::new(1970, 1, 1).unwrap().days_since_epoch(), 0);
        assert_eq!(Date::new(2020, 6, 15).unwrap().days_since_epoch(), 18_428);
    }

    #[test]
    fn clean_is_identity_without_glitches() {
        let trace = TripTrace::new("t", straight(20)).unwrap();
        let cleaned = clean_trace(trace.clone(), DEFAULT_MAX_JUMP_M).unwrap();
        assert_eq!(cleaned, trace);
        assert!(cleaned.gaps.is_empty());
    }

    #[test]
    fn clean_removes_teleport() {
        let mut rows = straight(10);
        // ~500 m east in one second
        rows[5].longitude += 500.0
            / (EARTH_RADIUS_M * libm::cos(48.3_f64.to_radians()) * core::f64::consts::PI / 180.0);
        let trace = TripTrace::new("t", rows.clone()).unwrap();
        let cleaned = clean_trace(trace, 60.0).unwrap();
        assert_eq!(cleaned.len(), 9);
        assert!(!cleaned.rows.contains(&rows[5]));
        // rows 4 and 6 are now 2 s apart
        assert_eq!(cleaned.gaps, vec![(4, 5)]);
    }

    #[test]
    fn records_ten_second_gap() {
        let mut rows = straight(5);
        let mut later = straight(10)[5..].to_vec();
        for r in &mut later {
            let s = r.time.seconds() - 11 * 3600 + 10;
            r.time = TimeOfDay::new(11, (s / 60) as u8, (s % 60) as u8).unwrap();
        }
        rows.extend(later);
        let trace = TripTrace::new("t", rows).unwrap();
        assert_eq!(trace.gaps, vec![(4, 5)]);
        let cleaned = clean_trace(trace, 60.0).unwrap();
        assert_eq!(cleaned.len(), 10);
        assert_eq!(cleaned.gaps, vec![(4, 5)]);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(TripTrace::new("t", Vec::new()), Err(TraceError::EmptyTrace));
    }

    #[test]
    fn range_checks() {
        let mut r = row_at(0, 48.0, 14.0);
        assert_eq!(r.check_ranges(), Ok(()));
        r.heading_deg = 400.0;
        assert_eq!(r.check_ranges(), Err(TraceField::Heading));
        r.heading_deg = 360.0;
        assert_eq!(r.check_ranges(), Err(TraceField::Heading));
        r.heading_deg = 0.0;
        r.latitude = -91.0;
        assert_eq!(r.check_ranges(), Err(TraceField::Latitude));
    }
}
