//! Line-oriented corridor description:
//!
//! ```text
//! # comment
//! length_m 14200
//! segment 0 1500 13.89
//! stop stop_1 100 0
//! signal 450 90 45 12
//! ```

use std::fmt::Write as _;

use platoon_core::route::{ContainerStop, Route, RouteError, Segment, SignalHead};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RouteFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("route file has no `length_m` line")]
    MissingLength,
    #[error(transparent)]
    Route(#[from] RouteError),
}

fn syntax(line: usize, message: impl Into<String>) -> RouteFileError {
    RouteFileError::Syntax { line, message: message.into() }
}

pub fn parse_route(text: &str) -> Result<Route, RouteFileError> {
    let mut length = None;
    let mut segments = Vec::new();
    let mut stops = Vec::new();
    let mut signals = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut words = body.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        let nums = |from: usize, n: usize| -> Result<Vec<f64>, RouteFileError> {
            if rest.len() != from + n {
                return Err(syntax(line, format!("`{keyword}` takes {} values", from + n)));
            }
            rest[from..]
                .iter()
                .map(|w| w.parse::<f64>().map_err(|_| syntax(line, format!("`{w}` is not a number"))))
                .collect()
        };
        match keyword {
            "length_m" => length = Some(nums(0, 1)?[0]),
            "segment" => {
                let v = nums(0, 3)?;
                segments.push(Segment { start_m: v[0], end_m: v[1], limit_mps: v[2] });
            }
            "stop" => {
                let v = nums(1, 2)?;
                stops.push(ContainerStop { id: rest[0].to_string(), position_m: v[0], dwell_s: v[1] });
            }
            "signal" => {
                let v = nums(0, 4)?;
                signals.push(SignalHead { position_m: v[0], cycle_s: v[1], green_s: v[2], offset_s: v[3] });
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let length = length.ok_or(RouteFileError::MissingLength)?;
    Ok(Route::new(length, segments, stops, signals)?)
}

pub fn write_route(route: &Route) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "length_m {}", route.length_m);
    for seg in &route.segments {
        let _ = writeln!(out, "segment {} {} {}", seg.start_m, seg.end_m, seg.limit_mps);
    }
    for stop in &route.stops {
        let _ = writeln!(out, "stop {} {} {}", stop.id, stop.position_m, stop.dwell_s);
    }
    for sig in &route.signals {
        let _ = writeln!(out, "signal {} {} {} {}", sig.position_m, sig.cycle_s, sig.green_s, sig.offset_s);
    }
    out
}

/// Adds `shift_s` to every signal offset.
pub fn shift_offsets(route: &mut Route, shift_s: f64) {
    for sig in &mut route.signals {
        sig.offset_s += shift_s;
    }
}
