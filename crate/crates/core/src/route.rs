//! The simulated corridor: arc-length parametrized polyline, piecewise
//! constant speed limits, container stops and fixed-cycle signal heads.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::trace::{haversine_m, TripTrace, EARTH_RADIUS_M};

/// Shortest corridor a trace may produce.
pub const MIN_ROUTE_LENGTH_M: f64 = 100.0;

/// Speed limits derived from traces are rounded up to this step.
pub const LIMIT_STEP_KMH: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouteError {
    #[error("route is {0:.1} m long, shorter than {MIN_ROUTE_LENGTH_M} m")]
    RouteTooShort(f64),
    #[error("position {s} m is outside the route [0, {length}]")]
    OutOfRoute { s: f64, length: f64 },
    #[error("segments must tile [0, {length}] without gaps or overlap (at {at} m)")]
    BadTiling { at: f64, length: f64 },
    #[error("speed limit must be positive, got {0}")]
    BadLimit(f64),
    #[error("stop `{id}` at {position} m is invalid")]
    BadStop { id: String, position: f64 },
    #[error("signal at {position} m is invalid")]
    BadSignal { position: f64 },
    #[error("route needs at least {0} points")]
    NotEnoughPoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
    pub height_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start_m: f64,
    pub end_m: f64,
    pub limit_mps: f64,
}

impl Segment {
    pub fn length_m(&self) -> f64 {
        self.end_m - self.start_m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainerStop {
    pub id: String,
    pub position_m: f64,
    pub dwell_s: f64,
}

/// Two-phase fixed-cycle head. Green while `(t + offset) mod cycle < green`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalHead {
    pub position_m: f64,
    pub cycle_s: f64,
    pub green_s: f64,
    pub offset_s: f64,
}

impl SignalHead {
    pub fn is_green(&self, t: f64) -> bool {
        signal_is_green(self, t)
    }
}

pub fn signal_is_green(signal: &SignalHead, t: f64) -> bool {
    let mut phase = (t + signal.offset_s) % signal.cycle_s;
    if phase < 0.0 {
        phase += signal.cycle_s;
    }
    phase < signal.green_s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub points: Vec<GeoPoint>,
    pub cum_dist: Vec<f64>,
    pub length_m: f64,
    pub segments: Vec<Segment>,
    /// Sorted by position.
    pub stops: Vec<ContainerStop>,
    /// Sorted by position.
    pub signals: Vec<SignalHead>,
}

impl Route {
    /// Declarative corridor without geometry. Segments must tile
    /// `[0, length_m]`; stops and signals are sorted by position.
    pub fn new(
        length_m: f64,
        segments: Vec<Segment>,
        mut stops: Vec<ContainerStop>,
        mut signals: Vec<SignalHead>,
    ) -> Result<Self, RouteError> {
        if !(length_m > 0.0) {
            return Err(RouteError::RouteTooShort(length_m));
        }
        check_tiling(&segments, length_m)?;
        for stop in &stops {
            if !(0.0..=length_m).contains(&stop.position_m) || !(stop.dwell_s >= 0.0) {
                return Err(RouteError::BadStop {
                    id: stop.id.clone(),
                    position: stop.position_m,
                });
            }
        }
        for sig in &signals {
            let ok = (0.0..=length_m).contains(&sig.position_m)
                && sig.green_s > 0.0
                && sig.green_s <= sig.cycle_s
                && sig.offset_s.is_finite();
            if !ok {
                return Err(RouteError::BadSignal {
                    position: sig.position_m,
                });
            }
        }
        stops.sort_by(|a, b| a.position_m.total_cmp(&b.position_m));
        signals.sort_by(|a, b| a.position_m.total_cmp(&b.position_m));
        Ok(Self {
            points: Vec::new(),
            cum_dist: vec![0.0, length_m],
            length_m,
            segments,
            stops,
            signals,
        })
    }

    /// Speed limit of the segment containing `s`. A boundary belongs to the
    /// following segment; `s == length` belongs to the last one.
    pub fn limit_at(&self, s: f64) -> Result<f64, RouteError> {
        if !(0.0..=self.length_m).contains(&s) {
            return Err(RouteError::OutOfRoute {
                s,
                length: self.length_m,
            });
        }
        let idx = self.segments.partition_point(|seg| seg.start_m <= s);
        Ok(self.segments[idx.saturating_sub(1)].limit_mps)
    }

    /// Highest speed at `s` that still allows slowing to every upcoming
    /// lower limit with deceleration `decel`. Positions past the end use
    /// the last segment's limit.
    pub fn allowed_speed(&self, s: f64, decel: f64) -> f64 {
        let s_in = s.clamp(0.0, self.length_m);
        let idx = self
            .segments
            .partition_point(|seg| seg.start_m <= s_in)
            .saturating_sub(1);
        let mut allowed = self.segments[idx].limit_mps;
        for seg in &self.segments[idx + 1..] {
            let d = seg.start_m - s;
            let reachable = libm::sqrt(seg.limit_mps * seg.limit_mps + 2.0 * decel * d);
            allowed = allowed.min(reachable);
            // nothing further ahead can bind once it is out of braking range
            if libm::sqrt(2.0 * decel * d) > allowed {
                break;
            }
        }
        allowed
    }

    pub fn stop(&self, id: &str) -> Option<&ContainerStop> {
        self.stops.iter().find(|s| s.id == id)
    }

    /// Total length recovered from the segment table.
    pub fn segment_sum_m(&self) -> f64 {
        self.segments.iter().map(Segment::length_m).sum()
    }
}

fn check_tiling(segments: &[Segment], length_m: f64) -> Result<(), RouteError> {
    let mut cursor = 0.0;
    for seg in segments {
        if seg.start_m != cursor || !(seg.end_m > seg.start_m) {
            return Err(RouteError::BadTiling {
                at: seg.start_m,
                length: length_m,
            });
        }
        if !(seg.limit_mps > 0.0 && seg.limit_mps.is_finite()) {
            return Err(RouteError::BadLimit(seg.limit_mps));
        }
        cursor = seg.end_m;
    }
    if segments.is_empty() || cursor != length_m {
        return Err(RouteError::BadTiling {
            at: cursor,
            length: length_m,
        });
    }
    Ok(())
}

/// Builds a corridor from a cleaned trace.
///
/// The polyline is reduced with Douglas–Peucker at tolerance `epsilon_m` on a
/// local equirectangular projection. Each leg of the reduced polyline gets
/// the nearest-rank 95th percentile of the speeds recorded along it, rounded
/// up to the next 5 km/h; adjacent legs with equal limits are merged. The
/// trace start and end become stops `stop_1` and `stop_2` with zero dwell.
pub fn route_from_trace(trace: &TripTrace, epsilon_m: f64) -> Result<Route, RouteError> {
    if trace.rows.len() < 2 {
        return Err(RouteError::NotEnoughPoints(2));
    }
    let origin = trace.rows[0].position();
    let lat0 = origin.lat.to_radians();
    let k = EARTH_RADIUS_M * core::f64::consts::PI / 180.0;
    let projected: Vec<(f64, f64)> = trace
        .rows
        .iter()
        .map(|r| {
            (
                (r.longitude - origin.lon) * k * libm::cos(lat0),
                (r.latitude - origin.lat) * k,
            )
        })
        .collect();

    let mut keep = douglas_peucker(&projected, epsilon_m);
    // repeated fixes would give zero-length legs
    keep.dedup_by(|b, a| haversine_m(trace.rows[*a].position(), trace.rows[*b].position()) == 0.0);
    if keep.len() < 2 {
        return Err(RouteError::RouteTooShort(0.0));
    }

    let points: Vec<GeoPoint> = keep
        .iter()
        .map(|&i| {
            let r = &trace.rows[i];
            GeoPoint {
                lat: r.latitude,
                lon: r.longitude,
                height_m: r.height_m,
            }
        })
        .collect();
    let mut cum_dist = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    cum_dist.push(0.0);
    for w in keep.windows(2) {
        acc += haversine_m(trace.rows[w[0]].position(), trace.rows[w[1]].position());
        cum_dist.push(acc);
    }
    let length_m = acc;
    if length_m < MIN_ROUTE_LENGTH_M {
        return Err(RouteError::RouteTooShort(length_m));
    }

    let mut segments: Vec<Segment> = Vec::new();
    for (leg, w) in keep.windows(2).enumerate() {
        let speeds: Vec<f64> = trace.rows[w[0]..=w[1]]
            .iter()
            .map(|r| r.speed_kmh)
            .collect();
        let limit = rounded_limit_mps(percentile_nearest_rank(speeds, 0.95));
        let (start_m, end_m) = (cum_dist[leg], cum_dist[leg + 1]);
        match segments.last_mut() {
            Some(prev) if prev.limit_mps == limit => prev.end_m = end_m,
            _ => segments.push(Segment {
                start_m,
                end_m,
                limit_mps: limit,
            }),
        }
    }

    let stops = vec![
        ContainerStop {
            id: "stop_1".to_string(),
            position_m: 0.0,
            dwell_s: 0.0,
        },
        ContainerStop {
            id: "stop_2".to_string(),
            position_m: length_m,
            dwell_s: 0.0,
        },
    ];
    Ok(Route {
        points,
        cum_dist,
        length_m,
        segments,
        stops,
        signals: Vec::new(),
    })
}

/// Nearest-rank percentile: the `ceil(p * n)`-th smallest value.
pub fn percentile_nearest_rank(mut values: Vec<f64>, p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let rank = libm::ceil(p * values.len() as f64) as usize;
    values[rank.clamp(1, values.len()) - 1]
}

/// Rounds a km/h speed up to the next 5 km/h step (at least one step) and
/// converts to m/s.
pub fn rounded_limit_mps(speed_kmh: f64) -> f64 {
    let steps = libm::ceil(speed_kmh / LIMIT_STEP_KMH).max(1.0);
    steps * LIMIT_STEP_KMH / 3.6
}

/// Indices of the points kept by Douglas–Peucker reduction (always includes
/// both endpoints). Iterative to bound stack depth on long traces.
pub fn douglas_peucker(points: &[(f64, f64)], epsilon: f64) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((first, last)) = stack.pop() {
        let mut worst = 0.0;
        let mut worst_idx = first;
        for i in first + 1..last {
            let d = point_segment_distance(points[i], points[first], points[last]);
            if d > worst {
                worst = d;
                worst_idx = i;
            }
        }
        if worst > epsilon {
            keep[worst_idx] = true;
            stack.push((first, worst_idx));
            stack.push((worst_idx, last));
        }
    }
    keep.iter()
        .enumerate()
        .filter(|(_, k)| **k)
        .map(|(i, _)| i)
        .collect()
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    libm::sqrt(cx * cx + cy * cy)
}
