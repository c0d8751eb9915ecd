//! Longitudinal kinematics and the human-driver baseline: Krauss safe-speed
//! car-following with stochastic driver imperfection, stepped with explicit
//! Euler at a fixed `dt`.

use alloc::string::String;

use thiserror::Error;

use crate::rng::SplitMix64;
use crate::route::Route;

/// Fixed integration step.
pub const DEFAULT_DT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("vehicle parameter `{0}` is out of range")]
    OutOfRange(&'static str),
}

/// Van type parameters. Defaults follow the delivery-van setup (5.94 m,
/// 3500 kg, 5..20 m/s, 2.5 m/s²) plus Krauss driver defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    pub length_m: f64,
    pub mass_kg: f64,
    pub v_max: f64,
    /// Lower bound of the desired-speed range drawn for background traffic.
    pub v_min: f64,
    pub a_max: f64,
    pub b_comf: f64,
    pub b_emergency: f64,
    /// Driver reaction time.
    pub tau: f64,
    /// Driver imperfection in `[0, 1]`.
    pub sigma: f64,
    /// Standstill bumper gap a driver keeps to the vehicle ahead.
    pub min_gap_m: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            length_m: 5.94,
            mass_kg: 3500.0,
            v_max: 20.0,
            v_min: 5.0,
            a_max: 2.5,
            b_comf: 2.5,
            b_emergency: 9.0,
            tau: 1.0,
            sigma: 0.5,
            min_gap_m: 2.5,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        let checks: [(&'static str, bool); 10] = [
            ("length", self.length_m > 0.0),
            ("mass", self.mass_kg > 0.0),
            ("v_min", self.v_min > 0.0 && self.v_min <= self.v_max),
            ("v_max", self.v_max.is_finite()),
            ("a_max", self.a_max > 0.0),
            ("b_comf", self.b_comf > 0.0),
            ("b_emergency", self.b_emergency >= self.b_comf),
            ("tau", self.tau > 0.0),
            ("sigma", (0.0..=1.0).contains(&self.sigma)),
            ("min_gap", self.min_gap_m >= 0.0),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(ParamsError::OutOfRange(name)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub id: String,
    /// Front bumper position along the route.
    pub s: f64,
    pub v: f64,
    pub a: f64,
    /// Held at a container stop until this time.
    pub stopped_until: Option<f64>,
}

impl VehicleState {
    pub fn new(id: impl Into<String>, s: f64, v: f64) -> Self {
        Self {
            id: id.into(),
            s,
            v,
            a: 0.0,
            stopped_until: None,
        }
    }

    /// Explicit Euler update to a new speed.
    pub fn advance(&mut self, v_next: f64, dt: f64) {
        self.a = (v_next - self.v) / dt;
        self.v = v_next;
        self.s += v_next * dt;
    }
}

/// Whatever the follower must not run into: its speed and the bumper gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub v: f64,
    pub gap: f64,
}

impl Obstacle {
    pub fn stationary(gap: f64) -> Self {
        Self { v: 0.0, gap }
    }
}

/// Krauss safe speed:
/// `v_l + (g - v_l*tau) / ((v_l + v_f) / (2b) + tau)`, floored at zero.
pub fn krauss_safe_speed(v_leader: f64, v_follower: f64, gap: f64, b: f64, tau: f64) -> f64 {
    let v = v_leader + (gap - v_leader * tau) / ((v_leader + v_follower) / (2.0 * b) + tau);
    v.max(0.0)
}

/// The more restrictive of several obstacles for a follower at `v`.
pub fn binding_obstacle<I>(obstacles: I, v: f64, b: f64, tau: f64) -> Option<Obstacle>
where
    I: IntoIterator<Item = Obstacle>,
{
    obstacles.into_iter().min_by(|x, y| {
        krauss_safe_speed(x.v, v, x.gap, b, tau)
            .total_cmp(&krauss_safe_speed(y.v, v, y.gap, b, tau))
    })
}

/// Krauss desired speed followed by the imperfection draw. Always consumes
/// exactly one uniform from `rng`.
pub fn krauss_speed(
    v: f64,
    params: &VehicleParams,
    leader: Option<Obstacle>,
    limit: f64,
    rng: &mut SplitMix64,
    dt: f64,
) -> f64 {
    let mut v_des = (v + params.a_max * dt).min(params.v_max).min(limit);
    if let Some(l) = leader {
        v_des = v_des.min(krauss_safe_speed(l.v, v, l.gap, params.b_comf, params.tau));
    }
    let u = rng.uniform();
    (v_des - params.sigma * params.a_max * dt * u).max(0.0)
}

/// One Krauss step: desired speed, dawdle, then Euler integration.
pub fn krauss_step(
    state: &VehicleState,
    params: &VehicleParams,
    leader: Option<Obstacle>,
    limit: f64,
    rng: &mut SplitMix64,
    dt: f64,
) -> VehicleState {
    let v_next = krauss_speed(state.v, params, leader, limit, rng, dt);
    let mut next = state.clone();
    next.advance(v_next, dt);
    next
}

/// Route obligations of one vehicle: next container stop to serve and the
/// last signal it committed to pass on red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TripProgress {
    pub next_stop: usize,
    pub committed_signal: Option<usize>,
    pub serves_stops: bool,
}

impl TripProgress {
    pub fn serving_stops(from_stop: usize) -> Self {
        Self {
            next_stop: from_stop,
            committed_signal: None,
            serves_stops: true,
        }
    }
}

/// What the route imposes on a vehicle this step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Treat `position_m` as a stationary leader.
    VirtualLeader { position_m: f64 },
    /// Dwelling at a container stop: speed 0, position held.
    Hold,
}

impl Gate {
    pub fn as_obstacle(&self, s: f64) -> Option<Obstacle> {
        match *self {
            Gate::VirtualLeader { position_m } => {
                Some(Obstacle::stationary((position_m - s).max(0.0)))
            }
            Gate::Hold => None,
        }
    }
}

/// Lookahead within which a red head or a pending stop becomes a virtual
/// leader: reaction distance plus comfortable braking distance.
pub fn gate_lookahead(v: f64, params: &VehicleParams) -> f64 {
    v * params.tau + v * v / (2.0 * params.b_comf)
}

/// Red heads and pending stops ahead, as a virtual leader or a hold.
///
/// A red head closer than the emergency stopping distance `v²/(2·b_emergency)`
/// cannot be stopped for; the vehicle commits to it (records it in
/// `progress`) and passes. Heads and stops beyond the lookahead are ignored.
pub fn stop_and_signal_gate(
    state: &VehicleState,
    params: &VehicleParams,
    route: &Route,
    progress: &mut TripProgress,
    t: f64,
) -> Option<Gate> {
    if let Some(until) = state.stopped_until {
        if t < until {
            return Some(Gate::Hold);
        }
    }
    let reach = gate_lookahead(state.v, params).max(params.length_m);
    let mut nearest: Option<f64> = None;

    if progress.serves_stops {
        // zero-dwell stops are drive-through
        let pending = route
            .stops
            .iter()
            .skip(progress.next_stop)
            .find(|st| st.dwell_s > 0.0 && st.position_m >= state.s);
        if let Some(stop) = pending {
            let d = stop.position_m - state.s;
            if d >= 0.0 && d <= reach {
                nearest = Some(stop.position_m);
            }
        }
    }

    let first = route
        .signals
        .partition_point(|sig| sig.position_m < state.s);
    for (idx, sig) in route.signals.iter().enumerate().skip(first) {
        let d = sig.position_m - state.s;
        if d > reach || nearest.is_some_and(|p| p <= sig.position_m) {
            break;
        }
        if progress.committed_signal == Some(idx) || sig.is_green(t) {
            continue;
        }
        let emergency = state.v * state.v / (2.0 * params.b_emergency);
        if d < emergency && d > 0.0 {
            progress.committed_signal = Some(idx);
            continue;
        }
        nearest = Some(sig.position_m);
        break;
    }
    nearest.map(|position_m| Gate::VirtualLeader { position_m })
}

/// Distance within which a vehicle counts as arrived at a stop line.
pub const ARRIVAL_TOLERANCE_M: f64 = 0.5;

/// Post-integration stop bookkeeping: starts the dwell timer on arrival and
/// releases the vehicle when it expires. Stops already passed are skipped.
pub fn update_stop_progress(
    state: &mut VehicleState,
    route: &Route,
    progress: &mut TripProgress,
    t: f64,
) {
    if !progress.serves_stops {
        return;
    }
    if let Some(until) = state.stopped_until {
        if t >= until - 1e-9 {
            state.stopped_until = None;
            progress.next_stop += 1;
        }
        return;
    }
    while let Some(stop) = route.stops.get(progress.next_stop) {
        let d = stop.position_m - state.s;
        if d < -ARRIVAL_TOLERANCE_M || (stop.dwell_s <= 0.0 && d <= 0.0) {
            progress.next_stop += 1;
            continue;
        }
        if d <= ARRIVAL_TOLERANCE_M && state.v <= 1e-6 && stop.dwell_s > 0.0 {
            state.v = 0.0;
            state.a = 0.0;
            state.stopped_until = Some(t + stop.dwell_s);
        }
        break;
    }
}
