//! One deterministic run of the corridor: demand, control, integration,
//! route obligations and emission accounting, stepped at a fixed `dt`.
//!
//! Step order is fixed: (1) beacons are emitted and delivered from the
//! states at `t`, (2) every vehicle picks its next speed front to back,
//! (3) states are integrated, (4) stop, signal and trip-window bookkeeping
//! runs on the new states, (5) emission rates are sampled and integrated.

mod compare;
mod demand;

pub use compare::{
    compare, compare_summaries, reduction_pct, summarize, CompareError, ComparisonReport,
    ModeSummary, VehicleRow,
};
pub use demand::{generate_demand, Spawn};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::channel::{Beacon, BeaconFate, Channel, ChannelConfig, ChannelError};
use crate::dynamics::{
    binding_obstacle, krauss_safe_speed, krauss_speed, stop_and_signal_gate, update_stop_progress,
    Gate, Obstacle, ParamsError, TripProgress, VehicleParams, VehicleState, ARRIVAL_TOLERANCE_M,
};
use crate::emissions::{step_emissions, EmissionCoeffs, EmissionRecord, EmissionTotals};
use crate::platoon::{
    cacc_accel, engagement, form_platoon, gap_error, is_fresh, leader_speed, PlatoonConfig,
    PlatoonError,
};
use crate::rng::{streams, SplitMix64};
use crate::route::Route;

/// Tiny clearance kept by the hard no-overlap cap so rounding never
/// produces a negative gap.
const OVERLAP_GUARD_M: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Connected,
    NotConnected,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Connected => "connected",
            Mode::NotConnected => "notconnected",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .collect();
        match norm.to_ascii_lowercase().as_str() {
            "connected" => Ok(Mode::Connected),
            "notconnected" => Ok(Mode::NotConnected),
            _ => Err(ScenarioError::UnknownMode(s.into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("dt must be positive, got {0}")]
    BadDt(f64),
    #[error("max_sim_time must be positive, got {0}")]
    BadHorizon(f64),
    #[error("connected mode needs a platoon configuration")]
    MissingPlatoon,
    #[error("platoon n_cars ({n_cars}) differs from the number of vans ({vans})")]
    VanCountMismatch { n_cars: usize, vans: usize },
    #[error("background spawn_prob must lie in [0, 1], got {0}")]
    BadSpawnProb(f64),
    #[error("route has no stop `{0}`")]
    UnknownStop(String),
    #[error("route needs an origin and a destination stop")]
    MissingStops,
    #[error("destination stop lies before the origin stop")]
    StopsOutOfOrder,
    #[error("no room to line up {0} vans behind the origin stop")]
    NoRoomBehindOrigin(usize),
    #[error(transparent)]
    Vehicle(#[from] ParamsError),
    #[error(transparent)]
    Platoon(#[from] PlatoonError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Background traffic fed through the seeded spawn loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundSpec {
    pub spawn_prob: f64,
    pub max_vehicles: usize,
}

impl Default for BackgroundSpec {
    fn default() -> Self {
        Self {
            spawn_prob: 0.0,
            max_vehicles: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub seed: u64,
    pub dt: f64,
    pub max_sim_time: f64,
    pub n_vans: usize,
    pub vehicle: VehicleParams,
    pub platoon: Option<PlatoonConfig>,
    pub channel: ChannelConfig,
    pub background: BackgroundSpec,
    /// Bumper-to-bumper spacing of the vans at departure.
    pub spawn_gap_m: f64,
    /// Defaults to the first stop on the route.
    pub origin_stop: Option<String>,
    /// Defaults to the last stop on the route.
    pub destination_stop: Option<String>,
    pub record_series: bool,
    pub record_beacons: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Connected,
            seed: 1,
            dt: crate::dynamics::DEFAULT_DT,
            max_sim_time: 3600.0,
            n_vans: 3,
            vehicle: VehicleParams::default(),
            platoon: Some(PlatoonConfig::default()),
            channel: ChannelConfig::default(),
            background: BackgroundSpec::default(),
            spawn_gap_m: 10.0,
            origin_stop: None,
            destination_stop: None,
            record_series: true,
            record_beacons: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ScenarioError::BadDt(self.dt));
        }
        if !(self.max_sim_time > 0.0 && self.max_sim_time.is_finite()) {
            return Err(ScenarioError::BadHorizon(self.max_sim_time));
        }
        if !(0.0..=1.0).contains(&self.background.spawn_prob) {
            return Err(ScenarioError::BadSpawnProb(self.background.spawn_prob));
        }
        self.vehicle.validate()?;
        self.channel.validate()?;
        if self.mode == Mode::Connected {
            let p = self.platoon.as_ref().ok_or(ScenarioError::MissingPlatoon)?;
            p.validate()?;
            if p.n_cars != self.n_vans {
                return Err(ScenarioError::VanCountMismatch {
                    n_cars: p.n_cars,
                    vans: self.n_vans,
                });
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        libm::ceil(self.max_sim_time / self.dt - 1e-9) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VanRole {
    Leader,
    Follower,
    /// Krauss-driven van of the not-connected scenario.
    Human,
}

impl VanRole {
    pub fn name(self) -> &'static str {
        match self {
            VanRole::Leader => "leader",
            VanRole::Follower => "follower",
            VanRole::Human => "human",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VanResult {
    pub label: String,
    pub role: VanRole,
    pub platoon: Option<usize>,
    /// Crossing time of the origin stop position.
    pub origin_time_s: Option<f64>,
    /// Crossing time of the destination stop position.
    pub arrival_time_s: Option<f64>,
    /// Present only for vans that finished.
    pub travel_time_s: Option<f64>,
    /// Emissions integrated between the two crossings.
    pub totals: EmissionTotals,
    pub degraded_steps: usize,
}

impl VanResult {
    pub fn finished(&self) -> bool {
        self.travel_time_s.is_some()
    }
}

/// Background vehicle bookkeeping at termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BackgroundCounts {
    /// Departures produced by the demand loop, before the count cap.
    pub scheduled: usize,
    /// Departures admitted under the count cap.
    pub admitted: usize,
    pub inserted: usize,
    pub finished: usize,
    pub running: usize,
    /// Admitted but still waiting for room at the route entry.
    pub waiting: usize,
}

/// One van at the end of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSample {
    pub t: f64,
    /// Index into [`ScenarioResult::vans`].
    pub van: usize,
    pub s: f64,
    pub v: f64,
    pub a: f64,
    pub rates: EmissionRecord,
    /// Bumper gap to the vehicle ahead, if any.
    pub gap_m: Option<f64>,
    pub degraded: bool,
    /// Whether the step lies inside the origin-to-destination window.
    pub on_trip: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub mode: Mode,
    pub seed: u64,
    pub dt: f64,
    pub emission_class: String,
    pub steps: usize,
    pub sim_time_s: f64,
    pub vans: Vec<VanResult>,
    pub background: BackgroundCounts,
    pub series: Vec<StepSample>,
    pub beacons: Vec<BeaconFate>,
    /// Smallest bumper gap between any two consecutive vehicles.
    pub min_gap_m: f64,
}

impl ScenarioResult {
    pub fn unfinished(&self) -> impl Iterator<Item = &VanResult> {
        self.vans.iter().filter(|v| !v.finished())
    }

    pub fn all_finished(&self) -> bool {
        self.vans.iter().all(VanResult::finished)
    }

    pub fn van(&self, label: &str) -> Option<&VanResult> {
        self.vans.iter().find(|v| v.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Control {
    Human,
    Platoon { platoon: usize, member: usize },
}

#[derive(Debug, Clone)]
struct Agent {
    state: VehicleState,
    params: VehicleParams,
    progress: TripProgress,
    control: Control,
    /// Van index, `None` for background traffic.
    van: Option<usize>,
    engaged: bool,
    degraded: bool,
}

struct Trip {
    origin_m: f64,
    destination_m: f64,
    origin_time: Option<f64>,
    arrival_time: Option<f64>,
}

/// Runs one scenario to completion.
pub fn run(
    config: &ScenarioConfig,
    route: &Route,
    coeffs: &EmissionCoeffs,
) -> Result<ScenarioResult, ScenarioError> {
    Simulation::new(config, route, coeffs)?.run_to_end()
}

/// Stepper state; [`run`] drives it to the end.
pub struct Simulation<'a> {
    cfg: ScenarioConfig,
    route: &'a Route,
    coeffs: &'a EmissionCoeffs,
    platoon: PlatoonConfig,
    step: usize,
    n_steps: usize,
    /// On-road vehicles ordered front to back.
    agents: Vec<Agent>,
    trips: Vec<Trip>,
    vans: Vec<VanResult>,
    channel: Option<Channel>,
    dynamics_rng: SplitMix64,
    desired_rng: SplitMix64,
    demand: Vec<Spawn>,
    next_spawn: usize,
    waiting: Vec<usize>,
    background: BackgroundCounts,
    series: Vec<StepSample>,
    beacons: Vec<BeaconFate>,
    min_gap_m: f64,
}

impl<'a> Simulation<'a> {
    pub fn new(
        config: &ScenarioConfig,
        route: &'a Route,
        coeffs: &'a EmissionCoeffs,
    ) -> Result<Self, ScenarioError> {
        config.validate()?;
        let (origin_idx, dest_idx) = trip_stops(config, route)?;
        let origin_m = route.stops[origin_idx].position_m;
        let destination_m = route.stops[dest_idx].position_m;
        let pitch = config.vehicle.length_m + config.spawn_gap_m;
        if config.n_vans > 0
            && origin_m - pitch * (config.n_vans - 1) as f64 - config.vehicle.length_m < 0.0
        {
            return Err(ScenarioError::NoRoomBehindOrigin(config.n_vans));
        }

        let platoon = config.platoon.unwrap_or_default();
        let roles = form_platoon(config.n_vans, &platoon);
        let mut agents = Vec::with_capacity(config.n_vans);
        let mut vans = Vec::with_capacity(config.n_vans);
        let mut trips = Vec::with_capacity(config.n_vans);
        for i in 0..config.n_vans {
            let (label, role, control, params, pl) = match config.mode {
                Mode::Connected => {
                    let r = roles[i];
                    let (prefix, role) = if r.is_leader() {
                        ("LDV", VanRole::Leader)
                    } else {
                        ("FDV", VanRole::Follower)
                    };
                    // automated longitudinal control does not dawdle
                    let params = VehicleParams {
                        sigma: 0.0,
                        ..config.vehicle
                    };
                    (
                        format!("{prefix}{}", i + 1),
                        role,
                        Control::Platoon {
                            platoon: r.platoon,
                            member: i,
                        },
                        params,
                        Some(r.platoon),
                    )
                }
                Mode::NotConnected => (
                    format!("DV{}", i + 1),
                    VanRole::Human,
                    Control::Human,
                    config.vehicle,
                    None,
                ),
            };
            let mut state = VehicleState::new(label.clone(), origin_m - pitch * i as f64, 0.0);
            state.stopped_until = None;
            agents.push(Agent {
                state,
                params,
                progress: TripProgress::serving_stops(origin_idx + 1),
                control,
                van: Some(i),
                engaged: false,
                degraded: false,
            });
            vans.push(VanResult {
                label,
                role,
                platoon: pl,
                origin_time_s: None,
                arrival_time_s: None,
                travel_time_s: None,
                totals: EmissionTotals::default(),
                degraded_steps: 0,
            });
            trips.push(Trip {
                origin_m,
                destination_m,
                origin_time: None,
                arrival_time: None,
            });
        }

        let channel = (config.mode == Mode::Connected).then(|| {
            let groups = roles.iter().map(|r| r.platoon).collect();
            let mut ch = Channel::new(groups, config.channel);
            let members: Vec<(usize, &VehicleState)> = agents
                .iter()
                .enumerate()
                .map(|(i, a)| (i, &a.state))
                .collect();
            ch.initialize(0.0, &members);
            ch
        });

        let n_steps = config.n_steps();
        let demand = if config.background.spawn_prob > 0.0 {
            generate_demand(config.seed, n_steps, config.background.spawn_prob, 1)
        } else {
            Vec::new()
        };
        let background = BackgroundCounts {
            scheduled: demand.len(),
            ..Default::default()
        };

        Ok(Self {
            cfg: config.clone(),
            route,
            coeffs,
            platoon,
            step: 0,
            n_steps,
            agents,
            trips,
            vans,
            channel,
            dynamics_rng: SplitMix64::stream(config.seed, streams::DYNAMICS),
            desired_rng: SplitMix64::stream(config.seed, streams::DESIRED_SPEED),
            demand,
            next_spawn: 0,
            waiting: Vec::new(),
            background,
            series: Vec::new(),
            beacons: Vec::new(),
            min_gap_m: f64::INFINITY,
        })
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.cfg.dt
    }

    pub fn done(&self) -> bool {
        self.step >= self.n_steps || self.trips.iter().all(|t| t.arrival_time.is_some())
    }

    pub fn run_to_end(mut self) -> Result<ScenarioResult, ScenarioError> {
        while !self.done() {
            self.advance();
        }
        Ok(self.finish())
    }

    /// Current on-road vehicle states, front to back.
    pub fn states(&self) -> impl Iterator<Item = &VehicleState> {
        self.agents.iter().map(|a| &a.state)
    }

    /// Advances one step.
    pub fn advance(&mut self) {
        let dt = self.cfg.dt;
        let t = self.time();
        self.insert_background();

        // (1) beacons
        if let Some(ch) = self.channel.as_mut() {
            let members: Vec<(usize, &VehicleState)> = self
                .agents
                .iter()
                .filter_map(|a| match a.control {
                    Control::Platoon { member, .. } => Some((member, &a.state)),
                    Control::Human => None,
                })
                .collect();
            let fates = ch.step(t, dt, &members);
            if self.cfg.record_beacons {
                self.beacons.extend(fates);
            }
        }

        // (2) control, front to back
        let mut next_v = Vec::with_capacity(self.agents.len());
        for i in 0..self.agents.len() {
            let v = self.control(i, t, &next_v);
            next_v.push(v);
        }

        // (3) integrate
        for (agent, v) in self.agents.iter_mut().zip(&next_v) {
            agent.state.advance(*v, dt);
        }

        // (4) stops, signals and trip windows
        let t_next = (self.step + 1) as f64 * dt;
        for agent in &mut self.agents {
            if agent.van.is_some() {
                update_stop_progress(&mut agent.state, self.route, &mut agent.progress, t_next);
            }
        }
        let mut on_trip = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let Some(k) = agent.van else {
                on_trip.push(false);
                continue;
            };
            let s_old = agent.state.s - agent.state.v * dt;
            let trip = &mut self.trips[k];
            if trip.origin_time.is_none() && agent.state.s >= trip.origin_m {
                trip.origin_time = Some(crossing_time(t, dt, s_old, agent.state.s, trip.origin_m));
            }
            let was_on = trip.origin_time.is_some();
            if trip.arrival_time.is_none() && agent.state.s >= trip.destination_m {
                trip.arrival_time = Some(crossing_time(
                    t,
                    dt,
                    s_old,
                    agent.state.s,
                    trip.destination_m,
                ));
            }
            on_trip.push(was_on);
        }
        self.track_gaps();

        // (5) emissions
        for (idx, agent) in self.agents.iter().enumerate() {
            let Some(k) = agent.van else { continue };
            let rec = step_emissions(t_next, k, &agent.state, self.coeffs);
            if on_trip[idx] {
                self.vans[k].totals.add_record(&rec, dt);
            }
            if agent.degraded {
                self.vans[k].degraded_steps += 1;
            }
            if self.cfg.record_series {
                let gap_m = idx
                    .checked_sub(1)
                    .map(|j| bumper_gap(&self.agents[j], agent));
                self.series.push(StepSample {
                    t: t_next,
                    van: k,
                    s: agent.state.s,
                    v: agent.state.v,
                    a: agent.state.a,
                    rates: rec,
                    gap_m,
                    degraded: agent.degraded,
                    on_trip: on_trip[idx],
                });
            }
        }

        // finished vans and background vehicles leave the road
        let trips = &self.trips;
        let length = self.route.length_m;
        let before = self.agents.len();
        let mut bg_left = 0;
        self.agents.retain(|a| match a.van {
            Some(k) => trips[k].arrival_time.is_none(),
            None => {
                let keep = a.state.s < length;
                if !keep {
                    bg_left += 1;
                }
                keep
            }
        });
        debug_assert!(before >= self.agents.len());
        self.background.finished += bg_left;
        self.step += 1;
    }

    fn insert_background(&mut self) {
        while let Some(sp) = self.demand.get(self.next_spawn) {
            if sp.depart_step > self.step {
                break;
            }
            self.next_spawn += 1;
            if self.background.admitted < self.cfg.background.max_vehicles {
                self.background.admitted += 1;
                self.waiting.push(sp.id);
            }
        }
        if self.waiting.is_empty() {
            return;
        }
        let params = self.cfg.vehicle;
        let limit = self.route.limit_at(0.0).unwrap_or(params.v_max);
        let gap = self
            .agents
            .last()
            .map(|a| a.state.s - a.params.length_m)
            .unwrap_or(f64::INFINITY);
        let lead_v = self.agents.last().map_or(0.0, |a| a.state.v);
        if gap < params.min_gap_m {
            return;
        }
        self.waiting.remove(0);
        let desired = self.desired_rng.uniform_in(params.v_min, params.v_max);
        let v0 = desired.min(limit).min(krauss_safe_speed(
            lead_v,
            0.0,
            gap - params.min_gap_m,
            params.b_comf,
            params.tau,
        ));
        let id = format!("bg{}", self.background.inserted);
        self.agents.push(Agent {
            state: VehicleState::new(id, 0.0, v0),
            params: VehicleParams {
                v_max: desired,
                ..params
            },
            progress: TripProgress::default(),
            control: Control::Human,
            van: None,
            engaged: false,
            degraded: false,
        });
        self.background.inserted += 1;
    }

    /// Speed cap from the limit at `s` and upcoming lower limits reachable
    /// within this step.
    fn speed_cap(&self, s: f64, params: &VehicleParams) -> f64 {
        let s_in = s.clamp(0.0, self.route.length_m);
        let here = self.route.limit_at(s_in).unwrap_or(params.v_max);
        let reach = here.max(params.v_max) * self.cfg.dt;
        let ahead = self.route.allowed_speed(s_in + reach, params.b_comf);
        here.min(ahead)
    }

    /// Next speed of agent `i`. `next_v[j]` already holds the decisions of
    /// every vehicle ahead.
    fn control(&mut self, i: usize, t: f64, next_v: &[f64]) -> f64 {
        let dt = self.cfg.dt;
        let staleness = self.cfg.channel.staleness_bound();
        let cap = self.speed_cap(self.agents[i].state.s, &self.agents[i].params);
        let (ahead, rest) = self.agents.split_at_mut(i);
        let agent = &mut rest[0];
        let params = agent.params;
        let v = agent.state.v;
        let s = agent.state.s;

        // predecessor on the road, old state and new rear position
        let pred = ahead.last().map(|p| {
            let gap = p.state.s - p.params.length_m - s;
            let gap = if agent.engaged {
                gap
            } else {
                (gap - params.min_gap_m).max(0.0)
            };
            let new_rear = p.state.s + next_v[i - 1] * dt - p.params.length_m;
            (Obstacle { v: p.state.v, gap }, new_rear)
        });

        // platoon roles resolve against vans still on the road
        let platoon_ctx = match agent.control {
            Control::Platoon { platoon, member } => {
                let same: Vec<&Agent> = ahead
                    .iter()
                    .filter(|a| matches!(a.control, Control::Platoon { platoon: p, .. } if p == platoon))
                    .collect();
                let lead = same.first().map(|a| member_of(a));
                let prev = same.last().copied();
                Some((member, lead, prev))
            }
            Control::Human => None,
        };

        // engaged followers keep the platoon together over a committed head
        if let Some((_, Some(_), Some(prev))) = platoon_ctx {
            if agent.engaged {
                if let Some(idx) = prev.progress.committed_signal {
                    if self.route.signals[idx].position_m > s {
                        agent.progress.committed_signal = Some(idx);
                    }
                }
            }
        }

        let gate = stop_and_signal_gate(&agent.state, &params, self.route, &mut agent.progress, t);
        if gate == Some(Gate::Hold) {
            agent.degraded = false;
            return 0.0;
        }
        let gate_obstacle = gate.and_then(|g| g.as_obstacle(s));
        let safe = |o: &Obstacle| krauss_safe_speed(o.v, v, o.gap, params.b_comf, params.tau);

        let mut degraded = false;
        let mut desired = match platoon_ctx {
            None => {
                let obstacle = binding_obstacle(
                    pred.map(|p| p.0).into_iter().chain(gate_obstacle),
                    v,
                    params.b_comf,
                    params.tau,
                );
                krauss_speed(v, &params, obstacle, cap, &mut self.dynamics_rng, dt)
            }
            Some((_, None, _)) | Some((_, _, None)) => {
                // effective leader: sinusoidal target, safe against whatever is ahead
                let target = leader_speed(t, &self.platoon, cap);
                let mut v_next = v + (target - v).clamp(-params.a_max * dt, params.a_max * dt);
                for o in pred.map(|p| p.0).into_iter().chain(gate_obstacle) {
                    v_next = v_next.min(safe(&o));
                }
                agent.engaged = false;
                v_next
            }
            Some((member, Some(lead), Some(prev))) => {
                let prev_member = member_of(prev);
                let pred_obs = pred
                    .map(|p| p.0)
                    .expect("platoon predecessor is on the road");
                let e = gap_error(s, prev.state.s, prev.params.length_m, self.platoon.gap_des);
                agent.engaged = engagement(agent.engaged, e, &self.platoon);
                let ch = self.channel.as_ref().expect("connected mode has a channel");
                let beacons = (ch.latest(member, prev_member), ch.latest(member, lead));
                let mut v_next = match beacons {
                    (Some(pb), Some(lb))
                        if agent.engaged
                            && is_fresh(pb, t, staleness)
                            && is_fresh(lb, t, staleness) =>
                    {
                        let (pb, lb) = (dead_reckon(pb, t), dead_reckon(lb, t));
                        let u = cacc_accel(
                            &agent.state,
                            &pb,
                            &lb,
                            &self.platoon,
                            prev.params.length_m,
                            &params,
                        );
                        (v + u * dt).min(cap)
                    }
                    _ if agent.engaged => {
                        degraded = true;
                        (v + params.a_max * dt).min(cap).min(safe(&pred_obs))
                    }
                    _ => {
                        // min gap is already netted out; aim for gap_des instead
                        let target = Obstacle {
                            v: pred_obs.v,
                            gap: pred_obs.gap + params.min_gap_m - self.platoon.gap_des,
                        };
                        (v + params.a_max * dt).min(cap).min(safe(&target))
                    }
                };
                if let Some(o) = gate_obstacle {
                    v_next = v_next.min(safe(&o));
                }
                v_next
            }
        };
        agent.degraded = degraded;

        // physical braking limit, then hard no-overlap caps
        desired = desired.max(v - params.b_emergency * dt);
        if let Some((_, new_rear)) = pred {
            desired = desired.min((new_rear - s - OVERLAP_GUARD_M).max(0.0) / dt);
        }
        if let Some(o) = gate_obstacle {
            if o.gap <= ARRIVAL_TOLERANCE_M {
                desired = 0.0;
            } else {
                desired = desired.min(o.gap / dt);
            }
        }
        desired.max(0.0)
    }

    fn track_gaps(&mut self) {
        for w in self.agents.windows(2) {
            let g = bumper_gap(&w[0], &w[1]);
            if g < self.min_gap_m {
                self.min_gap_m = g;
            }
        }
    }

    pub fn finish(mut self) -> ScenarioResult {
        for (van, trip) in self.vans.iter_mut().zip(&self.trips) {
            van.origin_time_s = trip.origin_time;
            van.arrival_time_s = trip.arrival_time;
            van.travel_time_s = match (trip.origin_time, trip.arrival_time) {
                (Some(o), Some(a)) => Some(a - o),
                _ => None,
            };
        }
        self.background.running = self.agents.iter().filter(|a| a.van.is_none()).count();
        self.background.waiting = self.waiting.len();
        ScenarioResult {
            mode: self.cfg.mode,
            seed: self.cfg.seed,
            dt: self.cfg.dt,
            emission_class: self.coeffs.class.clone(),
            steps: self.step,
            sim_time_s: self.time(),
            vans: self.vans,
            background: self.background,
            series: self.series,
            beacons: self.beacons,
            min_gap_m: self.min_gap_m,
        }
    }
}

fn member_of(a: &Agent) -> usize {
    match a.control {
        Control::Platoon { member, .. } => member,
        Control::Human => unreachable!("only platoon members carry a member index"),
    }
}

/// Beacon state projected from its send time to `t` at constant
/// acceleration.
fn dead_reckon(b: &Beacon, t: f64) -> Beacon {
    let age = (t - b.t_sent).max(0.0);
    Beacon {
        s: b.s + b.v * age + 0.5 * b.a * age * age,
        v: (b.v + b.a * age).max(0.0),
        t_sent: t,
        ..*b
    }
}

fn bumper_gap(front: &Agent, back: &Agent) -> f64 {
    front.state.s - front.params.length_m - back.state.s
}

/// Linear interpolation of the instant `mark` was crossed during the step
/// `[t, t + dt]`.
fn crossing_time(t: f64, dt: f64, s_old: f64, s_new: f64, mark: f64) -> f64 {
    if s_new <= s_old || mark <= s_old {
        return t;
    }
    t + dt * (mark - s_old) / (s_new - s_old)
}

fn trip_stops(config: &ScenarioConfig, route: &Route) -> Result<(usize, usize), ScenarioError> {
    if route.stops.len() < 2 && (config.origin_stop.is_none() || config.destination_stop.is_none())
    {
        return Err(ScenarioError::MissingStops);
    }
    let find = |id: &Option<String>, default: usize| match id {
        Some(id) => route
            .stops
            .iter()
            .position(|s| &s.id == id)
            .ok_or_else(|| ScenarioError::UnknownStop(id.clone())),
        None => Ok(default),
    };
    let origin = find(&config.origin_stop, 0)?;
    let dest = find(&config.destination_stop, route.stops.len() - 1)?;
    if route.stops[dest].position_m <= route.stops[origin].position_m {
        return Err(ScenarioError::StopsOutOfOrder);
    }
    Ok((origin, dest))
}
