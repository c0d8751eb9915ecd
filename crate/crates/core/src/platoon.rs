//! Cooperative adaptive cruise control for platoon followers, the
//! oscillating leader speed profile and platoon membership.

use alloc::vec::Vec;

use thiserror::Error;

use crate::channel::Beacon;
use crate::dynamics::{VehicleParams, VehicleState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlatoonError {
    #[error("platoon parameter `{0}` is out of range")]
    OutOfRange(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatoonConfig {
    /// Desired bumper-to-bumper gap.
    pub gap_des: f64,
    pub n_cars: usize,
    pub platoon_size: usize,
    /// Weight of the leader's state against the predecessor's.
    pub c1: f64,
    /// Damping ratio.
    pub xi: f64,
    /// Controller bandwidth (1/s).
    pub omega_n: f64,
    pub osc_freq: f64,
    pub osc_amp: f64,
    pub v_cruise: f64,
}

impl Default for PlatoonConfig {
    fn default() -> Self {
        Self {
            gap_des: 5.0,
            n_cars: 3,
            platoon_size: 3,
            c1: 0.5,
            xi: 1.0,
            omega_n: 0.2,
            osc_freq: 0.2,
            osc_amp: 0.2,
            v_cruise: 19.8,
        }
    }
}

impl PlatoonConfig {
    pub fn validate(&self) -> Result<(), PlatoonError> {
        let checks: [(&'static str, bool); 8] = [
            ("gap_des", self.gap_des > 0.0),
            (
                "platoon_size",
                self.platoon_size >= 1 && self.platoon_size <= self.n_cars,
            ),
            ("c1", self.c1 > 0.0 && self.c1 < 1.0),
            ("xi", self.xi >= 1.0),
            ("omega_n", self.omega_n > 0.0),
            ("osc_amp", self.osc_amp >= 0.0),
            ("osc_freq", self.osc_freq >= 0.0),
            ("v_cruise", self.v_cruise > 0.0),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(PlatoonError::OutOfRange(name)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Leader,
    /// Position behind the leader, starting at 1.
    Follower(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlatoonRole {
    pub platoon: usize,
    pub role: Role,
}

impl PlatoonRole {
    pub fn is_leader(&self) -> bool {
        self.role == Role::Leader
    }
}

/// Splits `n_vehicles` (ordered front to back) into consecutive platoons of
/// `platoon_size`; the last platoon takes the remainder.
pub fn form_platoon(n_vehicles: usize, cfg: &PlatoonConfig) -> Vec<PlatoonRole> {
    let size = cfg.platoon_size.max(1);
    (0..n_vehicles)
        .map(|i| PlatoonRole {
            platoon: i / size,
            role: match i % size {
                0 => Role::Leader,
                k => Role::Follower(k),
            },
        })
        .collect()
}

/// Sinusoidal leader target `v_cruise + amp·sin(2π·f·t)`, capped at
/// `limit` and floored at zero.
pub fn leader_speed(t: f64, cfg: &PlatoonConfig, limit: f64) -> f64 {
    let osc = cfg.osc_amp * libm::sin(2.0 * core::f64::consts::PI * cfg.osc_freq * t);
    (cfg.v_cruise + osc).min(limit).max(0.0)
}

/// Constant-spacing CACC law with leader and predecessor feedback:
///
/// ```text
/// e = (pred.s - pred_length - ego.s) - gap_des
/// k = xi + sqrt(xi² - 1)
/// u = (1-c1)·a_pred + c1·a_lead
///   + (2·xi - c1·k)·ωn·(v_pred - v_ego)
///   + c1·k·ωn·(v_lead - v_ego)
///   + ωn²·e
/// ```
///
/// clamped to `[-b_emergency, a_max]`.
pub fn cacc_accel(
    ego: &VehicleState,
    pred: &Beacon,
    lead: &Beacon,
    cfg: &PlatoonConfig,
    pred_length: f64,
    params: &VehicleParams,
) -> f64 {
    let u = cacc_raw(ego, pred, lead, cfg, pred_length);
    u.clamp(-params.b_emergency, params.a_max)
}

/// The unclamped control law.
pub fn cacc_raw(
    ego: &VehicleState,
    pred: &Beacon,
    lead: &Beacon,
    cfg: &PlatoonConfig,
    pred_length: f64,
) -> f64 {
    let e = gap_error(ego.s, pred.s, pred_length, cfg.gap_des);
    let k = cfg.xi + libm::sqrt(cfg.xi * cfg.xi - 1.0);
    (1.0 - cfg.c1) * pred.a
        + cfg.c1 * lead.a
        + (2.0 * cfg.xi - cfg.c1 * k) * cfg.omega_n * (pred.v - ego.v)
        + cfg.c1 * k * cfg.omega_n * (lead.v - ego.v)
        + cfg.omega_n * cfg.omega_n * e
}

pub fn gap_error(ego_s: f64, pred_s: f64, pred_length: f64, gap_des: f64) -> f64 {
    (pred_s - pred_length - ego_s) - gap_des
}

/// Whether a beacon is recent enough to feed the controller.
pub fn is_fresh(beacon: &Beacon, t: f64, staleness_bound: f64) -> bool {
    t - beacon.t_sent <= staleness_bound + 1e-9
}

/// Engagement hysteresis for followers: CACC takes over when the gap error
/// is below `2·gap_des` and is released when it exceeds `4·gap_des`.
pub fn engagement(engaged: bool, gap_error: f64, cfg: &PlatoonConfig) -> bool {
    if engaged {
        gap_error.abs() <= 4.0 * cfg.gap_des
    } else {
        gap_error.abs() < 2.0 * cfg.gap_des
    }
}
