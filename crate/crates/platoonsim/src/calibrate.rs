//! Baseline calibration: for each candidate signal-offset shift, try the
//! configured driver imperfection first, then bisect it until the
//! not-connected mean travel time meets the target. The first shift that
//! lands within tolerance wins; otherwise the closest evaluation is returned.

use platoon_core::emissions::EmissionCoeffs;
use platoon_core::route::Route;
use platoon_core::scenario::{run, Mode, ScenarioConfig, ScenarioError};

use crate::route_file::shift_offsets;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTarget {
    pub target_s: f64,
    /// Relative tolerance on the mean travel time.
    pub tolerance: f64,
    pub shifts: &'static [f64],
    pub iterations: usize,
}

/// Shifts tried in order, in seconds.
pub const DEFAULT_SHIFTS: &[f64] = &[0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0];

impl Default for CalibrationTarget {
    fn default() -> Self {
        Self { target_s: 1385.0, tolerance: 0.02, shifts: DEFAULT_SHIFTS, iterations: 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub sigma: f64,
    pub offset_shift_s: f64,
    pub mean_travel_time_s: f64,
    pub within_tolerance: bool,
    pub evaluations: usize,
}

/// Mean travel time of the not-connected vans; infinite if any did not finish.
pub fn baseline_travel_time(
    config: &ScenarioConfig,
    route: &Route,
    coeffs: &EmissionCoeffs,
    sigma: f64,
) -> Result<f64, ScenarioError> {
    let mut cfg = config.clone();
    cfg.mode = Mode::NotConnected;
    cfg.platoon = None;
    cfg.vehicle.sigma = sigma;
    cfg.record_series = false;
    cfg.record_beacons = false;
    let result = run(&cfg, route, coeffs)?;
    let times: Option<Vec<f64>> = result.vans.iter().map(|v| v.travel_time_s).collect();
    Ok(times.map_or(f64::INFINITY, |t| t.iter().sum::<f64>() / t.len() as f64))
}

/// `route` must be unshifted; shifts are applied on copies.
pub fn calibrate(
    config: &ScenarioConfig,
    route: &Route,
    coeffs: &EmissionCoeffs,
    goal: &CalibrationTarget,
) -> Result<Calibration, ScenarioError> {
    let mut best: Option<Calibration> = None;
    let mut evaluations = 0;
    for &shift in goal.shifts {
        let mut shifted = route.clone();
        shift_offsets(&mut shifted, shift);
        let mut eval = |sigma: f64| -> Result<f64, ScenarioError> {
            evaluations += 1;
            baseline_travel_time(config, &shifted, coeffs, sigma)
        };
        let within = |tt: f64| (tt - goal.target_s).abs() <= goal.tolerance * goal.target_s;
        let configured = config.vehicle.sigma;
        let mut candidates = vec![(configured, eval(configured)?)];
        let (mut lo, mut hi) = (0.0, 1.0);
        if !within(candidates[0].1) {
            candidates.push((lo, eval(lo)?));
            candidates.push((hi, eval(hi)?));
        }
        for _ in 0..goal.iterations {
            if candidates.iter().any(|c| within(c.1)) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let tt = eval(mid)?;
            candidates.push((mid, tt));
            if tt < goal.target_s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        for (sigma, tt) in candidates {
            let err = (tt - goal.target_s).abs();
            let better = best.is_none_or(|b| err < (b.mean_travel_time_s - goal.target_s).abs());
            if better {
                best = Some(Calibration {
                    sigma,
                    offset_shift_s: shift,
                    mean_travel_time_s: tt,
                    within_tolerance: within(tt),
                    evaluations: 0,
                });
            }
        }
        if best.is_some_and(|b| b.within_tolerance) {
            break;
        }
    }
    let mut best = best.expect("at least one shift is tried");
    best.evaluations = evaluations;
    Ok(best)
}
