//! Scenario files (`.scn`): sectioned key-value text in TOML syntax.
//!
//! ```text
//! [scenario]
//! mode = "notconnected"
//! seed = 42
//!
//! [route]
//! file = "reference.rt"
//! offset_shift_s = 12.0
//!
//! [vehicle]
//! sigma = 0.5
//! ```
//!
//! Every key is optional except `[scenario] mode` and `[route] file`.
//! Relative paths resolve against the scenario file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use platoon_core::channel::ChannelConfig;
use platoon_core::dynamics::VehicleParams;
use platoon_core::emissions::EmissionCoeffs;
use platoon_core::platoon::PlatoonConfig;
use platoon_core::rng::{stream_seed, streams};
use platoon_core::route::Route;
use platoon_core::scenario::{BackgroundSpec, Mode, ScenarioConfig, ScenarioError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff_file::{self, CoeffFileError};
use crate::route_file::{self, RouteFileError};

/// Overrides the coefficient file named in a scenario.
pub const COEFFS_ENV: &str = "PLATOONSIM_COEFFS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Syntax { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Route { path: PathBuf, source: RouteFileError },
    #[error("{path}: {source}")]
    Coeffs { path: PathBuf, source: CoeffFileError },
    #[error("{path}: unknown mode `{mode}`")]
    Mode { path: PathBuf, mode: String },
    #[error("{path}: {source}")]
    Scenario { path: PathBuf, source: ScenarioError },
}

pub fn read_file(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: ScenarioSection,
    pub route: RouteSection,
    #[serde(default, skip_serializing_if = "VehicleSection::is_empty")]
    pub vehicle: VehicleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub platoon: Option<PlatoonSection>,
    #[serde(default, skip_serializing_if = "ChannelSection::is_empty")]
    pub channel: ChannelSection,
    #[serde(default, skip_serializing_if = "EmissionsSection::is_empty")]
    pub emissions: EmissionsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<BackgroundSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_sim_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vans: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spawn_gap_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin_stop: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub destination_stop: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteSection {
    pub file: PathBuf,
    /// Added to every signal offset after loading.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_shift_s: Option<f64>,
}

macro_rules! optional_section {
    ($name:ident { $($field:ident),* $(,)? }) => {
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<f64>,
            )*
        }
    };
}

optional_section!(VehicleSection { length_m, mass_kg, v_max, v_min, a_max, b_comf, b_emergency, tau, sigma, min_gap_m });

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatoonSection {
    /// Defaults to `[scenario] vans`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cars: Option<usize>,
    /// Defaults to `n_cars`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub platoon_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_des: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub osc_freq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub osc_amp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_cruise: Option<f64>,
}

impl VehicleSection {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    fn apply(&self, p: &mut VehicleParams) {
        let fields = [
            (self.length_m, &mut p.length_m),
            (self.mass_kg, &mut p.mass_kg),
            (self.v_max, &mut p.v_max),
            (self.v_min, &mut p.v_min),
            (self.a_max, &mut p.a_max),
            (self.b_comf, &mut p.b_comf),
            (self.b_emergency, &mut p.b_emergency),
            (self.tau, &mut p.tau),
            (self.sigma, &mut p.sigma),
            (self.min_gap_m, &mut p.min_gap_m),
        ];
        for (value, slot) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }
}

impl PlatoonSection {
    fn apply(&self, p: &mut PlatoonConfig) {
        p.n_cars = self.n_cars.unwrap_or(p.n_cars);
        p.platoon_size = self.platoon_size.unwrap_or(p.n_cars);
        let fields = [
            (self.gap_des, &mut p.gap_des),
            (self.c1, &mut p.c1),
            (self.xi, &mut p.xi),
            (self.omega_n, &mut p.omega_n),
            (self.osc_freq, &mut p.osc_freq),
            (self.osc_amp, &mut p.osc_amp),
            (self.v_cruise, &mut p.v_cruise),
        ];
        for (value, slot) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss_prob: Option<f64>,
    /// Defaults to a stream derived from the scenario seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ChannelSection {
    pub fn is_empty(&self) -> bool {
        self.interval_s.is_none() && self.latency_s.is_none() && self.loss_prob.is_none() && self.seed.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_file: Option<PathBuf>,
}

impl EmissionsSection {
    pub fn is_empty(&self) -> bool {
        self.coeff_file.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSection {
    pub spawn_prob: f64,
    pub max_vehicles: usize,
}

impl ScenarioFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax { path: path.to_path_buf(), message: e.message().to_string() })
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("scenario sections are plain tables")
    }

    /// Builds the core config. `seed` replaces `[scenario] seed` when given.
    pub fn to_config(&self, path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, ConfigError> {
        let s = &self.scenario;
        let mode: Mode = s
            .mode
            .parse()
            .map_err(|_| ConfigError::Mode { path: path.to_path_buf(), mode: s.mode.clone() })?;
        let mut cfg = ScenarioConfig { mode, ..ScenarioConfig::default() };
        cfg.seed = seed.or(s.seed).unwrap_or(cfg.seed);
        cfg.dt = s.dt.unwrap_or(cfg.dt);
        cfg.max_sim_time = s.max_sim_time.unwrap_or(cfg.max_sim_time);
        cfg.n_vans = s.vans.unwrap_or(cfg.n_vans);
        cfg.spawn_gap_m = s.spawn_gap_m.unwrap_or(cfg.spawn_gap_m);
        cfg.origin_stop = s.origin_stop.clone();
        cfg.destination_stop = s.destination_stop.clone();
        self.vehicle.apply(&mut cfg.vehicle);
        cfg.platoon = match mode {
            Mode::Connected => {
                let mut p = PlatoonConfig { n_cars: cfg.n_vans, platoon_size: cfg.n_vans, ..PlatoonConfig::default() };
                if let Some(section) = &self.platoon {
                    section.apply(&mut p);
                }
                Some(p)
            }
            Mode::NotConnected => None,
        };
        let ch = &self.channel;
        let defaults = ChannelConfig::default();
        cfg.channel = ChannelConfig {
            interval_s: ch.interval_s.unwrap_or(defaults.interval_s),
            latency_s: ch.latency_s.unwrap_or(defaults.latency_s),
            loss_prob: ch.loss_prob.unwrap_or(defaults.loss_prob),
            seed: ch.seed.unwrap_or(stream_seed(cfg.seed, streams::CHANNEL)),
        };
        if let Some(bg) = &self.background {
            cfg.background = BackgroundSpec { spawn_prob: bg.spawn_prob, max_vehicles: bg.max_vehicles };
        }
        cfg.validate().map_err(|source| ConfigError::Scenario { path: path.to_path_buf(), source })?;
        Ok(cfg)
    }
}

/// A scenario file with its route and coefficients resolved.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub config: ScenarioConfig,
    pub route: Route,
    pub coeffs: EmissionCoeffs,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Coefficients from `$PLATOONSIM_COEFFS`, else `file`, else the bundled table.
pub fn load_coeffs(file: Option<&Path>) -> Result<EmissionCoeffs, ConfigError> {
    let env = std::env::var_os(COEFFS_ENV).map(PathBuf::from);
    match env.as_deref().or(file) {
        Some(path) => {
            let text = read_file(path)?;
            coeff_file::parse_coeffs(&text).map_err(|source| ConfigError::Coeffs { path: path.to_path_buf(), source })
        }
        None => Ok(coeff_file::parse_coeffs(coeff_file::BUNDLED).expect("bundled coefficients parse")),
    }
}

pub fn load_route(path: &Path) -> Result<Route, ConfigError> {
    let text = read_file(path)?;
    route_file::parse_route(&text).map_err(|source| ConfigError::Route { path: path.to_path_buf(), source })
}

pub fn load_scenario(path: &Path, seed: Option<u64>) -> Result<LoadedScenario, ConfigError> {
    let file = ScenarioFile::parse(&read_file(path)?, path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let config = file.to_config(path, seed)?;
    let mut route = load_route(&resolve(base, &file.route.file))?;
    route_file::shift_offsets(&mut route, file.route.offset_shift_s.unwrap_or(0.0));
    let coeff_path = file.emissions.coeff_file.as_deref().map(|p| resolve(base, p));
    let coeffs = load_coeffs(coeff_path.as_deref())?;
    Ok(LoadedScenario { file, config, route, coeffs })
}
