//! Simulation core for delivery-van platooning on a single urban corridor.
//!
//! Everything here needs only `alloc`: trace records, the corridor model,
//! Krauss and CACC longitudinal control, the beacon channel, emission maps
//! and the scenario stepper. File formats and the command line live in the
//! companion `platoonsim` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod dynamics;
pub mod emissions;
pub mod platoon;
pub mod rng;
pub mod route;
pub mod scenario;
pub mod trace;

pub use channel::{Beacon, Channel, ChannelConfig};
pub use dynamics::{VehicleParams, VehicleState};
pub use emissions::{EmissionCoeffs, EmissionTotals, Quantity};
pub use platoon::PlatoonConfig;
pub use rng::SplitMix64;
pub use route::Route;
pub use scenario::{compare, run, Mode, ScenarioConfig, ScenarioResult};
