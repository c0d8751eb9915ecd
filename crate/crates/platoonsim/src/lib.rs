//! File formats, result writers and the `platoonsim` command line around
//! the `platoon-core` simulator.

pub mod calibrate;
pub mod coeff_file;
pub mod config;
pub mod output;
pub mod route_file;
pub mod trip_csv;
