//! Speed/acceleration emission maps and per-vehicle accounting.
//!
//! Every quantity uses the continuous HBEFA3 fit form
//! `max(0, c0 + c1·v·a + c2·v·a² + c3·v + c4·v² + c5·v³)` with `v` in m/s
//! and `a` in m/s². Pollutants come out in mg/s, fuel in ml/s.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign};
use core::str::FromStr;

use thiserror::Error;

use crate::dynamics::VehicleState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmissionError {
    #[error("unknown emission quantity `{0}`")]
    UnknownQuantity(String),
    #[error("fuel total is zero; CO2/fuel ratio is undefined")]
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Co2,
    Co,
    Nox,
    Hc,
    Fuel,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Co2,
        Quantity::Co,
        Quantity::Nox,
        Quantity::Hc,
        Quantity::Fuel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Co2 => "CO2",
            Quantity::Co => "CO",
            Quantity::Nox => "NOx",
            Quantity::Hc => "HC",
            Quantity::Fuel => "fuel",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = EmissionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EmissionError::UnknownQuantity(s.into()))
    }
}

/// Six polynomial coefficients per quantity plus the class label.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionCoeffs {
    pub class: String,
    table: [[f64; 6]; 5],
}

impl EmissionCoeffs {
    pub fn zero(class: impl Into<String>) -> Self {
        Self {
            class: class.into(),
            table: [[0.0; 6]; 5],
        }
    }

    pub fn with(mut self, q: Quantity, c: [f64; 6]) -> Self {
        self.table[q.index()] = c;
        self
    }

    pub fn set(&mut self, q: Quantity, c: [f64; 6]) {
        self.table[q.index()] = c;
    }

    pub fn get(&self, q: Quantity) -> &[f64; 6] {
        &self.table[q.index()]
    }
}

/// Unclamped polynomial value.
pub fn polynomial(c: &[f64; 6], v: f64, a: f64) -> f64 {
    c[0] + c[1] * v * a + c[2] * v * a * a + c[3] * v + c[4] * v * v + c[5] * v * v * v
}

/// Emission rate of `q` at speed `v` and acceleration `a`, never negative.
pub fn rate(q: Quantity, v: f64, a: f64, coeffs: &EmissionCoeffs) -> f64 {
    polynomial(coeffs.get(q), v, a).max(0.0)
}

/// [`rate`] addressed by quantity name.
pub fn rate_named(q: &str, v: f64, a: f64, coeffs: &EmissionCoeffs) -> Result<f64, EmissionError> {
    Ok(rate(q.parse()?, v, a, coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmissionRecord {
    pub t: f64,
    pub vehicle: usize,
    pub co2: f64,
    pub co: f64,
    pub nox: f64,
    pub hc: f64,
    pub fuel: f64,
}

impl EmissionRecord {
    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Co2 => self.co2,
            Quantity::Co => self.co,
            Quantity::Nox => self.nox,
            Quantity::Hc => self.hc,
            Quantity::Fuel => self.fuel,
        }
    }
}

/// All five rates at the vehicle's current `(v, a)`.
pub fn step_emissions(
    t: f64,
    vehicle: usize,
    state: &VehicleState,
    coeffs: &EmissionCoeffs,
) -> EmissionRecord {
    let r = |q| rate(q, state.v, state.a, coeffs);
    EmissionRecord {
        t,
        vehicle,
        co2: r(Quantity::Co2),
        co: r(Quantity::Co),
        nox: r(Quantity::Nox),
        hc: r(Quantity::Hc),
        fuel: r(Quantity::Fuel),
    }
}

/// Integrated totals: pollutants in mg, fuel in ml (rate-seconds), plus the
/// accounted duration so mean rates can be derived.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmissionTotals {
    pub co2: f64,
    pub co: f64,
    pub nox: f64,
    pub hc: f64,
    pub fuel: f64,
    pub duration_s: f64,
}

impl EmissionTotals {
    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Co2 => self.co2,
            Quantity::Co => self.co,
            Quantity::Nox => self.nox,
            Quantity::Hc => self.hc,
            Quantity::Fuel => self.fuel,
        }
    }

    /// Adds one step of duration `dt`.
    pub fn add_record(&mut self, rec: &EmissionRecord, dt: f64) {
        self.co2 += rec.co2 * dt;
        self.co += rec.co * dt;
        self.nox += rec.nox * dt;
        self.hc += rec.hc * dt;
        self.fuel += rec.fuel * dt;
        self.duration_s += dt;
    }

    /// Total divided by accounted duration (mg/s or ml/s).
    pub fn mean_rate(&self, q: Quantity) -> f64 {
        if self.duration_s > 0.0 {
            self.get(q) / self.duration_s
        } else {
            0.0
        }
    }
}

impl Add for EmissionTotals {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            co2: self.co2 + o.co2,
            co: self.co + o.co,
            nox: self.nox + o.nox,
            hc: self.hc + o.hc,
            fuel: self.fuel + o.fuel,
            duration_s: self.duration_s + o.duration_s,
        }
    }
}

impl AddAssign for EmissionTotals {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Folds one vehicle's records: `Σ rate · dt`.
pub fn accumulate<'a, I>(records: I, dt: f64) -> EmissionTotals
where
    I: IntoIterator<Item = &'a EmissionRecord>,
{
    let mut totals = EmissionTotals::default();
    for r in records {
        totals.add_record(r, dt);
    }
    totals
}

/// Diesel carbon-balance check: mg CO2 per ml fuel.
pub fn fuel_carbon_check(totals: &EmissionTotals) -> Result<f64, EmissionError> {
    if totals.fuel == 0.0 {
        return Err(EmissionError::Undefined);
    }
    Ok(totals.co2 / totals.fuel)
}
