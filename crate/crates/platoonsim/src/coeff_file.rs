//! Emission coefficient files:
//!
//! ```text
//! class HBEFA3/LDV_D_EU6
//! CO2  c0 c1 c2 c3 c4 c5
//! fuel c0 c1 c2 c3 c4 c5
//! ```
//!
//! Quantities not listed stay at zero.

use std::fmt::Write as _;

use platoon_core::emissions::{EmissionCoeffs, Quantity};
use thiserror::Error;

/// The shipped light-duty diesel Euro 6 table.
pub const BUNDLED: &str = include_str!("../../../data/ldv_d_eu6.coef");

#[derive(Debug, Error, PartialEq)]
pub enum CoeffFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("coefficient file has no `class` line")]
    MissingClass,
}

pub fn parse_coeffs(text: &str) -> Result<EmissionCoeffs, CoeffFileError> {
    let mut class = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        if key == "class" {
            class = Some(rest.trim().to_string());
            continue;
        }
        let q: Quantity = key
            .parse()
            .map_err(|_| CoeffFileError::Syntax { line, message: format!("unknown quantity `{key}`") })?;
        let vals: Vec<f64> = rest
            .split_whitespace()
            .map(|w| w.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CoeffFileError::Syntax { line, message: "coefficients must be numbers".into() })?;
        let c: [f64; 6] = vals
            .try_into()
            .map_err(|_| CoeffFileError::Syntax { line, message: "expected six coefficients".into() })?;
        rows.push((q, c));
    }
    let mut coeffs = EmissionCoeffs::zero(class.ok_or(CoeffFileError::MissingClass)?);
    for (q, c) in rows {
        coeffs.set(q, c);
    }
    Ok(coeffs)
}

pub fn write_coeffs(coeffs: &EmissionCoeffs) -> String {
    let mut out = format!("class {}\n", coeffs.class);
    for q in Quantity::ALL {
        let c = coeffs.get(q);
        let _ = writeln!(out, "{} {} {} {} {} {} {}", q.name(), c[0], c[1], c[2], c[3], c[4], c[5]);
    }
    out
}
