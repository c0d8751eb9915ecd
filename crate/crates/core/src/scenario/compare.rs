use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::{Mode, ScenarioResult};
use crate::emissions::Quantity;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error("refusing to compare: vehicle `{0}` did not finish")]
    RefusesComparison(String),
}

/// Per-vehicle row in the comparison tables.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleRow {
    pub label: String,
    pub travel_time_s: f64,
    /// Integrated totals in mg (pollutants) and ml (fuel), in `Quantity::ALL` order.
    pub totals: [f64; 5],
    /// Mean rates over the trip in mg/s and ml/s.
    pub mean_rates: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSummary {
    pub mode: Mode,
    pub rows: Vec<VehicleRow>,
    pub travel_time_sum_s: f64,
    pub totals_sum: [f64; 5],
    pub mean_rate_sum: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub connected: ModeSummary,
    pub not_connected: ModeSummary,
    pub travel_time_reduction_pct: f64,
    /// Reductions of the integrated sums, in `Quantity::ALL` order.
    pub reduction_pct: [f64; 5],
}

impl ComparisonReport {
    pub fn reduction(&self, q: Quantity) -> f64 {
        self.reduction_pct[q as usize]
    }
}

/// `(baseline - improved) / baseline * 100`; zero when the baseline is zero.
pub fn reduction_pct(baseline: f64, improved: f64) -> f64 {
    if baseline == 0.0 {
        0.0
    } else {
        (baseline - improved) / baseline * 100.0
    }
}

pub fn summarize(result: &ScenarioResult) -> Result<ModeSummary, CompareError> {
    let mut rows = Vec::with_capacity(result.vans.len());
    for van in &result.vans {
        let tt = van
            .travel_time_s
            .ok_or_else(|| CompareError::RefusesComparison(van.label.clone()))?;
        let totals = Quantity::ALL.map(|q| van.totals.get(q));
        let mean_rates = Quantity::ALL.map(|q| van.totals.mean_rate(q));
        rows.push(VehicleRow {
            label: van.label.clone(),
            travel_time_s: tt,
            totals,
            mean_rates,
        });
    }
    Ok(ModeSummary::from_rows(result.mode, rows))
}

impl ModeSummary {
    pub fn from_rows(mode: Mode, rows: Vec<VehicleRow>) -> Self {
        let travel_time_sum_s = rows.iter().map(|r| r.travel_time_s).sum();
        let totals_sum = core::array::from_fn(|i| rows.iter().map(|r| r.totals[i]).sum());
        let mean_rate_sum = core::array::from_fn(|i| rows.iter().map(|r| r.mean_rates[i]).sum());
        Self {
            mode,
            rows,
            travel_time_sum_s,
            totals_sum,
            mean_rate_sum,
        }
    }
}

/// Reductions of the connected run against the not-connected baseline,
/// computed on summed per-vehicle metrics.
pub fn compare(
    connected: &ScenarioResult,
    not_connected: &ScenarioResult,
) -> Result<ComparisonReport, CompareError> {
    Ok(compare_summaries(
        summarize(connected)?,
        summarize(not_connected)?,
    ))
}

/// Same as [`compare`] for summaries loaded back from result files.
pub fn compare_summaries(c: ModeSummary, n: ModeSummary) -> ComparisonReport {
    let travel_time_reduction_pct = reduction_pct(n.travel_time_sum_s, c.travel_time_sum_s);
    let reduction_pct = core::array::from_fn(|i| reduction_pct(n.totals_sum[i], c.totals_sum[i]));
    ComparisonReport {
        connected: c,
        not_connected: n,
        travel_time_reduction_pct,
        reduction_pct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        assert!((reduction_pct(1385.0, 1075.0) - 22.382_671_480_144_403).abs() < 1e-9);
        assert!((reduction_pct(2.301, 1.651) - 28.248_587_570_621_47).abs() < 1e-9);
        assert_eq!(reduction_pct(5.0, 5.0), 0.0);
        assert_eq!(reduction_pct(0.0, 1.0), 0.0);
    }
}
