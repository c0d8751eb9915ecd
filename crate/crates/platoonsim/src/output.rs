//! Result files of a run and the comparison report.
//!
//! A run directory holds `steps.csv`, `summary.csv`, `summary_rates.csv`
//! and, when beacons were recorded, `beacons.csv`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use platoon_core::emissions::Quantity;
use platoon_core::scenario::{ComparisonReport, Mode, ModeSummary, ScenarioResult, VehicleRow};
use thiserror::Error;

pub const STEPS_FILE: &str = "steps.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const RATES_FILE: &str = "summary_rates.csv";
pub const BEACONS_FILE: &str = "beacons.csv";

pub const STEPS_HEADER: &str =
    "t,veh_id,role,s_m,v_mps,a_mps2,co2_mgps,co_mgps,nox_mgps,hc_mgps,fuel_mlps,gap_m,degraded";
pub const SUMMARY_HEADER: &str = "veh_id,role,travel_time_s,co2_cum,co_cum,nox_cum,hc_cum,fuel_cum";
pub const RATES_HEADER: &str = "veh_id,role,travel_time_s,co2_mgps,co_mgps,nox_mgps,hc_mgps,fuel_mlps";
pub const BEACONS_HEADER: &str = "t,sender,seq,s,v,a,delivered_to";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: line {line}: {message}")]
    Row { path: PathBuf, line: u64, message: String },
    #[error("{path}: vehicle `{label}` did not finish")]
    Unfinished { path: PathBuf, label: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io { path: path.to_path_buf(), source }
}

pub fn write_steps(result: &ScenarioResult, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{STEPS_HEADER}")?;
    for row in &result.series {
        let van = &result.vans[row.van];
        let r = &row.rates;
        let gap = row.gap_m.map(|g| format!("{g:.4}")).unwrap_or_default();
        writeln!(
            out,
            "{:.3},{},{},{:.4},{:.4},{:.4},{:.6},{:.6},{:.6},{:.6},{:.8},{},{}",
            row.t,
            van.label,
            van.role.name(),
            row.s,
            row.v,
            row.a,
            r.co2,
            r.co,
            r.nox,
            r.hc,
            r.fuel,
            gap,
            u8::from(row.degraded)
        )?;
    }
    Ok(())
}

fn write_per_vehicle(
    result: &ScenarioResult,
    out: &mut impl Write,
    header: &str,
    value: impl Fn(&platoon_core::emissions::EmissionTotals, Quantity) -> f64,
) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for van in &result.vans {
        let tt = van.travel_time_s.map(|t| format!("{t:.3}")).unwrap_or_default();
        write!(out, "{},{},{tt}", van.label, van.role.name())?;
        for q in Quantity::ALL {
            write!(out, ",{:.6}", value(&van.totals, q))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Integrated totals in mg and ml. Unfinished vans have an empty travel time.
pub fn write_summary(result: &ScenarioResult, out: &mut impl Write) -> io::Result<()> {
    write_per_vehicle(result, out, SUMMARY_HEADER, |t, q| t.get(q))
}

/// Mean rates over the trip in mg/s and ml/s.
pub fn write_rates(result: &ScenarioResult, out: &mut impl Write) -> io::Result<()> {
    write_per_vehicle(result, out, RATES_HEADER, |t, q| t.mean_rate(q))
}

pub fn write_beacons(result: &ScenarioResult, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{BEACONS_HEADER}")?;
    let label = |i: usize| result.vans.get(i).map_or("?", |v| v.label.as_str());
    for fate in &result.beacons {
        let b = &fate.beacon;
        let to: Vec<&str> = fate.delivered_to.iter().map(|&i| label(i)).collect();
        writeln!(
            out,
            "{:.3},{},{},{:.4},{:.4},{:.4},{}",
            b.t_sent,
            label(b.sender),
            b.seq,
            b.s,
            b.v,
            b.a,
            to.join(";")
        )?;
    }
    Ok(())
}

/// Writes every result file into `dir`, creating it if needed. Returns the
/// summary path.
pub fn write_run(result: &ScenarioResult, dir: &Path) -> Result<PathBuf, OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let save = |name: &str, f: &dyn Fn(&mut Vec<u8>) -> io::Result<()>| -> Result<PathBuf, OutputError> {
        let path = dir.join(name);
        let mut buf = Vec::new();
        f(&mut buf).map_err(io_err(&path))?;
        fs::write(&path, buf).map_err(io_err(&path))?;
        Ok(path)
    };
    save(STEPS_FILE, &|b| write_steps(result, b))?;
    save(RATES_FILE, &|b| write_rates(result, b))?;
    if !result.beacons.is_empty() {
        save(BEACONS_FILE, &|b| write_beacons(result, b))?;
    }
    save(SUMMARY_FILE, &|b| write_summary(result, b))
}

/// `(veh_id, role, travel_time_s, values)` as read back from disk.
type SummaryRow = (String, String, f64, [f64; 5]);

fn read_rows(path: &Path) -> Result<Vec<SummaryRow>, OutputError> {
    let csv_err = |source| OutputError::Csv { path: path.to_path_buf(), source };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| OutputError::Row { path: path.to_path_buf(), line, message };
        if record.len() != 8 {
            return Err(bad(format!("expected 8 fields, found {}", record.len())));
        }
        let label = record[0].to_string();
        if record[2].is_empty() {
            return Err(OutputError::Unfinished { path: path.to_path_buf(), label });
        }
        let num = |i: usize| record[i].parse::<f64>().map_err(|_| bad(format!("`{}` is not a number", &record[i])));
        let values = [num(3)?, num(4)?, num(5)?, num(6)?, num(7)?];
        rows.push((label, record[1].to_string(), num(2)?, values));
    }
    Ok(rows)
}

/// Reads a run directory back into a summary. A van with an empty travel
/// time refuses the comparison. Missing rate files leave mean rates at zero.
pub fn load_summary(dir: &Path) -> Result<ModeSummary, OutputError> {
    let summary_path = dir.join(SUMMARY_FILE);
    if !summary_path.is_file() {
        return Err(io_err(&summary_path)(io::Error::new(io::ErrorKind::NotFound, "no such file")));
    }
    let totals = read_rows(&summary_path)?;
    let rates_path = dir.join(RATES_FILE);
    let rates = if rates_path.is_file() { read_rows(&rates_path)? } else { Vec::new() };
    let mode = if totals.iter().any(|(_, role, _, _)| role == "human") { Mode::NotConnected } else { Mode::Connected };
    let rows = totals
        .into_iter()
        .map(|(label, _, travel_time_s, totals)| {
            let mean_rates = rates.iter().find(|r| r.0 == label).map_or([0.0; 5], |r| r.3);
            VehicleRow { label, travel_time_s, totals, mean_rates }
        })
        .collect();
    Ok(ModeSummary::from_rows(mode, rows))
}

fn mode_table(out: &mut String, title: &str, m: &ModeSummary) {
    let _ = writeln!(out, "[{title}]");
    let _ = writeln!(
        out,
        "{:<8} {:>10} {:>12} {:>10} {:>10} {:>10} {:>10} | {:>9} {:>8} {:>8} {:>8} {:>8}",
        "vehicle", "time_s", "CO2_mg", "CO_mg", "NOx_mg", "HC_mg", "fuel_ml", "CO2_mg/s", "CO_mg/s", "NOx_mg/s", "HC_mg/s", "fuel_ml/s"
    );
    let line = |out: &mut String, name: &str, tt: f64, t: &[f64; 5], r: &[f64; 5]| {
        let _ = writeln!(
            out,
            "{:<8} {:>10.2} {:>12.2} {:>10.3} {:>10.3} {:>10.4} {:>10.3} | {:>9.2} {:>8.4} {:>8.4} {:>8.5} {:>8.5}",
            name, tt, t[0], t[1], t[2], t[3], t[4], r[0], r[1], r[2], r[3], r[4]
        );
    };
    for row in &m.rows {
        line(out, &row.label, row.travel_time_s, &row.totals, &row.mean_rates);
    }
    line(out, "sum", m.travel_time_sum_s, &m.totals_sum, &m.mean_rate_sum);
    let _ = writeln!(out);
}

/// Per-vehicle tables for both modes followed by `key: value` reductions.
pub fn report_text(report: &ComparisonReport) -> String {
    let mut out = String::new();
    mode_table(&mut out, "connected", &report.connected);
    mode_table(&mut out, "notconnected", &report.not_connected);
    let _ = writeln!(out, "travel_time_reduction_pct: {:.2}", report.travel_time_reduction_pct);
    for q in Quantity::ALL {
        let _ = writeln!(out, "{}_reduction_pct: {:.2}", q.name().to_lowercase(), report.reduction(q));
    }
    out
}
