use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use platoon_core::emissions::Quantity;
use platoon_core::route::route_from_trace;
use platoon_core::scenario::{compare_summaries, run, Mode};
use platoon_core::trace::{clean_trace, DEFAULT_MAX_JUMP_M};
use platoonsim::calibrate::{calibrate, CalibrationTarget};
use platoonsim::config::{load_coeffs, load_route, load_scenario, read_file, ScenarioFile};
use platoonsim::output::{load_summary, report_text, write_run};
use platoonsim::{route_file, trip_csv};

#[derive(Parser)]
#[command(name = "platoonsim", about = "Delivery-van platooning on a signalised corridor", disable_version_flag = true)]
struct Cli {
    /// Print the tool version and the active emission class.
    #[arg(long, short = 'V')]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a recorded trip into a route file.
    Ingest {
        trace: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the cleaned trace here.
        #[arg(long)]
        clean: Option<PathBuf>,
        /// Polyline simplification tolerance in metres.
        #[arg(long, default_value_t = 5.0)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_JUMP_M)]
        max_jump: f64,
    },
    /// Run one scenario and write its result files into a directory.
    Run {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the beacon log.
        #[arg(long)]
        beacons: bool,
    },
    /// Compare two run directories against the not-connected one, or
    /// against the first when both share a mode
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Fit sigma and the signal-offset shift of a not-connected scenario.
    Calibrate {
        config: PathBuf,
        #[arg(long, default_value_t = 1385.0)]
        target: f64,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match (cli.version, cli.command) {
        (true, _) => version(),
        (false, Some(cmd)) => dispatch(cmd),
        (false, None) => {
            use clap::CommandFactory;
            let _ = Cli::command().print_help();
            return ExitCode::from(2);
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("platoonsim: {message}");
            ExitCode::FAILURE
        }
    }
}

type CmdResult = Result<(), String>;

fn version() -> CmdResult {
    let coeffs = load_coeffs(None).map_err(|e| e.to_string())?;
    println!("platoonsim {} ({})", env!("CARGO_PKG_VERSION"), coeffs.class);
    Ok(())
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Ingest { trace, out, clean, epsilon, max_jump } => ingest(&trace, &out, clean.as_deref(), epsilon, max_jump),
        Command::Run { config, out, seed, beacons } => run_cmd(&config, &out, seed, beacons),
        Command::Compare { a, b, out } => compare_cmd(&a, &b, out.as_deref()),
        Command::Calibrate { config, target, tolerance, seed, out } => calibrate_cmd(&config, target, tolerance, seed, &out),
    }
}

fn ingest(trace: &Path, out: &Path, clean: Option<&Path>, epsilon: f64, max_jump: f64) -> CmdResult {
    let text = read_file(trace).map_err(|e| e.to_string())?;
    let id = trace.file_stem().map_or("trip".into(), |s| s.to_string_lossy().into_owned());
    let parsed = trip_csv::parse_trace(text.as_bytes(), &id).map_err(|e| format!("{}: {e}", trace.display()))?;
    eprint!("{}", trip_csv::rejection_report(&parsed.rejected));
    let cleaned = clean_trace(parsed.trace, max_jump).map_err(|e| format!("{}: {e}", trace.display()))?;
    let route = route_from_trace(&cleaned, epsilon).map_err(|e| format!("{}: {e}", trace.display()))?;
    if let Some(path) = clean {
        let csv = trip_csv::write_trace(&cleaned).map_err(|e| e.to_string())?;
        write_text(path, &csv)?;
    }
    write_text(out, &route_file::write_route(&route))?;
    println!(
        "{}: {} rows kept, {} rejected, length {:.1} m, {} segments",
        out.display(),
        cleaned.len(),
        parsed.rejected.len(),
        route.length_m,
        route.segments.len()
    );
    Ok(())
}

fn run_cmd(config: &Path, out: &Path, seed: Option<u64>, beacons: bool) -> CmdResult {
    let mut loaded = load_scenario(config, seed).map_err(|e| e.to_string())?;
    loaded.config.record_beacons = beacons;
    let result = run(&loaded.config, &loaded.route, &loaded.coeffs).map_err(|e| format!("{}: {e}", config.display()))?;
    let summary = write_run(&result, out).map_err(|e| e.to_string())?;
    println!("{}", summary.display());
    println!("mode: {}  seed: {}  sim_time_s: {:.1}", result.mode.name(), result.seed, result.sim_time_s);
    for van in &result.vans {
        match van.travel_time_s {
            Some(tt) => println!(
                "{}: travel_time_s {:.1}  co2_mg {:.0}  fuel_ml {:.1}",
                van.label,
                tt,
                van.totals.get(Quantity::Co2),
                van.totals.get(Quantity::Fuel)
            ),
            None => println!("{}: unfinished", van.label),
        }
    }
    Ok(())
}

fn compare_cmd(a: &Path, b: &Path, out: Option<&Path>) -> CmdResult {
    let sa = load_summary(a).map_err(|e| e.to_string())?;
    let sb = load_summary(b).map_err(|e| e.to_string())?;
    let (baseline, candidate) = if sb.mode == Mode::NotConnected && sa.mode != Mode::NotConnected { (sb, sa) } else { (sa, sb) };
    let report = report_text(&compare_summaries(candidate, baseline));
    print!("{report}");
    if let Some(path) = out {
        write_text(path, &report)?;
    }
    Ok(())
}

fn calibrate_cmd(config: &Path, target: f64, tolerance: f64, seed: Option<u64>, out: &Path) -> CmdResult {
    let mut file = ScenarioFile::parse(&read_file(config).map_err(|e| e.to_string())?, config).map_err(|e| e.to_string())?;
    let mut cfg = file.to_config(config, seed).map_err(|e| e.to_string())?;
    cfg.mode = Mode::NotConnected;
    let base = config.parent().unwrap_or(Path::new("."));
    let route_path = if file.route.file.is_absolute() { file.route.file.clone() } else { base.join(&file.route.file) };
    let route = load_route(&route_path).map_err(|e| e.to_string())?;
    let coeff_path = file.emissions.coeff_file.as_ref().map(|p| base.join(p));
    let coeffs = load_coeffs(coeff_path.as_deref()).map_err(|e| e.to_string())?;
    let goal = CalibrationTarget { target_s: target, tolerance, ..CalibrationTarget::default() };
    let fit = calibrate(&cfg, &route, &coeffs, &goal).map_err(|e| format!("{}: {e}", config.display()))?;

    file.vehicle.sigma = Some(fit.sigma);
    file.route.offset_shift_s = Some(fit.offset_shift_s);
    let out_dir = out.parent().unwrap_or(Path::new(""));
    if out_dir != base {
        file.route.file = fs::canonicalize(&route_path).map_err(|e| format!("{}: {e}", route_path.display()))?;
        if let Some(p) = coeff_path {
            file.emissions.coeff_file = Some(fs::canonicalize(&p).map_err(|e| format!("{}: {e}", p.display()))?);
        }
    }
    write_text(out, &file.to_text())?;
    println!(
        "sigma {:.6}  offset_shift_s {:.1}  mean_travel_time_s {:.1}  within_tolerance {}  runs {}",
        fit.sigma, fit.offset_shift_s, fit.mean_travel_time_s, fit.within_tolerance, fit.evaluations
    );
    if fit.within_tolerance {
        Ok(())
    } else {
        Err(format!("no candidate reached {target} s within {:.1}%", tolerance * 100.0))
    }
}
