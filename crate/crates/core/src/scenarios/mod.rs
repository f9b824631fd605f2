//! Configuration-driven scenarios: numeric runs against analytic
//! predictions, comparison reports and CSV output.

mod config;
pub mod csv;
pub mod measure;
mod presets;
mod report;
mod trains;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

pub use config::{GridBlock, OutputBlock, ScenarioConfig, ScenarioKind, SweepBlock, DEFAULT_PRECISION};
pub use presets::{description, preset, pulse_centers, time_unit, ALPHA, DEFAULT_EPS, PULSE_EPS, PULSE_SIGMA, SITES};
pub use report::{ComparisonReport, ReportRow, Tolerance};
pub use trains::{
    compare_trains, evolve_to_times, sawtooth_counterpart, sweep_csv, sweep_shaking, SweepPoint,
};

use crate::analytic::{
    chain_propagate_state, gwp_build, gwp_trajectory, predict_bloch_oscillation, predict_bloch_translation,
    predict_super_bloch, ring_propagate_state, PacketParams, PhenomenonPrediction, EDGE_PRECONDITION,
};
use crate::error::{Error, Result};
use crate::fields::{Drive, FieldProfile, FluxProfile};
use crate::lattice::{wrap_momentum, LatticeKind, LatticeSpec, StateVector, TimeGrid};
use crate::numeric::{run_evolution_with, EvolutionRun, Method, ObservableSeries, RunOptions};
use csv::{Fmt, PredictedRow, TimeUnit};
use measure::{fit_period, lsq_slope, max_relative_change, moving_average, peak_to_peak};

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_ENV: &str = "BLOCH_DRIVE_OUT";

/// Width-change samples only count while the packet is this far from the
/// open ends.
pub const SHAPE_EDGE_LIMIT: f64 = 1e-8;

/// Output files as (name, contents).
pub type OutputFiles = Vec<(String, String)>;

/// Everything a scenario run produced.
#[derive(Clone, Debug)]
pub struct ScenarioOutcome {
    pub kind: ScenarioKind,
    pub config: ScenarioConfig,
    pub report: ComparisonReport,
    pub prediction: Option<PhenomenonPrediction>,
    /// Measured series of every numeric arm, labelled.
    pub arms: Vec<(String, ObservableSeries)>,
    pub files: OutputFiles,
}

impl ScenarioOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn arm(&self, label: &str) -> Option<&ObservableSeries> {
        self.arms.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for (name, contents) in &self.files {
            csv::write(dir, name, contents)?;
        }
        Ok(())
    }
}

/// Output directory: explicit override, then `BLOCH_DRIVE_OUT`, then the
/// config's `output.directory`, then `out/<scenario>`.
pub fn resolve_out_dir(explicit: Option<&Path>, config: &ScenarioConfig) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    config
        .output
        .directory
        .clone()
        .unwrap_or_else(|| Path::new("out").join(config.kind().name()))
}

/// Complete `config` from its scenario's preset and validate it.
pub fn resolve(config: ScenarioConfig) -> Result<ScenarioConfig> {
    let kind = config.kind();
    let merged = config.over(preset(kind));
    merged.validate()?;
    Ok(merged)
}

/// Analytic phenomenon matching the drive, when one applies.
pub fn prediction_for(cfg: &ScenarioConfig) -> Result<Option<PhenomenonPrediction>> {
    let (Some(lattice), Some(packet)) = (cfg.lattice, cfg.packet) else {
        return Ok(None);
    };
    let j = lattice.hopping;
    let k0 = packet.k0;
    Ok(match cfg.field {
        Some(FieldProfile::Constant { f0 }) if f0 != 0.0 => Some(predict_bloch_oscillation(f0, j, k0)?),
        Some(FieldProfile::AcDc { n, delta: 0.0, amplitude, omega }) => {
            Some(predict_bloch_translation(n, amplitude, omega, j, k0)?)
        }
        Some(FieldProfile::AcDc { n, delta, amplitude, omega }) => Some(predict_super_bloch(n, delta, amplitude, omega, j, k0)?),
        _ => None,
    })
}

/// One numeric run: a packet on a lattice under a drive.
#[derive(Clone, Debug)]
struct Arm {
    lattice: LatticeSpec,
    drive: Drive,
    packet: PacketParams,
    grid: TimeGrid,
    method: Method,
    sample_every: usize,
}

impl Arm {
    fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        let lattice = cfg.lattice()?;
        let g = cfg.grid()?;
        Ok(Arm {
            lattice,
            drive: cfg.drive_for(lattice.kind)?,
            packet: cfg.packet()?,
            grid: g.time_grid()?,
            method: g.method,
            sample_every: g.sample_every,
        })
    }

    fn initial_state(&self) -> Result<StateVector> {
        gwp_build(&self.packet, &self.lattice)
    }

    fn run(&self) -> Result<(StateVector, EvolutionRun)> {
        let psi0 = self.initial_state()?;
        let opts = RunOptions::sampled(self.method, self.sample_every).with_snapshots();
        let run = run_evolution_with(&psi0, &self.lattice, &self.drive, &self.grid, &opts)?;
        Ok((psi0, run))
    }

    fn predicted(&self, times: &[f64], prediction: Option<&PhenomenonPrediction>) -> Result<Vec<PredictedRow>> {
        let traj = gwp_trajectory(&self.packet, &self.drive, self.lattice.hopping, times)?;
        traj.iter()
            .map(|p| {
                let t = p.time;
                let field = match &self.drive {
                    Drive::Field(f) | Drive::Flux(FluxProfile::FromField(f)) => f.evaluate(t)?,
                    Drive::Flux(FluxProfile::Direct(_)) => f64::NAN,
                };
                Ok(PredictedRow {
                    t,
                    field,
                    impulse: if t > self.grid.t_start { self.drive.impulse(self.grid.t_start, t)? } else { 0.0 },
                    displacement: p.displacement,
                    mean_displacement: prediction.map_or(f64::NAN, |pr| pr.mean_displacement(t)),
                    group_velocity: p.group_velocity,
                    k_center: p.k_center,
                })
            })
            .collect()
    }
}

/// Linear interpolation of a sampled series at `t`.
fn value_at(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&x| x < t);
    if i == 0 {
        return values[0];
    }
    if i >= times.len() {
        return values[times.len() - 1];
    }
    let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    values[i - 1] + w * (values[i] - values[i - 1])
}

/// Largest relative width change over the samples whose edge occupancy is
/// below [`SHAPE_EDGE_LIMIT`].
pub fn width_change(series: &ObservableSeries) -> f64 {
    let w: Vec<f64> = series
        .width
        .iter()
        .zip(&series.edge_occupancy)
        .filter(|(_, e)| **e < SHAPE_EDGE_LIMIT)
        .map(|(w, _)| *w)
        .collect();
    if w.is_empty() {
        return f64::NAN;
    }
    max_relative_change(&w)
}

/// Rows shared by every numeric arm: norm, shape, and the packet's center
/// and momentum against the analytic trajectory.
fn standard_rows(report: &mut ComparisonReport, cfg: &ScenarioConfig, prefix: &str, series: &ObservableSeries, predicted: &[PredictedRow], packet: &PacketParams) {
    let name = |q: &str| if prefix.is_empty() { q.to_string() } else { format!("{prefix}{q}") };
    report.check(&name("norm_drift"), cfg.tolerance("norm_drift", 1e-9), series.max_norm_drift(), Tolerance::AtMost);
    report.check(&name("width_change"), cfg.tolerance("width_change", 0.01), width_change(series), Tolerance::AtMost);
    let center_err = series
        .center
        .iter()
        .zip(predicted)
        .map(|(c, p)| (c - (packet.center + p.displacement)).abs())
        .fold(0.0, f64::max);
    report.check(&name("center_tracking"), 0.0, center_err, Tolerance::Absolute(cfg.tolerance("center_tracking", 0.5)));
    let k_err = series
        .central_momentum
        .iter()
        .zip(predicted)
        .map(|(k, p)| wrap_momentum(k - p.k_center).abs())
        .fold(0.0, |m: f64, x| if x.is_nan() { f64::INFINITY } else { m.max(x) });
    report.check(&name("momentum_tracking"), 0.0, k_err, Tolerance::Absolute(cfg.tolerance("momentum_tracking", 1e-2)));
}

fn numeric_files(
    files: &mut Vec<(String, String)>,
    suffix: &str,
    run: &EvolutionRun,
    predicted: &[PredictedRow],
    unit: &TimeUnit,
    fmt: Fmt,
    extra: &[String],
) {
    let name = |stem: &str| format!("{stem}{suffix}.csv");
    files.push((name("envelope"), csv::envelope_csv(&run.series.times, &run.snapshots, unit, fmt, extra)));
    files.push((name("observables"), csv::observables_csv(&run.series, unit, fmt, extra)));
    files.push((name("predicted"), csv::predicted_csv(predicted, unit, fmt, extra)));
}

fn header_notes(cfg: &ScenarioConfig, unit: &TimeUnit) -> Vec<String> {
    let mut notes = vec![format!("scenario: {}", cfg.kind())];
    if let Some(l) = cfg.lattice {
        notes.push(format!("lattice: {:?} N={} J={} offset={}", l.kind, l.sites, l.hopping, l.position_offset));
    }
    if let Some(p) = cfg.packet {
        notes.push(format!("packet: k0={} N_A={} alpha={}", p.k0, p.center, p.alpha));
    }
    if let Some(f) = &cfg.field {
        notes.push(format!("field: {}", serde_json::to_string(f).expect("field serializes")));
        notes.extend(f.advisories().into_iter().map(|a| format!("advisory: {a}")));
    }
    if let Some(f) = &cfg.flux {
        notes.push(format!("flux: {}", serde_json::to_string(f).expect("flux serializes")));
    }
    if let Some(g) = &cfg.grid {
        notes.push(format!("grid: t=[{}, {}] eps={} sample_every={} method={:?}", g.t_start, g.t_end, g.eps, g.sample_every, g.method));
    }
    notes.push(format!("time_unit: {} = {:.17e}", unit.name, unit.scale));
    notes
}

/// Run a scenario: merge with its preset, evolve, compare, render files.
pub fn run_scenario(config: ScenarioConfig) -> Result<ScenarioOutcome> {
    let cfg = resolve(config)?;
    let kind = cfg.kind();
    let unit = time_unit(&cfg);
    let fmt = Fmt(cfg.precision());
    let prediction = prediction_for(&cfg)?;
    let mut report = ComparisonReport::new(format!("bloch-drive report: {kind}"));
    for n in header_notes(&cfg, &unit) {
        report.note(n);
    }
    let extra = vec![format!("scenario: {kind}")];
    let mut files = Vec::new();
    let mut arms = Vec::new();

    match kind {
        ScenarioKind::ShakingSweep => {
            let s = cfg.sweep.as_ref().expect("validated");
            let lattice = cfg.lattice()?;
            let packet = cfg.packet()?;
            let points = sweep_shaking(&s.n, &s.amplitudes, (s.omega_min, s.omega_max), s.omega_points, lattice.hopping, packet.k0)?;
            files.push(("sweep.csv".into(), sweep_csv(&points, fmt, &extra)));
            for &n in &s.n {
                for &fa in &s.amplitudes {
                    let low = crate::analytic::bt_shaking_max(n, fa, 1.0, lattice.hopping, packet.k0)?;
                    let high = crate::analytic::bt_shaking_max(n, fa, 10.0, lattice.hopping, packet.k0)?;
                    let needed = if n == 1 && fa == 1.0 { cfg.tolerance("suppression_ratio", 5.0) } else { 1.0 };
                    report.check(&format!("suppression_ratio_n{n}_fa{fa}"), needed, low / high, Tolerance::AtLeast);
                }
            }
        }
        _ => {
            let arm = Arm::from_config(&cfg)?;
            let (psi0, run) = match kind {
                // the three arms are independent
                ScenarioKind::DynamicLocalization => dynamic_localization(&cfg, &arm, &mut report, &mut arms)?,
                _ => arm.run()?,
            };
            let predicted = arm.predicted(&run.series.times, prediction.as_ref())?;
            standard_rows(&mut report, &cfg, "", &run.series, &predicted, &arm.packet);
            match kind {
                ScenarioKind::BlochOscillation => bloch_oscillation(&cfg, &run.series, prediction.as_ref().expect("BO"), &mut report),
                ScenarioKind::BlochTranslation => {
                    bloch_translation(&cfg, &arm, &psi0, &run, prediction.as_ref().expect("BT"), &mut report)?
                }
                ScenarioKind::SuperBloch => super_bloch(&cfg, &run.series, prediction.as_ref().expect("SBO"), &mut report),
                ScenarioKind::PulseTrain => pulse_train(&cfg, &arm, &run.series, &mut report)?,
                ScenarioKind::RingChainEquivalence => {
                    let ring_run = ring_chain(&cfg, &arm, &run, &mut report)?;
                    let ring_arm = Arm { lattice: ring_lattice(&arm.lattice)?, drive: ring_drive(&arm)?, ..arm.clone() };
                    let ring_pred = ring_arm.predicted(&ring_run.series.times, prediction.as_ref())?;
                    standard_rows(&mut report, &cfg, "ring_", &ring_run.series, &ring_pred, &ring_arm.packet);
                    numeric_files(&mut files, "_ring", &ring_run, &ring_pred, &unit, fmt, &extra);
                    arms.push(("ring".into(), ring_run.series.clone()));
                }
                ScenarioKind::Custom => custom(&cfg, &arm, &psi0, &run, &mut report)?,
                ScenarioKind::DynamicLocalization | ScenarioKind::ShakingSweep => {}
            }
            numeric_files(&mut files, "", &run, &predicted, &unit, fmt, &extra);
            arms.insert(0, ("main".into(), run.series));
        }
    }
    files.push(("report.txt".into(), report.render()));
    Ok(ScenarioOutcome { kind, config: cfg, report, prediction, arms, files })
}

/// Analytic-only counterpart of [`run_scenario`]: the phenomenon
/// prediction and `predicted.csv` on the scenario's sample times.
pub fn predict_scenario(config: ScenarioConfig) -> Result<(Option<PhenomenonPrediction>, OutputFiles)> {
    let cfg = resolve(config)?;
    let prediction = prediction_for(&cfg)?;
    let mut files = Vec::new();
    if cfg.kind().is_numeric() {
        let arm = Arm::from_config(&cfg)?;
        let times: Vec<f64> = (0..=arm.grid.steps)
            .filter(|n| n % arm.sample_every == 0 || *n == arm.grid.steps)
            .map(|n| arm.grid.time(n))
            .collect();
        let rows = arm.predicted(&times, prediction.as_ref())?;
        let extra = vec![format!("scenario: {}", cfg.kind())];
        files.push(("predicted.csv".into(), csv::predicted_csv(&rows, &time_unit(&cfg), Fmt(cfg.precision()), &extra)));
    }
    Ok((prediction, files))
}

fn bloch_oscillation(cfg: &ScenarioConfig, s: &ObservableSeries, pred: &PhenomenonPrediction, report: &mut ComparisonReport) {
    let period = fit_period(&s.times, &s.center, pred.period);
    report.check("period", pred.period, period, Tolerance::Relative(cfg.tolerance("period", 0.02)));
    report.check("extent", pred.extent, peak_to_peak(&s.center), Tolerance::Relative(cfg.tolerance("extent", 0.03)));
    let back = value_at(&s.times, &s.center, pred.period) - s.center[0];
    report.check("return_to_start", 0.0, back, Tolerance::Absolute(cfg.tolerance("return_to_start", 0.5)));
}

/// Mean velocity over the whole drive periods contained in the run.
fn periodic_drift(s: &ObservableSeries, period: f64) -> f64 {
    let t_end = *s.times.last().expect("non-empty series");
    let m = ((t_end - s.times[0]) / period + 1e-9).floor().max(1.0);
    let t1 = s.times[0] + m * period;
    (value_at(&s.times, &s.center, t1) - s.center[0]) / (t1 - s.times[0])
}

fn bloch_translation(
    cfg: &ScenarioConfig,
    arm: &Arm,
    psi0: &StateVector,
    run: &EvolutionRun,
    pred: &PhenomenonPrediction,
    report: &mut ComparisonReport,
) -> Result<()> {
    let s = &run.series;
    let drift = periodic_drift(s, pred.period);
    report.check("drift_velocity", pred.drift_velocity, drift, Tolerance::Relative(cfg.tolerance("drift_velocity", 0.02)));
    let shaking = s
        .times
        .iter()
        .zip(&s.center)
        .map(|(t, c)| (c - s.center[0] - pred.drift_velocity * (t - s.times[0])).abs())
        .fold(0.0, f64::max);
    report.check("shaking_max", pred.shaking_max.unwrap_or(f64::NAN), shaking, Tolerance::Absolute(cfg.tolerance("shaking_max", 0.1)));
    let fid = analytic_fidelity(arm, psi0, run)?;
    report.check("fidelity_min", cfg.tolerance("fidelity_min", 0.999), fid, Tolerance::AtLeast);
    Ok(())
}

/// Smallest fidelity between the numeric snapshots and the exact analytic
/// propagation of the initial state.
fn analytic_fidelity(arm: &Arm, psi0: &StateVector, run: &EvolutionRun) -> Result<f64> {
    let times = &run.series.times;
    let mut psi = psi0.clone();
    let mut worst = f64::INFINITY;
    for (i, snap) in run.snapshots.iter().enumerate() {
        if i > 0 {
            psi = match (&arm.drive, arm.lattice.kind) {
                (Drive::Field(f), LatticeKind::Chain) => chain_propagate_state(&psi, f, &arm.lattice, times[i - 1], times[i])?,
                (Drive::Flux(f), LatticeKind::Ring) => ring_propagate_state(&psi, f, &arm.lattice, times[i - 1], times[i])?,
                _ => return Err(Error::arg("drive does not match lattice")),
            };
        }
        worst = worst.min(psi.fidelity(snap));
    }
    Ok(worst)
}

fn super_bloch(cfg: &ScenarioConfig, s: &ObservableSeries, pred: &PhenomenonPrediction, report: &mut ComparisonReport) {
    let tau = match cfg.field {
        Some(FieldProfile::AcDc { omega, .. }) => 2.0 * PI / omega,
        _ => unreachable!("validated ac_dc field"),
    };
    let (ts, avg) = moving_average(&s.times, &s.center, tau);
    let period = fit_period(&ts, &avg, pred.period);
    report.check("period", pred.period, period, Tolerance::Relative(cfg.tolerance("period", 0.03)));
    report.check("extent", pred.extent, peak_to_peak(&avg), Tolerance::Relative(cfg.tolerance("extent", 0.05)));
    let track = ts
        .iter()
        .zip(&avg)
        .map(|(t, a)| (a - s.center[0] - pred.mean_displacement(*t)).abs())
        .fold(0.0, f64::max);
    report.check("mean_displacement_tracking", 0.0, track, Tolerance::Absolute(cfg.tolerance("mean_displacement_tracking", 2.0)));
}

fn dynamic_localization(
    cfg: &ScenarioConfig,
    arm: &Arm,
    report: &mut ComparisonReport,
    arms: &mut Vec<(String, ObservableSeries)>,
) -> Result<(StateVector, EvolutionRun)> {
    let FieldProfile::AcDc { n, delta, amplitude, omega } = cfg.field()?.clone() else {
        unreachable!("validated ac_dc field")
    };
    let detuned = |scale: f64| -> Result<Arm> {
        Ok(Arm { drive: Drive::Field(FieldProfile::ac_dc(n, delta, amplitude * scale, omega)?), ..arm.clone() })
    };
    let (minus, plus) = (detuned(0.9)?, detuned(1.1)?);
    let (main, lo, hi) = std::thread::scope(|s| {
        let a = s.spawn(|| minus.run());
        let b = s.spawn(|| plus.run());
        let m = arm.run();
        (m, a.join().expect("arm thread"), b.join().expect("arm thread"))
    });
    let (main, lo, hi) = (main?, lo?, hi?);
    let tau = 2.0 * PI / omega;
    let j = arm.lattice.hopping;
    let speed = |s: &ObservableSeries| periodic_drift(s, tau).abs();
    report.check("drift_speed_root", cfg.tolerance("drift_speed_root", 0.01 * 2.0 * j), speed(&main.1.series), Tolerance::AtMost);
    report.check("drift_speed_minus10", cfg.tolerance("drift_speed_detuned", 0.05 * 2.0 * j), speed(&lo.1.series), Tolerance::AtLeast);
    report.check("drift_speed_plus10", cfg.tolerance("drift_speed_detuned", 0.05 * 2.0 * j), speed(&hi.1.series), Tolerance::AtLeast);
    for (label, a, r) in [("minus10", &minus, &lo.1), ("plus10", &plus, &hi.1)] {
        let pred = match &a.drive {
            Drive::Field(FieldProfile::AcDc { n, amplitude, omega, .. }) => {
                predict_bloch_translation(*n, *amplitude, *omega, j, a.packet.k0)?
            }
            _ => unreachable!(),
        };
        report.check(&format!("drift_velocity_{label}"), pred.drift_velocity, periodic_drift(&r.series, tau), Tolerance::Relative(cfg.tolerance("drift_velocity", 0.02)));
        arms.push((label.to_string(), r.series.clone()));
    }
    Ok(main)
}

fn pulse_train(cfg: &ScenarioConfig, arm: &Arm, s: &ObservableSeries, report: &mut ComparisonReport) -> Result<()> {
    let field = cfg.field()?;
    let pulses = field.pulse_impulses().expect("validated pulse train");
    let half_width = match field {
        FieldProfile::GaussianTrain { sigma, .. } => 5.0 * sigma,
        FieldProfile::SawtoothTrain { pulses } => pulses.iter().map(|p| 0.5 * p.width).fold(0.0, f64::max) + 0.5,
        _ => unreachable!(),
    };
    let t_end = *s.times.last().expect("samples");
    let j = arm.lattice.hopping;
    let mut k = arm.packet.k0;
    for (i, &(center, impulse)) in pulses.iter().enumerate() {
        k -= impulse;
        let next = pulses.get(i + 1).map_or(t_end, |p| p.0);
        if center + half_width >= next - half_width {
            continue;
        }
        let mid = 0.5 * (center + next);
        let idx = s.nearest(mid).expect("samples");
        let measured_k = s.central_momentum[idx];
        let err = wrap_momentum(measured_k - k);
        report.check(&format!("k_after_pulse_{}", i + 1), wrap_momentum(k), wrap_momentum(k) + err, Tolerance::Absolute(cfg.tolerance("k_after_pulse", 0.02)));
        let v = lsq_slope(&s.times, &s.center, center + half_width, next - half_width);
        report.check(&format!("v_plateau_{}", i + 1), 2.0 * j * k.sin(), v, Tolerance::Absolute(cfg.tolerance("v_plateau", 0.05 * j)));
    }
    Ok(())
}

fn ring_lattice(chain: &LatticeSpec) -> Result<LatticeSpec> {
    Ok(LatticeSpec::ring(chain.sites, chain.hopping)?.with_offset(chain.position_offset))
}

fn ring_drive(arm: &Arm) -> Result<Drive> {
    match &arm.drive {
        Drive::Field(f) => Ok(Drive::Flux(FluxProfile::from_field(f.clone()))),
        Drive::Flux(_) => Err(Error::Config("ring_chain_equivalence starts from a chain field".into())),
    }
}

fn ring_chain(cfg: &ScenarioConfig, arm: &Arm, chain_run: &EvolutionRun, report: &mut ComparisonReport) -> Result<EvolutionRun> {
    let ring = Arm { lattice: ring_lattice(&arm.lattice)?, drive: ring_drive(arm)?, ..arm.clone() };
    let (_, ring_run) = ring.run()?;
    let n = arm.lattice.sites as f64;
    let clearance = cfg.tolerance("edge_clearance", 20.0);
    let mut worst: f64 = 0.0;
    let mut counted = 0;
    for (i, (a, b)) in chain_run.snapshots.iter().zip(&ring_run.snapshots).enumerate() {
        let c = chain_run.series.center[i];
        let w = chain_run.series.width[i];
        if c - 3.0 * w < clearance || c + 3.0 * w > n - 1.0 - clearance {
            continue;
        }
        counted += 1;
        worst = worst.max(a.probability_distance(b));
    }
    report.note(format!("ring/chain distance over {counted} of {} samples (chain packet ≥ {clearance} sites from the ends)", chain_run.snapshots.len()));
    report.check("probability_distance_max", cfg.tolerance("probability_distance_max", 1e-3), worst, Tolerance::AtMost);
    Ok(ring_run)
}

fn custom(cfg: &ScenarioConfig, arm: &Arm, psi0: &StateVector, run: &EvolutionRun, report: &mut ComparisonReport) -> Result<()> {
    let edge_ok = run
        .series
        .edge_occupancy
        .iter()
        .all(|e| *e < EDGE_PRECONDITION);
    if arm.lattice.kind == LatticeKind::Ring || edge_ok {
        let fid = analytic_fidelity(arm, psi0, run)?;
        report.check("fidelity_min", cfg.tolerance("fidelity_min", 0.999), fid, Tolerance::AtLeast);
    } else {
        report.note("analytic fidelity skipped: the packet reaches the chain ends");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ScenarioKind, extra: &str) -> ScenarioConfig {
        let text = format!(
            r#"{{"scenario": "{}", "lattice": {{"kind": "chain", "sites": 120}},
                "packet": {{"k0": 1.5707963267948966, "n_a": 60, "alpha": 0.2}} {extra}}}"#,
            kind.name()
        );
        ScenarioConfig::from_json(&text).unwrap()
    }

    #[test]
    fn custom_free_packet_passes() {
        let cfg = small(ScenarioKind::Custom, r#", "grid": {"t_end": 5, "eps": 0.02, "sample_every": 5}"#);
        let out = run_scenario(cfg).unwrap();
        assert!(out.passed(), "{}", out.report);
        let names: Vec<&str> = out.files.iter().map(|f| f.0.as_str()).collect();
        assert_eq!(names, ["envelope.csv", "observables.csv", "predicted.csv", "report.txt"]);
    }

    #[test]
    fn run_is_deterministic() {
        let cfg = small(
            ScenarioKind::Custom,
            r#", "field": {"type": "ac_dc", "n": 1, "f_a": 1.0, "omega": 2.0}, "grid": {"t_end": 3, "eps": 0.01, "sample_every": 10}"#,
        );
        let a = run_scenario(cfg.clone()).unwrap();
        let b = run_scenario(cfg).unwrap();
        assert_eq!(a.files, b.files);
    }

    #[test]
    fn ring_custom_uses_flux() {
        let text = r#"{"scenario": "custom", "lattice": {"kind": "ring", "sites": 64},
            "flux": {"source": "direct", "profile": {"type": "constant", "f0": 0.3}},
            "packet": {"k0": 0.5, "n_a": 32, "alpha": 0.12},
            "grid": {"t_end": 4, "eps": 0.05, "sample_every": 4}}"#;
        let out = run_scenario(ScenarioConfig::from_json(text).unwrap()).unwrap();
        assert!(out.passed(), "{}", out.report);
    }

    #[test]
    fn boundary_contamination_surfaces() {
        let cfg = small(ScenarioKind::Custom, r#", "grid": {"t_end": 40, "eps": 0.05, "sample_every": 5}"#);
        assert!(matches!(run_scenario(cfg), Err(Error::BoundaryContamination { .. })));
    }

    #[test]
    fn config_errors_are_config_errors() {
        let cfg = small(ScenarioKind::PulseTrain, r#", "field": {"type": "constant", "f0": 1.0}"#);
        assert!(matches!(run_scenario(cfg), Err(Error::Config(_))));
    }

    #[test]
    fn predict_only() {
        let (pred, files) = predict_scenario(ScenarioConfig { scenario: Some(ScenarioKind::BlochOscillation), ..Default::default() }).unwrap();
        assert!((pred.unwrap().extent - 20.0).abs() < 1e-12);
        assert_eq!(files.len(), 1);
        assert!(files[0].1.starts_with(csv::CSV_VERSION_LINE));
    }

    #[test]
    fn out_dir_priority() {
        let mut cfg = preset(ScenarioKind::Custom);
        assert_eq!(resolve_out_dir(Some(Path::new("x")), &cfg), PathBuf::from("x"));
        cfg.output.directory = Some("from_config".into());
        if std::env::var_os(OUT_DIR_ENV).is_none() {
            assert_eq!(resolve_out_dir(None, &cfg), PathBuf::from("from_config"));
        }
    }
}
