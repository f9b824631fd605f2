//! Pulse-train comparison and the analytic shaking sweep.

use std::fmt::Write as _;

use super::csv::{Fmt, CSV_VERSION_LINE};
use super::{resolve, ComparisonReport, ScenarioConfig, Tolerance};
use crate::analytic::{bt_shaking_max, gwp_build, signed_bessel};
use crate::error::{Error, Result};
use crate::fields::{Drive, FieldProfile, SawtoothPulse};
use crate::lattice::{LatticeSpec, StateVector, TimeGrid};
use crate::numeric::{run_evolution, Method};

/// Pulse centres and impulses must agree this closely between two trains.
pub const TRAIN_MATCH: f64 = 1e-9;

/// Triangle train with the centres and impulses of a Gaussian train; each
/// base width is `2√3·σ`.
pub fn sawtooth_counterpart(field: &FieldProfile) -> Result<FieldProfile> {
    match field {
        FieldProfile::GaussianTrain { sigma, .. } => {
            let pulses = field
                .pulse_impulses()
                .expect("gaussian train")
                .into_iter()
                .map(|(center, impulse)| SawtoothPulse { center, width: 2.0 * 3f64.sqrt() * sigma, impulse })
                .collect();
            FieldProfile::sawtooth_train(pulses)
        }
        FieldProfile::SawtoothTrain { .. } => Ok(field.clone()),
        _ => Err(Error::arg("sawtooth counterpart needs a gaussian train")),
    }
}

/// States at each of `times` (ascending, all ≥ `t0`), evolving `state`
/// from `t0` segment by segment with steps close to `eps`.
pub fn evolve_to_times(
    state: &StateVector,
    lattice: &LatticeSpec,
    drive: &Drive,
    t0: f64,
    times: &[f64],
    eps: f64,
    method: Method,
) -> Result<Vec<StateVector>> {
    let mut psi = state.clone();
    let mut t = t0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target < t {
            return Err(Error::arg("evolution times must be ascending"));
        }
        if target > t {
            let grid = TimeGrid::with_step(t, target, eps)?;
            psi = run_evolution(&psi, lattice, drive, &grid, method, grid.steps)?.final_state;
            t = target;
        }
        out.push(psi.clone());
    }
    Ok(out)
}

/// Evolve the same packet under two pulse trains and compare site
/// distributions halfway between successive pulses (and halfway between
/// the last pulse and the end of the run).
pub fn compare_trains(config_a: ScenarioConfig, config_b: ScenarioConfig) -> Result<ComparisonReport> {
    let a = resolve(config_a)?;
    let b = resolve(config_b)?;
    let (fa, fb) = (a.field()?, b.field()?);
    let (Some(pa), Some(pb)) = (fa.pulse_impulses(), fb.pulse_impulses()) else {
        return Err(Error::arg("compare_trains needs two pulse trains"));
    };
    if pa.len() != pb.len() {
        return Err(Error::arg(format!("trains have {} and {} pulses", pa.len(), pb.len())));
    }
    for (i, (x, y)) in pa.iter().zip(&pb).enumerate() {
        if (x.0 - y.0).abs() > TRAIN_MATCH {
            return Err(Error::arg(format!("pulse {} centres differ: {} vs {}", i + 1, x.0, y.0)));
        }
        if (x.1 - y.1).abs() > TRAIN_MATCH {
            return Err(Error::arg(format!("pulse {} impulses differ: {} vs {}", i + 1, x.1, y.1)));
        }
    }
    let lattice = a.lattice()?;
    let packet = a.packet()?;
    if b.lattice()? != lattice || b.packet()? != packet {
        return Err(Error::arg("compared trains must share lattice and packet"));
    }
    let grid = a.grid()?;
    let t_end = grid.t_end.min(b.grid()?.t_end);
    let mut times = Vec::new();
    for (i, &(c, _)) in pa.iter().enumerate() {
        let next = pa.get(i + 1).map_or(t_end, |p| p.0);
        times.push(0.5 * (c + next));
    }
    if times.iter().any(|&t| t <= grid.t_start || t > t_end) {
        return Err(Error::arg("post-pulse times fall outside the run"));
    }

    let psi0 = gwp_build(&packet, &lattice)?;
    let (da, db) = (Drive::Field(fa.clone()), Drive::Field(fb.clone()));
    let run = |d: &Drive| evolve_to_times(&psi0, &lattice, d, grid.t_start, &times, grid.eps, grid.method);
    let (sa, sb) = std::thread::scope(|s| {
        let h = s.spawn(|| run(&db));
        (run(&da), h.join().expect("train thread"))
    });
    let (sa, sb) = (sa?, sb?);

    let mut report = ComparisonReport::new("bloch-drive report: compare_trains");
    report.note(format!("train a: {}", serde_json::to_string(fa).expect("field serializes")));
    report.note(format!("train b: {}", serde_json::to_string(fb).expect("field serializes")));
    let tol = a.tolerance("train_distance", 1e-2);
    for (i, ((x, y), t)) in sa.iter().zip(&sb).zip(&times).enumerate() {
        report.note(format!("after pulse {}: t = {t}", i + 1));
        report.check(&format!("distance_after_pulse_{}", i + 1), tol, x.probability_distance(y), Tolerance::AtMost);
    }
    Ok(report)
}

/// One point of a shaking sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub n: i32,
    pub amplitude: f64,
    pub omega: f64,
    pub shaking_max: f64,
    pub drift_velocity: f64,
    /// `shaking_max` does not exceed the previous point of the same curve.
    pub decreasing: bool,
}

/// Largest shaking over a uniform ω grid, one curve per `(n, F_A)`.
pub fn sweep_shaking(
    n_list: &[i32],
    amplitudes: &[f64],
    omega_range: (f64, f64),
    points: usize,
    hopping: f64,
    k0: f64,
) -> Result<Vec<SweepPoint>> {
    let (lo, hi) = omega_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || points < 2 {
        return Err(Error::arg("sweep needs 0 < omega_min < omega_max and at least 2 points"));
    }
    let omegas: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let curves: Vec<(i32, f64)> = n_list.iter().flat_map(|&n| amplitudes.iter().map(move |&a| (n, a))).collect();
    let curve = |&(n, amplitude): &(i32, f64)| -> Result<Vec<SweepPoint>> {
        let mut prev = f64::INFINITY;
        omegas
            .iter()
            .map(|&omega| {
                let shaking_max = bt_shaking_max(n, amplitude, omega, hopping, k0)?;
                let drift_velocity = 2.0 * hopping * signed_bessel(n, amplitude / omega)? * k0.sin();
                let decreasing = shaking_max <= prev;
                prev = shaking_max;
                Ok(SweepPoint { n, amplitude, omega, shaking_max, drift_velocity, decreasing })
            })
            .collect()
    };
    let results: Vec<Result<Vec<SweepPoint>>> = std::thread::scope(|s| {
        let handles: Vec<_> = curves.iter().map(|c| s.spawn(move || curve(c))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep thread")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

pub fn sweep_csv(points: &[SweepPoint], fmt: Fmt, extra: &[String]) -> String {
    let mut s = String::new();
    s.push_str(CSV_VERSION_LINE);
    s.push('\n');
    s.push_str("# time_unit: 1/J = 1.00000000000000000e0\n");
    for e in extra {
        writeln!(s, "# {e}").unwrap();
    }
    s.push_str("n,amplitude,omega,shaking_max,drift_velocity,decreasing\n");
    for p in points {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            p.n,
            fmt.f(p.amplitude),
            fmt.f(p.omega),
            fmt.f(p.shaking_max),
            fmt.f(p.drift_velocity),
            u8::from(p.decreasing)
        )
        .unwrap();
    }
    s
}
