use std::f64::consts::PI;

use super::config::{GridBlock, ScenarioConfig, ScenarioKind, SweepBlock};
use super::csv::TimeUnit;
use crate::analytic::PacketParams;
use crate::bessel::bessel_j0_root;
use crate::fields::FieldProfile;
use crate::lattice::LatticeSpec;
use crate::numeric::Method;

/// Lattice and packet shared by the figure presets.
pub const SITES: usize = 200;
pub const ALPHA: f64 = 0.1;
/// Gaussian pulse width of the pulse-train preset.
pub const PULSE_SIGMA: f64 = 0.886;
/// Fixed step of the pulse-train preset, in 1/J.
pub const PULSE_EPS: f64 = 5.9e-3;
/// Default step, in 1/J.
pub const DEFAULT_EPS: f64 = 0.01;

pub fn description(kind: ScenarioKind) -> &'static str {
    match kind {
        ScenarioKind::BlochOscillation => "static force F0 = 0.2: period 2π/F0, extent 4J/F0",
        ScenarioKind::BlochTranslation => "resonant AC+DC drive n = 1, F_A = 1, ω = 1: drift with periodic shaking",
        ScenarioKind::SuperBloch => "detuned drive δ = 0.02: slow oscillation of the averaged trajectory",
        ScenarioKind::DynamicLocalization => "n = 0 with F_A/ω at the first zero of J0, plus ±10% arms",
        ScenarioKind::PulseTrain => "four Gaussian π/2 pulses: accelerate, stop, turn, stop",
        ScenarioKind::RingChainEquivalence => "chain under F(t) against the ring threaded by φ = −I(t)",
        ScenarioKind::ShakingSweep => "largest shaking |D − D̄| across drive frequencies (analytic only)",
        ScenarioKind::Custom => "user-defined lattice, drive, packet and grid",
    }
}

fn chain() -> LatticeSpec {
    LatticeSpec::chain(SITES, 1.0).expect("valid preset lattice")
}

fn packet(k0: f64) -> PacketParams {
    PacketParams { k0, center: (SITES / 2) as f64, alpha: ALPHA }
}

fn grid(t_end: f64, eps: f64, sample_every: usize) -> GridBlock {
    GridBlock { t_start: 0.0, t_end, eps, sample_every, method: Method::ExactDiag }
}

fn fig2_field() -> FieldProfile {
    FieldProfile::AcDc { n: 1, delta: 0.0, amplitude: 1.0, omega: 1.0 }
}

/// Pulse centres `n·N/(10J)`, `n = 1..=4`.
pub fn pulse_centers() -> Vec<f64> {
    (1..=4).map(|n| n as f64 * SITES as f64 / 10.0).collect()
}

pub fn preset(kind: ScenarioKind) -> ScenarioConfig {
    let tau = 2.0 * PI;
    let base = ScenarioConfig {
        scenario: Some(kind),
        lattice: Some(chain()),
        packet: Some(packet(0.5 * PI)),
        ..ScenarioConfig::default()
    };
    match kind {
        ScenarioKind::BlochOscillation => ScenarioConfig {
            field: Some(FieldProfile::Constant { f0: 0.2 }),
            grid: Some(grid(2.0 * 2.0 * PI / 0.2, DEFAULT_EPS, 10)),
            ..base
        },
        ScenarioKind::BlochTranslation | ScenarioKind::RingChainEquivalence => ScenarioConfig {
            field: Some(fig2_field()),
            grid: Some(grid(5.0 * tau, tau / 628.0, 10)),
            ..base
        },
        ScenarioKind::SuperBloch => ScenarioConfig {
            field: Some(FieldProfile::AcDc { n: 1, delta: 0.02, amplitude: 1.0, omega: 1.0 }),
            grid: Some(grid(1.25 * tau / 0.02, DEFAULT_EPS, 20)),
            ..base
        },
        ScenarioKind::DynamicLocalization => ScenarioConfig {
            field: Some(FieldProfile::AcDc {
                n: 0,
                delta: 0.0,
                amplitude: bessel_j0_root(1).expect("first root"),
                omega: 1.0,
            }),
            grid: Some(grid(10.0 * tau, tau / 628.0, 10)),
            ..base
        },
        ScenarioKind::PulseTrain => ScenarioConfig {
            packet: Some(packet(0.0)),
            field: Some(FieldProfile::GaussianTrain { sigma: PULSE_SIGMA, centers: pulse_centers() }),
            grid: Some(grid(17_000.0 * PULSE_EPS, PULSE_EPS, 10)),
            ..base
        },
        ScenarioKind::ShakingSweep => ScenarioConfig {
            sweep: Some(SweepBlock {
                n: vec![1, 2],
                amplitudes: vec![1.0, 2.0],
                omega_min: 0.5,
                omega_max: 10.0,
                omega_points: 39,
            }),
            ..base
        },
        ScenarioKind::Custom => ScenarioConfig {
            field: Some(FieldProfile::Constant { f0: 0.0 }),
            grid: Some(grid(10.0, DEFAULT_EPS, 10)),
            ..base
        },
    }
}

/// Scale of the `t` column in the scenario's CSV files, matching the
/// natural axis of each phenomenon.
pub fn time_unit(cfg: &ScenarioConfig) -> TimeUnit {
    let omega = match cfg.field {
        Some(FieldProfile::AcDc { omega, .. }) => omega,
        _ => 1.0,
    };
    match cfg.kind() {
        ScenarioKind::BlochTranslation | ScenarioKind::DynamicLocalization | ScenarioKind::RingChainEquivalence => {
            TimeUnit::named("tau", 2.0 * PI / omega)
        }
        ScenarioKind::SuperBloch => match cfg.field {
            Some(FieldProfile::AcDc { delta, omega, .. }) if delta != 0.0 => {
                TimeUnit::named("tau_sbo", 2.0 * PI / (delta * omega).abs())
            }
            _ => TimeUnit::natural(),
        },
        ScenarioKind::PulseTrain => match cfg.lattice {
            Some(l) => TimeUnit::named("N/2J", l.sites as f64 / (2.0 * l.hopping)),
            None => TimeUnit::natural(),
        },
        _ => TimeUnit::natural(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for kind in ScenarioKind::ALL {
            preset(kind).validate().unwrap_or_else(|e| panic!("{kind}: {e}"));
        }
    }

    #[test]
    fn pulse_train_grid() {
        let p = preset(ScenarioKind::PulseTrain);
        let g = p.grid.unwrap().time_grid().unwrap();
        assert_eq!(g.steps, 17_000);
        assert!((g.step() - PULSE_EPS).abs() < 1e-15);
        assert_eq!(pulse_centers(), vec![20.0, 40.0, 60.0, 80.0]);
    }

    #[test]
    fn units() {
        let u = time_unit(&preset(ScenarioKind::SuperBloch));
        assert_eq!(u.name, "tau_sbo");
        assert!((u.scale - 100.0 * PI).abs() < 1e-9);
        assert_eq!(time_unit(&preset(ScenarioKind::PulseTrain)).scale, 100.0);
    }
}
