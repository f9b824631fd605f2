//! Numeric evolution against the exact propagators, for random drives.

use bloch_drive::analytic::{chain_propagate_state, gwp_build, gwp_evolve_params, ring_propagate_state, PacketParams};
use bloch_drive::fields::{Drive, FieldProfile, FluxProfile};
use bloch_drive::lattice::{wrap_momentum, LatticeSpec, TimeGrid};
use bloch_drive::numeric::{central_momentum, run_evolution, Method};
use proptest::prelude::*;

fn ac_dc() -> impl Strategy<Value = FieldProfile> {
    (0..3i32, -0.3..0.3f64, 0.0..2.0f64, 0.5..3.0f64)
        .prop_map(|(n, delta, amplitude, omega)| FieldProfile::ac_dc(n, delta, amplitude, omega).unwrap())
}

fn tabulated() -> impl Strategy<Value = FieldProfile> {
    prop::collection::vec(-0.8..0.8f64, 7).prop_map(|values| {
        let times = (0..7).map(|i| 0.5 * i as f64).collect();
        FieldProfile::tabulated(times, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chain_numeric_matches_exact(field in prop_oneof![ac_dc(), tabulated()], k0 in -3.0..3.0f64) {
        let lattice = LatticeSpec::chain(90, 1.0).unwrap();
        let packet = PacketParams::new(k0, 45.0, 0.3).unwrap();
        let psi = gwp_build(&packet, &lattice).unwrap();
        let grid = TimeGrid::with_step(0.0, 3.0, 2e-3).unwrap();
        let numeric = run_evolution(&psi, &lattice, &Drive::Field(field.clone()), &grid, Method::ExactDiag, 100).unwrap();
        let exact = chain_propagate_state(&psi, &field, &lattice, 0.0, 3.0).unwrap();
        prop_assert!(numeric.final_state.fidelity(&exact) > 1.0 - 1e-6);
    }

    #[test]
    fn ring_numeric_matches_exact(phi_a in 0.0..2.0f64, omega in 0.5..3.0f64, quanta in -3.0..3.0f64, k0 in -3.0..3.0f64) {
        let lattice = LatticeSpec::ring(64, 1.0).unwrap();
        let psi = gwp_build(&PacketParams::new(k0, 20.0, 0.4).unwrap(), &lattice).unwrap();
        let grid = TimeGrid::with_step(0.0, 2.0, 2e-3).unwrap();
        for flux in [FluxProfile::sinusoidal(phi_a, omega).unwrap(), FluxProfile::static_quanta(quanta, 64)] {
            let numeric = run_evolution(&psi, &lattice, &Drive::Flux(flux.clone()), &grid, Method::ExactDiag, 1000).unwrap();
            let exact = ring_propagate_state(&psi, &flux, &lattice, 0.0, 2.0).unwrap();
            prop_assert!(numeric.final_state.fidelity(&exact) > 1.0 - 1e-6);
        }
    }

    #[test]
    fn momentum_follows_impulse(field in tabulated(), k0 in -3.0..3.0f64) {
        let lattice = LatticeSpec::chain(120, 1.0).unwrap();
        let params = PacketParams::new(k0, 60.0, 0.2).unwrap();
        let drive = Drive::Field(field.clone());
        let psi = gwp_build(&params, &lattice).unwrap();
        let exact = chain_propagate_state(&psi, &field, &lattice, 0.0, 3.0).unwrap();
        let k = central_momentum(&exact, &lattice).unwrap();
        let predicted = gwp_evolve_params(&params, &drive, 1.0, 3.0).unwrap().k_center;
        prop_assert!(wrap_momentum(k - predicted).abs() < 1e-8);
        prop_assert!(wrap_momentum(predicted - (k0 - field.impulse(0.0, 3.0).unwrap())).abs() < 1e-9);
    }

    #[test]
    fn split_step_converges_to_exact(field in ac_dc(), k0 in -3.0..3.0f64) {
        let lattice = LatticeSpec::chain(80, 1.0).unwrap();
        let psi = gwp_build(&PacketParams::new(k0, 40.0, 0.3).unwrap(), &lattice).unwrap();
        let drive = Drive::Field(field);
        let grid = TimeGrid::with_step(0.0, 2.0, 2e-3).unwrap();
        let a = run_evolution(&psi, &lattice, &drive, &grid, Method::ExactDiag, 1000).unwrap();
        let b = run_evolution(&psi, &lattice, &drive, &grid, Method::SplitStep, 1000).unwrap();
        prop_assert!(a.final_state.fidelity(&b.final_state) > 1.0 - 1e-6);
    }
}
