//! Property tests for the model invariants: trajectory nonnegativity and
//! permutation equivariance, the capacity/energy identity chain, and
//! determinism of the Monte Carlo ensemble.

use proptest::prelude::*;

use thermocog::cognition::{
    boltzmann_factor, capacity, capacity_lower_bound, energy_bound, ThermalContext,
};
use thermocog::dynamics::{integrate, CognitiveStructure, InputChannel, Subsumer};
use thermocog::matching::Shape;
use thermocog::szilard::{run_records, run_records_sequential, EngineConfig};

fn arb_shape(len: usize) -> impl Strategy<Value = Shape> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|bits| Shape::new(bits).unwrap())
}

#[derive(Debug, Clone)]
struct SystemSpec {
    subsumers: Vec<(Shape, f64)>,
    inputs: Vec<(Shape, f64)>,
    gain: f64,
}

// Bounds keep the quadratic coupling term clear of finite-time blow-up
// over the half-unit horizon used below: total strength obeys
// S' <= 2S + 0.05 S^2 with S(0) <= 3, which stays finite past t = 1.3.
fn arb_system() -> impl Strategy<Value = SystemSpec> {
    (2usize..=4).prop_flat_map(|len| {
        (
            proptest::collection::vec((arb_shape(len), 0.0f64..1.0), 1..=3),
            proptest::collection::vec((arb_shape(len), 0.0f64..1.0), 0..=2),
            0.0f64..0.05,
        )
            .prop_map(|(subsumers, inputs, gain)| SystemSpec {
                subsumers,
                inputs,
                gain,
            })
    })
}

fn build(spec: &SystemSpec) -> (CognitiveStructure, Vec<InputChannel>) {
    let subsumers = spec
        .subsumers
        .iter()
        .map(|(shape, strength)| Subsumer::new(shape.clone(), *strength).unwrap())
        .collect();
    let structure = CognitiveStructure::new(subsumers, spec.gain).unwrap();
    let inputs = spec
        .inputs
        .iter()
        .map(|(shape, rate)| InputChannel::new(shape.clone(), *rate).unwrap())
        .collect();
    (structure, inputs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_stay_nonnegative(spec in arb_system()) {
        let (structure, inputs) = build(&spec);
        let trajectory = integrate(&structure, &inputs, 0.05, 0.5).unwrap();
        for state in trajectory.states() {
            for &s in state {
                prop_assert!(s >= 0.0);
            }
        }
    }

    #[test]
    fn permuting_subsumers_permutes_the_trajectory(spec in arb_system()) {
        prop_assume!(spec.subsumers.len() >= 2);
        let (structure, inputs) = build(&spec);
        let trajectory = integrate(&structure, &inputs, 0.05, 0.5).unwrap();

        // Rotate the subsumer order by one.
        let mut rotated = spec.clone();
        rotated.subsumers.rotate_left(1);
        let (rotated_structure, _) = build(&rotated);
        let rotated_trajectory =
            integrate(&rotated_structure, &inputs, 0.05, 0.5).unwrap();

        let n = spec.subsumers.len();
        for (state, rotated_state) in trajectory.states().iter().zip(rotated_trajectory.states()) {
            for i in 0..n {
                let a = state[(i + 1) % n];
                let b = rotated_state[i];
                // Summation order inside the coupling term changes with the
                // permutation, so allow roundoff-level slack.
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn capacity_energy_chain_commutes(
        k in 0.1f64..10.0,
        ratio in -0.9f64..3.0,
        affinity in 0.01f64..=1.0,
        dt in 0.01f64..10.0,
        temperature in 1.0f64..1000.0,
    ) {
        let delta_k = ratio * k;
        let ctx = ThermalContext::new(temperature).unwrap();
        let cap = capacity(k, delta_k, affinity, dt).unwrap();
        let energy = energy_bound(k, delta_k, &ctx).unwrap();
        let via_capacity = cap * affinity * dt * ctx.thermal_energy();
        prop_assert!((via_capacity - energy).abs() <= 1e-12 * energy.abs().max(f64::MIN_POSITIVE));

        // The weighting factor inverts the knowledge ratio.
        let factor = boltzmann_factor(energy, &ctx).value;
        let expected = k / (k + delta_k);
        prop_assert!((factor - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn capacity_dominates_the_bound_for_growth(
        k in 0.1f64..10.0,
        ratio in 0.01f64..3.0,
        affinity in 0.01f64..=1.0,
        dt in 0.01f64..10.0,
    ) {
        let delta_k = ratio * k;
        let cap = capacity(k, delta_k, affinity, dt).unwrap();
        let bound = capacity_lower_bound(k, delta_k, dt).unwrap();
        prop_assert!(cap >= bound);
        // Equality at perfect affinity, bit for bit.
        prop_assert_eq!(capacity(k, delta_k, 1.0, dt).unwrap(), bound);
    }

    #[test]
    fn ensembles_are_order_independent(
        epsilon in 0.0f64..0.49,
        cycles in 1u64..2000,
        seed in any::<u64>(),
    ) {
        let ctx = ThermalContext::new(300.0).unwrap();
        let config = EngineConfig::new(ctx, epsilon, cycles, seed).unwrap();
        prop_assert_eq!(run_records(&config), run_records_sequential(&config));
    }
}
