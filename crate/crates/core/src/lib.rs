//! Deterministic simulation of learning dynamics and their thermodynamic
//! cost.
//!
//! The crate is organized as a chain from pattern matching to energy:
//!
//! * [`matching`] — fixed-length binary shapes and the normalized lock-key
//!   affinity between them;
//! * [`dynamics`] — mass-action growth of subsumer strengths under external
//!   stimuli and pairwise self-interaction, integrated with fixed-step RK4
//!   against a closed-form oracle;
//! * [`cognition`] — knowledge-state transitions, channel capacity in nats
//!   per unit time, and the scaling to joules that bottoms out at the
//!   per-bit erasure bound;
//! * [`szilard`] — a Monte Carlo one-molecule engine with a noisy measuring
//!   demon, verifying the information-to-work conversion ceiling and the
//!   erasure accounting numerically.
//!
//! Everything is deterministic: integration is fixed-step, and Monte Carlo
//! cycles draw from per-cycle counter-keyed streams, so results are
//! bit-stable across runs and across the `parallel` feature (rayon-backed
//! ensembles, enabled by default).

pub mod cognition;
pub mod dynamics;
pub mod matching;
pub mod szilard;

pub use cognition::{
    boltzmann_factor, capacity, capacity_lower_bound, energy_bound, landauer_bound, ops_rate,
    report_block, BoltzmannFactor, CognitionError, MindState, Phase, Regime, ThermalContext,
    Transition, BOLTZMANN_J_PER_K,
};
pub use dynamics::{
    basal_solution, differentiation_rate, integrate, reconciliation_rate, CognitiveStructure,
    DynamicsError, InputChannel, Subsumer, Trajectory,
};
pub use matching::{matching_metric, MatchingError, Shape};
pub use szilard::{
    erase_memory, ledger_csv, mutual_information, run_cycle, run_ensemble, run_records,
    run_records_sequential, summary_block, CycleRecord, EngineConfig, Ledger, Side, SzilardError,
};
