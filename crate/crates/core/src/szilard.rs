//! Monte Carlo one-molecule engine with a noisy measuring demon.
//!
//! Each cycle: the particle sits on one side of a bi-partitioned box, the
//! demon measures the side with error probability `epsilon`, the partition
//! is displaced quasi-statically to the posterior volume split
//! `(1 - epsilon, epsilon)` on the measured side, and the demon's one-bit
//! memory is reset at exactly the per-bit erasure cost. Under this optimal
//! feedback the extracted work per cycle is `k_B T` times the pointwise
//! information of the measurement outcome, so the ensemble mean saturates
//! the `k_B T * I` conversion ceiling, and the exponential fluctuation
//! estimator is the identity on every single outcome.
//!
//! Cycles draw from a per-cycle random stream keyed on `(seed, cycle index)`,
//! so a run is reproducible and order-independent: parallel and sequential
//! execution produce bit-identical records. Note that the measurement error
//! is configured independently of the matching affinity used elsewhere in
//! this crate; a noisy measurement channel plausibly corresponds to reduced
//! lock-key affinity, but no identification is assumed.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::cognition::ThermalContext;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SzilardError {
    #[error("measurement error probability must lie in [0, 1/2), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("an ensemble needs at least one cycle")]
    ZeroCycles,
}

/// Which half of the box holds the particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// Parameters of one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    ctx: ThermalContext,
    epsilon: f64,
    cycles: u64,
    seed: u64,
}

impl EngineConfig {
    pub fn new(
        ctx: ThermalContext,
        epsilon: f64,
        cycles: u64,
        seed: u64,
    ) -> Result<Self, SzilardError> {
        if !epsilon.is_finite() || !(0.0..0.5).contains(&epsilon) {
            return Err(SzilardError::EpsilonOutOfRange(epsilon));
        }
        if cycles == 0 {
            return Err(SzilardError::ZeroCycles);
        }
        Ok(Self {
            ctx,
            epsilon,
            cycles,
            seed,
        })
    }

    pub fn ctx(&self) -> &ThermalContext {
        &self.ctx
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Outcome of a single engine cycle. Energies in joules, information in
/// nats; positive work is extracted by the demon, positive heat is
/// dissipated to the bath.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub cycle: u64,
    pub true_side: Side,
    pub measured_side: Side,
    pub work_extracted: f64,
    pub pointwise_info: f64,
    pub erasure_heat: f64,
}

/// Mutual information of the binary measurement channel in nats:
/// `ln 2 - H(epsilon)` with `H(0) = 0`.
///
/// Defined on `[0, 1/2]`; the engine itself only accepts `epsilon < 1/2`,
/// where the measurement still carries information.
pub fn mutual_information(epsilon: f64) -> f64 {
    LN_2 - binary_entropy(epsilon)
}

fn binary_entropy(epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        return 0.0;
    }
    -epsilon * epsilon.ln() - (1.0 - epsilon) * (1.0 - epsilon).ln()
}

/// Heat dissipated by resetting the demon's one-bit memory: `k_B T ln 2`
/// joules, the magnitude of the per-bit erasure bound.
pub fn erase_memory(ctx: &ThermalContext) -> f64 {
    ctx.thermal_energy() * LN_2
}

/// Runs one cycle from its own random stream.
///
/// The same `(seed, cycle_index)` always yields the same record, on any
/// thread and in any order.
pub fn run_cycle(config: &EngineConfig, cycle_index: u64) -> CycleRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(cycle_index);

    let true_side = if rng.gen::<f64>() < 0.5 {
        Side::Left
    } else {
        Side::Right
    };
    let flipped = config.epsilon > 0.0 && rng.gen::<f64>() < config.epsilon;
    let measured_side = if flipped { true_side.other() } else { true_side };

    // ln(2(1-eps)) on a correct read, ln(2 eps) on a wrong one, written so
    // the eps = 0 case is exactly ln 2 and nets to zero against the reset.
    let pointwise_info = if measured_side == true_side {
        LN_2 + (-config.epsilon).ln_1p()
    } else {
        LN_2 + config.epsilon.ln()
    };
    let kt = config.ctx.thermal_energy();

    CycleRecord {
        cycle: cycle_index,
        true_side,
        measured_side,
        work_extracted: kt * pointwise_info,
        pointwise_info,
        erasure_heat: kt * LN_2,
    }
}

/// All cycle records in index order, computed sequentially.
pub fn run_records_sequential(config: &EngineConfig) -> Vec<CycleRecord> {
    (0..config.cycles)
        .map(|i| run_cycle(config, i))
        .collect()
}

/// All cycle records in index order. With the `parallel` feature the cycles
/// are evaluated on the rayon pool; output is bit-identical to
/// [`run_records_sequential`] either way.
#[cfg(feature = "parallel")]
pub fn run_records(config: &EngineConfig) -> Vec<CycleRecord> {
    (0..config.cycles)
        .into_par_iter()
        .map(|i| run_cycle(config, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_records(config: &EngineConfig) -> Vec<CycleRecord> {
    run_records_sequential(config)
}

/// Ensemble aggregates over one run. Energies are expressed in units of
/// `k_B T`; information in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub cycles: u64,
    pub mean_work_kt: f64,
    pub mean_pointwise_info: f64,
    pub mean_erasure_heat_kt: f64,
    /// Mean of `exp(w/(k_B T) - i)` over cycles; the identity pins it to 1.
    pub fluctuation_estimator: f64,
    /// Mean of work minus erasure heat, in units of `k_B T`.
    pub net_mean_kt: f64,
}

impl Ledger {
    /// Aggregates records in slice order with compensated summation, so the
    /// result does not depend on how the records were produced.
    pub fn from_records(records: &[CycleRecord], ctx: &ThermalContext) -> Ledger {
        assert!(!records.is_empty(), "ledger needs at least one record");
        let kt = ctx.thermal_energy();
        let n = records.len() as f64;
        let mut work = KahanSum::default();
        let mut info = KahanSum::default();
        let mut erasure = KahanSum::default();
        let mut fluct = KahanSum::default();
        let mut net = KahanSum::default();
        for r in records {
            let w_kt = r.work_extracted / kt;
            work.add(w_kt);
            info.add(r.pointwise_info);
            erasure.add(r.erasure_heat / kt);
            fluct.add((w_kt - r.pointwise_info).exp());
            net.add((r.work_extracted - r.erasure_heat) / kt);
        }
        Ledger {
            cycles: records.len() as u64,
            mean_work_kt: work.total() / n,
            mean_pointwise_info: info.total() / n,
            mean_erasure_heat_kt: erasure.total() / n,
            fluctuation_estimator: fluct.total() / n,
            net_mean_kt: net.total() / n,
        }
    }
}

/// Runs the whole ensemble and aggregates it.
pub fn run_ensemble(config: &EngineConfig) -> Ledger {
    Ledger::from_records(&run_records(config), &config.ctx)
}

/// CSV rendering of a run: energies in units of `k_B T` with 12 significant
/// digits, sides as single characters.
pub fn ledger_csv(records: &[CycleRecord], ctx: &ThermalContext) -> String {
    let kt = ctx.thermal_energy();
    let mut out = String::from("cycle,true_side,measured_side,w_ext_kT,i_pt_nat,erase_heat_kT\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.11e},{:.11e},{:.11e}",
            r.cycle,
            r.true_side.as_char(),
            r.measured_side.as_char(),
            r.work_extracted / kt,
            r.pointwise_info,
            r.erasure_heat / kt,
        );
    }
    out
}

/// Plain-text summary lines appended to run reports, six decimal places.
pub fn summary_block(ledger: &Ledger) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mean_w_kT={:.6}", ledger.mean_work_kt);
    let _ = writeln!(out, "mutual_info_nat={:.6}", ledger.mean_pointwise_info);
    let _ = writeln!(out, "fluct_estimator={:.6}", ledger.fluctuation_estimator);
    let _ = writeln!(out, "net_mean_kT={:.6}", ledger.net_mean_kt);
    out
}

/// Compensated (Kahan) accumulator; keeps long fixed-order sums accurate to
/// a few ulps.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let adjusted = value - self.compensation;
        let next = self.sum + adjusted;
        self.compensation = (next - self.sum) - adjusted;
        self.sum = next;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}
