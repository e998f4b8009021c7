//! Knowledge-state transitions and their thermodynamic cost.
//!
//! A [`MindState`] carries a positive knowledge eigenvalue `K`. Assimilating
//! information is a two-stage transition: [`retain`] anchors the incoming
//! amount without changing `K`, and [`obliterate`] merges it, compressing
//! `m` distinguishable states into `n < m` and scaling `K` by `n/m`. The
//! canonical two-into-one merge is a relative change of exactly -1/2.
//!
//! [`capacity`] converts a relative knowledge change into an information
//! rate in nats per unit time, weighted by the lock-key affinity and the
//! transition duration. Scaling by the thermal energy `k_B T` turns the
//! same logarithm into an energy per unit of information ([`energy_bound`]);
//! at the -1/2 squeeze this lands exactly on the per-bit erasure cost
//! ([`landauer_bound`]). [`boltzmann_factor`] weighs the corresponding state
//! occupancy and flags factors too close to unity for classical statistics.
//!
//! All quantities use natural logarithms internally; bit-denominated views
//! are derived through [`nats_to_bits`] / [`bits_to_nats`].

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use thiserror::Error;

/// Boltzmann constant in joules per kelvin.
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;

/// Weighting factors at or below this are flagged as quantum-indicated:
/// classical occupancy statistics need a factor far above one.
pub const DEFAULT_CLASSICAL_THRESHOLD: f64 = 10.0;

/// Reference power used for the operations-per-second line of the report
/// block, a nominal whole-brain budget in watts.
pub const REFERENCE_POWER_W: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CognitionError {
    #[error("knowledge eigenvalue must be positive, got {0}")]
    NonPositiveKnowledge(f64),
    #[error("information amount must be positive, got {0}")]
    NonPositiveInformation(f64),
    #[error("transition is not in the retained phase")]
    NotRetained,
    #[error("obliteration must compress: {before} states to {after} is not a squeeze")]
    NotASqueeze { before: u32, after: u32 },
    #[error("zero affinity carries no channel; capacity is undefined")]
    NoAffinity,
    #[error("affinity must lie in (0, 1], got {0}")]
    AffinityOutOfRange(f64),
    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("log domain: 1 + delta_k/k must be positive, got {0}")]
    LogDomain(f64),
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
}

/// Temperature plus the Boltzmann constant; scales information to joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalContext {
    temperature: f64,
    boltzmann: f64,
}

impl ThermalContext {
    pub fn new(temperature: f64) -> Result<Self, CognitionError> {
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(CognitionError::NonPositiveTemperature(temperature));
        }
        Ok(Self {
            temperature,
            boltzmann: BOLTZMANN_J_PER_K,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    /// `k_B * T` in joules, the heat per nat of entropy change.
    pub fn thermal_energy(&self) -> f64 {
        self.boltzmann * self.temperature
    }
}

/// A knowledge state, identified by its positive eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MindState {
    k: f64,
}

impl MindState {
    pub fn new(k: f64) -> Result<Self, CognitionError> {
        if !k.is_finite() || k <= 0.0 {
            return Err(CognitionError::NonPositiveKnowledge(k));
        }
        Ok(Self { k })
    }

    /// Adapter identifying a dynamics-module subsumer strength with a
    /// knowledge eigenvalue. Kept explicit so the identification is a
    /// caller's choice rather than baked into either module.
    pub fn from_subsumer_strength(strength: f64) -> Result<Self, CognitionError> {
        Self::new(strength)
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Information is anchored but still dissociable from the state.
    Retained,
    /// Information has merged irreversibly into the state.
    Obliterated,
}

/// Before/after record of one subsumption step.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    before: MindState,
    after: MindState,
    delta_k: f64,
    dt: f64,
    phase: Phase,
    pending_info: f64,
}

impl Transition {
    pub fn before(&self) -> MindState {
        self.before
    }

    pub fn after(&self) -> MindState {
        self.after
    }

    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Information amount anchored at retention, awaiting obliteration.
    pub fn pending_info(&self) -> f64 {
        self.pending_info
    }

    /// Sets the recorded transition duration.
    pub fn with_duration(mut self, dt: f64) -> Result<Self, CognitionError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(CognitionError::NonPositiveDuration(dt));
        }
        self.dt = dt;
        Ok(self)
    }
}

/// Anchors `info_units` of information to a state without merging it.
///
/// The eigenvalue is unchanged at this stage; the amount is recorded on the
/// transition for the obliteration step. Zero information is not an input
/// and is rejected. The recorded duration defaults to one time unit; see
/// [`Transition::with_duration`].
pub fn retain(state: MindState, info_units: f64) -> Result<Transition, CognitionError> {
    if !info_units.is_finite() || info_units <= 0.0 {
        return Err(CognitionError::NonPositiveInformation(info_units));
    }
    Ok(Transition {
        before: state,
        after: state,
        delta_k: 0.0,
        dt: 1.0,
        phase: Phase::Retained,
        pending_info: info_units,
    })
}

/// Completes a retained transition by compressing `states_before`
/// distinguishable states into `states_after`.
///
/// The eigenvalue scales by `states_after / states_before`, so the relative
/// change is `states_after / states_before - 1`; the canonical 2-to-1 merge
/// gives exactly -1/2. Rejects non-compressions and transitions that were
/// never retained.
pub fn obliterate(
    transition: Transition,
    states_before: u32,
    states_after: u32,
) -> Result<Transition, CognitionError> {
    if transition.phase != Phase::Retained {
        return Err(CognitionError::NotRetained);
    }
    if states_after >= states_before || states_after == 0 {
        return Err(CognitionError::NotASqueeze {
            before: states_before,
            after: states_after,
        });
    }
    let before = transition.before;
    let after = MindState::new(before.k * (states_after as f64 / states_before as f64))?;
    Ok(Transition {
        before,
        after,
        delta_k: after.k - before.k,
        dt: transition.dt,
        phase: Phase::Obliterated,
        pending_info: transition.pending_info,
    })
}

fn log_knowledge_ratio(k: f64, delta_k: f64) -> Result<f64, CognitionError> {
    if !k.is_finite() || k <= 0.0 {
        return Err(CognitionError::NonPositiveKnowledge(k));
    }
    let ratio = delta_k / k;
    if !ratio.is_finite() || 1.0 + ratio <= 0.0 {
        return Err(CognitionError::LogDomain(1.0 + ratio));
    }
    Ok(ratio.ln_1p())
}

/// Working-memory channel capacity in nats per unit time:
/// `ln(1 + delta_k/k) / (affinity * dt)`.
pub fn capacity(k: f64, delta_k: f64, affinity: f64, dt: f64) -> Result<f64, CognitionError> {
    if affinity == 0.0 {
        return Err(CognitionError::NoAffinity);
    }
    if !affinity.is_finite() || !(0.0..=1.0).contains(&affinity) {
        return Err(CognitionError::AffinityOutOfRange(affinity));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(CognitionError::NonPositiveDuration(dt));
    }
    Ok(log_knowledge_ratio(k, delta_k)? / (affinity * dt))
}

/// The affinity-free capacity floor `ln(1 + delta_k/k) / dt`; coincides with
/// [`capacity`] at perfect affinity.
pub fn capacity_lower_bound(k: f64, delta_k: f64, dt: f64) -> Result<f64, CognitionError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(CognitionError::NonPositiveDuration(dt));
    }
    Ok(log_knowledge_ratio(k, delta_k)? / dt)
}

/// Energy per unit of information for a relative knowledge change:
/// `k_B * T * ln(1 + delta_k/k)` joules.
///
/// Negative values are heat dissipated to the environment during a squeeze.
pub fn energy_bound(k: f64, delta_k: f64, ctx: &ThermalContext) -> Result<f64, CognitionError> {
    Ok(ctx.thermal_energy() * log_knowledge_ratio(k, delta_k)?)
}

/// Minimum energy per erased bit, `-k_B * T * ln 2` joules: the value of
/// [`energy_bound`] at the canonical -1/2 squeeze. The per-nat variant is
/// `-k_B * T`, since one bit is `ln 2` nats.
pub fn landauer_bound(ctx: &ThermalContext) -> f64 {
    -(ctx.thermal_energy() * LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The factor is not far above one; classical occupancy statistics do
    /// not apply.
    QuantumIndicated,
    Classical,
}

/// A state-occupancy weighting factor together with its statistics regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoltzmannFactor {
    pub value: f64,
    pub regime: Regime,
}

/// `exp(-delta_e / (k_B T))`, flagged quantum-indicated at or below
/// [`DEFAULT_CLASSICAL_THRESHOLD`].
pub fn boltzmann_factor(delta_e: f64, ctx: &ThermalContext) -> BoltzmannFactor {
    boltzmann_factor_with_threshold(delta_e, ctx, DEFAULT_CLASSICAL_THRESHOLD)
}

/// [`boltzmann_factor`] with a caller-chosen classicality threshold.
pub fn boltzmann_factor_with_threshold(
    delta_e: f64,
    ctx: &ThermalContext,
    threshold: f64,
) -> BoltzmannFactor {
    let value = (-delta_e / ctx.thermal_energy()).exp();
    let regime = if value <= threshold {
        Regime::QuantumIndicated
    } else {
        Regime::Classical
    };
    BoltzmannFactor { value, regime }
}

/// Maximum rate of bit operations a power budget can sustain when every
/// operation is charged exactly one Landauer erasure:
/// `power / (k_B * T * ln 2)`.
///
/// `power` must be positive.
pub fn ops_rate(power_watts: f64, ctx: &ThermalContext) -> f64 {
    power_watts / (ctx.thermal_energy() * LN_2)
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

pub fn bits_to_nats(bits: f64) -> f64 {
    bits * LN_2
}

/// Plain-text report block: Landauer constants at the context temperature,
/// the weighting factor at the per-bit erasure energy, and the
/// Landauer-efficient operation rate at `power_watts`. Values carry six
/// significant digits.
pub fn report_block(ctx: &ThermalContext, power_watts: f64) -> String {
    let per_bit = landauer_bound(ctx);
    let per_nat = -ctx.thermal_energy();
    let factor = boltzmann_factor(per_bit, ctx).value;
    let ops = ops_rate(power_watts, ctx);
    let mut out = String::new();
    let _ = writeln!(out, "landauer_J_per_bit={per_bit:.5e}");
    let _ = writeln!(out, "landauer_J_per_nat={per_nat:.5e}");
    let _ = writeln!(out, "boltzmann_factor={factor:.5e}");
    let _ = writeln!(out, "ops_per_second={ops:.5e}");
    out
}
