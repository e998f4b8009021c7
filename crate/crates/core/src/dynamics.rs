//! Mass-action learning dynamics over a collection of subsumers.
//!
//! The state is a vector of nonnegative subsumer strengths. Each strength
//! grows through two channels:
//!
//! * progressive differentiation — external input channels drive each
//!   subsumer at a rate proportional to the lock-key affinity between their
//!   shapes and to the product of strength and input rate;
//! * integrative reconciliation — subsumers drive each other pairwise
//!   through the same affinity weighting, scaled by a coupling gain.
//!
//! With a single subsumer and a constant input the system reduces to pure
//! exponential growth, for which [`basal_solution`] is the closed form used
//! as the integration oracle. Trajectories are produced by a deterministic
//! fixed-step classical Runge-Kutta scheme; identical arguments always give
//! bit-identical output.

use std::fmt::Write as _;

use thiserror::Error;

use crate::matching::{matching_metric, MatchingError, Shape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("a cognitive structure needs at least one subsumer")]
    EmptyStructure,
    #[error("strength must be finite and nonnegative, got {0}")]
    InvalidStrength(f64),
    #[error("input rate must be finite and nonnegative, got {0}")]
    InvalidRate(f64),
    #[error("coupling gain must be finite and nonnegative, got {0}")]
    InvalidGain(f64),
    #[error("active window must satisfy start < end, got [{start}, {end})")]
    InvalidWindow { start: f64, end: f64 },
    #[error("time step must be finite and positive, got {0}")]
    InvalidTimeStep(f64),
    #[error("horizon must be finite and at least one step, got t_end {t_end} with dt {dt}")]
    InvalidHorizon { t_end: f64, dt: f64 },
    #[error("trajectory diverged: non-finite strength first reached at t = {t}")]
    Diverged { t: f64 },
    #[error("initial strength must be positive for the basal solution, got {0}")]
    NonPositiveInitialStrength(f64),
}

/// A pre-existing knowledge anchor: a shape plus a nonnegative strength.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsumer {
    shape: Shape,
    strength: f64,
}

impl Subsumer {
    pub fn new(shape: Shape, strength: f64) -> Result<Self, DynamicsError> {
        if !strength.is_finite() || strength < 0.0 {
            return Err(DynamicsError::InvalidStrength(strength));
        }
        Ok(Self { shape, strength })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

/// An external stimulus: a shape delivered at a nonnegative rate, optionally
/// restricted to a half-open time window `[start, end)`. Channels without a
/// window are always on.
#[derive(Debug, Clone, PartialEq)]
pub struct InputChannel {
    shape: Shape,
    rate: f64,
    window: Option<(f64, f64)>,
}

impl InputChannel {
    pub fn new(shape: Shape, rate: f64) -> Result<Self, DynamicsError> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(DynamicsError::InvalidRate(rate));
        }
        Ok(Self {
            shape,
            rate,
            window: None,
        })
    }

    pub fn with_window(mut self, start: f64, end: f64) -> Result<Self, DynamicsError> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(DynamicsError::InvalidWindow { start, end });
        }
        self.window = Some((start, end));
        Ok(self)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        self.window
    }

    pub fn active_at(&self, t: f64) -> bool {
        match self.window {
            Some((start, end)) => start <= t && t < end,
            None => true,
        }
    }
}

/// An ordered collection of subsumers sharing one shape length, plus the
/// reconciliation coupling gain.
#[derive(Debug, Clone, PartialEq)]
pub struct CognitiveStructure {
    subsumers: Vec<Subsumer>,
    gain: f64,
}

impl CognitiveStructure {
    pub fn new(subsumers: Vec<Subsumer>, gain: f64) -> Result<Self, DynamicsError> {
        let first = subsumers.first().ok_or(DynamicsError::EmptyStructure)?;
        let len = first.shape().len();
        for s in &subsumers {
            if s.shape().len() != len {
                return Err(MatchingError::LengthMismatch {
                    left: len,
                    right: s.shape().len(),
                }
                .into());
            }
        }
        if !gain.is_finite() || gain < 0.0 {
            return Err(DynamicsError::InvalidGain(gain));
        }
        Ok(Self { subsumers, gain })
    }

    pub fn subsumers(&self) -> &[Subsumer] {
        &self.subsumers
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn shape_len(&self) -> usize {
        self.subsumers[0].shape().len()
    }

    pub fn strengths(&self) -> Vec<f64> {
        self.subsumers.iter().map(Subsumer::strength).collect()
    }
}

/// Per-subsumer rate of change from external stimuli active at time `t`.
///
/// Component `i` is the sum over active inputs `j` of
/// `affinity(shape_i, shape_j) * strength_i * rate_j`.
pub fn differentiation_rate(
    structure: &CognitiveStructure,
    inputs: &[InputChannel],
    t: f64,
) -> Result<Vec<f64>, DynamicsError> {
    let affinities = input_affinities(structure, inputs)?;
    Ok(differentiation_with(
        &structure.strengths(),
        inputs,
        &affinities,
        t,
    ))
}

/// Per-subsumer rate of change from pairwise subsumer self-interaction.
///
/// Component `i` is `gain * sum over k != i of
/// affinity(shape_i, shape_k) * strength_i * strength_k`; identically zero
/// for a single subsumer or a zero gain.
pub fn reconciliation_rate(structure: &CognitiveStructure) -> Vec<f64> {
    let affinities = pair_affinities(structure);
    reconciliation_with(&structure.strengths(), structure.gain, &affinities)
}

/// Closed-form solution of the one-subsumer system: `s0 * exp(d * rate * t)`.
///
/// This is the analytic oracle for [`integrate`] in the single-subsumer case.
/// The initial strength must be positive; zero or negative values have no
/// logarithmic antiderivative.
pub fn basal_solution(s0: f64, d: f64, rate: f64, t: f64) -> Result<f64, DynamicsError> {
    if !s0.is_finite() || s0 <= 0.0 {
        return Err(DynamicsError::NonPositiveInitialStrength(s0));
    }
    Ok(s0 * (d * rate * t).exp())
}

/// Time series of subsumer strengths, sampled on the integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    shapes: Vec<Shape>,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// One strength vector per sample time, in subsumer order.
    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has samples")
    }

    pub fn final_strengths(&self) -> &[f64] {
        self.states.last().expect("trajectory has samples")
    }

    /// CSV rendering: header `t,s_<shape1>,...,s_<shapeN>`, one row per
    /// sample, every value with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push('t');
        for shape in &self.shapes {
            let _ = write!(out, ",s_{shape}");
        }
        out.push('\n');
        for (t, state) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t:.11e}");
            for s in state {
                let _ = write!(out, ",{s:.11e}");
            }
            out.push('\n');
        }
        out
    }
}

fn input_affinities(
    structure: &CognitiveStructure,
    inputs: &[InputChannel],
) -> Result<Vec<Vec<f64>>, DynamicsError> {
    structure
        .subsumers
        .iter()
        .map(|s| {
            inputs
                .iter()
                .map(|i| matching_metric(s.shape(), i.shape()).map_err(DynamicsError::from))
                .collect()
        })
        .collect()
}

fn pair_affinities(structure: &CognitiveStructure) -> Vec<Vec<f64>> {
    let n = structure.subsumers.len();
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in (i + 1)..n {
            // Equal lengths are guaranteed at construction.
            let d = matching_metric(
                structure.subsumers[i].shape(),
                structure.subsumers[k].shape(),
            )
            .expect("shapes in one structure share a length");
            table[i][k] = d;
            table[k][i] = d;
        }
    }
    table
}

fn differentiation_with(
    strengths: &[f64],
    inputs: &[InputChannel],
    affinities: &[Vec<f64>],
    t: f64,
) -> Vec<f64> {
    strengths
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            inputs
                .iter()
                .enumerate()
                .filter(|(_, input)| input.active_at(t))
                .map(|(j, input)| affinities[i][j] * s * input.rate())
                .sum()
        })
        .collect()
}

fn reconciliation_with(strengths: &[f64], gain: f64, affinities: &[Vec<f64>]) -> Vec<f64> {
    let n = strengths.len();
    if n == 1 || gain == 0.0 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let coupling: f64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| affinities[i][k] * strengths[i] * strengths[k])
                .sum();
            gain * coupling
        })
        .collect()
}

/// Integrates the system with classical fixed-step fourth-order Runge-Kutta.
///
/// Samples lie on the uniform grid `0, dt, 2dt, ...`; when `t_end` is not a
/// whole number of steps, one shortened final step lands the last sample on
/// `t_end` exactly. Exponential blow-up surfaces as
/// [`DynamicsError::Diverged`] naming the first non-finite sample time
/// rather than being clamped.
pub fn integrate(
    structure: &CognitiveStructure,
    inputs: &[InputChannel],
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, DynamicsError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(DynamicsError::InvalidTimeStep(dt));
    }
    if !t_end.is_finite() || t_end < dt {
        return Err(DynamicsError::InvalidHorizon { t_end, dt });
    }
    let input_aff = input_affinities(structure, inputs)?;
    let pair_aff = pair_affinities(structure);
    let gain = structure.gain;

    let rhs = |strengths: &[f64], t: f64| -> Vec<f64> {
        let diff = differentiation_with(strengths, inputs, &input_aff, t);
        let recon = reconciliation_with(strengths, gain, &pair_aff);
        diff.iter().zip(&recon).map(|(a, b)| a + b).collect()
    };

    // Whole steps of size dt, with a guard so horizons that are an exact
    // multiple of dt up to roundoff are treated as such.
    let ratio = t_end / dt;
    let full_steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.round().max(1.0) {
        ratio.round() as usize
    } else {
        ratio.floor() as usize
    };
    let tail = t_end - full_steps as f64 * dt;
    let has_tail = tail > 1e-12 * t_end;

    let mut state = structure.strengths();
    let mut times = Vec::with_capacity(full_steps + 2);
    let mut states = Vec::with_capacity(full_steps + 2);
    times.push(0.0);
    states.push(state.clone());

    for step in 0..full_steps {
        let t = step as f64 * dt;
        let t_next = (step + 1) as f64 * dt;
        state = rk4_step(&rhs, &state, t, dt);
        if !state.iter().all(|s| s.is_finite()) {
            return Err(DynamicsError::Diverged { t: t_next });
        }
        times.push(t_next);
        states.push(state.clone());
    }
    if has_tail {
        state = rk4_step(&rhs, &state, full_steps as f64 * dt, tail);
        if !state.iter().all(|s| s.is_finite()) {
            return Err(DynamicsError::Diverged { t: t_end });
        }
        times.push(t_end);
        states.push(state.clone());
    }

    Ok(Trajectory {
        shapes: structure
            .subsumers
            .iter()
            .map(|s| s.shape().clone())
            .collect(),
        times,
        states,
    })
}

fn rk4_step<F>(rhs: &F, y: &[f64], t: f64, h: f64) -> Vec<f64>
where
    F: Fn(&[f64], f64) -> Vec<f64>,
{
    let n = y.len();
    let k1 = rhs(y, t);
    let mid1: Vec<f64> = (0..n).map(|i| y[i] + 0.5 * h * k1[i]).collect();
    let k2 = rhs(&mid1, t + 0.5 * h);
    let mid2: Vec<f64> = (0..n).map(|i| y[i] + 0.5 * h * k2[i]).collect();
    let k3 = rhs(&mid2, t + 0.5 * h);
    let end: Vec<f64> = (0..n).map(|i| y[i] + h * k3[i]).collect();
    let k4 = rhs(&end, t + h);
    (0..n)
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(s: &str) -> Shape {
        s.parse().unwrap()
    }

    fn one_subsumer(shape_text: &str, strength: f64) -> CognitiveStructure {
        CognitiveStructure::new(vec![Subsumer::new(shape(shape_text), strength).unwrap()], 0.0)
            .unwrap()
    }

    #[test]
    fn differentiation_perfect_complement() {
        let structure = one_subsumer("01", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1.0).unwrap()];
        let rates = differentiation_rate(&structure, &inputs, 0.0).unwrap();
        assert_eq!(rates, vec![1.0]);
    }

    #[test]
    fn differentiation_zero_rates_give_zero_vector() {
        let structure = one_subsumer("0101", 2.0);
        let inputs = [
            InputChannel::new(shape("1010"), 0.0).unwrap(),
            InputChannel::new(shape("1001"), 0.0).unwrap(),
        ];
        assert_eq!(
            differentiation_rate(&structure, &inputs, 3.0).unwrap(),
            vec![0.0]
        );
    }

    #[test]
    fn differentiation_sums_weighted_inputs() {
        // Affinities 1 and 0.5 against strength 2: 1*2*1 + 0.5*2*0.5 = 2.5.
        let structure = one_subsumer("0101", 2.0);
        let inputs = [
            InputChannel::new(shape("1010"), 1.0).unwrap(),
            InputChannel::new(shape("1001"), 0.5).unwrap(),
        ];
        assert_eq!(
            differentiation_rate(&structure, &inputs, 0.0).unwrap(),
            vec![2.5]
        );
    }

    #[test]
    fn differentiation_respects_active_windows() {
        let structure = one_subsumer("01", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1.0)
            .unwrap()
            .with_window(1.0, 2.0)
            .unwrap()];
        assert_eq!(
            differentiation_rate(&structure, &inputs, 0.5).unwrap(),
            vec![0.0]
        );
        assert_eq!(
            differentiation_rate(&structure, &inputs, 1.0).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            differentiation_rate(&structure, &inputs, 2.0).unwrap(),
            vec![0.0]
        );
    }

    #[test]
    fn differentiation_rejects_length_mismatch() {
        let structure = one_subsumer("011", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1.0).unwrap()];
        assert!(matches!(
            differentiation_rate(&structure, &inputs, 0.0),
            Err(DynamicsError::Matching(MatchingError::LengthMismatch { .. }))
        ));
    }

    #[test]
    fn reconciliation_single_subsumer_is_zero() {
        let structure = CognitiveStructure::new(
            vec![Subsumer::new(shape("01"), 1.0).unwrap()],
            7.0,
        )
        .unwrap();
        assert_eq!(reconciliation_rate(&structure), vec![0.0]);
    }

    #[test]
    fn reconciliation_zero_gain_is_zero() {
        let structure = CognitiveStructure::new(
            vec![
                Subsumer::new(shape("01"), 1.0).unwrap(),
                Subsumer::new(shape("10"), 3.0).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        assert_eq!(reconciliation_rate(&structure), vec![0.0, 0.0]);
    }

    #[test]
    fn reconciliation_pairwise_product() {
        // Perfect complements with strengths 1 and 3 at unit gain: both 3.
        let structure = CognitiveStructure::new(
            vec![
                Subsumer::new(shape("01"), 1.0).unwrap(),
                Subsumer::new(shape("10"), 3.0).unwrap(),
            ],
            1.0,
        )
        .unwrap();
        assert_eq!(reconciliation_rate(&structure), vec![3.0, 3.0]);
    }

    #[test]
    fn basal_solution_examples() {
        assert_eq!(basal_solution(1.0, 1.0, 1.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            basal_solution(1.0, 1.0, 1.0, std::f64::consts::LN_2).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert_eq!(basal_solution(3.0, 0.0, 5.0, 11.0).unwrap(), 3.0);
    }

    #[test]
    fn basal_solution_rejects_nonpositive_start() {
        assert!(matches!(
            basal_solution(0.0, 1.0, 1.0, 1.0),
            Err(DynamicsError::NonPositiveInitialStrength(_))
        ));
        assert!(matches!(
            basal_solution(-2.0, 1.0, 1.0, 1.0),
            Err(DynamicsError::NonPositiveInitialStrength(_))
        ));
    }

    #[test]
    fn integrate_matches_closed_form_at_ln2() {
        let structure = one_subsumer("01", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1.0).unwrap()];
        let trajectory =
            integrate(&structure, &inputs, 1e-3, std::f64::consts::LN_2).unwrap();
        assert_eq!(trajectory.final_time(), std::f64::consts::LN_2);
        assert_relative_eq!(trajectory.final_strengths()[0], 2.0, max_relative = 1e-9);
    }

    #[test]
    fn integrate_matches_closed_form_at_unit_exponent() {
        // Affinity 0.5 at rate 2 over one time unit: exponent 1.
        let structure = one_subsumer("0101", 1.0);
        let inputs = [InputChannel::new(shape("1001"), 2.0).unwrap()];
        let trajectory = integrate(&structure, &inputs, 1e-3, 1.0).unwrap();
        assert_relative_eq!(
            trajectory.final_strengths()[0],
            std::f64::consts::E,
            max_relative = 1e-9
        );
    }

    #[test]
    fn integrate_zero_dynamics_is_constant() {
        let structure = CognitiveStructure::new(
            vec![
                Subsumer::new(shape("01"), 1.5).unwrap(),
                Subsumer::new(shape("11"), 0.5).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        let trajectory = integrate(&structure, &[], 0.1, 1.0).unwrap();
        assert_eq!(trajectory.len(), 11);
        for state in trajectory.states() {
            assert_eq!(state, &vec![1.5, 0.5]);
        }
    }

    #[test]
    fn integrate_sample_count_on_exact_grid() {
        let structure = one_subsumer("01", 1.0);
        let trajectory = integrate(&structure, &[], 0.04, 0.64).unwrap();
        // floor(0.64 / 0.04) + 1 even though 0.64/0.04 rounds above 16.
        assert_eq!(trajectory.len(), 17);
        assert_eq!(trajectory.final_time(), 0.64);
    }

    #[test]
    fn integrate_lands_on_irregular_horizon() {
        let structure = one_subsumer("01", 1.0);
        let trajectory = integrate(&structure, &[], 0.05, std::f64::consts::LN_2).unwrap();
        assert_eq!(trajectory.final_time(), std::f64::consts::LN_2);
        // 13 whole steps plus the shortened final one.
        assert_eq!(trajectory.len(), 15);
    }

    #[test]
    fn integrate_reports_divergence_time() {
        let structure = one_subsumer("01", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1e3).unwrap()];
        match integrate(&structure, &inputs, 1e-3, 2.0) {
            Err(DynamicsError::Diverged { t }) => {
                assert!(t > 0.0 && t < 2.0, "diverged at t = {t}");
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn integrate_rejects_bad_steps() {
        let structure = one_subsumer("01", 1.0);
        assert!(matches!(
            integrate(&structure, &[], 0.0, 1.0),
            Err(DynamicsError::InvalidTimeStep(_))
        ));
        assert!(matches!(
            integrate(&structure, &[], 0.5, 0.25),
            Err(DynamicsError::InvalidHorizon { .. })
        ));
    }

    #[test]
    fn integrate_first_step_consistent_with_rate_operations() {
        let structure = CognitiveStructure::new(
            vec![
                Subsumer::new(shape("0101"), 2.0).unwrap(),
                Subsumer::new(shape("1010"), 1.0).unwrap(),
            ],
            0.5,
        )
        .unwrap();
        let inputs = [InputChannel::new(shape("1001"), 0.5).unwrap()];
        let diff = differentiation_rate(&structure, &inputs, 0.0).unwrap();
        let recon = reconciliation_rate(&structure);
        let expected: Vec<f64> = diff.iter().zip(&recon).map(|(a, b)| a + b).collect();

        // Forward-Euler slope over a tiny step approximates the RK4 slope.
        let dt = 1e-7;
        let trajectory = integrate(&structure, &inputs, dt, 2.0 * dt).unwrap();
        let slope: Vec<f64> = trajectory.states()[1]
            .iter()
            .zip(&trajectory.states()[0])
            .map(|(next, prev)| (next - prev) / dt)
            .collect();
        for (got, want) in slope.iter().zip(&expected) {
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn strictly_increasing_for_positive_basal_drive() {
        let structure = one_subsumer("01", 1.0);
        let inputs = [InputChannel::new(shape("10"), 1.0).unwrap()];
        let trajectory = integrate(&structure, &inputs, 0.01, 1.0).unwrap();
        for pair in trajectory.states().windows(2) {
            assert!(pair[1][0] > pair[0][0]);
        }
    }

    #[test]
    fn trajectory_csv_layout() {
        let structure = CognitiveStructure::new(
            vec![
                Subsumer::new(shape("01"), 1.0).unwrap(),
                Subsumer::new(shape("10"), 0.25).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        let trajectory = integrate(&structure, &[], 0.5, 1.0).unwrap();
        let csv = trajectory.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,s_01,s_10"));
        assert_eq!(
            lines.next(),
            Some("0.00000000000e0,1.00000000000e0,2.50000000000e-1")
        );
        assert_eq!(csv.lines().count(), 4);
    }
}
