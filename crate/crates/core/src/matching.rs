//! Binary shapes and the lock-key matching metric.
//!
//! A [`Shape`] is a fixed-length binary string. Two equal-length shapes are
//! compared with [`matching_metric`], which counts complementary (differing)
//! positions and normalizes by length: 0 means the strings are identical
//! (no lock-key affinity), 1 means every position is complementary (perfect
//! affinity). Higher affinity drives faster assimilation in the dynamics
//! module.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("shapes are not comparable: lengths {left} and {right} differ")]
    LengthMismatch { left: usize, right: usize },
    #[error("a shape needs at least one bit")]
    Empty,
    #[error("invalid shape symbol {symbol:?} at position {position}: expected '0' or '1'")]
    InvalidSymbol { symbol: char, position: usize },
}

/// Fixed-length binary string, the lock-key geometry of a subsumer or input.
///
/// Shapes are immutable values. The textual form is a string over `{0,1}`
/// with the most significant position first, e.g. `"0101"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    bits: Vec<bool>,
}

impl Shape {
    pub fn new(bits: Vec<bool>) -> Result<Self, MatchingError> {
        if bits.is_empty() {
            return Err(MatchingError::Empty);
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        // Construction rejects empty bit strings.
        false
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Flips every bit. An involution: `s.complement().complement() == s`.
    pub fn complement(&self) -> Shape {
        Shape {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl FromStr for Shape {
    type Err = MatchingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, symbol) in s.chars().enumerate() {
            match symbol {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(MatchingError::InvalidSymbol { symbol, position }),
            }
        }
        Shape::new(bits)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Normalized lock-key affinity between a subsumer shape and an input shape.
///
/// Returns the number of positions where the bits differ, divided by the
/// common length, so the result lies in `[0, 1]` and scales back to an
/// integer count when multiplied by the length. Symmetric in its arguments.
/// Differing positions are complementary under lock-key semantics, hence
/// `matching_metric(s, s.complement()) == 1` and `matching_metric(s, s) == 0`.
pub fn matching_metric(s: &Shape, i: &Shape) -> Result<f64, MatchingError> {
    if s.len() != i.len() {
        return Err(MatchingError::LengthMismatch {
            left: s.len(),
            right: i.len(),
        });
    }
    let differing = s
        .bits
        .iter()
        .zip(&i.bits)
        .filter(|(a, b)| a != b)
        .count();
    Ok(differing as f64 / s.len() as f64)
}
