use std::fmt;
use std::ops::Mul;

use super::FsmError;

/// A tropical-semiring weight stored as a cost, `-ln(probability)`.
///
/// Costs are finite and non-negative, so every weight corresponds to a
/// probability in (0, 1]. Semiring product is cost addition and the
/// semiring sum keeps the cheaper of two weights.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Weight(f64);

impl Weight {
    /// Probability one.
    pub const ONE: Weight = Weight(0.0);

    pub fn from_cost(cost: f64) -> Result<Self, FsmError> {
        if cost.is_finite() && cost >= 0.0 {
            // normalizes -0.0
            Ok(Weight(cost + 0.0))
        } else {
            Err(FsmError::InvalidWeight(cost))
        }
    }

    pub fn from_probability(p: f64) -> Result<Self, FsmError> {
        if p > 0.0 && p <= 1.0 {
            Self::from_cost(-p.ln())
        } else {
            Err(FsmError::InvalidWeight(p))
        }
    }

    pub fn cost(self) -> f64 {
        self.0
    }

    pub fn probability(self) -> f64 {
        (-self.0).exp()
    }

    pub fn times(self, other: Weight) -> Weight {
        Weight(self.0 + other.0)
    }

    /// Semiring sum under the Viterbi approximation.
    pub fn plus(self, other: Weight) -> Weight {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }
}

impl Mul for Weight {
    type Output = Weight;

    fn mul(self, rhs: Weight) -> Weight {
        self.times(rhs)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cost(self.0))
    }
}

/// Formats a cost in scientific notation with at least nine significant
/// digits, without losing any bits: the shortest round-trip mantissa is
/// zero-padded, never rounded.
pub fn format_cost(cost: f64) -> String {
    let shortest = format!("{cost:e}");
    let (mantissa, exponent) = shortest
        .split_once('e')
        .expect("`{:e}` output always has an exponent");
    let digits = mantissa.chars().filter(char::is_ascii_digit).count();
    let mut mantissa = mantissa.to_string();
    if digits < 9 {
        if !mantissa.contains('.') {
            mantissa.push('.');
        }
        mantissa.extend(std::iter::repeat_n('0', 9 - digits));
    }
    format!("{mantissa}e{exponent}")
}
