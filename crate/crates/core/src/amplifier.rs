//! Number-basis action of the noiseless linear amplifier.
//!
//! Both amplifier variants act diagonally in the photon-number basis,
//! `|n> -> t_n |n>`, with `t_n = 0` above the truncation order `N`:
//!
//! * [`AmplifierKind::Scissors`]: an array of `N` generalised quantum
//!   scissors, `t_n = (1 + g^2)^(-N/2) * N! / ((N - n)! N^n) * g^n`.
//! * [`AmplifierKind::Optimal`]: the ideal truncated amplifier
//!   `t_n = s_N * g^n` with success amplitude `s_N = g^(-N)` for `g >= 1`
//!   and `s_N = 1` below unit gain, so that every `t_n <= 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 8;

const FACTORIALS: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0];

pub(crate) fn factorial(n: usize) -> f64 {
    FACTORIALS[n]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplifierKind {
    Scissors,
    Optimal,
}

impl AmplifierKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AmplifierKind::Scissors => "scissors",
            AmplifierKind::Optimal => "optimal",
        }
    }
}

impl fmt::Display for AmplifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AmplifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scissors" | "qs" => Ok(AmplifierKind::Scissors),
            "optimal" | "ideal" => Ok(AmplifierKind::Optimal),
            other => Err(Error::Usage(format!(
                "unknown amplifier kind `{other}` (expected `scissors` or `optimal`)"
            ))),
        }
    }
}

/// A noiseless linear amplifier: variant, truncation order and gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierModel {
    kind: AmplifierKind,
    order: usize,
    gain: f64,
}

impl AmplifierModel {
    pub fn new(kind: AmplifierKind, order: usize, gain: f64) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(invalid(
                "order",
                order as f64,
                "truncation order must be between 1 and 8",
            ));
        }
        if !gain.is_finite() || gain < 0.0 {
            return Err(invalid(
                "gain",
                gain,
                "gain must be finite and non-negative",
            ));
        }
        Ok(Self { kind, order, gain })
    }

    pub fn scissors(order: usize, gain: f64) -> Result<Self> {
        Self::new(AmplifierKind::Scissors, order, gain)
    }

    pub fn optimal(order: usize, gain: f64) -> Result<Self> {
        Self::new(AmplifierKind::Optimal, order, gain)
    }

    pub fn kind(&self) -> AmplifierKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Same variant and order, different gain.
    pub fn with_gain(&self, gain: f64) -> Result<Self> {
        Self::new(self.kind, self.order, gain)
    }

    /// Success amplitude of the optimal amplifier.
    fn optimal_prefactor_ln(&self) -> f64 {
        if self.gain >= 1.0 {
            -(self.order as f64) * self.gain.ln()
        } else {
            0.0
        }
    }

    /// Amplitude `t_n` applied to the number state `|n>`. Zero for `n > N`.
    pub fn coefficient(&self, n: usize) -> f64 {
        let order = self.order;
        if n > order {
            return 0.0;
        }
        if n > 0 && self.gain == 0.0 {
            return 0.0;
        }
        // ln(g^n), with the g = 0, n = 0 case mapped to ln(1)
        let gain_power_ln = if n == 0 {
            0.0
        } else {
            n as f64 * self.gain.ln()
        };
        let ln_t = match self.kind {
            AmplifierKind::Scissors => {
                -0.5 * order as f64 * self.gain.mul_add(self.gain, 1.0).ln() + factorial(order).ln()
                    - factorial(order - n).ln()
                    - n as f64 * (order as f64).ln()
                    + gain_power_ln
            }
            AmplifierKind::Optimal => self.optimal_prefactor_ln() + gain_power_ln,
        };
        ln_t.exp()
    }

    /// All `N + 1` non-trivial coefficients `t_0 ..= t_N`.
    pub fn coefficients(&self) -> Vec<f64> {
        (0..=self.order).map(|n| self.coefficient(n)).collect()
    }
}

impl fmt::Display for AmplifierModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} N={} g={}", self.kind, self.order, self.gain)
    }
}
