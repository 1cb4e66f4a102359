use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational type used for probabilities.
pub type Rational = Ratio<i128>;

/// How zero probabilities are floored before taking the log ratio.
///
/// The floor for a single system's read probability is `ε`; the floor for the
/// pooled probability is `ε / |E|`. The default `ε` is `1 / (2N)`, half the
/// smallest non-zero single-system mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonPolicy {
    #[default]
    HalfMinimumMass,
    /// A fixed `ε`; must satisfy `0 < ε < 1/N`.
    Custom(Rational),
}

impl EpsilonPolicy {
    pub fn system_floor(&self, depth: u32) -> Rational {
        match *self {
            EpsilonPolicy::HalfMinimumMass => Rational::new(1, 2 * i128::from(depth)),
            EpsilonPolicy::Custom(eps) => eps,
        }
    }

    pub fn pool_floor(&self, depth: u32, pool_size: usize) -> Rational {
        self.system_floor(depth) / pool_size as i128
    }

    fn validate(&self, depth: u32) -> Result<()> {
        if let EpsilonPolicy::Custom(eps) = *self {
            let limit = Rational::new(1, i128::from(depth));
            if eps <= Rational::from_integer(0) || eps >= limit {
                return Err(Error::Config(format!(
                    "custom epsilon {self} must lie strictly between 0 and 1/N = 1/{depth}"
                )));
            }
        }
        Ok(())
    }
}

/// Parses a plain or scientific decimal literal into an exact fraction.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numerator: i128 = digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 {
        Rational::from_integer(numerator.checked_mul(pow)?)
    } else {
        Rational::new(numerator, pow)
    })
}

impl FromStr for EpsilonPolicy {
    type Err = Error;

    /// `default` or `custom:<decimal>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "default" {
            return Ok(EpsilonPolicy::HalfMinimumMass);
        }
        let value = s.strip_prefix("custom:").ok_or_else(|| {
            Error::Config(format!("epsilon policy {s:?} is neither 'default' nor 'custom:<float>'"))
        })?;
        parse_decimal(value.trim())
            .map(EpsilonPolicy::Custom)
            .ok_or_else(|| Error::Config(format!("custom epsilon {value:?} is not a decimal number")))
    }
}

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::HalfMinimumMass => f.write_str("default"),
            EpsilonPolicy::Custom(eps) => write!(
                f,
                "custom:{}",
                *eps.numer() as f64 / *eps.denom() as f64
            ),
        }
    }
}

impl Serialize for EpsilonPolicy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Base of the logarithm in the utility ratio.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Other(f64),
}

impl LogBase {
    /// Any finite base greater than 1.
    pub fn new(base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) {
            return Err(Error::Config(format!(
                "log base {base} must be finite and greater than 1"
            )));
        }
        Ok(LogBase::Other(base))
    }

    pub fn log(&self, x: f64) -> f64 {
        match *self {
            LogBase::Natural => x.ln(),
            LogBase::Other(b) => x.ln() / b.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::Natural),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("log base {other:?} is not a number")))
                .and_then(LogBase::new),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => f.write_str("e"),
            LogBase::Other(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for LogBase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Evaluation settings shared by every metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalConfig {
    /// Ranking cutoff `N`; the user's stopping threshold is uniform over `1..=N`.
    pub depth: u32,
    pub epsilon: EpsilonPolicy,
    /// Count partially relevant documents as relevant.
    pub partial_relevant_counts: bool,
    pub log_base: LogBase,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            depth: 300,
            epsilon: EpsilonPolicy::default(),
            partial_relevant_counts: false,
            log_base: LogBase::default(),
        }
    }
}

impl EvalConfig {
    pub fn with_depth(depth: u32) -> Self {
        Self {
            depth,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Config("depth N must be at least 1".into()));
        }
        if let LogBase::Other(b) = self.log_base {
            LogBase::new(b)?;
        }
        self.epsilon.validate(self.depth)
    }
}
