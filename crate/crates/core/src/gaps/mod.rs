//! Gap sequences: baselines (Tokuda, Ciura, Pratt products), the two
//! parameterized template families, and the name catalog used by the CLI.

mod baseline;
pub mod catalog;
mod template;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use baseline::{
    ciura, ciura_with, pratt, tokuda, CiuraVariant, ExtensionRounding, PrattBasePair,
};
pub use template::{template_a, template_b, TemplateParamsA, TemplateParamsB};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("no gap sequence exists for n = {0} (need n >= 2)")]
    EmptySequence(usize),
    #[error("gap list must start with 1")]
    MissingUnitGap,
    #[error("gap list is not strictly increasing")]
    NotIncreasing,
    #[error("invalid template parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate sequence ({reason}); generated prefix {partial:?}")]
    Degenerate {
        reason: DegenerateReason,
        partial: Vec<usize>,
    },
    #[error("invalid base pair ({p}, {q}): bases must be >= 2")]
    InvalidBases { p: u64, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateReason {
    /// A generated value was smaller than its predecessor.
    NonMonotone,
    /// The template cannot grow, or did not reach `n` within the index cap.
    Stalled,
    /// A generated value was NaN or infinite.
    NonFinite,
}

impl fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenerateReason::NonMonotone => "non-monotone",
            DegenerateReason::Stalled => "stalled",
            DegenerateReason::NonFinite => "non-finite",
        })
    }
}

/// A named, strictly increasing list of gaps starting at 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapSequence {
    name: String,
    gaps: Vec<usize>,
}

impl GapSequence {
    pub fn new(name: impl Into<String>, gaps: Vec<usize>) -> Result<Self, GapError> {
        if gaps.first() != Some(&1) {
            return Err(GapError::MissingUnitGap);
        }
        if gaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GapError::NotIncreasing);
        }
        Ok(Self {
            name: name.into(),
            gaps,
        })
    }

    /// The sequence `[1]`, valid for any array.
    pub fn unit(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            gaps: vec![1],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn max_gap(&self) -> usize {
        *self.gaps.last().expect("gap sequences are never empty")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Drops every gap `>= n`. Baselines are defined by truncation.
    pub fn truncated(&self, n: usize) -> GapSequence {
        let gaps: Vec<usize> = self
            .gaps
            .iter()
            .copied()
            .take_while(|&g| g < n.max(2))
            .collect();
        GapSequence {
            name: self.name.clone(),
            gaps,
        }
    }

    /// True when every gap is usable on an array of length `n`.
    pub fn fits(&self, n: usize) -> bool {
        (n < 2 && self.gaps == [1]) || self.max_gap() < n
    }

    pub fn canonical_key(&self) -> String {
        canonical_key(&self.gaps)
    }
}

impl fmt::Display for GapSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.gaps {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}

/// Deterministic text key, equal iff the gap lists are equal.
pub fn canonical_key(gaps: &[usize]) -> String {
    let mut key = String::with_capacity(gaps.len() * 6);
    for (i, g) in gaps.iter().enumerate() {
        if i > 0 {
            key.push(',');
        }
        key.push_str(&g.to_string());
    }
    key
}

/// Pushes `value` onto a gap list being built from a monotone raw series.
/// Plateaus are dropped and values outside `(last, n)` are ignored.
fn push_gap(gaps: &mut Vec<usize>, value: usize, n: usize) {
    if value < n && value > *gaps.last().unwrap_or(&0) {
        gaps.push(value);
    }
}
