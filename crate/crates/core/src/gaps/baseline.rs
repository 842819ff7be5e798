use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{GapError, GapSequence};

/// Tokuda's sequence, `ceil(((9/4)^k - 1) / (9/4 - 1))` for `k = 1, 2, ...`,
/// every term `< n`.
///
/// Evaluated exactly: the closed form equals `(9^k - 4^k) / (5 * 4^(k-1))`.
pub fn tokuda(n: usize) -> Result<GapSequence, GapError> {
    if n < 2 {
        return Err(GapError::EmptySequence(n));
    }
    let mut gaps = Vec::new();
    let (mut nine, mut four) = (9u128, 4u128);
    loop {
        let den = 5 * (four / 4);
        let term = (nine - four).div_ceil(den);
        if term >= n as u128 {
            break;
        }
        gaps.push(term as usize);
        match (nine.checked_mul(9), four.checked_mul(4)) {
            (Some(a), Some(b)) => (nine, four) = (a, b),
            _ => break,
        }
    }
    GapSequence::new("tokuda", gaps)
}

/// A pair of Pratt bases `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrattBasePair {
    p: u64,
    q: u64,
}

impl PrattBasePair {
    pub const TWO_THREE: PrattBasePair = PrattBasePair { p: 2, q: 3 };
    pub const TWO_FIVE: PrattBasePair = PrattBasePair { p: 2, q: 5 };
    pub const THREE_FOUR: PrattBasePair = PrattBasePair { p: 3, q: 4 };

    pub fn new(p: u64, q: u64) -> Result<Self, GapError> {
        if p < 2 || q < 2 {
            return Err(GapError::InvalidBases { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_coprime(&self) -> bool {
        gcd(self.p, self.q) == 1
    }

    pub fn name(&self) -> String {
        format!("pratt-{}{}", self.p, self.q)
    }

    /// Offsets not representable as `x*p + y*q` with `x, y >= 0`: the only
    /// inversion offsets that can survive p- and q-sorting. `None` when the
    /// bases share a factor (the complement is infinite).
    pub fn semigroup_complement(&self) -> Option<Vec<usize>> {
        if !self.is_coprime() {
            return None;
        }
        let (p, q) = (self.p as usize, self.q as usize);
        let frobenius = p * q - p - q;
        let mut representable = vec![false; frobenius + 1];
        representable[0] = true;
        for v in 1..=frobenius {
            representable[v] = (v >= p && representable[v - p]) || (v >= q && representable[v - q]);
        }
        Some((1..=frobenius).filter(|&v| !representable[v]).collect())
    }

    /// Largest non-representable offset (Sylvester: `pq - p - q`).
    pub fn frobenius_number(&self) -> Option<usize> {
        self.is_coprime()
            .then(|| (self.p * self.q - self.p - self.q) as usize)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All products `p^x * q^y < n`, ascending.
///
/// Non-coprime bases still generate a valid sequence; only the structural
/// guarantees of the final pass are lost (see [`PrattBasePair::is_coprime`]).
pub fn pratt(bases: PrattBasePair, n: usize) -> Result<GapSequence, GapError> {
    if n < 2 {
        return Err(GapError::EmptySequence(n));
    }
    let limit = n as u64;
    let mut products = BTreeSet::new();
    let mut px = 1u64;
    while px < limit {
        let mut v = px;
        while v < limit {
            products.insert(v as usize);
            match v.checked_mul(bases.q) {
                Some(next) => v = next,
                None => break,
            }
        }
        match px.checked_mul(bases.p) {
            Some(next) => px = next,
            None => break,
        }
    }
    GapSequence::new(bases.name(), products.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CiuraVariant {
    C128,
    C1000,
    CLarge,
}

impl CiuraVariant {
    pub fn base(&self) -> &'static [usize] {
        match self {
            CiuraVariant::C128 => &[1, 4, 9, 24, 85, 126],
            CiuraVariant::C1000 => &[1, 4, 10, 23, 57, 156, 409, 995],
            CiuraVariant::CLarge => &[1, 4, 10, 23, 57, 132, 301, 701, 1750],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CiuraVariant::C128 => "ciura-128",
            CiuraVariant::C1000 => "ciura-1000",
            CiuraVariant::CLarge => "ciura-large",
        }
    }
}

/// Rounding applied to each term of the 2.25-ratio extension.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtensionRounding {
    #[default]
    Ceil,
    Floor,
    Nearest,
}

impl ExtensionRounding {
    /// `round(2.25 * prev)` in exact integer arithmetic.
    fn next(&self, prev: usize) -> Option<usize> {
        let scaled = prev.checked_mul(9)?;
        Some(match self {
            ExtensionRounding::Ceil => scaled.div_ceil(4),
            ExtensionRounding::Floor => scaled / 4,
            // Ties (x.5) round up.
            ExtensionRounding::Nearest => (scaled + 2) / 4,
        })
    }
}

/// Ciura's fixed list, truncated below `n`, extended from its last term by
/// ratio 2.25 with ceiling rounding.
pub fn ciura(variant: CiuraVariant, n: usize) -> GapSequence {
    ciura_with(variant, n, ExtensionRounding::Ceil)
}

pub fn ciura_with(variant: CiuraVariant, n: usize, rounding: ExtensionRounding) -> GapSequence {
    let base = variant.base();
    let mut gaps: Vec<usize> = base.iter().copied().take_while(|&g| g < n).collect();
    if gaps.len() == base.len() {
        let mut last = *base.last().unwrap();
        while let Some(next) = rounding.next(last) {
            if next >= n {
                break;
            }
            gaps.push(next);
            last = next;
        }
    }
    if gaps.is_empty() {
        gaps.push(1);
    }
    GapSequence::new(variant.name(), gaps).expect("ciura lists are increasing from 1")
}
