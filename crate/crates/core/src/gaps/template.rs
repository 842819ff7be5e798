//! Parameterized gap-sequence templates.
//!
//! Family A: `k(i) = floor((a^floor(i/b) * c^floor(i/d))^f + e)`
//! Family B: `k(i) = floor(a * b^(i/c) + d)`, or with `floor(i/c)` in the
//! exponent when `exponent_floor` is set.
//!
//! Both are evaluated for `i = 0, 1, 2, ...` in `f64` until a value reaches
//! `n`. Plateaus are dropped, 1 is prepended, and a raw value smaller than its
//! predecessor makes the parameter set degenerate.

use serde::{Deserialize, Serialize};

use super::{push_gap, DegenerateReason, GapError, GapSequence};

/// Upper bound on template indices evaluated before giving up.
const INDEX_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateParamsA {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: u32,
    pub f: f64,
}

impl TemplateParamsA {
    pub const A128_COMP: TemplateParamsA = TemplateParamsA {
        a: 2.6321,
        b: 1.6841,
        c: 2.1570,
        d: 0.7360,
        e: 3,
        f: 0.7630,
    };
    pub const A1000_COMP: TemplateParamsA = TemplateParamsA {
        a: 3.5789,
        b: 2.6316,
        c: 3.8158,
        d: 2.1579,
        e: 3,
        f: 0.7632,
    };
    pub const A1000_TIME: TemplateParamsA = TemplateParamsA {
        a: 2.75,
        b: 2.75,
        c: 3.7142,
        d: 2.4286,
        e: 2,
        f: 0.7429,
    };

    /// The same template with the `(a, b)` and `(c, d)` pairs exchanged.
    pub fn swapped_pairs(&self) -> Self {
        Self {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
            ..*self
        }
    }

    fn validate(&self) -> Result<(), GapError> {
        let reals = [self.a, self.b, self.c, self.d, self.f];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(GapError::InvalidParams("parameters must be finite".into()));
        }
        if self.b <= 0.0 || self.d <= 0.0 {
            return Err(GapError::InvalidParams(
                "divisors b and d must be positive".into(),
            ));
        }
        if self.a <= 0.0 || self.c <= 0.0 || self.f <= 0.0 {
            return Err(GapError::InvalidParams(
                "a, c and f must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Long-run growth of `ln k(i)` per index step; values `<= 0` never reach
    /// an arbitrary `n`.
    fn growth_rate(&self) -> f64 {
        self.f * (self.a.ln() / self.b + self.c.ln() / self.d)
    }

    pub fn value(&self, i: usize) -> f64 {
        let i = i as f64;
        let base = self.a.powf((i / self.b).floor()) * self.c.powf((i / self.d).floor());
        (base.powf(self.f) + self.e as f64).floor()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.a, self.b, self.c, self.d, self.e as f64, self.f]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateParamsB {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: u32,
    #[serde(default)]
    pub exponent_floor: bool,
}

impl TemplateParamsB {
    pub const B10000_COMP: TemplateParamsB = TemplateParamsB {
        a: 4.0816,
        b: 8.5714,
        c: 2.2449,
        d: 0,
        exponent_floor: false,
    };

    fn validate(&self) -> Result<(), GapError> {
        if [self.a, self.b, self.c].iter().any(|v| !v.is_finite()) {
            return Err(GapError::InvalidParams("parameters must be finite".into()));
        }
        if self.c <= 0.0 {
            return Err(GapError::InvalidParams("divisor c must be positive".into()));
        }
        Ok(())
    }

    fn can_grow(&self) -> bool {
        self.a > 0.0 && self.b > 1.0
    }

    pub fn value(&self, i: usize) -> f64 {
        let mut exponent = i as f64 / self.c;
        if self.exponent_floor {
            exponent = exponent.floor();
        }
        (self.a * self.b.powf(exponent) + self.d as f64).floor()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.a, self.b, self.c, self.d as f64]
    }
}

fn collect(
    name: String,
    n: usize,
    can_grow: bool,
    value: impl Fn(usize) -> f64,
) -> Result<GapSequence, GapError> {
    if n < 2 {
        return Err(GapError::EmptySequence(n));
    }
    let mut gaps = vec![1usize];
    let degenerate = |reason, gaps: Vec<usize>| {
        Err(GapError::Degenerate {
            reason,
            partial: gaps,
        })
    };
    let mut prev = f64::NEG_INFINITY;
    for i in 0..INDEX_CAP {
        let v = value(i);
        if v.is_nan() || v == f64::NEG_INFINITY {
            return degenerate(DegenerateReason::NonFinite, gaps);
        }
        if v < prev {
            return degenerate(DegenerateReason::NonMonotone, gaps);
        }
        if v >= n as f64 {
            return GapSequence::new(name, gaps);
        }
        if !can_grow && v == prev {
            return degenerate(DegenerateReason::Stalled, gaps);
        }
        prev = v;
        if v >= 1.0 {
            push_gap(&mut gaps, v as usize, n);
        }
    }
    degenerate(DegenerateReason::Stalled, gaps)
}

pub fn template_a(params: &TemplateParamsA, n: usize) -> Result<GapSequence, GapError> {
    params.validate()?;
    let p = *params;
    collect(
        format!("template-a:{},{},{},{},{},{}", p.a, p.b, p.c, p.d, p.e, p.f),
        n,
        p.growth_rate() > 0.0,
        move |i| p.value(i),
    )
}

pub fn template_b(params: &TemplateParamsB, n: usize) -> Result<GapSequence, GapError> {
    params.validate()?;
    let p = *params;
    let prefix = if p.exponent_floor {
        "template-b-floor"
    } else {
        "template-b"
    };
    collect(
        format!("{prefix}:{},{},{},{}", p.a, p.b, p.c, p.d),
        n,
        p.can_grow(),
        move |i| p.value(i),
    )
}
