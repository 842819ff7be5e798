//! Parameter grids for the two template families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaps::{
    template_a, template_b, GapError, GapSequence, TemplateParamsA, TemplateParamsB,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("malformed axis `{0}` (expected name=lo:hi:points, name=lo..hi or name=value)")]
    Malformed(String),
    #[error("unknown axis `{axis}` for template {family}")]
    UnknownAxis { axis: String, family: Family },
    #[error("axis `{0}` given twice")]
    Duplicate(String),
    #[error("axis `{axis}`: {reason}")]
    Invalid { axis: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn axis_names(&self) -> &'static [&'static str] {
        match self {
            Family::A => &["a", "b", "c", "d", "e", "f"],
            Family::B => &["a", "b", "c", "d"],
        }
    }

    pub(crate) fn integer_axis(&self) -> &'static str {
        match self {
            Family::A => "e",
            Family::B => "d",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "a",
            Family::B => "b",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            other => Err(format!("unknown template `{other}` (expected a or b)")),
        }
    }
}

/// Linearly spaced values on `[lo, hi]`, or consecutive integers when
/// `integer` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub integer: bool,
}

impl Axis {
    pub fn real(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            integer: false,
        }
    }

    pub fn integers(lo: u32, hi: u32) -> Self {
        Self {
            lo: lo as f64,
            hi: hi as f64,
            points: (hi.saturating_sub(lo) + 1) as usize,
            integer: true,
        }
    }

    pub fn single(v: f64, integer: bool) -> Self {
        Self {
            lo: v,
            hi: v,
            points: 1,
            integer,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.integer {
            return self.lo + k as f64;
        }
        if self.points <= 1 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.value(k)).collect()
    }

    fn validate(&self, name: &str) -> Result<(), GridError> {
        let bad = |reason: &str| {
            Err(GridError::Invalid {
                axis: name.to_string(),
                reason: reason.to_string(),
            })
        };
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return bad("bounds must be finite");
        }
        if self.lo > self.hi {
            return bad("lower bound exceeds upper bound");
        }
        if self.points == 0 {
            return bad("point count must be at least 1");
        }
        if self.integer {
            if self.lo < 0.0 || self.lo.fract() != 0.0 || self.hi.fract() != 0.0 {
                return bad("integer axis needs non-negative integer bounds");
            }
            if self.hi > u32::MAX as f64 || (self.hi - self.lo) as usize + 1 != self.points {
                return bad("integer axis must list consecutive integers");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub family: Family,
    /// One axis per parameter, in [`Family::axis_names`] order.
    pub axes: Vec<Axis>,
}

impl GridSpec {
    /// Five real axes of 20 points on `[0.5, 5]`; `e` in `0..=10`.
    pub fn default_a() -> Self {
        let r = Axis::real(0.5, 5.0, 20);
        Self {
            family: Family::A,
            axes: vec![r, r, r, r, Axis::integers(0, 10), r],
        }
    }

    /// Three real axes of 50 points on `[0, 10]`; `d` in `0..=10`.
    pub fn default_b() -> Self {
        let r = Axis::real(0.0, 10.0, 50);
        Self {
            family: Family::B,
            axes: vec![r, r, r, Axis::integers(0, 10)],
        }
    }

    /// Six points per real axis on `[0.5, 5]`; `e` in `0..=5`.
    pub fn coarse_a() -> Self {
        let r = Axis::real(0.5, 5.0, 6);
        Self {
            family: Family::A,
            axes: vec![r, r, r, r, Axis::integers(0, 5), r],
        }
    }

    /// Ten points per real axis on `[0, 10]`; `d` in `0..=3`.
    pub fn coarse_b() -> Self {
        let r = Axis::real(0.0, 10.0, 10);
        Self {
            family: Family::B,
            axes: vec![r, r, r, Axis::integers(0, 3)],
        }
    }

    pub fn default_for(family: Family) -> Self {
        match family {
            Family::A => Self::default_a(),
            Family::B => Self::default_b(),
        }
    }

    pub fn coarse_for(family: Family) -> Self {
        match family {
            Family::A => Self::coarse_a(),
            Family::B => Self::coarse_b(),
        }
    }

    /// Parses `preset` (`default`, `coarse`) or a comma-separated axis list
    /// such as `a=0.5:5:6,b=1:2:3,e=0..5,f=0.76`. Axes not listed keep their
    /// default.
    pub fn parse(family: Family, text: &str) -> Result<Self, GridError> {
        let text = text.trim();
        match text {
            "" | "default" => return Ok(Self::default_for(family)),
            "coarse" => return Ok(Self::coarse_for(family)),
            _ => {}
        }
        let mut spec = Self::default_for(family);
        let names = family.axis_names();
        let mut seen = Vec::new();
        for entry in text.split(',') {
            let entry = entry.trim();
            let (name, value) = entry
                .split_once('=')
                .ok_or_else(|| GridError::Malformed(entry.to_string()))?;
            let name = name.trim();
            let idx =
                names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| GridError::UnknownAxis {
                        axis: name.to_string(),
                        family,
                    })?;
            if seen.contains(&idx) {
                return Err(GridError::Duplicate(name.to_string()));
            }
            seen.push(idx);
            let integer = name == family.integer_axis();
            let axis = parse_axis(value.trim(), integer)
                .ok_or_else(|| GridError::Malformed(entry.to_string()))?;
            axis.validate(name)?;
            spec.axes[idx] = axis;
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        let names = self.family.axis_names();
        if self.axes.len() != names.len() {
            return Err(GridError::Invalid {
                axis: "*".into(),
                reason: format!("expected {} axes, got {}", names.len(), self.axes.len()),
            });
        }
        for (axis, name) in self.axes.iter().zip(names) {
            axis.validate(name)?;
            if (*name == self.family.integer_axis()) != axis.integer {
                return Err(GridError::Invalid {
                    axis: name.to_string(),
                    reason: "integer flag does not match the parameter".into(),
                });
            }
        }
        Ok(())
    }

    /// Number of tuples; depends only on the axes.
    pub fn cardinality(&self) -> u64 {
        self.axes.iter().map(|a| a.points as u64).product()
    }

    /// Tuple number `index` in enumeration order (last axis fastest).
    pub fn tuple(&self, mut index: u64) -> Vec<f64> {
        let mut out = vec![0.0; self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let p = axis.points as u64;
            *slot = axis.value((index % p) as usize);
            index /= p;
        }
        out
    }

    /// Lazy Cartesian product of the axes.
    pub fn enumerate(&self) -> impl Iterator<Item = TemplateParams> + '_ {
        (0..self.cardinality())
            .map(move |i| TemplateParams::from_tuple(self.family, &self.tuple(i)))
    }
}

fn parse_axis(value: &str, integer: bool) -> Option<Axis> {
    if let Some((lo, hi)) = value.split_once("..") {
        if !integer {
            return None;
        }
        return Some(Axis::integers(
            lo.trim().parse().ok()?,
            hi.trim().parse().ok()?,
        ));
    }
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    match parts[..] {
        [v] => Some(Axis::single(v.parse().ok()?, integer)),
        [lo, hi, points] if !integer => Some(Axis::real(
            lo.parse().ok()?,
            hi.parse().ok()?,
            points.parse().ok()?,
        )),
        _ => None,
    }
}

/// Parameters of either template family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TemplateParams {
    A(TemplateParamsA),
    B(TemplateParamsB),
}

impl TemplateParams {
    pub fn from_tuple(family: Family, t: &[f64]) -> Self {
        match family {
            Family::A => TemplateParams::A(TemplateParamsA {
                a: t[0],
                b: t[1],
                c: t[2],
                d: t[3],
                e: t[4] as u32,
                f: t[5],
            }),
            Family::B => TemplateParams::B(TemplateParamsB {
                a: t[0],
                b: t[1],
                c: t[2],
                d: t[3] as u32,
                exponent_floor: false,
            }),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            TemplateParams::A(_) => Family::A,
            TemplateParams::B(_) => Family::B,
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            TemplateParams::A(p) => p.to_vec(),
            TemplateParams::B(p) => p.to_vec(),
        }
    }

    pub fn generate(&self, n: usize) -> Result<GapSequence, GapError> {
        match self {
            TemplateParams::A(p) => template_a(p, n),
            TemplateParams::B(p) => template_b(p, n),
        }
    }
}

impl fmt::Display for TemplateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_vec();
        write!(f, "{}:", self.family())?;
        for (i, x) in v.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}
