//! Sequence names used across the CLI and experiment configs.
//!
//! Fixed names: `tokuda`, `pratt-23`, `pratt-25`, `pratt-34`, `ciura-128`,
//! `ciura-1000`, `ciura-large`, `ours-a128-comp`, `ours-a1000-comp`,
//! `ours-a1000-time`, `ours-b10000-comp`, and the structure-aware variants
//! `pratt-25-chain`, `pratt-34-chain`.
//!
//! Ad-hoc forms: `template-a:<a,b,c,d,e,f>`, `template-b:<a,b,c,d>`,
//! `template-b-floor:<a,b,c,d>` and `pratt:<p,q>`. The angle brackets are
//! optional.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    ciura, pratt, template_a, template_b, tokuda, CiuraVariant, GapError, GapSequence,
    PrattBasePair, TemplateParamsA, TemplateParamsB,
};
use crate::chain::FinalPass;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown sequence name `{0}`")]
    Unknown(String),
    #[error("malformed parameters in `{name}`: {reason}")]
    BadParams { name: String, reason: String },
    #[error(transparent)]
    Gap(#[from] GapError),
}

/// How a named sequence produces its gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    Tokuda,
    Pratt(PrattBasePair),
    Ciura(CiuraVariant),
    TemplateA(TemplateParamsA),
    TemplateB(TemplateParamsB),
}

impl Generator {
    /// Gaps for arrays of length `n`. Arrays shorter than 2 get `[1]`.
    pub fn generate(&self, n: usize) -> Result<GapSequence, GapError> {
        if n < 2 {
            return Ok(GapSequence::unit("unit"));
        }
        match self {
            Generator::Tokuda => tokuda(n),
            Generator::Pratt(bases) => pratt(*bases, n),
            Generator::Ciura(v) => Ok(ciura(*v, n)),
            Generator::TemplateA(p) => template_a(p, n),
            Generator::TemplateB(p) => template_b(p, n),
        }
    }
}

/// A resolved catalog entry: gap generator plus final-pass strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    pub name: String,
    pub generator: Generator,
    pub final_pass: FinalPass,
}

impl Strategy {
    pub fn gaps_for(&self, n: usize) -> Result<GapSequence, GapError> {
        Ok(self.generator.generate(n)?.with_name(self.name.clone()))
    }

    /// Notes about the entry worth surfacing to a user.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Generator::Pratt(b) = self.generator {
            if !b.is_coprime() {
                out.push(format!(
                    "bases ({}, {}) are not coprime; inversion-offset guarantees do not apply",
                    b.p(),
                    b.q()
                ));
            }
        }
        out
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Strategy {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        resolve(s)
    }
}

/// Every fixed catalog name.
pub const NAMES: &[&str] = &[
    "ours-a128-comp",
    "ours-a1000-comp",
    "ours-a1000-time",
    "ours-b10000-comp",
    "ciura-128",
    "ciura-1000",
    "ciura-large",
    "tokuda",
    "pratt-25",
    "pratt-25-chain",
    "pratt-23",
    "pratt-34",
    "pratt-34-chain",
];

pub fn resolve(name: &str) -> Result<Strategy, CatalogError> {
    let name = name.trim();
    let plain = |generator| Strategy {
        name: name.to_string(),
        generator,
        final_pass: FinalPass::Insertion,
    };
    let fixed = match name {
        "tokuda" => Some(plain(Generator::Tokuda)),
        "pratt-23" => Some(plain(Generator::Pratt(PrattBasePair::TWO_THREE))),
        "pratt-25" => Some(plain(Generator::Pratt(PrattBasePair::TWO_FIVE))),
        "pratt-34" => Some(plain(Generator::Pratt(PrattBasePair::THREE_FOUR))),
        "pratt-25-chain" => Some(Strategy {
            final_pass: FinalPass::Chain25,
            ..plain(Generator::Pratt(PrattBasePair::TWO_FIVE))
        }),
        "pratt-34-chain" => Some(Strategy {
            final_pass: FinalPass::Chain34,
            ..plain(Generator::Pratt(PrattBasePair::THREE_FOUR))
        }),
        "ciura-128" => Some(plain(Generator::Ciura(CiuraVariant::C128))),
        "ciura-1000" => Some(plain(Generator::Ciura(CiuraVariant::C1000))),
        "ciura-large" => Some(plain(Generator::Ciura(CiuraVariant::CLarge))),
        "ours-a128-comp" => Some(plain(Generator::TemplateA(TemplateParamsA::A128_COMP))),
        "ours-a1000-comp" => Some(plain(Generator::TemplateA(TemplateParamsA::A1000_COMP))),
        "ours-a1000-time" => Some(plain(Generator::TemplateA(TemplateParamsA::A1000_TIME))),
        "ours-b10000-comp" => Some(plain(Generator::TemplateB(TemplateParamsB::B10000_COMP))),
        _ => None,
    };
    if let Some(s) = fixed {
        return Ok(s);
    }

    let Some((kind, args)) = name.split_once(':') else {
        return Err(CatalogError::Unknown(name.to_string()));
    };
    let bad = |reason: String| CatalogError::BadParams {
        name: name.to_string(),
        reason,
    };
    let args = args.trim();
    let args = args
        .strip_prefix('<')
        .and_then(|a| a.strip_suffix('>'))
        .unwrap_or(args);
    let values = parse_numbers(args).map_err(&bad)?;
    let generator = match kind.trim() {
        "template-a" => {
            let [a, b, c, d, e, f] = values[..] else {
                return Err(bad(format!("expected 6 values, got {}", values.len())));
            };
            let e = as_offset(e).map_err(&bad)?;
            Generator::TemplateA(TemplateParamsA { a, b, c, d, e, f })
        }
        kind @ ("template-b" | "template-b-floor") => {
            let [a, b, c, d] = values[..] else {
                return Err(bad(format!("expected 4 values, got {}", values.len())));
            };
            let d = as_offset(d).map_err(&bad)?;
            Generator::TemplateB(TemplateParamsB {
                a,
                b,
                c,
                d,
                exponent_floor: kind == "template-b-floor",
            })
        }
        "pratt" => {
            let [p, q] = values[..] else {
                return Err(bad(format!("expected 2 values, got {}", values.len())));
            };
            let (p, q) = (as_base(p).map_err(&bad)?, as_base(q).map_err(&bad)?);
            Generator::Pratt(PrattBasePair::new(p, q)?)
        }
        _ => return Err(CatalogError::Unknown(name.to_string())),
    };
    Ok(plain(generator))
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        })
        .collect()
}

fn as_offset(v: f64) -> Result<u32, String> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(format!("offset {v} must be a non-negative integer"))
    }
}

fn as_base(v: f64) -> Result<u64, String> {
    if v >= 2.0 && v.fract() == 0.0 && v <= 1e9 {
        Ok(v as u64)
    } else {
        Err(format!("base {v} must be an integer >= 2"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixed_name_resolves() {
        for name in NAMES {
            let s = resolve(name).unwrap();
            assert_eq!(s.name, *name);
            let g = s.gaps_for(1000).unwrap();
            assert!(g.fits(1000), "{name}");
        }
        assert!(matches!(resolve("shell"), Err(CatalogError::Unknown(_))));
    }

    #[test]
    fn chain_variants_carry_their_final_pass() {
        assert_eq!(
            resolve("pratt-25-chain").unwrap().final_pass,
            FinalPass::Chain25
        );
        assert_eq!(
            resolve("pratt-34-chain").unwrap().final_pass,
            FinalPass::Chain34
        );
        assert_eq!(
            resolve("pratt-25").unwrap().final_pass,
            FinalPass::Insertion
        );
    }

    #[test]
    fn ad_hoc_templates() {
        let a = resolve("template-a:<2.6321,1.6841,2.1570,0.7360,3,0.7630>").unwrap();
        assert_eq!(
            a.generator,
            Generator::TemplateA(TemplateParamsA::A128_COMP)
        );
        let b = resolve("template-b:4.0816, 8.5714, 2.2449, 0").unwrap();
        assert_eq!(
            b.gaps_for(600).unwrap().gaps(),
            &[1, 4, 10, 27, 72, 187, 488]
        );
        let bf = resolve("template-b-floor:4.0816,8.5714,2.2449,0").unwrap();
        assert_eq!(&bf.gaps_for(600).unwrap().gaps()[..3], &[1, 4, 34]);
        let p = resolve("pratt:<2,7>").unwrap();
        assert_eq!(p.gaps_for(20).unwrap().gaps(), &[1, 2, 4, 7, 8, 14, 16]);
    }

    #[test]
    fn malformed_parameters() {
        for s in [
            "template-a:1,2,3",
            "template-a:1,2,3,4,0.5,1",
            "template-b:1,2,x,0",
            "template-b:1,2,3,-1",
            "pratt:1,3",
            "pratt:2.5,3",
            "template-a:",
            "template-b:inf,1,1,0",
        ] {
            assert!(resolve(s).is_err(), "{s}");
        }
    }

    #[test]
    fn tiny_arrays_get_unit_sequence() {
        for name in NAMES {
            let s = resolve(name).unwrap();
            assert_eq!(s.gaps_for(1).unwrap().gaps(), &[1]);
            assert_eq!(s.gaps_for(0).unwrap().gaps(), &[1]);
        }
    }

    #[test]
    fn non_coprime_pratt_warns() {
        assert!(resolve("pratt:2,4").unwrap().warnings().len() == 1);
        assert!(resolve("pratt-25").unwrap().warnings().is_empty());
    }
}
