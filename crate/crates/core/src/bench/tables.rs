//! Reproduction recipes for the published operation-count tables, with the
//! published means embedded as references.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_experiment, stream_seed, trial_permutation, BenchError, ExperimentConfig};
use crate::chain::presort_pratt;
use crate::engine::{count_k_inversions, SortMetrics};
use crate::gaps::PrattBasePair;
use crate::stats::{mean_sd, CostKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Small,
    Medium,
    Large,
    Time,
    RemainingInversions,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::Small,
        TableId::Medium,
        TableId::Large,
        TableId::Time,
        TableId::RemainingInversions,
    ];

    pub fn sizes(&self) -> &'static [usize] {
        match self {
            TableId::Small => &[20, 128, 200],
            TableId::Medium => &[1000, 2000, 5000],
            TableId::Large => &[10_000],
            TableId::Time => &[1000],
            TableId::RemainingInversions => &[250, 500, 1000, 2000, 4000],
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::Small => "small",
            TableId::Medium => "medium",
            TableId::Large => "large",
            TableId::Time => "time",
            TableId::RemainingInversions => "inversions",
        })
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(TableId::Small),
            "medium" => Ok(TableId::Medium),
            "large" => Ok(TableId::Large),
            "time" => Ok(TableId::Time),
            "inversions" | "remaining-inversions" => Ok(TableId::RemainingInversions),
            other => Err(format!(
                "unknown table `{other}` (expected small, medium, large, time or inversions)"
            )),
        }
    }
}

/// Sequences in published row order. The chain variants only appear in the
/// tables that also report exchange operations.
const PLAIN_ROWS: [&str; 11] = [
    "ours-a128-comp",
    "ours-a1000-comp",
    "ours-a1000-time",
    "ours-b10000-comp",
    "ciura-128",
    "ciura-1000",
    "ciura-large",
    "tokuda",
    "pratt-25",
    "pratt-23",
    "pratt-34",
];

const CHAIN_ROWS: [&str; 2] = ["pratt-25-chain", "pratt-34-chain"];

/// Published reference values. Each block starts with
/// `@ <source> <sizes> <costs>`; each row lists `mean sd` pairs size-major,
/// cost-minor. `- -` marks a cell without a usable value.
const REFERENCE_TEXT: &str = "
@ small/main 20,128,200 comparisons,exchanges
ours-a128-comp    76 6  38 6   998 33  531 33   1786 46  948 48
ours-a1000-comp   76 6  39 7   1004 32 516 31   1787 44  919 45
ours-a1000-time   79 5  39 7   1035 26 468 27   1832 38  846 39
ours-b10000-comp  76 7  33 5   - -     535 36   1775 49  960 49
ciura-128         76 6  37 6   998 32  531 33   1800 46  970 49
ciura-1000        76 7  39 7   1006 31 519 34   1787 45  920 44
ciura-large       76 7  39 7   1004 32 516 32   1794 44  907 42
tokuda            76 6  37 6   1020 28 490 28   1808 42  891 43
pratt-25          111 4 27 4   1732 16 345 17   3207 21  610 24
pratt-23          136 3 25 4   2209 13 333 15   4095 19  589 21
pratt-34          95 4  29 4   1424 16 374 19   2593 25  660 26

@ small/extended 20,128,200 exchange_ops
ours-a128-comp    83 12  1088 50  1923 70
ours-a1000-comp   83 12  1091 51  1905 68
ours-b10000-comp  85 13  1096 52  1937 71
ciura-128         83 12  1090 50  1923 70
ciura-1000        85 13  1086 49  1907 69
ciura-large       85 13  1085 50  1898 67
tokuda            83 12  1061 47  1910 69
pratt-25          79 12  1003 46  1770 62
pratt-23          78 12  1001 46  1768 64
pratt-34          77 12  1002 44  1773 64
pratt-25-chain    85 11  998 45   1757 62
pratt-34-chain    80 12  1016 45  1792 63

@ small/extended 20,128,200 comparisons
ours-b10000-comp  - -    1003 35  - -
pratt-25-chain    133 9  1861 28  3408 36
pratt-34-chain    150 13 1825 40  3223 51

@ medium/main 1000,2000,5000 comparisons,exchanges
ours-a128-comp    13250 203 7847 199   30530 378 18611 384   91122 973 57728 904
ours-a1000-comp   12941 167 7004 155   29596 293 16234 282   86821 768 50349 770
ours-a1000-time   13193 144 6461 146   30120 263 14913 257   87455 548 44305 552
ours-b10000-comp  12980 186 7245 177   29643 305 17241 325   86514 617 57388 817
ciura-128         13300 166 7003 168   30359 318 15987 310   88193 629 46689 627
ciura-1000        12918 161 7002 155   29534 282 16138 274   86641 757 47852 751
ciura-large       13035 142 6701 149   29567 246 15427 261   86232 502 45347 496
tokuda            13116 143 6556 142   29888 241 14952 228   86838 454 44116 472
pratt-25          26211 68  4318 72    62722 122 9755 131    194196 263 28195 278
pratt-23          34380 64  4253 69    82785 106 9669 116    259088 242 28354 257
pratt-34          20974 89  4671 87    50038 153 10543 160   154298 372 30448 372

@ medium/extended 1000,2000,5000 exchange_ops
ours-a128-comp    14657 272  33980 490  101181 1185
ours-a1000-comp   14020 239  32125 402  94750 865
ours-b10000-comp  14206 253  32188 405  93987 809
ciura-128         13974 232  31846 431  92629 851
ciura-1000        14003 229  32029 389  93556 950
ciura-large       13745 216  31348 359  91369 713
tokuda            13779 222  31195 360  91161 674
pratt-25          12604 193  28550 343  82724 737
pratt-23          12765 215  29013 346  85061 755
pratt-34          12686 218  28693 369  83336 867
pratt-25-chain    12515 197  28371 356  82288 734
pratt-34-chain    12792 213  28915 370  83847 875

@ medium/extended 1000,2000,5000 comparisons
pratt-25-chain    27208 93   64722 157  199181 302
pratt-34-chain    24161 137  56417 219  170256 437

@ large/main 10000 comparisons,exchanges
ours-a128-comp    206356 1796  132351 1797
ours-a1000-comp   196336 1707  119012 1710
ours-a1000-time   194052 879   98952 883
ours-b10000-comp  192029 992   - -
ciura-128         195256 1106  105544 1109
ciura-1000        193778 1895  111338 1897
ciura-large       191435 892   101680 897
tokuda            192574 795   98071 796
pratt-25          450131 516   62191 526
pratt-23          604502 451   66923 725
pratt-34          355382 723   63272 462

@ large/extended 10000 exchange_ops
ours-a128-comp    227742 2088
ours-a1000-comp   212206 1528
ours-b10000-comp  209292 1293
ciura-128         204833 1304
ciura-1000        208499 2075
ciura-large       203390 1208
tokuda            201326 1117
pratt-25          182691 1445
pratt-23          189831 1399
pratt-34          183749 1690
pratt-25-chain    181704 1454
pratt-34-chain    184761 1627

@ large/extended 10000 comparisons
pratt-25-chain    460081 573
pratt-34-chain    387340 787

@ time/main 1000 time_ms
ours-a128-comp    3.15 0.08
ours-a1000-comp   3.02 0.06
ours-a1000-time   3.01 0.06
ours-b10000-comp  3.04 0.07
ciura-128         3.07 0.06
ciura-1000        3.01 0.06
ciura-large       3.04 0.07
tokuda            3.06 0.08
pratt-25          5.00 0.09
pratt-23          6.35 0.11
pratt-34          4.17 0.08

@ inversions/extended 250,500,1000,2000,4000 inversions_5
pratt-34  6.9 -  14.0 -  28.1 -  56.4 -  113.1 -

@ inversions/extended 250,500,1000,2000,4000 inversions_3
pratt-25  13.4 -  27.1 -  54.6 -  109.4 -  218.9 -
";

/// One published cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub sequence: String,
    pub n: usize,
    pub cost: String,
    pub mean: f64,
    pub sd: Option<f64>,
    pub source: String,
}

impl Reference {
    /// All embedded references.
    pub fn all() -> &'static [Reference] {
        static REFS: OnceLock<Vec<Reference>> = OnceLock::new();
        REFS.get_or_init(|| parse_references(REFERENCE_TEXT))
    }

    pub fn find(sequence: &str, n: usize, cost: &str) -> Option<&'static Reference> {
        Self::all()
            .iter()
            .find(|r| r.sequence == sequence && r.n == n && r.cost == cost)
    }
}

fn parse_references(text: &str) -> Vec<Reference> {
    let mut out = Vec::new();
    let mut header: Option<(String, Vec<usize>, Vec<String>)> = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix('@') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let sizes = parts[1].split(',').map(|s| s.parse().unwrap()).collect();
            let costs = parts[2].split(',').map(String::from).collect();
            header = Some((parts[0].to_string(), sizes, costs));
            continue;
        }
        let (source, sizes, costs) = header.as_ref().expect("block header first");
        let mut tokens = line.split_whitespace();
        let sequence = tokens.next().unwrap().to_string();
        let values: Vec<&str> = tokens.collect();
        assert_eq!(values.len(), 2 * sizes.len() * costs.len(), "{line}");
        let mut pairs = values.chunks(2);
        for &n in sizes {
            for cost in costs {
                let pair = pairs.next().unwrap();
                let Ok(mean) = pair[0].parse::<f64>() else {
                    continue;
                };
                out.push(Reference {
                    sequence: sequence.clone(),
                    n,
                    cost: cost.clone(),
                    mean,
                    sd: pair[1].parse().ok(),
                    source: source.clone(),
                });
            }
        }
    }
    out
}

/// One reproduced cell beside its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproRow {
    pub sequence: String,
    pub n: usize,
    pub cost: String,
    pub mean: f64,
    pub sd: f64,
    pub trials: usize,
    pub seed: u64,
    pub published_mean: Option<f64>,
    pub published_sd: Option<f64>,
    /// `mean / published_mean - 1`.
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: TableId,
    pub rows: Vec<ReproRow>,
    /// Timing tables only: whether the published ordering was reproduced.
    pub ordering_holds: Option<bool>,
}

impl TableReport {
    pub const CSV_HEADER: &'static str =
        "sequence,n,cost,mean,sd,trials,seed,published_mean,published_sd,deviation";

    /// Largest `|deviation|` over rows that have a published value.
    pub fn max_abs_deviation(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.deviation)
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Rows whose `|deviation|` exceeds `tolerance`.
    pub fn exceeding(&self, tolerance: f64) -> Vec<&ReproRow> {
        self.rows
            .iter()
            .filter(|r| r.deviation.is_some_and(|d| d.abs() > tolerance))
            .collect()
    }

    pub fn to_csv(&self) -> Result<String, BenchError> {
        let opt =
            |v: Option<f64>, prec: usize| v.map(|x| format!("{x:.prec$}")).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::CSV_HEADER.split(','))?;
        for r in &self.rows {
            w.write_record([
                r.sequence.clone(),
                r.n.to_string(),
                r.cost.clone(),
                format!("{:.4}", r.mean),
                format!("{:.4}", r.sd),
                r.trials.to_string(),
                r.seed.to_string(),
                opt(r.published_mean, 2),
                opt(r.published_sd, 2),
                opt(r.deviation, 5),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }
}

fn with_reference(mut row: ReproRow) -> ReproRow {
    if let Some(r) = Reference::find(&row.sequence, row.n, &row.cost) {
        row.published_mean = Some(r.mean);
        row.published_sd = r.sd;
        row.deviation = Some(row.mean / r.mean - 1.0);
    }
    row
}

/// The published timing order: Pratt-23 > Pratt-25 > Pratt-34 > every other
/// sequence. `means` maps sequence name to mean time.
pub fn timing_order_holds(means: &[(String, f64)]) -> bool {
    let get = |s: &str| means.iter().find(|(n, _)| n == s).map(|(_, m)| *m);
    let (Some(p23), Some(p25), Some(p34)) = (get("pratt-23"), get("pratt-25"), get("pratt-34"))
    else {
        return false;
    };
    let rest_max = means
        .iter()
        .filter(|(n, _)| !n.starts_with("pratt-"))
        .map(|(_, m)| *m)
        .fold(f64::NEG_INFINITY, f64::max);
    p23 > p25 && p25 > p34 && p34 > rest_max
}

/// Re-runs one published table with `trials` permutations per cell.
pub fn reproduce_table(
    table: TableId,
    seed: u64,
    trials: usize,
) -> Result<TableReport, BenchError> {
    let sizes = table.sizes().to_vec();
    let mut rows = Vec::new();
    let mut ordering_holds = None;
    match table {
        TableId::Small | TableId::Medium | TableId::Large => {
            let sequences = PLAIN_ROWS
                .iter()
                .chain(&CHAIN_ROWS)
                .map(|s| s.to_string())
                .collect();
            let cfg = ExperimentConfig {
                trials,
                seed,
                costs: CostKind::COUNTERS.to_vec(),
                paired: true,
                ..ExperimentConfig::new(sequences, sizes)
            };
            for r in run_experiment(&cfg)? {
                for s in &r.stats {
                    rows.push(with_reference(ReproRow {
                        sequence: r.sequence.clone(),
                        n: r.n,
                        cost: s.cost_kind.label().to_string(),
                        mean: s.mean,
                        sd: s.sd,
                        trials: s.trials,
                        seed,
                        published_mean: None,
                        published_sd: None,
                        deviation: None,
                    }));
                }
            }
        }
        TableId::Time => {
            let cfg = ExperimentConfig {
                trials,
                seed,
                costs: vec![CostKind::Time],
                paired: true,
                ..ExperimentConfig::new(PLAIN_ROWS.iter().map(|s| s.to_string()).collect(), sizes)
            };
            let report = run_experiment(&cfg)?;
            let means: Vec<(String, f64)> = report
                .iter()
                .map(|r| (r.sequence.clone(), r.stat(CostKind::Time).unwrap().mean))
                .collect();
            ordering_holds = Some(timing_order_holds(&means));
            for r in report {
                let s = r.stat(CostKind::Time).unwrap();
                rows.push(with_reference(ReproRow {
                    sequence: r.sequence.clone(),
                    n: r.n,
                    cost: "time_ms".to_string(),
                    mean: s.mean / 1e6,
                    sd: s.sd / 1e6,
                    trials: s.trials,
                    seed,
                    published_mean: None,
                    published_sd: None,
                    deviation: None,
                }));
            }
        }
        TableId::RemainingInversions => {
            for &n in &sizes {
                for (sequence, bases, offset) in [
                    ("pratt-34", PrattBasePair::THREE_FOUR, 5),
                    ("pratt-25", PrattBasePair::TWO_FIVE, 3),
                ] {
                    let stream = stream_seed(seed, "presort", n, true);
                    let counts: Vec<f64> = (0..trials)
                        .into_par_iter()
                        .map(|t| {
                            let mut a = trial_permutation(stream, n, t);
                            presort_pratt(&mut a, bases, &mut SortMetrics::new())
                                .expect("pratt gaps fit");
                            count_k_inversions(&a, offset) as f64
                        })
                        .collect();
                    let (mean, sd) = mean_sd(&counts);
                    rows.push(with_reference(ReproRow {
                        sequence: sequence.to_string(),
                        n,
                        cost: format!("inversions_{offset}"),
                        mean,
                        sd,
                        trials,
                        seed,
                        published_mean: None,
                        published_sd: None,
                        deviation: None,
                    }));
                }
            }
        }
    }
    Ok(TableReport {
        table,
        rows,
        ordering_holds,
    })
}
