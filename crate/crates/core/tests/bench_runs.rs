use std::collections::HashMap;

use shellgap::bench::{
    emit_plot_data, run_experiment, to_csv, trial_permutation, ExperimentConfig,
};
use shellgap::rng::{random_permutation, trial_rng};
use shellgap::stats::mean_sd;
use shellgap::CostKind;

fn cfg(seqs: &[&str], n: usize, trials: usize, paired: bool) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        seed: 11,
        costs: CostKind::COUNTERS.to_vec(),
        paired,
        ..ExperimentConfig::new(seqs.iter().map(|s| s.to_string()).collect(), vec![n])
    }
}

#[test]
fn shuffle_of_three_is_uniform() {
    let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
    let draws = 60_000;
    for t in 0..draws {
        *counts
            .entry(random_permutation(3, &mut trial_rng(3, t)))
            .or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let chi2: f64 = counts
        .values()
        .map(|&c| {
            let e = draws as f64 / 6.0;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    // 5 degrees of freedom, 99.9th percentile.
    assert!(chi2 < 20.5, "chi2 {chi2}");
    for &c in counts.values() {
        assert!((c as f64 / draws as f64 - 1.0 / 6.0).abs() < 0.01);
    }
}

#[test]
fn identical_config_gives_identical_csv() {
    let c = cfg(&["tokuda", "pratt-25-chain", "ciura-1000"], 300, 50, false);
    let a = to_csv(&run_experiment(&c).unwrap()).unwrap();
    let b = to_csv(&run_experiment(&c).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("sequence,n,cost,mean,sd,trials,seed\n"));
    assert_eq!(a.lines().count(), 1 + 3 * 3);
}

#[test]
fn paired_differences_vary_less() {
    let trials = 300;
    let diff_sd = |paired: bool| {
        let c = cfg(&["tokuda", "ciura-1000"], 1000, trials, paired);
        let streams: Vec<u64> = ["tokuda", "ciura-1000"]
            .iter()
            .map(|s| {
                let label = if paired {
                    "n=1000".to_string()
                } else {
                    format!("{s}/n=1000")
                };
                shellgap::rng::derive_seed(c.seed, &label)
            })
            .collect();
        let seqs: Vec<_> = ["tokuda", "ciura-1000"]
            .iter()
            .map(|s| shellgap::resolve(s).unwrap().gaps_for(1000).unwrap())
            .collect();
        let diffs: Vec<f64> = (0..trials)
            .map(|t| {
                let co = |k: usize| {
                    let mut a = trial_permutation(streams[k], 1000, t);
                    shellgap::shellsort(&mut a, &seqs[k], Default::default())
                        .unwrap()
                        .comparisons as f64
                };
                co(0) - co(1)
            })
            .collect();
        mean_sd(&diffs).1
    };
    assert!(diff_sd(true) < diff_sd(false));
}

#[test]
fn plot_data_differences() {
    let rows = run_experiment(&cfg(
        &["ours-a128-comp", "ciura-128", "pratt-23"],
        128,
        300,
        true,
    ))
    .unwrap();
    let text = emit_plot_data(&rows, "ours-a128-comp").unwrap();
    let diff = |seq: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(&format!("{seq},128,comparisons,")))
            .and_then(|l| l.rsplit(',').next())
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(diff("ours-a128-comp"), 0.0);
    assert!(diff("ciura-128").abs() < 15.0);
    assert!(
        (diff("pratt-23") - 1211.0).abs() < 40.0,
        "{}",
        diff("pratt-23")
    );
    assert!(emit_plot_data(&rows, "tokuda").is_err());
}

#[test]
fn two_element_array_costs() {
    let c = ExperimentConfig {
        trials: 1,
        ..cfg(&["tokuda"], 2, 1, false)
    };
    let row = &run_experiment(&c).unwrap()[0];
    assert_eq!(row.stat(CostKind::Comparisons).unwrap().mean, 1.0);
    assert!([0.0, 1.0].contains(&row.stat(CostKind::Exchanges).unwrap().mean));
}
