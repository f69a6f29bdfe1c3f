use skirental::equilibria::{check_predictionless, check_rational_no_selfpred, enumerate_rational_eq, ratios_thm2};
use skirental::game::{run_game, PledgeProfile};
use skirental::RatioValue;

/// Worst ratio of each agent over its own active time in `1..=horizon`, with
/// everyone else active throughout.
fn worst_by_play(f: &PledgeProfile, horizon: u64) -> Vec<RatioValue> {
    let n = f.config().n;
    (0..n)
        .map(|i| {
            (1..=horizon)
                .map(|t| {
                    let mut active = vec![horizon; n];
                    active[i] = t;
                    run_game(f, &active).unwrap().ratios[i]
                })
                .max()
                .unwrap()
        })
        .collect()
}

#[test]
fn coalition_ratios_match_play() {
    for b in 2..=6u64 {
        for n in 1..=3usize {
            for spec in enumerate_rational_eq(b, n, 1..=2 * b - 1).unwrap() {
                let verdict = check_rational_no_selfpred(&spec).unwrap();
                let f = spec.realize();
                assert_eq!(verdict.ratios, worst_by_play(&f, 4 * b), "{spec:?}");
            }
        }
    }
}

#[test]
fn predictionless_ratios_match_play() {
    for b in 2..=5u64 {
        for n in 1..=2usize {
            for spec in enumerate_rational_eq(b, n, 1..=2 * b - 1).unwrap() {
                let f = spec.realize();
                if !check_predictionless(&f).is_equilibrium {
                    continue;
                }
                let formula: Vec<RatioValue> = ratios_thm2(&f).unwrap().into_iter().map(RatioValue::Finite).collect();
                assert_eq!(formula, worst_by_play(&f, 4 * b), "{spec:?}");
            }
        }
    }
}
