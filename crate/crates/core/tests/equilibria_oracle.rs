mod common;

use skirental::equilibria::{
    check_predictionless, check_rational_no_selfpred, compositions, oracle_certify, Condition, EquilibriumSpec,
};
use skirental::game::PledgeProfile;

#[test]
fn coalition_checker_matches_oracle() {
    for b in 2..=6u64 {
        for n in 1..=3usize {
            for r in 1..=2 * b - 1 {
                for w in compositions(b, n) {
                    let spec = EquilibriumSpec::new(b, n, r, w).unwrap();
                    let verdict = check_rational_no_selfpred(&spec).unwrap();
                    let report = oracle_certify(&spec.realize()).unwrap();
                    assert_eq!(verdict.is_equilibrium, report.certified(), "{spec:?} {report:?}");
                }
            }
        }
    }
}

#[test]
fn predictionless_checker_is_sound_and_complete_on_single_purchase_profiles() {
    for b in 2..=4u64 {
        for n in 1..=3usize {
            for f in common::one_extra_pledge_family(b, n) {
                let accepted = check_predictionless(&f).is_equilibrium;
                let certified = oracle_certify(&f).unwrap().certified();
                if accepted {
                    assert!(certified, "accepted but not certified: {}", f.to_json_value());
                } else if !common::has_second_full_day(&f) {
                    assert!(!certified, "certified but rejected: {}", f.to_json_value());
                }
            }
        }
    }
}

#[test]
fn overpledged_later_day_is_rejected_although_certified() {
    // Agent 3 buys alone on day 2 and everyone is best-responding, yet the
    // unused day 4 collects 3 > B from the others and fails the day-by-day
    // bound.
    let f = PledgeProfile::from_json_str(r#"{"B":2,"H":4,"n":3,"pledges":{"1":[[4,2]],"2":[[4,1]],"3":[[2,2]]}}"#).unwrap();
    let verdict = check_predictionless(&f);
    assert!(!verdict.is_equilibrium);
    assert_eq!(verdict.failing_condition.unwrap().condition, Condition::Iv);
    assert!(oracle_certify(&f).unwrap().certified());
}
