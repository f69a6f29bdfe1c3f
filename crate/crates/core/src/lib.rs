//! Exact multiagent ski rental with varying prices and predictions.
//!
//! The crate is layered bottom-up: [`schedule`] holds price schedules and the
//! offline optimum, [`varying_price`] solves the single-agent problem,
//! [`game`] runs pledge profiles, [`equilibria`] verifies the equilibrium
//! notions, [`predictor`] implements the prediction-augmented algorithm and
//! [`experiments`] runs the seeded Monte-Carlo harness. [`cli`] backs the
//! `skirental` binary.

pub mod cli;
pub mod equilibria;
pub mod error;
pub mod experiments;
pub mod game;
pub mod predictor;
pub mod ratio;
pub mod schedule;
pub mod varying_price;

pub use error::{Error, Result};
pub use ratio::{ratio, ExactRatio, RatioValue};
pub use schedule::{derive_costs, opt_offline, DerivedCosts, PriceSchedule};
pub use varying_price::{oracle_c_opt, solve, strategy_worst_ratio, SolveResult, WitnessCase};
pub use game::{induced_prices, run_game, z_value, GameConfig, PledgeProfile, RunOutcome};
pub use equilibria::{
    check_prediction_eq_run, check_predictionless, check_rational_no_selfpred, deviation_oracle,
    enumerate_rational_eq, oracle_certify, purchase_deadline_bound, ratios_thm2, EqVerdict, EquilibriumSpec,
};
pub use predictor::{
    beta_table, closed_form_days, compute_days, empirical_consistency, improvement_threshold, prop2_bound, run_alg1,
    Alg1, AlgDecision, AlgParams, BetaResult, Branch, R3Rule,
};
pub use experiments::{run_experiment, sample_instance, write_csv, ExperimentConfig, ExperimentRow};
