//! Verifiers for the three equilibrium notions and an exact deviation oracle.
//!
//! * [`check_predictionless`]: arbitrary pledge tables, judged by the
//!   conditions (i)-(iv) on the first purchase day and `Z_i`.
//! * [`check_rational_no_selfpred`]: single-day coalitions `(r, w)`.
//! * [`check_prediction_eq_run`]: runs of equilibria where pledger `k` is
//!   only required to be `lambda_k`-robust.
//!
//! [`deviation_oracle`] brute-forces each agent's best response in its induced
//! schedule and is the ground truth the checkers are tested against.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{agent_worst_ratio, induced_prices, z_value, GameConfig, PledgeProfile};
use crate::ratio::{ExactRatio, RatioValue};
use crate::schedule::{derive_costs, PriceSchedule};
use crate::varying_price::{oracle_c_opt_bounded, solve, DEFAULT_ORACLE_FACTOR};

/// Which requirement a profile or spec violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// No purchase day, or pledges on it exceed `B`.
    I,
    /// An agent facing a free day pledges on it or is not waiting for it.
    Ii,
    /// An agent with a bargain day does not use it as required.
    Iii,
    /// Some other day is strictly better for an agent than the purchase day.
    Iv,
    /// Pledger inequality for a purchase day `r <= B`.
    EarlyPledger,
    /// Pledger inequality for a purchase day `B + 1 <= r <= 2B - 1`.
    LatePledger,
    /// Robustness inequality for a purchase day `r <= M_*`.
    EarlyRobust,
    /// Robustness inequality for a purchase day `r > M_*`.
    LateRobust,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "i",
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
            Condition::EarlyPledger => "early-pledger",
            Condition::LatePledger => "late-pledger",
            Condition::EarlyRobust => "early-robust",
            Condition::LateRobust => "late-robust",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: Condition,
    /// The offending agent, when the condition is per agent.
    pub agent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqVerdict {
    pub is_equilibrium: bool,
    pub failing_condition: Option<Failure>,
    /// Per-agent competitive ratios, in agent order; empty on failure.
    pub ratios: Vec<RatioValue>,
}

impl EqVerdict {
    fn accept(ratios: Vec<RatioValue>) -> Self {
        Self { is_equilibrium: true, failing_condition: None, ratios }
    }

    fn reject(condition: Condition, agent: Option<usize>) -> Self {
        Self { is_equilibrium: false, failing_condition: Some(Failure { condition, agent }), ratios: Vec::new() }
    }
}

/// How the predictionless checker classified one agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentCase {
    FreeDay,
    BargainDay,
    OptimalDay,
}

/// Condition (iv) must hold for every day `j != r`; beyond `max(H, B + 1)`
/// nobody pledges and the right-hand side only grows with `j`.
fn last_checked_day(cfg: GameConfig) -> u64 {
    cfg.h.max(cfg.b + 1)
}

fn classify(f: &PledgeProfile, r: u64, i: usize) -> std::result::Result<AgentCase, Condition> {
    let b = f.config().b;
    let z = z_value(f, i);
    let own = f.pledge(i, r);
    if f.others(i, r) == b && r <= z + 1 {
        return if r == z + 1 && own == 0 { Ok(AgentCase::FreeDay) } else { Err(Condition::Ii) };
    }
    if let Some(k) = (1..=r.min(z)).find(|&k| f.others(i, k) == b - 1) {
        let on_day = k == r && r == z && own == 1;
        let before_free =
            k == z && k + 1 == r && f.pledge(i, r - 1) == 0 && own == 0 && f.others(i, r) == b;
        return if on_day || before_free { Ok(AgentCase::BargainDay) } else { Err(Condition::Iii) };
    }
    let c = ExactRatio::of(own + r - 1, r.min(z));
    for j in (1..=last_checked_day(f.config())).filter(|&j| j != r) {
        let rhs = ExactRatio::from(b + j - 1) - ExactRatio::from(j.min(z)) * c;
        if ExactRatio::from(f.others(i, j)) > rhs {
            return Err(Condition::Iv);
        }
    }
    Ok(AgentCase::OptimalDay)
}

/// Per-agent classification for a profile that satisfies condition (i).
pub fn classify_agents(f: &PledgeProfile) -> Result<Vec<AgentCase>> {
    let r = exact_purchase_day(f).map_err(|_| Error::NotEquilibrium)?;
    (1..=f.config().n).map(|i| classify(f, r, i).map_err(|_| Error::NotEquilibrium)).collect()
}

fn exact_purchase_day(f: &PledgeProfile) -> std::result::Result<u64, Condition> {
    match f.purchase_day() {
        Some(r) if f.total(r) == f.config().b => Ok(r),
        _ => Err(Condition::I),
    }
}

/// Verifies a predictionless profile and reports per-agent ratios.
pub fn check_predictionless(f: &PledgeProfile) -> EqVerdict {
    let r = match exact_purchase_day(f) {
        Ok(r) => r,
        Err(c) => return EqVerdict::reject(c, None),
    };
    for i in 1..=f.config().n {
        if let Err(c) = classify(f, r, i) {
            return EqVerdict::reject(c, Some(i));
        }
    }
    let ratios = ratios_thm2(f).expect("profile was just accepted");
    EqVerdict::accept(ratios.into_iter().map(RatioValue::Finite).collect())
}

/// Ratios of an accepted predictionless equilibrium: 1 for agents waiting for
/// a free or bargain day, `(f_i(r) + r - 1) / min(r, Z_i)` otherwise.
pub fn ratios_thm2(f: &PledgeProfile) -> Result<Vec<ExactRatio>> {
    let r = exact_purchase_day(f).map_err(|_| Error::NotEquilibrium)?;
    let cases = classify_agents(f)?;
    Ok(cases
        .iter()
        .enumerate()
        .map(|(idx, case)| match case {
            AgentCase::FreeDay | AgentCase::BargainDay => ExactRatio::one(),
            AgentCase::OptimalDay => {
                let i = idx + 1;
                ExactRatio::of(f.pledge(i, r) + r - 1, r.min(z_value(f, i)))
            }
        })
        .collect())
}

/// A single-day coalition: agents `pledgers[k]` pledge `weights[k]` on day `r`
/// and nobody pledges anything else.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EquilibriumSpec {
    pub r: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub n: usize,
    pub pledgers: Vec<usize>,
    pub weights: Vec<u64>,
}

impl EquilibriumSpec {
    /// Pledgers are agents `1..=weights.len()`; the remaining agents up to
    /// `n` are freeriders.
    pub fn new(b: u64, n: usize, r: u64, weights: Vec<u64>) -> Result<Self> {
        let pledgers = (1..=weights.len()).collect();
        Self::with_pledgers(b, n, r, pledgers, weights)
    }

    pub fn with_pledgers(b: u64, n: usize, r: u64, pledgers: Vec<usize>, weights: Vec<u64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if b < 2 {
            return bad(format!("license cost B = {b} must be at least 2"));
        }
        if r == 0 {
            return bad("purchase day must be at least 1".into());
        }
        if weights.is_empty() || pledgers.len() != weights.len() {
            return bad("need one weight per pledger and at least one pledger".into());
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0 || w > b) {
            return bad(format!("weight {w} outside 1..={b}"));
        }
        let mut sorted = pledgers.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != pledgers.len() || sorted.iter().any(|&a| a == 0 || a > n) {
            return bad(format!("pledgers must be distinct agents in 1..={n}"));
        }
        Ok(Self { r, b, n, pledgers, weights })
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// The pledge of `agent`, zero for freeriders.
    pub fn weight_of(&self, agent: usize) -> u64 {
        self.pledgers.iter().position(|&a| a == agent).map_or(0, |k| self.weights[k])
    }

    /// The pledge tables this spec describes, over a horizon of
    /// `max(r, 2B)` days.
    pub fn realize(&self) -> PledgeProfile {
        let cfg = GameConfig::new(self.n, self.b, self.r.max(2 * self.b)).expect("spec is valid");
        let triples: Vec<(usize, u64, u64)> =
            self.pledgers.iter().zip(&self.weights).map(|(&a, &w)| (a, self.r, w)).collect();
        PledgeProfile::from_triples(cfg, &triples).expect("spec is valid")
    }
}

/// Verifies a single-day coalition with `sum w = B` and `r <= 2B - 1`.
pub fn check_rational_no_selfpred(spec: &EquilibriumSpec) -> Result<EqVerdict> {
    let (r, b) = (spec.r, spec.b);
    if r > 2 * b - 1 {
        return Err(Error::InvalidSpec(format!("purchase day {r} exceeds 2B - 1 = {}", 2 * b - 1)));
    }
    if spec.weight_sum() != b {
        return Err(Error::InvalidSpec(format!("weights sum to {}, not B = {b}", spec.weight_sum())));
    }
    for (&agent, &w) in spec.pledgers.iter().zip(&spec.weights) {
        let (holds, condition) = if r <= b {
            ((w - 1) * b.min(r - 1 + w) <= r * (b - 1), Condition::EarlyPledger)
        } else {
            (r - 1 + w <= 2 * b - 1, Condition::LatePledger)
        };
        if !holds {
            return Ok(EqVerdict::reject(condition, Some(agent)));
        }
    }
    let ratios = (1..=spec.n)
        .map(|agent| {
            let w = spec.weight_of(agent);
            RatioValue::Finite(match (w, r <= b) {
                (0, _) if r <= b + 1 => ExactRatio::one(),
                (0, _) => ExactRatio::of(r - 1, b),
                (_, true) => ExactRatio::one() + ExactRatio::of(w - 1, r),
                (_, false) => ExactRatio::of(r + w - 1, b),
            })
        })
        .collect();
    Ok(EqVerdict::accept(ratios))
}

/// Every spec for license cost `b`, `n` agents and purchase days in `days`
/// that passes [`check_rational_no_selfpred`], ordered by `(r, weights)`.
/// Pledgers are always the first agents.
pub fn enumerate_rational_eq(b: u64, n: usize, days: std::ops::RangeInclusive<u64>) -> Result<Vec<EquilibriumSpec>> {
    enumerate_rational_eq_bounded(b, n, days, DEFAULT_ENUMERATION_BOUND)
}

pub const DEFAULT_ENUMERATION_BOUND: u64 = 20;

pub fn enumerate_rational_eq_bounded(
    b: u64,
    n: usize,
    days: std::ops::RangeInclusive<u64>,
    max_b: u64,
) -> Result<Vec<EquilibriumSpec>> {
    if b > max_b {
        return Err(Error::EnumerationLimit(format!("B = {b} exceeds the enumeration bound {max_b}")));
    }
    if b < 2 || n == 0 {
        return Err(Error::InvalidParameter { name: "B/n", reason: "need B >= 2 and n >= 1".into() });
    }
    let compositions = compositions(b, n);
    let mut out = Vec::new();
    for r in days.filter(|&r| r >= 1 && r <= 2 * b - 1) {
        for weights in &compositions {
            let spec = EquilibriumSpec::new(b, n, r, weights.clone())?;
            if check_rational_no_selfpred(&spec)?.is_equilibrium {
                out.push(spec);
            }
        }
    }
    Ok(out)
}

/// Ordered compositions of `total` into at most `max_parts` positive parts,
/// in lexicographic order.
pub fn compositions(total: u64, max_parts: usize) -> Vec<Vec<u64>> {
    fn go(rest: u64, parts_left: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            go(rest - first, parts_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, max_parts, &mut Vec::new(), &mut out);
    out
}

/// The best worst-case ratio agent `i` can reach by any buy day in its
/// induced schedule, found by enumeration.
pub fn deviation_oracle(f: &PledgeProfile, i: usize) -> Result<ExactRatio> {
    let cfg = f.config();
    Ok(oracle_c_opt_bounded(&induced_prices(f, i), DEFAULT_ORACLE_FACTOR * cfg.b)?.c_opt)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgentCertificate {
    pub agent: usize,
    pub current: RatioValue,
    pub best: ExactRatio,
}

impl AgentCertificate {
    pub fn is_best_response(&self) -> bool {
        self.current == RatioValue::Finite(self.best)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub agents: Vec<AgentCertificate>,
}

impl OracleReport {
    pub fn certified(&self) -> bool {
        self.agents.iter().all(AgentCertificate::is_best_response)
    }
}

/// Compares every agent's current worst-case ratio with its best deviation.
pub fn oracle_certify(f: &PledgeProfile) -> Result<OracleReport> {
    let agents = (1..=f.config().n)
        .map(|i| Ok(AgentCertificate { agent: i, current: agent_worst_ratio(f, i), best: deviation_oracle(f, i)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { agents })
}

/// `M_*` a pledger of weight `w` faces when the license is bought on day `r`.
pub fn pledger_m_star(b: u64, r: u64, w: u64) -> u64 {
    b.min(r - 1 + w)
}

/// Verifies one run of an equilibrium with predictions: every pledger `k`
/// must keep its pledge `lambda_k`-robust. `m_star` overrides the per-pledger
/// default `min(B, r - 1 + w_k)`.
pub fn check_prediction_eq_run(spec: &EquilibriumSpec, lambdas: &[RatioValue], m_star: Option<u64>) -> Result<EqVerdict> {
    let (r, b) = (spec.r, spec.b);
    if lambdas.len() != spec.weights.len() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("{} robustness values for {} pledgers", lambdas.len(), spec.weights.len()),
        });
    }
    if lambdas.iter().any(|l| matches!(l, RatioValue::Finite(x) if *x < 1)) {
        return Err(Error::InvalidParameter { name: "lambda", reason: "robustness must be at least 1".into() });
    }
    if spec.weight_sum() < b {
        return Err(Error::InvalidSpec(format!("weights sum to {}, below B = {b}", spec.weight_sum())));
    }
    if m_star == Some(0) {
        return Err(Error::InvalidParameter { name: "m_star", reason: "must be at least 1".into() });
    }
    let mut ratios = vec![RatioValue::Finite(ExactRatio::one()); spec.n];
    for ((&agent, &w), lambda) in spec.pledgers.iter().zip(&spec.weights).zip(lambdas) {
        let m = m_star.unwrap_or_else(|| pledger_m_star(b, r, w));
        if let RatioValue::Finite(l) = *lambda {
            let slack = l + l.recip() - 2;
            let (holds, condition) = if r <= m {
                (ExactRatio::of(w - 1, r) <= l * ExactRatio::of(b - 1, m) + slack, Condition::EarlyRobust)
            } else {
                (ExactRatio::from(r + w - 1) <= l * (2 * b - 1) + slack * b, Condition::LateRobust)
            };
            if !holds {
                return Ok(EqVerdict::reject(condition, Some(agent)));
            }
        }
        ratios[agent - 1] = RatioValue::Finite(prediction_run_ratio(b, r, w, m));
    }
    Ok(EqVerdict::accept(ratios))
}

/// A pledger's competitive ratio on such a run.
pub fn prediction_run_ratio(b: u64, r: u64, w: u64, m: u64) -> ExactRatio {
    if r <= m {
        ExactRatio::one() + ExactRatio::of(b - 1, m).min(ExactRatio::of(w - 1, r))
    } else {
        ExactRatio::of((m + b - 1).min(r + w - 1), m)
    }
}

/// Latest purchase day `T_0` compatible with the most demanding finite
/// robustness requirement `lambda` on schedule `p`:
/// `M_* (1/lambda - 1) + M_* lambda c_OPT(p)`.
pub fn purchase_deadline_bound(lambdas: &[RatioValue], p: &PriceSchedule) -> Result<ExactRatio> {
    let lambda = lambdas.iter().filter_map(RatioValue::finite).min().ok_or(Error::UnboundedDeadline)?;
    if lambda < 1 {
        return Err(Error::InvalidParameter { name: "lambda", reason: "robustness must be at least 1".into() });
    }
    let m = ExactRatio::from(derive_costs(p).m_star);
    let c = solve(p).c_opt;
    Ok(m * (lambda.recip() - 1) + m * lambda * c)
}

/// Robustness and consistency parameters a predictionless equilibrium has
/// when read as an equilibrium with predictions: both equal each agent's
/// competitive ratio.
pub fn as_prediction_parameters(verdict: &EqVerdict) -> Result<Vec<(RatioValue, RatioValue)>> {
    if !verdict.is_equilibrium {
        return Err(Error::NotEquilibrium);
    }
    Ok(verdict.ratios.iter().map(|&c| (c, c)).collect())
}
