//! The lambda-tunable algorithm with a self-prediction of the active time.
//!
//! With `lambda = 1` the algorithm best-responds exactly as without
//! predictions; smaller `lambda` trusts the prediction more. [`Alg1`] holds
//! the precomputed decision for one schedule so many `(T, T^)` pairs can be
//! evaluated cheaply.
//!
//! [`beta_table`] evaluates the closed-form consistency table for single-day
//! coalition schedules and [`closed_form_days`] the matching closed forms for
//! `r2` and `r3`; both are cross-checked against the generic path in tests.
//! Both assume [`R3Rule::Latest`].

use std::fmt;

use serde::Serialize;

use crate::equilibria::pledger_m_star;
use crate::error::{Error, Result};
use crate::ratio::{ExactRatio, RatioValue};
use crate::schedule::{derive_costs, DerivedCosts, PriceSchedule};
use crate::varying_price::solve_derived;

/// How `r3` is picked among the days `t` with
/// `P_t / OPT_t <= lambda - 1 + c_OPT / lambda`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum R3Rule {
    /// The day minimizing `P_t / t`, latest on ties.
    #[default]
    MinCostPerDay,
    /// The latest such day. The consistency table and the closed forms
    /// assume this choice.
    Latest,
}

impl fmt::Display for R3Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            R3Rule::Latest => "latest",
            R3Rule::MinCostPerDay => "min-cost-per-day",
        })
    }
}

impl std::str::FromStr for R3Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latest" => Ok(R3Rule::Latest),
            "min-cost-per-day" => Ok(R3Rule::MinCostPerDay),
            _ => Err(Error::InvalidParameter { name: "r3-rule", reason: format!("`{s}` is not latest or min-cost-per-day") }),
        }
    }
}

/// The trust parameter, restricted to `(0, 1]`, and the `r3` rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlgParams {
    pub lambda: ExactRatio,
    pub r3_rule: R3Rule,
}

impl AlgParams {
    pub fn new(lambda: ExactRatio) -> Result<Self> {
        if !lambda.is_positive() || lambda > 1 {
            return Err(Error::InvalidParameter { name: "lambda", reason: format!("{lambda} is outside (0, 1]") });
        }
        Ok(Self { lambda, r3_rule: R3Rule::default() })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }

    pub fn with_r3_rule(self, r3_rule: R3Rule) -> Self {
        Self { r3_rule, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `T^ >= M_{T^}`: the prediction says the agent stays long, buy on `r2`.
    PredictionLarge,
    /// Otherwise buy on `r3`.
    PredictionSmall,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::PredictionLarge => "prediction-large",
            Branch::PredictionSmall => "prediction-small",
        })
    }
}

/// The days the algorithm derives from the schedule alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgDecision {
    pub lambda: ExactRatio,
    pub m_star: u64,
    pub i_star: u64,
    pub r0: u64,
    pub r1: u64,
    pub r2: u64,
    pub r3: u64,
    pub c_opt: ExactRatio,
    /// `lambda - 1 + c_OPT / lambda`, the robustness guarantee.
    pub bound: ExactRatio,
}

/// `r0`: the first day of minimum total cost, or the free day right after
/// `M_*` when there is one.
pub fn r0_of(d: &DerivedCosts) -> u64 {
    if d.first_free_day == Some(d.m_star + 1) {
        d.m_star + 1
    } else {
        d.i_star
    }
}

/// `M_{T^}`: the cheapest total cost among days `1..=T^`.
pub fn m_hat(d: &DerivedCosts, that: u64) -> u64 {
    d.prefix(that)
}

/// `sign(P_t - lambda OPT_t)` scaled by the denominator of `lambda`, so that
/// the minimization runs on integers.
fn scaled_gap(d: &DerivedCosts, lambda: ExactRatio, t: u64) -> i128 {
    d.p(t) as i128 * lambda.denom() - lambda.numer() * d.opt(t) as i128
}

fn within(d: &DerivedCosts, bound: ExactRatio, t: u64) -> bool {
    let opt = d.opt(t) as i128;
    let p = d.p(t) as i128;
    if opt == 0 {
        return p == 0;
    }
    p * bound.denom() <= bound.numer() * opt
}

pub fn compute_days(p: &PriceSchedule, params: AlgParams) -> AlgDecision {
    compute_days_derived(&derive_costs(p), params)
}

pub fn compute_days_derived(d: &DerivedCosts, params: AlgParams) -> AlgDecision {
    let lambda = params.lambda;
    let solved = solve_derived(d);
    let c_opt = solved.c_opt;
    let r1 = solved.first_day();
    let r0 = r0_of(d);
    let start = ((1 - lambda) * (r0 - 1) + lambda * r1).ceil().max(1) as u64;

    // Past the last explicit day P_t - lambda OPT_t grows with t.
    let end = d.last_day.max(start);
    let mut r2 = start;
    let mut best = scaled_gap(d, lambda, start);
    for t in start + 1..=end {
        let g = scaled_gap(d, lambda, t);
        if g < best {
            best = g;
            r2 = t;
        }
    }
    if d.p(r2) > d.p(r1) {
        r2 = r1;
    }

    let bound = lambda - 1 + c_opt / lambda;
    // Tail days satisfy the bound iff t - 1 + B <= bound * M_*.
    let tail_end = if d.first_free_day.is_some() {
        d.last_day
    } else {
        let reach = (bound * d.m_star).floor() + 1 - d.b as i128;
        d.last_day.max(reach.max(0) as u64)
    };
    let mut eligible = (1..=tail_end).rev().filter(|&t| within(d, bound, t));
    let latest = eligible.next().expect("r1 satisfies the bound");
    let r3 = match params.r3_rule {
        R3Rule::Latest => latest,
        // P_s / s < P_t / t, compared on integers; iteration runs backwards
        // so only strict improvements move to an earlier day.
        R3Rule::MinCostPerDay => eligible.fold(latest, |best, t| {
            if (d.p(t) as u128) * (best as u128) < (d.p(best) as u128) * (t as u128) {
                t
            } else {
                best
            }
        }),
    };

    AlgDecision { lambda, m_star: d.m_star, i_star: d.i_star, r0, r1, r2, r3, c_opt, bound }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alg1Run {
    pub branch: Branch,
    pub buy_day: Option<u64>,
    pub cost: u64,
    pub opt: u64,
    pub ratio: RatioValue,
}

/// The algorithm bound to one schedule and one `lambda`.
#[derive(Clone, Debug)]
pub struct Alg1 {
    costs: DerivedCosts,
    decision: AlgDecision,
}

impl Alg1 {
    pub fn new(p: &PriceSchedule, params: AlgParams) -> Self {
        let costs = derive_costs(p);
        let decision = compute_days_derived(&costs, params);
        Self { costs, decision }
    }

    pub fn decision(&self) -> &AlgDecision {
        &self.decision
    }

    pub fn costs(&self) -> &DerivedCosts {
        &self.costs
    }

    /// Plays active time `t` with prediction `that`.
    pub fn run(&self, t: u64, that: u64) -> Result<Alg1Run> {
        if t == 0 || that == 0 {
            return Err(Error::InvalidParameter { name: "T", reason: "active time and prediction must be >= 1".into() });
        }
        let (branch, day) = if that >= m_hat(&self.costs, that) {
            (Branch::PredictionLarge, self.decision.r2)
        } else {
            (Branch::PredictionSmall, self.decision.r3)
        };
        let buy_day = (day <= t).then_some(day);
        let cost = match buy_day {
            Some(day) => self.costs.p(day),
            None => t,
        };
        let opt = self.costs.opt(t);
        Ok(Alg1Run { branch, buy_day, cost, opt, ratio: RatioValue::of(cost, opt) })
    }

    /// Realized ratio as `(cost, opt)`, without building a ratio.
    pub fn cost_and_opt(&self, t: u64, that: u64) -> (u64, u64) {
        let day = if that >= m_hat(&self.costs, that) { self.decision.r2 } else { self.decision.r3 };
        let cost = if day <= t { self.costs.p(day) } else { t };
        (cost, self.costs.opt(t))
    }
}

pub fn run_alg1(p: &PriceSchedule, params: AlgParams, t: u64, that: u64) -> Result<Alg1Run> {
    Alg1::new(p, params).run(t, that)
}

/// `lambda - 1 + c_OPT(p) / lambda`.
pub fn prop2_bound(p: &PriceSchedule, params: AlgParams) -> ExactRatio {
    let c = solve_derived(&derive_costs(p)).c_opt;
    params.lambda - 1 + c / params.lambda
}

/// Consistency the generic decision guarantees from its own `r2` and `r3`:
/// `max(P_{r2} / M_*, P_{r3} / r3)` when `r3 <= M_*`, else `P_{r2} / M_*`.
pub fn decision_consistency_bound(alg: &Alg1) -> ExactRatio {
    let d = alg.costs();
    let dec = alg.decision();
    let m = d.m_star.max(1);
    let from_r2 = ExactRatio::of(d.p(dec.r2), m);
    if dec.r3 <= d.m_star {
        from_r2.max(ExactRatio::of(d.p(dec.r3), dec.r3))
    } else {
        from_r2
    }
}

/// A row of the consistency table. `R1`..`R8` are the printed rows in
/// order; `EarlyExpensive` covers `2 <= r <= B` with `r + w - 1 > B` and
/// `B + ceil(lambda r) - 1 >= r + w - 1`, which no printed row matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BetaRow {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    EarlyExpensive,
}

impl fmt::Display for BetaRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BetaRow::R1 => "r=1: 1",
            BetaRow::R2 => "r=1: w",
            BetaRow::R3 => "early: 1+max((ceil(lr)-1)/B, (w-1)/r)",
            BetaRow::R4 => "early: 1+(ceil(lr)-1)/B",
            BetaRow::R5 => "early: 1+(w-1)/r",
            BetaRow::R6 => "early: 1",
            BetaRow::R7 => "late: 1+(ceil(lr)-1)/B",
            BetaRow::R8 => "late: (r+w-1)/B",
            BetaRow::EarlyExpensive => "early, r+w-1>B: 1+(w-1)/r or (r+w-1)/B",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaResult {
    pub beta: ExactRatio,
    pub table_row: BetaRow,
    /// Every inequality the row selection looked at, with its truth value.
    pub conditions_evaluated: Vec<(&'static str, bool)>,
    /// Later rows whose conditions also held; the first match wins.
    pub also_matching: Vec<BetaRow>,
}

/// Whether a lone pledger of weight `w` buying on day `r` satisfies its
/// equilibrium inequality (the other pledgers make up `B - w`).
pub fn is_pledger_equilibrium(r: u64, w: u64, b: u64) -> bool {
    if b < 2 || r == 0 || w == 0 || w > b || r > 2 * b - 1 {
        return false;
    }
    if r <= b {
        (w - 1) * b.min(r - 1 + w) <= r * (b - 1)
    } else {
        r - 1 + w <= 2 * b - 1
    }
}

/// `M_*` of the schedule `p_r = w`, `p_j = B` otherwise.
pub fn coalition_m_star(r: u64, w: u64, b: u64) -> u64 {
    pledger_m_star(b, r, w)
}

/// Consistency of the algorithm on the schedule of a pledger of weight `w`
/// whose coalition buys on day `r`, from the closed-form table.
pub fn beta_table(r: u64, w: u64, b: u64, params: AlgParams) -> Result<BetaResult> {
    if !is_pledger_equilibrium(r, w, b) {
        return Err(Error::InvalidSpec(format!("(r = {r}, w = {w}) is not an equilibrium pledge for B = {b}")));
    }
    let lambda = params.lambda;
    let m = coalition_m_star(r, w, b);
    let rs = (lambda * r).ceil() as u64;
    let x = ExactRatio::of(w - 1, 1) / (lambda * r) + (lambda - 1) * (lambda - 1) / lambda;
    let one = ExactRatio::one();

    let mut conds: Vec<(&'static str, bool)> = Vec::new();
    let mut candidates: Vec<(BetaRow, ExactRatio)> = Vec::new();

    if r == 1 {
        let small = lambda <= ExactRatio::of(w * (w - 1), b - 1);
        conds.push(("w = 1", w == 1));
        conds.push(("lambda <= w(w-1)/(r(B-1))", small));
        if w == 1 || small {
            candidates.push((BetaRow::R1, one));
        }
        if w >= 2 && !small {
            candidates.push((BetaRow::R2, ExactRatio::from(w)));
        }
    } else if r <= m {
        let cheap_early = b + rs - 1 < r + w - 1;
        let x_small_b = x <= one - ExactRatio::of(1, b);
        let mx_small = x * m <= ExactRatio::from(b - 1);
        let fits = r + w - 1 <= b;
        conds.push(("B + ceil(lambda r) - 1 < r + w - 1", cheap_early));
        conds.push(("X <= 1 - 1/B", x_small_b));
        conds.push(("M_* X <= B - 1", mx_small));
        conds.push(("r + w - 1 <= B", fits));
        let rs_value = one + ExactRatio::of(rs - 1, b);
        let pledge_value = one + ExactRatio::of(w - 1, r);
        if x_small_b && cheap_early {
            candidates.push((BetaRow::R3, rs_value.max(pledge_value)));
        }
        if cheap_early && !x_small_b {
            candidates.push((BetaRow::R4, rs_value));
        }
        if mx_small && fits {
            candidates.push((BetaRow::R5, pledge_value));
        }
        if !mx_small && fits {
            candidates.push((BetaRow::R6, one));
        }
        if !fits && !cheap_early {
            let v = if x_small_b { pledge_value } else { ExactRatio::of(r + w - 1, b) };
            candidates.push((BetaRow::EarlyExpensive, v));
        }
    } else {
        let cheap_late = b + rs - 1 < r + w - 1;
        conds.push(("B + ceil(lambda r) - 1 < r + w - 1", cheap_late));
        if cheap_late {
            candidates.push((BetaRow::R7, one + ExactRatio::of(rs - 1, b)));
        } else {
            candidates.push((BetaRow::R8, ExactRatio::of(r + w - 1, b)));
        }
    }

    let (table_row, beta) = *candidates.first().expect("the rows cover every equilibrium");
    let also_matching = candidates.iter().skip(1).map(|&(row, _)| row).collect();
    Ok(BetaResult { beta, table_row, conditions_evaluated: conds, also_matching })
}

/// `M_* (w - 1) / (r (B - 1))`: below this `lambda` the consistency beats the
/// predictionless ratio `1 + (w - 1)/r`.
pub fn improvement_threshold(r: u64, w: u64, b: u64) -> Result<ExactRatio> {
    if !is_pledger_equilibrium(r, w, b) {
        return Err(Error::InvalidSpec(format!("(r = {r}, w = {w}) is not an equilibrium pledge for B = {b}")));
    }
    let m = coalition_m_star(r, w, b);
    Ok(ExactRatio::of(m * (w - 1), r * (b - 1)))
}

/// `r2` and `r3` on the coalition schedule from the closed forms, for
/// comparison with [`compute_days`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormDays {
    pub r2: u64,
    pub r3: u64,
}

pub fn closed_form_days(r: u64, w: u64, b: u64, params: AlgParams) -> Result<ClosedFormDays> {
    if !is_pledger_equilibrium(r, w, b) {
        return Err(Error::InvalidSpec(format!("(r = {r}, w = {w}) is not an equilibrium pledge for B = {b}")));
    }
    let lambda = params.lambda;
    let m = coalition_m_star(r, w, b);
    let shift = |v: i128| (v + 1 - b as i128).max(1) as u64;
    if r == 1 {
        if w == 1 {
            return Ok(ClosedFormDays { r2: 1, r3: 1 });
        }
        let wq = ExactRatio::from(w);
        let late = wq * (lambda * lambda - 2 * lambda + wq) >= lambda * (b - 1);
        let r3 = if late { shift((wq * (lambda - 1 + wq / lambda)).floor()) } else { 1 };
        return Ok(ClosedFormDays { r2: 1, r3 });
    }
    let rs = (lambda * r).ceil() as u64;
    let r2 = if b + rs - 1 < r - 1 + w { rs } else { r };
    let c = if r <= m { ExactRatio::one() + ExactRatio::of(w - 1, r) } else { ExactRatio::of(r + w - 1, b) };
    let bound = lambda - 1 + c / lambda;
    let r3 = if r <= m {
        let x = ExactRatio::of(w - 1, 1) / (lambda * r) + (lambda - 1) * (lambda - 1) / lambda;
        if x * m <= ExactRatio::from(b - 1) {
            r
        } else {
            shift((bound * m).floor())
        }
    } else {
        r.max(shift((bound * b).floor()))
    };
    Ok(ClosedFormDays { r2, r3 })
}

/// Worst realized ratio over `T` in `ts` when the prediction is exact.
pub fn empirical_consistency(r: u64, w: u64, b: u64, params: AlgParams, ts: std::ops::RangeInclusive<u64>) -> Result<RatioValue> {
    let alg = Alg1::new(&PriceSchedule::discounted(b, r, w)?, params);
    let mut worst = RatioValue::Finite(ExactRatio::one());
    for t in ts {
        worst = worst.max(alg.run(t, t)?.ratio);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> ExactRatio {
        ExactRatio::new(n, d).unwrap()
    }

    fn lam(s: &str) -> AlgParams {
        AlgParams::parse(s).unwrap()
    }

    #[test]
    fn r3_rules() {
        let p = PriceSchedule::discounted(100, 75, 19).unwrap();
        let l = lam("0.2");
        assert_eq!(compute_days(&p, l).r3, 75);
        assert_eq!(compute_days(&p, l.with_r3_rule(R3Rule::Latest)).r3, 403);
        let p = PriceSchedule::discounted(100, 75, 70).unwrap();
        assert_eq!(compute_days(&p, l.with_r3_rule(R3Rule::Latest)).r3, 781);
        assert_eq!("min-cost-per-day".parse::<R3Rule>().unwrap(), R3Rule::MinCostPerDay);
        assert!("earliest".parse::<R3Rule>().is_err());
    }

    #[test]
    fn lambda_range() {
        assert!(AlgParams::parse("0").is_err());
        assert!(AlgParams::parse("1.5").is_err());
        assert!(AlgParams::parse("-0.2").is_err());
        assert_eq!(lam("0.2").lambda, q(1, 5));
        assert_eq!(lam("1").lambda, ExactRatio::one());
    }

    #[test]
    fn days_on_constant_schedule() {
        let p = PriceSchedule::constant(100, 1).unwrap();
        let d = compute_days(&p, lam("1"));
        assert_eq!((d.r0, d.r1, d.r2, d.r3), (1, 100, 100, 100));
        assert_eq!(d.bound, q(199, 100));
    }

    #[test]
    fn days_on_discounted_schedules() {
        let p = PriceSchedule::discounted(100, 75, 70).unwrap();
        let d = compute_days(&p, lam("0.2"));
        assert_eq!((d.i_star, d.r0, d.r1, d.r2, d.r3), (1, 1, 75, 15, 781));
        assert_eq!(closed_form_days(75, 70, 100, lam("0.2")).unwrap(), ClosedFormDays { r2: 15, r3: 781 });

        let p = PriceSchedule::discounted(100, 75, 19).unwrap();
        let d = compute_days(&p, lam("1"));
        assert_eq!((d.i_star, d.r1, d.r2), (75, 75, 75));
    }

    #[test]
    fn runs_on_discounted_schedule() {
        let p = PriceSchedule::discounted(100, 75, 70).unwrap();
        let alg = Alg1::new(&p, lam("0.2"));
        let run = alg.run(200, 200).unwrap();
        assert_eq!((run.branch, run.buy_day, run.cost), (Branch::PredictionLarge, Some(15), 114));
        assert_eq!(run.ratio, RatioValue::Finite(q(114, 100)));

        let run = alg.run(10, 10).unwrap();
        assert_eq!((run.branch, run.buy_day, run.cost), (Branch::PredictionSmall, None, 10));
        assert_eq!(run.ratio, RatioValue::Finite(ExactRatio::one()));

        let run = alg.run(400, 10).unwrap();
        assert_eq!((run.buy_day, run.cost), (None, 400));
        assert_eq!(run.ratio, RatioValue::Finite(ExactRatio::from_integer(4)));
        assert!(RatioValue::Finite(q(44, 5)) >= run.ratio);
        assert_eq!(alg.cost_and_opt(400, 10), (400, 100));
        assert!(alg.run(0, 3).is_err());
        assert_eq!(run_alg1(&p, lam("0.2"), 200, 200).unwrap().cost, 114);
    }

    #[test]
    fn robustness_bound() {
        let p = PriceSchedule::discounted(100, 75, 70).unwrap();
        assert_eq!(prop2_bound(&p, lam("0.2")), q(44, 5));
        assert_eq!(prop2_bound(&p, lam("1")), q(48, 25));
        assert_eq!(prop2_bound(&PriceSchedule::constant(100, 1).unwrap(), lam("0.5")), q(87, 25));
    }

    #[test]
    fn table_rows() {
        let b = beta_table(75, 19, 100, lam("1")).unwrap();
        assert_eq!((b.beta, b.table_row), (q(31, 25), BetaRow::R5));
        let b = beta_table(75, 19, 100, lam("0.2")).unwrap();
        assert_eq!((b.beta, b.table_row), (ExactRatio::one(), BetaRow::R6));
        let b = beta_table(75, 70, 100, lam("0.2")).unwrap();
        assert_eq!((b.beta, b.table_row), (q(57, 50), BetaRow::R4));
        let b = beta_table(1, 1, 100, lam("0.3")).unwrap();
        assert_eq!((b.beta, b.table_row), (ExactRatio::one(), BetaRow::R1));
        let b = beta_table(150, 30, 100, lam("1")).unwrap();
        assert_eq!((b.beta, b.table_row), (q(179, 100), BetaRow::R8));
        let b = beta_table(75, 70, 100, lam("0.9")).unwrap();
        assert_eq!((b.beta, b.table_row), (q(144, 100), BetaRow::EarlyExpensive));
        assert!(beta_table(10, 50, 100, lam("1")).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(improvement_threshold(75, 70, 100).unwrap(), q(92, 99));
        assert_eq!(improvement_threshold(75, 19, 100).unwrap(), q(1674, 7425));
        assert_eq!(improvement_threshold(75, 1, 100).unwrap(), ExactRatio::zero());
    }

    #[test]
    fn perfect_prediction_sweeps() {
        let c = empirical_consistency(75, 70, 100, lam("0.2"), 1..=400).unwrap();
        assert!(c <= RatioValue::Finite(q(57, 50)));
        assert_eq!(c, RatioValue::Finite(q(114, 100)));
        // Day 75 has the smallest cost per day, so a short perfect prediction
        // still buys there; taking the latest eligible day instead rents.
        assert_eq!(empirical_consistency(75, 19, 100, lam("0.2"), 1..=400).unwrap(), RatioValue::Finite(q(31, 25)));
        let latest = lam("0.2").with_r3_rule(R3Rule::Latest);
        assert_eq!(empirical_consistency(75, 19, 100, latest, 1..=400).unwrap(), RatioValue::Finite(ExactRatio::one()));
        for l in ["0.1", "0.5", "1"] {
            assert_eq!(empirical_consistency(1, 1, 100, lam(l), 1..=400).unwrap(), RatioValue::Finite(ExactRatio::one()));
        }
    }

    #[test]
    fn free_day_schedule() {
        let p = PriceSchedule::new(4, vec![4, 4, 4, 0]).unwrap();
        let d = compute_days(&p, lam("0.5"));
        assert_eq!(d.r0, 4);
        assert_eq!(d.r1, 4);
        assert!(d.r2 <= 4 && d.r3 <= 4);
        let first_free = PriceSchedule::new(4, vec![0]).unwrap();
        let alg = Alg1::new(&first_free, lam("0.5"));
        assert_eq!(alg.run(3, 3).unwrap().ratio, RatioValue::Finite(ExactRatio::one()));
    }
}
