//! Optimal deterministic algorithms for ski rental with known varying prices.
//!
//! [`solve`] evaluates the closed-form characterization; [`oracle_c_opt`]
//! enumerates every buy day against every adversarial stopping time and is the
//! reference the closed form is tested against.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{ExactRatio, RatioValue};
use crate::schedule::{derive_costs, DerivedCosts, PriceSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    FreeDay,
    BargainDay,
    General,
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessCase::FreeDay => "free-day",
            WitnessCase::BargainDay => "bargain-day",
            WitnessCase::General => "general",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub c_opt: ExactRatio,
    /// Every buy day achieving `c_opt`. Never buying is not competitive, so
    /// it never appears.
    pub optimal_buy_days: BTreeSet<u64>,
    pub one_competitive: bool,
    pub witness_case: WitnessCase,
}

impl SolveResult {
    /// The canonical optimal strategy: the earliest optimal buy day.
    pub fn first_day(&self) -> u64 {
        *self.optimal_buy_days.iter().next().expect("some buy day is optimal")
    }
}

/// Worst-case ratio of buying on `day`, given precomputed costs.
///
/// The adversary's best stop is the buy day itself: before it the ratio of
/// pure renting only grows, after it the cost is frozen while the optimum
/// cannot shrink.
pub fn buy_day_ratio(d: &DerivedCosts, day: u64) -> RatioValue {
    RatioValue::of(d.p(day), d.opt(day))
}

pub fn solve(p: &PriceSchedule) -> SolveResult {
    solve_derived(&derive_costs(p))
}

pub fn solve_derived(d: &DerivedCosts) -> SolveResult {
    let m = d.m_star;
    let free_next = d.first_free_day == Some(m + 1);
    let bargain_here = m >= 1 && d.p(m) == m;
    if free_next || bargain_here {
        let mut days = BTreeSet::new();
        if bargain_here {
            days.insert(m);
        }
        if free_next {
            days.insert(m + 1);
        }
        return SolveResult {
            c_opt: ExactRatio::one(),
            optimal_buy_days: days,
            one_competitive: true,
            witness_case: if bargain_here { WitnessCase::BargainDay } else { WitnessCase::FreeDay },
        };
    }

    let tail = ExactRatio::of(d.q(m), m);
    let mut c = tail;
    for r in 1..=m {
        c = c.min(ExactRatio::of(d.p(r), r));
    }
    let mut days: BTreeSet<u64> = (1..=m).filter(|&r| ExactRatio::of(d.p(r), r) == c).collect();
    if tail == c {
        let q = d.q(m);
        days.extend((m..=d.last_day).filter(|&r| d.p(r) == q));
    }
    SolveResult { c_opt: c, optimal_buy_days: days, one_competitive: c == 1, witness_case: WitnessCase::General }
}

/// Worst ratio of the strategy "rent until `buy_day - 1`, then buy", found by
/// scanning every stopping time up to the point where cost and optimum are
/// both frozen. `None` means never buying, which is unbounded.
pub fn strategy_worst_ratio(p: &PriceSchedule, buy_day: Option<u64>) -> Result<RatioValue> {
    let Some(day) = buy_day else {
        return Ok(RatioValue::Infinite);
    };
    let d = derive_costs(p);
    if day == 0 || (p.free_day().is_some() && day > d.last_day) {
        return Err(Error::InvalidParameter {
            name: "buy_day",
            reason: format!("day {day} is not a purchasable day of this schedule"),
        });
    }
    Ok(scan_worst(&d, day))
}

fn scan_worst(d: &DerivedCosts, day: u64) -> RatioValue {
    let buy = d.p(day);
    (1..=d.last_day.max(day))
        .map(|t| RatioValue::of(if t < day { t } else { buy }, d.opt(t)))
        .max()
        .expect("nonempty scan")
}

pub const DEFAULT_ORACLE_FACTOR: u64 = 3;

/// Brute-force minimum of [`strategy_worst_ratio`] over never buying and
/// every buy day up to the last relevant day, with horizon at most `3B`.
pub fn oracle_c_opt(p: &PriceSchedule) -> Result<SolveResult> {
    oracle_c_opt_bounded(p, DEFAULT_ORACLE_FACTOR * p.b())
}

pub fn oracle_c_opt_bounded(p: &PriceSchedule, bound: u64) -> Result<SolveResult> {
    if p.horizon() > bound {
        return Err(Error::OracleBound { horizon: p.horizon(), bound });
    }
    let d = derive_costs(p);
    let worst: Vec<(u64, RatioValue)> = (1..=d.last_day).map(|day| (day, scan_worst(&d, day))).collect();
    let best = worst.iter().map(|&(_, w)| w).min().expect("at least one day");
    let best = match best {
        RatioValue::Finite(c) => c,
        RatioValue::Infinite => unreachable!("buying on day 1 is always finite"),
    };
    let days: BTreeSet<u64> =
        worst.iter().filter(|&&(_, w)| w == RatioValue::Finite(best)).map(|&(day, _)| day).collect();
    let witness_case = if best != 1 {
        WitnessCase::General
    } else if days.iter().any(|&day| d.p(day) == d.m_star && day == d.m_star) {
        WitnessCase::BargainDay
    } else {
        WitnessCase::FreeDay
    };
    Ok(SolveResult { c_opt: best, optimal_buy_days: days, one_competitive: best == 1, witness_case })
}
