//! Varying-price schedules, their derived cost sequences and the offline optimum.
//!
//! Day `d` costs `p_d` to buy; renting costs 1 per day. Explicit prices cover
//! days `1..=H`; every later day costs `B`. A zero price is a free day and ends
//! the schedule: nothing after it is ever relevant because buying on the free
//! day dominates any later action.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{ratio, ExactRatio};

/// A per-day license price sequence with group license cost `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriceSchedule {
    b: u64,
    horizon: u64,
    prices: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    #[serde(rename = "B")]
    b: u64,
    #[serde(rename = "H")]
    h: u64,
    #[serde(default)]
    prices: Vec<(u64, u64)>,
}

impl PriceSchedule {
    /// Dense constructor: `prices[d - 1]` is the price of day `d`, and the
    /// horizon is the number of entries.
    pub fn new(b: u64, prices: Vec<u64>) -> Result<Self> {
        let horizon = prices.len() as u64;
        Self::with_horizon(b, horizon, prices)
    }

    /// Dense constructor with an explicit horizon; days in `prices.len()+1..=h`
    /// cost `B`.
    pub fn with_horizon(b: u64, horizon: u64, mut prices: Vec<u64>) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidSchedule(format!("license cost B = {b} must be at least 2")));
        }
        if horizon == 0 {
            return Err(Error::InvalidSchedule("horizon must be at least 1".into()));
        }
        if prices.len() as u64 > horizon {
            return Err(Error::InvalidSchedule(format!(
                "{} prices given for horizon {horizon}",
                prices.len()
            )));
        }
        if let Some((i, &p)) = prices.iter().enumerate().find(|(_, &p)| p > b) {
            return Err(Error::InvalidSchedule(format!("price {p} on day {} exceeds B = {b}", i + 1)));
        }
        prices.resize(horizon as usize, b);
        let horizon = match prices.iter().position(|&p| p == 0) {
            Some(i) => {
                prices.truncate(i + 1);
                i as u64 + 1
            }
            None => horizon,
        };
        Ok(Self { b, horizon, prices })
    }

    /// Sparse constructor from `(day, price)` pairs; unlisted days cost `B`.
    pub fn from_entries(b: u64, horizon: u64, entries: &[(u64, u64)]) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidSchedule("horizon must be at least 1".into()));
        }
        let mut prices = vec![b; horizon as usize];
        for &(day, price) in entries {
            if day == 0 || day > horizon {
                return Err(Error::InvalidSchedule(format!("day {day} outside 1..={horizon}")));
            }
            prices[day as usize - 1] = price;
        }
        Self::with_horizon(b, horizon, prices)
    }

    /// Every day costs `B`.
    pub fn constant(b: u64, horizon: u64) -> Result<Self> {
        Self::with_horizon(b, horizon, Vec::new())
    }

    /// The schedule one pledger faces in a single-purchase-day equilibrium:
    /// `p_r = w`, every other day `B`.
    pub fn discounted(b: u64, r: u64, w: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSchedule("discount day must be at least 1".into()));
        }
        Self::from_entries(b, r, &[(r, w)])
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// The explicit prices for days `1..=H`.
    pub fn prices(&self) -> &[u64] {
        &self.prices
    }

    pub fn free_day(&self) -> Option<u64> {
        match self.prices.last() {
            Some(0) => Some(self.horizon),
            _ => None,
        }
    }

    /// Last day worth considering for a purchase or an adversarial stop:
    /// the free day if there is one, otherwise `H + B`. Later tail days cost
    /// strictly more than day 1 and never matter.
    pub fn last_day(&self) -> u64 {
        self.free_day().unwrap_or(self.horizon + self.b)
    }

    /// Price on `day`, or `None` past a free day.
    pub fn price(&self, day: u64) -> Option<u64> {
        if day == 0 {
            return None;
        }
        match self.prices.get(day as usize - 1) {
            Some(&p) => Some(p),
            None if self.free_day().is_some() => None,
            None => Some(self.b),
        }
    }

    /// `P_d = d - 1 + p_d`.
    pub fn total_cost(&self, day: u64) -> Option<u64> {
        self.price(day).map(|p| day - 1 + p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let repr: ScheduleRepr =
            serde_json::from_str(s).map_err(|e| Error::InvalidSchedule(e.to_string()))?;
        Self::from_entries(repr.b, repr.h, &repr.prices)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    /// JSON form listing only the days whose price differs from `B`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let prices = self
            .prices
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != self.b)
            .map(|(i, &p)| (i as u64 + 1, p))
            .collect();
        serde_json::to_value(ScheduleRepr { b: self.b, h: self.horizon, prices })
            .expect("schedule serializes")
    }
}

/// `P`, its minimum, prefix and suffix minima and the special days, for days
/// `1..=last_day`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCosts {
    pub total_cost: Vec<u64>,
    pub prefix_min: Vec<u64>,
    pub suffix_min: Vec<u64>,
    pub m_star: u64,
    pub i_star: u64,
    pub first_free_day: Option<u64>,
    pub first_bargain_day: Option<u64>,
    pub last_day: u64,
    pub b: u64,
}

impl DerivedCosts {
    /// `P_d`; tail days past `last_day` follow `d - 1 + B` unless the
    /// schedule ended on a free day.
    pub fn p(&self, day: u64) -> u64 {
        assert!(day >= 1, "days are 1-based");
        match self.total_cost.get(day as usize - 1) {
            Some(&v) => v,
            None => {
                assert!(self.first_free_day.is_none(), "day {day} is past the free day");
                day - 1 + self.b
            }
        }
    }

    /// `Q_t = min(P_i : i >= t)`.
    pub fn q(&self, t: u64) -> u64 {
        assert!(t >= 1, "days are 1-based");
        match self.suffix_min.get(t as usize - 1) {
            Some(&v) => v,
            None => self.p(t),
        }
    }

    /// `min(P_i : i <= t)`.
    pub fn prefix(&self, t: u64) -> u64 {
        assert!(t >= 1, "days are 1-based");
        let i = (t.min(self.last_day) - 1) as usize;
        self.prefix_min[i]
    }

    /// Offline optimum for an agent active `t` days: rent throughout, or buy
    /// once on the cheapest day not after `t`.
    pub fn opt(&self, t: u64) -> u64 {
        t.min(self.prefix(t))
    }
}

pub fn derive_costs(p: &PriceSchedule) -> DerivedCosts {
    let last = p.last_day();
    let total_cost: Vec<u64> = (1..=last).map(|d| p.total_cost(d).expect("day in range")).collect();
    let mut prefix_min = total_cost.clone();
    for i in 1..prefix_min.len() {
        prefix_min[i] = prefix_min[i].min(prefix_min[i - 1]);
    }
    let mut suffix_min = total_cost.clone();
    for i in (0..suffix_min.len().saturating_sub(1)).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
    }
    let m_star = prefix_min[prefix_min.len() - 1];
    let i_star = total_cost.iter().position(|&v| v == m_star).expect("minimum attained") as u64 + 1;
    let first_day_with = |price: u64| {
        p.prices().iter().position(|&x| x == price).map(|i| i as u64 + 1)
    };
    DerivedCosts {
        first_free_day: first_day_with(0),
        first_bargain_day: first_day_with(1),
        total_cost,
        prefix_min,
        suffix_min,
        m_star,
        i_star,
        last_day: last,
        b: p.b(),
    }
}

pub fn opt_offline(p: &PriceSchedule, t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::InvalidParameter { name: "T", reason: "active time must be at least 1".into() });
    }
    Ok(derive_costs(p).opt(t))
}

/// Competitive ratio of a realized cost against the offline optimum of `p`
/// at active time `t`.
pub fn realized_ratio(p: &PriceSchedule, cost: u64, t: u64) -> Result<ExactRatio> {
    ratio(cost, opt_offline(p, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_opt(p: &PriceSchedule, t: u64) -> u64 {
        let mut best = t;
        for d in 1..=t {
            match p.total_cost(d) {
                Some(v) => best = best.min(v),
                None => break,
            }
        }
        best
    }

    #[test]
    fn constant_schedule() {
        let p = PriceSchedule::constant(5, 10).unwrap();
        let d = derive_costs(&p);
        assert_eq!(d.p(1), 5);
        assert_eq!((d.m_star, d.i_star), (5, 1));
        assert_eq!((d.first_free_day, d.first_bargain_day), (None, None));
    }

    #[test]
    fn short_schedule_with_bargain() {
        let p = PriceSchedule::new(3, vec![3, 1, 2]).unwrap();
        let d = derive_costs(&p);
        assert_eq!(&d.total_cost[..3], &[3, 2, 4]);
        assert_eq!((d.m_star, d.i_star), (2, 2));
        assert_eq!(d.first_bargain_day, Some(2));
        assert_eq!(d.first_free_day, None);
    }

    #[test]
    fn discounted_schedule() {
        let p = PriceSchedule::discounted(100, 75, 70).unwrap();
        let d = derive_costs(&p);
        assert_eq!(d.p(75), 144);
        assert_eq!(d.p(1), 100);
        assert_eq!((d.m_star, d.i_star), (100, 1));
        assert_eq!(d.p(500), 599);
    }

    #[test]
    fn offline_optimum_examples() {
        let c = PriceSchedule::constant(100, 1).unwrap();
        assert_eq!(opt_offline(&c, 30).unwrap(), 30);
        assert_eq!(opt_offline(&c, 150).unwrap(), 100);
        let s = PriceSchedule::discounted(100, 75, 70).unwrap();
        assert_eq!(opt_offline(&s, 200).unwrap(), 100);
        assert!(opt_offline(&s, 0).is_err());
        assert_eq!(realized_ratio(&s, 124, 75).unwrap(), ExactRatio::new(124, 75).unwrap());
    }

    #[test]
    fn free_day_truncates() {
        let p = PriceSchedule::new(4, vec![4, 3, 0, 2, 1]).unwrap();
        assert_eq!(p.horizon(), 3);
        assert_eq!(p.free_day(), Some(3));
        assert_eq!(p.price(4), None);
        let d = derive_costs(&p);
        assert_eq!(d.total_cost, vec![4, 4, 2]);
        assert_eq!((d.m_star, d.i_star), (2, 3));
        assert_eq!(d.first_free_day, Some(3));
        assert_eq!(d.opt(100), 2);
    }

    #[test]
    fn free_first_day_has_zero_optimum() {
        let p = PriceSchedule::new(3, vec![0]).unwrap();
        let d = derive_costs(&p);
        assert_eq!(d.m_star, 0);
        assert_eq!(d.opt(5), 0);
        assert!(realized_ratio(&p, 0, 5).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PriceSchedule::new(3, vec![]).is_err());
        assert!(PriceSchedule::new(1, vec![1]).is_err());
        assert!(PriceSchedule::new(3, vec![4]).is_err());
        assert!(PriceSchedule::from_entries(3, 2, &[(3, 1)]).is_err());
        assert!(PriceSchedule::from_entries(3, 2, &[(0, 1)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = PriceSchedule::from_json_str(r#"{"B": 100, "H": 75, "prices": [[75, 70]]}"#).unwrap();
        assert_eq!(p, PriceSchedule::discounted(100, 75, 70).unwrap());
        let back = PriceSchedule::from_json_str(&p.to_json_value().to_string()).unwrap();
        assert_eq!(back, p);
        assert!(PriceSchedule::from_json_str(r#"{"B": 100}"#).is_err());
    }

    #[test]
    fn suffix_min_recurrence() {
        let p = PriceSchedule::new(6, vec![6, 2, 5, 1, 6, 3]).unwrap();
        let d = derive_costs(&p);
        for t in 1..d.last_day {
            assert_eq!(d.q(t), d.p(t).min(d.q(t + 1)));
        }
    }

    #[test]
    fn opt_matches_brute_force_exhaustively() {
        // all schedules over {0..B} for small B and H
        for b in 2..=4u64 {
            for h in 1..=4u32 {
                let count = (b + 1).pow(h);
                for code in 0..count {
                    let mut c = code;
                    let prices: Vec<u64> = (0..h)
                        .map(|_| {
                            let v = c % (b + 1);
                            c /= b + 1;
                            v
                        })
                        .collect();
                    let p = PriceSchedule::new(b, prices).unwrap();
                    let d = derive_costs(&p);
                    for t in 1..=(p.horizon() + 2 * b) {
                        let o = d.opt(t);
                        assert_eq!(o, brute_opt(&p, t), "{:?} T={t}", p.prices());
                        assert!(o <= t);
                    }
                }
            }
        }
    }
}
