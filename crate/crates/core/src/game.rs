//! The multiagent game: agents pledge towards a group license of cost `B`,
//! the license is bought on the first day the active agents' pledges reach
//! `B`, and each agent's outcome is judged against its own offline optimum.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::RatioValue;
use crate::schedule::{derive_costs, PriceSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GameConfig {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "H")]
    pub h: u64,
}

impl GameConfig {
    pub fn new(n: usize, b: u64, h: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProfile("at least one agent is required".into()));
        }
        if b < 2 {
            return Err(Error::InvalidProfile(format!("license cost B = {b} must be at least 2")));
        }
        if h == 0 {
            return Err(Error::InvalidProfile("horizon must be at least 1".into()));
        }
        Ok(Self { n, b, h })
    }
}

/// Per-agent pledge tables over days `1..=H`; agents and days are 1-based in
/// every accessor, and pledges outside the horizon are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PledgeProfile {
    cfg: GameConfig,
    pledges: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    n: usize,
    #[serde(rename = "B")]
    b: u64,
    #[serde(rename = "H")]
    h: u64,
    #[serde(default)]
    pledges: BTreeMap<String, Vec<(u64, u64)>>,
}

impl PledgeProfile {
    /// The all-zero profile: nobody ever pledges.
    pub fn empty(cfg: GameConfig) -> Self {
        Self { cfg, pledges: vec![vec![0; cfg.h as usize]; cfg.n] }
    }

    /// Builds a profile from `(agent, day, amount)` triples.
    pub fn from_triples(cfg: GameConfig, triples: &[(usize, u64, u64)]) -> Result<Self> {
        let mut profile = Self::empty(cfg);
        for &(agent, day, amount) in triples {
            profile.set(agent, day, amount)?;
        }
        Ok(profile)
    }

    pub fn set(&mut self, agent: usize, day: u64, amount: u64) -> Result<()> {
        let cfg = self.cfg;
        if agent == 0 || agent > cfg.n {
            return Err(Error::InvalidProfile(format!("agent {agent} outside 1..={}", cfg.n)));
        }
        if day == 0 || day > cfg.h {
            return Err(Error::InvalidProfile(format!("day {day} outside 1..={}", cfg.h)));
        }
        if amount > cfg.b {
            return Err(Error::InvalidProfile(format!(
                "pledge {amount} of agent {agent} on day {day} exceeds B = {}",
                cfg.b
            )));
        }
        self.pledges[agent - 1][day as usize - 1] = amount;
        Ok(())
    }

    pub fn config(&self) -> GameConfig {
        self.cfg
    }

    /// `f_agent(day)`.
    pub fn pledge(&self, agent: usize, day: u64) -> u64 {
        if day == 0 || day > self.cfg.h {
            return 0;
        }
        self.pledges[agent - 1][day as usize - 1]
    }

    /// Sum of everyone's pledges on `day`.
    pub fn total(&self, day: u64) -> u64 {
        (1..=self.cfg.n).map(|k| self.pledge(k, day)).sum()
    }

    /// Sum of the pledges of everyone except `agent` on `day`.
    pub fn others(&self, agent: usize, day: u64) -> u64 {
        self.total(day) - self.pledge(agent, day)
    }

    /// First day on which the pledges of all agents reach `B`, assuming
    /// everyone is still active.
    pub fn purchase_day(&self) -> Option<u64> {
        (1..=self.cfg.h).find(|&d| self.total(d) >= self.cfg.b)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let repr: ProfileRepr = serde_json::from_str(s).map_err(|e| Error::InvalidProfile(e.to_string()))?;
        let cfg = GameConfig::new(repr.n, repr.b, repr.h)?;
        let mut profile = Self::empty(cfg);
        for (key, entries) in &repr.pledges {
            let agent: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::InvalidProfile(format!("agent key `{key}` is not a number")))?;
            for &(day, amount) in entries {
                profile.set(agent, day, amount)?;
            }
        }
        Ok(profile)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut pledges = BTreeMap::new();
        for agent in 1..=self.cfg.n {
            let entries: Vec<(u64, u64)> = (1..=self.cfg.h)
                .filter(|&d| self.pledge(agent, d) > 0)
                .map(|d| (d, self.pledge(agent, d)))
                .collect();
            if !entries.is_empty() {
                pledges.insert(agent.to_string(), entries);
            }
        }
        let repr = ProfileRepr { n: self.cfg.n, b: self.cfg.b, h: self.cfg.h, pledges };
        serde_json::to_value(repr).expect("profile serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunOutcome {
    pub purchase_day: Option<u64>,
    pub costs: Vec<u64>,
    pub opts: Vec<u64>,
    pub ratios: Vec<RatioValue>,
}

/// Plays the profile with agent `i` active on days `1..=active[i-1]`.
pub fn run_game(f: &PledgeProfile, active: &[u64]) -> Result<RunOutcome> {
    let cfg = f.config();
    if active.len() != cfg.n {
        return Err(Error::InvalidParameter {
            name: "T",
            reason: format!("{} active times for {} agents", active.len(), cfg.n),
        });
    }
    if let Some(i) = active.iter().position(|&t| t == 0) {
        return Err(Error::InvalidParameter { name: "T", reason: format!("agent {} has active time 0", i + 1) });
    }
    let active_sum = |day: u64, skip: Option<usize>| -> u64 {
        (1..=cfg.n)
            .filter(|&k| Some(k) != skip && active[k - 1] >= day)
            .map(|k| f.pledge(k, day))
            .sum()
    };
    let purchase_day = (1..=cfg.h).find(|&d| active_sum(d, None) >= cfg.b);
    let mut costs = Vec::with_capacity(cfg.n);
    let mut opts = Vec::with_capacity(cfg.n);
    let mut ratios = Vec::with_capacity(cfg.n);
    for i in 1..=cfg.n {
        let t = active[i - 1];
        let cost = match purchase_day {
            Some(r) if t >= r => r - 1 + f.pledge(i, r),
            _ => t,
        };
        let prices = (1..=cfg.h).map(|d| cfg.b.saturating_sub(active_sum(d, Some(i)))).collect();
        let induced = PriceSchedule::new(cfg.b, prices)?;
        let opt = derive_costs(&induced).opt(t);
        costs.push(cost);
        opts.push(opt);
        ratios.push(RatioValue::of(cost, opt));
    }
    Ok(RunOutcome { purchase_day, costs, opts, ratios })
}

/// The single-agent schedule agent `i` faces when every other agent stays
/// active: `p_j = max(B - sum_{k != i} f_k(j), 0)`.
pub fn induced_prices(f: &PledgeProfile, i: usize) -> PriceSchedule {
    let cfg = f.config();
    let prices = (1..=cfg.h).map(|d| cfg.b.saturating_sub(f.others(i, d))).collect();
    PriceSchedule::new(cfg.b, prices).expect("induced prices are valid")
}

/// `Z_i = min(k - 1 + max(B - sum_{j != i} f_j(k), 0) : 1 <= k <= B)`.
pub fn z_value(f: &PledgeProfile, i: usize) -> u64 {
    let b = f.config().b;
    (1..=b).map(|k| k - 1 + b.saturating_sub(f.others(i, k))).min().expect("B >= 1")
}

/// `Z_i` next to the minimum total cost of the induced schedule, which ranges
/// over all days rather than the first `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZCheck {
    pub z: u64,
    pub m_star: u64,
}

impl ZCheck {
    pub fn agrees(&self) -> bool {
        self.z == self.m_star
    }
}

pub fn z_check(f: &PledgeProfile, i: usize) -> ZCheck {
    ZCheck { z: z_value(f, i), m_star: derive_costs(&induced_prices(f, i)).m_star }
}

/// Worst ratio of agent `i`'s fixed pledge table over all of its own active
/// times, with every other agent active throughout. Agent `i` effectively
/// buys on the purchase day `r` at price `f_i(r)` in its induced schedule.
pub fn agent_worst_ratio(f: &PledgeProfile, i: usize) -> RatioValue {
    let Some(r) = f.purchase_day() else {
        return RatioValue::Infinite;
    };
    let d = derive_costs(&induced_prices(f, i));
    let paid = r - 1 + f.pledge(i, r);
    (1..=d.last_day.max(r))
        .map(|t| RatioValue::of(if t < r { t } else { paid }, d.opt(t)))
        .max()
        .expect("nonempty scan")
}
