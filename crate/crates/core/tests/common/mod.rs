#![allow(dead_code)]

use skirental::game::{GameConfig, PledgeProfile};

/// Every profile with all pledges on one day `r <= 2B`, each with one extra
/// pledge added on another day, over a horizon of `2B` days.
pub fn one_extra_pledge_family(b: u64, n: usize) -> Vec<PledgeProfile> {
    let h = 2 * b;
    let cfg = GameConfig::new(n, b, h).unwrap();
    let mut out = Vec::new();
    for r in 1..=h {
        for code in 0..(b + 1).pow(n as u32) {
            let mut c = code;
            let amounts: Vec<u64> = (0..n)
                .map(|_| {
                    let v = c % (b + 1);
                    c /= b + 1;
                    v
                })
                .collect();
            let triples: Vec<(usize, u64, u64)> =
                amounts.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, &a)| (i + 1, r, a)).collect();
            let base = PledgeProfile::from_triples(cfg, &triples).unwrap();
            for agent in 1..=n {
                for day in (1..=h).filter(|&d| d != r) {
                    for amount in 1..=b {
                        let mut f = base.clone();
                        f.set(agent, day, amount).unwrap();
                        out.push(f);
                    }
                }
            }
            out.push(base);
        }
    }
    out
}

/// Whether more than one day collects at least `B` in pledges.
pub fn has_second_full_day(f: &PledgeProfile) -> bool {
    (1..=f.config().h).filter(|&d| f.total(d) >= f.config().b).count() > 1
}
