//! Seeded Monte-Carlo harness: average realized ratio of [`Alg1`] on a
//! single-pledger schedule as the prediction noise grows.
//!
//! Every sample draws from its own ChaCha stream seeded by the master seed,
//! the sigma cell and the sample index, so serial and parallel runs agree
//! bit for bit. All lambda values in a sigma cell see the same `(T, T^)`
//! pairs.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::predictor::{is_pledger_equilibrium, Alg1, AlgParams};
use crate::ratio::ExactRatio;
use crate::schedule::PriceSchedule;

/// Environment variable naming the default directory for experiment CSVs.
pub const OUT_DIR_ENV: &str = "SKIRENTAL_OUT_DIR";

pub const CSV_HEADER: [&str; 8] = ["r", "w", "lambda", "sigma", "n_samples", "avg_ratio", "n_suboptimal", "seed"];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub b: u64,
    pub r: u64,
    pub w: u64,
    pub lambdas: Vec<AlgParams>,
    pub sigmas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// `B = 100`, 1000 samples per cell.
    pub fn new(r: u64, w: u64, lambdas: Vec<AlgParams>, sigmas: Vec<f64>, seed: u64) -> Self {
        Self { b: 100, r, w, lambdas, sigmas, samples: 1000, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_pledger_equilibrium(self.r, self.w, self.b) {
            return Err(Error::InvalidSpec(format!(
                "(r = {}, w = {}) is not an equilibrium pledge for B = {}",
                self.r, self.w, self.b
            )));
        }
        if self.lambdas.is_empty() || self.sigmas.is_empty() {
            return Err(Error::InvalidParameter { name: "grid", reason: "lambda and sigma grids must be nonempty".into() });
        }
        if let Some(s) = self.sigmas.iter().find(|s| !s.is_finite() || **s < 0.0) {
            return Err(Error::InvalidParameter { name: "sigma", reason: format!("{s} is not a finite nonnegative value") });
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter { name: "samples", reason: "must be >= 1".into() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub r: u64,
    pub w: u64,
    pub lambda: ExactRatio,
    pub sigma: f64,
    pub n_samples: usize,
    pub avg_ratio: f64,
    pub n_suboptimal: usize,
    pub seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one sample's stream.
pub fn sample_seed(master: u64, cell: u64, sample: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ sample)
}

/// Draws `T` uniform on `[1, 4B]` and `T^ = max(1, round(T + eps))` with
/// `eps ~ N(0, sigma)`.
pub fn sample_instance<R: Rng + ?Sized>(rng: &mut R, b: u64, sigma: f64) -> (u64, u64) {
    let t = rng.gen_range(1..=4 * b);
    let eps = if sigma > 0.0 { Normal::new(0.0, sigma).expect("finite sigma").sample(rng) } else { 0.0 };
    let that = (t as f64 + eps).round().max(1.0) as u64;
    (t, that)
}

fn cell_pairs(cfg: &ExperimentConfig, cell: usize, sigma: f64) -> Vec<(u64, u64)> {
    (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, cell as u64, k as u64));
            sample_instance(&mut rng, cfg.b, sigma)
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let schedule = PriceSchedule::discounted(cfg.b, cfg.r, cfg.w)?;

    // Cell indices follow the caller's sigma order so that reordering the
    // output never changes which stream a sigma sees.
    let pairs: Vec<Vec<(u64, u64)>> =
        cfg.sigmas.iter().enumerate().map(|(cell, &sigma)| cell_pairs(cfg, cell, sigma)).collect();

    let mut lambdas = cfg.lambdas.clone();
    lambdas.sort();
    lambdas.dedup();
    let mut sigma_order: Vec<usize> = (0..cfg.sigmas.len()).collect();
    sigma_order.sort_by(|&a, &b| cfg.sigmas[a].total_cmp(&cfg.sigmas[b]));

    let mut rows = Vec::with_capacity(lambdas.len() * sigma_order.len());
    for params in lambdas {
        let alg = Alg1::new(&schedule, params);
        let bound = alg.decision().bound;
        for &cell in &sigma_order {
            let outcomes: Vec<(u64, u64)> = pairs[cell]
                .par_iter()
                .map(|&(t, that)| {
                    let (cost, opt) = alg.cost_and_opt(t, that);
                    if cost as i128 * bound.denom() > bound.numer() * opt as i128 {
                        return Err(Error::RobustnessViolated {
                            ratio: format!("{cost}/{opt}"),
                            bound: bound.to_string(),
                            active: t,
                            predicted: that,
                        });
                    }
                    Ok((cost, opt))
                })
                .collect::<Result<_>>()?;
            let mut sum = 0.0;
            let mut suboptimal = 0;
            for &(cost, opt) in &outcomes {
                sum += cost as f64 / opt as f64;
                if cost > opt {
                    suboptimal += 1;
                }
            }
            rows.push(ExperimentRow {
                r: cfg.r,
                w: cfg.w,
                lambda: params.lambda,
                sigma: cfg.sigmas[cell],
                n_samples: cfg.samples,
                avg_ratio: sum / cfg.samples as f64,
                n_suboptimal: suboptimal,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}

pub fn csv_record(row: &ExperimentRow) -> [String; 8] {
    [
        row.r.to_string(),
        row.w.to_string(),
        row.lambda.to_f64().to_string(),
        row.sigma.to_string(),
        row.n_samples.to_string(),
        format!("{:.6}", row.avg_ratio),
        row.n_suboptimal.to_string(),
        row.seed.to_string(),
    ]
}

pub fn write_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter { name: "rows", reason: "nothing to write".into() });
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut out = csv::Writer::from_path(path).map_err(csv_err)?;
    out.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        out.write_record(csv_record(row)).map_err(csv_err)?;
    }
    out.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// `$SKIRENTAL_OUT_DIR/eq_<r>_<w>.csv`, or under `runs/` when unset.
pub fn default_output_path(r: u64, w: u64) -> PathBuf {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"));
    dir.join(format!("eq_{r}_{w}.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambdas(v: &[&str]) -> Vec<AlgParams> {
        v.iter().map(|s| AlgParams::parse(s).unwrap()).collect()
    }

    #[test]
    fn zero_noise_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (t, that) = sample_instance(&mut rng, 100, 0.0);
            assert_eq!(t, that);
            assert!((1..=400).contains(&t));
        }
    }

    #[test]
    fn noise_is_centered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let t = rng.gen_range(1..=400u64);
            let eps: f64 = Normal::new(0.0, 250.0).unwrap().sample(&mut rng);
            sum += (t as f64 + eps).round() - t as f64;
        }
        assert!((sum / n as f64).abs() <= 3.0);
    }

    #[test]
    fn rows_are_ordered_and_reproducible() {
        let mut cfg = ExperimentConfig::new(75, 70, lambdas(&["1", "0.2"]), vec![50.0, 0.0, 25.0], 42);
        cfg.samples = 200;
        let rows = run_experiment(&cfg).unwrap();
        let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.lambda.to_f64(), r.sigma)).collect();
        assert_eq!(keys, vec![(0.2, 0.0), (0.2, 25.0), (0.2, 50.0), (1.0, 0.0), (1.0, 25.0), (1.0, 50.0)]);
        assert_eq!(rows, run_experiment(&cfg).unwrap());
        for row in &rows {
            assert!(row.avg_ratio >= 1.0 && row.n_suboptimal <= row.n_samples);
        }
    }

    #[test]
    fn lambda_values_share_samples() {
        let mut a = ExperimentConfig::new(75, 19, lambdas(&["0.2"]), vec![100.0], 3);
        a.samples = 300;
        let mut both = a.clone();
        both.lambdas = lambdas(&["0.2", "1"]);
        assert_eq!(run_experiment(&a).unwrap()[0], run_experiment(&both).unwrap()[0]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_experiment(&ExperimentConfig::new(10, 50, lambdas(&["1"]), vec![0.0], 1)).is_err());
        assert!(run_experiment(&ExperimentConfig::new(75, 19, lambdas(&["1"]), vec![-1.0], 1)).is_err());
        assert!(run_experiment(&ExperimentConfig::new(75, 19, vec![], vec![0.0], 1)).is_err());
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.csv");
        let mut cfg = ExperimentConfig::new(75, 70, lambdas(&["0.2"]), vec![0.0], 42);
        cfg.samples = 50;
        write_csv(&run_experiment(&cfg).unwrap(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "r,w,lambda,sigma,n_samples,avg_ratio,n_suboptimal,seed");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("75,70,0.2,0,50,"));
        assert_eq!(lines[1].split(',').nth(5).unwrap().split('.').nth(1).unwrap().len(), 6);
        assert!(write_csv(&[], &path).is_err());
    }
}
