//! Command-line front end. [`dispatch`] parses arguments, runs one
//! subcommand and returns the process exit code.
//!
//! Exit codes: 0 success or equilibrium, 1 verification false, 2 a closed
//! form disagreed with its oracle, 3 usage or input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::equilibria::{
    check_predictionless, check_rational_no_selfpred, enumerate_rational_eq, oracle_certify, EqVerdict,
    EquilibriumSpec, OracleReport,
};
use crate::error::{Error, Result};
use crate::experiments::{default_output_path, run_experiment, write_csv, ExperimentConfig};
use crate::game::{run_game, PledgeProfile};
use crate::predictor::{beta_table, Alg1, AlgParams, R3Rule};
use crate::ratio::{ExactRatio, RatioValue};
use crate::schedule::PriceSchedule;
use crate::varying_price::{oracle_c_opt, solve, SolveResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ORACLE_MISMATCH: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "skirental", version, about = "Exact multiagent ski rental with varying prices and predictions")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal competitive ratio and buy days of a price schedule.
    Solve {
        #[arg(long)]
        schedule: PathBuf,
        /// Cross-check against brute-force enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Verify a pledge profile or a single-day coalition.
    CheckEq(CheckEqArgs),
    /// List every single-day coalition equilibrium.
    EnumerateEq {
        #[arg(long = "B")]
        b: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r_min: u64,
        /// Defaults to 2B - 1.
        #[arg(long)]
        r_max: Option<u64>,
    },
    /// Closed-form consistency of the prediction algorithm.
    BetaTable {
        #[arg(long = "B")]
        b: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        lambda: String,
    },
    /// Decision trace of the prediction algorithm on one input.
    Alg1 {
        #[command(flatten)]
        schedule: ScheduleSource,
        #[arg(long)]
        lambda: String,
        /// `min-cost-per-day` or `latest`.
        #[arg(long, default_value = "min-cost-per-day")]
        r3_rule: String,
        #[arg(long = "T")]
        t: u64,
        #[arg(long = "That")]
        that: u64,
    },
    /// Play a pledge profile with given active times.
    Simulate {
        #[arg(long)]
        profile: PathBuf,
        /// Active time of each agent, comma separated.
        #[arg(long, value_delimiter = ',')]
        active: Vec<u64>,
    },
    /// Monte-Carlo average ratio versus prediction noise.
    Experiment {
        #[arg(long = "B", default_value_t = 100)]
        b: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        w: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.2,1")]
        lambdas: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0,25,50,75,100,125,150,175,200,225,250")]
        sigmas: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `min-cost-per-day` or `latest`.
        #[arg(long, default_value = "min-cost-per-day")]
        r3_rule: String,
        /// Defaults to `$SKIRENTAL_OUT_DIR/eq_<r>_<w>.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed forms with their brute-force oracles.
    OracleDiff {
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        schedule: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CheckEqArgs {
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    profile: Option<PathBuf>,
    /// `r:w1,w2,...` or `r,w1,w2,...`.
    #[arg(long, requires = "b")]
    spec: Option<String>,
    #[arg(long = "B")]
    b: Option<u64>,
    /// Number of agents; defaults to the number of weights.
    #[arg(long)]
    n: Option<usize>,
    /// Also certify with the deviation oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct ScheduleSource {
    #[arg(long, conflicts_with_all = ["r", "w"], required_unless_present_all = ["r", "w"])]
    schedule: Option<PathBuf>,
    /// With `--r` and `--w`: the schedule with price `w` on day `r`.
    #[arg(long = "B", default_value_t = 100)]
    b: u64,
    #[arg(long, requires = "w")]
    r: Option<u64>,
    #[arg(long, requires = "r")]
    w: Option<u64>,
}

impl ScheduleSource {
    fn load(&self) -> Result<PriceSchedule> {
        match (&self.schedule, self.r, self.w) {
            (Some(path), _, _) => PriceSchedule::from_json_file(path),
            (None, Some(r), Some(w)) => PriceSchedule::discounted(self.b, r, w),
            _ => Err(Error::InvalidParameter { name: "schedule", reason: "give --schedule or --r and --w".into() }),
        }
    }
}

/// One finished command: what to print and how to exit.
struct Report {
    code: i32,
    json: Value,
    text: Vec<String>,
}

impl Report {
    fn new(code: i32, json: Value, text: Vec<String>) -> Self {
        Self { code, json, text }
    }
}

fn exact(r: ExactRatio) -> String {
    format!("{r} ({})", r.decimal())
}

fn value(r: RatioValue) -> String {
    match r {
        RatioValue::Finite(x) => exact(x),
        RatioValue::Infinite => "inf".into(),
    }
}

fn days(set: &std::collections::BTreeSet<u64>) -> String {
    set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output. Returns the exit code.
pub fn dispatch<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                let _ = writeln!(out, "{}", report.json);
            } else {
                for line in &report.text {
                    let _ = writeln!(out, "{line}");
                }
            }
            report.code
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::RobustnessViolated { .. } => EXIT_ORACLE_MISMATCH,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn run(command: Command) -> Result<Report> {
    match command {
        Command::Solve { schedule, oracle } => cmd_solve(&PriceSchedule::from_json_file(&schedule)?, oracle),
        Command::CheckEq(args) => cmd_check_eq(args),
        Command::EnumerateEq { b, n, r_min, r_max } => {
            let specs = enumerate_rational_eq(b, n, r_min..=r_max.unwrap_or(2 * b.max(1) - 1))?;
            let text = specs
                .iter()
                .map(|s| format!("r={} weights={}", s.r, s.weights.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
                .chain(std::iter::once(format!("count = {}", specs.len())))
                .collect();
            Ok(Report::new(EXIT_OK, json!({ "count": specs.len(), "equilibria": specs }), text))
        }
        Command::BetaTable { b, r, w, lambda } => {
            let params = AlgParams::parse(&lambda)?;
            let res = beta_table(r, w, b, params)?;
            let mut text = vec![format!("beta = {}", exact(res.beta)), format!("row = {}", res.table_row)];
            text.extend(res.conditions_evaluated.iter().map(|(c, v)| format!("  {c}: {v}")));
            if !res.also_matching.is_empty() {
                text.push(format!("also matching: {:?}", res.also_matching));
            }
            let json = json!({
                "beta": res.beta,
                "row": res.table_row.to_string(),
                "conditions": res.conditions_evaluated.iter().map(|(c, v)| json!({ "condition": c, "holds": v })).collect::<Vec<_>>(),
                "also_matching": res.also_matching.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            Ok(Report::new(EXIT_OK, json, text))
        }
        Command::Alg1 { schedule, lambda, r3_rule, t, that } => {
            let params = AlgParams::parse(&lambda)?.with_r3_rule(r3_rule.parse()?);
            let alg = Alg1::new(&schedule.load()?, params);
            let run = alg.run(t, that)?;
            let d = alg.decision();
            let text = vec![
                format!("i_star = {}", d.i_star),
                format!("r0 = {}, r1 = {}, r2 = {}, r3 = {}", d.r0, d.r1, d.r2, d.r3),
                format!("c_opt = {}", exact(d.c_opt)),
                format!("robustness bound = {}", exact(d.bound)),
                format!("branch = {}", run.branch),
                format!("buy day = {}", run.buy_day.map_or("never".into(), |x| x.to_string())),
                format!("cost = {}, opt = {}", run.cost, run.opt),
                format!("ratio = {}", value(run.ratio)),
            ];
            Ok(Report::new(EXIT_OK, json!({ "decision": d, "run": run }), text))
        }
        Command::Simulate { profile, active } => {
            let f = PledgeProfile::from_json_file(&profile)?;
            let outcome = run_game(&f, &active)?;
            let mut text = vec![format!("purchase day = {}", outcome.purchase_day.map_or("none".into(), |x| x.to_string()))];
            for (i, ((c, o), r)) in outcome.costs.iter().zip(&outcome.opts).zip(&outcome.ratios).enumerate() {
                text.push(format!("agent {}: cost {c}, opt {o}, ratio {}", i + 1, value(*r)));
            }
            Ok(Report::new(EXIT_OK, serde_json::to_value(&outcome).expect("outcome serializes"), text))
        }
        Command::Experiment { b, r, w, lambdas, sigmas, samples, seed, r3_rule, out } => {
            let rule: R3Rule = r3_rule.parse()?;
            let lambdas = lambdas.iter().map(|l| Ok(AlgParams::parse(l)?.with_r3_rule(rule))).collect::<Result<Vec<_>>>()?;
            let cfg = ExperimentConfig { b, r, w, lambdas, sigmas, samples, seed };
            let rows = run_experiment(&cfg)?;
            let path = out.unwrap_or_else(|| default_output_path(r, w));
            write_csv(&rows, &path)?;
            let mut text: Vec<String> = rows
                .iter()
                .map(|x| format!("lambda={} sigma={} avg={:.6} suboptimal={}", x.lambda, x.sigma, x.avg_ratio, x.n_suboptimal))
                .collect();
            text.push(format!("wrote {}", path.display()));
            Ok(Report::new(EXIT_OK, json!({ "csv": path, "rows": rows }), text))
        }
        Command::OracleDiff { schedule, profile } => match (schedule, profile) {
            (Some(path), _) => cmd_solve(&PriceSchedule::from_json_file(&path)?, true),
            (None, Some(path)) => {
                let f = PledgeProfile::from_json_file(&path)?;
                let verdict = check_predictionless(&f);
                let report = oracle_certify(&f)?;
                let code = if verdict.is_equilibrium == report.certified() { EXIT_OK } else { EXIT_ORACLE_MISMATCH };
                Ok(verdict_report(&verdict, Some(&report), code))
            }
            (None, None) => unreachable!("clap requires one source"),
        },
    }
}

fn solve_json(s: &SolveResult) -> Value {
    json!({
        "c_opt": s.c_opt,
        "optimal_buy_days": s.optimal_buy_days,
        "one_competitive": s.one_competitive,
        "witness_case": s.witness_case,
    })
}

fn cmd_solve(p: &PriceSchedule, with_oracle: bool) -> Result<Report> {
    let s = solve(p);
    let mut text = vec![
        format!("c_opt = {}", exact(s.c_opt)),
        format!("optimal buy days = {}", days(&s.optimal_buy_days)),
        format!("case = {}", s.witness_case),
    ];
    let mut json = solve_json(&s);
    let mut code = EXIT_OK;
    if with_oracle {
        let o = oracle_c_opt(p)?;
        let agree = o.c_opt == s.c_opt && o.optimal_buy_days == s.optimal_buy_days;
        text.push(format!("oracle c_opt = {}, days = {}: {}", exact(o.c_opt), days(&o.optimal_buy_days), if agree { "agree" } else { "DISAGREE" }));
        json["oracle"] = solve_json(&o);
        json["agree"] = json!(agree);
        if !agree {
            code = EXIT_ORACLE_MISMATCH;
        }
    }
    Ok(Report::new(code, json, text))
}

/// `r:w1,w2,...` or `r,w1,w2,...`.
fn parse_spec(s: &str) -> Result<(u64, Vec<u64>)> {
    let bad = || Error::InvalidParameter { name: "spec", reason: format!("`{s}` is not r:w1,w2,... or r,w1,w2,...") };
    let (r, rest) = match s.split_once(':') {
        Some((r, rest)) => (r, rest),
        None => s.split_once(',').ok_or_else(bad)?,
    };
    let r = r.trim().parse().map_err(|_| bad())?;
    let weights = rest.split(',').map(|w| w.trim().parse().map_err(|_| bad())).collect::<Result<Vec<u64>>>()?;
    Ok((r, weights))
}

fn cmd_check_eq(args: CheckEqArgs) -> Result<Report> {
    let (profile, verdict) = match (&args.profile, &args.spec) {
        (Some(path), _) => {
            let f = PledgeProfile::from_json_file(path)?;
            let verdict = check_predictionless(&f);
            (f, verdict)
        }
        (None, Some(spec)) => {
            let (r, weights) = parse_spec(spec)?;
            let b = args.b.expect("clap requires --B with --spec");
            let n = args.n.unwrap_or(weights.len());
            let spec = EquilibriumSpec::new(b, n, r, weights)?;
            let verdict = check_rational_no_selfpred(&spec)?;
            (spec.realize(), verdict)
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let code = if verdict.is_equilibrium { EXIT_OK } else { EXIT_FALSE };
    if !args.oracle {
        return Ok(verdict_report(&verdict, None, code));
    }
    let report = oracle_certify(&profile)?;
    let code = if verdict.is_equilibrium == report.certified() { code } else { EXIT_ORACLE_MISMATCH };
    Ok(verdict_report(&verdict, Some(&report), code))
}

fn verdict_report(verdict: &EqVerdict, oracle: Option<&OracleReport>, code: i32) -> Report {
    let mut text = vec![format!("equilibrium = {}", verdict.is_equilibrium)];
    if let Some(f) = verdict.failing_condition {
        text.push(match f.agent {
            Some(a) => format!("failing condition = {} (agent {a})", f.condition),
            None => format!("failing condition = {}", f.condition),
        });
    }
    for (i, r) in verdict.ratios.iter().enumerate() {
        text.push(format!("agent {}: ratio {}", i + 1, value(*r)));
    }
    let mut json = serde_json::to_value(verdict).expect("verdict serializes");
    if let Some(report) = oracle {
        for c in &report.agents {
            text.push(format!("oracle agent {}: current {}, best {}", c.agent, value(c.current), exact(c.best)));
        }
        text.push(format!("oracle certified = {}", report.certified()));
        json["oracle"] = serde_json::to_value(report).expect("report serializes");
        json["oracle_certified"] = json!(report.certified());
    }
    if code == EXIT_ORACLE_MISMATCH {
        text.push("checker and oracle DISAGREE".into());
    }
    Report::new(code, json, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(std::iter::once("skirental").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn spec_strings() {
        assert_eq!(parse_spec("75:50,50").unwrap(), (75, vec![50, 50]));
        assert_eq!(parse_spec("75,50,50").unwrap(), (75, vec![50, 50]));
        assert!(parse_spec("75").is_err());
        assert!(parse_spec("x:1").is_err());
    }

    #[test]
    fn check_eq_exit_codes() {
        let (code, out, _) = call(&["check-eq", "--spec", "75:50,50", "--B", "100"]);
        assert_eq!(code, 0);
        assert!(out.contains("124/75"));
        assert_eq!(call(&["check-eq", "--spec", "10:50,50", "--B", "100"]).0, 1);
        assert_eq!(call(&["check-eq", "--spec", "3:2,2", "--B", "4", "--oracle"]).0, 0);
    }

    #[test]
    fn beta_table_output() {
        let (code, out, _) = call(&["beta-table", "--B", "100", "--r", "75", "--w", "19", "--lambda", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("31/25 (1.240000)"));
        let (_, out, _) = call(&["--json", "beta-table", "--B", "100", "--r", "75", "--w", "70", "--lambda", "0.2"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["beta"]["fraction"], "57/50");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["solve"]).0, 3);
        assert_eq!(call(&["bogus"]).0, 3);
        assert_eq!(call(&["beta-table", "--B", "100", "--r", "75", "--w", "19", "--lambda", "2"]).0, 3);
        assert_eq!(call(&["beta-table", "--B", "100", "--r", "75", "--w", "19", "--lambda", "1", "--extra"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn alg1_from_shape() {
        let (code, out, _) = call(&["alg1", "--r", "75", "--w", "70", "--lambda", "0.2", "--T", "200", "--That", "200"]);
        assert_eq!(code, 0);
        assert!(out.contains("r2 = 15, r3 = 781"));
        assert!(out.contains("ratio = 57/50"));
        let (_, out, _) = call(&["alg1", "--r", "75", "--w", "19", "--lambda", "0.2", "--T", "80", "--That", "80", "--r3-rule", "latest"]);
        assert!(out.contains("r3 = 403"));
        assert_eq!(call(&["alg1", "--r", "75", "--w", "19", "--lambda", "0.2", "--T", "8", "--That", "8", "--r3-rule", "x"]).0, 3);
    }
}
