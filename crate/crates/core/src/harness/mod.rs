// SPDX-License-Identifier: Apache-2.0

//! Random benchmark instances, the benchmark driver and its outputs.

mod dot;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use dot::emit_dot;
pub use report::{csv_header, summarize, write_csv, write_summary, MSummary};

use crate::baselines::{optimize_baseline, BaselineFamily};
use crate::bounds::{exact_optimum, lower_bound, oracle_eligible};
use crate::error::{Error, Result};
use crate::instance::AopInstance;
use crate::optimizer::{optimize, Mode, OptimizationResult};
use crate::verify::equivalent;

/// Default largest `m` accepted by [`BenchConfig::validate`].
pub const DEFAULT_M_CEILING: usize = 28;
/// Outputs are checked against the path's truth table up to this `m`.
pub const VERIFY_MAX_M: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    pub m_min: usize,
    pub m_max: usize,
    /// Instances per `m`.
    pub count: usize,
    pub seed: u64,
    pub baselines: Vec<BaselineFamily>,
    /// Mode of the `dp_*` columns.
    pub mode: Mode,
    /// Also run the optimizer in [`Mode::DelaySize`] (`ds_*` columns).
    pub size_mode: bool,
    /// Run the exact optimum on eligible instances.
    pub oracle: bool,
    /// Abort on the first record invariant violation. When unset, records
    /// are returned as computed and callers check them.
    pub strict: bool,
    pub m_ceiling: usize,
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(m_min: usize, m_max: usize, count: usize, seed: u64) -> Self {
        Self {
            m_min,
            m_max,
            count,
            seed,
            baselines: BaselineFamily::ALL.to_vec(),
            mode: Mode::Delay,
            size_mode: true,
            oracle: true,
            strict: true,
            m_ceiling: DEFAULT_M_CEILING,
            csv: None,
            summary: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.m_min && self.m_min <= self.m_max && self.m_max <= self.m_ceiling) {
            return Err(Error::InvalidConfig(format!(
                "need 1 ≤ m_min ≤ m_max ≤ {}, got {}..{}",
                self.m_ceiling, self.m_min, self.m_max
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether the `ds_*` columns are present.
    pub fn has_size_columns(&self) -> bool {
        self.size_mode && self.mode == Mode::Delay
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of instance `idx` with `m` inputs: SplitMix64 over the run seed
/// mixed with `m` and `idx`.
pub fn instance_seed(seed: u64, m: usize, idx: usize) -> u64 {
    splitmix64(splitmix64(seed ^ (m as u64).wrapping_mul(0xA076_1D64_78BD_642F)) ^ idx as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub m: usize,
    pub idx: usize,
    pub seed: u64,
    pub instance: AopInstance,
}

/// Arrival times are integers drawn uniformly from `[0, m]` (inclusive)
/// by a ChaCha8 stream seeded with [`instance_seed`].
pub fn generate_instance(seed: u64, m: usize, idx: usize) -> GeneratedInstance {
    let s = instance_seed(seed, m, idx);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let arrivals = (0..m).map(|_| rng.random_range(0..=m as u32) as f64).collect();
    GeneratedInstance {
        m,
        idx,
        seed: s,
        instance: AopInstance::primal(arrivals).expect("m ≥ 1 with finite arrivals"),
    }
}

/// All instances of `cfg`, ordered by `(m, idx)`.
pub fn gen_instances(cfg: &BenchConfig) -> Result<Vec<GeneratedInstance>> {
    cfg.validate()?;
    Ok((cfg.m_min..=cfg.m_max)
        .flat_map(|m| (0..cfg.count).map(move |idx| generate_instance(cfg.seed, m, idx)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub delay: f64,
    pub size: usize,
    pub time_us: u64,
}

impl From<&OptimizationResult> for Outcome {
    fn from(r: &OptimizationResult) -> Self {
        Self { delay: r.delay, size: r.size, time_us: r.elapsed_us }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub m: usize,
    pub idx: usize,
    pub seed: u64,
    pub arrivals: Vec<f64>,
    pub w_log2: f64,
    pub lb: f64,
    pub dp: Outcome,
    pub ds: Option<Outcome>,
    pub baselines: Vec<(BaselineFamily, Outcome)>,
    pub oracle: Option<f64>,
    pub oracle_time_us: Option<u64>,
}

impl BenchRecord {
    /// Baseline with the smallest delay, ties by smaller size.
    pub fn best_baseline(&self) -> Option<Outcome> {
        self.baselines
            .iter()
            .map(|(_, o)| *o)
            .min_by(|a, b| a.delay.total_cmp(&b.delay).then(a.size.cmp(&b.size)))
    }

    /// Best baseline delay minus dp delay.
    pub fn gain(&self) -> Option<f64> {
        self.best_baseline().map(|b| b.delay - self.dp.delay)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summaries: Vec<MSummary>,
}

const EPS: f64 = 1e-9;

fn check_output(cfg: &BenchConfig, g: &GeneratedInstance, what: &str, r: &OptimizationResult) -> Result<()> {
    if cfg.strict && g.m <= VERIFY_MAX_M && !equivalent(&r.circuit, g.instance.root_ref(), g.m)? {
        return Err(Error::Invariant(format!(
            "{what} output for m={} idx={} is not equivalent to the path",
            g.m, g.idx
        )));
    }
    Ok(())
}

/// Runs every algorithm on one instance and enforces the record invariants.
pub fn run_instance(cfg: &BenchConfig, g: &GeneratedInstance) -> Result<BenchRecord> {
    let inst = &g.instance;
    let at = |what: &str| format!("{what} (m={}, idx={}, arrivals {:?})", g.m, g.idx, inst.arrivals());
    let lb = lower_bound(inst).combined;
    let violated = |bad: bool, msg: &dyn Fn() -> String| -> Result<()> {
        if cfg.strict && bad {
            return Err(Error::Invariant(at(&msg())));
        }
        Ok(())
    };
    let dp = optimize(inst, cfg.mode)?;
    check_output(cfg, g, "dp", &dp)?;
    violated(dp.delay < lb - EPS, &|| format!("dp delay {} below lower bound {lb}", dp.delay))?;
    let ds = if cfg.has_size_columns() {
        let r = optimize(inst, Mode::DelaySize)?;
        check_output(cfg, g, "delay-size", &r)?;
        violated(r.delay < lb - EPS, &|| format!("delay-size delay {} below lower bound {lb}", r.delay))?;
        Some(Outcome::from(&r))
    } else {
        None
    };
    let mut baselines = Vec::with_capacity(cfg.baselines.len());
    for &f in &cfg.baselines {
        let r = optimize_baseline(inst, f)?;
        check_output(cfg, g, f.name(), &r)?;
        violated(r.delay < lb - EPS, &|| format!("{f} delay {} below lower bound {lb}", r.delay))?;
        violated(dp.delay > r.delay + EPS, &|| format!("dp delay {} exceeds {f} delay {}", dp.delay, r.delay))?;
        baselines.push((f, Outcome::from(&r)));
    }
    let (oracle, oracle_time_us) = if cfg.oracle && oracle_eligible(inst) {
        let start = Instant::now();
        let opt = exact_optimum(inst)?;
        let us = start.elapsed().as_micros() as u64;
        violated(opt < lb - EPS || opt > dp.delay + EPS, &|| {
            format!("exact optimum {opt} outside [lower bound {lb}, dp delay {}]", dp.delay)
        })?;
        (Some(opt), Some(us))
    } else {
        (None, None)
    };
    Ok(BenchRecord {
        m: g.m,
        idx: g.idx,
        seed: g.seed,
        arrivals: inst.arrivals().to_vec(),
        w_log2: inst.weight_log2(),
        lb,
        dp: Outcome::from(&dp),
        ds,
        baselines,
        oracle,
        oracle_time_us,
    })
}

/// Runs the benchmark. Instances are processed in parallel and merged in
/// `(m, idx)` order; the CSV and summary files are written when configured.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let instances = gen_instances(cfg)?;
    let records = instances
        .par_iter()
        .map(|g| run_instance(cfg, g))
        .collect::<Result<Vec<_>>>()?;
    let summaries = summarize(&records);
    if let Some(path) = &cfg.csv {
        let file = std::fs::File::create(path)?;
        write_csv(cfg, &records, file)?;
    }
    if let Some(path) = &cfg.summary {
        let mut file = std::fs::File::create(path)?;
        write_summary(&summaries, &mut file)?;
    }
    Ok(BenchReport { records, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_in_range() {
        let cfg = BenchConfig::new(4, 4, 3, 1);
        let a = gen_instances(&cfg).unwrap();
        assert_eq!(a, gen_instances(&cfg).unwrap());
        assert_eq!(a.len(), 3);
        let cfg = BenchConfig::new(4, 28, 40, 7);
        for g in gen_instances(&cfg).unwrap() {
            assert!(g.instance.arrivals().iter().all(|&x| x >= 0.0 && x <= g.m as f64 && x.fract() == 0.0));
        }
        assert_ne!(instance_seed(1, 4, 0), instance_seed(1, 4, 1));
        assert_ne!(instance_seed(1, 4, 0), instance_seed(1, 5, 0));
    }

    #[test]
    fn full_bench_size() {
        let cfg = BenchConfig::new(4, 28, 1000, 0);
        assert_eq!(gen_instances(&cfg).unwrap().len(), 25_000);
    }

    #[test]
    fn range_endpoints_are_drawn() {
        let mut seen = [false; 5];
        for idx in 0..200 {
            for &a in generate_instance(3, 4, idx).instance.arrivals() {
                seen[a as usize] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn invalid_configs() {
        assert!(BenchConfig::new(0, 4, 1, 0).validate().is_err());
        assert!(BenchConfig::new(5, 4, 1, 0).validate().is_err());
        assert!(BenchConfig::new(4, 29, 1, 0).validate().is_err());
        assert!(BenchConfig::new(4, 4, 0, 0).validate().is_err());
        let mut cfg = BenchConfig::new(4, 40, 1, 0);
        cfg.m_ceiling = 40;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn small_bench_records() {
        let report = run_bench(&BenchConfig::new(3, 6, 10, 11)).unwrap();
        assert_eq!(report.records.len(), 40);
        for r in &report.records {
            assert!(r.dp.delay >= r.lb);
            assert!(r.gain().unwrap() >= 0.0);
            assert_eq!(r.oracle.is_some(), r.m <= 5);
            assert_eq!(r.ds.unwrap().delay, r.dp.delay);
        }
        let order: Vec<(usize, usize)> = report.records.iter().map(|r| (r.m, r.idx)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
    }
}
