// SPDX-License-Identifier: Apache-2.0

//! CSV rows and per-`m` summary statistics.
//!
//! Columns, in order: `m, idx, seed, W_log2, lb, dp_delay, dp_size`, then
//! `ds_delay, ds_size` when the delay-size run is enabled, `<family>_delay,
//! <family>_size` per enabled baseline, `oracle_delay` (blank when the
//! instance is not eligible), and wall times in µs: `dp_time_us`,
//! `ds_time_us`, `<family>_time_us`, `oracle_time_us`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::{BenchConfig, BenchRecord};
use crate::error::{Error, Result};

/// Size overhead (percent, averaged per `m`) above which a summary row is
/// flagged.
pub const SIZE_OVERHEAD_FLAG_PCT: f64 = 30.0;

pub fn csv_header(cfg: &BenchConfig) -> Vec<String> {
    let mut h: Vec<String> = ["m", "idx", "seed", "W_log2", "lb", "dp_delay", "dp_size"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if cfg.has_size_columns() {
        h.extend(["ds_delay".into(), "ds_size".into()]);
    }
    for f in &cfg.baselines {
        h.extend([format!("{f}_delay"), format!("{f}_size")]);
    }
    h.push("oracle_delay".into());
    h.push("dp_time_us".into());
    if cfg.has_size_columns() {
        h.push("ds_time_us".into());
    }
    h.extend(cfg.baselines.iter().map(|f| format!("{f}_time_us")));
    h.push("oracle_time_us".into());
    h
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn write_csv<W: Write>(cfg: &BenchConfig, records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(cfg)).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.m.to_string(),
            r.idx.to_string(),
            r.seed.to_string(),
            r.w_log2.to_string(),
            r.lb.to_string(),
            r.dp.delay.to_string(),
            r.dp.size.to_string(),
        ];
        if cfg.has_size_columns() {
            let ds = r.ds.ok_or_else(|| Error::Invariant("record lacks delay-size run".into()))?;
            row.extend([ds.delay.to_string(), ds.size.to_string()]);
        }
        for (_, o) in &r.baselines {
            row.extend([o.delay.to_string(), o.size.to_string()]);
        }
        row.push(r.oracle.map(|o| o.to_string()).unwrap_or_default());
        row.push(r.dp.time_us.to_string());
        if let Some(ds) = r.ds.filter(|_| cfg.has_size_columns()) {
            row.push(ds.time_us.to_string());
        }
        row.extend(r.baselines.iter().map(|(_, o)| o.time_us.to_string()));
        row.push(r.oracle_time_us.map(|t| t.to_string()).unwrap_or_default());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MSummary {
    pub m: usize,
    pub instances: usize,
    /// `best baseline delay − dp delay` → number of instances.
    pub gain_histogram: BTreeMap<i64, usize>,
    pub median_gain: Option<f64>,
    pub mean_gain: Option<f64>,
    /// Fraction of instances where the dp delay equals the lower bound.
    pub lb_match_rate: f64,
    pub oracle_instances: usize,
    pub oracle_match_rate: Option<f64>,
    pub max_oracle_gap: Option<f64>,
    /// Mean of `(size − best baseline size) / best baseline size` in percent.
    pub dp_size_overhead_pct: Option<f64>,
    pub ds_size_overhead_pct: Option<f64>,
    pub size_overhead_flag: bool,
    pub mean_dp_time_us: f64,
    pub max_dp_time_us: u64,
}

/// Median with the mean of the two middle values for even counts.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 { values[n / 2] } else { (values[n / 2 - 1] + values[n / 2]) / 2.0 })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize(records: &[BenchRecord]) -> Vec<MSummary> {
    let mut by_m: BTreeMap<usize, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        by_m.entry(r.m).or_default().push(r);
    }
    by_m
        .into_iter()
        .map(|(m, rs)| {
            let n = rs.len();
            let mut gains: Vec<f64> = rs.iter().filter_map(|r| r.gain()).collect();
            let mut gain_histogram = BTreeMap::new();
            for g in &gains {
                *gain_histogram.entry(g.round() as i64).or_insert(0) += 1;
            }
            let mean_gain = mean(gains.iter().copied());
            let median_gain = median(&mut gains);
            let lb_hits = rs.iter().filter(|r| (r.dp.delay - r.lb).abs() < 1e-9).count();
            let oracle: Vec<(f64, f64)> = rs.iter().filter_map(|r| r.oracle.map(|o| (o, r.dp.delay))).collect();
            let oracle_hits = oracle.iter().filter(|(o, d)| (o - d).abs() < 1e-9).count();
            let overhead = |size: &dyn Fn(&BenchRecord) -> Option<usize>| {
                mean(rs.iter().filter_map(|r| {
                    let b = r.best_baseline()?;
                    let s = size(r)?;
                    (b.size > 0).then(|| 100.0 * (s as f64 - b.size as f64) / b.size as f64)
                }))
            };
            let dp_size_overhead_pct = overhead(&|r| Some(r.dp.size));
            let ds_size_overhead_pct = overhead(&|r| r.ds.map(|d| d.size));
            let flagged = ds_size_overhead_pct.or(dp_size_overhead_pct).unwrap_or(0.0);
            MSummary {
                m,
                instances: n,
                gain_histogram,
                median_gain,
                mean_gain,
                lb_match_rate: lb_hits as f64 / n as f64,
                oracle_instances: oracle.len(),
                oracle_match_rate: (!oracle.is_empty()).then(|| oracle_hits as f64 / oracle.len() as f64),
                max_oracle_gap: oracle.iter().map(|(o, d)| d - o).reduce(f64::max),
                dp_size_overhead_pct,
                ds_size_overhead_pct,
                size_overhead_flag: flagged > SIZE_OVERHEAD_FLAG_PCT,
                mean_dp_time_us: mean(rs.iter().map(|r| r.dp.time_us as f64)).unwrap_or(0.0),
                max_dp_time_us: rs.iter().map(|r| r.dp.time_us).max().unwrap_or(0),
            }
        })
        .collect()
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.digits$}"))
}

/// Plain-text table, one line per `m`.
pub fn write_summary<W: Write>(summaries: &[MSummary], out: &mut W) -> Result<()> {
    writeln!(
        out,
        "{:>3} {:>6} {:>7} {:>6} {:>7} {:>6} {:>7} {:>7} {:>8} {:>8} {:>9}  gains",
        "m", "n", "median", "mean", "lb_hit", "oracle", "or_hit", "or_gap", "dp_ovh%", "ds_ovh%", "dp_us"
    )?;
    for s in summaries {
        let hist: Vec<String> = s.gain_histogram.iter().map(|(g, c)| format!("{g}:{c}")).collect();
        writeln!(
            out,
            "{:>3} {:>6} {:>7} {:>6} {:>7.3} {:>6} {:>7} {:>7} {:>8} {:>8} {:>9.0}  {}{}",
            s.m,
            s.instances,
            opt(s.median_gain, 1),
            opt(s.mean_gain, 2),
            s.lb_match_rate,
            s.oracle_instances,
            opt(s.oracle_match_rate, 3),
            opt(s.max_oracle_gap, 0),
            opt(s.dp_size_overhead_pct, 1),
            opt(s.ds_size_overhead_pct, 1),
            s.mean_dp_time_us,
            hist.join(" "),
            if s.size_overhead_flag { "  [size overhead > 30%]" } else { "" },
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::BaselineFamily;
    use crate::harness::run_bench;

    #[test]
    fn medians() {
        assert_eq!(median(&mut []), None);
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [0.0, 1.0, 1.0, 2.0]), Some(1.0));
        assert_eq!(median(&mut [0.0, 1.0]), Some(0.5));
    }

    #[test]
    fn empty_baseline_set_has_dp_and_lb_columns_only() {
        let mut cfg = BenchConfig::new(4, 5, 3, 2);
        cfg.baselines.clear();
        cfg.size_mode = false;
        let h = csv_header(&cfg);
        assert!(h.contains(&"lb".to_string()) && h.contains(&"dp_delay".to_string()));
        for f in BaselineFamily::ALL {
            assert!(!h.iter().any(|c| c.starts_with(f.name())));
        }
        let report = run_bench(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&cfg, &report.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(report.summaries.iter().all(|s| s.median_gain.is_none()));
    }

    #[test]
    fn rows_match_header() {
        let cfg = BenchConfig::new(4, 6, 4, 5);
        let report = run_bench(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&cfg, &report.records, &mut buf).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        let width = rd.headers().unwrap().len();
        assert_eq!(width, csv_header(&cfg).len());
        assert_eq!(rd.records().map(|r| r.unwrap().len()).filter(|&l| l == width).count(), 12);
        let mut s = Vec::new();
        write_summary(&report.summaries, &mut s).unwrap();
        assert_eq!(String::from_utf8(s).unwrap().lines().count(), 4);
    }
}
