// SPDX-License-Identifier: Apache-2.0

use aop_core::harness::{run_bench, BenchConfig};

fn bench_csv(dir: &std::path::Path, name: &str) -> (BenchConfig, String) {
    let mut cfg = BenchConfig::new(4, 9, 30, 77);
    cfg.csv = Some(dir.join(name));
    let report = run_bench(&cfg).unwrap();
    assert_eq!(report.records.len(), 180);
    let text = std::fs::read_to_string(cfg.csv.as_ref().unwrap()).unwrap();
    (cfg, text)
}

fn without_times(text: &str) -> Vec<Vec<String>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let keep: Vec<bool> = rd.headers().unwrap().iter().map(|h| !h.ends_with("_time_us")).collect();
    rd.records()
        .map(|r| {
            r.unwrap()
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(v, _)| v.to_string())
                .collect()
        })
        .collect()
}

#[test]
fn reruns_reproduce_every_non_timing_column() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = bench_csv(dir.path(), "a.csv");
    let (_, b) = bench_csv(dir.path(), "a.csv");
    assert_eq!(without_times(&a), without_times(&b));
}

/// Summary statistics recomputed from the CSV rows alone.
#[test]
fn summary_is_recomputable_from_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = BenchConfig::new(4, 9, 30, 77);
    cfg.csv = Some(dir.path().join("s.csv"));
    let report = run_bench(&cfg).unwrap();
    let text = std::fs::read_to_string(cfg.csv.as_ref().unwrap()).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    let num = |r: &csv::StringRecord, c: &str| r[col(c)].parse::<f64>().unwrap();

    for s in &report.summaries {
        let rows: Vec<&csv::StringRecord> = rows.iter().filter(|r| num(r, "m") as usize == s.m).collect();
        assert_eq!(rows.len(), s.instances);
        let mut gains: Vec<f64> = rows
            .iter()
            .map(|r| {
                let best = ["r2006", "hs2017", "immediate"]
                    .iter()
                    .map(|f| num(r, &format!("{f}_delay")))
                    .fold(f64::INFINITY, f64::min);
                best - num(r, "dp_delay")
            })
            .collect();
        gains.sort_by(f64::total_cmp);
        let n = gains.len();
        let median = if n % 2 == 1 { gains[n / 2] } else { (gains[n / 2 - 1] + gains[n / 2]) / 2.0 };
        assert_eq!(s.median_gain, Some(median), "m={}", s.m);
        let hits = rows.iter().filter(|r| num(r, "dp_delay") == num(r, "lb")).count();
        assert_eq!(s.lb_match_rate, hits as f64 / n as f64);
        let oracle: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| !r[col("oracle_delay")].is_empty())
            .map(|r| (num(r, "oracle_delay"), num(r, "dp_delay")))
            .collect();
        assert_eq!(s.oracle_instances, oracle.len());
        if !oracle.is_empty() {
            let rate = oracle.iter().filter(|(o, d)| o == d).count() as f64 / oracle.len() as f64;
            assert_eq!(s.oracle_match_rate, Some(rate));
        }
        let total: usize = s.gain_histogram.values().sum();
        assert_eq!(total, n);
    }
}
