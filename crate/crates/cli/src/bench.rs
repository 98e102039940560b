//! Wall-clock comparison of key generation (which precomputes the whole
//! composition table) with a single homomorphic addition (one lookup).

use std::hint::black_box;
use std::time::Instant;

use functor_he::quotient_he::{
    encrypt, eval_add, keygen_seeded, Mode, SchemeParams, MAX_PUBLIC_TABLE_ENTRIES,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub operation: String,
    pub n: usize,
    pub class_size: usize,
    pub mode: Mode,
    pub repetitions: usize,
    /// Per call, in nanoseconds.
    pub median_ns: f64,
    pub p95_ns: f64,
    /// Work done per repetition: table compositions for `keygen`, lookups
    /// for `eval_add`.
    pub operations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub entries: Vec<BenchEntry>,
}

impl BenchReport {
    pub fn entry(&self, operation: &str, n: usize) -> Option<&BenchEntry> {
        self.entries
            .iter()
            .find(|e| e.operation == operation && e.n == n)
    }
}

/// Smallest power of `n` that keeps the public table within its size limit.
pub fn bench_class_size(n: usize) -> usize {
    let total = (n as u128).pow(n as u32);
    let mut c = n as u128;
    while (total / c).pow(2) > MAX_PUBLIC_TABLE_ENTRIES {
        c *= n as u128;
    }
    c as usize
}

/// Median and nearest-rank 95th percentile.
pub fn summarize(samples: &mut [f64]) -> (f64, f64) {
    samples.sort_by(f64::total_cmp);
    let len = samples.len();
    let median = if len % 2 == 1 {
        samples[len / 2]
    } else {
        (samples[len / 2 - 1] + samples[len / 2]) / 2.0
    };
    let rank = ((0.95 * len as f64).ceil() as usize).clamp(1, len);
    (median, samples[rank - 1])
}

pub fn cmd_bench(cfg: &BenchConfig) -> Result<BenchReport, CliError> {
    if cfg.reps < 3 {
        return Err(CliError::Params(format!(
            "at least 3 repetitions are needed, got {}",
            cfg.reps
        )));
    }
    if cfg.n_min < 2 || cfg.n_min > cfg.n_max {
        return Err(CliError::Params(format!(
            "bad range {}..={}",
            cfg.n_min, cfg.n_max
        )));
    }
    let mut entries = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let c = bench_class_size(n);
        let params = SchemeParams::full(n, c).with_seed(cfg.seed);
        params.validate()?;

        let mut keygen_ns = Vec::with_capacity(cfg.reps);
        let mut keys = None;
        for _ in 0..cfg.reps {
            let start = Instant::now();
            let pair = keygen_seeded(&params)?;
            keygen_ns.push(start.elapsed().as_nanos() as f64);
            keys = Some(black_box(pair));
        }
        let (sk, pk) = keys.expect("at least one repetition");
        let classes = sk.classes().len() as u64;

        let cts = (0..n)
            .map(|k| encrypt(&sk, k))
            .collect::<Result<Vec<_>, _>>()?;
        let calls = (n * n) as u64;
        let mut add_ns = Vec::with_capacity(cfg.reps);
        for _ in 0..cfg.reps {
            let start = Instant::now();
            for a in &cts {
                for b in &cts {
                    black_box(eval_add(&pk, a, b)?);
                }
            }
            add_ns.push(start.elapsed().as_nanos() as f64 / calls as f64);
        }

        for (operation, samples, operations) in [
            ("keygen", &mut keygen_ns, classes * classes),
            ("eval_add", &mut add_ns, calls),
        ] {
            let (median_ns, p95_ns) = summarize(samples);
            entries.push(BenchEntry {
                operation: operation.into(),
                n,
                class_size: c,
                mode: Mode::Full,
                repetitions: cfg.reps,
                median_ns,
                p95_ns,
                operations,
            });
        }
    }
    Ok(BenchReport {
        seed: cfg.seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes_respect_the_table_limit() {
        assert_eq!(bench_class_size(2), 2);
        assert_eq!(bench_class_size(5), 5);
        assert_eq!(bench_class_size(6), 36);
        assert_eq!(bench_class_size(7), 343);
    }

    #[test]
    fn percentiles() {
        assert_eq!(summarize(&mut [3.0, 1.0, 2.0]), (2.0, 3.0));
        let mut v: Vec<f64> = (1..=20).map(f64::from).collect();
        assert_eq!(summarize(&mut v), (10.5, 19.0));
    }

    #[test]
    fn too_few_repetitions() {
        let cfg = BenchConfig {
            n_min: 2,
            n_max: 2,
            reps: 2,
            seed: 0,
        };
        assert!(matches!(cmd_bench(&cfg), Err(CliError::Params(_))));
    }
}
