//! Benchmark runs: generate, solve per mode, verify.

use std::time::{Duration, Instant};

use anewdsc::{isolate, Dyadic, ExactPolynomial, Mode, SolveConfig, SolveError};
use num_bigint::BigInt;

use crate::families::{FamilyError, FamilyParams, FamilyRegistry};
use crate::report::{BenchRecord, StatsRecord};
use crate::sturm::{verify, DEFAULT_DEGREE_CAP};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: String,
    pub params: FamilyParams,
    pub modes: Vec<Mode>,
    pub verify: bool,
    pub timeout: Duration,
    pub oracle_cap: usize,
    /// Template for every solve; `mode`, `seed` and `timeout` are overridden.
    pub solve: SolveConfig,
}

impl BenchConfig {
    pub fn new(family: &str, n: usize, tau: u64) -> Self {
        BenchConfig {
            family: family.to_string(),
            params: FamilyParams::new(n, tau),
            modes: vec![Mode::ANewDsc],
            verify: true,
            timeout: Duration::from_secs(600),
            oracle_cap: DEFAULT_DEGREE_CAP,
            solve: SolveConfig::default(),
        }
    }
}

fn round_tenth(d: Duration) -> f64 {
    (d.as_secs_f64() * 10.0).round() / 10.0
}

/// Solve one integer polynomial in one mode and verify the answer when the
/// degree is within the oracle cap.
pub fn run_instance(coeffs: &[BigInt], mode: Mode, cfg: &BenchConfig) -> BenchRecord {
    let p = ExactPolynomial::from_bigints(coeffs);
    let solve = SolveConfig {
        mode,
        seed: cfg.params.seed,
        timeout: Some(cfg.timeout),
        ..cfg.solve.clone()
    };
    let start = Instant::now();
    let outcome = isolate(&p, None, &solve);
    let elapsed = start.elapsed();
    let mut record = BenchRecord {
        family: cfg.family.clone(),
        n: cfg.params.n,
        tau: cfg.params.tau,
        seed: cfg.params.seed,
        mode: mode.name().to_string(),
        root_count: None,
        oracle_count: None,
        verified: false,
        timed_out: false,
        error: None,
        stats: None,
        wall_time_s: round_tenth(elapsed),
    };
    let res = match outcome {
        Ok(res) => res,
        Err(e) => {
            record.timed_out = matches!(e, SolveError::Timeout(_));
            record.stats = e.partial_stats().map(StatsRecord::from);
            record.error = Some(e.to_string());
            return record;
        }
    };
    record.root_count = Some(res.root_count());
    record.stats = Some(StatsRecord::from(&res.stats));
    if cfg.verify && coeffs.len() - 1 <= cfg.oracle_cap {
        let bound = anewdsc::poly::cauchy_root_bound(&p, solve.prec_cap).expect("nonzero leading coefficient");
        match verify(coeffs, &bound.neg(), &bound, &res.intervals, &res.points, cfg.oracle_cap) {
            Ok(v) => {
                record.oracle_count = Some(v.oracle_count);
                record.verified = v.ok;
                if !v.ok {
                    record.error = Some(v.problems.join("; "));
                }
            }
            Err(e) => record.error = Some(format!("oracle: {e}")),
        }
    }
    record
}

/// Generate the configured instance and run every mode on it.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, FamilyError> {
    let coeffs = FamilyRegistry::with_defaults().generate(&cfg.family, &cfg.params)?;
    Ok(cfg.modes.iter().map(|&m| run_instance(&coeffs, m, cfg)).collect())
}

/// Region used by the solver when none is given.
pub fn default_region(coeffs: &[BigInt]) -> (Dyadic, Dyadic) {
    let p = ExactPolynomial::from_bigints(coeffs);
    let b = anewdsc::poly::cauchy_root_bound(&p, 1 << 20).expect("nonzero leading coefficient");
    (b.neg(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilkinson_all_modes() {
        let mut cfg = BenchConfig::new("wilkinson", 8, 0);
        cfg.modes = vec![Mode::Classic, Mode::Adsc, Mode::ANewDsc];
        let recs = run_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        for r in recs {
            assert!(r.verified, "{r:?}");
            assert_eq!(r.root_count, Some(8));
            assert_eq!(r.oracle_count, Some(8));
        }
    }

    #[test]
    fn timeout_is_recorded() {
        let mut cfg = BenchConfig::new("mignotte", 64, 64);
        cfg.modes = vec![Mode::Adsc];
        cfg.timeout = Duration::from_millis(1);
        let r = &run_bench(&cfg).unwrap()[0];
        assert!(r.timed_out);
        assert!(!r.verified);
    }
}
