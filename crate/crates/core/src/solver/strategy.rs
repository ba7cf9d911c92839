use std::collections::BTreeMap;
use std::sync::Arc;

use super::classic::run_classic;
use super::driver::{resolve_region, Driver};
use super::{IsolationResult, SolveConfig, SolveError};
use crate::dyadic::Dyadic;
use crate::poly::{CoefficientOracle, OracleCache};

/// A root isolation algorithm.
pub trait IsolationStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn isolate(
        &self,
        oracle: &dyn CoefficientOracle,
        region: Option<(Dyadic, Dyadic)>,
        cfg: &SolveConfig,
    ) -> Result<IsolationResult, SolveError>;
}

/// Exact Descartes method with midpoint subdivision.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicDescartes;

impl IsolationStrategy for ClassicDescartes {
    fn name(&self) -> &str {
        "classic"
    }

    fn isolate(
        &self,
        oracle: &dyn CoefficientOracle,
        region: Option<(Dyadic, Dyadic)>,
        cfg: &SolveConfig,
    ) -> Result<IsolationResult, SolveError> {
        if !oracle.is_exact() {
            return Err(SolveError::BitstreamRejected);
        }
        if oracle.degree() == 0 {
            return Err(SolveError::ConstantPolynomial);
        }
        let src = OracleCache::new(oracle);
        let (a, b) = resolve_region(&src, region, cfg.prec_cap)?;
        let (intervals, points, stats, trace) = run_classic(&src, a, b, cfg)?;
        Ok(IsolationResult {
            intervals,
            points,
            stats,
            trace,
        })
    }
}

fn run_approximate(
    oracle: &dyn CoefficientOracle,
    region: Option<(Dyadic, Dyadic)>,
    cfg: &SolveConfig,
    newton: bool,
) -> Result<IsolationResult, SolveError> {
    if oracle.degree() == 0 {
        return Err(SolveError::ConstantPolynomial);
    }
    let src = OracleCache::new(oracle);
    let (a, b) = resolve_region(&src, region, cfg.prec_cap)?;
    let mut driver = Driver::new(&src, cfg, newton);
    let intervals = driver.run(a, b)?;
    Ok(IsolationResult {
        intervals,
        points: Vec::new(),
        stats: driver.stats,
        trace: driver.trace,
    })
}

/// Approximate Descartes with pseudo-admissible bisection, no Newton steps.
#[derive(Debug, Clone, Copy, Default)]
pub struct ADsc;

impl IsolationStrategy for ADsc {
    fn name(&self) -> &str {
        "adsc"
    }

    fn isolate(
        &self,
        oracle: &dyn CoefficientOracle,
        region: Option<(Dyadic, Dyadic)>,
        cfg: &SolveConfig,
    ) -> Result<IsolationResult, SolveError> {
        run_approximate(oracle, region, cfg, false)
    }
}

/// ADsc with Newton steps, delayed Newton and degree truncation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ANewDsc;

impl IsolationStrategy for ANewDsc {
    fn name(&self) -> &str {
        "anewdsc"
    }

    fn isolate(
        &self,
        oracle: &dyn CoefficientOracle,
        region: Option<(Dyadic, Dyadic)>,
        cfg: &SolveConfig,
    ) -> Result<IsolationResult, SolveError> {
        run_approximate(oracle, region, cfg, true)
    }
}

/// Strategies by name.
#[derive(Clone, Default)]
pub struct StrategyRegistry {
    entries: BTreeMap<String, Arc<dyn IsolationStrategy>>,
}

impl StrategyRegistry {
    pub fn new() -> Self {
        StrategyRegistry::default()
    }

    pub fn with_defaults() -> Self {
        let mut r = StrategyRegistry::new();
        r.register(ClassicDescartes);
        r.register(ADsc);
        r.register(ANewDsc);
        r
    }

    /// Adds a strategy, replacing any previous one of the same name.
    pub fn register<S: IsolationStrategy + 'static>(&mut self, strategy: S) {
        self.entries.insert(strategy.name().to_string(), Arc::new(strategy));
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn IsolationStrategy>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl std::fmt::Debug for StrategyRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
