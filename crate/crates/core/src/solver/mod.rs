//! Subdivision driver.
//!
//! Three strategies share this module: exact classic Descartes with midpoint
//! splits, ADsc (approximate arithmetic, pseudo-admissible bisection points)
//! and ANewDsc (ADsc plus Newton steps and degree truncation). Strategies are
//! looked up by name in a [`StrategyRegistry`].

mod classic;
mod driver;
mod strategy;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::newton::SuccessKind;
use crate::poly::{CoefficientOracle, PolyError};
use crate::predicates::TestOutcome;

pub use strategy::{ADsc, ANewDsc, ClassicDescartes, IsolationStrategy, StrategyRegistry};

/// Which solver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Classic,
    Adsc,
    ANewDsc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Classic => "classic",
            Mode::Adsc => "adsc",
            Mode::ANewDsc => "anewdsc",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classic" => Ok(Mode::Classic),
            "adsc" => Ok(Mode::Adsc),
            "anewdsc" => Ok(Mode::ANewDsc),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Subdivision point selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Admissibility {
    #[default]
    Pseudo,
    Deterministic,
}

impl Admissibility {
    pub fn name(self) -> &'static str {
        match self {
            Admissibility::Pseudo => "pseudo",
            Admissibility::Deterministic => "deterministic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub mode: Mode,
    pub seed: u64,
    pub initial_prec: u64,
    pub prec_cap: u64,
    /// Minimum distance to the last proper split before Newton is tried;
    /// `None` means `ceil(log2 n)`.
    pub newton_delay_threshold: Option<u32>,
    pub truncation: bool,
    pub admissible: Admissibility,
    /// Abort once this many tree nodes were processed.
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    pub record_trace: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::ANewDsc,
            seed: 0,
            initial_prec: 63,
            prec_cap: 1 << 20,
            newton_delay_threshold: None,
            truncation: true,
            admissible: Admissibility::Pseudo,
            max_nodes: None,
            timeout: None,
            record_trace: false,
        }
    }
}

impl SolveConfig {
    pub fn with_mode(mode: Mode) -> Self {
        SolveConfig {
            mode,
            ..SolveConfig::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub tree_nodes: u64,
    pub newton_attempts: u64,
    /// Successful Newton-Tests of either kind.
    pub newton_successes: u64,
    /// The part of `newton_successes` obtained by the boundary test.
    pub boundary_successes: u64,
    pub bisections: u64,
    pub max_precision_bits: u64,
    /// Longest root-to-leaf run of consecutive nodes with the same variation range.
    pub max_var_chain: u64,
    /// Nodes decided by a truncated test.
    pub truncation_hits: u64,
    pub wall_time: Duration,
}

/// What the driver did with a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeAction {
    Discard,
    Report,
    /// A Newton step succeeded; the node was replaced by a subinterval.
    Newton(SuccessKind),
    /// Newton was tried, failed, and the node was bisected.
    NewtonFailedBisect,
    Bisect,
    /// Classic mode: the midpoint is a root.
    PointRoot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub a: Dyadic,
    pub b: Dyadic,
    pub log_n: u64,
    pub prec_bits: u64,
    pub outcome: TestOutcome,
    pub var_min: usize,
    pub var_max: usize,
    pub action: NodeAction,
}

#[derive(Debug, Clone)]
pub struct IsolationResult {
    /// Disjoint open isolating intervals, sorted.
    pub intervals: Vec<(Dyadic, Dyadic)>,
    /// Exactly found roots (classic mode only), sorted.
    pub points: Vec<Dyadic>,
    pub stats: SolveStats,
    pub trace: Vec<TraceEvent>,
}

impl IsolationResult {
    pub fn root_count(&self) -> usize {
        self.intervals.len() + self.points.len()
    }
}

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("precision cap of {bits} bits reached on ({a}, {b}); input is probably not square-free")]
    NonSquareFreeSuspected { a: Dyadic, b: Dyadic, bits: u64 },
    #[error("region endpoint {0} could not be certified to be a non-root")]
    RegionEndpointRoot(Dyadic),
    #[error("invalid region: {0} is not below {1}")]
    InvalidRegion(Dyadic, Dyadic),
    #[error("classic mode needs exactly known coefficients")]
    BitstreamRejected,
    #[error("polynomial has degree 0")]
    ConstantPolynomial,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("node budget exhausted after {} nodes", .0.tree_nodes)]
    BudgetExceeded(Box<SolveStats>),
    #[error("timed out after {:.1} s", .0.wall_time.as_secs_f64())]
    Timeout(Box<SolveStats>),
}

impl SolveError {
    /// Statistics gathered before an aborted run stopped.
    pub fn partial_stats(&self) -> Option<&SolveStats> {
        match self {
            SolveError::BudgetExceeded(s) | SolveError::Timeout(s) => Some(s),
            _ => None,
        }
    }
}

/// Isolate the real roots of `oracle` in `region` (default: a root bound).
pub fn isolate(
    oracle: &dyn CoefficientOracle,
    region: Option<(Dyadic, Dyadic)>,
    cfg: &SolveConfig,
) -> Result<IsolationResult, SolveError> {
    let registry = StrategyRegistry::with_defaults();
    let strategy = registry
        .get(cfg.mode.name())
        .expect("default registry knows every mode");
    strategy.isolate(oracle, region, cfg)
}

/// `ceil(log2 n)`, at least 1.
pub fn default_delay(n: usize) -> u32 {
    let n = n.max(2) as u64;
    64 - (n - 1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ExactPolynomial;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m, e)
    }

    fn sign_change(p: &ExactPolynomial, a: &Dyadic, b: &Dyadic) -> bool {
        p.eval(a).signum() * p.eval(b).signum() < 0
    }

    #[test]
    fn sqrt_two_pair() {
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        for mode in [Mode::Classic, Mode::Adsc, Mode::ANewDsc] {
            let r = isolate(&p, Some((d(-2, 0), d(2, 0))), &SolveConfig::with_mode(mode)).unwrap();
            assert_eq!(r.intervals.len(), 2, "{mode}");
            assert!(r.points.is_empty());
            for (a, b) in &r.intervals {
                assert!(sign_change(&p, a, b));
            }
            assert!(r.intervals[0].1 <= r.intervals[1].0);
        }
    }

    #[test]
    fn no_real_roots() {
        let p = ExactPolynomial::from_ints(&[1, 0, 1]);
        let r = isolate(&p, Some((d(-10, 0), d(10, 0))), &SolveConfig::default()).unwrap();
        assert_eq!(r.root_count(), 0);
        assert!(r.stats.tree_nodes >= 1);
    }

    #[test]
    fn classic_reports_midpoint_root() {
        let p = ExactPolynomial::from_ints(&[0, -1, 0, 1]);
        let r = isolate(&p, Some((d(-2, 0), d(2, 0))), &SolveConfig::with_mode(Mode::Classic)).unwrap();
        assert_eq!(r.points, vec![Dyadic::zero()]);
        assert_eq!(r.intervals.len(), 2);
        let r = isolate(&p, Some((d(-2, 0), d(2, 0))), &SolveConfig::default()).unwrap();
        assert_eq!(r.intervals.len(), 3);
    }

    #[test]
    fn classic_single_interval() {
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        let r = isolate(&p, Some((d(0, 0), d(2, 0))), &SolveConfig::with_mode(Mode::Classic)).unwrap();
        assert_eq!(r.intervals.len(), 1);
    }

    #[test]
    fn endpoint_root_is_rejected() {
        let p = ExactPolynomial::from_ints(&[-1, 1]);
        let err = isolate(&p, Some((d(1, 0), d(2, 0))), &SolveConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::RegionEndpointRoot(_)));
        let err = isolate(&p, Some((d(2, 0), d(1, 0))), &SolveConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::InvalidRegion(..)));
    }

    #[test]
    fn double_root_hits_the_cap() {
        let p = ExactPolynomial::from_ints(&[1, -2, 1]);
        let cfg = SolveConfig {
            prec_cap: 600,
            ..SolveConfig::default()
        };
        let err = isolate(&p, Some((d(0, 0), d(3, 0))), &cfg).unwrap_err();
        assert!(matches!(err, SolveError::NonSquareFreeSuspected { .. }), "{err}");
    }

    #[test]
    fn node_budget_aborts() {
        let p = ExactPolynomial::from_ints(&[0, -1, 0, 1]);
        let cfg = SolveConfig {
            max_nodes: Some(1),
            ..SolveConfig::default()
        };
        let err = isolate(&p, None, &cfg).unwrap_err();
        assert_eq!(err.partial_stats().unwrap().tree_nodes, 2);
    }

    #[test]
    fn same_seed_same_result() {
        let p = ExactPolynomial::from_roots(&[d(1, -3), d(3, -3), d(-7, -1), d(5, 0)]);
        let cfg = SolveConfig {
            seed: 9,
            record_trace: true,
            ..SolveConfig::default()
        };
        let r1 = isolate(&p, None, &cfg).unwrap();
        let r2 = isolate(&p, None, &cfg).unwrap();
        assert_eq!(r1.intervals, r2.intervals);
        assert_eq!(r1.trace, r2.trace);
        assert_eq!(r1.intervals.len(), 4);
    }

    #[test]
    fn adsc_never_tries_newton() {
        let p = ExactPolynomial::from_roots(&[d(1, -3), d(3, -3), d(-7, -1)]);
        let r = isolate(&p, None, &SolveConfig::with_mode(Mode::Adsc)).unwrap();
        assert_eq!(r.stats.newton_attempts, 0);
        assert_eq!(r.intervals.len(), 3);
    }

    #[test]
    fn registry_lookup() {
        let reg = StrategyRegistry::with_defaults();
        assert_eq!(reg.names().collect::<Vec<_>>(), ["adsc", "anewdsc", "classic"]);
        assert_eq!(reg.get("anewdsc").unwrap().name(), "anewdsc");
        assert!(reg.get("rs").is_none());
    }

    #[test]
    fn delay_default() {
        assert_eq!(default_delay(2), 1);
        assert_eq!(default_delay(64), 6);
        assert_eq!(default_delay(129), 8);
    }
}
