//! Certified real root isolation for univariate polynomials with exact or
//! approximable coefficients.
//!
//! The solver subdivides an interval using Descartes' rule of signs in
//! approximate interval arithmetic, and accelerates convergence towards root
//! clusters with Newton steps.
//!
//! ```
//! use anewdsc::{isolate, ExactPolynomial, SolveConfig};
//!
//! let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
//! let res = isolate(&p, None, &SolveConfig::default()).unwrap();
//! assert_eq!(res.intervals.len(), 2);
//! assert!(res.intervals[0].1 <= res.intervals[1].0);
//! ```

pub mod dyadic;
pub mod newton;
pub mod points;
pub mod poly;
pub mod predicates;
pub mod solver;

pub use dyadic::{Dyadic, Enclosure, Precision};
pub use poly::{BitstreamPolynomial, CoefficientOracle, CoefficientSource, ExactPolynomial};
pub use solver::{
    isolate, Admissibility, IsolationResult, IsolationStrategy, Mode, SolveConfig, SolveError, SolveStats,
    StrategyRegistry,
};
