use std::time::Instant;

use super::{NodeAction, SolveConfig, SolveError, SolveStats, TraceEvent};
use crate::dyadic::{Dyadic, Precision};
use crate::poly::OracleCache;
use crate::predicates::{var_test, TestOutcome};

/// Textbook Descartes method in exact arithmetic with midpoint splits.
pub(super) fn run_classic(
    src: &OracleCache<'_>,
    a: Dyadic,
    b: Dyadic,
    cfg: &SolveConfig,
) -> Result<(Vec<(Dyadic, Dyadic)>, Vec<Dyadic>, SolveStats, Vec<TraceEvent>), SolveError> {
    let start = Instant::now();
    let exact = Precision::EXACT;
    let p = src.poly(exact);
    let mut stats = SolveStats::default();
    let mut trace = Vec::new();
    let mut intervals = Vec::new();
    let mut points = Vec::new();
    let mut stack = vec![(a, b, None)];
    while let Some((a, b, parent)) = stack.pop() {
        stats.tree_nodes += 1;
        if cfg.max_nodes.is_some_and(|m| stats.tree_nodes > m) {
            stats.wall_time = start.elapsed();
            return Err(SolveError::BudgetExceeded(Box::new(stats)));
        }
        if cfg.timeout.is_some_and(|t| start.elapsed() > t) {
            stats.wall_time = start.elapsed();
            return Err(SolveError::Timeout(Box::new(stats)));
        }
        let (outcome, range) = var_test(src, &a, &b, exact);
        let chain = match parent {
            Some((r, c)) if r == range => c + 1,
            _ => 1,
        };
        stats.max_var_chain = stats.max_var_chain.max(chain);
        let action = match outcome {
            TestOutcome::Zero => NodeAction::Discard,
            TestOutcome::One => NodeAction::Report,
            TestOutcome::Unknown => {
                let m = Dyadic::midpoint(&a, &b);
                stats.bisections += 1;
                let action = if p.eval(&m, exact).contains_zero() {
                    points.push(m.clone());
                    NodeAction::PointRoot
                } else {
                    NodeAction::Bisect
                };
                stack.push((m.clone(), b.clone(), Some((range, chain))));
                stack.push((a.clone(), m, Some((range, chain))));
                action
            }
        };
        if outcome == TestOutcome::One {
            intervals.push((a.clone(), b.clone()));
        }
        if cfg.record_trace {
            trace.push(TraceEvent {
                a,
                b,
                log_n: 2,
                prec_bits: 0,
                outcome,
                var_min: range.min,
                var_max: range.max,
                action,
            });
        }
    }
    intervals.sort();
    points.sort();
    stats.wall_time = start.elapsed();
    Ok((intervals, points, stats, trace))
}
