use std::collections::HashMap;
use std::time::Instant;

use super::{NodeAction, SolveConfig, SolveError, SolveStats, TraceEvent};
use crate::dyadic::{Dyadic, Precision};
use crate::newton::{newton_test, NewtonInput, NewtonOutcome, SuccessKind};
use crate::points::{Admissible, PointSelector, PseudoAdmissible, RandomSource};
use crate::poly::{root_bound, OracleCache, SignVarRange};
use crate::predicates::{proper_split_check, zero_one_test, TestContext, TestOutcome, TestReport};

use super::Admissibility;

pub(super) fn selector_for(kind: Admissibility) -> &'static dyn PointSelector {
    match kind {
        Admissibility::Pseudo => &PseudoAdmissible,
        Admissibility::Deterministic => &Admissible,
    }
}

/// The region to search: the given one with certified non-root endpoints, or
/// `(-B, B)` for a power-of-two root bound `B`.
pub(super) fn resolve_region(
    src: &OracleCache<'_>,
    region: Option<(Dyadic, Dyadic)>,
    prec_cap: u64,
) -> Result<(Dyadic, Dyadic), SolveError> {
    let Some((a, b)) = region else {
        let bound = root_bound(src.oracle(), prec_cap)?;
        return Ok((bound.neg(), bound));
    };
    if a >= b {
        return Err(SolveError::InvalidRegion(a, b));
    }
    for x in [&a, &b] {
        if !certify_nonzero(src, x, prec_cap) {
            return Err(SolveError::RegionEndpointRoot(x.clone()));
        }
    }
    Ok((a, b))
}

fn certify_nonzero(src: &OracleCache<'_>, x: &Dyadic, prec_cap: u64) -> bool {
    if src.oracle().is_exact() {
        return !src.poly(Precision::EXACT).eval(x, Precision::EXACT).contains_zero();
    }
    Precision::escalation(prec_cap).any(|p| !src.poly(p).eval(x, p).contains_zero())
}

struct Node {
    a: Dyadic,
    b: Dyadic,
    log_n: u64,
    prec: Precision,
    k_trunc: Option<usize>,
    /// Distance to the last proper split at `N = 4`; `None` if there was none.
    d_proper: Option<u32>,
    chain: u64,
    parent_range: Option<SignVarRange>,
}

type CacheKey = (Dyadic, Dyadic, Precision, Option<usize>);

/// ADsc / ANewDsc main loop.
pub(super) struct Driver<'s, 'o> {
    src: &'s OracleCache<'o>,
    cfg: &'s SolveConfig,
    newton: bool,
    selector: &'static dyn PointSelector,
    rng: RandomSource,
    delay: u32,
    /// Test outcomes for the whole solve, keyed by interval, precision and
    /// truncation order.
    cache: HashMap<CacheKey, TestReport>,
    pub stats: SolveStats,
    pub trace: Vec<TraceEvent>,
    start: Instant,
}

impl<'s, 'o> Driver<'s, 'o> {
    pub fn new(src: &'s OracleCache<'o>, cfg: &'s SolveConfig, newton: bool) -> Self {
        Driver {
            src,
            cfg,
            newton,
            selector: selector_for(cfg.admissible),
            rng: RandomSource::new(cfg.seed),
            delay: cfg
                .newton_delay_threshold
                .unwrap_or_else(|| super::default_delay(src.degree())),
            cache: HashMap::new(),
            stats: SolveStats::default(),
            trace: Vec::new(),
            start: Instant::now(),
        }
    }

    fn test(&mut self, a: &Dyadic, b: &Dyadic, ctx: TestContext) -> TestReport {
        let key = (a.clone(), b.clone(), ctx.prec, ctx.k);
        if let Some(r) = self.cache.get(&key) {
            return *r;
        }
        let r = zero_one_test(self.src, a, b, ctx);
        self.cache.insert(key, r);
        r
    }

    fn check_budget(&mut self) -> Result<(), SolveError> {
        if self.cfg.max_nodes.is_some_and(|m| self.stats.tree_nodes > m) {
            self.stats.wall_time = self.start.elapsed();
            return Err(SolveError::BudgetExceeded(Box::new(self.stats.clone())));
        }
        if self.cfg.timeout.is_some_and(|t| self.start.elapsed() > t) {
            self.stats.wall_time = self.start.elapsed();
            return Err(SolveError::Timeout(Box::new(self.stats.clone())));
        }
        Ok(())
    }

    fn record(&mut self, node: &Node, report: &TestReport, action: NodeAction) {
        if self.cfg.record_trace {
            self.trace.push(TraceEvent {
                a: node.a.clone(),
                b: node.b.clone(),
                log_n: node.log_n,
                prec_bits: node.prec.get(),
                outcome: report.outcome,
                var_min: report.range.min,
                var_max: report.range.max,
                action,
            });
        }
    }

    pub fn run(&mut self, a: Dyadic, b: Dyadic) -> Result<Vec<(Dyadic, Dyadic)>, SolveError> {
        let initial = Precision::bits(self.cfg.initial_prec.max(2));
        let mut found = Vec::new();
        let mut stack = vec![Node {
            a,
            b,
            log_n: 2,
            prec: initial,
            k_trunc: None,
            d_proper: None,
            chain: 0,
            parent_range: None,
        }];
        while let Some(mut node) = stack.pop() {
            self.stats.tree_nodes += 1;
            self.check_budget()?;

            let mut report = self.test(&node.a, &node.b, self.ctx(&node));
            while report.is_inconclusive() {
                node.prec = node.prec.next();
                if node.prec.get() > self.cfg.prec_cap {
                    return Err(SolveError::NonSquareFreeSuspected {
                        a: node.a,
                        b: node.b,
                        bits: self.cfg.prec_cap,
                    });
                }
                report = self.test(&node.a, &node.b, self.ctx(&node));
            }
            self.stats.max_precision_bits = self.stats.max_precision_bits.max(node.prec.get());
            if report.truncation.is_some() {
                self.stats.truncation_hits += 1;
            }
            if node.k_trunc.is_some() {
                node.k_trunc = report.truncation;
            }
            node.chain = if node.parent_range == Some(report.range) {
                node.chain + 1
            } else {
                1
            };
            self.stats.max_var_chain = self.stats.max_var_chain.max(node.chain);

            match report.outcome {
                TestOutcome::Zero => {
                    self.record(&node, &report, NodeAction::Discard);
                    continue;
                }
                TestOutcome::One => {
                    self.record(&node, &report, NodeAction::Report);
                    found.push((node.a.clone(), node.b.clone()));
                    continue;
                }
                TestOutcome::Unknown => {}
            }

            let newton_allowed = self.newton && node.d_proper.is_none_or(|d| d >= self.delay);
            if newton_allowed {
                self.stats.newton_attempts += 1;
                let input = NewtonInput {
                    a: &node.a,
                    b: &node.b,
                    log_n: node.log_n,
                    ctx: self.ctx(&node),
                    var_upper: report.range.max,
                    prec_cap: self.cfg.prec_cap,
                };
                let run = newton_test(self.src, &input, self.selector, &mut self.rng)
                    .map_err(|e| self.point_error(&node, e))?;
                if let NewtonOutcome::Success { a, b, k_guess, kind, prec } = run.outcome {
                    self.stats.newton_successes += 1;
                    if kind == SuccessKind::Boundary {
                        self.stats.boundary_successes += 1;
                    }
                    self.record(&node, &report, NodeAction::Newton(kind));
                    let k_trunc = self.cfg.truncation.then_some(k_guess).filter(|&k| k < self.src.degree());
                    stack.push(Node {
                        a,
                        b,
                        log_n: node.log_n * 2,
                        prec: node.prec.max(prec),
                        k_trunc,
                        d_proper: node.d_proper.map(|d| d + 1),
                        chain: node.chain,
                        parent_range: Some(report.range),
                    });
                    continue;
                }
            }

            self.stats.bisections += 1;
            let action = if newton_allowed {
                NodeAction::NewtonFailedBisect
            } else {
                NodeAction::Bisect
            };
            self.record(&node, &report, action);
            let w = node.b.sub(&node.a);
            let mid = Dyadic::midpoint(&node.a, &node.b);
            let (m, _) = self
                .selector
                .select(self.src, &mid, &w.mul_pow2(-3), &mut self.rng, self.cfg.prec_cap)
                .map_err(|e| self.point_error(&node, e))?;
            let ctx = self.ctx(&node);
            let left = self.test(&node.a, &m, ctx);
            let right = self.test(&m, &node.b, ctx);
            let proper = proper_split_check(left.range, right.range);
            let d_proper = if proper && node.log_n == 2 {
                Some(0)
            } else {
                node.d_proper.map(|d| d + 1)
            };
            let log_n = (node.log_n / 2).max(2);
            for (a, b) in [(m.clone(), node.b.clone()), (node.a.clone(), m)] {
                stack.push(Node {
                    a,
                    b,
                    log_n,
                    prec: node.prec,
                    k_trunc: node.k_trunc,
                    d_proper,
                    chain: node.chain,
                    parent_range: Some(report.range),
                });
            }
        }
        self.stats.wall_time = self.start.elapsed();
        found.sort();
        Ok(found)
    }

    fn ctx(&self, node: &Node) -> TestContext {
        TestContext {
            prec: node.prec,
            k: node.k_trunc,
        }
    }

    fn point_error(&self, node: &Node, _e: crate::points::PointError) -> SolveError {
        SolveError::NonSquareFreeSuspected {
            a: node.a.clone(),
            b: node.b.clone(),
            bits: self.cfg.prec_cap,
        }
    }
}
