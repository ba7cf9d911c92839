//! Newton-Test with Boundary test.
//!
//! `N_I` always has the form `2^(2^l)` and is handled through its base-2
//! logarithm (`log_n`), so quadratic growth of `N_I` never creates huge
//! integers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::dyadic::{Dyadic, Enclosure, Precision};
use crate::points::{PointError, PointSelector, RandomSource};
use crate::poly::OracleCache;
use crate::predicates::{truncated_test, var_test, zero_one_test, TestContext, TestOutcome};

/// How a successful Newton-Test obtained its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuccessKind {
    Newton,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NewtonOutcome {
    Failure,
    Success {
        a: Dyadic,
        b: Dyadic,
        k_guess: usize,
        kind: SuccessKind,
        /// Precision at which the flanks were certified root-free.
        prec: Precision,
    },
}

impl NewtonOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, NewtonOutcome::Success { .. })
    }
}

/// Why a point pair did not produce a candidate interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    /// `v_i - v_j` (or an evaluation) could not be separated from zero.
    Degenerate,
    /// `lambda~` not resolved to the required tolerance.
    Imprecise,
    /// `lambda~` lies outside `I`.
    Outside,
    /// A flank of the candidate cell was not certified root-free.
    FlankNotEmpty,
    Accepted,
}

/// Newton-Test result together with the per-pair trace.
#[derive(Debug, Clone)]
pub struct NewtonRun {
    pub outcome: NewtonOutcome,
    pub pairs: Vec<((usize, usize), PairVerdict)>,
}

/// Extra precision doublings for evaluating the Newton corrections.
pub const LOCAL_ESCALATIONS: usize = 4;

/// Parameters of one Newton-Test invocation.
pub struct NewtonInput<'a> {
    pub a: &'a Dyadic,
    pub b: &'a Dyadic,
    /// `log2 N_I`; a power of two, at least 2.
    pub log_n: u64,
    /// Context for the 01-tests on the flanks (the node's precision and truncation).
    pub ctx: TestContext,
    /// Upper bound on the number of roots in `I` (for clamping `k_guess`).
    pub var_upper: usize,
    pub prec_cap: u64,
}

/// Run the Newton-Test on `(a, b)`.
///
/// The corrections `P/P'` are re-evaluated at up to [`LOCAL_ESCALATIONS`]
/// doublings of precision until the extrapolation meets its tolerance; pairs
/// that still fail are discarded. The node's own precision is not changed.
pub fn newton_test(
    src: &OracleCache<'_>,
    input: &NewtonInput<'_>,
    selector: &dyn PointSelector,
    rng: &mut RandomSource,
) -> Result<NewtonRun, PointError> {
    let (a, b) = (input.a, input.b);
    assert!(a < b, "empty interval");
    assert!(input.log_n >= 2);
    let n = src.degree();
    let w = b.sub(a);
    let log_n = input.log_n as i64;
    let cell = w.mul_pow2(-log_n - 2); // w / (4N)
    let mut pairs = Vec::new();

    // (1) sample points
    let mut xs = Vec::with_capacity(3);
    let mut base = input.ctx.prec;
    for j in 1..=3i64 {
        let xi = a.add(&w.mul_int(&BigInt::from(j)).mul_pow2(-2));
        let (x, used) = selector.select(src, &xi, &w.mul_pow2(-4), rng, input.prec_cap)?;
        base = base.max(used);
        xs.push(x);
    }
    // Newton corrections P/P' at the sample points, computed lazily per precision
    let mut corrections: Vec<(Precision, Vec<Option<Enclosure>>)> = Vec::new();
    let mut correction = |prec: Precision| -> Vec<Option<Enclosure>> {
        if let Some((_, v)) = corrections.iter().find(|(p, _)| *p == prec) {
            return v.clone();
        }
        let v: Vec<_> = xs
            .iter()
            .map(|x| {
                let p = src.poly(prec).eval(x, prec);
                let dp = src.derivative(prec).eval(x, prec);
                p.div(&dp, prec).ok()
            })
            .collect();
        corrections.push((prec, v.clone()));
        v
    };

    // (2) extrapolate from each pair
    let tol = w.mul_pow2(-log_n - 4); // enclosure width w / (16N): midpoint within w / (32N)
    let four_n = BigInt::from(1) << (input.log_n + 2);
    let start = base.max(Precision::bits((input.log_n + 8 + w.top().unsigned_abs()).max(63)));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (xi, xj) = (&xs[i], &xs[j]);
        let mut prec = start;
        let mut verdict = PairVerdict::Degenerate;
        let mut extrapolated = None;
        for _ in 0..=LOCAL_ESCALATIONS {
            if prec.get() > input.prec_cap && prec != start {
                break;
            }
            let v = correction(prec);
            let (Some(vi), Some(vj)) = (&v[i], &v[j]) else {
                verdict = PairVerdict::Degenerate;
                prec = prec.next();
                continue;
            };
            let den = vi.sub(vj, prec);
            let Ok(k) = Enclosure::point(xj.sub(xi)).div(&den, prec) else {
                verdict = PairVerdict::Degenerate;
                prec = prec.next();
                continue;
            };
            let lambda = Enclosure::point(xi.clone()).add(&k.mul(vi, prec), prec);
            if lambda.width() > tol {
                verdict = PairVerdict::Imprecise;
                prec = prec.next();
                continue;
            }
            extrapolated = Some((k, lambda));
            break;
        }
        let Some((k, lambda)) = extrapolated else {
            pairs.push(((i + 1, j + 1), verdict));
            continue;
        };
        let lam = lambda.mid();
        if &lam < a || &lam > b {
            pairs.push(((i + 1, j + 1), PairVerdict::Outside));
            continue;
        }
        let ell = lam.sub(a).floor_div(&cell);
        let lo_idx = (&ell - BigInt::from(1)).max(BigInt::from(0));
        let hi_idx = (&ell + BigInt::from(2)).min(four_n.clone());
        let aij = a.add(&cell.mul_int(&lo_idx));
        let bij = a.add(&cell.mul_int(&hi_idx));
        let delta = w.mul_pow2(-log_n - 5);
        let a_star = if &aij == a {
            a.clone()
        } else {
            selector.select(src, &aij, &delta, rng, input.prec_cap)?.0
        };
        let b_star = if &bij == b {
            b.clone()
        } else {
            selector.select(src, &bij, &delta, rng, input.prec_cap)?.0
        };
        let left = flank_is_empty(src, a, &a_star, input.ctx, input.prec_cap);
        let right = left.and_then(|_| flank_is_empty(src, &b_star, b, input.ctx, input.prec_cap));
        if let (Some(pl), Some(pr)) = (left, right) {
            pairs.push(((i + 1, j + 1), PairVerdict::Accepted));
            // k~ approximates minus the cluster size: lambda = xi - k P/P'
            let k_guess = round_guess(&k.mid().neg(), n, input.var_upper);
            return Ok(NewtonRun {
                outcome: NewtonOutcome::Success {
                    a: a_star,
                    b: b_star,
                    k_guess,
                    kind: SuccessKind::Newton,
                    prec: pl.max(pr),
                },
                pairs,
            });
        }
        pairs.push(((i + 1, j + 1), PairVerdict::FlankNotEmpty));
    }

    // (3) boundary test
    let offset = w.mul_pow2(-log_n - 1);
    let delta = w.mul_pow2(-log_n - 5);
    let k_guess = input.var_upper.clamp(1, n.max(1));
    let m_l = selector.select(src, &a.add(&offset), &delta, rng, input.prec_cap)?.0;
    if let Some(prec) = flank_is_empty(src, &m_l, b, input.ctx, input.prec_cap) {
        return Ok(NewtonRun {
            outcome: NewtonOutcome::Success {
                a: a.clone(),
                b: m_l,
                k_guess,
                kind: SuccessKind::Boundary,
                prec,
            },
            pairs,
        });
    }
    let m_r = selector.select(src, &b.sub(&offset), &delta, rng, input.prec_cap)?.0;
    if let Some(prec) = flank_is_empty(src, a, &m_r, input.ctx, input.prec_cap) {
        return Ok(NewtonRun {
            outcome: NewtonOutcome::Success {
                a: m_r,
                b: b.clone(),
                k_guess,
                kind: SuccessKind::Boundary,
                prec,
            },
            pairs,
        });
    }
    Ok(NewtonRun {
        outcome: NewtonOutcome::Failure,
        pairs,
    })
}

/// `Some(prec)` if `(lo, hi)` is certified root-free at `prec`.
///
/// Results that leave room for zero variations are retried at higher
/// precision with the truncation order fixed; only if that never decides is
/// the order doubled, at the original precision.
fn flank_is_empty(
    src: &OracleCache<'_>,
    lo: &Dyadic,
    hi: &Dyadic,
    ctx: TestContext,
    prec_cap: u64,
) -> Option<Precision> {
    if lo >= hi {
        return Some(ctx.prec);
    }
    let n = src.degree();
    let mut at = ctx.prec;
    for _ in 0..=LOCAL_ESCALATIONS {
        let (outcome, range) = match ctx.k {
            Some(k) if k < n => truncated_test(src, lo, hi, k, at),
            _ => var_test(src, lo, hi, at),
        };
        if outcome == TestOutcome::Zero {
            return Some(at);
        }
        if range.min > 0 || at.next().get() > prec_cap {
            return None;
        }
        at = at.next();
    }
    if ctx.k.is_some_and(|k| k < n) && zero_one_test(src, lo, hi, ctx).outcome == TestOutcome::Zero {
        return Some(ctx.prec);
    }
    None
}

fn round_guess(k: &Dyadic, n: usize, var_upper: usize) -> usize {
    let r = k.add(&Dyadic::new(1, -1)).floor();
    let r = if r.is_negative() { 0 } else { r.to_usize().unwrap_or(usize::MAX) };
    r.clamp(1, n.max(1)).min(var_upper.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::PseudoAdmissible;
    use crate::poly::ExactPolynomial;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m, e)
    }

    fn run(p: &ExactPolynomial, a: Dyadic, b: Dyadic, log_n: u64, seed: u64) -> NewtonRun {
        let src = OracleCache::new(p);
        let input = NewtonInput {
            a: &a,
            b: &b,
            log_n,
            ctx: TestContext::full(Precision::INITIAL),
            var_upper: p.coeffs().len() - 1,
            prec_cap: 1 << 16,
        };
        newton_test(&src, &input, &PseudoAdmissible, &mut RandomSource::new(seed)).unwrap()
    }

    #[test]
    fn tight_pair_converges() {
        let r1 = d(1, -2);
        let r2 = r1.add(&d(1, -24));
        let p = ExactPolynomial::from_roots(&[r1.clone(), r2.clone()]);
        for seed in 0..10 {
            let run = run(&p, Dyadic::zero(), Dyadic::one(), 2, seed);
            let NewtonOutcome::Success { a, b, k_guess, kind, .. } = run.outcome else {
                panic!("expected success, trace {:?}", run.pairs);
            };
            assert_eq!(kind, SuccessKind::Newton);
            assert!(a < r1 && r2 < b);
            let w = b.sub(&a);
            assert!(w >= d(1, -5) && w <= d(1, -2), "width {w}");
            assert_eq!(k_guess, 2);
        }
    }

    #[test]
    fn spread_roots_fail() {
        let p = ExactPolynomial::from_ints(&[40320, -109584, 118124, -67284, 22449, -4536, 546, -36, 1]);
        let run = run(&p, Dyadic::zero(), Dyadic::from(9), 2, 0);
        assert_eq!(run.outcome, NewtonOutcome::Failure);
    }

    #[test]
    fn cluster_at_left_endpoint() {
        let r1 = d(1, -10);
        let r2 = r1.add(&d(1, -30));
        let p = ExactPolynomial::from_roots(&[r1.clone(), r2.clone()]);
        for seed in 0..10 {
            let run = run(&p, Dyadic::zero(), Dyadic::one(), 2, seed);
            let NewtonOutcome::Success { a, b, .. } = run.outcome else {
                panic!("expected success");
            };
            assert!(a < r1 && r2 < b);
            // N w'/w within the contract
            let ratio = b.sub(&a).mul_pow2(2);
            assert!(ratio >= d(1, -3) && ratio <= Dyadic::one(), "ratio {ratio}");
        }
    }

    #[test]
    fn boundary_when_pairs_are_useless() {
        // a root very close to the right end, a second far away on the left:
        // extrapolation from the samples points somewhere in between
        let p = ExactPolynomial::from_roots(&[d(-5, 0), d(1023, -10)]);
        let run = run(&p, Dyadic::zero(), Dyadic::one(), 2, 3);
        if let NewtonOutcome::Success { a, b, .. } = run.outcome {
            assert!(a < d(1023, -10) && d(1023, -10) < b);
        }
    }

    #[test]
    fn rounding_of_guess() {
        assert_eq!(round_guess(&d(5, -1), 10, 10), 3);
        assert_eq!(round_guess(&d(-3, 0), 10, 10), 1);
        assert_eq!(round_guess(&d(40, 0), 10, 10), 10);
        assert_eq!(round_guess(&d(4, 0), 10, 2), 2);
    }
}
