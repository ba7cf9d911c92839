//! Root-counting predicates on intervals: the interval sign-variation test,
//! its degree-truncated variant, the combined 0/1 test, and the proper-split
//! classifier used by the delayed-Newton heuristic.

use crate::dyadic::{Dyadic, Precision};
use crate::poly::{sign_variations, IntervalPoly, LocalExpansion, OracleCache, SignVarRange};

/// Outcome of a 0/1 test on an interval.
///
/// `Zero` certifies that the interval holds no root, `One` that it holds
/// exactly one simple root. `Unknown` carries no claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestOutcome {
    Zero,
    One,
    Unknown,
}

/// Working context for a 0/1 test: precision and optional truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestContext {
    pub prec: Precision,
    /// `None` runs the full sign-variation test directly.
    pub k: Option<usize>,
}

impl TestContext {
    pub fn full(prec: Precision) -> Self {
        TestContext { prec, k: None }
    }

    pub fn truncated(prec: Precision, k: usize) -> Self {
        TestContext { prec, k: Some(k) }
    }
}

/// Result of [`zero_one_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestReport {
    pub outcome: TestOutcome,
    pub range: SignVarRange,
    /// Truncation order that produced the outcome; `None` for the full test.
    pub truncation: Option<usize>,
}

impl TestReport {
    /// The test cannot even separate `{0, 1}` from larger counts; the caller
    /// must raise the precision.
    pub fn is_inconclusive(&self) -> bool {
        self.outcome == TestOutcome::Unknown && self.range.min < 2
    }
}

/// Every coefficient may be zero, so the zero polynomial is a selection and
/// no root count follows from the variations.
fn may_vanish(f: &IntervalPoly) -> bool {
    f.coeffs().iter().all(|c| c.contains_zero())
}

fn classify(f: &IntervalPoly, range: SignVarRange) -> TestOutcome {
    if may_vanish(f) {
        return TestOutcome::Unknown;
    }
    match (range.min, range.max) {
        (0, 0) => TestOutcome::Zero,
        (1, 1) => TestOutcome::One,
        _ => TestOutcome::Unknown,
    }
}

/// Interval sign-variation test on the full Descartes transform.
pub fn var_test(src: &OracleCache<'_>, a: &Dyadic, b: &Dyadic, prec: Precision) -> (TestOutcome, SignVarRange) {
    full_test(&mut LocalExpansion::new(src, a, b, prec), prec)
}

fn full_test(exp: &mut LocalExpansion, prec: Precision) -> (TestOutcome, SignVarRange) {
    let t = exp.full().scale_reverse_shift1(prec);
    let range = sign_variations(&t);
    (classify(&t, range), range)
}

/// Sign-variation test on the degree-`k` truncation of the local polynomial.
///
/// `Zero` iff `var(G) = {0}`; `One` iff `var(G) = {1}` and `var(H) = {0}`,
/// with `G = (x+1)^k Q~(1/(x+1))` and `H = (x+1)^(k-1) Q~'(1/(x+1))`. For
/// `k >= n` there is no remainder term and this coincides with [`var_test`].
/// The returned range is that of `G`.
pub fn truncated_test(
    src: &OracleCache<'_>,
    a: &Dyadic,
    b: &Dyadic,
    k: usize,
    prec: Precision,
) -> (TestOutcome, SignVarRange) {
    truncated_step(&mut LocalExpansion::new(src, a, b, prec), k, prec)
}

fn truncated_step(exp: &mut LocalExpansion, k: usize, prec: Precision) -> (TestOutcome, SignVarRange) {
    if k >= exp.degree() {
        return full_test(exp, prec);
    }
    let q = exp.truncated(k);
    let gt = q.scale_reverse_shift1(prec);
    let g = sign_variations(&gt);
    let outcome = match classify(&gt, g) {
        TestOutcome::One => {
            let ht = q.derivative().scale_reverse_shift1(prec);
            if classify(&ht, sign_variations(&ht)) == TestOutcome::Zero {
                TestOutcome::One
            } else {
                TestOutcome::Unknown
            }
        }
        other => other,
    };
    (outcome, g)
}

/// Combined 0/1 test.
///
/// With a truncation order in `ctx`, runs [`truncated_test`] and doubles the
/// order on inconclusive results until it reaches the degree, then falls back
/// to [`var_test`]. Never changes the precision.
pub fn zero_one_test(src: &OracleCache<'_>, a: &Dyadic, b: &Dyadic, ctx: TestContext) -> TestReport {
    let n = src.degree();
    let mut exp = LocalExpansion::new(src, a, b, ctx.prec);
    if let Some(mut k) = ctx.k {
        while k < n {
            let (outcome, range) = truncated_step(&mut exp, k, ctx.prec);
            let report = TestReport {
                outcome,
                range,
                truncation: Some(k),
            };
            if outcome != TestOutcome::Unknown || range.min >= 2 {
                return report;
            }
            k = k.saturating_mul(2);
        }
    }
    let (outcome, range) = full_test(&mut exp, ctx.prec);
    TestReport {
        outcome,
        range,
        truncation: None,
    }
}

/// A bisection is proper when both children keep a nonzero variation count.
/// Ranges straddling zero count as not proper.
pub fn proper_split_check(left: SignVarRange, right: SignVarRange) -> bool {
    left.min >= 1 && right.min >= 1
}
