//! Exact real root counting with Sturm sequences over the integers.

use anewdsc::Dyadic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("degree {degree} exceeds the oracle cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("zero or constant polynomial")]
    Degenerate,
}

/// Sturm sequence of a square-free integer polynomial, each member primitive.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    seq: Vec<Vec<BigInt>>,
}

fn trim(c: &mut Vec<BigInt>) {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn is_zero_poly(c: &[BigInt]) -> bool {
    c.iter().all(Zero::is_zero)
}

fn primitive(c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return c;
    }
    c.into_iter().map(|x| x / &g).collect()
}

/// Remainder of `lc(b)^s a` by `b`, with the number of steps `s` taken.
fn prem(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, usize) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut steps = 0;
    while r.len() > db && !is_zero_poly(&r) {
        steps += 1;
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bi;
        }
        r.pop();
        trim(&mut r);
    }
    (r, steps)
}

impl SturmSequence {
    pub fn new(p: &[BigInt], cap: usize) -> Result<Self, OracleError> {
        let mut p0 = p.to_vec();
        trim(&mut p0);
        if p0.len() < 2 {
            return Err(OracleError::Degenerate);
        }
        let degree = p0.len() - 1;
        if degree > cap {
            return Err(OracleError::DegreeCap { degree, cap });
        }
        let p1: Vec<BigInt> = p0.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        let mut seq = vec![primitive(p0), primitive(p1)];
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.len() == 1 {
                break;
            }
            let (mut r, steps) = prem(a, b);
            if is_zero_poly(&r) {
                return Err(OracleError::NotSquareFree);
            }
            // r carries the factor lc(b)^steps; the sequence needs -rem up to a positive factor
            let flip = b.last().unwrap().is_negative() && steps % 2 == 1;
            if !flip {
                r = r.into_iter().map(|x| -x).collect();
            }
            seq.push(primitive(r));
        }
        Ok(SturmSequence { seq })
    }

    /// Sign variations of the sequence at `x`, zeros skipped.
    fn variations(&self, x: &Dyadic) -> usize {
        let mut count = 0;
        let mut last = 0;
        for f in &self.seq {
            let s = sign_at(f, x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    pub fn count(&self, a: &Dyadic, b: &Dyadic) -> usize {
        if a >= b {
            return 0;
        }
        let at_b = usize::from(sign_at(&self.seq[0], b) == 0);
        self.variations(a) - self.variations(b) - at_b
    }
}

/// Sign of `f(x)` by homogenized exact evaluation.
pub fn sign_at(f: &[BigInt], x: &Dyadic) -> i32 {
    let (num, den) = x.to_fraction();
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in f.iter().rev() {
        acc = acc * &num + c * &den_pow;
        den_pow *= &den;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Roots of `p` in `(a, b)`.
pub fn sturm_count(p: &[BigInt], a: &Dyadic, b: &Dyadic) -> Result<usize, OracleError> {
    Ok(SturmSequence::new(p, DEFAULT_DEGREE_CAP)?.count(a, b))
}

/// Outcome of checking an isolation result against the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub oracle_count: usize,
    pub ok: bool,
    pub problems: Vec<String>,
}

/// Checks that the intervals are sorted, disjoint and isolating, that every
/// point is an exact root, and that nothing in `(lo, hi)` is missed.
pub fn verify(
    p: &[BigInt],
    lo: &Dyadic,
    hi: &Dyadic,
    intervals: &[(Dyadic, Dyadic)],
    points: &[Dyadic],
    cap: usize,
) -> Result<Verification, OracleError> {
    let s = SturmSequence::new(p, cap)?;
    let oracle_count = s.count(lo, hi);
    let mut problems = Vec::new();
    for w in intervals.windows(2) {
        if w[0].1 > w[1].0 {
            problems.push(format!("({}, {}) overlaps ({}, {})", w[0].0, w[0].1, w[1].0, w[1].1));
        }
    }
    for (a, b) in intervals {
        let c = s.count(a, b);
        if c != 1 {
            problems.push(format!("({a}, {b}) holds {c} roots"));
        }
        if a < lo || b > hi {
            problems.push(format!("({a}, {b}) leaves the region"));
        }
    }
    for x in points {
        if sign_at(p, x) != 0 {
            problems.push(format!("{x} is not a root"));
        }
    }
    let reported = intervals.len() + points.len();
    if reported != oracle_count {
        problems.push(format!("{reported} roots reported, oracle counts {oracle_count}"));
    }
    Ok(Verification {
        oracle_count,
        ok: problems.is_empty(),
        problems,
    })
}
