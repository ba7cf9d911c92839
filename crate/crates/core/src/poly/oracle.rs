//! Coefficient oracles: exact dyadic polynomials and "bitstream" polynomials
//! whose coefficients are only available through refinable approximations.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Signed;

use super::IntervalPoly;
use crate::dyadic::{ratio_enclosure, Dyadic, Enclosure, Precision, Round};

/// Source of coefficient approximations for a univariate polynomial
/// `p_0 + p_1 x + ... + p_n x^n`.
///
/// `coefficient(i, prec)` must return an enclosure of `p_i` of width at most
/// `2^(1 - prec)`; enclosures for increasing precision are nested. Exact
/// oracles return points at every precision.
pub trait CoefficientOracle: Send + Sync {
    fn degree(&self) -> usize;

    fn coefficient(&self, i: usize, prec: Precision) -> Enclosure;

    fn is_exact(&self) -> bool;

    /// All coefficients, if every one of them is an exact dyadic.
    fn exact_coefficients(&self) -> Option<Vec<Dyadic>> {
        None
    }
}

/// Polynomial with exactly known dyadic coefficients (lowest degree first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<Dyadic>,
}

impl ExactPolynomial {
    /// Trailing zero coefficients of highest degree are stripped.
    pub fn new(mut coeffs: Vec<Dyadic>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Dyadic::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Dyadic::zero());
        }
        ExactPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        ExactPolynomial::new(coeffs.iter().map(|&c| Dyadic::from(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        ExactPolynomial::new(coeffs.iter().map(Dyadic::from).collect())
    }

    /// Monic product of `(x - r)` over the given dyadic roots.
    pub fn from_roots(roots: &[Dyadic]) -> Self {
        let mut c = vec![Dyadic::one()];
        for r in roots {
            let mut next = vec![Dyadic::zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] = next[i + 1].add(ci);
                next[i] = next[i].sub(&ci.mul(r));
            }
            c = next;
        }
        ExactPolynomial::new(c)
    }

    pub fn coeffs(&self) -> &[Dyadic] {
        &self.coeffs
    }

    pub fn mul(&self, other: &ExactPolynomial) -> ExactPolynomial {
        let mut out = vec![Dyadic::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        ExactPolynomial::new(out)
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        self.coeffs
            .iter()
            .rev()
            .fold(Dyadic::zero(), |acc, c| acc.mul(x).add(c))
    }
}

impl CoefficientOracle for ExactPolynomial {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn coefficient(&self, i: usize, _prec: Precision) -> Enclosure {
        Enclosure::point(self.coeffs[i].clone())
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn exact_coefficients(&self) -> Option<Vec<Dyadic>> {
        Some(self.coeffs.clone())
    }
}

/// A single approximable coefficient.
pub trait CoefficientSource: Send + Sync {
    /// Enclosure of width at most `2^(1 - prec)`, nested in `prec`.
    fn enclose(&self, prec: Precision) -> Enclosure;

    fn exact(&self) -> Option<Dyadic> {
        None
    }
}

impl CoefficientSource for Dyadic {
    fn enclose(&self, _prec: Precision) -> Enclosure {
        Enclosure::point(self.clone())
    }

    fn exact(&self) -> Option<Dyadic> {
        Some(self.clone())
    }
}

/// A finite decimal `num / den` (`den` a power of ten) that is not dyadic.
#[derive(Debug, Clone)]
pub struct DecimalRational {
    num: BigInt,
    den: BigInt,
}

impl DecimalRational {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(den.is_positive());
        DecimalRational { num, den }
    }

    /// Parse `[-]digits[.digits]`.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
        if (int_part.is_empty() && frac.is_empty())
            || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let mut num: BigInt = format!("0{int_part}{frac}").parse().ok()?;
        if neg {
            num = -num;
        }
        Some(DecimalRational::new(num, BigInt::from(10).pow(frac.len() as u32)))
    }
}

impl CoefficientSource for DecimalRational {
    fn enclose(&self, prec: Precision) -> Enclosure {
        ratio_enclosure(&self.num, &self.den, frac_bits(prec))
    }
}

fn frac_bits(prec: Precision) -> i64 {
    prec.get().min(1 << 40) as i64
}

/// A real number delivered as a decimal expansion that is generated and
/// truncated on demand.
///
/// The generator receives a digit count `d` and must return the value
/// truncated toward zero after `d` fractional digits, e.g. `"3.1415"` for
/// `d = 4`. The true value then lies in `[t, t + 10^-d]` (or `[t - 10^-d, t]`
/// for negative values).
pub struct DecimalDigits {
    generator: Box<dyn Fn(usize) -> String + Send + Sync>,
    negative: bool,
    cache: Mutex<HashMap<usize, String>>,
    requests: Mutex<Vec<usize>>,
}

impl DecimalDigits {
    pub fn new(negative: bool, generator: impl Fn(usize) -> String + Send + Sync + 'static) -> Self {
        DecimalDigits {
            generator: Box::new(generator),
            negative,
            cache: Mutex::new(HashMap::new()),
            requests: Mutex::new(Vec::new()),
        }
    }

    /// Digit counts requested so far, in request order.
    pub fn requested_digits(&self) -> Vec<usize> {
        self.requests.lock().unwrap().clone()
    }

    fn digits(&self, d: usize) -> String {
        let mut cache = self.cache.lock().unwrap();
        cache
            .entry(d)
            .or_insert_with(|| {
                self.requests.lock().unwrap().push(d);
                (self.generator)(d)
            })
            .clone()
    }
}

impl CoefficientSource for DecimalDigits {
    fn enclose(&self, prec: Precision) -> Enclosure {
        // 10^-d <= 2^-(prec + 1)
        let fb = frac_bits(prec);
        let d = ((fb + 1) as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let text = self.digits(d);
        let t = DecimalRational::parse(&text).expect("digit generator produced a malformed decimal");
        let ulp = BigInt::from(10).pow(d as u32);
        let scaled_num = &t.num * (&ulp / &t.den);
        let (lo_num, hi_num) = if self.negative || scaled_num.is_negative() {
            (&scaled_num - 1, scaled_num.clone())
        } else {
            (scaled_num.clone(), &scaled_num + 1)
        };
        let lo = ratio_enclosure(&lo_num, &ulp, fb + 1);
        let hi = ratio_enclosure(&hi_num, &ulp, fb + 1);
        Enclosure::new(lo.lo().clone(), hi.hi().clone())
    }
}

/// Coefficient computed by an arbitrary closure.
pub struct FnSource<F>(pub F);

impl<F> CoefficientSource for FnSource<F>
where
    F: Fn(Precision) -> Enclosure + Send + Sync,
{
    fn enclose(&self, prec: Precision) -> Enclosure {
        (self.0)(prec)
    }
}

/// Polynomial with independently approximable coefficients.
pub struct BitstreamPolynomial {
    sources: Vec<Box<dyn CoefficientSource>>,
}

impl BitstreamPolynomial {
    pub fn new(sources: Vec<Box<dyn CoefficientSource>>) -> Self {
        assert!(!sources.is_empty());
        BitstreamPolynomial { sources }
    }
}

impl CoefficientOracle for BitstreamPolynomial {
    fn degree(&self) -> usize {
        self.sources.len() - 1
    }

    fn coefficient(&self, i: usize, prec: Precision) -> Enclosure {
        self.sources[i].enclose(prec)
    }

    fn is_exact(&self) -> bool {
        self.sources.iter().all(|s| s.exact().is_some())
    }

    fn exact_coefficients(&self) -> Option<Vec<Dyadic>> {
        self.sources.iter().map(|s| s.exact()).collect()
    }
}

/// Per-precision cache of the input polynomial and its derivative, with
/// coefficients rounded outward to the working precision.
///
/// Not `Sync`: one cache per solve.
pub struct OracleCache<'a> {
    oracle: &'a dyn CoefficientOracle,
    polys: RefCell<HashMap<Precision, Arc<IntervalPoly>>>,
    derivs: RefCell<HashMap<Precision, Arc<IntervalPoly>>>,
}

impl<'a> OracleCache<'a> {
    pub fn new(oracle: &'a dyn CoefficientOracle) -> Self {
        OracleCache {
            oracle,
            polys: RefCell::new(HashMap::new()),
            derivs: RefCell::new(HashMap::new()),
        }
    }

    pub fn oracle(&self) -> &'a dyn CoefficientOracle {
        self.oracle
    }

    pub fn degree(&self) -> usize {
        self.oracle.degree()
    }

    /// Coefficient enclosures at `prec`.
    pub fn poly(&self, prec: Precision) -> Arc<IntervalPoly> {
        if let Some(p) = self.polys.borrow().get(&prec) {
            return p.clone();
        }
        let n = self.oracle.degree();
        let coeffs = (0..=n)
            .map(|i| {
                let c = self.oracle.coefficient(i, prec);
                Enclosure::new(
                    c.lo().round(prec, Round::Down),
                    c.hi().round(prec, Round::Up),
                )
            })
            .collect();
        let p = Arc::new(IntervalPoly::new(coeffs));
        self.polys.borrow_mut().insert(prec, p.clone());
        p
    }

    pub fn derivative(&self, prec: Precision) -> Arc<IntervalPoly> {
        if let Some(p) = self.derivs.borrow().get(&prec) {
            return p.clone();
        }
        let d = Arc::new(self.poly(prec).derivative());
        self.derivs.borrow_mut().insert(prec, d.clone());
        d
    }
}
