//! Interval-coefficient polynomials and the transforms consumed by the
//! Descartes-type predicates.
//!
//! For an interval `I = (a, b)` of width `w = b - a` the pipeline is
//!
//! ```text
//! P(x)  --shift by a-->  P(x + a)  --scale by w-->  Q_I(x) = P(a + w x)
//!       --reverse, shift by 1-->  P_I(x) = (x + 1)^n P((a x + b) / (x + 1))
//! ```
//!
//! and Descartes' rule of signs bounds the number of roots of `P` in `I` by
//! the sign variations of `P_I`.

mod ball;
mod oracle;

pub use oracle::{
    BitstreamPolynomial, CoefficientOracle, CoefficientSource, DecimalDigits, DecimalRational,
    ExactPolynomial, FnSource, OracleCache,
};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::dyadic::{Dyadic, Enclosure, Precision, Round, SignClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("leading coefficient cannot be separated from zero up to {0} bits")]
    DegenerateLeading(u64),
}

/// Polynomial with [`Enclosure`] coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalPoly {
    coeffs: Vec<Enclosure>,
}

impl std::fmt::Debug for IntervalPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Range `{v_min, ..., v_max}` of possible sign-variation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVarRange {
    pub min: usize,
    pub max: usize,
}

impl SignVarRange {
    pub fn exact(v: usize) -> Self {
        SignVarRange { min: v, max: v }
    }

    pub fn is_determined(&self) -> bool {
        self.min == self.max
    }

    pub fn contains(&self, v: usize) -> bool {
        self.min <= v && v <= self.max
    }
}

impl IntervalPoly {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<Enclosure>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        IntervalPoly { coeffs }
    }

    pub fn from_dyadics(coeffs: &[Dyadic]) -> Self {
        IntervalPoly::new(coeffs.iter().cloned().map(Enclosure::point).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        IntervalPoly::new(coeffs.iter().map(|&c| Enclosure::from_int(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Enclosure] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Enclosure {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Enclosure> {
        self.coeffs
    }

    /// Every exact coefficient lies in the corresponding enclosure; missing
    /// entries are treated as zero on either side.
    pub fn contains_coeffs(&self, exact: &[Dyadic]) -> bool {
        let zero = Enclosure::zero();
        let z = Dyadic::zero();
        (0..self.coeffs.len().max(exact.len()))
            .all(|i| self.coeffs.get(i).unwrap_or(&zero).contains(exact.get(i).unwrap_or(&z)))
    }

    pub fn reversed(&self) -> IntervalPoly {
        IntervalPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Enclosure of `f(x + c)` by the classical quadratic synthetic-division scheme.
    pub fn taylor_shift(&self, c: &Dyadic, prec: Precision) -> IntervalPoly {
        let mut a = self.coeffs.clone();
        let k = a.len();
        shift_passes(&mut a, c, 0, k, prec);
        IntervalPoly::new(a)
    }

    /// Enclosure of `f(s x)`; powers of `s` are formed once.
    pub fn scale(&self, s: &Dyadic, prec: Precision) -> IntervalPoly {
        IntervalPoly::new(scale_coeffs(self.coeffs.clone(), s, prec))
    }

    /// Enclosure of `(x + 1)^n f(1 / (x + 1))`: coefficient reversal
    /// followed by a shift by one.
    pub fn scale_reverse_shift1(&self, prec: Precision) -> IntervalPoly {
        self.reversed().taylor_shift(&Dyadic::one(), prec)
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, x: &Dyadic, prec: Precision) -> Enclosure {
        if !prec.is_exact() {
            return ball::eval_ball(&self.coeffs, x, prec);
        }
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next().cloned().unwrap_or_else(Enclosure::zero);
        for c in it {
            acc = acc.mul_dyadic(x, prec).add(c, prec);
        }
        acc
    }

    /// Horner evaluation over an interval argument.
    pub fn eval_iv(&self, x: &Enclosure, prec: Precision) -> Enclosure {
        if !prec.is_exact() {
            return ball::eval_iv_ball(&self.coeffs, x, prec);
        }
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next().cloned().unwrap_or_else(Enclosure::zero);
        for c in it {
            acc = acc.mul(x, prec).add(c, prec);
        }
        acc
    }

    /// Exact coefficient-wise derivative; a constant maps to the zero constant.
    pub fn derivative(&self) -> IntervalPoly {
        if self.degree() == 0 {
            return IntervalPoly::new(vec![Enclosure::zero()]);
        }
        IntervalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let k = Dyadic::from(i as i64);
                    c.mul_dyadic(&k, Precision::EXACT)
                })
                .collect(),
        )
    }

    /// Coefficients of `f^(k)(x) / k!`, exactly.
    pub fn scaled_derivative(&self, k: usize) -> IntervalPoly {
        let n = self.degree();
        if k > n {
            return IntervalPoly::new(vec![Enclosure::zero()]);
        }
        let mut binom = BigInt::one();
        let mut out = Vec::with_capacity(n - k + 1);
        // binom = C(j, k) for j = k, k+1, ...
        for j in k..=n {
            if j > k {
                binom = binom * BigInt::from(j) / BigInt::from(j - k);
            }
            out.push(self.coeffs[j].mul_dyadic(&Dyadic::from(binom.clone()), Precision::EXACT));
        }
        IntervalPoly::new(out)
    }
}

/// Runs outer passes `from..to` of the synthetic Taylor shift by `c`; after
/// pass `k - 1`, `a[0..k]` hold the final coefficients of `f(x + c)`.
fn shift_passes(a: &mut [Enclosure], c: &Dyadic, from: usize, to: usize, prec: Precision) {
    let n = a.len() - 1;
    if c.is_zero() {
        return;
    }
    if !prec.is_exact() {
        return ball::shift_passes_ball(a, c, from, to, prec);
    }
    let unit = c == &Dyadic::one();
    for i in from..to.min(n) {
        for j in (i..n).rev() {
            let t = if unit {
                a[j + 1].clone()
            } else {
                a[j + 1].mul_dyadic(c, prec)
            };
            a[j] = a[j].add(&t, prec);
        }
    }
}

fn scale_coeffs(mut coeffs: Vec<Enclosure>, s: &Dyadic, prec: Precision) -> Vec<Enclosure> {
    if s.mantissa().is_one() {
        // power of two: exact exponent shift
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = c.mul_pow2(s.exponent() * i as i64);
        }
        return coeffs;
    }
    let powers = powers_of(s, coeffs.len(), prec);
    for (c, p) in coeffs.iter_mut().zip(&powers).skip(1) {
        *c = c.mul(p, prec);
    }
    coeffs
}

/// `[1, s, s^2, ...]` (`count` entries) as outward-rounded enclosures.
pub fn powers_of(s: &Dyadic, count: usize, prec: Precision) -> Vec<Enclosure> {
    let mut out = Vec::with_capacity(count);
    let mut acc = Enclosure::from_int(1);
    for _ in 0..count {
        out.push(acc.clone());
        acc = acc.mul_dyadic(s, prec);
    }
    out
}

/// Enclosure of `Q_I(x) = P(a + w x)` at precision `prec`.
pub fn local_poly(src: &OracleCache<'_>, a: &Dyadic, b: &Dyadic, prec: Precision) -> IntervalPoly {
    LocalExpansion::new(src, a, b, prec).full()
}

/// Enclosure of the Descartes transform `P_I(x) = (x + 1)^n P((a x + b) / (x + 1))`,
/// computed fresh from the source coefficients at `prec`.
pub fn descartes_transform(src: &OracleCache<'_>, a: &Dyadic, b: &Dyadic, prec: Precision) -> IntervalPoly {
    debug_assert!(a < b);
    local_poly(src, a, b, prec).scale_reverse_shift1(prec)
}

/// Degree-`k` truncation of `Q_I` with a Lagrange remainder coefficient:
/// `q_0 + ... + q_{k-1} x^{k-1} + [r] x^k`, where
/// `[r]` contains `P^(k)(xi) / k! * (b - a)^k` for every `xi` in `[a, b]`.
///
/// Only the `k` lowest Taylor coefficients at `a` are computed (cost `O(nk)`).
/// For `k >= n` this is the full `Q_I`.
pub fn truncated_local_poly(
    src: &OracleCache<'_>,
    a: &Dyadic,
    b: &Dyadic,
    k: usize,
    prec: Precision,
) -> IntervalPoly {
    LocalExpansion::new(src, a, b, prec).truncated(k)
}

/// Taylor expansion of `P` at `a`, computed lazily: asking for a longer
/// truncation continues the synthetic division where the last one stopped.
pub struct LocalExpansion {
    poly: std::sync::Arc<IntervalPoly>,
    a: Dyadic,
    b: Dyadic,
    prec: Precision,
    shifted: Vec<Enclosure>,
    passes: usize,
}

impl LocalExpansion {
    pub fn new(src: &OracleCache<'_>, a: &Dyadic, b: &Dyadic, prec: Precision) -> Self {
        let poly = src.poly(prec);
        let shifted = poly.coeffs().to_vec();
        LocalExpansion {
            poly,
            a: a.clone(),
            b: b.clone(),
            prec,
            shifted,
            passes: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    fn advance(&mut self, k: usize) {
        let k = k.min(self.degree());
        if k > self.passes {
            shift_passes(&mut self.shifted, &self.a, self.passes, k, self.prec);
            self.passes = k;
        }
    }

    /// `Q_I` truncated after degree `k - 1` plus the remainder coefficient;
    /// the full `Q_I` for `k >= n`.
    pub fn truncated(&mut self, k: usize) -> IntervalPoly {
        assert!(k >= 1, "truncation order must be positive");
        let n = self.degree();
        if k >= n {
            return self.full();
        }
        self.advance(k);
        let mut head = self.shifted[..k].to_vec();
        let x = Enclosure::new(self.a.clone(), self.b.clone());
        head.push(self.poly.scaled_derivative(k).eval_iv(&x, self.prec));
        IntervalPoly::new(scale_coeffs(head, &self.b.sub(&self.a), self.prec))
    }

    pub fn full(&mut self) -> IntervalPoly {
        self.advance(self.degree());
        IntervalPoly::new(scale_coeffs(self.shifted.clone(), &self.b.sub(&self.a), self.prec))
    }
}

/// Min and max of `var(g)` over all exact `g` in `f`; zero coefficients are
/// skipped and a coefficient straddling zero may take any sign.
pub fn sign_variations(f: &IntervalPoly) -> SignVarRange {
    // state: last nonzero sign (none, +, -) -> (min, max) variations so far
    const POS: usize = 1;
    const NEG: usize = 2;
    let mut st: [Option<(usize, usize)>; 3] = [Some((0, 0)), None, None];
    for c in f.coeffs() {
        let (can_neg, can_zero, can_pos) = match c.sign() {
            SignClass::Negative => (true, false, false),
            SignClass::Positive => (false, false, true),
            SignClass::Zero => (false, true, false),
            SignClass::Unknown => (
                c.lo().is_negative(),
                true,
                c.hi().is_positive(),
            ),
        };
        let mut next: [Option<(usize, usize)>; 3] = [None, None, None];
        let mut merge = |slot: usize, v: (usize, usize)| {
            next[slot] = Some(match next[slot] {
                None => v,
                Some((lo, hi)) => (lo.min(v.0), hi.max(v.1)),
            });
        };
        for (from, cur) in st.iter().enumerate() {
            let Some((lo, hi)) = *cur else { continue };
            if can_zero {
                merge(from, (lo, hi));
            }
            if can_pos {
                let step = usize::from(from == NEG);
                merge(POS, (lo + step, hi + step));
            }
            if can_neg {
                let step = usize::from(from == POS);
                merge(NEG, (lo + step, hi + step));
            }
        }
        st = next;
    }
    let mut lo = usize::MAX;
    let mut hi = 0;
    for (l, h) in st.iter().flatten() {
        lo = lo.min(*l);
        hi = hi.max(*h);
    }
    SignVarRange { min: lo, max: hi }
}

/// A power of two `B` strictly greater than `1 + max_{i<n} |p_i| / |p_n|`;
/// every real root lies in `(-B, B)`.
pub fn cauchy_root_bound(oracle: &dyn CoefficientOracle, prec_cap: u64) -> Result<Dyadic, PolyError> {
    let n = oracle.degree();
    for prec in Precision::escalation(prec_cap) {
        let lead = oracle.coefficient(n, prec);
        if lead.contains_zero() {
            continue;
        }
        let lead_mag = lead.mag_lower();
        let mut ratio = Dyadic::zero();
        for i in 0..n {
            let c = oracle.coefficient(i, prec).mag_upper();
            let q = c
                .div_round(&lead_mag, prec, Round::Up)
                .expect("leading magnitude is nonzero");
            if q > ratio {
                ratio = q;
            }
        }
        let bound = ratio.add(&Dyadic::one());
        // smallest power of two strictly above `bound`
        let mut k = bound.top() - 1;
        while Dyadic::pow2(k) <= bound {
            k += 1;
        }
        return Ok(Dyadic::pow2(k));
    }
    Err(PolyError::DegenerateLeading(prec_cap))
}

/// Power-of-two bound `2^(1 + max_i ceil(log2 |p_(n-i) / p_n| / i))` on the
/// absolute values of all complex roots. Often far below the Cauchy bound when
/// the coefficients are large.
pub fn fujiwara_root_bound(oracle: &dyn CoefficientOracle, prec_cap: u64) -> Result<Dyadic, PolyError> {
    let n = oracle.degree();
    for prec in Precision::escalation(prec_cap) {
        let lead = oracle.coefficient(n, prec);
        if lead.contains_zero() {
            continue;
        }
        // |p_n| >= 2^(t - 1)
        let lead_low = lead.mag_lower().top() - 1;
        let mut e = 0i64;
        for i in 1..=n {
            let c = oracle.coefficient(n - i, prec).mag_upper();
            if c.is_zero() {
                continue;
            }
            let diff = c.top() - lead_low;
            e = e.max(diff.div_euclid(i as i64) + i64::from(diff.rem_euclid(i as i64) != 0));
        }
        return Ok(Dyadic::pow2(e + 1));
    }
    Err(PolyError::DegenerateLeading(prec_cap))
}

/// The smaller of the Cauchy and Fujiwara bounds.
pub fn root_bound(oracle: &dyn CoefficientOracle, prec_cap: u64) -> Result<Dyadic, PolyError> {
    let c = cauchy_root_bound(oracle, prec_cap)?;
    let f = fujiwara_root_bound(oracle, prec_cap)?;
    Ok(c.min(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Enclosure {
        Enclosure::new(Dyadic::from(lo), Dyadic::from(hi))
    }

    fn ints(v: &[i64]) -> Vec<Dyadic> {
        v.iter().map(|&c| Dyadic::from(c)).collect()
    }

    const P: Precision = Precision::INITIAL;

    #[test]
    fn taylor_shift_examples() {
        let f = IntervalPoly::from_ints(&[0, 0, 1]);
        assert!(f.taylor_shift(&Dyadic::one(), P).contains_coeffs(&ints(&[1, 2, 1])));
        let g = IntervalPoly::from_ints(&[2, -3, 1]);
        assert!(g.taylor_shift(&Dyadic::one(), P).contains_coeffs(&ints(&[0, -1, 1])));
    }

    #[test]
    fn scale_reverse_shift_examples() {
        let q = IntervalPoly::from_ints(&[2, -9, 9]);
        assert!(q.scale_reverse_shift1(P).contains_coeffs(&ints(&[2, -5, 2])));
        let x = IntervalPoly::from_ints(&[0, 1]);
        // (x + 1) * 1/(x + 1) = 1, kept at formal degree 1
        assert!(x.scale_reverse_shift1(P).contains_coeffs(&ints(&[1, 0])));
        let c = IntervalPoly::from_ints(&[5]);
        assert!(c.scale_reverse_shift1(P).contains_coeffs(&ints(&[5])));
    }

    #[test]
    fn descartes_transform_examples() {
        let p = ExactPolynomial::from_ints(&[2, -3, 1]);
        let src = OracleCache::new(&p);
        let t = descartes_transform(&src, &Dyadic::zero(), &Dyadic::one(), P);
        assert!(t.contains_coeffs(&ints(&[0, 1, 2])));
        assert_eq!(sign_variations(&t), SignVarRange::exact(0));
        let t = descartes_transform(&src, &Dyadic::zero(), &Dyadic::from(3), P);
        assert!(t.contains_coeffs(&ints(&[2, -5, 2])));
        assert_eq!(sign_variations(&t), SignVarRange::exact(2));
        let x = ExactPolynomial::from_ints(&[0, 1]);
        let src = OracleCache::new(&x);
        let t = descartes_transform(&src, &Dyadic::from(-1), &Dyadic::one(), P);
        assert_eq!(sign_variations(&t), SignVarRange::exact(1));
    }

    #[test]
    fn sign_variation_examples() {
        assert_eq!(
            sign_variations(&IntervalPoly::from_ints(&[2, 1, 0])),
            SignVarRange::exact(0)
        );
        assert_eq!(
            sign_variations(&IntervalPoly::from_ints(&[1, -1, 1])),
            SignVarRange::exact(2)
        );
        let f = IntervalPoly::new(vec![iv(1, 1), iv(-1, 1), iv(1, 1)]);
        assert_eq!(sign_variations(&f), SignVarRange { min: 0, max: 2 });
        // an unresolved coefficient between opposite signs does not matter
        let g = IntervalPoly::new(vec![iv(-1, -1), iv(-1, 1), iv(1, 1)]);
        assert_eq!(sign_variations(&g), SignVarRange::exact(1));
    }

    #[test]
    fn evaluation_examples() {
        let f = IntervalPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(f.eval(&Dyadic::one(), P), Enclosure::from_int(-1));
        let r = f.eval_iv(&iv(1, 2), P);
        assert!(iv(-1, 2).subset_of(&r));
    }

    #[test]
    fn derivative_examples() {
        let d = IntervalPoly::from_ints(&[0, 0, 0, 1]).derivative();
        assert!(d.contains_coeffs(&ints(&[0, 0, 3])));
        let d = IntervalPoly::from_ints(&[5]).derivative();
        assert_eq!(d.degree(), 0);
        assert!(d.contains_coeffs(&ints(&[0])));
        let d = IntervalPoly::from_ints(&[2, -3, 1]).derivative();
        assert_eq!(d, IntervalPoly::from_ints(&[-3, 2]));
    }

    #[test]
    fn scaled_derivative_is_taylor_coefficient() {
        // (x^5)'' / 2 = 10 x^3
        let f = IntervalPoly::from_ints(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(f.scaled_derivative(2), IntervalPoly::from_ints(&[0, 0, 0, 10]));
    }

    #[test]
    fn truncation_with_full_order_is_local_poly() {
        let p = ExactPolynomial::from_ints(&[-1, 6, -9, 0, 0, 1]);
        let src = OracleCache::new(&p);
        let a = Dyadic::new(1, -2);
        let b = Dyadic::new(1, -1);
        let full = local_poly(&src, &a, &b, P);
        assert_eq!(truncated_local_poly(&src, &a, &b, 5, P), full);
    }

    #[test]
    fn cauchy_bound_examples() {
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        assert_eq!(cauchy_root_bound(&p, 1 << 20).unwrap(), Dyadic::from(4));
        let p = ExactPolynomial::from_ints(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(cauchy_root_bound(&p, 1 << 20).unwrap(), Dyadic::from(2));
    }

    #[test]
    fn degenerate_leading_coefficient() {
        let src = FnSource(|_p: Precision| Enclosure::new(Dyadic::from(-1), Dyadic::one()));
        let p = BitstreamPolynomial::new(vec![Box::new(Dyadic::one()), Box::new(src)]);
        assert_eq!(cauchy_root_bound(&p, 200), Err(PolyError::DegenerateLeading(200)));
    }

    #[test]
    fn fujiwara_is_tight_for_big_coefficients() {
        // x^8 - (2^32 x - 1)^2
        let a = BigInt::from(1u64 << 32);
        let mut c = vec![BigInt::from(-1), &a * 2, -(&a * &a)];
        c.resize(8, BigInt::from(0));
        c.push(BigInt::from(1));
        let p = ExactPolynomial::from_bigints(&c);
        let cauchy = cauchy_root_bound(&p, 1 << 10).unwrap();
        let b = root_bound(&p, 1 << 10).unwrap();
        assert_eq!(cauchy, Dyadic::pow2(65));
        assert!(b <= Dyadic::pow2(12), "{b}");
        // the largest real root is near 2^(64/6)
        assert!(p.eval(&b).signum() > 0 && p.eval(&b.neg()).signum() > 0);
    }

    #[test]
    fn root_bound_small_cases() {
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        assert_eq!(root_bound(&p, 1 << 10).unwrap(), Dyadic::from(4));
        let p = ExactPolynomial::from_ints(&[0, 0, 0, 0, 0, 1]);
        assert_eq!(root_bound(&p, 1 << 10).unwrap(), Dyadic::from(2));
    }
}
