//! Midpoint-radius form of the synthetic Taylor shift.
//!
//! Interval endpoints cost two multiplications per step; a midpoint with a
//! radius held as a short float costs one.

use num_traits::{Signed, ToPrimitive};

use crate::dyadic::{Dyadic, Enclosure, Precision, Round};

/// Nonnegative upper bound `m * 2^e` with `m` in `[1/2, 1)` or zero. Every
/// operation rounds up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Mag {
    m: f64,
    e: i64,
}

const FUDGE: f64 = 1.0 + 1.0 / (1u64 << 50) as f64;

fn frexp(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (frac, exp - 1022)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    fn norm(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        let (f, k) = frexp(m);
        Mag { m: f, e: e + k }
    }

    pub fn pow2(k: i64) -> Mag {
        Mag { m: 0.5, e: k + 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    /// Upper bound on `|x|`.
    pub fn from_dyadic(x: &Dyadic) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let mant = x.mantissa().abs();
        let b = mant.bits() as i64;
        let (top, shift) = if b > 52 {
            ((&mant >> (b - 52) as usize) + 1u32, b - 52)
        } else {
            (mant, 0)
        };
        let v = top.to_f64().expect("at most 53 bits");
        Mag::norm(v, x.exponent() + shift)
    }

    /// Exact conversion.
    pub fn to_dyadic(self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let int = (self.m * (1u64 << 53) as f64) as i64;
        Dyadic::new(int, self.e - 53)
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 60 {
            return Mag::norm(big.m * (1.0 + 1.0 / (1u64 << 48) as f64), big.e);
        }
        let s = big.m + small.m * (-(d as f64)).exp2();
        Mag::norm(s * FUDGE, big.e)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Mag::norm(self.m * o.m * FUDGE, self.e + o.e)
    }
}

fn split(x: &Enclosure, prec: Precision) -> (Dyadic, Mag) {
    if x.is_point() {
        let m = x.lo().round(prec, Round::Down);
        let r = Mag::from_dyadic(&x.lo().sub(&m));
        return (m, r);
    }
    let mid = Dyadic::midpoint(x.lo(), x.hi()).round(prec, Round::Down);
    let r = x.hi().sub(&mid).max(mid.sub(x.lo()));
    (mid, Mag::from_dyadic(&r))
}

fn join(m: &Dyadic, r: Mag, prec: Precision) -> Enclosure {
    if r.is_zero() {
        return Enclosure::point(m.clone());
    }
    let r = r.to_dyadic();
    Enclosure::new(m.sub(&r).round(prec, Round::Down), m.add(&r).round(prec, Round::Up))
}

/// Outer passes `from..to` of the shift by `c`, in midpoint-radius form.
/// `prec` must not be exact.
pub(crate) fn shift_passes_ball(a: &mut [Enclosure], c: &Dyadic, from: usize, to: usize, prec: Precision) {
    let n = a.len() - 1;
    let to = to.min(n);
    if from >= to {
        return;
    }
    let (mut mids, mut rads): (Vec<Dyadic>, Vec<Mag>) = a.iter().map(|x| split(x, prec)).unzip();
    let cm = Mag::from_dyadic(c);
    let unit = c == &Dyadic::one();
    for i in from..to {
        for j in (i..n).rev() {
            let (lo, hi) = mids.split_at_mut(j + 1);
            let t = if unit { hi[0].clone() } else { hi[0].mul(c) };
            let (s, exact) = lo[j].add_round_exactness(&t, prec, Round::Down);
            // directed rounding moves by less than one unit in the last place
            let err = if exact || s.is_zero() {
                Mag::ZERO
            } else {
                Mag::pow2(s.top() - prec.get() as i64 + 1)
            };
            lo[j] = s;
            let carried = if unit { rads[j + 1] } else { cm.mul(rads[j + 1]) };
            rads[j] = rads[j].add(carried).add(err);
        }
    }
    for (x, (m, r)) in a.iter_mut().zip(mids.iter().zip(rads)) {
        *x = join(m, r, prec);
    }
}

/// Horner evaluation at an exact point in midpoint-radius form. `prec` must
/// not be exact.
pub(crate) fn eval_ball(coeffs: &[Enclosure], x: &Dyadic, prec: Precision) -> Enclosure {
    horner(coeffs, x, Mag::ZERO, prec)
}

/// Horner evaluation over `x` in midpoint-radius form: one long
/// multiplication per step instead of four.
pub(crate) fn eval_iv_ball(coeffs: &[Enclosure], x: &Enclosure, prec: Precision) -> Enclosure {
    let xm = Dyadic::midpoint(x.lo(), x.hi());
    let xr = Mag::from_dyadic(&x.hi().sub(&xm));
    horner(coeffs, &xm, xr, prec)
}

/// Bound on the rounding error of `s`, the rounded result of an inexact operation.
fn ulp_err(s: &Dyadic, prec: Precision) -> Mag {
    if s.is_zero() {
        Mag::ZERO
    } else {
        Mag::pow2(s.top() - prec.get() as i64 + 1)
    }
}

/// Product of two balls, rounded to `prec`.
fn ball_mul(a: &(Dyadic, Mag), b: &(Dyadic, Mag), prec: Precision) -> (Dyadic, Mag) {
    let m = a.0.mul(&b.0).round(prec, Round::Down);
    let (am, bm) = (Mag::from_dyadic(&a.0), Mag::from_dyadic(&b.0));
    let r = am.mul(b.1).add(a.1.mul(bm)).add(a.1.mul(b.1)).add(ulp_err(&m, prec));
    (m, r)
}

/// `x^k` for a ball `x`, by repeated squaring.
fn ball_pow(x: &(Dyadic, Mag), mut k: usize, prec: Precision) -> (Dyadic, Mag) {
    let mut acc: Option<(Dyadic, Mag)> = None;
    let mut base = x.clone();
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => ball_mul(&a, &base, prec),
            });
        }
        k >>= 1;
        if k == 0 {
            return acc.expect("k >= 1");
        }
        base = ball_mul(&base, &base, prec);
    }
}

/// Zero runs at least this long are skipped with one multiplication by a
/// power of `x`.
const SPARSE_RUN: usize = 8;

fn horner(coeffs: &[Enclosure], xm: &Dyadic, xr: Mag, prec: Precision) -> Enclosure {
    let x = (xm.clone(), xr);
    let mut it = coeffs.iter().rev().peekable();
    let (mut mid, mut rad) = split(it.next().expect("nonempty"), prec);
    while it.peek().is_some() {
        // acc * x^k + c, with k - 1 zero coefficients skipped
        let mut k = 1;
        while it.len() > 1 && is_zero(it.peek().expect("nonempty")) {
            it.next();
            k += 1;
        }
        let c = it.next().expect("nonempty");
        let mut skipped = k;
        if k < SPARSE_RUN {
            // replay short runs as plain steps
            while skipped > 1 {
                (mid, rad) = step(&mid, rad, &x, &(Dyadic::zero(), Mag::ZERO), prec);
                skipped -= 1;
            }
            (mid, rad) = step(&mid, rad, &x, &split(c, prec), prec);
        } else {
            let p = ball_pow(&x, k, prec);
            (mid, rad) = step(&mid, rad, &p, &split(c, prec), prec);
        }
    }
    join(&mid, rad, prec)
}

fn is_zero(c: &Enclosure) -> bool {
    c.is_point() && c.lo().is_zero()
}

/// `(mid + rad) * x + c` in midpoint-radius form.
fn step(mid: &Dyadic, rad: Mag, x: &(Dyadic, Mag), c: &(Dyadic, Mag), prec: Precision) -> (Dyadic, Mag) {
    let (xm, xr) = x;
    // (m + d)(xm + e) = m xm + m e + d (xm + e)
    let spill = if xr.is_zero() { Mag::ZERO } else { Mag::from_dyadic(mid).mul(*xr) };
    let (s, exact) = mid.mul(xm).add_round_exactness(&c.0, prec, Round::Down);
    let err = if exact { Mag::ZERO } else { ulp_err(&s, prec) };
    let xmag = Mag::from_dyadic(xm).add(*xr);
    (s, rad.mul(xmag).add(spill).add(c.1).add(err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mag_bounds() {
        let x = Dyadic::new((1i64 << 60) + 12345, -7);
        let m = Mag::from_dyadic(&x);
        assert!(m.to_dyadic() >= x);
        let s = m.add(Mag::from_dyadic(&Dyadic::from(3))).to_dyadic();
        assert!(s >= x.add(&Dyadic::from(3)));
        let p = m.mul(m).to_dyadic();
        assert!(p >= x.mul(&x));
        assert_eq!(Mag::pow2(-5).to_dyadic(), Dyadic::pow2(-5));
        let tiny = Mag::pow2(-500);
        assert!(Mag::pow2(0).add(tiny).to_dyadic() > Dyadic::one());
    }

    #[test]
    fn ball_eval_contains_exact_value() {
        let coeffs: Vec<Dyadic> = [3i64, -7, 11, 0, -5, 2, 9, -1].iter().map(|&c| Dyadic::from(c)).collect();
        let x = Dyadic::new(-12345, -13);
        let exact = coeffs.iter().rev().fold(Dyadic::zero(), |acc, c| acc.mul(&x).add(c));
        let encl: Vec<Enclosure> = coeffs.into_iter().map(Enclosure::point).collect();
        for bits in [4u64, 20, 63] {
            let v = eval_ball(&encl, &x, Precision::bits(bits));
            assert!(v.contains(&exact), "{bits}: {v:?}");
        }
    }

    #[test]
    fn ball_eval_iv_contains_range() {
        let coeffs: Vec<Dyadic> = [3i64, -7, 11, 0, -5, 2, 9, -1].iter().map(|&c| Dyadic::from(c)).collect();
        let encl: Vec<Enclosure> = coeffs.iter().cloned().map(Enclosure::point).collect();
        let (lo, hi) = (Dyadic::new(-12345, -13), Dyadic::new(-12001, -13));
        let x = Enclosure::new(lo.clone(), hi.clone());
        for bits in [4u64, 20, 63] {
            let v = eval_iv_ball(&encl, &x, Precision::bits(bits));
            for t in 0..=8 {
                let p = lo.add(&hi.sub(&lo).mul(&Dyadic::new(t, -3)));
                let exact = coeffs.iter().rev().fold(Dyadic::zero(), |acc, c| acc.mul(&p).add(c));
                assert!(v.contains(&exact), "{bits}: {v:?}");
            }
        }
    }

    #[test]
    fn sparse_runs_keep_containment() {
        let mut coeffs = vec![Dyadic::zero(); 41];
        coeffs[0] = Dyadic::from(5);
        coeffs[2] = Dyadic::from(-3);
        coeffs[9] = Dyadic::from(1);
        coeffs[40] = Dyadic::from(7);
        let encl: Vec<Enclosure> = coeffs.iter().cloned().map(Enclosure::point).collect();
        let eval = |p: &Dyadic| coeffs.iter().rev().fold(Dyadic::zero(), |acc, c| acc.mul(p).add(c));
        let (lo, hi) = (Dyadic::new(-12345, -13), Dyadic::new(-12001, -13));
        for bits in [4u64, 20, 63, 200] {
            let prec = Precision::bits(bits);
            assert!(eval_ball(&encl, &lo, prec).contains(&eval(&lo)), "{bits}");
            let v = eval_iv_ball(&encl, &Enclosure::new(lo.clone(), hi.clone()), prec);
            for t in 0..=8 {
                let p = lo.add(&hi.sub(&lo).mul(&Dyadic::new(t, -3)));
                assert!(v.contains(&eval(&p)), "{bits}: {v:?}");
            }
        }
        // the skip must not lose accuracy at high precision
        let v = eval_ball(&encl, &lo, Precision::bits(400));
        assert!(v.hi().sub(v.lo()) <= Dyadic::pow2(-300));
    }

    #[test]
    fn ball_shift_contains_exact_shift() {
        let coeffs: Vec<Dyadic> = [3i64, -7, 11, 0, -5, 2, 9, -1].iter().map(|&c| Dyadic::from(c)).collect();
        let c = Dyadic::new(-12345, -13);
        let mut exact = coeffs.clone();
        let n = exact.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                exact[j] = exact[j].add(&exact[j + 1].mul(&c));
            }
        }
        for bits in [8u64, 20, 63] {
            let mut a: Vec<Enclosure> = coeffs.iter().cloned().map(Enclosure::point).collect();
            shift_passes_ball(&mut a, &c, 0, 3, Precision::bits(bits));
            shift_passes_ball(&mut a, &c, 3, n, Precision::bits(bits));
            for (x, e) in a.iter().zip(&exact) {
                assert!(x.contains(e), "{bits}: {x:?} vs {e}");
            }
        }
    }
}
