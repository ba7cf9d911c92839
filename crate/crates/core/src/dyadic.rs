//! Exact dyadic rationals `m * 2^e` and outward-rounded interval arithmetic.
//!
//! Every subdivision endpoint is a [`Dyadic`]; every approximate quantity is an
//! [`Enclosure`] whose endpoints are rounded outward to a mantissa budget given
//! by a [`Precision`]. Containment of the exact result is the only contract of
//! the interval operations; they are never required to be tight.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("exponent {0} is outside the machine-word range")]
    ExponentOverflow(i128),
    #[error("division by an enclosure that contains zero")]
    DivisionByZero,
    #[error("exact division with a non-dyadic quotient")]
    InexactDivision,
    #[error("cannot parse number `{0}`")]
    Parse(String),
}

/// Directed rounding mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Working precision: the mantissa bit budget of enclosure endpoints.
///
/// The solver escalates along `63, 127, 255, ...` (`next = 2 * bits + 1`).
/// [`Precision::EXACT`] disables rounding altogether and is used by the exact
/// classic Descartes baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u64);

impl Precision {
    pub const INITIAL: Precision = Precision(63);
    pub const EXACT: Precision = Precision(u64::MAX);

    /// Arbitrary positive bit budget. Panics on zero.
    pub fn bits(bits: u64) -> Self {
        assert!(bits > 0, "precision must be positive");
        Precision(bits)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_exact(self) -> bool {
        self.0 == u64::MAX
    }

    /// Next member of the escalation sequence.
    pub fn next(self) -> Self {
        if self.is_exact() {
            self
        } else {
            Precision(self.0.saturating_mul(2).saturating_add(1))
        }
    }

    /// The escalation sequence `63, 127, 255, ...` up to and including `cap` bits.
    pub fn escalation(cap: u64) -> impl Iterator<Item = Precision> {
        std::iter::successors(Some(Precision::INITIAL), |p| Some(p.next()))
            .take_while(move |p| p.0 <= cap)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "exact")
        } else {
            write!(f, "{} bits", self.0)
        }
    }
}

/// Exact binary rational `mantissa * 2^exponent`.
///
/// Canonical: the mantissa is odd, or the value is zero with exponent zero.
/// Equality and hashing therefore coincide with equality of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn checked_exp(e: i128) -> i64 {
    i64::try_from(e).unwrap_or_else(|_| panic!("dyadic exponent overflow: {e}"))
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from(1)
    }

    /// `m * 2^e` in canonical form.
    pub fn new(mantissa: impl Into<BigInt>, exponent: i64) -> Self {
        let mut mantissa = mantissa.into();
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz;
        }
        let exponent = checked_exp(exponent as i128 + tz as i128);
        Dyadic { mantissa, exponent }
    }

    /// Like [`Dyadic::new`] but with a wide exponent that is range-checked.
    pub fn from_parts(mantissa: impl Into<BigInt>, exponent: i128) -> Result<Self, ArithError> {
        let mantissa = mantissa.into();
        if mantissa.is_zero() {
            return Ok(Dyadic::zero());
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0) as i128;
        let e = exponent + tz;
        if i64::try_from(e).is_err() || i64::try_from(exponent).is_err() {
            return Err(ArithError::ExponentOverflow(e));
        }
        Ok(Dyadic::new(mantissa, exponent as i64))
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Number of significant mantissa bits.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// `t` with `2^(t-1) <= |x| < 2^t`; meaningless for zero.
    pub fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: checked_exp(self.exponent as i128 + k as i128),
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (m, e) = aligned_sum(self, other);
        Dyadic::new(m, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: checked_exp(self.exponent as i128 + other.exponent as i128),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mantissa * k, self.exponent)
    }

    /// Exact midpoint `(a + b) / 2`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        a.add(b).mul_pow2(-1)
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: Precision, dir: Round) -> Dyadic {
        round_parts(self.mantissa.clone(), self.exponent, prec, dir)
    }

    /// Round to the absolute grid `2^-frac_bits`.
    pub fn round_to_grid(&self, frac_bits: i64, dir: Round) -> Dyadic {
        if self.is_zero() || self.exponent >= -frac_bits {
            return self.clone();
        }
        let shift = (-frac_bits - self.exponent) as usize;
        let m = shift_right_directed(&self.mantissa, shift, dir);
        Dyadic::new(m, -frac_bits)
    }

    /// Directed-rounded sum at precision `prec`.
    pub fn add_round(&self, other: &Dyadic, prec: Precision, dir: Round) -> Dyadic {
        self.add_round_exactness(other, prec, dir).0
    }

    /// [`Dyadic::add_round`] that also reports whether the result is the exact sum.
    pub fn add_round_exactness(&self, other: &Dyadic, prec: Precision, dir: Round) -> (Dyadic, bool) {
        if prec.is_exact() {
            return (self.add(other), true);
        }
        if other.is_zero() {
            return exactness(self.mantissa.clone(), self.exponent, prec, dir);
        }
        if self.is_zero() {
            return exactness(other.mantissa.clone(), other.exponent, prec, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // When `small` lies entirely below both the last bit of `big` and the
        // rounding grid, only its sign matters: replace it by a sticky bit.
        let p = prec.get().min(i64::MAX as u64 / 4) as i64;
        let k = big.exponent.min(big.top() - p - 2) - 1;
        if small.top() <= k {
            let sticky = Dyadic {
                mantissa: if small.is_negative() {
                    -BigInt::one()
                } else {
                    BigInt::one()
                },
                exponent: k,
            };
            let (m, e) = aligned_sum(big, &sticky);
            return (round_parts(m, e, prec, dir), false);
        }
        let (m, e) = aligned_sum(self, other);
        exactness(m, e, prec, dir)
    }

    pub fn sub_round(&self, other: &Dyadic, prec: Precision, dir: Round) -> Dyadic {
        self.add_round(&other.neg(), prec, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: Precision, dir: Round) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        round_parts(
            &self.mantissa * &other.mantissa,
            checked_exp(self.exponent as i128 + other.exponent as i128),
            prec,
            dir,
        )
    }

    /// Directed-rounded quotient. `other` must be nonzero.
    pub fn div_round(&self, other: &Dyadic, prec: Precision, dir: Round) -> Result<Dyadic, ArithError> {
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        if prec.is_exact() {
            let (q, r) = self.mantissa.div_rem(&other.mantissa);
            if !r.is_zero() {
                return Err(ArithError::InexactDivision);
            }
            return Ok(Dyadic::new(q, self.exponent - other.exponent));
        }
        let p = prec.get() as i64;
        let shift = (p + 2 + other.bits() as i64 - self.bits() as i64).max(0);
        let num = &self.mantissa << shift as usize;
        let q = match dir {
            Round::Down => num.div_floor(&other.mantissa),
            Round::Up => -((-num).div_floor(&other.mantissa)),
        };
        let e = checked_exp(self.exponent as i128 - other.exponent as i128 - shift as i128);
        Ok(round_parts(q, e, prec, dir))
    }

    /// `floor(self / other)` for nonzero `other`.
    pub fn floor_div(&self, other: &Dyadic) -> BigInt {
        assert!(!other.is_zero(), "floor_div by zero");
        let d = self.exponent - other.exponent;
        let (num, den) = if d >= 0 {
            (&self.mantissa << d as usize, other.mantissa.clone())
        } else {
            (self.mantissa.clone(), &other.mantissa << (-d) as usize)
        };
        num.div_floor(&den)
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as usize
        } else {
            shift_right_directed(&self.mantissa, (-self.exponent) as usize, Round::Down)
        }
    }

    /// The value as `numerator / denominator` with a positive power-of-two denominator.
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        if self.exponent >= 0 {
            (&self.mantissa << self.exponent as usize, BigInt::one())
        } else {
            (self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    /// Integer value, if the dyadic is an integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        (self.exponent >= 0).then(|| &self.mantissa << self.exponent as usize)
    }

    /// Nearest `f64`, saturating to zero or infinity.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let drop = bits.saturating_sub(60);
        let m = (&self.mantissa >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exponent as f64 + drop as f64;
        if e > 2000.0 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200.0 {
            return 0.0;
        }
        m * (e).exp2()
    }

    /// `log2 |x|`, approximately; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.bits();
        let drop = bits.saturating_sub(60);
        let m = (&self.mantissa >> drop as usize).abs().to_f64().unwrap_or(1.0);
        m.log2() + self.exponent as f64 + drop as f64
    }

    /// Parse an exact value: `m*2^e`, an integer, or a decimal that happens
    /// to be dyadic (`0.375`). Non-dyadic decimals are rejected; use
    /// [`Enclosure::parse_rounded`] for those.
    pub fn parse_exact(text: &str) -> Result<Dyadic, ArithError> {
        match parse_number(text)? {
            Parsed::Dyadic(d) => Ok(d),
            Parsed::Decimal(num, den) => {
                decimal_as_dyadic(&num, &den).ok_or_else(|| ArithError::Parse(text.to_string()))
            }
        }
    }
}

fn aligned_sum(x: &Dyadic, y: &Dyadic) -> (BigInt, i64) {
    match x.exponent.cmp(&y.exponent) {
        Ordering::Equal => (&x.mantissa + &y.mantissa, x.exponent),
        Ordering::Greater => {
            let s = (x.exponent - y.exponent) as usize;
            ((&x.mantissa << s) + &y.mantissa, y.exponent)
        }
        Ordering::Less => {
            let s = (y.exponent - x.exponent) as usize;
            (&x.mantissa + (&y.mantissa << s), x.exponent)
        }
    }
}

fn shift_right_directed(m: &BigInt, s: usize, dir: Round) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity
    match dir {
        Round::Down => m >> s,
        Round::Up => -((-m) >> s),
    }
}

fn exactness(m: BigInt, e: i64, prec: Precision, dir: Round) -> (Dyadic, bool) {
    let exact = m.bits() <= prec.get();
    (round_parts(m, e, prec, dir), exact)
}

fn round_parts(m: BigInt, e: i64, prec: Precision, dir: Round) -> Dyadic {
    if prec.is_exact() || m.is_zero() {
        return Dyadic::new(m, e);
    }
    let bits = m.bits();
    if bits <= prec.get() {
        return Dyadic::new(m, e);
    }
    let s = bits - prec.get();
    let r = shift_right_directed(&m, s as usize, dir);
    Dyadic::new(r, checked_exp(e as i128 + s as i128))
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let (a, b) = (self.abs(), other.abs());
                match a.exponent.cmp(&b.exponent) {
                    Ordering::Equal => a.mantissa.cmp(&b.mantissa),
                    Ordering::Greater => {
                        (&a.mantissa << (a.exponent - b.exponent) as usize).cmp(&b.mantissa)
                    }
                    Ordering::Less => {
                        a.mantissa.cmp(&(&b.mantissa << (b.exponent - a.exponent) as usize))
                    }
                }
            }
            o => o,
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }
}

impl From<i32> for Dyadic {
    fn from(v: i32) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(v: &BigInt) -> Self {
        Dyadic::new(v.clone(), 0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits() > 80 {
            write!(f, "~{:e} [{} bits]", self.to_f64(), self.bits())
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

impl FromStr for Dyadic {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dyadic::parse_exact(s)
    }
}

enum Parsed {
    Dyadic(Dyadic),
    /// `num / den` with `den` a positive power of ten.
    Decimal(BigInt, BigInt),
}

fn parse_number(text: &str) -> Result<Parsed, ArithError> {
    let err = || ArithError::Parse(text.to_string());
    let t = text.trim();
    if let Some((m, e)) = t.split_once("*2^") {
        let m: BigInt = m.trim().parse().map_err(|_| err())?;
        let e: i128 = e.trim().parse().map_err(|_| err())?;
        return Dyadic::from_parts(m, e).map(Parsed::Dyadic);
    }
    let (body, exp10) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    if exp10.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    if neg {
        num = -num;
    }
    let scale = frac_part.len() as i64 - exp10;
    if scale <= 0 {
        let num = num * BigInt::from(10).pow((-scale) as u32);
        return Ok(Parsed::Dyadic(Dyadic::new(num, 0)));
    }
    let den = BigInt::from(10).pow(scale as u32);
    Ok(Parsed::Decimal(num, den))
}

fn decimal_as_dyadic(num: &BigInt, den: &BigInt) -> Option<Dyadic> {
    let g = num.gcd(den);
    let (num, den) = (num / &g, den / &g);
    let tz = den.trailing_zeros().unwrap_or(0);
    if den != BigInt::one() << tz as usize {
        return None;
    }
    Some(Dyadic::new(num, -(tz as i64)))
}

/// Sign classification of an enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
    Unknown,
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Binary interval operation selector for [`iv_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Outward-rounded `x op y` at precision `prec`.
pub fn iv_arith(op: ArithOp, x: &Enclosure, y: &Enclosure, prec: Precision) -> Result<Enclosure, ArithError> {
    Ok(match op {
        ArithOp::Add => x.add(y, prec),
        ArithOp::Sub => x.sub(y, prec),
        ArithOp::Mul => x.mul(y, prec),
        ArithOp::Div => return x.div(y, prec),
    })
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi: {lo:?} > {hi:?}");
        Enclosure { lo, hi }
    }

    pub fn try_new(lo: Dyadic, hi: Dyadic) -> Option<Self> {
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Enclosure::point(Dyadic::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Enclosure::point(Dyadic::from(v))
    }

    /// Round a point outward to `prec` bits.
    pub fn rounded(x: &Dyadic, prec: Precision) -> Self {
        Enclosure {
            lo: x.round(prec, Round::Down),
            hi: x.round(prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn into_bounds(self) -> (Dyadic, Dyadic) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `self` is a subset of `other`.
    pub fn subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn sign(&self) -> SignClass {
        if self.hi.is_negative() {
            SignClass::Negative
        } else if self.lo.is_positive() {
            SignClass::Positive
        } else if self.lo.is_zero() && self.hi.is_zero() {
            SignClass::Zero
        } else {
            SignClass::Unknown
        }
    }

    /// Lower bound of `|x|` over the enclosure.
    pub fn mag_lower(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    /// Upper bound of `|x|` over the enclosure.
    pub fn mag_upper(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Enclosure {
        Enclosure {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    /// Outward rounding of both endpoints.
    pub fn round(&self, prec: Precision) -> Enclosure {
        Enclosure {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn add(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        Enclosure {
            lo: self.lo.add_round(&other.lo, prec, Round::Down),
            hi: self.hi.add_round(&other.hi, prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        Enclosure {
            lo: self.lo.sub_round(&other.hi, prec, Round::Down),
            hi: self.hi.sub_round(&other.lo, prec, Round::Up),
        }
    }

    /// Multiply by an exact point.
    pub fn mul_dyadic(&self, c: &Dyadic, prec: Precision) -> Enclosure {
        if c.is_negative() {
            Enclosure {
                lo: self.hi.mul_round(c, prec, Round::Down),
                hi: self.lo.mul_round(c, prec, Round::Up),
            }
        } else {
            Enclosure {
                lo: self.lo.mul_round(c, prec, Round::Down),
                hi: self.hi.mul_round(c, prec, Round::Up),
            }
        }
    }

    pub fn mul(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        if other.is_point() {
            return self.mul_dyadic(&other.lo, prec);
        }
        if self.is_point() {
            return other.mul_dyadic(&self.lo, prec);
        }
        let (xl, xh, yl, yh) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let d = |a: &Dyadic, b: &Dyadic| a.mul_round(b, prec, Round::Down);
        let u = |a: &Dyadic, b: &Dyadic| a.mul_round(b, prec, Round::Up);
        let xs = sign_kind(self);
        let ys = sign_kind(other);
        use Kind::*;
        let (lo, hi) = match (xs, ys) {
            (Pos, Pos) => (d(xl, yl), u(xh, yh)),
            (Pos, Neg) => (d(xh, yl), u(xl, yh)),
            (Pos, Mixed) => (d(xh, yl), u(xh, yh)),
            (Neg, Pos) => (d(xl, yh), u(xh, yl)),
            (Neg, Neg) => (d(xh, yh), u(xl, yl)),
            (Neg, Mixed) => (d(xl, yh), u(xl, yl)),
            (Mixed, Pos) => (d(xl, yh), u(xh, yh)),
            (Mixed, Neg) => (d(xh, yl), u(xl, yl)),
            (Mixed, Mixed) => {
                let l1 = d(xl, yh);
                let l2 = d(xh, yl);
                let h1 = u(xl, yl);
                let h2 = u(xh, yh);
                (l1.min(l2), h1.max(h2))
            }
        };
        Enclosure { lo, hi }
    }

    /// Outward-rounded quotient; fails if `other` contains zero.
    pub fn div(&self, other: &Enclosure, prec: Precision) -> Result<Enclosure, ArithError> {
        if other.contains_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if other.hi.is_negative() {
            return self.neg().div(&other.neg(), prec);
        }
        let (xl, xh, yl, yh) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let (lo, hi) = match sign_kind(self) {
            Kind::Pos => (
                xl.div_round(yh, prec, Round::Down)?,
                xh.div_round(yl, prec, Round::Up)?,
            ),
            Kind::Neg => (
                xl.div_round(yl, prec, Round::Down)?,
                xh.div_round(yh, prec, Round::Up)?,
            ),
            Kind::Mixed => (
                xl.div_round(yl, prec, Round::Down)?,
                xh.div_round(yl, prec, Round::Up)?,
            ),
        };
        Ok(Enclosure { lo, hi })
    }

    /// Outward enclosure of a decimal or dyadic literal. Dyadic values give a
    /// point; other decimals are rounded outward to the grid `2^-frac_bits`.
    pub fn parse_rounded(text: &str, frac_bits: i64) -> Result<Enclosure, ArithError> {
        match parse_number(text)? {
            Parsed::Dyadic(d) => Ok(Enclosure::point(d)),
            Parsed::Decimal(num, den) => Ok(match decimal_as_dyadic(&num, &den) {
                Some(d) => Enclosure::point(d),
                None => ratio_enclosure(&num, &den, frac_bits),
            }),
        }
    }
}

/// Outward enclosure of `num / den` (`den > 0`) on the grid `2^-frac_bits`.
pub fn ratio_enclosure(num: &BigInt, den: &BigInt, frac_bits: i64) -> Enclosure {
    debug_assert!(den.is_positive());
    let scaled = if frac_bits >= 0 {
        num << frac_bits as usize
    } else {
        num.clone()
    };
    let den = if frac_bits >= 0 {
        den.clone()
    } else {
        den << (-frac_bits) as usize
    };
    let (q, r) = scaled.div_mod_floor(&den);
    let lo = Dyadic::new(q.clone(), -frac_bits);
    let hi = if r.is_zero() {
        lo.clone()
    } else {
        Dyadic::new(q + 1, -frac_bits)
    };
    Enclosure { lo, hi }
}

#[derive(Clone, Copy)]
enum Kind {
    Pos,
    Neg,
    Mixed,
}

fn sign_kind(x: &Enclosure) -> Kind {
    if !x.lo.is_negative() {
        Kind::Pos
    } else if !x.hi.is_positive() {
        Kind::Neg
    } else {
        Kind::Mixed
    }
}

/// `iv_sign`: -1, 0, +1 as a [`SignClass`], or `Unknown` when the enclosure
/// straddles zero with positive width.
pub fn iv_sign(x: &Enclosure) -> SignClass {
    x.sign()
}
