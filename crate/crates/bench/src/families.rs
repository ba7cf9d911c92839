//! Benchmark polynomial families, looked up by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Generator inputs. Families ignore what they do not use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: usize,
    pub tau: u64,
    pub seed: u64,
    /// Fixed-point scale of the clustered family.
    pub scale: u32,
}

impl FamilyParams {
    pub fn new(n: usize, tau: u64) -> Self {
        FamilyParams {
            n,
            tau,
            seed: 0,
            scale: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("{family}: {msg}")]
    Invalid { family: &'static str, msg: String },
}

/// A family of integer polynomials (coefficients lowest degree first).
pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;

    fn generate(&self, params: &FamilyParams) -> Result<Vec<BigInt>, FamilyError>;
}

fn invalid(family: &'static str, msg: impl Into<String>) -> FamilyError {
    FamilyError::Invalid {
        family,
        msg: msg.into(),
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[BigInt], mut e: u32) -> Vec<BigInt> {
    let mut base = a.to_vec();
    let mut acc = vec![BigInt::one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(&base, &base);
        }
    }
    acc
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// `x^n - ((2^(tau/2) - 1) x - 1)^2`.
pub struct Mignotte;

impl Family for Mignotte {
    fn name(&self) -> &'static str {
        "mignotte"
    }

    fn generate(&self, p: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        if p.tau % 2 != 0 || p.tau == 0 {
            return Err(invalid(self.name(), "tau must be positive and even"));
        }
        if p.n < 3 {
            return Err(invalid(self.name(), "n must be at least 3"));
        }
        let a: BigInt = (BigInt::one() << (p.tau / 2)) - 1;
        let mut c = vec![BigInt::zero(); p.n + 1];
        c[0] = BigInt::from(-1);
        c[1] = &a * 2;
        c[2] = -(&a * &a);
        c[p.n] += 1;
        Ok(c)
    }
}

/// `prod_{i=1..4} (x^(n/4) - ((2^floor(tau/8) - 1) x^2 - 1)^(2i))`.
pub struct NestedMignotte;

impl Family for NestedMignotte {
    fn name(&self) -> &'static str {
        "nested-mignotte"
    }

    fn generate(&self, p: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        if p.n % 4 != 0 || p.n == 0 {
            return Err(invalid(self.name(), "n must be a positive multiple of 4"));
        }
        // tau / 8 rounds down: the published instances include tau = 140
        if p.tau < 8 {
            return Err(invalid(self.name(), "tau must be at least 8"));
        }
        let a: BigInt = (BigInt::one() << (p.tau / 8)) - 1;
        let inner = [BigInt::from(-1), BigInt::zero(), a];
        let mut acc = vec![BigInt::one()];
        for i in 1..=4u32 {
            let mut f: Vec<BigInt> = poly_pow(&inner, 2 * i).into_iter().map(|c| -c).collect();
            let m = p.n / 4;
            if f.len() <= m {
                f.resize(m + 1, BigInt::zero());
            }
            f[m] += 1;
            acc = poly_mul(&acc, &trim(f));
        }
        Ok(trim(acc))
    }
}

/// Coefficients drawn uniformly from `(-2^tau, 2^tau)`, nonzero leading term.
pub struct RandomUniform;

fn uniform_int(rng: &mut ChaCha8Rng, tau: u64) -> BigInt {
    // v uniform in [0, 2^(tau+1) - 2], shifted to [-(2^tau - 1), 2^tau - 1]
    let bits = tau + 1;
    let limit: BigInt = (BigInt::one() << bits) - 1;
    loop {
        let words = bits.div_ceil(64) as usize;
        let mut v = BigInt::zero();
        for _ in 0..words {
            v = (v << 64) + BigInt::from(rng.random::<u64>());
        }
        v &= &limit;
        if v < limit {
            return v - ((BigInt::one() << tau) - 1);
        }
    }
}

impl Family for RandomUniform {
    fn name(&self) -> &'static str {
        "random-uniform"
    }

    fn generate(&self, p: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        if p.n == 0 || p.tau == 0 {
            return Err(invalid(self.name(), "n and tau must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let mut c: Vec<BigInt> = (0..p.n).map(|_| uniform_int(&mut rng, p.tau)).collect();
        let lead = loop {
            let v = uniform_int(&mut rng, p.tau);
            if !v.is_zero() {
                break v;
            }
        };
        c.push(lead);
        Ok(c)
    }
}

fn binomial(m: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (m - i) / (i + 1);
    }
    r
}

/// `f^2 - 1` with `deg f = n / 2` and `f_i = round(a_i 2^scale sqrt(C(n/2, i) / (i + 1)))`,
/// `a_i` standard normal.
pub struct Clustered;

impl Family for Clustered {
    fn name(&self) -> &'static str {
        "clustered"
    }

    fn generate(&self, p: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        if p.n < 2 || p.n % 2 != 0 {
            return Err(invalid(self.name(), "n must be even and at least 2"));
        }
        let m = (p.n / 2) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        const GUARD: u32 = 64;
        let coeff = |i: u64, a: f64| -> BigInt {
            // a with 52 fractional bits
            let a_fixed = BigInt::from((a * (1u64 << 52) as f64).round() as i64);
            let radicand = (binomial(m, i) << (2 * (p.scale + GUARD))) / BigInt::from(i + 1);
            let prod = a_fixed * radicand.sqrt();
            let shift = 52 + GUARD;
            let half = BigInt::one() << (shift - 1);
            if prod.is_negative() {
                -((-prod + half) >> shift)
            } else {
                (prod + half) >> shift
            }
        };
        let mut f: Vec<BigInt> = (0..m)
            .map(|i| coeff(i, rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let lead = loop {
            let v = coeff(m, rng.sample::<f64, _>(StandardNormal));
            if !v.is_zero() {
                break v;
            }
        };
        f.push(lead);
        let mut c = poly_mul(&f, &f);
        c[0] -= 1;
        Ok(c)
    }
}

/// `prod_{i=1..n} (x - i)`.
pub struct Wilkinson;

impl Family for Wilkinson {
    fn name(&self) -> &'static str {
        "wilkinson"
    }

    fn generate(&self, p: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        if p.n == 0 {
            return Err(invalid(self.name(), "n must be positive"));
        }
        Ok((1..=p.n as i64).fold(vec![BigInt::one()], |acc, i| {
            poly_mul(&acc, &[BigInt::from(-i), BigInt::one()])
        }))
    }
}

/// Families by name.
#[derive(Clone, Default)]
pub struct FamilyRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Family>>,
}

impl FamilyRegistry {
    pub fn with_defaults() -> Self {
        let mut r = FamilyRegistry::default();
        r.register(Mignotte);
        r.register(NestedMignotte);
        r.register(RandomUniform);
        r.register(Clustered);
        r.register(Wilkinson);
        r
    }

    pub fn register<F: Family + 'static>(&mut self, family: F) {
        self.entries.insert(family.name(), Arc::new(family));
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Family>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn generate(&self, name: &str, params: &FamilyParams) -> Result<Vec<BigInt>, FamilyError> {
        self.get(name)
            .ok_or_else(|| FamilyError::Unknown(name.to_string()))?
            .generate(params)
    }
}
