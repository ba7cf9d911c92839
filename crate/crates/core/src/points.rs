//! Subdivision points where `|P|` is certified nonzero.
//!
//! The default selector samples a random point from a fine dyadic grid and
//! accepts it once an interval evaluation proves `|P| > 2^(2 - rho)`; the
//! deterministic selector evaluates the whole grid and takes a point whose
//! value is within a factor four of the grid maximum.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dyadic::{Dyadic, Precision};
use crate::poly::OracleCache;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("no point with certified nonzero value near {center} up to {cap} bits")]
    PrecisionCap { center: Dyadic, cap: u64 },
}

/// Deterministic pseudo-random stream with an explicit 64-bit seed.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `[-k, k]`.
    pub fn symmetric(&mut self, k: u64) -> i64 {
        let k = k.min(i64::MAX as u64 / 2) as i64;
        self.rng.random_range(-k..=k)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }
}

/// The grid `m[eps; N] = { m + i eps : i = -ceil(N/2), ..., ceil(N/2) }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multipoint {
    pub center: Dyadic,
    /// A power of two.
    pub spacing: Dyadic,
    pub count: u64,
}

impl Multipoint {
    pub fn half_span(&self) -> u64 {
        self.count.div_ceil(2)
    }

    pub fn point(&self, i: i64) -> Dyadic {
        self.center.add(&self.spacing.mul_int(&BigInt::from(i)))
    }

    pub fn points(&self) -> impl Iterator<Item = Dyadic> + '_ {
        let h = self.half_span() as i64;
        (-h..=h).map(move |i| self.point(i))
    }
}

/// `lambda = max(2, ceil(log2 n))`.
pub fn default_lambda(n: usize) -> u32 {
    let n = n.max(1) as u64;
    let ceil_log = 64 - (n - 1).leading_zeros();
    ceil_log.max(2)
}

/// Largest power of two `2^k <= x` for positive `x`.
fn floor_pow2(x: &Dyadic) -> Dyadic {
    Dyadic::pow2(x.top() - 1)
}

/// Snap `m` to the nearest multiple of the power of two `eps`.
fn snap(m: &Dyadic, eps: &Dyadic) -> Dyadic {
    let q = m.add(&eps.mul_pow2(-1)).floor_div(eps);
    eps.mul_int(&q)
}

/// Outcome of a point search: the point and the precision that certified it.
pub type PointResult = Result<(Dyadic, Precision), PointError>;

/// Randomized pseudo-admissible point in `[m - delta, m + delta]`.
///
/// The grid spacing is `2^floor(log2(2 delta / (2^lambda n)))` and the grid is
/// aligned to multiples of the spacing, so sampled points have short
/// mantissas. For `rho = 63, 127, ...` one fresh point is drawn and accepted
/// when the interval value of `P` there has magnitude above `2^(2 - rho)`.
pub fn find_pseudo_admissible(
    src: &OracleCache<'_>,
    m: &Dyadic,
    delta: &Dyadic,
    n: usize,
    lambda: u32,
    rng: &mut RandomSource,
    prec_cap: u64,
) -> PointResult {
    assert!(delta.is_positive(), "perturbation radius must be positive");
    let grid_points = Dyadic::from(n.max(1) as i64).mul_pow2(lambda as i64);
    let raw = delta
        .mul_pow2(1)
        .div_round(&grid_points, Precision::INITIAL, crate::dyadic::Round::Down)
        .expect("grid size is positive");
    let eps = floor_pow2(&raw);
    let center = snap(m, &eps);
    // |center - m| <= eps / 2, so |i| <= K keeps points inside [m - delta, m + delta]
    let k = delta.floor_div(&eps).to_u64().unwrap_or(u64::MAX).saturating_sub(1);
    for prec in Precision::escalation(prec_cap) {
        let i = rng.symmetric(k);
        let x = center.add(&eps.mul_int(&BigInt::from(i)));
        let v = src.poly(prec).eval(&x, prec);
        if v.mag_lower() > Dyadic::pow2(2 - prec.get() as i64) {
            return Ok((x, prec));
        }
    }
    Err(PointError::PrecisionCap {
        center: m.clone(),
        cap: prec_cap,
    })
}

/// Admissible point of a multipoint: `|P(m*)| >= max_i |P(m_i)| / 4`.
///
/// For `rho = 2, 4, 8, ...` every grid value is approximated to absolute error
/// below `2^-rho`; the maximizer is returned once its approximation exceeds
/// `2^(2 - rho)`.
pub fn find_admissible(src: &OracleCache<'_>, mp: &Multipoint, prec_cap: u64) -> PointResult {
    let points: Vec<Dyadic> = mp.points().collect();
    let mut rho: u64 = 2;
    while rho <= prec_cap {
        let tol = Dyadic::pow2(1 - rho as i64);
        let mut best: Option<(Dyadic, Dyadic, Precision)> = None;
        for x in &points {
            // working precision high enough for an absolute error below 2^-rho
            let mut work = Precision::bits(rho.max(63));
            let approx = loop {
                let v = src.poly(work).eval(x, work);
                if v.width() < tol {
                    break Some(v.mid().abs());
                }
                if work.get() > prec_cap {
                    break None;
                }
                work = work.next();
            };
            let Some(a) = approx else {
                return Err(PointError::PrecisionCap {
                    center: mp.center.clone(),
                    cap: prec_cap,
                });
            };
            if best.as_ref().is_none_or(|(_, b, _)| &a > b) {
                best = Some((x.clone(), a, work));
            }
        }
        let (x, a, work) = best.expect("multipoint is nonempty");
        if a > Dyadic::pow2(2 - rho as i64) {
            return Ok((x, work));
        }
        rho *= 2;
    }
    Err(PointError::PrecisionCap {
        center: mp.center.clone(),
        cap: prec_cap,
    })
}

/// Strategy for choosing a subdivision point near `m` within radius `delta`.
pub trait PointSelector: Send + Sync {
    fn name(&self) -> &'static str;

    fn select(
        &self,
        src: &OracleCache<'_>,
        m: &Dyadic,
        delta: &Dyadic,
        rng: &mut RandomSource,
        prec_cap: u64,
    ) -> PointResult;
}

/// Random sampling on the refined grid (the solver default).
#[derive(Debug, Clone, Copy, Default)]
pub struct PseudoAdmissible;

impl PointSelector for PseudoAdmissible {
    fn name(&self) -> &'static str {
        "pseudo"
    }

    fn select(
        &self,
        src: &OracleCache<'_>,
        m: &Dyadic,
        delta: &Dyadic,
        rng: &mut RandomSource,
        prec_cap: u64,
    ) -> PointResult {
        let n = src.degree();
        find_pseudo_admissible(src, m, delta, n, default_lambda(n), rng, prec_cap)
    }
}

/// Full multipoint evaluation with `N = n` grid points.
#[derive(Debug, Clone, Copy, Default)]
pub struct Admissible;

impl PointSelector for Admissible {
    fn name(&self) -> &'static str {
        "deterministic"
    }

    fn select(
        &self,
        src: &OracleCache<'_>,
        m: &Dyadic,
        delta: &Dyadic,
        _rng: &mut RandomSource,
        prec_cap: u64,
    ) -> PointResult {
        let n = src.degree().max(1) as u64;
        let mp = multipoint_within(m, delta, n);
        find_admissible(src, &mp, prec_cap)
    }
}

/// Multipoint with `count` points, dyadic spacing, centered on the grid,
/// spanning at most `[m - delta, m + delta]`.
pub fn multipoint_within(m: &Dyadic, delta: &Dyadic, count: u64) -> Multipoint {
    let half = count.div_ceil(2) + 1;
    let raw = delta
        .div_round(&Dyadic::from(half as i64), Precision::INITIAL, crate::dyadic::Round::Down)
        .expect("nonzero");
    let spacing = floor_pow2(&raw);
    Multipoint {
        center: snap(m, &spacing),
        spacing,
        count,
    }
}

/// Look up a point selector by name.
pub fn selector_by_name(name: &str) -> Option<Box<dyn PointSelector>> {
    match name {
        "pseudo" => Some(Box::new(PseudoAdmissible)),
        "deterministic" => Some(Box::new(Admissible)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ExactPolynomial;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m, e)
    }

    #[test]
    fn lambda_choice() {
        assert_eq!(default_lambda(1), 2);
        assert_eq!(default_lambda(4), 2);
        assert_eq!(default_lambda(5), 3);
        assert_eq!(default_lambda(129), 8);
    }

    #[test]
    fn admissible_avoids_root_of_x() {
        let p = ExactPolynomial::from_ints(&[0, 1]);
        let src = OracleCache::new(&p);
        let mp = Multipoint {
            center: Dyadic::zero(),
            spacing: d(1, -2),
            count: 4,
        };
        let (x, _) = find_admissible(&src, &mp, 1 << 20).unwrap();
        assert!(!x.is_zero());
        assert!(x.abs() == d(1, -1) || x.abs() == d(1, -2));
    }

    #[test]
    fn admissible_maximizer_for_x2_minus_2() {
        // grid 1 + i/8, i = -2..2: |x^2 - 2| is largest at 3/4
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        let src = OracleCache::new(&p);
        let mp = Multipoint {
            center: Dyadic::one(),
            spacing: d(1, -3),
            count: 4,
        };
        let (x, _) = find_admissible(&src, &mp, 1 << 20).unwrap();
        assert_eq!(x, d(3, -2));
    }

    #[test]
    fn admissible_constant() {
        let p = ExactPolynomial::from_ints(&[5]);
        let src = OracleCache::new(&p);
        let mp = Multipoint {
            center: Dyadic::zero(),
            spacing: d(1, -4),
            count: 8,
        };
        assert!(find_admissible(&src, &mp, 1 << 20).is_ok());
    }

    #[test]
    fn pseudo_admissible_avoids_center_root() {
        let p = ExactPolynomial::from_ints(&[0, 1]);
        let src = OracleCache::new(&p);
        let mut rng = RandomSource::new(7);
        for _ in 0..50 {
            let (x, _) = find_pseudo_admissible(&src, &Dyadic::zero(), &d(1, -1), 1, 2, &mut rng, 1 << 20).unwrap();
            assert!(!x.is_zero());
            assert!(x.abs() <= d(1, -1));
        }
    }

    #[test]
    fn pseudo_admissible_x2_minus_2() {
        let p = ExactPolynomial::from_ints(&[-2, 0, 1]);
        let src = OracleCache::new(&p);
        let mut rng = RandomSource::new(1);
        for _ in 0..50 {
            let (x, _) = find_pseudo_admissible(&src, &Dyadic::one(), &d(1, -2), 2, 2, &mut rng, 1 << 20).unwrap();
            assert!(x >= d(3, -2) && x <= d(5, -2));
            assert!(!p.eval(&x).is_zero());
        }
    }

    #[test]
    fn selectors_by_name() {
        assert_eq!(selector_by_name("pseudo").unwrap().name(), "pseudo");
        assert_eq!(selector_by_name("deterministic").unwrap().name(), "deterministic");
        assert!(selector_by_name("other").is_none());
    }
}
