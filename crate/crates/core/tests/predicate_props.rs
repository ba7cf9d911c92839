use anewdsc::poly::OracleCache;
use anewdsc::predicates::{truncated_test, var_test, zero_one_test, TestContext, TestOutcome};
use anewdsc::{Dyadic, ExactPolynomial, Precision};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(x: &Dyadic) -> BigRational {
    let (n, d) = x.to_fraction();
    BigRational::new(n, d)
}

/// Square-free product of `(den x - num)` with distinct rational roots.
fn rational_roots() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-40i64..40, prop::sample::select(vec![1i64, 2, 3, 5, 7])), 1..=12).prop_map(|v| {
        let mut seen: Vec<BigRational> = Vec::new();
        v.into_iter()
            .filter(|&(n, d)| {
                let r = BigRational::new(n.into(), d.into());
                let fresh = !seen.contains(&r);
                seen.push(r);
                fresh
            })
            .collect()
    })
}

fn poly_from(roots: &[(i64, i64)]) -> ExactPolynomial {
    let mut c = vec![BigInt::from(1)];
    for &(num, den) in roots {
        let mut next = vec![BigInt::from(0); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci * den;
            next[i] -= ci * num;
        }
        c = next;
    }
    ExactPolynomial::from_bigints(&c)
}

fn count_in(roots: &[(i64, i64)], a: &Dyadic, b: &Dyadic) -> usize {
    let (a, b) = (q(a), q(b));
    roots
        .iter()
        .map(|&(n, d)| BigRational::new(n.into(), d.into()))
        .filter(|r| &a < r && r < &b)
        .count()
}

fn interval() -> impl Strategy<Value = (Dyadic, Dyadic)> {
    (-48i64..48, 1i64..48, 0i64..4).prop_map(|(a, w, e)| (Dyadic::new(a, -e), Dyadic::new(a + w, -e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn zero_and_one_outcomes_are_sound(
        roots in rational_roots(),
        (a, b) in interval(),
        bits in prop::sample::select(vec![8u64, 16, 63, 127]),
        k in prop::option::of(1usize..12),
    ) {
        let p = poly_from(&roots);
        let src = OracleCache::new(&p);
        let m = count_in(&roots, &a, &b);
        let prec = Precision::bits(bits);
        let ctx = match k {
            Some(k) => TestContext::truncated(prec, k),
            None => TestContext::full(prec),
        };
        let checks = [
            var_test(&src, &a, &b, prec).0,
            truncated_test(&src, &a, &b, k.unwrap_or(1), prec).0,
            zero_one_test(&src, &a, &b, ctx).outcome,
        ];
        for outcome in checks {
            match outcome {
                TestOutcome::Zero => prop_assert_eq!(m, 0),
                TestOutcome::One => prop_assert_eq!(m, 1),
                TestOutcome::Unknown => {}
            }
        }
    }

    #[test]
    fn truncated_test_dominates_at_full_degree(roots in rational_roots(), (a, b) in interval()) {
        let p = poly_from(&roots);
        let src = OracleCache::new(&p);
        let n = src.degree();
        for prec in [Precision::EXACT, Precision::INITIAL] {
            let (full, _) = var_test(&src, &a, &b, prec);
            if full != TestOutcome::Unknown {
                prop_assert_eq!(truncated_test(&src, &a, &b, n, prec).0, full);
                prop_assert_eq!(zero_one_test(&src, &a, &b, TestContext::truncated(prec, n)).outcome, full);
            }
        }
    }

    #[test]
    fn decisions_survive_precision_refinement(
        roots in rational_roots(),
        (a, b) in interval(),
        bits in prop::sample::select(vec![4u64, 9, 19, 63]),
        k in prop::option::of(1usize..12),
    ) {
        let p = poly_from(&roots);
        let src = OracleCache::new(&p);
        let ctx = |prec| match k {
            Some(k) => TestContext::truncated(prec, k),
            None => TestContext::full(prec),
        };
        let prec = Precision::bits(bits);
        let coarse = zero_one_test(&src, &a, &b, ctx(prec)).outcome;
        if coarse != TestOutcome::Unknown {
            prop_assert_eq!(zero_one_test(&src, &a, &b, ctx(prec.next())).outcome, coarse);
        }
    }
}
