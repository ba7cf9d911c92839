use anewdsc::poly::{
    descartes_transform, local_poly, sign_variations, truncated_local_poly, IntervalPoly, OracleCache, SignVarRange,
};
use anewdsc::predicates::{truncated_test, var_test};
use anewdsc::{Dyadic, Enclosure, ExactPolynomial, Precision};
use proptest::prelude::*;

fn d(m: i64, e: i64) -> Dyadic {
    Dyadic::new(m, e)
}

// Naive references by polynomial multiplication, independent of the
// synthetic-division code paths.
fn pmul(a: &[Dyadic], b: &[Dyadic]) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn compose_linear(f: &[Dyadic], c0: &Dyadic, c1: &Dyadic) -> Vec<Dyadic> {
    // f(c0 + c1 x)
    let mut out = vec![Dyadic::zero(); f.len()];
    let mut pw = vec![Dyadic::one()];
    for a in f {
        for (i, p) in pw.iter().enumerate() {
            out[i] = out[i].add(&a.mul(p));
        }
        pw = pmul(&pw, &[c0.clone(), c1.clone()]);
    }
    out
}

fn exact_descartes(f: &[Dyadic], a: &Dyadic, b: &Dyadic) -> Vec<Dyadic> {
    // (x+1)^n f((a x + b)/(x+1)) = sum f_i (a x + b)^i (x + 1)^(n - i)
    let n = f.len() - 1;
    let mut out = vec![Dyadic::zero(); n + 1];
    for (i, fi) in f.iter().enumerate() {
        let mut t = vec![fi.clone()];
        for _ in 0..i {
            t = pmul(&t, &[b.clone(), a.clone()]);
        }
        for _ in i..n {
            t = pmul(&t, &[Dyadic::one(), Dyadic::one()]);
        }
        for (k, c) in t.into_iter().enumerate() {
            out[k] = out[k].add(&c);
        }
    }
    out
}

fn exact_var(c: &[Dyadic]) -> usize {
    let r = sign_variations(&IntervalPoly::from_dyadics(c));
    assert!(r.is_determined());
    r.min
}

fn interval() -> impl Strategy<Value = (Dyadic, Dyadic)> {
    (-64i64..64, 1i64..64, 0i64..5).prop_map(|(a, w, e)| (d(a, -e), d(a + w, -e)))
}

fn roots() -> impl Strategy<Value = Vec<Dyadic>> {
    prop::collection::btree_set(-48i64..48, 1..=10).prop_map(|s| s.into_iter().map(|r| d(r, -2)).collect())
}

fn small_poly() -> impl Strategy<Value = Vec<Dyadic>> {
    prop::collection::vec((-1000i64..1000, 0i64..4), 2..=12).prop_map(|c| {
        let mut v: Vec<Dyadic> = c.into_iter().map(|(m, e)| d(m, -e)).collect();
        if v.last().unwrap().is_zero() {
            *v.last_mut().unwrap() = Dyadic::one();
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn descartes_rule_bounds_root_count(rs in roots(), (a, b) in interval()) {
        let p = ExactPolynomial::from_roots(&rs);
        let src = OracleCache::new(&p);
        let m = rs.iter().filter(|r| &a < *r && *r < &b).count();
        let t = descartes_transform(&src, &a, &b, Precision::EXACT);
        let v = exact_var(&t.coeffs().iter().map(|c| c.lo().clone()).collect::<Vec<_>>());
        prop_assert!(m <= v, "m={} v={}", m, v);
        prop_assert_eq!((v - m) % 2, 0);
    }

    #[test]
    fn variations_are_sign_diminishing(f in small_poly(), (a, b) in interval(), t1 in 0u32..=16, t2 in 0u32..=16) {
        let p = ExactPolynomial::new(f);
        let src = OracleCache::new(&p);
        let (t1, t2) = (t1.min(t2), t1.max(t2));
        let w = b.sub(&a);
        let at = |t: u32| a.add(&w.mul(&d(t as i64, -4)));
        let var = |x: &Dyadic, y: &Dyadic| {
            let r = sign_variations(&descartes_transform(&src, x, y, Precision::EXACT));
            prop_assert!(r.is_determined());
            Ok(r.min)
        };
        let whole = var(&a, &b)?;
        let mut parts = 0;
        if t1 > 0 {
            parts += var(&a, &at(t1))?;
        }
        if t2 < 16 {
            parts += var(&at(t2), &b)?;
        }
        prop_assert!(parts <= whole);
    }

    #[test]
    fn transforms_contain_exact_results(f in small_poly(), c in (-300i64..300, 0i64..6), bits in 2u64..80) {
        let c = d(c.0, -c.1);
        let prec = Precision::bits(bits);
        let ip = IntervalPoly::from_dyadics(&f);
        prop_assert!(ip.taylor_shift(&c, prec).contains_coeffs(&compose_linear(&f, &c, &Dyadic::one())));
        prop_assert!(ip.scale(&c, prec).contains_coeffs(&compose_linear(&f, &Dyadic::zero(), &c)));
        let rev: Vec<Dyadic> = f.iter().rev().cloned().collect();
        let srs = compose_linear(&rev, &Dyadic::one(), &Dyadic::one());
        prop_assert!(ip.scale_reverse_shift1(prec).contains_coeffs(&srs));
        let val = f.iter().rev().fold(Dyadic::zero(), |acc, x| acc.mul(&c).add(x));
        prop_assert!(ip.eval(&c, prec).contains(&val));
    }

    #[test]
    fn local_transforms_contain_exact_results(f in small_poly(), (a, b) in interval(), bits in 4u64..80) {
        let prec = Precision::bits(bits);
        let p = ExactPolynomial::new(f.clone());
        let src = OracleCache::new(&p);
        let q = compose_linear(&f, &a, &b.sub(&a));
        prop_assert!(local_poly(&src, &a, &b, prec).contains_coeffs(&q));
        prop_assert!(descartes_transform(&src, &a, &b, prec).contains_coeffs(&exact_descartes(&f, &a, &b)));
    }

    #[test]
    fn truncation_remainder_bounds_tail(f in small_poly(), (a, b) in interval(), k in 1usize..12, t in 0i64..=8) {
        // Q(x) lies in the truncated enclosure evaluated on x in [0, 1].
        let prec = Precision::bits(63);
        let p = ExactPolynomial::new(f.clone());
        let src = OracleCache::new(&p);
        let tr = truncated_local_poly(&src, &a, &b, k, prec);
        let x = d(t, -3);
        let q = compose_linear(&f, &a, &b.sub(&a));
        let val = q.iter().rev().fold(Dyadic::zero(), |acc, c| acc.mul(&x).add(c));
        prop_assert!(tr.eval_iv(&Enclosure::point(x), prec).contains(&val));
        if k >= f.len() - 1 {
            prop_assert!(tr.contains_coeffs(&q));
        }
    }

    #[test]
    fn truncation_at_full_degree_matches_full_test(f in small_poly(), (a, b) in interval(), bits in 8u64..128) {
        let prec = Precision::bits(bits);
        let p = ExactPolynomial::new(f);
        let src = OracleCache::new(&p);
        let n = src.degree();
        prop_assert_eq!(truncated_test(&src, &a, &b, n, prec), var_test(&src, &a, &b, prec));
        prop_assert_eq!(truncated_test(&src, &a, &b, n + 3, prec), var_test(&src, &a, &b, prec));
    }
}

fn interval_poly() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 0i64..12), 1..=8)
        .prop_map(|v| v.into_iter().map(|(lo, w)| (lo, lo + w)).collect())
}

fn selections(f: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in f {
        out = out
            .into_iter()
            .flat_map(|s| {
                [lo, hi].into_iter().map(move |c| {
                    let mut s = s.clone();
                    s.push(c);
                    s
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sign_variation_range_is_sound_and_tight(f in interval_poly(), samples in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 8), 100)) {
        let ip = IntervalPoly::new(f.iter().map(|&(lo, hi)| Enclosure::new(d(lo, 0), d(hi, 0))).collect());
        let SignVarRange { min, max } = sign_variations(&ip);
        for s in samples {
            let g: Vec<Dyadic> = f
                .iter()
                .zip(s)
                .map(|(&(lo, hi), t)| d(lo * 64 + ((hi - lo) as f64 * 64.0 * t) as i64, -6))
                .collect();
            let v = exact_var(&g);
            prop_assert!(min <= v && v <= max, "{} not in [{}, {}]", v, min, max);
        }
        let vars: Vec<usize> = selections(&f)
            .iter()
            .map(|s| exact_var(&s.iter().map(|&c| d(c, 0)).collect::<Vec<_>>()))
            .collect();
        prop_assert_eq!(vars.iter().min().copied(), Some(min));
        prop_assert_eq!(vars.iter().max().copied(), Some(max));
    }
}
