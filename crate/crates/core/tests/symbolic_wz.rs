use rug::{Float, Rational};
use wzmahler_core::numkernel::PrecisionCtx;
use wzmahler_core::symbolic::{
    builtin_pair, parse_pairs, term_cross_ratio, term_eval_exact, term_eval_numeric,
    term_shift_ratio, wz_verify, CertStatus, Geom, HyperTerm, LinForm, MultiPoly, RatFunc, WzPair,
};
use wzmahler_core::Error;

fn p(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

fn rf(n: &str, d: &str) -> RatFunc {
    RatFunc::new(p(n), p(d)).unwrap()
}

#[test]
fn all_builtin_pairs_certify() {
    for name in ["wz-pair-1", "wz-pair-3", "wz-pair-divergent"] {
        let pair = builtin_pair(name).unwrap();
        let report = wz_verify(&pair).unwrap();
        assert_eq!(report.status, CertStatus::Pass, "{name}");
        assert!(report.witness.is_none());
        assert_eq!(report.random_points, 20);
        assert!(report.random_agrees, "{name}");
    }
}

#[test]
fn perturbed_certificate_fails_with_witness() {
    let pair = builtin_pair("wz-pair-1").unwrap();
    let bumped = pair.g.pre.add(&RatFunc::one());
    let bad = WzPair {
        name: "perturbed".into(),
        f: pair.f.clone(),
        g: pair.g.with_pre(bumped),
    };
    let report = wz_verify(&bad).unwrap();
    assert_eq!(report.status, CertStatus::Fail);
    assert!(report.witness.as_ref().is_some_and(|w| !w.is_zero()));
    assert!(report.random_agrees);
}

#[test]
fn pair_one_shift_ratio_fixture() {
    // Independently simplified: F(n+1,k)/F(n,k).
    let f = builtin_pair("wz-pair-1").unwrap().f;
    let r = term_shift_ratio(&f, 1, 0).unwrap();
    assert_eq!(
        r,
        rf("(k + n)*(2*n + 1)*(2*k + 2*n + 1)", "4*n*(k + n + 1)^2")
    );
}

#[test]
fn pair_one_cross_ratio() {
    let pair = builtin_pair("wz-pair-1").unwrap();
    let r = term_cross_ratio(&pair.g, &pair.f).unwrap();
    assert_eq!(r, rf("-k*(4*n + 2*k + 1)", "n*(2*n + 1)"));
    assert!(term_cross_ratio(&pair.f, &pair.f).unwrap().is_one());
}

#[test]
fn printed_half_index_form_is_rejected() {
    // Pair three with (1 + k/2)_n (1/2 + k/2)_n kept as written: a unit shift
    // in k moves those arguments by 1/2.
    let half = Rational::from((1, 2));
    let t = HyperTerm::new(
        [
            (LinForm::new(Rational::from(1), 1, half.clone()), -1),
            (LinForm::new(Rational::from(1), 0, half.clone()), 1),
            (LinForm::new(half.clone(), 1, half.clone()), -1),
            (LinForm::new(half.clone(), 0, half.clone()), 1),
        ],
        Geom::new(Rational::from((1, 16)), 1, 0).unwrap(),
        RatFunc::one(),
    );
    assert!(matches!(
        term_shift_ratio(&t, 0, 1),
        Err(Error::NonIntegerShift(_))
    ));
    assert!(term_shift_ratio(&t, 1, 0).is_ok());
    assert!(term_shift_ratio(&t, 0, 2).is_ok());
}

#[test]
fn shift_ratio_composes() {
    for name in ["wz-pair-1", "wz-pair-3", "wz-pair-divergent"] {
        let pair = builtin_pair(name).unwrap();
        for t in [&pair.f, &pair.g] {
            for (dn, dk) in [(1, 0), (0, 1)] {
                let one = term_shift_ratio(t, dn, dk).unwrap();
                let two = term_shift_ratio(t, 2 * dn, 2 * dk).unwrap();
                let next = one.shift(&Rational::from(dn), &Rational::from(dk));
                assert_eq!(two, one.mul(&next), "{name} ({dn},{dk})");
            }
        }
    }
}

#[test]
fn f_vanishes_on_first_row() {
    for name in ["wz-pair-1", "wz-pair-3"] {
        let f = builtin_pair(name).unwrap().f;
        for k in 0..=10 {
            assert_eq!(term_eval_exact(&f, 0, k).unwrap(), 0, "{name} k={k}");
        }
    }
}

#[test]
fn telescoping_is_exact() {
    for name in ["wz-pair-1", "wz-pair-3"] {
        let pair = builtin_pair(name).unwrap();
        for k in 0..=2 {
            for big_n in [1, 7, 50] {
                let mut lhs = Rational::new();
                for n in 0..=big_n {
                    lhs += term_eval_exact(&pair.g, n, k + 1).unwrap()
                        - term_eval_exact(&pair.g, n, k).unwrap();
                }
                let rhs = term_eval_exact(&pair.f, big_n + 1, k).unwrap()
                    - term_eval_exact(&pair.f, 0, k).unwrap();
                assert_eq!(lhs, rhs, "{name} k={k} N={big_n}");
            }
        }
    }
}

#[test]
fn f_decreases_along_powers_of_two() {
    let ctx = PrecisionCtx::new(128).unwrap();
    for name in ["wz-pair-1", "wz-pair-3"] {
        let f = builtin_pair(name).unwrap().f;
        for k in [0u32, 1, 3] {
            let mut prev: Option<Float> = None;
            for j in 0..=12 {
                let n = ctx.real(1u64 << j);
                let v = term_eval_numeric(&f, &n, &ctx.real(k), &ctx).unwrap().abs();
                // The ratio F(n+1,k)/F(n,k) exceeds 1 for small n once k > 0.
                if let (Some(pv), true) = (&prev, k == 0 || j >= 4) {
                    assert!(v < *pv, "{name} k={k} j={j}");
                }
                prev = Some(v);
            }
        }
    }
}

#[test]
fn values_at_half_index() {
    let ctx = PrecisionCtx::new(128).unwrap();
    let pi2 = ctx.pi().square();
    let f1 = builtin_pair("wz-pair-1").unwrap().f;
    let v = term_eval_numeric(&f1, &ctx.real(0.5), &ctx.real(0), &ctx).unwrap();
    let expect = Float::with_val(ctx.prec(), -2) / &pi2;
    assert!((v - expect).abs().to_f64() < 1e-35);
    let f3 = builtin_pair("wz-pair-3").unwrap().f;
    let v = term_eval_numeric(&f3, &ctx.real(0.5), &ctx.real(1), &ctx).unwrap();
    let expect = Float::with_val(ctx.prec(), -2) / (pi2 * 4u32);
    assert!((v - expect).abs().to_f64() < 1e-35);
}

#[test]
fn fixture_syntax_errors_are_located() {
    let text = "pair x\n  kernel gamma 1 0 0 1\n  F num n +\nend\n";
    assert!(matches!(
        parse_pairs(text),
        Err(Error::Parse { line: 3, .. })
    ));
}

mod ratfunc_props {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3), -5i64..6), 1..4).prop_map(|terms| {
            MultiPoly::from_terms(terms.into_iter().map(|(m, c)| (m, Rational::from(c))))
        })
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn add_sub_round_trip(a in small_ratfunc(), b in small_ratfunc()) {
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }

        #[test]
        fn mul_div_round_trip(a in small_ratfunc(), b in small_ratfunc()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_ratfunc(), b in small_ratfunc(), n in -9i64..9, k in -9i64..9) {
            let (n, k) = (Rational::from((2 * n + 1, 3)), Rational::from((k, 7)));
            let (Some(x), Some(y)) = (a.eval(&n, &k), b.eval(&n, &k)) else { return Ok(()) };
            if let Some(s) = a.add(&b).eval(&n, &k) {
                prop_assert_eq!(s, Rational::from(&x + &y));
            }
            if let Some(m) = a.mul(&b).eval(&n, &k) {
                prop_assert_eq!(m, x * y);
            }
        }
    }
}
