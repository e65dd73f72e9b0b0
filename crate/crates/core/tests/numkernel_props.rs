use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;
use wzmahler_core::numkernel::{gamma_real, ComplexHp, Dilog, PrecisionCtx};

const BITS: u32 = 128;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::new(BITS).unwrap()
}

/// Tolerance `2^(-bits/2)`.
fn half_tol() -> f64 {
    2f64.powi(-(BITS as i32) / 2)
}

fn point(c: &PrecisionCtx, re: f64, im: f64) -> ComplexHp {
    ComplexHp::new(c.real(re), c.real(im))
}

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec(), a - b).abs().to_f64()
}

fn complex_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_filter("away from the real axis", |(_, im)| im.abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn d_conjugate_antisymmetry((re, im) in complex_strategy()) {
        let c = ctx();
        let d = Dilog::new(&c);
        let z = point(&c, re, im);
        let a = d.bloch_wigner(&z).unwrap();
        let b = d.bloch_wigner(&z.conj()).unwrap();
        prop_assert!(diff(&a, &(-b)) < half_tol());
    }

    #[test]
    fn d_inversion((re, im) in complex_strategy()) {
        let c = ctx();
        let d = Dilog::new(&c);
        let z = point(&c, re, im);
        let a = d.bloch_wigner(&z).unwrap();
        let b = d.bloch_wigner(&z.recip()).unwrap();
        prop_assert!(diff(&a, &(-b)) < half_tol());
    }

    #[test]
    fn d_duplication((re, im) in complex_strategy()) {
        let c = ctx();
        let d = Dilog::new(&c);
        let z = point(&c, re, im);
        let lhs = d.bloch_wigner(&z.square()).unwrap() / 2u32;
        let rhs = d.bloch_wigner(&z).unwrap() + d.bloch_wigner(&(-z.clone())).unwrap();
        prop_assert!(diff(&lhs, &rhs) < half_tol());
    }

    #[test]
    fn d_vanishes_on_real_line(x in -50.0f64..50.0) {
        let c = ctx();
        let v = Dilog::new(&c).bloch_wigner(&point(&c, x, 0.0)).unwrap();
        prop_assert!(v.is_zero());
    }

    #[test]
    fn d_bounded_by_value_at_sixth_root((re, im) in complex_strategy()) {
        let c = ctx();
        let d = Dilog::new(&c);
        let max = d.bloch_wigner(&ComplexHp::expi(&(c.pi() / 3u32))).unwrap();
        let v = d.bloch_wigner(&point(&c, re, im)).unwrap();
        prop_assert!(v.abs() <= max + half_tol());
    }

    #[test]
    fn d_alternating_imaginary_powers(q in 0.01f64..0.99, k in -6i64..=6) {
        // (−1)ᵏ D(i q^{|k|}) = D(i(−q)ᵏ).
        let c = ctx();
        let d = Dilog::new(&c);
        let qf = c.real(q);
        let i = ComplexHp::i(c.prec());
        let lhs_pt = i.scale(&qf.clone().pow(k.unsigned_abs() as u32));
        let mut lhs = d.bloch_wigner(&lhs_pt).unwrap();
        if k % 2 != 0 {
            lhs = -lhs;
        }
        let mq = ComplexHp::from_real(-qf);
        let rhs_pt = &i * &mq.powi(k);
        let rhs = d.bloch_wigner(&rhs_pt).unwrap();
        prop_assert!(diff(&lhs, &rhs) < half_tol());
    }

    #[test]
    fn gamma_recurrence(x in -20.0f64..40.0) {
        prop_assume!((x - x.round()).abs() > 1e-6);
        let c = ctx();
        let xf = c.real(x);
        let g = gamma_real(&xf, &c).unwrap();
        let g1 = gamma_real(&(xf.clone() + 1u32), &c).unwrap();
        let rel = Float::with_val(c.prec(), &g1 - Float::with_val(c.prec(), &xf * &g)).abs() / g1.clone().abs();
        prop_assert!(rel.to_f64() < half_tol());
    }

    #[test]
    fn gamma_reflection(x in -10.0f64..10.0) {
        prop_assume!((x - x.round()).abs() > 1e-6);
        let c = ctx();
        let xf = c.real(x);
        let g = gamma_real(&xf, &c).unwrap();
        let gm = gamma_real(&(c.real(1) - &xf), &c).unwrap();
        let rhs = c.pi() / (c.pi() * &xf).sin();
        let lhs = g * gm;
        let rel = Float::with_val(c.prec(), &lhs - &rhs).abs() / rhs.clone().abs();
        prop_assert!(rel.to_f64() < half_tol());
    }
}

#[test]
fn d_at_i_matches_direct_catalan_series() {
    // Im Σ iⁿ/n² = Σ (−1)^j/(2j+1)², summed with a pairwise alternating tail bound.
    let c = ctx();
    let mut s = Float::with_val(c.prec(), 0);
    for j in 0..200_000u64 {
        let t = Float::with_val(c.prec(), (2 * j + 1) * (2 * j + 1)).recip();
        if j % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    let d = Dilog::new(&c)
        .bloch_wigner(&ComplexHp::i(c.prec()))
        .unwrap();
    assert!(diff(&d, &s) < 1e-11);
}
