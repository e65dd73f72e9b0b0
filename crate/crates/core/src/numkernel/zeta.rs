use rug::{Float, Integer};

use super::bernoulli::bernoulli_table;
use super::PrecisionCtx;
use crate::error::{convergence, Error, Result};

/// ζ(s) for integer `s >= 2`: a direct head sum plus the Euler–Maclaurin
/// tail.
pub fn zeta_int(s: i64, ctx: &PrecisionCtx) -> Result<Float> {
    if s <= 1 {
        return Err(Error::Domain(format!("zeta_int needs s >= 2, got {s}")));
    }
    let s = s as u32;
    let prec = ctx.prec() + 16;
    let n = (prec / 4).max(16);
    let mut sum = Float::with_val(prec, 0);
    for m in 1..n {
        sum += Float::with_val(prec, Float::u_pow_u(m, s)).recip();
    }
    let nf = Float::with_val(prec, n);
    let n_pow = Float::with_val(prec, Float::u_pow_u(n, s));
    sum += Float::with_val(prec, &nf / &n_pow) / (s - 1);
    sum += n_pow.clone().recip() / 2u32;

    let mut eps = Float::with_val(prec, 1);
    eps >>= prec;
    let bern = bernoulli_table(prec as usize + 8);
    // Term j: B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}.
    let mut rising = Integer::from(s);
    let mut fact = Integer::from(2);
    let mut npow = Float::with_val(prec, &n_pow * &nf);
    let n2 = Float::with_val(prec, &nf * &nf);
    let mut prev = Float::with_val(prec, f64::INFINITY);
    let mut j = 1usize;
    while 2 * j < bern.len() {
        let t = Float::with_val(prec, &bern[2 * j]) * Float::with_val(prec, &rising)
            / Float::with_val(prec, &fact)
            / &npow;
        let at = t.clone().abs();
        if at > prev {
            return Err(convergence("zeta Euler-Maclaurin tail", j));
        }
        sum += &t;
        if at < eps {
            return Ok(Float::with_val(ctx.prec(), sum));
        }
        prev = at;
        let a = s as u64 + 2 * j as u64 - 1;
        rising *= a;
        rising *= a + 1;
        fact *= (2 * j + 1) as u64;
        fact *= (2 * j + 2) as u64;
        npow *= &n2;
        j += 1;
    }
    Err(convergence("zeta Euler-Maclaurin tail", j))
}

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(a: &Float, b: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    if *a <= 0 || *b <= 0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "agm needs positive arguments, got {} and {}",
            a.to_f64(),
            b.to_f64()
        )));
    }
    let prec = ctx.prec() + 8;
    let mut x = Float::with_val(prec, a);
    let mut y = Float::with_val(prec, b);
    let mut eps = Float::with_val(prec, 1);
    eps >>= prec - 4;
    for _ in 0..200 {
        let diff = Float::with_val(prec, &x - &y).abs();
        if diff <= Float::with_val(prec, &eps * &x) {
            return Ok(Float::with_val(ctx.prec(), x));
        }
        let next_x = Float::with_val(prec, &x + &y) / 2u32;
        let next_y = Float::with_val(prec, &x * &y).sqrt();
        x = next_x;
        y = next_y;
    }
    Err(convergence("agm iteration", 200))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn zeta_values_match_mpfr() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let z2 = zeta_int(2, &ctx).unwrap();
        assert!(close(&z2, &(ctx.pi().square() / 6u32), 1e-75));
        for s in 3..12u32 {
            let oracle = Float::with_val(ctx.prec(), Float::zeta_u(s));
            assert!(
                close(&zeta_int(s as i64, &ctx).unwrap(), &oracle, 1e-75),
                "zeta({s})"
            );
        }
        assert!(matches!(zeta_int(1, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta3_against_direct_sum() {
        // Σ_{n<2000} n⁻³ plus the integral tail bound 1/(2·2000²).
        let ctx = PrecisionCtx::new(64).unwrap();
        let mut s = 0.0f64;
        for n in 1..2000u32 {
            s += 1.0 / (n as f64).powi(3);
        }
        s += 1.0 / (2.0 * 2000.0f64.powi(2));
        let z3 = zeta_int(3, &ctx).unwrap().to_f64();
        assert!((z3 - s).abs() < 1e-9);
        assert!((z3 - 1.202_056_903_159_594).abs() < 1e-15);
    }

    #[test]
    fn agm_properties() {
        let ctx = PrecisionCtx::new(256).unwrap();
        let x = ctx.parse("2.5").unwrap();
        assert!(close(&agm(&x, &x, &ctx).unwrap(), &x, 1e-75));
        let one = ctx.real(1);
        let two = ctx.real(2);
        let a = agm(&one, &two, &ctx).unwrap();
        let b = agm(&ctx.real(1.5), &two.clone().sqrt(), &ctx).unwrap();
        assert!(close(&a, &b, 1e-75));
        let r2 = two.sqrt();
        let v = agm(&one, &r2, &ctx).unwrap();
        let oracle = ctx
            .parse("1.198140234735592207439922492280323878227")
            .unwrap();
        assert!(close(&v, &oracle, 1e-38));
        assert!(agm(&ctx.real(0), &one, &ctx).is_err());
    }
}
