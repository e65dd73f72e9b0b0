use std::sync::OnceLock;

use rug::{Float, Integer};

use super::bernoulli::bernoulli_table;
use super::{ComplexHp, PrecisionCtx};
use crate::error::{convergence, Result};

/// Dilogarithm evaluator bound to one precision.
///
/// Holds the coefficients `B_n/(n+1)!` of the series in `w = -ln(1-z)`, built
/// on first use, so repeated evaluations (lattice sums) share them.
#[derive(Debug)]
pub struct Dilog {
    ctx: PrecisionCtx,
    coeffs: OnceLock<Vec<Float>>,
}

impl Dilog {
    pub fn new(ctx: &PrecisionCtx) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    fn coeffs(&self) -> &[Float] {
        self.coeffs.get_or_init(|| {
            let prec = self.ctx.prec();
            // |w| <= 1.8 against a radius of 2π: about 1.8 bits per term.
            let count = (prec as usize * 10) / 17 + 16;
            let bern = bernoulli_table(count + 1);
            let mut fact = Integer::from(1);
            let mut out = Vec::with_capacity(count + 1);
            for n in 0..=count {
                fact *= (n + 1) as u32;
                out.push(Float::with_val(prec, &bern[n]) / Float::with_val(prec, &fact));
            }
            out
        })
    }

    /// Principal-branch Li₂(z), branch cut `[1, ∞)`. On the cut the value is
    /// the limit from below, so `Im Li₂(x) = -π ln x` for `x > 1`.
    pub fn li2(&self, z: &ComplexHp) -> Result<ComplexHp> {
        let prec = self.ctx.prec();
        let z = ComplexHp::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im));
        if z.is_zero() {
            return Ok(ComplexHp::zero(prec));
        }
        let pi2_6 = self.ctx.pi().square() / 6u32;
        if z.is_real() && z.re == 1 {
            return Ok(ComplexHp::from_real(pi2_6));
        }
        if z.is_real() && z.re > 1 {
            // Li₂(x) = π²/3 − ½ln²x − Li₂(1/x) − iπ ln x.
            let ln_x = z.re.clone().ln();
            let inv = ComplexHp::from_real(Float::with_val(prec, 1) / &z.re);
            let li = self.li2_unit_disk(&inv)?;
            let re = pi2_6 * 2u32 - ln_x.clone().square() / 2u32 - li.re;
            let im = -(self.ctx.pi() * ln_x);
            return Ok(ComplexHp::new(re, im));
        }
        if z.norm_sqr() > 1 {
            // Li₂(z) = −Li₂(1/z) − π²/6 − ½ln²(−z).
            let inv = self.li2_unit_disk(&z.recip())?;
            let l = (-z.clone()).ln().square();
            let re = -inv.re - pi2_6 - l.re / 2u32;
            let im = -inv.im - l.im / 2u32;
            return Ok(ComplexHp::new(re, im));
        }
        self.li2_unit_disk(&z)
    }

    /// Li₂ on `|z| <= 1`.
    fn li2_unit_disk(&self, z: &ComplexHp) -> Result<ComplexHp> {
        let prec = self.ctx.prec();
        let quarter = Float::with_val(prec, 0.25);
        if z.norm_sqr() <= quarter {
            return self.direct_series(z);
        }
        let one_minus = z.one_minus();
        if one_minus.is_zero() {
            return Ok(ComplexHp::from_real(self.ctx.pi().square() / 6u32));
        }
        if one_minus.norm_sqr() <= quarter {
            // Li₂(z) = π²/6 − ln z ln(1−z) − Li₂(1−z).
            let li = self.direct_series(&one_minus)?;
            let prod = &z.ln() * &one_minus.ln();
            let pi2_6 = self.ctx.pi().square() / 6u32;
            let re = pi2_6 - prod.re - li.re;
            let im = -prod.im - li.im;
            return Ok(ComplexHp::new(re, im));
        }
        self.bernoulli_series(z)
    }

    /// Σ zⁿ/n², for `|z| <= 1/2`.
    fn direct_series(&self, z: &ComplexHp) -> Result<ComplexHp> {
        let prec = self.ctx.prec();
        let tol = self.ctx.eps();
        let mut pow = z.clone();
        let mut sum = z.clone();
        let limit = self.ctx.max_terms().max(2);
        for n in 2..=limit {
            pow = &pow * z;
            let t = pow.scale(&(Float::with_val(prec, 1) / (n as u64 * n as u64)));
            sum = &sum + &t;
            if t.norm_sqr().sqrt() < tol {
                return Ok(sum);
            }
        }
        Err(convergence("dilogarithm power series", limit))
    }

    /// Σ B_n wⁿ⁺¹/(n+1)! with `w = −ln(1−z)`.
    fn bernoulli_series(&self, z: &ComplexHp) -> Result<ComplexHp> {
        let prec = self.ctx.prec();
        let tol = self.ctx.eps();
        let w = -z.one_minus().ln();
        let w2 = w.square();
        let c = self.coeffs();
        // n = 0 and n = 1 terms, then even n only.
        let mut sum = &w + &w2.scale(&c[1]);
        let mut pow = w.clone();
        let mut n = 2;
        while n < c.len() {
            pow = &pow * &w2;
            let t = pow.scale(&c[n]);
            sum = &sum + &t;
            if t.norm_sqr().sqrt() < tol {
                return Ok(sum);
            }
            n += 2;
        }
        let _ = prec;
        Err(convergence("dilogarithm Bernoulli series", c.len()))
    }

    /// Bloch–Wigner `D(z) = Im Li₂(z) + arg(1−z) ln|z|`, with `D = 0` on the
    /// real line (including 0, 1 and ∞).
    pub fn bloch_wigner(&self, z: &ComplexHp) -> Result<Float> {
        let prec = self.ctx.prec();
        if z.im.is_zero() {
            return Ok(Float::with_val(prec, 0));
        }
        let z = ComplexHp::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im));
        if z.norm_sqr() > 1 {
            return Ok(-self.bloch_wigner_disk(&z.recip())?);
        }
        self.bloch_wigner_disk(&z)
    }

    fn bloch_wigner_disk(&self, z: &ComplexHp) -> Result<Float> {
        let li = self.li2_unit_disk(z)?;
        let arg = z.one_minus().arg();
        let ln_abs = z.norm_sqr().ln() / 2u32;
        Ok(li.im + arg * ln_abs)
    }
}

/// Principal-branch Li₂(z) at the context precision.
pub fn li2_complex(z: &ComplexHp, ctx: &PrecisionCtx) -> Result<ComplexHp> {
    Dilog::new(ctx).li2(z)
}

/// Bloch–Wigner dilogarithm `D(z)`.
pub fn bloch_wigner(z: &ComplexHp, ctx: &PrecisionCtx) -> Result<Float> {
    Dilog::new(ctx).bloch_wigner(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256).unwrap()
    }

    fn cz(c: &PrecisionCtx, re: &str, im: &str) -> ComplexHp {
        ComplexHp::new(c.parse(re).unwrap(), c.parse(im).unwrap())
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn special_values() {
        let c = ctx();
        let zero = li2_complex(&cz(&c, "0", "0"), &c).unwrap();
        assert!(zero.is_zero());
        let one = li2_complex(&cz(&c, "1", "0"), &c).unwrap();
        assert!(close(&one.re, &(c.pi().square() / 6u32), 1e-75));
        let half = li2_complex(&cz(&c, "0.5", "0"), &c).unwrap();
        let expect = c.pi().square() / 12u32 - c.ln2().square() / 2u32;
        assert!(close(&half.re, &expect, 1e-75));
    }

    #[test]
    fn real_values_match_mpfr() {
        let c = ctx();
        for v in [
            "-7.5", "-1", "-0.3", "0.2", "0.6", "0.77", "0.95", "1.7", "12",
        ] {
            let x = c.parse(v).unwrap();
            let ours = li2_complex(&ComplexHp::from_real(x.clone()), &c).unwrap();
            let oracle = x.clone().li2();
            assert!(close(&ours.re, &oracle, 1e-74), "Li2({v})");
        }
        let two = li2_complex(&ComplexHp::from_real(c.real(2)), &c).unwrap();
        assert!(close(&two.im, &(-(c.pi() * c.ln2())), 1e-75));
    }

    #[test]
    fn complex_agrees_across_regions() {
        // Landen-type check: Li₂(z) + Li₂(z/(z−1)) = −½ ln²(1−z) for z off [1, ∞).
        let c = ctx();
        let d = Dilog::new(&c);
        for (re, im) in [
            ("0.3", "0.4"),
            ("-0.6", "0.7"),
            ("0.55", "-0.8"),
            ("2.0", "1.5"),
            ("-3", "-0.2"),
            ("0.9", "0.1"),
        ] {
            let z = cz(&c, re, im);
            let w = &z / &(&z - &ComplexHp::one(c.prec()));
            let lhs = &d.li2(&z).unwrap() + &d.li2(&w).unwrap();
            let l = z.one_minus().ln().square();
            assert!(close(&lhs.re, &(-(l.re / 2u32)), 1e-70), "re at {re}+{im}i");
            assert!(close(&lhs.im, &(-(l.im / 2u32)), 1e-70), "im at {re}+{im}i");
        }
    }

    #[test]
    fn bloch_wigner_at_i_is_catalan() {
        let c = ctx();
        let d = bloch_wigner(&cz(&c, "0", "1"), &c).unwrap();
        let catalan = Float::with_val(c.prec(), rug::float::Constant::Catalan);
        assert!(close(&d, &catalan, 1e-75));
        assert!(bloch_wigner(&cz(&c, "0.7", "0"), &c).unwrap().is_zero());
    }
}
