use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Float;

/// Complex number with [`Float`] parts at a common precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexHp {
    pub re: Float,
    pub im: Float,
}

impl ComplexHp {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::with_val(re.prec(), 0);
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Float::with_val(prec, 0), Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(Float::with_val(prec, 1), Float::with_val(prec, 0))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(Float::with_val(prec, 0), Float::with_val(prec, 1))
    }

    /// `r·e^{iθ}`.
    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self::new(c * r, s * r)
    }

    /// `e^{iθ}`.
    pub fn expi(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Self::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = self.re.clone().square();
        n += self.im.clone().square();
        n
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn scale(&self, s: &Float) -> Self {
        Self::new(self.re.clone() * s, self.im.clone() * s)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(self.re.clone() / &n, -(self.im.clone() / &n))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Self {
        let r = self.re.clone().exp();
        Self::from_polar(&r, &self.im)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self^n` for integer `n` by repeated squaring.
    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Self::new(Float::with_val(self.prec(), 1) - &self.re, -self.im.clone())
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<'a> Add<&'a ComplexHp> for &'a ComplexHp {
    type Output = ComplexHp;
    fn add(self, rhs: &ComplexHp) -> ComplexHp {
        ComplexHp::new(self.re.clone() + &rhs.re, self.im.clone() + &rhs.im)
    }
}

impl<'a> Sub<&'a ComplexHp> for &'a ComplexHp {
    type Output = ComplexHp;
    fn sub(self, rhs: &ComplexHp) -> ComplexHp {
        ComplexHp::new(self.re.clone() - &rhs.re, self.im.clone() - &rhs.im)
    }
}

impl<'a> Mul<&'a ComplexHp> for &'a ComplexHp {
    type Output = ComplexHp;
    fn mul(self, rhs: &ComplexHp) -> ComplexHp {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re.clone() * &rhs.im + self.im.clone() * &rhs.re;
        ComplexHp::new(re, im)
    }
}

impl<'a> Div<&'a ComplexHp> for &'a ComplexHp {
    type Output = ComplexHp;
    fn div(self, rhs: &ComplexHp) -> ComplexHp {
        let n = rhs.norm_sqr();
        let re = (self.re.clone() * &rhs.re + self.im.clone() * &rhs.im) / &n;
        let im = (self.im.clone() * &rhs.re - self.re.clone() * &rhs.im) / &n;
        ComplexHp::new(re, im)
    }
}

impl Neg for ComplexHp {
    type Output = ComplexHp;
    fn neg(self) -> ComplexHp {
        ComplexHp::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexHp> for ComplexHp {
            type Output = ComplexHp;
            fn $m(self, rhs: ComplexHp) -> ComplexHp {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexHp> for ComplexHp {
            type Output = ComplexHp;
            fn $m(self, rhs: &ComplexHp) -> ComplexHp {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexHp {
        ComplexHp::new(Float::with_val(128, re), Float::with_val(128, im))
    }

    #[test]
    fn field_ops() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        let q = &(&a * &b) / &b;
        assert!((q.re.to_f64() - 1.5).abs() < 1e-30);
        assert!((q.im.to_f64() + 2.0).abs() < 1e-30);
        let p = a.powi(-3);
        let back = &p * &a.powi(3);
        assert!((back.re.to_f64() - 1.0).abs() < 1e-30 && back.im.to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = c(-0.3, 2.5);
        let w = z.ln().exp();
        assert!((&w - &z).abs().to_f64() < 1e-30);
        assert!((c(-1.0, 0.0).arg().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
