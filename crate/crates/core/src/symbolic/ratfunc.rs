use std::fmt;

use rug::Rational;

use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Rational function in `n` and `k` in lowest terms with a monic
/// denominator, so equal functions are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

/// Arithmetic selector for [`ratfunc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFunc {
    /// `num/den` reduced to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let (den, lc) = den.monic();
        let num = num.scale(&Rational::from(lc.recip_ref()));
        Ok(Self { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `num/den` for coprime `num` and `den`; only the denominator is made
    /// monic.
    pub(crate) fn from_coprime(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (den, lc) = den.monic();
        let num = num.scale(&Rational::from(lc.recip_ref()));
        Ok(Self { num, den })
    }

    pub fn add(&self, o: &Self) -> Self {
        // With d = gcd(b, d'), a/b + c/d' = (a·d'/d + c·b/d) / (b·d'/d), and
        // any common factor of that numerator and denominator divides d.
        let d = self.den.gcd(&o.den);
        let b1 = self.den.div_exact(&d).expect("gcd divides");
        let d1 = o.den.div_exact(&d).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&o.num * &b1);
        if num.is_zero() {
            return Self::zero();
        }
        let den = &b1 * &o.den;
        let g = num.gcd(&d);
        if g.is_one() {
            return Self::from_coprime(num, den).expect("nonzero denominator");
        }
        Self::from_coprime(
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        )
        .expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        // Both operands are reduced, so cross-cancelling suffices.
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        Self::from_coprime(&a * &c, &b * &d).expect("nonzero denominator")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivideByZero);
        }
        let inv = Self::from_coprime(o.den.clone(), o.num.clone())?;
        Ok(self.mul(&inv))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `r(n + dn, k + dk)`.
    pub fn shift(&self, dn: &Rational, dk: &Rational) -> Self {
        // Translation is a ring automorphism that keeps the lexicographic
        // leading term, so the result is still reduced with a monic denominator.
        Self {
            num: self.num.shift(dn, dk),
            den: self.den.shift(dn, dk),
        }
    }

    /// Value at a point, `None` where the reduced denominator vanishes.
    pub fn eval(&self, n: &Rational, k: &Rational) -> Option<Rational> {
        let d = self.den.eval(n, k);
        if d == 0 {
            return None;
        }
        Some(self.num.eval(n, k) / d)
    }

    /// Restricts to `n = v` first, cancels common factors in `k`, then
    /// evaluates at `k = w`. This is the value used for hypergeometric terms
    /// at integer points, where removable singularities of the prefactor sit
    /// on the line `n = 0`.
    pub fn eval_n_first(&self, v: &Rational, w: &Rational) -> Option<Rational> {
        let num = self.num.subst_n(v);
        let den = self.den.subst_n(v);
        if den.is_zero() {
            return None;
        }
        let r = Self::new(num, den).ok()?;
        r.eval(v, w)
    }
}

/// `(a/g, b/g)` with `g = gcd(a, b)`.
fn cancel(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let g = a.gcd(b);
    if g.is_one() || g.is_zero() {
        return (a.clone(), b.clone());
    }
    (
        a.div_exact(&g).expect("gcd divides"),
        b.div_exact(&g).expect("gcd divides"),
    )
}

/// `a op b` in canonical form.
pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: RatOp) -> Result<RatFunc> {
    match op {
        RatOp::Add => Ok(a.add(b)),
        RatOp::Sub => Ok(a.sub(b)),
        RatOp::Mul => Ok(a.mul(b)),
        RatOp::Div => a.div(b),
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn r(n: &str, d: &str) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn subtraction_cancels() {
        let a = RatFunc::from_poly(p("n + k"));
        let b = RatFunc::from_poly(p("n"));
        assert_eq!(
            ratfunc_arith(&a, &b, RatOp::Sub).unwrap(),
            RatFunc::from_poly(p("k"))
        );
    }

    #[test]
    fn gcd_cancellation() {
        assert_eq!(
            r("n^2 + 2*n*k + k^2", "n + k"),
            RatFunc::from_poly(p("n + k"))
        );
        assert_eq!(r("2*n", "4*n*k + 2*n"), r("1", "2*k + 1"));
    }

    #[test]
    fn division_by_zero() {
        let a = RatFunc::one();
        assert_eq!(
            ratfunc_arith(&a, &RatFunc::zero(), RatOp::Div),
            Err(Error::DivideByZero)
        );
        assert_eq!(
            RatFunc::new(p("n"), MultiPoly::zero()),
            Err(Error::DivideByZero)
        );
    }

    #[test]
    fn n_first_evaluation_removes_line_singularity() {
        let g = r("k*(4*n + 2*k + 1)", "2*(n + k)*(2*n + 1)");
        assert_eq!(g.eval(&Rational::new(), &Rational::new()), None);
        assert_eq!(
            g.eval_n_first(&Rational::new(), &Rational::new()),
            Some(Rational::from((1, 2)))
        );
    }
}
