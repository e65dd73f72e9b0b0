use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::numkernel::{gamma_real, PrecisionCtx};

/// Affine form `c0 + cn·n + ck·k`.
///
/// The index coefficients are rational so that forms such as `n/2` can be
/// represented; shifts of such forms are rejected where an integer shift is
/// required.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm {
    pub c0: Rational,
    pub cn: Rational,
    pub ck: Rational,
}

impl LinForm {
    pub fn new(c0: Rational, cn: impl Into<Rational>, ck: impl Into<Rational>) -> Self {
        Self {
            c0,
            cn: cn.into(),
            ck: ck.into(),
        }
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::linear(&self.c0, &self.cn, &self.ck)
    }

    /// Change of the form under `(n, k) -> (n + dn, k + dk)`.
    pub fn shift_amount(&self, dn: i64, dk: i64) -> Rational {
        Rational::from(&self.cn * dn) + Rational::from(&self.ck * dk)
    }

    pub fn eval(&self, n: &Rational, k: &Rational) -> Rational {
        self.c0.clone() + Rational::from(&self.cn * n) + Rational::from(&self.ck * k)
    }

    /// Class under integer translation: forms in one class differ by an
    /// integer constant.
    fn class(&self) -> (Rational, Rational, Rational) {
        (self.cn.clone(), self.ck.clone(), frac(&self.c0))
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Fractional part in `[0, 1)`.
fn frac(q: &Rational) -> Rational {
    let fl = Integer::from(q.floor_ref());
    Rational::from(q - fl)
}

/// `base^(en·n + ek·k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Geom {
    pub base: Rational,
    pub en: i64,
    pub ek: i64,
}

impl Geom {
    pub fn trivial() -> Self {
        Self {
            base: Rational::from(1),
            en: 0,
            ek: 0,
        }
    }

    pub fn new(base: Rational, en: i64, ek: i64) -> Result<Self> {
        if base == 0 {
            return Err(Error::Domain("geometric base must be nonzero".into()));
        }
        if base == 1 || (en == 0 && ek == 0) {
            return Ok(Self::trivial());
        }
        Ok(Self { base, en, ek })
    }

    pub fn is_trivial(&self) -> bool {
        self.en == 0 && self.ek == 0
    }

    fn pow_at(&self, e: i64) -> Rational {
        pow_rational(&self.base, e)
    }
}

fn pow_rational(b: &Rational, e: i64) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e.unsigned_abs() {
        acc *= b;
    }
    if e < 0 {
        acc.recip_mut();
    }
    acc
}

/// Proper hypergeometric term `Π Γ(L_i)^{e_i} · base^(en·n+ek·k) · pre(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperTerm {
    gammas: BTreeMap<LinForm, i32>,
    pub geom: Geom,
    pub pre: RatFunc,
}

impl HyperTerm {
    pub fn new<I>(gammas: I, geom: Geom, pre: RatFunc) -> Self
    where
        I: IntoIterator<Item = (LinForm, i32)>,
    {
        let mut t = Self {
            gammas: BTreeMap::new(),
            geom,
            pre,
        };
        for (l, e) in gammas {
            t.push_gamma(l, e);
        }
        t
    }

    /// Multiplies by `Γ(l)^e`, merging with an existing equal form.
    pub fn push_gamma(&mut self, l: LinForm, e: i32) {
        let slot = self.gammas.entry(l.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.gammas.remove(&l);
        }
    }

    pub fn gammas(&self) -> impl Iterator<Item = (&LinForm, i32)> {
        self.gammas.iter().map(|(l, e)| (l, *e))
    }

    /// Same Gamma factors and geometric part, different prefactor.
    pub fn with_pre(&self, pre: RatFunc) -> Self {
        Self {
            gammas: self.gammas.clone(),
            geom: self.geom.clone(),
            pre,
        }
    }
}

/// Product of linear factors `Π num_i / Π den_j · scalar`, cancelling
/// equal factors before multiplying out.
#[derive(Default)]
struct FactorRatio {
    num: Vec<MultiPoly>,
    den: Vec<MultiPoly>,
    scalar: Option<Rational>,
}

impl FactorRatio {
    fn scalar_mut(&mut self) -> &mut Rational {
        self.scalar.get_or_insert_with(|| Rational::from(1))
    }

    fn push(&mut self, p: MultiPoly, upper: bool) -> Result<()> {
        let (monic, lc) = p.monic();
        if p.is_zero() {
            if upper {
                *self.scalar_mut() = Rational::new();
                return Ok(());
            }
            return Err(Error::DivideByZero);
        }
        if upper {
            *self.scalar_mut() *= lc;
        } else {
            *self.scalar_mut() /= lc;
        }
        if monic.is_one() {
            return Ok(());
        }
        let (this, other) = if upper {
            (&mut self.num, &mut self.den)
        } else {
            (&mut self.den, &mut self.num)
        };
        if let Some(pos) = other.iter().position(|q| *q == monic) {
            other.swap_remove(pos);
        } else {
            this.push(monic);
        }
        Ok(())
    }

    /// `Γ(L + m)/Γ(L)`, raised to `e`.
    fn push_gamma_shift(&mut self, l: &MultiPoly, m: i64, e: i32) -> Result<()> {
        for _ in 0..e.unsigned_abs() {
            if m >= 0 {
                for i in 0..m {
                    self.push(l + &MultiPoly::constant(Rational::from(i)), e > 0)?;
                }
            } else {
                for i in 1..=(-m) {
                    self.push(l - &MultiPoly::constant(Rational::from(i)), e < 0)?;
                }
            }
        }
        Ok(())
    }

    /// Distinct monic linear factors are coprime, so only pairs involving a
    /// nonlinear factor need a gcd. Pairwise coprime factors give coprime
    /// products.
    fn finish(mut self) -> Result<RatFunc> {
        for i in 0..self.num.len() {
            for j in 0..self.den.len() {
                let (a, b) = (&self.num[i], &self.den[j]);
                if a.is_one() || b.is_one() || (is_linear(a) && is_linear(b)) {
                    continue;
                }
                let g = a.gcd(b);
                if !g.is_one() {
                    self.num[i] = a.div_exact(&g).expect("gcd divides");
                    self.den[j] = b.div_exact(&g).expect("gcd divides");
                }
            }
        }
        let scalar = self.scalar.unwrap_or_else(|| Rational::from(1));
        let mut num = MultiPoly::constant(scalar);
        for f in &self.num {
            num = &num * f;
        }
        let mut den = MultiPoly::one();
        for f in &self.den {
            den = &den * f;
        }
        RatFunc::from_coprime(num, den)
    }
}

fn integer_shift(amount: &Rational, what: &LinForm) -> Result<i64> {
    if *amount.denom() != 1 {
        return Err(Error::NonIntegerShift(format!(
            "argument {what} moves by {amount}"
        )));
    }
    amount
        .numer()
        .to_i64()
        .ok_or_else(|| Error::NonIntegerShift(format!("shift {amount} too large")))
}

/// `T(n + dn, k + dk) / T(n, k)` as an exact rational function.
///
/// Fails with `NonIntegerShift` if some Gamma argument moves by a
/// non-integer amount (the ratio is then not rational).
pub fn term_shift_ratio(t: &HyperTerm, dn: i64, dk: i64) -> Result<RatFunc> {
    let mut acc = FactorRatio::default();
    for (l, e) in t.gammas() {
        let m = integer_shift(&l.shift_amount(dn, dk), l)?;
        acc.push_gamma_shift(&l.to_poly(), m, e)?;
    }
    *acc.scalar_mut() *= t.geom.pow_at(t.geom.en * dn + t.geom.ek * dk);
    if t.pre.is_zero() {
        return Err(Error::DivideByZero);
    }
    let moved = t.pre.shift(&Rational::from(dn), &Rational::from(dk));
    acc.push(moved.num().clone(), true)?;
    acc.push(t.pre.den().clone(), true)?;
    acc.push(moved.den().clone(), false)?;
    acc.push(t.pre.num().clone(), false)?;
    acc.finish()
}

fn is_linear(p: &MultiPoly) -> bool {
    p.degree().is_some_and(|d| d <= 1)
}

/// `A(n, k) / B(n, k)` as an exact rational function.
///
/// Gamma factors are matched within classes of arguments that differ by an
/// integer; each class must carry net exponent zero, and the geometric parts
/// must agree.
pub fn term_cross_ratio(a: &HyperTerm, b: &HyperTerm) -> Result<RatFunc> {
    if a.geom != b.geom {
        return Err(Error::NonComparable(format!(
            "geometric parts differ: {:?} vs {:?}",
            a.geom, b.geom
        )));
    }
    let mut merged: BTreeMap<LinForm, i32> = a.gammas.clone();
    for (l, e) in b.gammas() {
        let slot = merged.entry(l.clone()).or_insert(0);
        *slot -= e;
        if *slot == 0 {
            merged.remove(l);
        }
    }
    type Class = (Rational, Rational, Rational);
    let mut classes: BTreeMap<Class, (Vec<LinForm>, Vec<LinForm>)> = BTreeMap::new();
    for (l, e) in &merged {
        let entry = classes.entry(l.class()).or_default();
        let side = if *e > 0 { &mut entry.0 } else { &mut entry.1 };
        for _ in 0..e.unsigned_abs() {
            side.push(l.clone());
        }
    }
    let mut acc = FactorRatio::default();
    for (class, (ups, downs)) in classes {
        if ups.len() != downs.len() {
            return Err(Error::NonComparable(format!(
                "Gamma factors with index part ({}, {}) and offset class {} do not pair up",
                class.0, class.1, class.2
            )));
        }
        for (u, d) in ups.iter().zip(&downs) {
            let m = Rational::from(&u.c0 - &d.c0);
            let m = m
                .numer()
                .to_i64()
                .ok_or_else(|| Error::NonComparable("offset too large".into()))?;
            acc.push_gamma_shift(&d.to_poly(), m, 1)?;
        }
    }
    let gamma_part = acc.finish()?;
    Ok(gamma_part.mul(&a.pre.div(&b.pre)?))
}

/// `T(n, k)` at real indices via Γ.
pub fn term_eval_numeric(t: &HyperTerm, n: &Float, k: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    let prec = ctx.prec();
    let nq = n
        .to_rational()
        .ok_or_else(|| Error::Domain("index is not finite".into()))?;
    let kq = k
        .to_rational()
        .ok_or_else(|| Error::Domain("index is not finite".into()))?;
    let pre = t
        .pre
        .eval(&nq, &kq)
        .ok_or_else(|| Error::Pole(format!("prefactor denominator vanishes at ({nq}, {kq})")))?;
    let mut out = Float::with_val(prec, &pre);
    if out.is_zero() {
        return Ok(out);
    }
    for (l, e) in t.gammas() {
        let arg = Float::with_val(prec, &l.eval(&nq, &kq));
        let g = gamma_real(&arg, ctx)?;
        if e > 0 {
            for _ in 0..e {
                out *= &g;
            }
        } else {
            for _ in 0..-e {
                out /= &g;
            }
        }
    }
    if !t.geom.is_trivial() {
        let base = Float::with_val(prec, &t.geom.base);
        let ex = Float::with_val(prec, n * t.geom.en) + Float::with_val(prec, k * t.geom.ek);
        if base < 0 {
            return Err(Error::Domain(
                "negative geometric base at real index".into(),
            ));
        }
        out *= base.pow(&ex);
    }
    Ok(out)
}

/// `T(n, k)` at integer indices, exactly.
///
/// Gamma values are reduced within classes of arguments that differ by an
/// integer; each class must have net exponent zero at the point. The
/// prefactor is restricted to `n` first (see [`RatFunc::eval_n_first`]).
pub fn term_eval_exact(t: &HyperTerm, n: i64, k: i64) -> Result<Rational> {
    let nq = Rational::from(n);
    let kq = Rational::from(k);
    let pre = t
        .pre
        .eval_n_first(&nq, &kq)
        .ok_or_else(|| Error::Pole(format!("prefactor has a pole at ({n}, {k})")))?;
    if pre == 0 {
        return Ok(pre);
    }
    let mut classes: BTreeMap<Rational, Vec<(Rational, i32)>> = BTreeMap::new();
    for (l, e) in t.gammas() {
        let v = l.eval(&nq, &kq);
        if *v.denom() == 1 && v <= 0 {
            return Err(Error::Pole(format!("Gamma argument {v} at ({n}, {k})")));
        }
        classes.entry(frac(&v)).or_default().push((v, e));
    }
    let mut acc = pre;
    for (f, items) in classes {
        let net: i32 = items.iter().map(|(_, e)| e).sum();
        // Γ at positive integers is rational, so that class needs no balance.
        if f == 0 {
            for (v, e) in items {
                let m = v.numer().to_u32().expect("small integer argument");
                let fact = Rational::from(Integer::from(Integer::factorial(m - 1)));
                for _ in 0..e.unsigned_abs() {
                    if e > 0 {
                        acc *= &fact;
                    } else {
                        acc /= &fact;
                    }
                }
            }
            continue;
        }
        if net != 0 {
            return Err(Error::NonComparable(format!(
                "Gamma factors with fractional part {f} do not cancel at ({n}, {k})"
            )));
        }
        let base = f;
        for (v, e) in items {
            // Γ(v)/Γ(base) with v − base an integer.
            let m = Rational::from(&v - &base)
                .numer()
                .to_i64()
                .expect("small offset");
            let mut r = Rational::from(1);
            if m >= 0 {
                let mut x = base.clone();
                for _ in 0..m {
                    r *= &x;
                    x += 1u32;
                }
            } else {
                let mut x = v.clone();
                for _ in 0..-m {
                    r /= &x;
                    x += 1u32;
                }
            }
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    acc *= &r;
                } else {
                    acc /= &r;
                }
            }
        }
    }
    if !t.geom.is_trivial() {
        acc *= t.geom.pow_at(t.geom.en * n + t.geom.ek * k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn pochhammer_k() -> HyperTerm {
        // (k)_n = Γ(k + n)/Γ(k).
        HyperTerm::new(
            [
                (LinForm::new(q(0, 1), 1, 1), 1),
                (LinForm::new(q(0, 1), 0, 1), -1),
            ],
            Geom::trivial(),
            RatFunc::one(),
        )
    }

    #[test]
    fn pochhammer_recurrence() {
        let r = term_shift_ratio(&pochhammer_k(), 1, 0).unwrap();
        assert_eq!(r, RatFunc::from_poly("n + k".parse().unwrap()));
    }

    #[test]
    fn geometric_factor_in_ratio() {
        let t = HyperTerm::new([], Geom::new(q(1, 16), 1, 0).unwrap(), RatFunc::one());
        assert_eq!(
            term_shift_ratio(&t, 1, 0).unwrap(),
            RatFunc::constant(q(1, 16))
        );
        assert_eq!(
            term_shift_ratio(&t, -2, 5).unwrap(),
            RatFunc::constant(q(256, 1))
        );
    }

    #[test]
    fn half_index_forms() {
        let t = HyperTerm::new(
            [(LinForm::new(q(1, 3), q(1, 2), 0), 1)],
            Geom::trivial(),
            RatFunc::one(),
        );
        assert!(matches!(
            term_shift_ratio(&t, 1, 0),
            Err(Error::NonIntegerShift(_))
        ));
        assert!(term_shift_ratio(&t, 2, 0).is_ok());
        let plain = HyperTerm::new([], Geom::trivial(), RatFunc::one());
        assert!(matches!(
            term_cross_ratio(&t, &plain),
            Err(Error::NonComparable(_))
        ));
        assert!(term_cross_ratio(&t, &t).unwrap().is_one());
    }

    #[test]
    fn exact_and_numeric_evaluation_agree() {
        let t = pochhammer_k();
        // (3)_4 = 3·4·5·6.
        assert_eq!(term_eval_exact(&t, 4, 3).unwrap(), 360);
        let ctx = PrecisionCtx::new(128).unwrap();
        let v = term_eval_numeric(&t, &ctx.real(4), &ctx.real(3), &ctx).unwrap();
        assert!((v.to_f64() - 360.0).abs() < 1e-20);
    }
}
