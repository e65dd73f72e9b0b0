//! Elliptic curves `y² = 4x³ − g₂x − g₃` over ℚ: exact group law and torsion
//! orders, periods by the AGM, Weierstrass ℘/℘′ as q-series, and elliptic
//! dilogarithms at torsion locations.

use std::fmt;

use rug::{Float, Rational};

use crate::error::{convergence, Error, Result};
use crate::numkernel::{agm, real_roots, ComplexHp, Dilog, PrecisionCtx};

/// Curve `y² = 4x³ − g₂x − g₃` with `g₂³ − 27g₃² ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticCurve {
    g2: Rational,
    g3: Rational,
}

/// A point of an [`EllipticCurve`]: the identity at infinity or an affine
/// rational point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Rational, Rational),
}

/// Position `u = aω + bω′` of a point in the period lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionLocation {
    pub a: Rational,
    pub b: Rational,
}

/// Real and imaginary periods of a curve with three real 2-torsion points.
#[derive(Debug, Clone, PartialEq)]
pub struct Periods {
    pub omega: ComplexHp,
    pub omega_prime: ComplexHp,
    pub tau: ComplexHp,
    pub q: ComplexHp,
    /// Roots `e₁ > e₂ > e₃` of `4x³ − g₂x − g₃`.
    pub roots: [Float; 3],
}

impl EllipticCurve {
    pub fn new(g2: Rational, g3: Rational) -> Result<Self> {
        let e = Self { g2, g3 };
        if e.discriminant() == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn g2(&self) -> &Rational {
        &self.g2
    }

    pub fn g3(&self) -> &Rational {
        &self.g3
    }

    /// `g₂³ − 27g₃²`.
    pub fn discriminant(&self) -> Rational {
        let g2c = Rational::from(&self.g2 * &self.g2) * &self.g2;
        let g3s = Rational::from(&self.g3 * &self.g3) * 27u32;
        g2c - g3s
    }

    /// `J = g₂³/(g₂³ − 27g₃²)`.
    pub fn j_invariant(&self) -> Rational {
        let g2c = Rational::from(&self.g2 * &self.g2) * &self.g2;
        g2c / self.discriminant()
    }

    /// `4x³ − g₂x − g₃`.
    fn rhs(&self, x: &Rational) -> Rational {
        let x3 = Rational::from(x * x) * x * 4u32;
        x3 - Rational::from(&self.g2 * x) - &self.g3
    }
}

impl CurvePoint {
    pub fn affine(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        CurvePoint::Affine(x.into(), y.into())
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(x),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), Rational::from(-y)),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl TorsionLocation {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }
}

/// `E(k, ℓ)`: `g₂ = 27(k⁴ − 16k² + 16)ℓ²`, `g₃ = −27(k⁶ − 24k⁴ + 120k² + 64)ℓ³`,
/// parameterized by `k²` so that `k = 3√2` stays rational.
pub fn curve_from_family(ksq: &Rational, ell: &Rational) -> Result<EllipticCurve> {
    if *ksq <= 0 || *ell == 0 {
        return Err(Error::Domain(format!(
            "family needs k² > 0 and ℓ ≠ 0, got {ksq}, {ell}"
        )));
    }
    let k2 = ksq.clone();
    let k4 = Rational::from(&k2 * &k2);
    let k6 = Rational::from(&k4 * &k2);
    let ell2 = Rational::from(ell * ell);
    let ell3 = Rational::from(&ell2 * ell);
    let a = Rational::from(&k4 - Rational::from(&k2 * 16u32)) + 16u32;
    let b =
        Rational::from(&k6 - Rational::from(&k4 * 24u32)) + Rational::from(&k2 * 120u32) + 64u32;
    let g2 = a * ell2 * 27u32;
    let g3 = -(b * ell3 * 27u32);
    EllipticCurve::new(g2, g3)
}

/// Exact check of `y² = 4x³ − g₂x − g₃`; the point at infinity is on every curve.
pub fn is_on_curve(e: &EllipticCurve, p: &CurvePoint) -> bool {
    match p {
        CurvePoint::Infinity => true,
        CurvePoint::Affine(x, y) => Rational::from(y * y) == e.rhs(x),
    }
}

/// Chord–tangent sum for the `4x³` normalization: with slope λ,
/// `x₃ = λ²/4 − x₁ − x₂`.
pub fn point_add(e: &EllipticCurve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (CurvePoint::Infinity, _) => return q.clone(),
        (_, CurvePoint::Infinity) => return p.clone(),
        (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let lambda = if x1 == x2 {
        if *y1 != *y2 || *y1 == 0 {
            return CurvePoint::Infinity;
        }
        let num = Rational::from(x1 * x1) * 12u32 - &e.g2;
        num / Rational::from(y1 * 2u32)
    } else {
        Rational::from(y2 - y1) / Rational::from(x2 - x1)
    };
    let x3 = Rational::from(&lambda * &lambda) / 4u32 - x1 - x2;
    let y3 = -(lambda * Rational::from(&x3 - x1) + y1);
    CurvePoint::Affine(x3, y3)
}

/// `m·P` by double-and-add; negative `m` negates.
pub fn point_mul(e: &EllipticCurve, m: i64, p: &CurvePoint) -> CurvePoint {
    let mut base = if m < 0 { p.neg() } else { p.clone() };
    let mut k = m.unsigned_abs();
    let mut acc = CurvePoint::Infinity;
    while k > 0 {
        if k & 1 == 1 {
            acc = point_add(e, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = point_add(e, &base, &base);
        }
    }
    acc
}

/// Least `m <= max` with `mP = O`, or `None`.
pub fn point_order(e: &EllipticCurve, p: &CurvePoint, max: u32) -> Option<u32> {
    let mut acc = p.clone();
    for m in 1..=max {
        if acc == CurvePoint::Infinity {
            return Some(m);
        }
        acc = point_add(e, &acc, p);
    }
    None
}

/// `ω = π/agm(√(e₁−e₃), √(e₁−e₂))`, `ω′ = iπ/agm(√(e₁−e₃), √(e₂−e₃))`,
/// `τ = ω′/ω`, `q = e^{2πiτ}`.
pub fn periods(e: &EllipticCurve, ctx: &PrecisionCtx) -> Result<Periods> {
    if e.discriminant() < 0 {
        return Err(Error::ComplexRootsUnsupported);
    }
    let prec = ctx.prec();
    let coeffs = [
        -ctx.rational(&e.g3),
        -ctx.rational(&e.g2),
        ctx.real(0),
        ctx.real(4),
    ];
    let r = real_roots(&coeffs, ctx)?;
    let [e1, e2, e3]: [Float; 3] = r.try_into().map_err(|_| Error::ComplexRootsUnsupported)?;
    let d13 = Float::with_val(prec, &e1 - &e3).sqrt();
    let d12 = Float::with_val(prec, &e1 - &e2).sqrt();
    let d23 = Float::with_val(prec, &e2 - &e3).sqrt();
    let w = ctx.pi() / agm(&d13, &d12, ctx)?;
    let wp = ctx.pi() / agm(&d13, &d23, ctx)?;
    let t = Float::with_val(prec, &wp / &w);
    let q = (-(ctx.pi() * 2u32) * &t).exp();
    Ok(Periods {
        omega: ComplexHp::from_real(w),
        omega_prime: ComplexHp::new(ctx.real(0), wp),
        tau: ComplexHp::new(ctx.real(0), t),
        q: ComplexHp::from_real(q),
        roots: [e1, e2, e3],
    })
}

impl Periods {
    /// Real period `ω`.
    fn w(&self) -> &Float {
        &self.omega.re
    }

    /// `Im τ`.
    fn t(&self) -> &Float {
        &self.tau.im
    }

    fn nome(&self) -> &Float {
        &self.q.re
    }

    /// `u = aω + bω′`.
    pub fn point(&self, loc: &TorsionLocation) -> ComplexHp {
        let prec = self.w().prec();
        let re = Float::with_val(prec, &loc.a) * self.w();
        let im = Float::with_val(prec, &loc.b) * &self.omega_prime.im;
        ComplexHp::new(re, im)
    }

    /// `z = e^{2πiu/ω}` after translating `u` by lattice vectors so that
    /// `|q|^{1/2} <= |z| <= |q|^{-1/2}`.
    fn reduced_z(&self, u: &ComplexHp) -> ComplexHp {
        let prec = u.prec();
        let mut re = Float::with_val(prec, &u.re / self.w());
        let mut im = Float::with_val(prec, &u.im / self.w());
        let shift = Float::with_val(prec, &im / self.t()).round();
        im -= shift * self.t();
        re -= Float::with_val(prec, re.floor_ref());
        let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
        let r = (-(Float::with_val(prec, &two_pi * &im))).exp();
        ComplexHp::from_polar(&r, &(two_pi * re))
    }

    /// Weierstrass `℘(u)` and `℘′(u)` from
    /// `℘ = (2πi/ω)²(1/12 − 2Σ_{n≥1} qⁿ/(1−qⁿ)² + Σ_{n∈ℤ} qⁿz/(1−qⁿz)²)` and
    /// `℘′ = (2πi/ω)³ Σ_{n∈ℤ} qⁿz(1+qⁿz)/(1−qⁿz)³`. Terms decay like
    /// `|q|^{n−1/2}`; the sums stop once that bound is below the tolerance.
    pub fn wp_pair(&self, u: &ComplexHp, ctx: &PrecisionCtx) -> Result<(ComplexHp, ComplexHp)> {
        let prec = ctx.prec();
        let u = ComplexHp::new(Float::with_val(prec, &u.re), Float::with_val(prec, &u.im));
        let z = self.reduced_z(&u);
        let one = ComplexHp::one(prec);
        let gap = (&one - &z).abs();
        let mut pole_tol = ctx.real(1);
        pole_tol >>= ctx.bits() / 2;
        if gap <= pole_tol {
            return Err(Error::LatticePole(format!(
                "u = {} + {}i",
                u.re.to_f64(),
                u.im.to_f64()
            )));
        }
        let zi = z.recip();
        // w/(1−w)² and w(1+w)/(1−w)³.
        let f = |w: &ComplexHp| -> (ComplexHp, ComplexHp) {
            let d = &one - w;
            let d2 = d.square();
            let a = w / &d2;
            let b = &(w * &(&one + w)) / &(&d2 * &d);
            (a, b)
        };
        let (mut s, mut t) = f(&z);
        let q = self.nome().clone();
        let tol = ctx.stop_tol();
        let slack = Float::with_val(prec, q.sqrt_ref());
        let mut qn = ctx.real(1);
        for _ in 1..=ctx.max_terms() {
            qn *= &q;
            let qc = ComplexHp::from_real(qn.clone());
            let (a1, b1) = f(&(&qc * &z));
            let (a2, b2) = f(&(&qc * &zi));
            let (a0, _) = f(&qc);
            s = &(&(&s + &a1) + &a2) - &a0.scale(&ctx.real(2));
            // For n < 0, with y = qⁿ/z: w(1+w)/(1−w)³ = −y(1+y)/(1−y)³.
            t = &(&t + &b1) - &b2;
            if Float::with_val(prec, &qn / &slack) <= tol {
                let k = ctx.pi() * 2u32 / self.w();
                let k2 = Float::with_val(prec, &k * &k);
                let k3 = Float::with_val(prec, &k2 * &k);
                let twelfth = ComplexHp::from_real(ctx.real(1) / 12u32);
                // (2πi/ω)² = −k², (2πi/ω)³ = −i k³.
                let p = (&s + &twelfth).scale(&-k2);
                let dp = ComplexHp::new(Float::with_val(prec, &t.im * &k3), -(t.re * k3));
                return Ok((p, dp));
            }
        }
        Err(convergence("Weierstrass q-series", ctx.max_terms()))
    }

    /// `e^{2πiu/ω}` at `u = aω + bω′`, i.e. `e^{2πia} q^b`, without reduction.
    pub fn location_z(&self, loc: &TorsionLocation) -> ComplexHp {
        let prec = self.w().prec();
        let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
        let theta = Float::with_val(prec, &loc.a) * &two_pi;
        let r = (Float::with_val(prec, &loc.b) * self.nome().clone().ln()).exp();
        let twice = Rational::from(&loc.a * 2u32);
        if twice.is_integer() {
            // e^{2πia} = ±1 exactly.
            let sign = if twice.numer().is_even() { r } else { -r };
            return ComplexHp::from_real(sign);
        }
        ComplexHp::from_polar(&r, &theta)
    }
}

/// `℘(u)` on `e`.
pub fn wp(e: &EllipticCurve, u: &ComplexHp, ctx: &PrecisionCtx) -> Result<ComplexHp> {
    periods(e, ctx)?.wp_pair(u, ctx).map(|(p, _)| p)
}

/// `℘′(u)` on `e`.
pub fn wp_prime(e: &EllipticCurve, u: &ComplexHp, ctx: &PrecisionCtx) -> Result<ComplexHp> {
    periods(e, ctx)?.wp_pair(u, ctx).map(|(_, d)| d)
}

/// `Σ_{n∈ℤ} D(z₀qⁿ)` for real `|q| < 1`, using `D(z₀q⁻ⁿ) = −D(qⁿ/z₀)`.
///
/// Small arguments satisfy `|D(w)| <= |w|(1 + |ln|w||)`; the sum stops once
/// that bound, summed geometrically over the remaining terms on both sides,
/// is below the tolerance.
pub fn lattice_dilog_sum(z0: &ComplexHp, q: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    if !q.is_finite() || q.clone().abs() >= 1 {
        return Err(convergence(
            format!("lattice sum needs |q| < 1, got {}", q.to_f64()),
            0,
        ));
    }
    if z0.is_zero() {
        return Err(Error::Domain("lattice sum base point is zero".into()));
    }
    let prec = ctx.prec();
    let dl = Dilog::new(ctx);
    let z0 = ComplexHp::new(Float::with_val(prec, &z0.re), Float::with_val(prec, &z0.im));
    let mut s = dl.bloch_wigner(&z0)?;
    if q.is_zero() || z0.im.is_zero() {
        return Ok(s);
    }
    let zi = z0.recip();
    let aq = Float::with_val(prec, q.abs_ref());
    let tail = Float::with_val(prec, 1) / (Float::with_val(prec, 1) - &aq);
    let tol = ctx.stop_tol();
    let bound = |w: &ComplexHp| -> Option<Float> {
        let r = w.abs();
        if r >= 1 {
            return None;
        }
        let l = Float::with_val(prec, r.ln_ref()).abs() + 1u32;
        Some(r * l * &tail)
    };
    let mut qn = ctx.real(1);
    for _ in 1..=ctx.max_terms() {
        qn *= q;
        let w1 = z0.scale(&qn);
        let w2 = zi.scale(&qn);
        s += dl.bloch_wigner(&w1)?;
        s -= dl.bloch_wigner(&w2)?;
        if let (Some(b1), Some(b2)) = (bound(&w1), bound(&w2)) {
            if b1 + b2 <= tol {
                return Ok(s);
            }
        }
    }
    Err(convergence(
        "elliptic dilogarithm lattice sum",
        ctx.max_terms(),
    ))
}

/// `D^E(P) = Σ_{n∈ℤ} D(e^{2πiu/ω} qⁿ)` at `u = aω + bω′`.
pub fn elliptic_dilog(
    e: &EllipticCurve,
    loc: &TorsionLocation,
    ctx: &PrecisionCtx,
) -> Result<Float> {
    let p = periods(e, ctx)?;
    elliptic_dilog_with(&p, loc, ctx)
}

/// As [`elliptic_dilog`] with precomputed periods.
pub fn elliptic_dilog_with(
    p: &Periods,
    loc: &TorsionLocation,
    ctx: &PrecisionCtx,
) -> Result<Float> {
    lattice_dilog_sum(&p.location_z(loc), p.nome(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(160).unwrap()
    }

    #[test]
    fn family_coefficients() {
        let e = curve_from_family(&r(25, 1), &r(2, 1)).unwrap();
        assert_eq!(
            (e.g2().clone(), e.g3().clone()),
            (r(26028, 1), r(-796824, 1))
        );
        let e = curve_from_family(&r(256, 1), &r(1, 2)).unwrap();
        assert_eq!(
            (e.g2().clone(), e.g3().clone()),
            (r(414828, 1), r(-51418584, 1))
        );
        let e = curve_from_family(&r(18, 1), &r(1, 1)).unwrap();
        assert_eq!((e.g2().clone(), e.g3().clone()), (r(1404, 1), r(-7560, 1)));
        assert!(is_on_curve(&e, &CurvePoint::affine(33, 324)));
        assert!(matches!(
            curve_from_family(&r(0, 1), &r(1, 1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            EllipticCurve::new(r(3, 1), r(1, 1)),
            Err(Error::SingularCurve)
        ));
    }

    #[test]
    fn membership_and_identity() {
        let e = curve_from_family(&r(25, 1), &r(2, 1)).unwrap();
        let p = CurvePoint::affine(87, 1080);
        assert!(is_on_curve(&e, &p));
        assert!(!is_on_curve(&e, &CurvePoint::affine(87, 1081)));
        assert!(is_on_curve(&e, &CurvePoint::Infinity));
        assert_eq!(point_add(&e, &p, &CurvePoint::Infinity), p);
        assert_eq!(point_add(&e, &p, &p.neg()), CurvePoint::Infinity);
        match point_mul(&e, 2, &p) {
            CurvePoint::Affine(_, y) => assert_eq!(y, 0),
            CurvePoint::Infinity => panic!("2P must be affine"),
        }
        assert_eq!(point_order(&e, &p, 12), Some(4));
        assert_eq!(point_order(&e, &CurvePoint::Infinity, 12), Some(1));
    }

    #[test]
    fn square_lattice() {
        let c = ctx();
        let e = EllipticCurve::new(r(4, 1), r(0, 1)).unwrap();
        let p = periods(&e, &c).unwrap();
        assert!(Float::with_val(c.prec(), &p.tau.im - 1u32).abs().to_f64() < 1e-40);
        assert!(p.tau.re.is_zero());
    }

    #[test]
    fn half_period_is_largest_root() {
        let c = ctx();
        let e = curve_from_family(&r(25, 1), &r(2, 1)).unwrap();
        let p = periods(&e, &c).unwrap();
        let half = p.point(&TorsionLocation::new(r(1, 2), 0));
        let (x, _) = p.wp_pair(&half, &c).unwrap();
        assert!(Float::with_val(c.prec(), &x.re - 51u32).abs().to_f64() < 1e-35);
        assert!(matches!(
            p.wp_pair(&p.point(&TorsionLocation::new(1, 0)), &c),
            Err(Error::LatticePole(_))
        ));
    }

    #[test]
    fn lattice_sum_trivial_cases() {
        let c = ctx();
        let q = c.real(0.1);
        assert_eq!(
            lattice_dilog_sum(&ComplexHp::from_real(c.real(0.3)), &q, &c).unwrap(),
            0
        );
        let catalan = c
            .parse("0.915965594177219015054603514932384110774")
            .unwrap();
        let d = lattice_dilog_sum(&ComplexHp::i(c.prec()), &c.real(0), &c).unwrap();
        assert!((d - catalan).abs().to_f64() < 1e-38);
        assert!(lattice_dilog_sum(&ComplexHp::i(c.prec()), &c.real(1), &c).is_err());
    }
}
