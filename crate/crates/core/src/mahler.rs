//! Mahler measures `m(α) = m(α + x + 1/x + y + 1/y)` and
//! `n(α) = m(x³ + y³ + 1 − αxy)`: binomial series, Jensen-reduced quadrature
//! oracles, the Rodriguez-Villegas series for `n` and the ratio
//! `s = m(4/r)/m(4r)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{geometric_sum, levin_sum, PrecisionCtx, SeriesValue};

/// Absolute tolerance of the quadrature oracles.
pub const QUAD_TOL: f64 = 1e-10;

/// Subinterval budget of the quadrature oracles.
pub const QUAD_MAX_INTERVALS: usize = 20_000;

/// `true` if a series with term ratio below `rho < 1` reaches the stopping
/// tolerance by direct summation within half the term budget:
/// `rhoᴺ/(1 − rho) <= tol` needs `N >= (ln tol + ln(1 − rho))/ln rho`.
/// Otherwise (including `rho = 1`) the Levin transform is used.
pub(crate) fn direct_feasible(rho: &Float, ctx: &PrecisionCtx) -> bool {
    let r = rho.to_f64();
    if r >= 1.0 {
        return false;
    }
    if r <= 0.0 {
        return true;
    }
    let ln_tol = ctx.stop_tol().ln().to_f64();
    let n = (ln_tol + (1.0 - r).ln()) / r.ln();
    n < (ctx.max_terms() / 2) as f64
}

/// Sums `Σ_{n>=start} c_n ρⁿ w(n)` where `c_n = (2n choose n)²/16ⁿ` and
/// `w` is a rational weight, directly when that fits the term budget and by
/// the Levin transform otherwise.
fn central_binomial_sum(
    rho: &Float,
    start: u64,
    weight: impl Fn(u64, u32) -> Float,
    ctx: &PrecisionCtx,
) -> Result<SeriesValue> {
    // c_{n+1} = c_n ((2n+1)/(2n+2))².
    let step = |c: &Float, n: u64| -> Float {
        let f = Float::with_val(c.prec(), 2 * n + 1) / (2 * n + 2);
        Float::with_val(c.prec(), c * &f) * f
    };
    let start_c = |prec: u32| -> Float {
        let mut c = Float::with_val(prec, 1);
        for n in 0..start {
            c = step(&c, n);
        }
        c
    };
    if direct_feasible(rho, ctx) {
        let prec = ctx.prec();
        let mut c = start_c(prec);
        let mut p = Float::with_val(prec, rho).pow(start as u32);
        let mut n = start;
        return geometric_sum(
            |m| {
                if m > 0 {
                    c = step(&c, n);
                    p *= rho;
                    n += 1;
                }
                Ok(Float::with_val(prec, &c * &p) * weight(n, prec))
            },
            rho,
            ctx,
        );
    }
    let mut state: Option<(usize, Float, Float)> = None;
    levin_sum(
        |m, work| {
            let wp = work.prec();
            let (c, p) = match state.take() {
                Some((j, c, p)) if j + 1 == m => (step(&c, start + j as u64), p * rho),
                _ => {
                    let mut c = start_c(wp);
                    let mut p = Float::with_val(wp, rho).pow(start as u32);
                    for j in 0..m {
                        c = step(&c, start + j as u64);
                        p *= rho;
                    }
                    (c, p)
                }
            };
            let t = Float::with_val(wp, &c * &p) * weight(start + m as u64, wp);
            state = Some((m, c, p));
            Ok(t)
        },
        ctx,
    )
}

/// `m(α)` from the binomial expansions:
/// `m(4/r) = log(4/r) − Σ_{n>=1} (2n choose n)² (r/4)^{2n}/(2n)` for `α >= 4`
/// and `m(4r) = 4Σ_{n>=0} (2n choose n)² (r/4)^{2n+1}/(2n+1)` for `α < 4`.
/// At `α = 4` the tails decay like `1/n²` and the Levin transform is used.
pub fn m_series(alpha: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    m_series_value(alpha, ctx).map(|v| v.value)
}

/// As [`m_series`], reporting terms used.
pub fn m_series_value(alpha: &Float, ctx: &PrecisionCtx) -> Result<SeriesValue> {
    if !alpha.is_finite() || *alpha <= 0 {
        return Err(Error::Domain(format!(
            "m_series needs alpha > 0, got {}",
            alpha.to_f64()
        )));
    }
    let prec = ctx.prec();
    if *alpha >= 4 {
        let r = Float::with_val(prec, 4u32) / alpha;
        let rho = Float::with_val(prec, &r * &r);
        let s = central_binomial_sum(&rho, 1, |n, p| Float::with_val(p, 1) / (2 * n), ctx)?;
        let value = Float::with_val(prec, alpha.ln_ref()) - s.value;
        Ok(SeriesValue { value, ..s })
    } else {
        let r = Float::with_val(prec, alpha / 4u32);
        let rho = Float::with_val(prec, &r * &r);
        let s = central_binomial_sum(&rho, 0, |n, p| Float::with_val(p, 1) / (2 * n + 1), ctx)?;
        let value = s.value * r;
        Ok(SeriesValue { value, ..s })
    }
}

/// `s = m(4/r)/m(4r)` for `r ∈ (0, 1]`.
pub fn s_ratio(r: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    if !r.is_finite() || *r <= 0 || *r > 1 {
        return Err(Error::Domain(format!(
            "s_ratio needs r in (0, 1], got {}",
            r.to_f64()
        )));
    }
    let big = m_series(&(ctx.real(4) / r), ctx)?;
    let small = m_series(&Float::with_val(ctx.prec(), r * 4u32), ctx)?;
    Ok(big / small)
}

/// `Σ_{n>=1} (3n)!/(n·n!³) xⁿ` for `|27x| < 1`. Terms behave like
/// `(27x)ⁿ/n²`; ratios too close to 1 for direct summation within the term
/// budget are handled with the Levin transform.
pub fn rv_series(x: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    rv_series_value(x, ctx).map(|v| v.value)
}

/// As [`rv_series`], reporting terms used.
pub fn rv_series_value(x: &Float, ctx: &PrecisionCtx) -> Result<SeriesValue> {
    let prec = ctx.prec();
    let rho = Float::with_val(prec, x * 27u32).abs();
    if !rho.is_finite() || rho >= 1 {
        return Err(Error::DivergentSeries(format!(
            "rv_series needs |27x| < 1, got {}",
            rho.to_f64()
        )));
    }
    if x.is_zero() {
        return Ok(SeriesValue {
            value: ctx.real(0),
            terms: 0,
            err_est: ctx.real(0),
            accelerated: false,
        });
    }
    // a_n = (3n)!/n!³: a_{n+1} = a_n (3n+1)(3n+2)(3n+3)/(n+1)³.
    let step = |a: &Float, n: u64| -> Float {
        let num = (3 * n + 1) * (3 * n + 2) * 3;
        let den = (n + 1) * (n + 1);
        Float::with_val(a.prec(), a * num) / den
    };
    if direct_feasible(&rho, ctx) {
        let mut a = ctx.real(1);
        let mut p = ctx.real(1);
        return geometric_sum(
            |m| {
                let n = m as u64;
                a = step(&a, n);
                p *= x;
                Ok(Float::with_val(prec, &a * &p) / (n + 1))
            },
            &rho,
            ctx,
        );
    }
    let mut state: Option<(usize, Float, Float)> = None;
    levin_sum(
        |m, work| {
            let wp = work.prec();
            let (a, p) = match state.take() {
                Some((j, a, p)) if j + 1 == m => (step(&a, m as u64), p * x),
                _ => {
                    let mut a = Float::with_val(wp, 1);
                    let mut p = Float::with_val(wp, 1);
                    for j in 0..=m {
                        a = step(&a, j as u64);
                        p *= x;
                    }
                    (a, p)
                }
            };
            let t = Float::with_val(wp, &a * &p) / (m as u64 + 1);
            state = Some((m, a, p));
            Ok(t)
        },
        ctx,
    )
}

/// `m(α)` by Jensen's formula in `x`: with `u(t) = α + 2cos(2πt)`, the inner
/// measure is `arccosh(|u|/2)` for `|u| >= 2` and 0 otherwise. Integrated over
/// `[0, ½]` (the integrand is symmetric under `t → 1 − t`), split at the
/// `|u| = 2` crossings where the integrand has square-root singularities.
pub fn m_quadrature(alpha: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    let a = alpha.to_f64();
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!(
            "m_quadrature needs alpha >= 0, got {a}"
        )));
    }
    let f = move |t: f64| {
        let u = (a + 2.0 * (2.0 * PI * t).cos()).abs();
        if u > 2.0 {
            (u / 2.0).acosh()
        } else {
            0.0
        }
    };
    let mut cuts = vec![0.0, 0.5];
    for target in [2.0, -2.0] {
        let c = (target - a) / 2.0;
        if c.abs() < 1.0 {
            cuts.push(c.acos() / (2.0 * PI));
        }
    }
    let v = integrate(f, &cuts, QUAD_TOL / 2.0)?;
    Ok(ctx.real(2.0 * v))
}

/// Roots of `x³ + px + c` by Cardano's formula, polished by Newton steps.
fn depressed_cubic_roots(p: Complex64, c: Complex64) -> [Complex64; 3] {
    let disc = (c * c / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -c / 2.0 + disc;
    if u3.norm() < (-c / 2.0 - disc).norm() {
        u3 = -c / 2.0 - disc;
    }
    let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        return out;
    }
    let u = u3.cbrt();
    let mut uk = u;
    for r in &mut out {
        *r = uk - p / (3.0 * uk);
        uk *= w;
    }
    for r in &mut out {
        for _ in 0..3 {
            let f = *r * *r * *r + p * *r + c;
            let d = 3.0 * *r * *r + p;
            if d.norm() == 0.0 {
                break;
            }
            *r -= f / d;
        }
    }
    out
}

/// `n(α)` by Jensen's formula in `x` for the monic cubic
/// `x³ − αy·x + (1 + y³)`, `y = e^{2πit}`: the integrand is
/// `Σ log⁺|xᵢ(t)|`. Integrated over `[0, ½]` (conjugate symmetry), split at
/// the points where a root crosses the unit circle, located by bisection on
/// a grid.
pub fn n_quadrature(alpha: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    let a = alpha.to_f64();
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!(
            "n_quadrature needs alpha >= 0, got {a}"
        )));
    }
    let roots = move |t: f64| {
        let y = Complex64::from_polar(1.0, 2.0 * PI * t);
        depressed_cubic_roots(-a * y, 1.0 + y * y * y)
    };
    let f = move |t: f64| roots(t).iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>();
    let outside = move |t: f64| roots(t).iter().filter(|r| r.norm() > 1.0).count();

    const GRID: usize = 1024;
    let mut cuts = vec![0.0, 0.5];
    let h = 0.5 / GRID as f64;
    for i in 0..GRID {
        let (mut lo, mut hi) = (i as f64 * h, (i + 1) as f64 * h);
        let k_lo = outside(lo);
        if k_lo == outside(hi) {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if outside(mid) == k_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cuts.push(0.5 * (lo + hi));
    }
    let v = integrate(f, &cuts, QUAD_TOL / 2.0)?;
    Ok(ctx.real(2.0 * v))
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err.total_cmp(&o.err) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WEIGHTS[7];
    let mut g = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod 7/15 over the union of `[cuts[i], cuts[i+1]]`
/// (cuts are sorted here), bisecting the worst piece until the summed error
/// estimate is below `tol`.
fn integrate(f: impl Fn(f64) -> f64, cuts: &[f64], tol: f64) -> Result<f64> {
    let mut cuts = cuts.to_vec();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut heap = BinaryHeap::new();
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (value, e) = gk15(&f, w[0], w[1]);
        err += e;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            value,
            err: e,
        });
    }
    while err > tol {
        if heap.len() >= QUAD_MAX_INTERVALS {
            return Err(Error::QuadratureBudgetExceeded(format!(
                "{} subintervals, error estimate {err:.3e} above {tol:.1e}",
                heap.len()
            )));
        }
        let p = heap.pop().expect("nonempty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        err += e1 + e2 - p.err;
        heap.push(Piece {
            a: p.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            value: v2,
            err: e2,
        });
    }
    // The running error total is tracked incrementally; the value is summed once.
    Ok(heap.iter().map(|p| p.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(192).unwrap()
    }

    #[test]
    fn gauss_kronrod_polynomial_exactness() {
        let v = integrate(|x| x.powi(10) - 3.0 * x * x, &[0.0, 1.0], 1e-14).unwrap();
        assert!((v - (1.0 / 11.0 - 1.0)).abs() < 1e-14);
        let v = integrate(|x| x.sqrt(), &[0.0, 1.0], 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn cubic_roots() {
        let p = Complex64::new(-7.0, 0.0);
        let c = Complex64::new(6.0, 0.0);
        let mut r: Vec<f64> = depressed_cubic_roots(p, c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn m_at_four_both_branches() {
        // m(4) = 4G/π.
        let c = ctx();
        let expect = c
            .parse("1.166243616123275120553537825873579675456")
            .unwrap();
        let below = m_series(&c.real(4), &c).unwrap();
        assert!((below - &expect).abs().to_f64() < 1e-38);
        let r = c.real(1);
        let s =
            central_binomial_sum(&r, 0, |n, p| Float::with_val(p, 1) / (2 * n + 1), &c).unwrap();
        assert!((s.value - expect).abs().to_f64() < 1e-38);
    }

    #[test]
    fn rv_trivial_cases() {
        let c = ctx();
        assert_eq!(rv_series(&c.real(0), &c).unwrap(), 0);
        assert!(matches!(
            rv_series(&c.real(1), &c),
            Err(Error::DivergentSeries(_))
        ));
        // First term at small x is 6x.
        let x = c.real(1e-30);
        let v = rv_series(&x, &c).unwrap();
        assert!((v / &x - 6u32).abs().to_f64() < 1e-25);
    }

    #[test]
    fn s_ratio_domain() {
        let c = ctx();
        assert!(s_ratio(&c.real(0), &c).is_err());
        assert!(s_ratio(&c.real(1.5), &c).is_err());
        assert!((s_ratio(&c.real(1), &c).unwrap() - 1u32).abs().to_f64() < 1e-40);
    }
}
