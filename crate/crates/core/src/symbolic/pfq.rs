use rug::Float;

use crate::error::{Error, Result};
use crate::numkernel::{is_nonpositive_integer, levin_sum, PrecisionCtx, SeriesValue};

/// Generalized hypergeometric series `pFq(tops; bottoms; z)`.
///
/// Terminating series are summed exactly term by term; `|z| < 1` is summed
/// directly with a geometric tail bound; `|z| = 1` with positive parameter
/// excess is summed with the Levin u-transform.
pub fn pfq_eval(tops: &[Float], bottoms: &[Float], z: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    pfq_series(tops, bottoms, z, ctx).map(|v| v.value)
}

/// As [`pfq_eval`], also reporting terms used and the error estimate.
pub fn pfq_series(
    tops: &[Float],
    bottoms: &[Float],
    z: &Float,
    ctx: &PrecisionCtx,
) -> Result<SeriesValue> {
    for b in bottoms {
        if is_nonpositive_integer(b) {
            return Err(Error::Pole(format!(
                "bottom parameter {} is a non-positive integer",
                b.to_f64()
            )));
        }
    }
    let prec = ctx.prec();
    let terminating = tops
        .iter()
        .filter(|a| is_nonpositive_integer(a))
        .map(|a| (-a.to_f64()) as usize)
        .min();
    if let Some(m) = terminating {
        let mut t = Float::with_val(prec, 1);
        let mut s = Float::with_val(prec, 1);
        for n in 0..m {
            t = next_term(&t, tops, bottoms, z, n, prec);
            s += &t;
        }
        return Ok(SeriesValue {
            value: s,
            terms: m + 1,
            err_est: ctx.real(0),
            accelerated: false,
        });
    }
    if z.is_zero() {
        return Ok(SeriesValue {
            value: ctx.real(1),
            terms: 1,
            err_est: ctx.real(0),
            accelerated: false,
        });
    }
    let az = Float::with_val(prec, z.abs_ref());
    let p = tops.len();
    let q = bottoms.len();
    if p > q + 1 || (p == q + 1 && az > 1) {
        return Err(Error::DivergentSeries(format!(
            "{p}F{q} at |z| = {} diverges",
            az.to_f64()
        )));
    }
    if p <= q || az < 1 {
        return direct_sum(tops, bottoms, z, &az, ctx);
    }
    let excess = bottoms
        .iter()
        .fold(Float::with_val(prec, 0), |acc, b| acc + b)
        - tops.iter().fold(Float::with_val(prec, 0), |acc, a| acc + a);
    if excess <= 0 {
        return Err(Error::DivergentSeries(format!(
            "parameter excess {} is not positive on |z| = 1",
            excess.to_f64()
        )));
    }
    let mut state: Option<(usize, Float)> = None;
    levin_sum(
        |m, work| {
            let wp = work.prec();
            let t = match state.take() {
                Some((j, t)) if j + 1 == m => next_term(&t, tops, bottoms, z, j, wp),
                _ => {
                    let mut t = Float::with_val(wp, 1);
                    for j in 0..m {
                        t = next_term(&t, tops, bottoms, z, j, wp);
                    }
                    t
                }
            };
            state = Some((m, t.clone()));
            Ok(t)
        },
        ctx,
    )
}

/// `t_{n+1}` from `t_n`.
fn next_term(
    t: &Float,
    tops: &[Float],
    bottoms: &[Float],
    z: &Float,
    n: usize,
    prec: u32,
) -> Float {
    let mut r = Float::with_val(prec, t * z);
    for a in tops {
        r *= Float::with_val(prec, a + n as u64);
    }
    for b in bottoms {
        r /= Float::with_val(prec, b + n as u64);
    }
    r / (n as u64 + 1)
}

fn direct_sum(
    tops: &[Float],
    bottoms: &[Float],
    z: &Float,
    az: &Float,
    ctx: &PrecisionCtx,
) -> Result<SeriesValue> {
    let prec = ctx.prec();
    let tol = ctx.stop_tol();
    let mut t = Float::with_val(prec, 1);
    let mut s = Float::with_val(prec, 1);
    for n in 0..ctx.max_terms() {
        let next = next_term(&t, tops, bottoms, z, n, prec);
        // Once the term ratio has settled below 1, the tail is bounded by a
        // geometric series with ratio max(current ratio, |z|) when p = q + 1,
        // and by the current ratio when p <= q (ratios then decrease).
        let ratio = if t.is_zero() {
            Float::with_val(prec, 0)
        } else {
            Float::with_val(prec, &next / &t).abs()
        };
        t = next;
        s += &t;
        let rho = if tops.len() == bottoms.len() + 1 {
            ratio.max(az)
        } else {
            ratio
        };
        if rho < 1 && n > 0 {
            let tail =
                Float::with_val(prec, t.abs_ref()) * &rho / (Float::with_val(prec, 1) - &rho);
            let scale = s.clone().abs().max(&Float::with_val(prec, 1));
            if tail <= Float::with_val(prec, &tol * &scale) {
                return Ok(SeriesValue {
                    value: s,
                    terms: n + 2,
                    err_est: tail,
                    accelerated: false,
                });
            }
        }
    }
    Err(Error::convergence("hypergeometric series", ctx.max_terms()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(192).unwrap()
    }

    #[test]
    fn trivial_at_zero() {
        let c = ctx();
        let h = c.real(0.5);
        assert_eq!(
            pfq_eval(&[h.clone(), h], &[c.real(1)], &c.real(0), &c).unwrap(),
            1
        );
    }

    #[test]
    fn telescoping_4f3_at_one() {
        // term = 2/((n+1)(n+2)).
        let c = ctx();
        let tops = [c.real(1), c.real(1), c.real(2), c.real(2)];
        let bottoms = [c.real(2), c.real(2), c.real(3)];
        let v = pfq_eval(&tops, &bottoms, &c.real(1), &c).unwrap();
        assert!((v - 2u32).abs().to_f64() < 1e-50);
    }

    #[test]
    fn divergent_cases() {
        let c = ctx();
        let h = c.real(0.5);
        assert!(matches!(
            pfq_eval(&[h.clone(), h.clone()], &[c.real(1)], &c.real(1), &c),
            Err(Error::DivergentSeries(_))
        ));
        assert!(matches!(
            pfq_eval(&[h.clone(), h.clone()], &[c.real(1)], &c.real(1.5), &c),
            Err(Error::DivergentSeries(_))
        ));
        assert!(matches!(
            pfq_eval(&[h], &[c.real(-2)], &c.real(0.5), &c),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn gauss_2f1_at_half() {
        // 2F1(1/2, 1/2; 1; 1/2) = Γ(1/4)²/(2π^{3/2}).
        let c = ctx();
        let h = c.real(0.5);
        let v = pfq_eval(&[h.clone(), h.clone()], &[c.real(1)], &h, &c).unwrap();
        let g14 = c.real(0.25).gamma();
        let expect = g14.square() / (c.pi() * 2u32 * c.pi().sqrt());
        assert!((v - expect).abs().to_f64() < 1e-50);
        let neg = pfq_eval(&[c.real(-3), c.real(2)], &[c.real(1)], &c.real(2), &c).unwrap();
        // Σ_{n<=3} (-3)_n (2)_n / (n!)^2 2^n = 1 − 12 + 36 − 32.
        assert_eq!(neg, -7);
    }
}
