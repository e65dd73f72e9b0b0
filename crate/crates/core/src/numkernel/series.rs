use rug::ops::Pow;
use rug::{Float, Integer};

use super::PrecisionCtx;
use crate::error::{convergence, Error, Result};

/// Result of summing an infinite series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: Float,
    /// Terms consumed.
    pub terms: usize,
    /// Estimated absolute error (tail bound or successive-transform difference).
    pub err_est: Float,
    /// `true` if a sequence transformation was needed.
    pub accelerated: bool,
}

/// Bits added on top of the caller's precision while forming Levin
/// transforms, which cancel heavily.
const LEVIN_BOOST: u32 = 160;
const LEVIN_STEP: usize = 8;
const LEVIN_MAX_ORDER: usize = 400;

/// Levin u-transform (β = 1) of the first `k + 1` terms, starting at index 0.
///
/// `terms[m]` is the m-th summand; all values are assumed to share one
/// precision. Returns `None` if a remainder estimate vanishes.
pub fn levin_u(terms: &[Float]) -> Option<Float> {
    let k = terms.len().checked_sub(1)?;
    let prec = terms[0].prec();
    let beta = 1u64;
    let mut partial = Float::with_val(prec, 0);
    let mut num = Float::with_val(prec, 0);
    let mut den = Float::with_val(prec, 0);
    let last = Float::with_val(prec, beta + k as u64);
    for (j, t) in terms.iter().enumerate() {
        partial += t;
        if t.is_zero() {
            return None;
        }
        let omega = Float::with_val(prec, t * (beta + j as u64));
        let ratio = Float::with_val(prec, beta + j as u64) / &last;
        let weight = ratio.pow(k.saturating_sub(1) as u32)
            * Float::with_val(prec, Integer::from(Integer::binomial_u(k as u32, j as u32)))
            / &omega;
        let weight = if j % 2 == 1 { -weight } else { weight };
        num += Float::with_val(prec, &weight * &partial);
        den += weight;
    }
    if den.is_zero() {
        return None;
    }
    Some(num / den)
}

/// Sums `Σ_{m>=0} term(m)` with the Levin u-transform, for slowly convergent
/// series with logarithmic or alternating tails.
///
/// `term` receives the index and the (boosted) context it must compute at.
/// Increases the transform order in steps until two successive estimates
/// agree within `ctx.stop_tol()` (relative to `max(1, |S|)`).
pub fn levin_sum<F>(mut term: F, ctx: &PrecisionCtx) -> Result<SeriesValue>
where
    F: FnMut(usize, &PrecisionCtx) -> Result<Float>,
{
    let work = ctx.boosted(LEVIN_BOOST);
    let budget = ctx.max_terms().min(LEVIN_MAX_ORDER + 1);
    let tol = ctx.stop_tol();
    let mut terms: Vec<Float> = Vec::new();
    let mut prev: Option<Float> = None;
    let mut best_err: Option<Float> = None;
    let mut stagnant = 0;
    let mut k = LEVIN_STEP;
    while k < budget {
        while terms.len() <= k {
            let t = term(terms.len(), &work)?;
            if !t.is_finite() {
                return Err(Error::Domain("series term is not finite".into()));
            }
            terms.push(Float::with_val(work.prec(), t));
        }
        // An exactly terminating series needs no transform.
        if terms[terms.len() - LEVIN_STEP..]
            .iter()
            .all(|t| t.is_zero())
        {
            let mut s = Float::with_val(work.prec(), 0);
            for t in &terms {
                s += t;
            }
            return Ok(SeriesValue {
                value: Float::with_val(ctx.prec(), s),
                terms: terms.len(),
                err_est: ctx.real(0),
                accelerated: false,
            });
        }
        let Some(est) = levin_u(&terms) else {
            return Err(Error::Domain("Levin transform hit a zero term".into()));
        };
        if let Some(p) = &prev {
            let err = Float::with_val(work.prec(), &est - p).abs();
            let scale = est.clone().abs().max(&Float::with_val(work.prec(), 1));
            if err <= Float::with_val(work.prec(), &tol * &scale) {
                return Ok(SeriesValue {
                    value: Float::with_val(ctx.prec(), est),
                    terms: terms.len(),
                    err_est: Float::with_val(ctx.prec(), err),
                    accelerated: true,
                });
            }
            match &best_err {
                Some(b) if err >= *b => {
                    stagnant += 1;
                    if stagnant >= 4 {
                        return Err(convergence("Levin transform stagnated", terms.len()));
                    }
                }
                _ => {
                    stagnant = 0;
                    best_err = Some(err);
                }
            }
        }
        prev = Some(est);
        k += LEVIN_STEP;
    }
    Err(convergence("Levin transform", terms.len()))
}

/// Sums `Σ_{m>=0} term(m)` directly, for series whose terms eventually
/// decrease at least geometrically with ratio `<= ratio_bound < 1`.
///
/// Stops once the tail bound `|t_m| · r/(1−r)` is below `ctx.stop_tol()`
/// relative to `max(1, |S|)`.
pub fn geometric_sum<F>(mut term: F, ratio_bound: &Float, ctx: &PrecisionCtx) -> Result<SeriesValue>
where
    F: FnMut(usize) -> Result<Float>,
{
    let prec = ctx.prec();
    if *ratio_bound >= 1 || *ratio_bound < 0 {
        return Err(Error::DivergentSeries(format!(
            "term ratio bound {} is not below 1",
            ratio_bound.to_f64()
        )));
    }
    let r = Float::with_val(prec, ratio_bound);
    let factor = Float::with_val(prec, &r / Float::with_val(prec, 1 - &r));
    let tol = ctx.stop_tol();
    let mut sum = Float::with_val(prec, 0);
    for m in 0..ctx.max_terms() {
        let t = term(m)?;
        sum += &t;
        let tail = Float::with_val(prec, t.abs() * &factor);
        let scale = sum.clone().abs().max(&Float::with_val(prec, 1));
        if m > 0 && tail <= Float::with_val(prec, &tol * &scale) {
            return Ok(SeriesValue {
                value: sum,
                terms: m + 1,
                err_est: tail,
                accelerated: false,
            });
        }
    }
    Err(convergence("geometric series", ctx.max_terms()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn basel_by_levin() {
        let ctx = PrecisionCtx::new(200).unwrap();
        let v = levin_sum(
            |m, c| Ok(c.real(1) / Float::with_val(c.prec(), (m as u64 + 1) * (m as u64 + 1))),
            &ctx,
        )
        .unwrap();
        assert!(v.accelerated);
        assert!(close(&v.value, &(ctx.pi().square() / 6u32), 1e-55));
    }

    #[test]
    fn alternating_log2_by_levin() {
        let ctx = PrecisionCtx::new(200).unwrap();
        let v = levin_sum(
            |m, c| {
                let t = c.real(1) / (m as u64 + 1);
                Ok(if m % 2 == 0 { t } else { -t })
            },
            &ctx,
        )
        .unwrap();
        assert!(close(&v.value, &ctx.ln2(), 1e-55));
    }

    #[test]
    fn geometric_tail_bound() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let half = ctx.real(0.5);
        let v = geometric_sum(|m| Ok(ctx.real(0.5).pow(m as u32)), &half, &ctx).unwrap();
        assert!(close(&v.value, &ctx.real(2), 1e-36));
        assert!(geometric_sum(|_| Ok(ctx.real(1)), &ctx.real(1), &ctx).is_err());
    }
}
