//! Series driven by a term recurrence, summed directly or by the Levin
//! transform depending on how fast the tail decays.

use rug::Float;

use crate::error::Result;
use crate::mahler::direct_feasible;
use crate::numkernel::{geometric_sum, levin_sum, PrecisionCtx, SeriesValue};

/// Decay of a series tail.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Tail {
    /// Term ratios eventually stay below the given bound `< 1`.
    Geometric(f64),
    /// Terms decay like a power of `1/n`.
    Algebraic,
}

/// `Σ_{n>=start} term(s_n, n)` where `init(prec)` is the state at `start` and
/// `step(s, n)` moves it from `n` to `n + 1` at the state's own precision.
pub(crate) fn stepped_sum<S, I, A, T>(
    start: u64,
    init: I,
    step: A,
    term: T,
    tail: Tail,
    ctx: &PrecisionCtx,
) -> Result<SeriesValue>
where
    I: Fn(u32) -> S,
    A: Fn(&mut S, u64),
    T: Fn(&S, u64) -> Float,
{
    if let Tail::Geometric(bound) = tail {
        let rho = ctx.real(bound);
        if direct_feasible(&rho, ctx) {
            let mut s = init(ctx.prec());
            let mut n = start;
            return geometric_sum(
                |m| {
                    if m > 0 {
                        step(&mut s, n);
                        n += 1;
                    }
                    Ok(term(&s, n))
                },
                &rho,
                ctx,
            );
        }
    }
    let mut state: Option<(usize, S)> = None;
    levin_sum(
        |m, work| {
            let s = match state.take() {
                Some((j, mut s)) if j + 1 == m => {
                    step(&mut s, start + j as u64);
                    s
                }
                _ => {
                    let mut s = init(work.prec());
                    for j in 0..m {
                        step(&mut s, start + j as u64);
                    }
                    s
                }
            };
            let n = start + m as u64;
            let t = term(&s, n);
            state = Some((m, s));
            Ok(t)
        },
        ctx,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_and_levin_paths_agree_with_closed_forms() {
        let ctx = PrecisionCtx::new(128).unwrap();
        // Σ_{n>=1} 2^{-n} = 1.
        let g = stepped_sum(
            1,
            |p| Float::with_val(p, 0.5),
            |s, _| *s /= 2u32,
            |s, _| s.clone(),
            Tail::Geometric(0.5),
            &ctx,
        )
        .unwrap();
        assert!(!g.accelerated);
        assert!((g.value - 1u32).abs().to_f64() < 1e-35);
        // Σ_{n>=1} 1/n² = π²/6.
        let l = stepped_sum(
            1,
            |p| Float::with_val(p, 0),
            |_, _| {},
            |s, n| Float::with_val(s.prec(), 1) / (n * n),
            Tail::Algebraic,
            &ctx,
        )
        .unwrap();
        assert!(l.accelerated);
        let basel = ctx.pi().square() / 6u32;
        assert!((l.value - basel).abs().to_f64() < 1e-35);
    }
}
