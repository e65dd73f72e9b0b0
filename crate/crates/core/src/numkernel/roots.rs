use rug::Float;

use super::{ComplexHp, PrecisionCtx};
use crate::error::{convergence, Error, Result};

/// All complex roots of `Σ coeffs[i]·xⁱ` (lowest degree first), by
/// Durand–Kerner iteration followed by Newton polishing.
pub fn poly_roots(coeffs: &[ComplexHp], ctx: &PrecisionCtx) -> Result<Vec<ComplexHp>> {
    let prec = ctx.prec() + 32;
    let mut c: Vec<ComplexHp> = coeffs
        .iter()
        .map(|z| ComplexHp::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im)))
        .collect();
    while c.last().is_some_and(|z| z.is_zero()) {
        c.pop();
    }
    let deg = c.len().checked_sub(1).ok_or(Error::DivideByZero)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg].clone();
    let monic: Vec<ComplexHp> = c.iter().map(|z| z / &lead).collect();

    // Cauchy bound for the initial circle.
    let mut bound = Float::with_val(prec, 0);
    for z in &monic[..deg] {
        bound = bound.max(&z.abs());
    }
    bound += 1u32;
    let seed = ComplexHp::new(Float::with_val(prec, 0.4), Float::with_val(prec, 0.9));
    let mut roots: Vec<ComplexHp> = (0..deg)
        .map(|i| seed.powi(i as i64).scale(&bound))
        .collect();

    let mut eps = Float::with_val(prec, 1);
    eps >>= prec - 16;
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step = Float::with_val(prec, 0);
        for i in 0..deg {
            let p = horner(&monic, &roots[i]);
            let mut d = ComplexHp::one(prec);
            for j in 0..deg {
                if i != j {
                    d = &d * &(&roots[i] - &roots[j]);
                }
            }
            if d.is_zero() {
                continue;
            }
            let step = &p / &d;
            let rel = step.abs() / roots[i].abs().max(&Float::with_val(prec, 1));
            max_step = max_step.max(&rel);
            roots[i] = &roots[i] - &step;
        }
        if max_step <= eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(convergence("polynomial root iteration", 2000));
    }
    let deriv: Vec<ComplexHp> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, z)| z.scale(&Float::with_val(prec, i as u32)))
        .collect();
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = horner(&deriv, r);
            if d.is_zero() {
                break;
            }
            let step = &horner(&monic, r) / &d;
            *r = &*r - &step;
        }
    }
    Ok(roots
        .into_iter()
        .map(|z| {
            ComplexHp::new(
                Float::with_val(ctx.prec(), z.re),
                Float::with_val(ctx.prec(), z.im),
            )
        })
        .collect())
}

/// Real roots of a real polynomial, sorted in decreasing order. Fails with
/// `ComplexRootsUnsupported` if any root has a nonnegligible imaginary part.
pub fn real_roots(coeffs: &[Float], ctx: &PrecisionCtx) -> Result<Vec<Float>> {
    let c: Vec<ComplexHp> = coeffs
        .iter()
        .map(|x| ComplexHp::from_real(x.clone()))
        .collect();
    let roots = poly_roots(&c, ctx)?;
    let mut tol = Float::with_val(ctx.prec(), 1);
    tol >>= ctx.prec() / 2;
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let scale = r.abs().max(&Float::with_val(ctx.prec(), 1));
        if r.im.clone().abs() > Float::with_val(ctx.prec(), &tol * &scale) {
            return Err(Error::ComplexRootsUnsupported);
        }
        out.push(r.re);
    }
    out.sort_by(|a, b| b.partial_cmp(a).expect("finite roots"));
    Ok(out)
}

fn horner(c: &[ComplexHp], x: &ComplexHp) -> ComplexHp {
    let mut acc = c[c.len() - 1].clone();
    for z in c[..c.len() - 1].iter().rev() {
        acc = &(&acc * x) + z;
    }
    acc
}
