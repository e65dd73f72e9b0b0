//! Theta functions, the cubic eta quotient, q-inversion in signatures 2 and 3,
//! the J/β relations and the degree-2 modular relation.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{convergence, Error, Result};
use crate::numkernel::{poly_roots, ComplexHp, PrecisionCtx};
use crate::symbolic::pfq_eval;

fn check_nome(q: &Float) -> Result<()> {
    if q.is_finite() && q.clone().abs() < 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "nome must satisfy |q| < 1, got {}",
            q.to_f64()
        )))
    }
}

fn check_beta(beta: &Float) -> Result<()> {
    if *beta > 0 && *beta < 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "beta must lie in (0, 1), got {}",
            beta.to_f64()
        )))
    }
}

/// `φ(q) = Σ_{n∈ℤ} q^{n²}`.
pub fn phi_theta(q: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    check_nome(q)?;
    let prec = ctx.prec();
    let tol = ctx.stop_tol();
    let mut s = Float::with_val(prec, 1);
    // q^{n²} = q^{(n-1)²} · q^{2n-1}.
    let mut t = Float::with_val(prec, 1);
    let mut step = Float::with_val(prec, q);
    let q2 = Float::with_val(prec, q * q);
    for _ in 1..=ctx.max_terms() {
        t *= &step;
        step *= &q2;
        s += Float::with_val(prec, &t * 2u32);
        if t.clone().abs() <= tol {
            return Ok(s);
        }
    }
    Err(convergence("theta series", ctx.max_terms()))
}

/// `x(q) = 1 + 27q ∏_{n≥1} ((1 − q^{3n})/(1 − qⁿ))^{12}`.
pub fn xq_product(q: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    check_nome(q)?;
    let prec = ctx.prec();
    let tol = ctx.stop_tol();
    let mut prod = Float::with_val(prec, 1);
    let mut qn = Float::with_val(prec, 1);
    for _ in 1..=ctx.max_terms() {
        qn *= q;
        if qn.clone().abs() <= tol {
            // Remaining factors are 1 + O(12|q|ⁿ).
            let x = Float::with_val(prec, q * 27u32) * prod;
            return Ok(x + 1u32);
        }
        let q3n = Float::with_val(prec, qn.clone().square() * &qn);
        let f = (Float::with_val(prec, 1) - q3n) / (Float::with_val(prec, 1) - &qn);
        prod *= f.pow(12u32);
    }
    Err(convergence("eta quotient product", ctx.max_terms()))
}

/// `exp(−c · F(1−β)/F(β))` with `F = ₂F₁(a, 1−a; 1; ·)`.
fn q_inverse(beta: &Float, a: &Float, c: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    check_beta(beta)?;
    let b = Float::with_val(ctx.prec(), 1 - a);
    let one = [ctx.real(1)];
    let params = [a.clone(), b];
    let comp = Float::with_val(ctx.prec(), 1 - beta);
    let num = pfq_eval(&params, &one, &comp, ctx)?;
    let den = pfq_eval(&params, &one, beta, ctx)?;
    Ok((-(num / den) * c).exp())
}

/// Signature-2 nome: `q = exp(−π ₂F₁(½,½;1;1−β)/₂F₁(½,½;1;β))`, so that
/// `√(1−β) = φ²(−q)/φ²(q)`.
pub fn q_from_beta2(beta: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    q_inverse(beta, &ctx.real(0.5), &ctx.pi(), ctx)
}

/// Signature-3 nome: `q = exp(−(2π/√3) ₂F₁(⅓,⅔;1;1−β)/₂F₁(⅓,⅔;1;β))`.
pub fn q3_from_beta(beta: &Float, ctx: &PrecisionCtx) -> Result<Float> {
    let a = ctx.real(1) / 3u32;
    let c = ctx.pi() * 2u32 / ctx.real(3).sqrt();
    q_inverse(beta, &a, &c, ctx)
}

fn check_beta_exact(beta: &Rational) -> Result<()> {
    if *beta == 0 || *beta == 1 {
        Err(Error::Domain(format!("beta = {beta} is a pole of J")))
    } else {
        Ok(())
    }
}

/// `J = (1 + 14β + β²)³ / (108β(1−β)⁴)`, equal to `g₂³/(g₂³ − 27g₃²)`.
pub fn j_from_beta2(beta: &Rational) -> Result<Rational> {
    check_beta_exact(beta)?;
    let b = beta.clone();
    let num = Rational::from(1 + Rational::from(&b * 14) + Rational::from(&b * &b)).pow(3);
    let one_minus = Rational::from(1 - &b);
    let den = Rational::from(&b * 108) * one_minus.pow(4);
    Ok(num / den)
}

/// Signature-3 analogue: `J = (1 + 8β)³ / (64β(1−β)³)`.
pub fn j3_from_beta(beta: &Rational) -> Result<Rational> {
    check_beta_exact(beta)?;
    let b = beta.clone();
    let num = Rational::from(1 + Rational::from(&b * 8)).pow(3);
    let one_minus = Rational::from(1 - &b);
    let den = Rational::from(&b * 64) * one_minus.pow(3);
    Ok(num / den)
}

/// Left side of `27αβ(1−α)(1−β) − (α + β − 2αβ)³ = 0`.
pub fn modular_relation(alpha: &Float, beta: &Float) -> Float {
    let prec = alpha.prec().max(beta.prec());
    let ab = Float::with_val(prec, alpha * beta);
    let one_a = Float::with_val(prec, 1 - alpha);
    let one_b = Float::with_val(prec, 1 - beta);
    let lhs = Float::with_val(prec, &ab * 27u32) * one_a * one_b;
    let s = Float::with_val(prec, alpha + beta) - ab * 2u32;
    lhs - s.pow(3u32)
}

/// Roots `(α, γ)` of the degree-2 modular relation at `β` (signature 3) with
/// `x(√q) = 1/(1−α)` and `x(q²) = 1/(1−γ)`, where `q = q3_from_beta(β)`.
///
/// The relation is solved as a cubic in the unknown; candidates are matched
/// against the eta-quotient product at `√q` and `q²`, and the remaining root
/// is discarded.
pub fn modular_poly_solve(beta: &Float, ctx: &PrecisionCtx) -> Result<(Float, Float)> {
    check_beta(beta)?;
    let prec = ctx.prec();
    let b = Float::with_val(prec, beta);
    // (β + cα)³ with c = 1 − 2β, and 27β(1−β)(α − α²).
    let c = Float::with_val(prec, 1 - Float::with_val(prec, &b * 2u32));
    let k = Float::with_val(prec, &b * 27u32) * Float::with_val(prec, 1 - &b);
    let b2 = Float::with_val(prec, &b * &b);
    let c2 = Float::with_val(prec, &c * &c);
    let mut coeffs = vec![
        -Float::with_val(prec, &b2 * &b),
        Float::with_val(prec, &k - Float::with_val(prec, &b2 * &c) * 3u32),
        -Float::with_val(prec, &k + Float::with_val(prec, &b * &c2) * 3u32),
        -(c2 * &c),
    ];
    while coeffs.last().is_some_and(|x| x.is_zero()) {
        coeffs.pop();
    }
    let cx: Vec<ComplexHp> = coeffs.into_iter().map(ComplexHp::from_real).collect();
    let roots = poly_roots(&cx, ctx)?;

    let q = q3_from_beta(&b, ctx)?;
    let target = |x: Float| Float::with_val(prec, 1) - Float::with_val(prec, 1) / x;
    let alpha_t = target(xq_product(&Float::with_val(prec, q.sqrt_ref()), ctx)?);
    let gamma_t = target(xq_product(&Float::with_val(prec, &q * &q), ctx)?);

    let mut tol = ctx.real(1);
    tol >>= ctx.bits() / 2;
    let pick = |t: &Float, what: &str| -> Result<Float> {
        roots
            .iter()
            .filter(|r| r.im.clone().abs() <= tol)
            .map(|r| (Float::with_val(prec, &r.re - t).abs(), r.re.clone()))
            .filter(|(d, _)| *d <= tol)
            .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"))
            .map(|(_, r)| r)
            .ok_or_else(|| {
                Error::RootIdentification(format!(
                    "no root of the modular relation matches {what} = {}",
                    t.to_f64()
                ))
            })
    };
    Ok((
        pick(&alpha_t, "1 - 1/x(sqrt q)")?,
        pick(&gamma_t, "1 - 1/x(q^2)")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(192).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn theta_at_zero_and_tau_i() {
        let c = ctx();
        assert_eq!(phi_theta(&c.real(0), &c).unwrap(), 1);
        let q = (-c.pi()).exp();
        let expect = c.pi().root(4) / c.real(0.75).gamma();
        assert!(close(&phi_theta(&q, &c).unwrap(), &expect, 1e-55));
    }

    #[test]
    fn eta_quotient_at_zero() {
        let c = ctx();
        assert_eq!(xq_product(&c.real(0), &c).unwrap(), 1);
        assert!(xq_product(&c.real(1), &c).is_err());
    }

    #[test]
    fn symmetric_betas() {
        let c = ctx();
        let h = c.real(0.5);
        assert!(close(
            &q_from_beta2(&h, &c).unwrap(),
            &(-c.pi()).exp(),
            1e-55
        ));
        let e = (-(c.pi() * 2u32) / c.real(3).sqrt()).exp();
        assert!(close(&q3_from_beta(&h, &c).unwrap(), &e, 1e-55));
        assert!(matches!(
            q_from_beta2(&c.real(1), &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exact_j_values() {
        assert_eq!(
            j3_from_beta(&Rational::from((5, 32))).unwrap(),
            Rational::from((256, 135))
        );
        assert!(matches!(
            j_from_beta2(&Rational::new()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            j3_from_beta(&Rational::from(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn relation_is_symmetric_and_vanishes_at_origin() {
        let c = ctx();
        assert_eq!(modular_relation(&c.real(0), &c.real(0)), 0);
        let (a, b) = (c.real(0.3), c.real(0.7));
        assert!(close(
            &modular_relation(&a, &b),
            &modular_relation(&b, &a),
            1e-50
        ));
    }
}
