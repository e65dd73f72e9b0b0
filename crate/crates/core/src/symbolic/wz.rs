use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::hyperterm::{term_cross_ratio, term_shift_ratio, HyperTerm};
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use crate::error::Result;

/// Two hypergeometric terms claimed to satisfy
/// `F(n+1,k) − F(n,k) = G(n,k+1) − G(n,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WzPair {
    pub name: String,
    pub f: HyperTerm,
    pub g: HyperTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStatus {
    Pass,
    Fail,
}

/// Outcome of [`wz_verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub name: String,
    pub status: CertStatus,
    /// `F(n+1,k)/F(n,k)`.
    pub q1: RatFunc,
    /// `G(n,k)/F(n,k)`.
    pub q2: RatFunc,
    /// `G(n,k+1)/F(n,k)`.
    pub q3: RatFunc,
    /// Numerator of `Q1 − 1 − Q3 + Q2` when it is not zero.
    pub witness: Option<MultiPoly>,
    /// Random rational points at which the identity was also evaluated.
    pub random_points: usize,
    /// Whether the pointwise evaluations agree with the structural verdict.
    pub random_agrees: bool,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.status == CertStatus::Pass && self.random_agrees
    }
}

const RANDOM_POINTS: usize = 20;

/// Checks the WZ equation exactly.
///
/// Divides both sides by `F(n,k)`; the pair passes iff `Q1 − 1 − Q3 + Q2`
/// reduces to the zero rational function. As a secondary check each quotient
/// is evaluated separately at 20 seeded random rational points.
pub fn wz_verify(pair: &WzPair) -> Result<CertificateReport> {
    let q1 = term_shift_ratio(&pair.f, 1, 0)?;
    let q2 = term_cross_ratio(&pair.g, &pair.f)?;
    let q3 = term_shift_ratio(&pair.g, 0, 1)?.mul(&q2);
    let total = q1.sub(&RatFunc::one()).sub(&q3).add(&q2);
    let status = if total.is_zero() {
        CertStatus::Pass
    } else {
        CertStatus::Fail
    };
    let witness = (!total.is_zero()).then(|| total.num().clone());

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7a11);
    let mut used = 0;
    let mut all_zero = true;
    let mut attempts = 0;
    while used < RANDOM_POINTS && attempts < 20 * RANDOM_POINTS {
        attempts += 1;
        let n = Rational::from((rng.gen_range(-500i64..500), rng.gen_range(1i64..60)));
        let k = Rational::from((rng.gen_range(-500i64..500), rng.gen_range(1i64..60)));
        let (Some(a), Some(b), Some(c)) = (q1.eval(&n, &k), q2.eval(&n, &k), q3.eval(&n, &k))
        else {
            continue;
        };
        used += 1;
        if a - 1u32 - c + b != 0 {
            all_zero = false;
        }
    }
    let random_agrees = used > 0 && all_zero == total.is_zero();
    Ok(CertificateReport {
        name: pair.name.clone(),
        status,
        q1,
        q2,
        q3,
        witness,
        random_points: used,
        random_agrees,
    })
}
