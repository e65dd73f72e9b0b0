//! Exact rationals, configurable-precision reals and complexes, and the
//! special functions the rest of the crate consumes.
//!
//! Every routine takes an explicit [`PrecisionCtx`]; nothing is cached across
//! calls, so all functions are pure and safe to call from many threads.

mod bernoulli;
mod complex;
mod dilog;
mod gamma;
mod roots;
mod series;
mod zeta;

use rug::float::Constant;
use rug::{Assign, Float};

use crate::error::{Error, Result};

pub use bernoulli::bernoulli_numbers;
pub use complex::ComplexHp;
pub use dilog::{bloch_wigner, li2_complex, Dilog};
pub use gamma::gamma_real;
pub use roots::{poly_roots, real_roots};
pub use series::{geometric_sum, levin_sum, levin_u, SeriesValue};
pub use zeta::{agm, zeta_int};

/// Configurable-precision real value. The precision is carried by the value;
/// arithmetic between values built from the same context stays at that
/// precision.
pub type RealHp = Float;

/// Exact arbitrary-size rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = rug::Rational;

/// Extra bits carried by every computation on top of [`PrecisionCtx::bits`].
pub const GUARD_BITS: u32 = 32;

/// Smallest accepted working precision.
pub const MIN_BITS: u32 = 64;

/// Default series-term budget.
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Working precision, comparison tolerance and series budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionCtx {
    bits: u32,
    target_tol: Float,
    max_terms: usize,
}

impl PrecisionCtx {
    /// A context with `bits` of mantissa and a target tolerance of `2^-bits`.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidContext(format!(
                "bits must be at least {MIN_BITS}, got {bits}"
            )));
        }
        let mut target_tol = Float::with_val(bits + GUARD_BITS, 1);
        target_tol >>= bits;
        Ok(Self {
            bits,
            target_tol,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_target_tol(mut self, tol: &Float) -> Result<Self> {
        if !tol.is_finite() || *tol <= 0 {
            return Err(Error::InvalidContext(format!(
                "target tolerance must be positive, got {tol}"
            )));
        }
        self.target_tol = Float::with_val(self.prec(), tol);
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidContext("max_terms must be positive".into()));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    /// Same tolerance and budget, `extra` more bits of working precision.
    pub fn boosted(&self, extra: u32) -> Self {
        let bits = self.bits + extra;
        Self {
            bits,
            target_tol: Float::with_val(bits + GUARD_BITS, &self.target_tol),
            max_terms: self.max_terms,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn target_tol(&self) -> &Float {
        &self.target_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Internal working precision: `bits + GUARD_BITS`.
    pub fn prec(&self) -> u32 {
        self.bits + GUARD_BITS
    }

    /// A value at working precision.
    pub fn real<T>(&self, val: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.prec(), val)
    }

    pub fn rational(&self, q: &Rational) -> Float {
        Float::with_val(self.prec(), q)
    }

    /// Parses a decimal literal such as `"1e-40"` at working precision.
    pub fn parse(&self, s: &str) -> Result<Float> {
        let parsed = Float::parse(s)
            .map_err(|e| Error::InvalidContext(format!("cannot parse `{s}`: {e}")))?;
        Ok(Float::with_val(self.prec(), parsed))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), Constant::Pi)
    }

    pub fn ln2(&self) -> Float {
        Float::with_val(self.prec(), Constant::Log2)
    }

    /// Unit roundoff of the working precision, `2^-prec`.
    pub fn eps(&self) -> Float {
        let mut e = Float::with_val(self.prec(), 1);
        e >>= self.prec();
        e
    }

    /// Absolute threshold at which series truncation stops (relative to a
    /// value of order one): `target_tol / 2^16`, never below a few ulps.
    pub fn stop_tol(&self) -> Float {
        let mut t = Float::with_val(self.prec(), &self.target_tol);
        t >>= 16;
        let floor = self.eps() << 2u32;
        if t < floor {
            floor
        } else {
            t
        }
    }

    /// `|a - b| <= target_tol`.
    pub fn approx_eq(&self, a: &Float, b: &Float) -> bool {
        let d = Float::with_val(self.prec(), a - b).abs();
        d <= self.target_tol
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self::new(256).expect("256 bits is a valid precision")
    }
}

/// Decimal rendering with as many digits as `bits` carries. Deterministic for
/// a given value and precision.
pub fn to_decimal(x: &Float, bits: u32) -> String {
    let digits = ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize;
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Short decimal rendering for notes and text output.
pub fn to_short(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(6))
}

/// `true` if `x` is an integer `<= 0`.
pub fn is_nonpositive_integer(x: &Float) -> bool {
    x.is_integer() && *x <= 0
}
